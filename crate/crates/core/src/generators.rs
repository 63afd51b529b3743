//! Generator sets of synchronized systems and their loop graphs.
//!
//! For a synchronizing word α the return words are the blocks vα with αvα
//! admissible and α nowhere inside v. Their lengths decide mixing (gcd 1)
//! and give the period of the cyclic cover; threaded through a single base
//! vertex they form the loop graph whose first-return series feeds the
//! zeta machinery.

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::graphs::{DiGraph, LabeledGraph, SUBSET_CAP};
use crate::shift::{admissible_words_upto, visit_words, Language, Matcher, Symbol, Word};

/// Lengths start, start + step, start + 2·step, ... each with multiplicity one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Progression {
    pub start: u64,
    pub step: u64,
}

/// Loop lengths of a loop graph: a finite multiset plus arithmetic
/// progressions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoopSpec {
    pub finite_lengths: Vec<u64>,
    pub progressions: Vec<Progression>,
}

impl LoopSpec {
    pub fn new(mut finite_lengths: Vec<u64>, progressions: Vec<Progression>) -> Result<Self> {
        if finite_lengths.contains(&0) {
            return Err(Error::input("loop lengths must be at least 1"));
        }
        if progressions.iter().any(|p| p.start == 0 || p.step == 0) {
            return Err(Error::input("progressions need start >= 1 and step >= 1"));
        }
        finite_lengths.sort_unstable();
        Ok(LoopSpec {
            finite_lengths,
            progressions,
        })
    }

    pub fn finite(lengths: &[u64]) -> Result<Self> {
        Self::new(lengths.to_vec(), Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.finite_lengths.is_empty() && self.progressions.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.progressions.is_empty()
    }

    /// f_n, the number of loops of length n, for n = 0..=order.
    pub fn first_return_counts(&self, order: usize) -> Vec<u64> {
        let mut f = vec![0u64; order + 1];
        for &l in &self.finite_lengths {
            if let Some(c) = f.get_mut(l as usize) {
                *c += 1;
            }
        }
        for p in &self.progressions {
            let mut l = p.start as usize;
            while l <= order {
                f[l] += 1;
                l += p.step as usize;
            }
        }
        f
    }

    /// gcd of all loop lengths; 0 for the empty spec.
    pub fn gcd(&self) -> u64 {
        let mut g = self.finite_lengths.iter().fold(0u64, |g, &l| g.gcd(&l));
        for p in &self.progressions {
            g = g.gcd(&p.start).gcd(&p.step);
        }
        g
    }

    /// Loop lengths up to `max_len`, ascending, with multiplicity.
    pub fn lengths_upto(&self, max_len: u64) -> Vec<u64> {
        let f = self.first_return_counts(max_len as usize);
        f.iter()
            .enumerate()
            .flat_map(|(l, &c)| std::iter::repeat_n(l as u64, c as usize))
            .collect()
    }

    /// The loop graph truncated to loops of length ≤ `max_len`: vertex 0 is
    /// the base and each loop of length l adds l − 1 private vertices.
    pub fn to_graph(&self, max_len: u64) -> DiGraph {
        let mut n = 1;
        let mut edges = Vec::new();
        for l in self.lengths_upto(max_len) {
            let mut prev = 0;
            for _ in 1..l {
                edges.push((prev, n));
                prev = n;
                n += 1;
            }
            edges.push((prev, 0));
        }
        DiGraph::new(n, edges).expect("loop graph is well formed")
    }
}

/// The return words vα of a synchronizing word α, listed up to a horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub alpha: Word,
    /// Members vα, ordered by length then lexicographically.
    pub returns: Vec<Word>,
    /// Every member of length ≤ horizon is listed.
    pub horizon: usize,
    /// The whole set is finite and listed.
    pub complete: bool,
    /// The conventional empty generator ε is always a member.
    pub includes_empty: bool,
    /// Certified description of the full length multiset, when a finite
    /// presentation proves one (finite sets, or eventually periodic lengths
    /// of unit multiplicity).
    pub structure: Option<LoopSpec>,
}

impl GeneratorSet {
    /// Builds a set from an explicit list, checking the member shape.
    pub fn from_list(
        alpha: Word,
        mut returns: Vec<Word>,
        horizon: usize,
        complete: bool,
    ) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::input("alpha must be a nonempty word"));
        }
        for w in &returns {
            if !w.ends_with(&alpha) {
                return Err(Error::input(format!(
                    "generator {w} does not end with alpha"
                )));
            }
            let v = &w[..w.len() - alpha.len()];
            if crate::shift::contains_subword(v, &alpha) {
                return Err(Error::input(format!("alpha occurs inside generator {w}")));
            }
        }
        returns.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        returns.dedup();
        let horizon = if complete {
            horizon.max(returns.last().map_or(0, |w| w.len()))
        } else {
            horizon
        };
        let structure = complete.then(|| LoopSpec {
            finite_lengths: returns.iter().map(|w| w.len() as u64).collect(),
            progressions: Vec::new(),
        });
        Ok(GeneratorSet {
            alpha,
            returns,
            horizon,
            complete,
            includes_empty: true,
            structure,
        })
    }

    pub fn lengths(&self) -> Vec<u64> {
        self.returns.iter().map(|w| w.len() as u64).collect()
    }

    pub fn gcd_at_horizon(&self) -> u64 {
        self.returns
            .iter()
            .fold(0u64, |g, w| g.gcd(&(w.len() as u64)))
    }

    /// Presentation of the coded system generated by the listed words: one
    /// labeled cycle per generator through a base vertex.
    pub fn to_labeled_graph(&self, alphabet: &crate::shift::Alphabet) -> Result<LabeledGraph> {
        let mut n = 1;
        let mut edges = Vec::new();
        for w in &self.returns {
            let mut prev = 0;
            for (i, &a) in w.iter().enumerate() {
                let next = if i + 1 == w.len() {
                    0
                } else {
                    n += 1;
                    n - 1
                };
                edges.push((prev, next, a));
                prev = next;
            }
        }
        LabeledGraph::new(alphabet.clone(), n, edges)
    }
}

/// Lists 𝔖_α = {vα : αvα ∈ B(X), α ⊄ v} up to length `horizon`.
///
/// When the language has a finite presentation the full set is analysed on a
/// product automaton (subset state × occurrence matcher for α): a finite set
/// is listed completely, and an infinite one whose length counts are
/// eventually periodic 0/1 gets a certified [`LoopSpec`].
pub fn extract_generators<L: Language + ?Sized>(
    lang: &L,
    alpha: &Word,
    horizon: usize,
) -> Result<GeneratorSet> {
    if alpha.is_empty() {
        return Err(Error::input("alpha must be a nonempty word"));
    }
    lang.alphabet().check(alpha)?;
    if !lang.accepts(alpha) {
        return Err(Error::input("alpha is not admissible"));
    }
    let matcher = Matcher::new(alpha);
    let mut horizon = horizon;
    let mut complete = false;
    let mut structure = None;

    if let Some(g) = lang.presentation() {
        let prod = ReturnAutomaton::build(&g, alpha, &matcher)?;
        if prod.is_finite() {
            complete = true;
            horizon = horizon.max(alpha.len() + prod.states.len());
        } else {
            structure = prod.progression_structure(alpha.len());
        }
    }

    let returns = list_returns(lang, alpha, &matcher, horizon);
    if complete {
        let lengths: Vec<u64> = returns.iter().map(|w| w.len() as u64).collect();
        structure = Some(LoopSpec::new(lengths, Vec::new())?);
    }
    Ok(GeneratorSet {
        alpha: alpha.clone(),
        returns,
        horizon,
        complete,
        includes_empty: true,
        structure,
    })
}

fn list_returns<L: Language + ?Sized>(
    lang: &L,
    alpha: &[Symbol],
    matcher: &Matcher,
    horizon: usize,
) -> Vec<Word> {
    let mut out = Vec::new();
    let mut buf = alpha.to_vec();
    walk(lang, alpha, matcher, horizon, &mut buf, 0, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    return out;

    // buf = α·v with α ⊄ v and α·v admissible
    fn walk<L: Language + ?Sized>(
        lang: &L,
        alpha: &[Symbol],
        matcher: &Matcher,
        horizon: usize,
        buf: &mut Vec<Symbol>,
        state: usize,
        out: &mut Vec<Word>,
    ) {
        let v_len = buf.len() - alpha.len();
        if v_len + alpha.len() > horizon {
            return;
        }
        let mut closed = buf.clone();
        closed.extend_from_slice(alpha);
        if lang.accepts(&closed) {
            out.push(Word(closed[alpha.len()..].to_vec()));
        }
        if v_len + 1 + alpha.len() > horizon {
            return;
        }
        for a in lang.alphabet().symbols() {
            let next = matcher.step(state, a);
            if next == matcher.len() {
                continue;
            }
            buf.push(a);
            if lang.accepts(buf) {
                walk(lang, alpha, matcher, horizon, buf, next, out);
            }
            buf.pop();
        }
    }
}

/// Deterministic automaton reading v after α: state = (subset of presentation
/// vertices reached by αv, matcher state for α inside v). Accepting states
/// are those where α can follow. Trimmed to states that can still accept.
struct ReturnAutomaton {
    states: Vec<(Vec<usize>, usize)>,
    delta: Vec<Vec<usize>>,
    accepting: Vec<bool>,
}

impl ReturnAutomaton {
    fn build(g: &LabeledGraph, alpha: &[Symbol], matcher: &Matcher) -> Result<Self> {
        let start_set = g.step_word(&g.live_vertices(), alpha);
        let mut index: HashMap<(Vec<usize>, usize), usize> = HashMap::new();
        let mut states = vec![(start_set.clone(), 0)];
        index.insert((start_set, 0), 0);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        let mut raw_delta: HashMap<usize, Vec<usize>> = HashMap::new();
        while let Some(i) = queue.pop_front() {
            let (set, k) = states[i].clone();
            let mut succ = Vec::new();
            for a in g.alphabet_symbols() {
                let t = g.step(&set, a);
                let k2 = matcher.step(k, a);
                if t.is_empty() || k2 == matcher.len() {
                    continue;
                }
                let key = (t, k2);
                let j = match index.get(&key) {
                    Some(&j) => j,
                    None => {
                        if states.len() >= SUBSET_CAP {
                            return Err(Error::budget("generator automaton exceeded subset cap"));
                        }
                        let j = states.len();
                        index.insert(key.clone(), j);
                        states.push(key);
                        queue.push_back(j);
                        j
                    }
                };
                succ.push(j);
            }
            raw_delta.insert(i, succ);
        }
        for i in 0..states.len() {
            delta.push(raw_delta.remove(&i).unwrap_or_default());
        }
        let accepting: Vec<bool> = states
            .iter()
            .map(|(set, _)| !g.step_word(set, alpha).is_empty())
            .collect();

        // keep states that can reach acceptance
        let mut rev = vec![Vec::new(); states.len()];
        for (i, succ) in delta.iter().enumerate() {
            for &j in succ {
                rev[j].push(i);
            }
        }
        let mut useful = accepting.clone();
        let mut queue: VecDeque<usize> = (0..states.len()).filter(|&i| accepting[i]).collect();
        while let Some(j) = queue.pop_front() {
            for &i in &rev[j] {
                if !useful[i] {
                    useful[i] = true;
                    queue.push_back(i);
                }
            }
        }
        let mut pos = vec![usize::MAX; states.len()];
        let kept: Vec<usize> = (0..states.len()).filter(|&i| useful[i]).collect();
        for (n, &i) in kept.iter().enumerate() {
            pos[i] = n;
        }
        Ok(ReturnAutomaton {
            states: kept.iter().map(|&i| states[i].clone()).collect(),
            delta: kept
                .iter()
                .map(|&i| {
                    delta[i]
                        .iter()
                        .filter(|&&j| pos[j] != usize::MAX)
                        .map(|&j| pos[j])
                        .collect()
                })
                .collect(),
            accepting: kept.iter().map(|&i| accepting[i]).collect(),
        })
    }

    /// Finitely many accepted words iff the trimmed automaton is acyclic.
    fn is_finite(&self) -> bool {
        let edges = self
            .delta
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&j| (i, j)))
            .collect();
        let g = DiGraph::new(self.states.len(), edges).expect("valid");
        let comps = g.strongly_connected_components();
        !comps
            .components
            .iter()
            .any(|c| g.component_is_irreducible(c))
    }

    /// Number of accepted v of each length 0..=max.
    fn counts(&self, max: usize) -> Vec<u128> {
        let mut out = Vec::with_capacity(max + 1);
        if self.states.is_empty() {
            return vec![0; max + 1];
        }
        let mut v = vec![0u128; self.states.len()];
        v[0] = 1;
        for step in 0..=max {
            out.push(
                v.iter()
                    .zip(&self.accepting)
                    .filter(|(_, &a)| a)
                    .map(|(c, _)| *c)
                    .fold(0u128, u128::saturating_add),
            );
            if step == max {
                break;
            }
            let mut nv = vec![0u128; self.states.len()];
            for (i, succ) in self.delta.iter().enumerate() {
                for &j in succ {
                    nv[j] = nv[j].saturating_add(v[i]);
                }
            }
            v = nv;
        }
        out
    }

    /// Fits member-length counts to "finite part, then eventually periodic
    /// 0/1" and proves the fit. The counts satisfy a linear recurrence of
    /// order ≤ P (automaton size) and the model one of order ≤ preperiod +
    /// period, so agreement on that many leading terms is agreement forever.
    fn progression_structure(&self, alpha_len: usize) -> Option<LoopSpec> {
        let p = self.states.len();
        if p == 0 || p > 512 {
            return None;
        }
        let max_pre = 2 * p + 8;
        let k = 4 * p + 16;
        // counts[j] = number of members of length j + alpha_len
        let counts = self.counts(k);
        for d in 1..=p {
            for pre in 0..=max_pre {
                if pre + d + p > k {
                    break;
                }
                let tail_ok = (pre..=k).all(|j| counts[j] <= 1)
                    && (pre..=k - d).all(|j| counts[j] == counts[j + d]);
                if !tail_ok {
                    continue;
                }
                let mut finite = Vec::new();
                for (j, &c) in counts.iter().enumerate().take(pre) {
                    finite.extend(std::iter::repeat_n((j + alpha_len) as u64, c as usize));
                }
                let progressions = (pre..pre + d)
                    .filter(|&j| counts[j] == 1)
                    .map(|j| Progression {
                        start: (j + alpha_len) as u64,
                        step: d as u64,
                    })
                    .collect();
                return LoopSpec::new(finite, progressions).ok();
            }
        }
        None
    }
}

impl LabeledGraph {
    fn alphabet_symbols(&self) -> std::ops::Range<Symbol> {
        Language::alphabet(self).symbols()
    }
}

/// The loop graph realizing a generator set: one loop of length |w| through
/// the base vertex per generator w.
pub fn generators_to_loop_graph(s: &GeneratorSet) -> LoopSpec {
    match &s.structure {
        Some(spec) => spec.clone(),
        None => LoopSpec {
            finite_lengths: s.lengths(),
            progressions: Vec::new(),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixingVerdict {
    Mixing,
    NotMixing {
        period: u64,
    },
    /// gcd > 1 among the listed members; longer ones might lower it.
    Inconclusive {
        gcd_at_horizon: u64,
    },
}

/// Mixing iff the gcd of generator lengths is 1.
pub fn mixing_gcd_test(s: &GeneratorSet) -> Result<MixingVerdict> {
    if s.returns.is_empty() {
        return Err(Error::input(
            "generator set has no members besides the empty word",
        ));
    }
    let g = s.gcd_at_horizon();
    if g == 1 {
        return Ok(MixingVerdict::Mixing);
    }
    Ok(match &s.structure {
        Some(spec) => match spec.gcd() {
            1 => MixingVerdict::Mixing,
            d => MixingVerdict::NotMixing { period: d },
        },
        None => MixingVerdict::Inconclusive { gcd_at_horizon: g },
    })
}

/// Period p of the cyclic cover: the gcd of all generator lengths.
pub fn cyclic_cover_period(s: &GeneratorSet) -> Result<u64> {
    match &s.structure {
        Some(spec) if !spec.is_empty() => Ok(spec.gcd()),
        Some(_) => Err(Error::input(
            "generator set has no members besides the empty word",
        )),
        None => Err(Error::precondition(format!(
            "generator set is horizon-bounded; gcd at horizon {} is {}",
            s.horizon,
            s.gcd_at_horizon()
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SvglOutcome {
    /// Least transition length that works for every tested pair.
    Witness { transition_length: usize },
    /// This pair admits no connecting word of length ≤ max_N.
    NoWitness { left: Word, right: Word },
}

/// Bounded search for a transition length: for all admissible u, v with
/// 1 ≤ |u|, |v| ≤ `word_horizon`, the least N ≤ `max_n` such that uwv is
/// admissible for some |w| ≤ N. Evidence only, never a proof.
pub fn svgl_witness<L: Language + ?Sized>(
    lang: &L,
    max_n: usize,
    word_horizon: usize,
) -> SvglOutcome {
    let words: Vec<Word> = admissible_words_upto(lang, word_horizon)
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect();
    let mut worst = 0;
    for u in &words {
        // ext[k]: admissible u·w with |w| = k
        let ext: Vec<Vec<Vec<Symbol>>> = (0..=max_n)
            .map(|k| {
                let mut bucket = Vec::new();
                visit_words(lang, u, k, &mut |uw| bucket.push(uw.to_vec()));
                bucket
            })
            .collect();
        for v in &words {
            let gap = ext.iter().position(|bucket| {
                bucket.iter().any(|uw| {
                    let mut full = uw.clone();
                    full.extend_from_slice(v);
                    lang.accepts(&full)
                })
            });
            match gap {
                Some(k) => worst = worst.max(k),
                None => {
                    return SvglOutcome::NoWitness {
                        left: u.clone(),
                        right: v.clone(),
                    }
                }
            }
        }
    }
    SvglOutcome::Witness {
        transition_length: worst,
    }
}

/// `gaps[n]` is true when some w with |w| = n makes αwα admissible.
pub fn gap_lengths<L: Language + ?Sized>(lang: &L, alpha: &[Symbol], max_n: usize) -> Vec<bool> {
    if let Some(g) = lang.presentation() {
        let mut out = Vec::with_capacity(max_n + 1);
        let mut frontier: Vec<Vec<usize>> = vec![g.step_word(&g.live_vertices(), alpha)];
        frontier.retain(|s| !s.is_empty());
        for n in 0..=max_n {
            out.push(frontier.iter().any(|s| !g.step_word(s, alpha).is_empty()));
            if n == max_n {
                break;
            }
            let mut next: Vec<Vec<usize>> = frontier
                .iter()
                .flat_map(|s| {
                    g.alphabet_symbols()
                        .map(|a| g.step(s, a))
                        .collect::<Vec<_>>()
                })
                .filter(|t| !t.is_empty())
                .collect();
            next.sort();
            next.dedup();
            frontier = next;
        }
        return out;
    }
    (0..=max_n)
        .map(|n| {
            let mut found = false;
            visit_words(lang, alpha, n, &mut |aw| {
                if !found {
                    let mut full = aw.to_vec();
                    full.extend_from_slice(alpha);
                    found = lang.accepts(&full);
                }
            });
            found
        })
        .collect()
}

/// Bounded, independent evidence for the three mixing-type properties,
/// tested on connections from α back to α.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixingEvidence {
    /// Least N ≤ horizon with every gap length in N..=N+window realized.
    pub mixing_from: Option<usize>,
    /// Longest run of consecutive realized gap lengths ≤ horizon.
    pub longest_gap_run: usize,
    /// The run reaches `window + 1`, standing in for a thick set.
    pub weak_mixing: bool,
    /// For every m ≤ `max_multiple`, a realized gap length that is a
    /// positive multiple of m.
    pub totally_irreducible: bool,
    pub horizon: usize,
}

pub fn mixing_evidence<L: Language + ?Sized>(
    lang: &L,
    alpha: &[Symbol],
    horizon: usize,
    window: usize,
    max_multiple: usize,
) -> MixingEvidence {
    let gaps = gap_lengths(lang, alpha, horizon + window);
    let mixing_from = (0..=horizon).find(|&n| (n..=n + window).all(|m| gaps[m]));
    let mut longest = 0;
    let mut run = 0;
    for &g in &gaps[..=horizon] {
        run = if g { run + 1 } else { 0 };
        longest = longest.max(run);
    }
    let totally_irreducible = (1..=max_multiple).all(|m| (m..=horizon).step_by(m).any(|n| gaps[n]));
    MixingEvidence {
        mixing_from,
        longest_gap_run: longest,
        weak_mixing: longest > window,
        totally_irreducible,
        horizon,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{Alphabet, SftPresentation};

    fn even() -> LabeledGraph {
        let ab = Alphabet::new(["0", "1"]).unwrap();
        LabeledGraph::new(ab, 2, vec![(0, 0, 0), (0, 1, 1), (1, 0, 1)]).unwrap()
    }

    fn cycle3() -> LabeledGraph {
        let ab = Alphabet::new(["a", "b", "c"]).unwrap();
        LabeledGraph::new(ab, 3, vec![(0, 1, 0), (1, 2, 1), (2, 0, 2)]).unwrap()
    }

    fn golden() -> SftPresentation {
        SftPresentation::parse(&["0", "1"], &["11"]).unwrap()
    }

    #[test]
    fn even_shift_generators() {
        let s = extract_generators(&even(), &Word(vec![0]), 9).unwrap();
        assert_eq!(s.lengths(), vec![1, 3, 5, 7, 9]);
        assert!(!s.complete);
        let spec = generators_to_loop_graph(&s);
        assert_eq!(spec.progressions, vec![Progression { start: 1, step: 2 }]);
        assert!(spec.finite_lengths.is_empty());
        assert_eq!(mixing_gcd_test(&s).unwrap(), MixingVerdict::Mixing);
    }

    #[test]
    fn golden_and_full_generators() {
        let s = extract_generators(&golden(), &Word(vec![0]), 6).unwrap();
        assert_eq!(s.lengths(), vec![1, 2]);
        assert!(s.complete);
        assert_eq!(generators_to_loop_graph(&s).finite_lengths, vec![1, 2]);
        assert_eq!(cyclic_cover_period(&s).unwrap(), 1);

        let full = SftPresentation::parse(&["0", "1"], &[]).unwrap();
        let s = extract_generators(&full, &Word(vec![0]), 3).unwrap();
        assert_eq!(
            s.returns,
            vec![Word(vec![0]), Word(vec![1, 0]), Word(vec![1, 1, 0])]
        );
        assert_eq!(
            s.structure.unwrap().progressions,
            vec![Progression { start: 1, step: 1 }]
        );
    }

    #[test]
    fn cycle_generators_are_complete() {
        let s = extract_generators(&cycle3(), &Word(vec![0]), 2).unwrap();
        assert!(s.complete);
        assert_eq!(s.lengths(), vec![3]);
        assert_eq!(
            mixing_gcd_test(&s).unwrap(),
            MixingVerdict::NotMixing { period: 3 }
        );
        assert_eq!(cyclic_cover_period(&s).unwrap(), 3);
    }

    #[test]
    fn gcd_verdicts_from_lists() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let w = |t: &str| ab.parse_word(t).unwrap();
        let complete =
            GeneratorSet::from_list(w("a"), vec![w("bbba"), w("bbbbba")], 6, true).unwrap();
        assert_eq!(
            mixing_gcd_test(&complete).unwrap(),
            MixingVerdict::NotMixing { period: 2 }
        );
        assert_eq!(cyclic_cover_period(&complete).unwrap(), 2);
        let partial =
            GeneratorSet::from_list(w("a"), vec![w("bbba"), w("bbbbba")], 6, false).unwrap();
        assert_eq!(
            mixing_gcd_test(&partial).unwrap(),
            MixingVerdict::Inconclusive { gcd_at_horizon: 2 }
        );
        assert!(matches!(
            cyclic_cover_period(&partial),
            Err(Error::Precondition(_))
        ));
        let empty = GeneratorSet::from_list(w("a"), vec![], 6, false).unwrap();
        assert!(matches!(mixing_gcd_test(&empty), Err(Error::Input(_))));
        assert!(GeneratorSet::from_list(w("a"), vec![w("aba")], 6, false).is_err());
    }

    #[test]
    fn loop_spec_basics() {
        let s = LoopSpec::new(vec![2, 1], vec![Progression { start: 4, step: 3 }]).unwrap();
        assert_eq!(
            s.first_return_counts(10),
            vec![0, 1, 1, 0, 1, 0, 0, 1, 0, 0, 1]
        );
        assert_eq!(s.gcd(), 1);
        let g = s.to_graph(7);
        // loops 1, 2, 4, 7 through the base
        // base plus 0 + 1 + 3 + 6 interior vertices
        assert_eq!(g.vertex_count(), 11);
        assert_eq!(g.count_paths(0, 0, 2).unwrap(), 2u32.into());
        assert!(LoopSpec::new(vec![0], vec![]).is_err());
        assert!(LoopSpec::new(vec![], vec![Progression { start: 1, step: 0 }]).is_err());
        assert!(generators_to_loop_graph(
            &GeneratorSet::from_list(Word(vec![0]), vec![], 3, true).unwrap()
        )
        .is_empty());
    }

    #[test]
    fn svgl_examples() {
        let full = SftPresentation::parse(&["0", "1"], &[]).unwrap();
        assert_eq!(
            svgl_witness(&full, 3, 4),
            SvglOutcome::Witness {
                transition_length: 0
            }
        );
        // exhaustive: an odd 1-run on either side is always fixed by one extra "1"
        assert_eq!(
            svgl_witness(&even(), 4, 6),
            SvglOutcome::Witness {
                transition_length: 1
            }
        );
        assert_eq!(
            svgl_witness(&cycle3(), 3, 3),
            SvglOutcome::Witness {
                transition_length: 2
            }
        );
        assert!(matches!(
            svgl_witness(&cycle3(), 1, 3),
            SvglOutcome::NoWitness { .. }
        ));
    }

    #[test]
    fn bounded_mixing_evidence() {
        let e = mixing_evidence(&even(), &[0], 20, 5, 6);
        assert!(e.mixing_from.is_some() && e.weak_mixing && e.totally_irreducible);
        let c = mixing_evidence(&cycle3(), &[0], 20, 5, 6);
        assert_eq!(c.mixing_from, None);
        assert!(!c.weak_mixing && !c.totally_irreducible);
        assert_eq!(c.longest_gap_run, 1);
    }

    #[test]
    fn overlapping_alpha_uses_full_containment() {
        // α = "00" in the full shift: v = "0" is allowed (α ⊄ v) though vα has α twice
        let full = SftPresentation::parse(&["0", "1"], &[]).unwrap();
        let s = extract_generators(&full, &Word(vec![0, 0]), 4).unwrap();
        assert!(s.returns.contains(&Word(vec![0, 0, 0])));
        assert!(!s
            .returns
            .iter()
            .any(|w| crate::shift::contains_subword(&w[..w.len() - 2], &[0, 0])));
    }
}
