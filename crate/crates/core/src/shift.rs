//! Alphabets, words, language oracles, and shifts of finite type.
//!
//! Everything else in the crate talks to a shift space through the
//! [`Language`] trait: a membership oracle for the set of admissible finite
//! blocks, optionally backed by a finite labeled-graph presentation when the
//! shift is sofic.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graphs::LabeledGraph;

/// Index of a symbol in its [`Alphabet`].
pub type Symbol = usize;

/// A nonempty ordered set of distinct symbol tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    tokens: Vec<String>,
    index: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(Error::input("alphabet must be nonempty"));
        }
        let mut index = HashMap::with_capacity(tokens.len());
        for (i, t) in tokens.iter().enumerate() {
            if t.is_empty() || t.chars().any(|c| c.is_whitespace() || c.is_control()) {
                return Err(Error::input(format!(
                    "alphabet token {t:?} must be printable and free of whitespace"
                )));
            }
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate alphabet token {t:?}")));
            }
        }
        Ok(Alphabet { tokens, index })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token(&self, s: Symbol) -> Option<&str> {
        self.tokens.get(s).map(String::as_str)
    }

    pub fn symbol(&self, token: &str) -> Option<Symbol> {
        self.index.get(token).copied()
    }

    pub fn symbols(&self) -> std::ops::Range<Symbol> {
        0..self.tokens.len()
    }

    fn single_char_tokens(&self) -> bool {
        self.tokens.iter().all(|t| t.chars().count() == 1)
    }

    /// Parses a textual word.
    ///
    /// Whitespace-separated input is read token by token. Otherwise, when
    /// every token is a single character, the text is read character by
    /// character.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let lookup = |tok: &str| {
            self.symbol(tok)
                .ok_or_else(|| Error::input(format!("symbol {tok:?} is not in the alphabet")))
        };
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        let symbols = if text.contains(char::is_whitespace) || !self.single_char_tokens() {
            text.split_whitespace()
                .map(lookup)
                .collect::<Result<Vec<_>>>()?
        } else {
            let mut buf = [0u8; 4];
            text.chars()
                .map(|c| lookup(c.encode_utf8(&mut buf)))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Word(symbols))
    }

    pub fn render(&self, w: &[Symbol]) -> String {
        let sep = if self.single_char_tokens() { "" } else { " " };
        w.iter()
            .map(|&s| self.tokens.get(s).map(String::as_str).unwrap_or("?"))
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn check(&self, w: &[Symbol]) -> Result<()> {
        match w.iter().find(|&&s| s >= self.len()) {
            Some(s) => Err(Error::input(format!(
                "symbol index {s} outside alphabet of size {}",
                self.len()
            ))),
            None => Ok(()),
        }
    }
}

/// A finite sequence of symbols. The empty word is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn concat(parts: &[&[Symbol]]) -> Word {
        Word(parts.iter().flat_map(|p| p.iter().copied()).collect())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
}

impl Deref for Word {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// True when `needle` occurs as a contiguous subword of `hay`.
pub fn contains_subword(hay: &[Symbol], needle: &[Symbol]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

/// Pattern-matching automaton for a single word, in the Knuth–Morris–Pratt
/// style. State `k` means the longest suffix of the input read so far that is
/// a prefix of the pattern has length `k`; state `pattern.len()` is a match.
#[derive(Debug, Clone)]
pub struct Matcher {
    pattern: Vec<Symbol>,
    fail: Vec<usize>,
}

impl Matcher {
    pub fn new(pattern: &[Symbol]) -> Self {
        let mut fail = vec![0; pattern.len() + 1];
        let mut k = 0;
        for i in 1..pattern.len() {
            while k > 0 && pattern[i] != pattern[k] {
                k = fail[k];
            }
            if pattern[i] == pattern[k] {
                k += 1;
            }
            fail[i + 1] = k;
        }
        Matcher {
            pattern: pattern.to_vec(),
            fail,
        }
    }

    pub fn len(&self) -> usize {
        self.pattern.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pattern.is_empty()
    }

    pub fn step(&self, state: usize, a: Symbol) -> usize {
        let mut k = state;
        if k == self.pattern.len() {
            k = self.fail[k];
        }
        loop {
            if k < self.pattern.len() && self.pattern[k] == a {
                return k + 1;
            }
            if k == 0 {
                return 0;
            }
            k = self.fail[k];
        }
    }
}

/// Membership oracle for the language B(X) of a shift space.
///
/// Implementations must be factorial: every subword of an accepted word is
/// accepted.
pub trait Language {
    fn alphabet(&self) -> &Alphabet;

    /// Membership test. Symbols are assumed to be in range.
    fn accepts(&self, w: &[Symbol]) -> bool;

    /// A finite labeled-graph presentation of the same shift, when one exists.
    fn presentation(&self) -> Option<LabeledGraph> {
        None
    }
}

/// All admissible words of length `n`, in lexicographic symbol order.
pub fn admissible_words<L: Language + ?Sized>(lang: &L, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    visit_words(lang, &[], n, &mut |w| out.push(Word(w.to_vec())));
    out
}

/// Depth-first walk over admissible extensions of `prefix` by exactly `n`
/// symbols. Relies on factoriality to prune dead prefixes.
pub fn visit_words<L: Language + ?Sized>(
    lang: &L,
    prefix: &[Symbol],
    n: usize,
    visit: &mut dyn FnMut(&[Symbol]),
) {
    let mut buf = prefix.to_vec();
    let target = prefix.len() + n;
    walk(lang, &mut buf, target, visit);

    fn walk<L: Language + ?Sized>(
        lang: &L,
        buf: &mut Vec<Symbol>,
        target: usize,
        visit: &mut dyn FnMut(&[Symbol]),
    ) {
        if buf.len() == target {
            visit(buf);
            return;
        }
        for a in lang.alphabet().symbols() {
            buf.push(a);
            if lang.accepts(buf) {
                walk(lang, buf, target, visit);
            }
            buf.pop();
        }
    }
}

/// Admissible words of every length in `0..=max_len`, shortest first.
pub fn admissible_words_upto<L: Language + ?Sized>(lang: &L, max_len: usize) -> Vec<Word> {
    (0..=max_len)
        .flat_map(|n| admissible_words(lang, n))
        .collect()
}

/// Outcome of a synchronizing-word test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SyncVerdict {
    Yes,
    /// `left·w` and `w·right` are admissible but `left·w·right` is not.
    No {
        left: Word,
        right: Word,
    },
    /// No counterexample within the search horizon; nothing certified.
    Unknown {
        horizon: usize,
    },
}

/// Exhaustive search for a pair (u, v) with |u|, |v| ≤ `horizon` witnessing
/// that `w` is not synchronizing. Returns the pair of least total length.
pub fn sync_counterexample<L: Language + ?Sized>(
    lang: &L,
    w: &[Symbol],
    horizon: usize,
) -> Option<(Word, Word)> {
    let mut lefts = Vec::new();
    let mut rights = Vec::new();
    for n in 0..=horizon {
        for u in admissible_words(lang, n) {
            if lang.accepts(&Word::concat(&[&u, w])) {
                lefts.push(u);
            }
        }
        let mut buf = Vec::new();
        visit_words(lang, w, n, &mut |wv| buf.push(Word(wv[w.len()..].to_vec())));
        rights.extend(buf);
    }
    for total in 0..=2 * horizon {
        for u in lefts.iter().filter(|u| u.len() <= total) {
            for v in rights.iter().filter(|v| u.len() + v.len() == total) {
                if !lang.accepts(&Word::concat(&[u, w, v])) {
                    return Some((u.clone(), v.clone()));
                }
            }
        }
    }
    None
}

/// How [`SftPresentation::enumerate_blocks`] computes its count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountMode {
    #[default]
    TransferMatrix,
    /// Explicit enumeration; the cross-checking oracle.
    Direct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCount {
    pub n: usize,
    pub count: BigUint,
    pub words: Option<Vec<Word>>,
}

/// A shift of finite type X_F given by a finite forbidden-word list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SftPresentation {
    alphabet: Alphabet,
    forbidden: Vec<Word>,
    memory: usize,
}

impl SftPresentation {
    /// Builds the presentation, pruning `forbidden` to an antichain under the
    /// subword order (a word containing another forbidden word is redundant).
    pub fn new(alphabet: Alphabet, forbidden: Vec<Word>) -> Result<Self> {
        for f in &forbidden {
            if f.is_empty() {
                return Err(Error::input("forbidden words must have length at least 1"));
            }
            alphabet.check(f)?;
        }
        let mut sorted = forbidden;
        sorted.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        sorted.dedup();
        let mut kept: Vec<Word> = Vec::with_capacity(sorted.len());
        for f in sorted {
            if !kept.iter().any(|k| contains_subword(&f, k)) {
                kept.push(f);
            }
        }
        let memory = kept.iter().map(|f| f.len() - 1).max().unwrap_or(0);
        Ok(SftPresentation {
            alphabet,
            forbidden: kept,
            memory,
        })
    }

    /// Convenience constructor from textual tokens and words.
    pub fn parse(tokens: &[&str], forbidden: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::new(tokens.iter().copied())?;
        let forbidden = forbidden
            .iter()
            .map(|f| alphabet.parse_word(f))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, forbidden)
    }

    pub fn forbidden(&self) -> &[Word] {
        &self.forbidden
    }

    /// Longest forbidden length minus one; zero for the full shift.
    pub fn memory(&self) -> usize {
        self.memory
    }

    /// Returns a new presentation with `extra` added to the forbidden list.
    pub fn with_forbidden(&self, extra: Word) -> Result<Self> {
        let mut f = self.forbidden.clone();
        f.push(extra);
        Self::new(self.alphabet.clone(), f)
    }

    pub fn is_admissible(&self, w: &Word) -> Result<bool> {
        self.alphabet.check(w)?;
        Ok(self.accepts(w))
    }

    /// Exact |B_n(X_F)|, optionally with the words themselves.
    pub fn enumerate_blocks(&self, n: usize, mode: CountMode, with_words: bool) -> BlockCount {
        let words = (with_words || mode == CountMode::Direct).then(|| admissible_words(self, n));
        let count = match (&words, mode) {
            (Some(ws), CountMode::Direct) => BigUint::from(ws.len()),
            _ => self.transfer_count(n),
        };
        BlockCount {
            n,
            count,
            words: if with_words { words } else { None },
        }
    }

    pub fn block_count(&self, n: usize) -> BigUint {
        self.transfer_count(n)
    }

    fn transfer_count(&self, n: usize) -> BigUint {
        let m = self.memory;
        if n <= m {
            return BigUint::from(admissible_words(self, n).len());
        }
        let (states, next) = self.transfer_system();
        let mut v = vec![BigUint::one(); states.len()];
        for _ in 0..n - m {
            let mut nv = vec![BigUint::zero(); states.len()];
            for (s, succ) in next.iter().enumerate() {
                if v[s].is_zero() {
                    continue;
                }
                for &(_, t) in succ {
                    nv[t] += &v[s];
                }
            }
            v = nv;
        }
        v.into_iter().sum()
    }

    /// Admissible m-words (m = memory) and the one-step successor lists of
    /// the m-block transfer system.
    pub fn transfer_system(&self) -> (Vec<Word>, Vec<Vec<(Symbol, usize)>>) {
        let states = admissible_words(self, self.memory);
        let index: HashMap<&[Symbol], usize> = states
            .iter()
            .enumerate()
            .map(|(i, s)| (&s[..], i))
            .collect();
        let mut next = vec![Vec::new(); states.len()];
        for (i, s) in states.iter().enumerate() {
            for a in self.alphabet.symbols() {
                let mut ext = s.0.clone();
                ext.push(a);
                if self.accepts(&ext) {
                    if let Some(&j) = index.get(&ext[1..]) {
                        next[i].push((a, j));
                    }
                }
            }
        }
        (states, next)
    }

    /// The m-block presentation: vertices are admissible m-words, and an edge
    /// labeled `a` joins `s` to the last m symbols of `s·a`.
    pub fn to_labeled_graph(&self) -> LabeledGraph {
        let (states, next) = self.transfer_system();
        let edges = next
            .iter()
            .enumerate()
            .flat_map(|(i, succ)| succ.iter().map(move |&(a, j)| (i, j, a)))
            .collect();
        LabeledGraph::new(self.alphabet.clone(), states.len(), edges)
            .expect("m-block presentation is well formed")
    }

    /// Tests whether `w` is synchronizing. Any admissible word of length at
    /// least the memory is synchronizing for an SFT; shorter words are
    /// searched exhaustively up to `horizon` and never certified.
    pub fn is_synchronizing_word(&self, w: &Word, horizon: usize) -> Result<SyncVerdict> {
        if !self.is_admissible(w)? {
            return Err(Error::input("word is not admissible"));
        }
        if w.len() >= self.memory {
            return Ok(SyncVerdict::Yes);
        }
        Ok(match sync_counterexample(self, w, horizon) {
            Some((left, right)) => SyncVerdict::No { left, right },
            None => SyncVerdict::Unknown { horizon },
        })
    }
}

impl Language for SftPresentation {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn accepts(&self, w: &[Symbol]) -> bool {
        !self.forbidden.iter().any(|f| contains_subword(w, f))
    }

    fn presentation(&self) -> Option<LabeledGraph> {
        Some(self.to_labeled_graph())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> SftPresentation {
        SftPresentation::parse(&["0", "1"], &["11"]).unwrap()
    }

    #[test]
    fn admissibility() {
        let g = golden();
        let w = |s| g.alphabet().parse_word(s).unwrap();
        assert!(g.is_admissible(&w("0101")).unwrap());
        assert!(!g.is_admissible(&w("0110")).unwrap());
        let p = SftPresentation::parse(&["0", "1"], &["101"]).unwrap();
        assert!(!p
            .is_admissible(&p.alphabet().parse_word("1011").unwrap())
            .unwrap());
        assert!(g.is_admissible(&Word(vec![2])).is_err());
        assert!(g.alphabet().parse_word("012").is_err());
    }

    #[test]
    fn block_counts() {
        let g = golden();
        let counts: Vec<_> = (1..=3).map(|n| g.block_count(n)).collect();
        assert_eq!(counts, vec![2u32.into(), 3u32.into(), 5u32.into()]);
        let full = SftPresentation::parse(&["0", "1"], &[]).unwrap();
        assert_eq!(full.block_count(5), BigUint::from(32u32));
        let alt = SftPresentation::parse(&["0", "1"], &["00", "11"]).unwrap();
        assert_eq!(alt.block_count(4), BigUint::from(2u32));
        assert_eq!(g.block_count(0), BigUint::one());
    }

    #[test]
    fn direct_mode_lists_words() {
        let g = golden();
        let b = g.enumerate_blocks(3, CountMode::Direct, true);
        assert_eq!(b.count, BigUint::from(5u32));
        let words = b.words.unwrap();
        let text: Vec<_> = words.iter().map(|w| g.alphabet().render(w)).collect();
        assert_eq!(text, ["000", "001", "010", "100", "101"]);
    }

    #[test]
    fn forbidden_list_is_pruned_to_antichain() {
        let p = SftPresentation::parse(&["0", "1"], &["110", "11", "0110", "11"]).unwrap();
        assert_eq!(p.forbidden().len(), 1);
        assert_eq!(p.memory(), 1);
        let q = SftPresentation::parse(&["0", "1"], &["11"]).unwrap();
        assert_eq!(p, q);
        assert!(SftPresentation::parse(&["0", "1"], &[""]).is_err());
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        let multi = Alphabet::new(["ab", "c"]).unwrap();
        assert_eq!(multi.parse_word("ab c ab").unwrap(), Word(vec![0, 1, 0]));
        assert_eq!(multi.render(&[0, 1]), "ab c");
    }

    #[test]
    fn synchronizing_words() {
        let g = golden();
        let zero = g.alphabet().parse_word("0").unwrap();
        assert_eq!(g.is_synchronizing_word(&zero, 6).unwrap(), SyncVerdict::Yes);
        // the memory shortcut agrees with the exhaustive search
        assert_eq!(sync_counterexample(&g, &zero, 6), None);
        let full = SftPresentation::parse(&["0", "1"], &[]).unwrap();
        assert_eq!(
            full.is_synchronizing_word(&Word::empty(), 3).unwrap(),
            SyncVerdict::Yes
        );
        let one1 = g.alphabet().parse_word("11").unwrap();
        assert!(g.is_synchronizing_word(&one1, 3).is_err());
        // memory 2: "1" is not synchronizing for X_{101}
        let p = SftPresentation::parse(&["0", "1"], &["101"]).unwrap();
        let v = p
            .is_synchronizing_word(&p.alphabet().parse_word("0").unwrap(), 4)
            .unwrap();
        match v {
            SyncVerdict::No { left, right } => {
                assert_eq!(left, Word(vec![1]));
                assert_eq!(right, Word(vec![1]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn matcher_tracks_prefix_state() {
        let m = Matcher::new(&[0, 0, 1, 0]);
        let mut st = 0;
        let mut hits = Vec::new();
        let text = [0, 0, 0, 1, 0, 0, 1, 0, 1];
        for (i, &a) in text.iter().enumerate() {
            st = m.step(st, a);
            if st == m.len() {
                hits.push(i);
            }
        }
        assert_eq!(hits, vec![4, 7]);
    }

    #[test]
    fn m_block_presentation_has_same_language() {
        let p = SftPresentation::parse(&["a", "b", "c"], &["ab", "cc", "bab"]).unwrap();
        let g = p.to_labeled_graph();
        assert!(g.is_right_resolving());
        for n in 0..7 {
            assert_eq!(g.block_count(n), p.block_count(n));
        }
    }
}
