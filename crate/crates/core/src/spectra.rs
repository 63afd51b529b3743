//! Entropy computations.
//!
//! Topological entropy from exact block counts, synchronized entropy from
//! the counts |C_n| of words v with αvα admissible, the loop-graph entropy
//! and recurrence class from the first-return series, the h(G) = h_syn
//! consistency check for Fischer covers, and a harness measuring the entropy
//! drop of proper subsystems.
//!
//! Estimators on finite horizons are reported in pairs (least-squares slope
//! and last-step ratio) so their disagreement is visible.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::generators::LoopSpec;
use crate::graphs::{Enclosure, LabeledGraph};
use crate::shift::{admissible_words, visit_words, Language, Symbol, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountKind {
    /// |B_n|
    Block,
    /// |C_n|, words v with αvα admissible
    Synchronized,
    /// p_n
    Periodic,
    /// f_n
    FirstReturn,
}

/// Exact counts indexed by n = 1..=N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub kind: CountKind,
    counts: Vec<BigUint>,
}

impl CountTable {
    pub fn new(kind: CountKind, counts: Vec<BigUint>) -> Self {
        CountTable { kind, counts }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// The count at `n` (1-based).
    pub fn get(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(1).and_then(|i| self.counts.get(i))
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// (n, count) pairs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().enumerate().map(|(i, c)| (i + 1, c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMethod {
    Perron,
    Slope,
    Ratio,
    LoopRoot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate {
    /// Nats; −∞ for an empty shift.
    pub point: f64,
    pub slope: Option<f64>,
    pub ratio: Option<f64>,
    pub enclosure: Option<Enclosure>,
    pub method: EstimateMethod,
    pub horizon: usize,
    /// Set by the loop-root solver when f stays below 1 up to its radius.
    pub transient: bool,
}

impl EntropyEstimate {
    pub fn empty_shift(horizon: usize) -> Self {
        EntropyEstimate {
            point: f64::NEG_INFINITY,
            slope: None,
            ratio: None,
            enclosure: None,
            method: EstimateMethod::Slope,
            horizon,
            transient: false,
        }
    }

    /// |slope − ratio| when both estimators ran.
    pub fn discrepancy(&self) -> Option<f64> {
        match (self.slope, self.ratio) {
            (Some(s), Some(r)) if s.is_finite() && r.is_finite() => Some((s - r).abs()),
            _ => None,
        }
    }

    pub fn from_enclosure(e: Enclosure, method: EstimateMethod, horizon: usize) -> Self {
        EntropyEstimate {
            point: e.midpoint(),
            slope: None,
            ratio: None,
            enclosure: Some(e),
            method,
            horizon,
            transient: false,
        }
    }
}

/// Natural log of a big integer without overflowing f64; −∞ for zero.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("64 bits").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Slope and ratio growth estimators over `counts[k]` = value at n = k + 1.
fn growth_estimators(counts: &[BigUint], window: usize) -> (f64, f64) {
    let n_max = counts.len();
    let points: Vec<(f64, f64)> = (n_max + 1 - window..=n_max)
        .filter(|&n| !counts[n - 1].is_zero())
        .map(|n| (n as f64, ln_big(&counts[n - 1])))
        .collect();
    let slope = if points.len() < 2 {
        f64::NEG_INFINITY
    } else {
        let m = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
        let my = points.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    };
    let nonzero: Vec<usize> = (1..=n_max).filter(|&n| !counts[n - 1].is_zero()).collect();
    let ratio = match nonzero.as_slice() {
        [.., a, b] => (ln_big(&counts[b - 1]) - ln_big(&counts[a - 1])) / (b - a) as f64,
        _ => f64::NEG_INFINITY,
    };
    (slope, ratio)
}

fn estimate(counts: &[BigUint], window: usize) -> Result<EntropyEstimate> {
    if window < 2 {
        return Err(Error::input("estimator window must be at least 2"));
    }
    if counts.len() < window + 1 {
        return Err(Error::input(format!(
            "count table has {} entries; window {window} needs at least {}",
            counts.len(),
            window + 1
        )));
    }
    let (slope, ratio) = growth_estimators(counts, window);
    Ok(EntropyEstimate {
        point: slope,
        slope: Some(slope),
        ratio: Some(ratio),
        enclosure: None,
        method: EstimateMethod::Slope,
        horizon: counts.len(),
        transient: false,
    })
}

/// Growth rate from successive ratios r_n = c_{n+1}/c_n fitted as
/// λ + a/n + b/n² over the last `window` ratios; returns log λ.
/// Removes most of the bias a polynomial factor nᶜ puts on the slope.
pub fn ratio_extrapolation(counts: &[BigUint], window: usize) -> Result<f64> {
    if window < 3 || counts.len() < window + 1 {
        return Err(Error::input(format!(
            "ratio extrapolation needs window >= 3 and more than {window} counts"
        )));
    }
    let mut m = [[0.0f64; 4]; 3];
    for n in counts.len() - window..counts.len() {
        // ratio from n to n + 1 (counts are 1-based)
        let (a, b) = (&counts[n - 1], &counts[n]);
        if a.is_zero() || b.is_zero() {
            return Err(Error::precondition(
                "ratio extrapolation needs nonzero counts",
            ));
        }
        let r = (ln_big(b) - ln_big(a)).exp();
        let x = [1.0, 1.0 / n as f64, 1.0 / (n as f64).powi(2)];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += x[i] * x[j];
            }
            m[i][3] += x[i] * r;
        }
    }
    // Gauss–Jordan on the 3×3 normal equations
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("nonempty");
        m.swap(col, piv);
        for i in 0..3 {
            if i != col {
                let f = m[i][col] / m[col][col];
                let pivot = m[col];
                for (x, p) in m[i].iter_mut().zip(pivot).skip(col) {
                    *x -= f * p;
                }
            }
        }
    }
    let lambda = m[0][3] / m[0][0];
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::precondition(
            "extrapolated growth rate is not positive",
        ));
    }
    Ok(lambda.ln())
}

/// h(X) ≈ growth rate of |B_n|: least-squares slope of log counts over the
/// last `window` entries, with the last-step ratio alongside.
pub fn entropy_from_counts(t: &CountTable, window: usize) -> Result<EntropyEstimate> {
    if t.kind != CountKind::Block {
        return Err(Error::input(
            "entropy_from_counts expects a block-count table",
        ));
    }
    estimate(&t.counts, window)
}

/// Default estimator window for a horizon: the second half of the table.
pub fn default_window(horizon: usize) -> usize {
    (horizon / 2).max(2)
}

/// Block-count table |B_1|..|B_N| for any language; uses the subset
/// dynamic program when a presentation exists.
pub fn block_count_table<L: Language + ?Sized>(lang: &L, n_max: usize) -> CountTable {
    let counts = match lang.presentation() {
        Some(g) => g.block_counts(n_max)[1..].to_vec(),
        None => (1..=n_max)
            .map(|n| BigUint::from(admissible_words(lang, n).len()))
            .collect(),
    };
    CountTable::new(CountKind::Block, counts)
}

/// |C_0|, ..., |C_{n_max}| where C_n = {v : |v| = n, αvα admissible}.
pub fn synchronized_counts<L: Language + ?Sized>(
    lang: &L,
    alpha: &[Symbol],
    n_max: usize,
) -> Vec<BigUint> {
    if let Some(g) = lang.presentation() {
        let start = g.step_word(&g.live_vertices(), alpha);
        let mut out = Vec::with_capacity(n_max + 1);
        if start.is_empty() {
            return vec![BigUint::zero(); n_max + 1];
        }
        let mut cur: HashMap<Vec<usize>, BigUint> = HashMap::from([(start, BigUint::one())]);
        let mut closes: HashMap<Vec<usize>, bool> = HashMap::new();
        for n in 0..=n_max {
            let mut total = BigUint::zero();
            for (set, c) in &cur {
                let ok = *closes
                    .entry(set.clone())
                    .or_insert_with(|| !g.step_word(set, alpha).is_empty());
                if ok {
                    total += c;
                }
            }
            out.push(total);
            if n == n_max {
                break;
            }
            let mut next: HashMap<Vec<usize>, BigUint> = HashMap::new();
            for (set, c) in &cur {
                for a in Language::alphabet(&g).symbols() {
                    let t = g.step(set, a);
                    if !t.is_empty() {
                        *next.entry(t).or_default() += c;
                    }
                }
            }
            cur = next;
        }
        return out;
    }
    (0..=n_max)
        .map(|n| {
            let mut count = 0usize;
            visit_words(lang, alpha, n, &mut |av| {
                let mut full = av.to_vec();
                full.extend_from_slice(alpha);
                if lang.accepts(&full) {
                    count += 1;
                }
            });
            BigUint::from(count)
        })
        .collect()
}

/// |C_n| for a single n.
pub fn synchronized_count<L: Language + ?Sized>(lang: &L, alpha: &[Symbol], n: usize) -> BigUint {
    synchronized_counts(lang, alpha, n)
        .pop()
        .unwrap_or_default()
}

/// Synchronized entropy estimate from |C_1|..|C_N|.
pub fn h_syn<L: Language + ?Sized>(
    lang: &L,
    alpha: &[Symbol],
    n_max: usize,
) -> Result<EntropyEstimate> {
    lang.alphabet().check(alpha)?;
    if !lang.accepts(alpha) {
        return Err(Error::input("alpha is not admissible"));
    }
    let counts = synchronized_counts(lang, alpha, n_max);
    estimate(
        &counts[1..],
        default_window(n_max).min(n_max.saturating_sub(1)),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyncEntropyReport {
    pub graph_entropy: Enclosure,
    pub h_syn: EntropyEstimate,
    pub tol: f64,
    pub consistent: bool,
}

/// Compares the certified h(G) of a Fischer cover with the h_syn estimate.
pub fn sync_entropy_check(
    g: &LabeledGraph,
    alpha: &Word,
    n_max: usize,
    tol: f64,
) -> Result<SyncEntropyReport> {
    if !g.is_right_resolving() {
        return Err(Error::precondition("cover must be right-resolving"));
    }
    let (ess, _) = g.essential();
    let graph_entropy = ess.underlying().entropy(1e-9)?;
    let h = h_syn(g, alpha, n_max)?;
    let consistent = graph_entropy.widened(tol).contains(h.point);
    Ok(SyncEntropyReport {
        graph_entropy,
        h_syn: h,
        tol,
        consistent,
    })
}

/// f(x) for the first-return series of a loop spec.
pub fn first_return_value(spec: &LoopSpec, x: f64) -> f64 {
    let fin: f64 = spec.finite_lengths.iter().map(|&l| x.powi(l as i32)).sum();
    let prog: f64 = spec
        .progressions
        .iter()
        .map(|p| x.powi(p.start as i32) / (1.0 - x.powi(p.step as i32)))
        .sum();
    fin + prog
}

/// x·f′(x) = Σ n f_n x^n in closed form.
pub fn mean_return_sum(spec: &LoopSpec, x: f64) -> f64 {
    let fin: f64 = spec
        .finite_lengths
        .iter()
        .map(|&l| l as f64 * x.powi(l as i32))
        .sum();
    let prog: f64 = spec
        .progressions
        .iter()
        .map(|p| {
            let (a, d) = (p.start as i32, p.step as i32);
            let xd = x.powi(d);
            (a as f64 * x.powi(a) * (1.0 - xd) + d as f64 * x.powi(a + d)) / (1.0 - xd).powi(2)
        })
        .sum();
    fin + prog
}

/// Radius of convergence of f: 1 with any progression, unbounded otherwise.
pub fn first_return_radius(spec: &LoopSpec) -> f64 {
    if spec.progressions.is_empty() {
        f64::INFINITY
    } else {
        1.0
    }
}

const ROOT_EDGE: f64 = 1e-12;

/// Loop-root bracket [lo, hi] for f(x) = 1, or `None` when f < 1 up to the
/// radius of convergence.
fn loop_root(spec: &LoopSpec, tol: f64) -> Option<(f64, f64)> {
    let radius = first_return_radius(spec);
    // f(1) counts the loops, so a finite spec has its root in (0, 1]
    let mut hi = if radius.is_finite() {
        radius * (1.0 - ROOT_EDGE)
    } else {
        1.0
    };
    if first_return_value(spec, hi) < 1.0 {
        return None;
    }
    let mut lo = 0.0f64;
    for _ in 0..2000 {
        if lo > 0.0 && (hi / lo).ln() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if first_return_value(spec, mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((lo, hi))
}

/// Entropy of a loop graph: −log x where x solves f(x) = 1 (bisection; f is
/// increasing on (0, radius)).
pub fn loop_entropy(spec: &LoopSpec, tol: f64) -> Result<EntropyEstimate> {
    if spec.is_empty() {
        return Err(Error::input("loop spec has no loops"));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::input("tolerance must be a positive finite number"));
    }
    match loop_root(spec, tol) {
        Some((lo, hi)) => {
            let enc = Enclosure {
                lo: -hi.ln() - f64::EPSILON,
                hi: -lo.ln() + f64::EPSILON,
            };
            let mut e = EntropyEstimate::from_enclosure(enc, EstimateMethod::LoopRoot, 0);
            e.point = -(0.5 * (lo + hi)).ln();
            Ok(e)
        }
        None => {
            let radius = first_return_radius(spec);
            let mut e = EntropyEstimate::from_enclosure(
                Enclosure {
                    lo: -radius.ln(),
                    hi: -radius.ln(),
                },
                EstimateMethod::LoopRoot,
                0,
            );
            e.transient = true;
            Ok(e)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Recurrence {
    PositiveRecurrent { mean_return_time: f64 },
    NullRecurrent,
    Transient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceReport {
    pub class: Recurrence,
    /// x* = 1/λ, when f(x*) = 1 is attained.
    pub root: Option<f64>,
    pub entropy: f64,
}

/// Recurrence class of the base vertex of a loop graph.
pub fn classify_recurrence(spec: &LoopSpec) -> Result<RecurrenceReport> {
    if spec.is_empty() {
        return Err(Error::input("loop spec has no loops"));
    }
    let radius = first_return_radius(spec);
    match loop_root(spec, 1e-14) {
        Some((lo, hi)) => {
            let x = 0.5 * (lo + hi);
            let at_boundary = radius.is_finite() && x >= radius * (1.0 - 10.0 * ROOT_EDGE);
            let mean = mean_return_sum(spec, x);
            let class = if !at_boundary && mean.is_finite() {
                Recurrence::PositiveRecurrent {
                    mean_return_time: mean,
                }
            } else {
                Recurrence::NullRecurrent
            };
            Ok(RecurrenceReport {
                class,
                root: Some(x),
                entropy: -x.ln(),
            })
        }
        None => Ok(RecurrenceReport {
            class: Recurrence::Transient,
            root: None,
            entropy: -radius.ln(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapEntry {
    pub word: Word,
    pub subsystem_empty: bool,
    pub h_sub: EntropyEstimate,
    /// Estimated h(X) − h(Y_w).
    pub gap: f64,
    /// Enclosure of the gap from certified Perron bounds of both shifts.
    pub certified_gap: Option<Enclosure>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub h_full: EntropyEstimate,
    pub h_full_certified: Enclosure,
    pub entries: Vec<GapEntry>,
    /// Words whose estimated gap is not strictly positive.
    pub nonpositive: Vec<Word>,
    pub horizon: usize,
}

/// For every admissible w with 1 ≤ |w| ≤ `extend_len`, the entropy drop
/// from X to the subsystem Y_w of points avoiding w.
pub fn subsystem_gap_harness<L: Language + ?Sized>(
    lang: &L,
    extend_len: usize,
    n_max: usize,
) -> Result<GapReport> {
    let g = lang
        .presentation()
        .ok_or_else(|| Error::precondition("gap harness needs a finite presentation"))?;
    // fails unless the shift is irreducible sofic
    g.fischer_cover()?;
    let g = if g.is_right_resolving() {
        g
    } else {
        g.determinize()?.graph
    };
    let window = default_window(n_max);
    let h_full = estimate(&g.block_counts(n_max)[1..], window)?;
    let h_full_certified =
        certified_entropy(&g)?.ok_or_else(|| Error::precondition("shift space is empty"))?;

    let mut entries = Vec::new();
    for len in 1..=extend_len {
        for w in admissible_words(&g, len) {
            let sub = g.forbid_word(&w)?;
            let empty = sub.live_vertices().is_empty();
            let (h_sub, certified_gap) = if empty {
                (EntropyEstimate::empty_shift(n_max), Some(h_full_certified))
            } else {
                let est = estimate(&sub.block_counts(n_max)[1..], window)?;
                let cert = certified_entropy(&sub)?.map(|e| Enclosure {
                    lo: h_full_certified.lo - e.hi,
                    hi: h_full_certified.hi - e.lo,
                });
                (est, cert)
            };
            let gap = if empty {
                h_full.point
            } else {
                h_full.point - h_sub.point
            };
            entries.push(GapEntry {
                word: w,
                subsystem_empty: empty,
                h_sub,
                gap,
                certified_gap,
            });
        }
    }
    let nonpositive = entries
        .iter()
        .filter(|e| e.gap.is_nan() || e.gap <= 0.0)
        .map(|e| e.word.clone())
        .collect();
    Ok(GapReport {
        h_full,
        h_full_certified,
        entries,
        nonpositive,
        horizon: n_max,
    })
}

/// Certified entropy of the shift presented by a right-resolving graph: the
/// largest Perron enclosure among irreducible components.
pub fn certified_entropy(g: &LabeledGraph) -> Result<Option<Enclosure>> {
    let (ess, _) = g.essential();
    ess.underlying().entropy_reducible(1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Progression;
    use crate::shift::{Alphabet, SftPresentation};

    const LN_PHI: f64 = 0.481_211_825_059_603_4;

    fn golden() -> SftPresentation {
        SftPresentation::parse(&["0", "1"], &["11"]).unwrap()
    }

    fn full2() -> SftPresentation {
        SftPresentation::parse(&["0", "1"], &[]).unwrap()
    }

    fn even() -> LabeledGraph {
        let ab = Alphabet::new(["0", "1"]).unwrap();
        LabeledGraph::new(ab, 2, vec![(0, 0, 0), (0, 1, 1), (1, 0, 1)]).unwrap()
    }

    #[test]
    fn ln_big_handles_huge_values() {
        let x = BigUint::one() << 5000u32;
        assert!((ln_big(&x) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(ln_big(&BigUint::zero()), f64::NEG_INFINITY);
    }

    #[test]
    fn count_estimators() {
        let full = block_count_table(&full2(), 10);
        let e = entropy_from_counts(&full, 4).unwrap();
        assert!((e.point - 2f64.ln()).abs() < 1e-12);
        assert!((e.ratio.unwrap() - 2f64.ln()).abs() < 1e-12);
        let g = entropy_from_counts(&block_count_table(&golden(), 12), 6).unwrap();
        assert!((g.point - LN_PHI).abs() < 5e-3);
        let constant = CountTable::new(CountKind::Block, vec![BigUint::from(3u32); 8]);
        assert_eq!(entropy_from_counts(&constant, 4).unwrap().point, 0.0);
        assert!(entropy_from_counts(&constant, 8).is_err());
        let wrong = CountTable::new(CountKind::Periodic, vec![BigUint::one(); 8]);
        assert!(entropy_from_counts(&wrong, 3).is_err());
    }

    #[test]
    fn synchronized_count_examples() {
        assert_eq!(synchronized_count(&full2(), &[0], 3), BigUint::from(8u32));
        let even_counts: Vec<_> = synchronized_counts(&even(), &[0], 4)[1..]
            .iter()
            .map(|c| c.to_u32().unwrap())
            .collect();
        assert_eq!(even_counts, vec![1, 2, 3, 5]);
        // v ∈ {00, 01, 10}
        assert_eq!(synchronized_count(&golden(), &[0], 2), BigUint::from(3u32));
    }

    #[test]
    fn synchronized_counts_match_enumeration() {
        // generic path (no presentation) vs subset dynamic program
        struct Bare<'a>(&'a LabeledGraph);
        impl Language for Bare<'_> {
            fn alphabet(&self) -> &Alphabet {
                Language::alphabet(self.0)
            }
            fn accepts(&self, w: &[Symbol]) -> bool {
                self.0.accepts(w)
            }
        }
        let g = even();
        assert_eq!(
            synchronized_counts(&Bare(&g), &[0, 1, 1], 9),
            synchronized_counts(&g, &[0, 1, 1], 9)
        );
    }

    #[test]
    fn h_syn_examples() {
        let f = h_syn(&full2(), &[0], 10).unwrap();
        assert!((f.point - 2f64.ln()).abs() < 1e-12);
        let e0 = h_syn(&even(), &[0], 12).unwrap();
        assert!((e0.point - LN_PHI).abs() < 5e-3);
        let e00 = h_syn(&even(), &[0, 0], 12).unwrap();
        assert!((e0.point - e00.point).abs() < 1e-2);
    }

    #[test]
    fn sync_entropy_examples() {
        let full = full2().to_labeled_graph();
        for (g, alpha) in [
            (even(), vec![0]),
            (full, vec![0]),
            (golden().to_labeled_graph(), vec![0]),
        ] {
            let r = sync_entropy_check(&g, &Word(alpha), 12, 0.02).unwrap();
            assert!(r.consistent, "{r:?}");
        }
    }

    #[test]
    fn loop_entropy_examples() {
        let one = loop_entropy(&LoopSpec::finite(&[1]).unwrap(), 1e-9).unwrap();
        assert!(one.point.abs() < 1e-8);
        let fib = loop_entropy(&LoopSpec::finite(&[1, 2]).unwrap(), 1e-9).unwrap();
        assert!((fib.point - LN_PHI).abs() < 1e-8);
        assert!(fib.enclosure.unwrap().contains(LN_PHI));
        let all = LoopSpec::new(vec![], vec![Progression { start: 1, step: 1 }]).unwrap();
        let e = loop_entropy(&all, 1e-9).unwrap();
        assert!((e.point - 2f64.ln()).abs() < 1e-8);
        assert!(loop_entropy(&LoopSpec::default(), 1e-6).is_err());
    }

    #[test]
    fn recurrence_examples() {
        let r = classify_recurrence(&LoopSpec::finite(&[1, 2]).unwrap()).unwrap();
        let x = 1.0 / ((1.0 + 5f64.sqrt()) / 2.0);
        match r.class {
            Recurrence::PositiveRecurrent { mean_return_time } => {
                assert!((mean_return_time - (x + 2.0 * x * x)).abs() < 1e-9)
            }
            other => panic!("{other:?}"),
        }
        let all = LoopSpec::new(vec![], vec![Progression { start: 1, step: 1 }]).unwrap();
        match classify_recurrence(&all).unwrap().class {
            Recurrence::PositiveRecurrent { mean_return_time } => {
                assert!((mean_return_time - 2.0).abs() < 1e-9)
            }
            other => panic!("{other:?}"),
        }
        // lengths 2, 3, 4, ...: t²/(1−t) = 1 at t = (√5 − 1)/2
        let tail = LoopSpec::new(vec![], vec![Progression { start: 2, step: 1 }]).unwrap();
        let r = classify_recurrence(&tail).unwrap();
        assert!((r.root.unwrap() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-10);
        assert!(matches!(r.class, Recurrence::PositiveRecurrent { .. }));
    }

    #[test]
    fn gap_harness_examples() {
        let r = subsystem_gap_harness(&full2(), 1, 12).unwrap();
        let one = r.entries.iter().find(|e| e.word == Word(vec![1])).unwrap();
        assert!(!one.subsystem_empty);
        assert!((one.gap - 2f64.ln()).abs() < 1e-9);

        let r = subsystem_gap_harness(&golden(), 2, 12).unwrap();
        let e = r
            .entries
            .iter()
            .find(|e| e.word == Word(vec![0, 0]))
            .unwrap();
        assert!(e.gap > 0.4 && e.h_sub.point.abs() < 1e-12);
        // forbidding "0" leaves nothing: 1^∞ contains 11
        let z = r.entries.iter().find(|e| e.word == Word(vec![0])).unwrap();
        assert!(z.subsystem_empty && z.h_sub.point == f64::NEG_INFINITY);

        let r = subsystem_gap_harness(&even(), 1, 12).unwrap();
        let z = r.entries.iter().find(|e| e.word == Word(vec![0])).unwrap();
        assert!((z.gap - LN_PHI).abs() < 5e-3);
        assert!(r.nonpositive.is_empty());
    }
}
