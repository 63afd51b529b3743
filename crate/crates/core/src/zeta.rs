//! Periodic points and zeta series.
//!
//! All series arithmetic is exact. `p_n` counts fixed points of σⁿ (not
//! least periods), so that ζ(t) = exp(Σ p_n tⁿ / n) has integer
//! coefficients for every shift space.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::generators::LoopSpec;
use crate::graphs::LabeledGraph;
use crate::shift::{Language, SftPresentation};

pub const DEFAULT_ORDER: usize = 16;

/// Truncated power series c_0 + c_1 t + ... + c_N t^N with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    /// Pads with zeros (or truncates) to exactly `order + 1` coefficients.
    pub fn new(mut coeffs: Vec<BigInt>, order: usize) -> Self {
        coeffs.resize(order + 1, BigInt::zero());
        IntSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::from_i64(&[1], order)
    }

    /// f(t) = Σ f_n tⁿ for the loop lengths of a loop graph.
    pub fn first_return(spec: &LoopSpec, order: usize) -> Self {
        Self::new(
            spec.first_return_counts(order)
                .into_iter()
                .map(BigInt::from)
                .collect(),
            order,
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order)
    }

    /// Product truncated to the smaller of the two orders.
    pub fn mul(&self, other: &IntSeries) -> IntSeries {
        let order = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        IntSeries { coeffs: out }
    }

    pub fn sub(&self, other: &IntSeries) -> IntSeries {
        let order = self.order().min(other.order());
        IntSeries {
            coeffs: (0..=order)
                .map(|k| self.coeff(k) - other.coeff(k))
                .collect(),
        }
    }

    /// Multiplicative inverse; needs c_0 = ±1.
    pub fn reciprocal(&self) -> Result<IntSeries> {
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(Error::input("series is not invertible over the integers"));
        }
        let n = self.order();
        let mut r: Vec<BigInt> = Vec::with_capacity(n + 1);
        r.push(c0.clone());
        for k in 1..=n {
            let s: BigInt = (1..=k).map(|i| &self.coeffs[i] * &r[k - i]).sum();
            r.push(-s * c0);
        }
        Ok(IntSeries { coeffs: r })
    }
}

impl fmt::Display for IntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// p_1..p_N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicTable {
    p: Vec<BigUint>,
}

impl PeriodicTable {
    /// Rejects tables where m | n but p_m > p_n.
    pub fn new(p: Vec<BigUint>) -> Result<Self> {
        for m in 1..=p.len() {
            for n in (2 * m..=p.len()).step_by(m) {
                if p[m - 1] > p[n - 1] {
                    return Err(Error::integrity(format!(
                        "p_{m} = {} exceeds p_{n} = {}",
                        p[m - 1],
                        p[n - 1]
                    )));
                }
            }
        }
        Ok(PeriodicTable { p })
    }

    pub fn from_u64(p: &[u64]) -> Result<Self> {
        Self::new(p.iter().map(|&x| BigUint::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// p_n for 1 ≤ n ≤ len.
    pub fn get(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(1).and_then(|i| self.p.get(i))
    }

    pub fn values(&self) -> &[BigUint] {
        &self.p
    }
}

/// Number of x with σⁿx = x, as the trace of the n-th power of the
/// transfer matrix.
pub fn periodic_points_sft(p: &SftPresentation, n: usize) -> BigUint {
    periodic_table_sft(p, n).p.pop().unwrap_or_default()
}

/// p_1..p_N for an SFT.
pub fn periodic_table_sft(p: &SftPresentation, n_max: usize) -> PeriodicTable {
    let (states, next) = p.transfer_system();
    let mut traces = vec![BigUint::zero(); n_max];
    for s in 0..states.len() {
        let mut v = vec![BigUint::zero(); states.len()];
        v[s] = BigUint::one();
        for trace in traces.iter_mut() {
            let mut w = vec![BigUint::zero(); states.len()];
            for (i, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &(_, j) in &next[i] {
                    w[j] += c;
                }
            }
            v = w;
            *trace += &v[s];
        }
    }
    PeriodicTable { p: traces }
}

/// Number of words w of length n with w^∞ in the sofic shift presented by
/// a right-resolving graph.
pub fn periodic_points_sofic(g: &LabeledGraph, n: usize) -> Result<BigUint> {
    Ok(periodic_table_sofic(g, n)?.p.pop().unwrap_or_default())
}

/// p_1..p_N for a right-resolving presentation.
pub fn periodic_table_sofic(g: &LabeledGraph, n_max: usize) -> Result<PeriodicTable> {
    if !g.is_right_resolving() {
        return Err(Error::precondition(
            "periodic point count needs a right-resolving graph",
        ));
    }
    let (ess, _) = g.essential();
    let nv = ess.vertex_count();
    let symbols: Vec<_> = Language::alphabet(&ess).symbols().collect();
    let mut p = vec![BigUint::zero(); n_max];
    // action of the current word on vertices, as a partial map
    let identity: Vec<Option<usize>> = (0..nv)
        .map(|v| {
            if ess.live_vertices().contains(&v) {
                Some(v)
            } else {
                None
            }
        })
        .collect();
    let mut stack = vec![(identity, 0usize)];
    while let Some((map, depth)) = stack.pop() {
        if depth > 0 && has_cycle(&map) {
            p[depth - 1] += 1u32;
        }
        if depth == n_max {
            continue;
        }
        for &a in &symbols {
            let next: Vec<Option<usize>> = map
                .iter()
                .map(|u| u.and_then(|u| ess.successors(u, a).first().copied()))
                .collect();
            if next.iter().any(Option::is_some) {
                stack.push((next, depth + 1));
            }
        }
    }
    Ok(PeriodicTable { p })
}

fn has_cycle(map: &[Option<usize>]) -> bool {
    // a walk that survives |V| steps has entered a cycle
    (0..map.len()).any(|start| {
        let mut u = Some(start);
        for _ in 0..map.len() {
            u = u.and_then(|v| map[v]);
        }
        u.is_some()
    })
}

/// Periodic counts of any language with a finite presentation.
pub fn periodic_table<L: Language + ?Sized>(lang: &L, n_max: usize) -> Result<PeriodicTable> {
    let g = lang
        .presentation()
        .ok_or_else(|| Error::precondition("periodic points need a finite presentation"))?;
    if g.is_right_resolving() {
        periodic_table_sofic(&g, n_max)
    } else {
        periodic_table_sofic(&g.determinize()?.graph, n_max)
    }
}

/// ζ(t) = exp(Σ p_n tⁿ / n) through the Newton identity
/// n z_n = Σ_{k=1}^{n} p_k z_{n−k}.
pub fn zeta_from_periodic(t: &PeriodicTable, order: usize) -> Result<IntSeries> {
    if t.len() < order {
        return Err(Error::input(format!(
            "periodic table has {} entries; order {order} needs {order}",
            t.len()
        )));
    }
    let p: Vec<BigInt> = t.p.iter().map(|x| BigInt::from(x.clone())).collect();
    let mut z = vec![BigInt::one()];
    for n in 1..=order {
        let s: BigInt = (1..=n).map(|k| &p[k - 1] * &z[n - k]).sum();
        let nb = BigInt::from(n);
        if !(&s % &nb).is_zero() {
            return Err(Error::integrity(format!(
                "zeta coefficient {n} is not an integer: {s}/{n}"
            )));
        }
        z.push(s / nb);
    }
    Ok(IntSeries { coeffs: z })
}

/// Formal logarithm of a series with c_0 = 1, as exact rationals.
pub fn formal_log(z: &IntSeries) -> Result<Vec<BigRational>> {
    if !z.coeffs[0].is_one() {
        return Err(Error::input("formal log needs constant term 1"));
    }
    // z' = z·(log z)', solved for n·l_n
    let n = z.order();
    let mut nl: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    for k in 1..=n {
        let s: BigInt = (1..k).map(|j| &nl[j] * &z.coeffs[k - j]).sum();
        nl[k] = BigInt::from(k) * &z.coeffs[k] - s;
    }
    Ok(nl
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            if k == 0 {
                BigRational::zero()
            } else {
                BigRational::new(v, BigInt::from(k))
            }
        })
        .collect())
}

/// Recovers p_1..p_N from a zeta series.
pub fn periodic_from_zeta(z: &IntSeries) -> Result<PeriodicTable> {
    let log = formal_log(z)?;
    let mut p = Vec::with_capacity(z.order());
    for (k, l) in log.iter().enumerate().skip(1) {
        let v = l * BigRational::from_integer(BigInt::from(k));
        if !v.is_integer() || v.is_negative() {
            return Err(Error::integrity(format!("p_{k} = {v} is not a count")));
        }
        p.push(v.to_integer().to_biguint().expect("non-negative"));
    }
    PeriodicTable::new(p)
}

fn check_first_return(f: &IntSeries) -> Result<()> {
    if !f.coeffs[0].is_zero() {
        return Err(Error::input(
            "first-return series must have zero constant term",
        ));
    }
    Ok(())
}

/// 1/(1 − f(t)) truncated at `order`.
pub fn zeta_loop(f: &IntSeries, order: usize) -> Result<IntSeries> {
    check_first_return(f)?;
    IntSeries::one(order).sub(&f.truncate(order)).reciprocal()
}

/// ∏ 1/(1 − f^i(t)) over a depth tower of first-return series.
pub fn zeta_depth_product(fs: &[IntSeries], order: usize) -> Result<IntSeries> {
    let mut acc = IntSeries::one(order);
    for f in fs {
        acc = acc.mul(&zeta_loop(f, order)?);
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecurrenceFit {
    /// s_n = Σ_{i=1}^{d} c_i s_{n−i} for every n ≥ d in the data.
    Found {
        coefficients: Vec<BigRational>,
    },
    NoneAtHorizon {
        max_order: usize,
    },
}

impl RecurrenceFit {
    pub fn order(&self) -> Option<usize> {
        match self {
            RecurrenceFit::Found { coefficients } => Some(coefficients.len()),
            RecurrenceFit::NoneAtHorizon { .. } => None,
        }
    }
}

/// Minimal-order linear recurrence fitting every term of `seq`, by exact
/// elimination on the overdetermined system. Orders d with fewer than
/// 2d + 2 data points are not tried.
pub fn detect_linear_recurrence(seq: &[BigInt], max_order: usize) -> RecurrenceFit {
    for d in 0..=max_order {
        if seq.len() < 2 * d + 2 {
            break;
        }
        let rows: Vec<Vec<BigRational>> = (d..seq.len())
            .map(|n| {
                let mut row: Vec<BigRational> = (1..=d)
                    .map(|i| BigRational::from_integer(seq[n - i].clone()))
                    .collect();
                row.push(BigRational::from_integer(seq[n].clone()));
                row
            })
            .collect();
        if let Some(c) = solve_consistent(rows, d) {
            return RecurrenceFit::Found { coefficients: c };
        }
    }
    RecurrenceFit::NoneAtHorizon { max_order }
}

/// Gaussian elimination on an augmented system with `vars` unknowns; free
/// variables are set to zero. `None` if inconsistent.
fn solve_consistent(mut rows: Vec<Vec<BigRational>>, vars: usize) -> Option<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..vars {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                let pivot = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot).take(vars + 1).skip(col) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[vars].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); vars];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rows[i][vars].clone();
    }
    Some(x)
}

/// Signed view of a periodic table, for recurrence detection.
pub fn periodic_as_sequence(t: &PeriodicTable) -> Vec<BigInt> {
    t.p.iter().map(|x| BigInt::from(x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::Alphabet;

    fn ints(s: &IntSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    fn vals(t: &PeriodicTable) -> Vec<u64> {
        t.values()
            .iter()
            .map(|c| u64::try_from(c).unwrap())
            .collect()
    }

    fn sft(forbidden: &[&str]) -> SftPresentation {
        SftPresentation::parse(&["0", "1"], forbidden).unwrap()
    }

    fn even() -> LabeledGraph {
        let ab = Alphabet::new(["0", "1"]).unwrap();
        LabeledGraph::new(ab, 2, vec![(0, 0, 0), (0, 1, 1), (1, 0, 1)]).unwrap()
    }

    /// Words w of length n with every window of ww admissible.
    fn sft_oracle(p: &SftPresentation, n: usize) -> u64 {
        let m = p.memory();
        (0..1u32 << n)
            .filter(|bits| {
                let w: Vec<usize> = (0..n).map(|i| (bits >> i & 1) as usize).collect();
                let reps = (m + 1).div_ceil(n) + 1;
                let ww: Vec<usize> = w.iter().copied().cycle().take(n * reps).collect();
                ww.windows((m + 1).min(ww.len())).all(|win| p.accepts(win))
            })
            .count() as u64
    }

    #[test]
    fn sft_periodic_examples() {
        assert_eq!(
            vals(&periodic_table_sft(&sft(&[]), 5)),
            vec![2, 4, 8, 16, 32]
        );
        assert_eq!(
            vals(&periodic_table_sft(&sft(&["11"]), 5)),
            vec![1, 3, 4, 7, 11]
        );
        assert_eq!(
            vals(&periodic_table_sft(&sft(&["00", "11"]), 2)),
            vec![0, 2]
        );
        for f in [&["11"][..], &["00", "11"], &["101"], &["010", "11"], &["1"]] {
            let p = sft(f);
            for n in 1..=10 {
                assert_eq!(
                    u64::try_from(periodic_points_sft(&p, n)).unwrap(),
                    sft_oracle(&p, n),
                    "{f:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn sofic_periodic_examples() {
        // w^∞ admissible iff every 1-run between zeros is even: 0, 1 | 00, 11 | 000, 111, 011, 101, 110
        assert_eq!(
            vals(&periodic_table_sofic(&even(), 4).unwrap()),
            vec![2, 2, 5, 6]
        );
        let full = sft(&[]).to_labeled_graph();
        assert_eq!(
            vals(&periodic_table_sofic(&full, 4).unwrap()),
            vec![2, 4, 8, 16]
        );
        let ab = Alphabet::new(["a", "b", "c"]).unwrap();
        let cyc = LabeledGraph::new(ab, 3, vec![(0, 1, 0), (1, 2, 1), (2, 0, 2)]).unwrap();
        assert_eq!(
            vals(&periodic_table_sofic(&cyc, 6).unwrap()),
            vec![0, 0, 3, 0, 0, 3]
        );
        for f in [&["11"][..], &["101"], &["010", "11"]] {
            let p = sft(f);
            assert_eq!(
                periodic_table_sofic(&p.to_labeled_graph(), 9).unwrap(),
                periodic_table_sft(&p, 9)
            );
        }
    }

    #[test]
    fn zeta_examples() {
        let full = PeriodicTable::from_u64(&[2, 4, 8, 16]).unwrap();
        assert_eq!(
            ints(&zeta_from_periodic(&full, 4).unwrap()),
            vec![1, 2, 4, 8, 16]
        );
        let golden = PeriodicTable::from_u64(&[1, 3, 4, 7, 11]).unwrap();
        assert_eq!(
            ints(&zeta_from_periodic(&golden, 5).unwrap()),
            vec![1, 1, 2, 3, 5, 8]
        );
        let fixed = PeriodicTable::from_u64(&[1; 6]).unwrap();
        assert_eq!(ints(&zeta_from_periodic(&fixed, 6).unwrap()), vec![1; 7]);
        // p_1 = 0, p_2 = 1 gives z_2 = 1/2
        let bad = PeriodicTable::from_u64(&[0, 1]).unwrap();
        assert!(matches!(zeta_from_periodic(&bad, 2), Err(Error::Integrity(m)) if m.contains('2')));
        assert!(PeriodicTable::from_u64(&[3, 2]).is_err());
    }

    #[test]
    fn loop_zeta_examples() {
        assert_eq!(
            ints(&zeta_loop(&IntSeries::from_i64(&[0, 1, 1], 5), 5).unwrap()),
            vec![1, 1, 2, 3, 5, 8]
        );
        assert_eq!(
            ints(&zeta_loop(&IntSeries::from_i64(&[0, 2], 3), 3).unwrap()),
            vec![1, 2, 4, 8]
        );
        assert_eq!(
            ints(&zeta_loop(&IntSeries::from_i64(&[0, 0, 0, 1], 6), 6).unwrap()),
            vec![1, 0, 0, 1, 0, 0, 1]
        );
        assert!(zeta_loop(&IntSeries::from_i64(&[1, 1], 3), 3).is_err());
    }

    #[test]
    fn depth_product_examples() {
        let f1 = IntSeries::from_i64(&[0, 1, 0, 1, 0, 1, 0, 1, 0], 8);
        let f2 = IntSeries::from_i64(&[0, 1], 8);
        let prod = zeta_depth_product(&[f1.clone(), f2], 8).unwrap();
        let brute = zeta_from_periodic(&periodic_table_sofic(&even(), 8).unwrap(), 8).unwrap();
        assert_eq!(prod, brute);
        assert_eq!(
            zeta_depth_product(std::slice::from_ref(&f1), 8).unwrap(),
            zeta_loop(&f1, 8).unwrap()
        );
        assert_eq!(zeta_depth_product(&[], 4).unwrap(), IntSeries::one(4));
    }

    #[test]
    fn log_round_trip() {
        let t = periodic_table_sofic(&even(), 10).unwrap();
        let z = zeta_from_periodic(&t, 10).unwrap();
        assert_eq!(periodic_from_zeta(&z).unwrap(), t);
    }

    #[test]
    fn recurrence_examples() {
        let rat = |v: &[i64]| {
            v.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect::<Vec<_>>()
        };
        let golden = periodic_as_sequence(&periodic_table_sft(&sft(&["11"]), 12));
        assert_eq!(
            detect_linear_recurrence(&golden, 4),
            RecurrenceFit::Found {
                coefficients: rat(&[1, 1])
            }
        );
        let full = periodic_as_sequence(&periodic_table_sft(&sft(&[]), 8));
        assert_eq!(
            detect_linear_recurrence(&full, 3),
            RecurrenceFit::Found {
                coefficients: rat(&[2])
            }
        );
        let z = zeta_from_periodic(&periodic_table_sofic(&even(), 12).unwrap(), 12).unwrap();
        assert!(detect_linear_recurrence(z.coeffs(), 3).order().unwrap() <= 3);
        let irregular: Vec<BigInt> = [1, 2, 4, 2, 16, 1, 32]
            .into_iter()
            .map(BigInt::from)
            .collect();
        assert!(matches!(
            detect_linear_recurrence(&irregular, 2),
            RecurrenceFit::NoneAtHorizon { .. }
        ));
    }
}
