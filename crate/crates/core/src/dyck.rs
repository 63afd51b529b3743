//! The Dyck shift on two bracket pairs and its subsystems X_f avoiding one
//! balanced word f.
//!
//! Symbols are `(`, `[`, `)`, `]` in that order. A finite word is admissible
//! when a stack scan never sees a closer that mismatches the top of a
//! nonempty stack; closers on an empty stack are unmatched and allowed.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::shift::{Alphabet, Language, Matcher, Symbol, Word};
use crate::spectra::{ln_big, ratio_extrapolation, CountKind, CountTable, EntropyEstimate};

pub const TOKENS: [&str; 4] = ["(", "[", ")", "]"];
/// Largest n for the stack-state dynamic program.
pub const DP_CAP: usize = 20;
/// Largest n for direct enumeration.
pub const ENUM_CAP: usize = 14;

fn is_opener(a: Symbol) -> bool {
    a < 2
}

/// Bracket type of a delimiter.
fn kind(a: Symbol) -> u8 {
    (a % 2) as u8
}

/// ℓ_i ↔ r_i.
pub fn mirror_symbol(a: Symbol) -> Symbol {
    (a + 2) % 4
}

/// Reverses a word and swaps openers with closers, keeping bracket types.
pub fn mirror(w: &[Symbol]) -> Word {
    Word(w.iter().rev().map(|&a| mirror_symbol(a)).collect())
}

/// Bracket-rule membership, ignoring any forbidden word.
pub fn bracket_admissible(w: &[Symbol]) -> bool {
    let mut stack = Vec::new();
    for &a in w {
        if is_opener(a) {
            stack.push(kind(a));
        } else if let Some(top) = stack.pop() {
            if top != kind(a) {
                return false;
            }
        }
    }
    true
}

/// Every delimiter matched within the word.
pub fn is_balanced(w: &[Symbol]) -> bool {
    let mut stack = Vec::new();
    for &a in w {
        if is_opener(a) {
            stack.push(kind(a));
        } else if stack.pop() != Some(kind(a)) {
            return false;
        }
    }
    stack.is_empty()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DyckWordClass {
    /// No unmatched left delimiter; ends with an unmatched right one.
    A,
    /// Balanced (including ε).
    B,
    /// Starts with an unmatched left delimiter; no unmatched right one.
    C,
    General,
}

/// Class of an admissible word in the A·B·C decomposition.
pub fn classify(w: &[Symbol]) -> DyckWordClass {
    let mut stack = Vec::new();
    let mut unmatched_right = false;
    let mut last_unmatched_right = false;
    let mut first_open = false;
    for (i, &a) in w.iter().enumerate() {
        last_unmatched_right = false;
        if is_opener(a) {
            stack.push(i);
        } else if stack.pop().is_none() {
            unmatched_right = true;
            last_unmatched_right = true;
        }
        if i == 0 {
            first_open = is_opener(a);
        }
    }
    if stack.is_empty() && !unmatched_right {
        DyckWordClass::B
    } else if stack.is_empty() && last_unmatched_right {
        DyckWordClass::A
    } else if !unmatched_right && first_open && stack.first() == Some(&0) {
        DyckWordClass::C
    } else {
        DyckWordClass::General
    }
}

/// Dyck shift, optionally restricted to words avoiding a balanced `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyckSystem {
    alphabet: Alphabet,
    forbidden: Option<Word>,
}

impl DyckSystem {
    pub fn new(forbidden: Option<Word>) -> Result<Self> {
        let alphabet = Alphabet::new(TOKENS).expect("fixed alphabet");
        if let Some(f) = &forbidden {
            alphabet.check(f)?;
            if f.is_empty() || !is_balanced(f) {
                return Err(Error::input(format!(
                    "forbidden word {} must be a nonempty balanced word",
                    alphabet.render(f)
                )));
            }
        }
        Ok(DyckSystem {
            alphabet,
            forbidden,
        })
    }

    pub fn unrestricted() -> Self {
        Self::new(None).expect("no forbidden word")
    }

    /// Parses the forbidden word from bracket text such as `(())`.
    pub fn with_forbidden(text: &str) -> Result<Self> {
        let ab = Alphabet::new(TOKENS).expect("fixed alphabet");
        Self::new(Some(ab.parse_word(text)?))
    }

    pub fn forbidden(&self) -> Option<&Word> {
        self.forbidden.as_ref()
    }

    /// The system avoiding the mirror image of f; mirroring maps its
    /// A-words onto this system's C-words.
    pub fn mirrored(&self) -> Self {
        Self::new(self.forbidden.as_ref().map(|f| mirror(f)))
            .expect("mirror of balanced is balanced")
    }
}

impl Language for DyckSystem {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn accepts(&self, w: &[Symbol]) -> bool {
        w.iter().all(|&a| a < 4)
            && bracket_admissible(w)
            && self
                .forbidden
                .as_ref()
                .is_none_or(|f| !crate::shift::contains_subword(w, f))
    }
}

pub fn dyck_admissible(d: &DyckSystem, w: &[Symbol]) -> Result<bool> {
    d.alphabet.check(w)?;
    Ok(d.accepts(w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DyckCountMode {
    #[default]
    StackDp,
    Enumerate,
}

/// Class-resolved counts of words of one length.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AbcCounts {
    pub total: BigUint,
    pub a: BigUint,
    pub b: BigUint,
    pub c: BigUint,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct DpState {
    /// Top of the stack of unmatched openers, as far as it can still matter.
    stack: Vec<u8>,
    /// More openers lie below `stack`; they can never be closed in time.
    deep: bool,
    kmp: usize,
    unmatched_right: bool,
    last_unmatched_right: bool,
    /// Word starts with an opener that is still open.
    c_candidate: bool,
}

fn dp_counts(d: &DyckSystem, n: usize) -> AbcCounts {
    let matcher = d.forbidden.as_ref().map(|f| Matcher::new(f));
    let start = DpState {
        stack: Vec::new(),
        deep: false,
        kmp: 0,
        unmatched_right: false,
        last_unmatched_right: false,
        c_candidate: false,
    };
    let mut cur: HashMap<DpState, BigUint> = HashMap::from([(start, BigUint::from(1u32))]);
    for i in 0..n {
        let remaining = n - i - 1;
        let mut next: HashMap<DpState, BigUint> = HashMap::new();
        for (s, c) in &cur {
            for a in 0..4 {
                let kmp = match &matcher {
                    Some(m) => {
                        let k = m.step(s.kmp, a);
                        if k == m.len() {
                            continue;
                        }
                        k
                    }
                    None => 0,
                };
                let mut t = DpState {
                    kmp,
                    last_unmatched_right: false,
                    ..s.clone()
                };
                if is_opener(a) {
                    t.stack.push(kind(a));
                    if i == 0 {
                        t.c_candidate = true;
                    }
                } else if let Some(top) = t.stack.pop() {
                    if top != kind(a) {
                        continue;
                    }
                    if t.stack.is_empty() && !t.deep {
                        t.c_candidate = false;
                    }
                } else if t.deep {
                    // closing an opener below the horizon never completes in time
                    continue;
                } else {
                    t.unmatched_right = true;
                    t.last_unmatched_right = true;
                    t.c_candidate = false;
                }
                if t.stack.len() > remaining {
                    let cut = t.stack.len() - remaining;
                    t.stack.drain(..cut);
                    t.deep = true;
                }
                *next.entry(t).or_default() += c;
            }
        }
        cur = next;
    }
    let mut out = AbcCounts::default();
    for (s, c) in cur {
        out.total += &c;
        let empty = s.stack.is_empty() && !s.deep;
        if empty && !s.unmatched_right {
            out.b += &c;
        }
        if empty && s.last_unmatched_right {
            out.a += &c;
        }
        if s.c_candidate {
            out.c += &c;
        }
    }
    out
}

fn enumerate_counts(d: &DyckSystem, n: usize) -> AbcCounts {
    let mut out = AbcCounts::default();
    crate::shift::visit_words(d, &[], n, &mut |w| {
        out.total += 1u32;
        match classify(w) {
            DyckWordClass::A => out.a += 1u32,
            DyckWordClass::B => out.b += 1u32,
            DyckWordClass::C => out.c += 1u32,
            DyckWordClass::General => {}
        }
    });
    out
}

/// Exact |B_n| and the A/B/C class counts for length n.
pub fn dyck_counts(d: &DyckSystem, n: usize, mode: DyckCountMode) -> Result<AbcCounts> {
    let cap = match mode {
        DyckCountMode::StackDp => DP_CAP,
        DyckCountMode::Enumerate => ENUM_CAP,
    };
    if n > cap {
        return Err(Error::budget(format!(
            "n = {n} exceeds the {mode:?} cap {cap}"
        )));
    }
    Ok(match mode {
        DyckCountMode::StackDp => dp_counts(d, n),
        DyckCountMode::Enumerate => enumerate_counts(d, n),
    })
}

/// Exact |B_n|.
pub fn dyck_block_count(d: &DyckSystem, n: usize) -> Result<BigUint> {
    Ok(dyck_counts(d, n, DyckCountMode::StackDp)?.total)
}

/// (|A_n|, |balanced words of length n|, |C_n|).
pub fn dyck_abc_counts(d: &DyckSystem, n: usize) -> Result<(BigUint, BigUint, BigUint)> {
    let c = dyck_counts(d, n, DyckCountMode::StackDp)?;
    Ok((c.a, c.b, c.c))
}

/// |B_1|..|B_N|.
pub fn dyck_count_table(d: &DyckSystem, n_max: usize) -> Result<CountTable> {
    let counts = (1..=n_max)
        .map(|n| dyck_block_count(d, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(CountTable::new(CountKind::Block, counts))
}

/// Per-step growth factor c with |C_{n+1}| ≤ c·|C_n| claimed for X_f.
/// Unrestricted: 3. f = "()": 5/2. |f| = 2q otherwise: 2 + (4^{2q−1} − 1)/4^{2q−1}.
pub fn claimed_growth_factor(d: &DyckSystem) -> Ratio<u64> {
    match &d.forbidden {
        None => Ratio::from_integer(3),
        Some(f) if f.len() == 2 => Ratio::new(5, 2),
        Some(f) => {
            let m = 4u64.pow(f.len() as u32 - 1);
            Ratio::new(2 * m + m - 1, m)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyckEntropyReport {
    pub counts: CountTable,
    pub estimate: EntropyEstimate,
    /// Ratio extrapolation over the same window; see
    /// [`crate::spectra::ratio_extrapolation`].
    pub extrapolated: f64,
    /// log(|B_{n}| / |B_{n−1}|) for n = 2..=N.
    pub ratios: Vec<(usize, f64)>,
    /// log 3.
    pub unrestricted_entropy: f64,
    /// Claimed upper bound on h(X_f), when f is set.
    pub claimed_bound: Option<f64>,
    /// claimed_bound − estimate.
    pub margin: Option<f64>,
    /// Exact |B_3(X_f)|.
    pub b3: BigUint,
    /// Set when f is set and |B_3(X_f)| differs from 64, the value the
    /// averaging bound for longer f assumes.
    pub b3_flag: bool,
}

/// Slope/ratio entropy estimates from exact |B_n|, n ≤ N, with the claimed
/// bound for the forbidden word alongside.
pub fn dyck_entropy_report(
    d: &DyckSystem,
    n_max: usize,
    window: usize,
) -> Result<DyckEntropyReport> {
    let counts = dyck_count_table(d, n_max)?;
    let estimate = crate::spectra::entropy_from_counts(&counts, window)?;
    let ratios = (2..=counts.len())
        .map(|n| {
            let a = counts.get(n - 1).expect("in range");
            let b = counts.get(n).expect("in range");
            (n, ln_big(b) - ln_big(a))
        })
        .collect();
    let claimed_bound = d.forbidden.as_ref().map(|_| {
        let r = claimed_growth_factor(d);
        (*r.numer() as f64 / *r.denom() as f64).ln()
    });
    let b3 = dyck_block_count(d, 3)?;
    let extrapolated = ratio_extrapolation(counts.counts(), window.max(3))?;
    Ok(DyckEntropyReport {
        margin: claimed_bound.map(|b| b - estimate.point),
        estimate,
        extrapolated,
        counts,
        ratios,
        unrestricted_entropy: 3f64.ln(),
        claimed_bound,
        b3_flag: d.forbidden.is_some() && b3 != BigUint::from(64u32),
        b3,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCheck {
    pub factor: Ratio<u64>,
    /// (n, |C_n|, |C_{n+1}|, holds) for n = 1..N−1.
    pub rows: Vec<(usize, BigUint, BigUint, bool)>,
    pub violations: Vec<usize>,
}

/// Tests |C_{n+1}| ≤ factor·|C_n| on exact counts for n < N, with the
/// factor claimed for this system.
pub fn dyck_growth_inequality_check(d: &DyckSystem, n_max: usize) -> Result<GrowthCheck> {
    let factor = claimed_growth_factor(d);
    let c: Vec<BigUint> = (1..=n_max)
        .map(|n| dyck_abc_counts(d, n).map(|t| t.2))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for n in 1..n_max {
        let lhs = &c[n] * BigUint::from(*factor.denom());
        let rhs = &c[n - 1] * BigUint::from(*factor.numer());
        rows.push((n, c[n - 1].clone(), c[n].clone(), lhs <= rhs));
    }
    let violations = rows.iter().filter(|r| !r.3).map(|r| r.0).collect();
    Ok(GrowthCheck {
        factor,
        rows,
        violations,
    })
}

/// Σ_{i+j+k=n} |A_i|·|B_j balanced|·|C_k| with ε counted once in each class.
pub fn decomposition_bound(d: &DyckSystem, n: usize) -> Result<BigUint> {
    let mut a = vec![BigUint::from(1u32)];
    let mut b = vec![BigUint::from(1u32)];
    let mut c = vec![BigUint::from(1u32)];
    for k in 1..=n {
        let (x, y, z) = dyck_abc_counts(d, k)?;
        a.push(x);
        b.push(y);
        c.push(z);
    }
    let mut total = BigUint::zero();
    for i in 0..=n {
        for j in 0..=n - i {
            total += &a[i] * &b[j] * &c[n - i - j];
        }
    }
    Ok(total)
}
