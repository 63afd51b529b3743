//! Directed multigraphs and labeled graphs.
//!
//! Path counting and the certified Perron enclosure live on [`DiGraph`];
//! sofic-shift machinery (subset construction, Fischer covers, synchronizing
//! words, block counts) lives on [`LabeledGraph`].

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::shift::{sync_counterexample, Alphabet, Language, Symbol, SyncVerdict, Word};

/// Subset-construction states are capped at this many.
pub const SUBSET_CAP: usize = 1 << 16;

const ENTROPY_ITERATION_CAP: usize = 200_000;

/// Directed multigraph on vertices `0..n`; parallel edges allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Strongly connected components in topological order of the condensation
/// (sources first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
}

/// A closed real interval, in nats when it encloses an entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn widened(&self, by: f64) -> Enclosure {
        Enclosure {
            lo: self.lo - by,
            hi: self.hi + by,
        }
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

impl DiGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::input(format!(
                "edge ({u}, {v}) has an endpoint outside 0..{n}"
            )));
        }
        Ok(DiGraph { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn out_lists(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            out[u].push(v);
        }
        out
    }

    /// Dense adjacency matrix with edge multiplicities.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let mut a = vec![vec![0u64; self.n]; self.n];
        for &(u, v) in &self.edges {
            a[u][v] += 1;
        }
        a
    }

    /// Tarjan's algorithm, iterative.
    pub fn strongly_connected_components(&self) -> Components {
        let out = self.out_lists();
        let n = self.n;
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut next = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if *pos < out[v].len() {
                    let w = out[v][*pos];
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        // Tarjan emits sinks first.
        comps.reverse();
        let mut component_of = vec![0; n];
        for (c, comp) in comps.iter().enumerate() {
            for &v in comp {
                component_of[v] = c;
            }
        }
        Components {
            components: comps,
            component_of,
        }
    }

    /// True when the component carries a cycle, i.e. every ordered pair of
    /// its vertices (including a vertex with itself) is joined by a path.
    pub fn component_is_irreducible(&self, comp: &[usize]) -> bool {
        match comp {
            [] => false,
            [v] => self.edges.iter().any(|&(a, b)| a == *v && b == *v),
            _ => true,
        }
    }

    pub fn is_irreducible(&self) -> bool {
        let c = self.strongly_connected_components();
        c.components.len() == 1 && self.component_is_irreducible(&c.components[0])
    }

    fn require_irreducible(&self) -> Result<()> {
        if self.is_irreducible() {
            Ok(())
        } else {
            Err(Error::precondition("graph is not irreducible"))
        }
    }

    /// Induced subgraph on `vertices` (given in the order of the new indices).
    pub fn induced(&self, vertices: &[usize]) -> DiGraph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]))
            .collect();
        DiGraph {
            n: vertices.len(),
            edges,
        }
    }

    /// The gcd of all cycle lengths, from BFS level differences.
    pub fn period(&self) -> Result<u64> {
        self.require_irreducible()?;
        let out = self.out_lists();
        let mut level = vec![usize::MAX; self.n];
        level[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &v in &out[u] {
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let mut g = 0u64;
        for &(u, v) in &self.edges {
            let d = (level[u] as i64 + 1 - level[v] as i64).unsigned_abs();
            g = g.gcd(&d);
        }
        Ok(g)
    }

    /// Exact number of paths of length `n` from `from` to `to`.
    pub fn count_paths(&self, from: usize, to: usize, n: usize) -> Result<BigUint> {
        if from >= self.n || to >= self.n {
            return Err(Error::input("vertex out of range"));
        }
        let out = self.out_lists();
        let mut v = vec![BigUint::zero(); self.n];
        v[from] = BigUint::one();
        for _ in 0..n {
            let mut nv = vec![BigUint::zero(); self.n];
            for (u, succ) in out.iter().enumerate() {
                if v[u].is_zero() {
                    continue;
                }
                for &w in succ {
                    nv[w] += &v[u];
                }
            }
            v = nv;
        }
        Ok(std::mem::take(&mut v[to]))
    }

    /// Certified enclosure of h(G) = log λ, λ the Perron root.
    ///
    /// Power iteration runs in floating point on I + A, which is primitive
    /// whenever A is irreducible. Each candidate vector is then converted to
    /// exact rationals and the Collatz–Wielandt quotients min/max (Bx)_i/x_i
    /// are evaluated exactly, so the bounds hold regardless of rounding in the
    /// iteration.
    pub fn entropy(&self, tol: f64) -> Result<Enclosure> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::input("tolerance must be a positive finite number"));
        }
        self.require_irreducible()?;
        let n = self.n;
        let mut b = self.adjacency();
        for (i, row) in b.iter_mut().enumerate() {
            row[i] += 1;
        }
        let mut x = vec![1.0f64; n];
        let mut last: Option<Enclosure> = None;
        let mut exact_failures = 0;
        for _ in 0..ENTROPY_ITERATION_CAP {
            let y = mat_vec_f64(&b, &x);
            let (lo, hi) = ratio_bounds_f64(&y, &x);
            let approx_width = ((hi - 1.0).ln() - (lo - 1.0).max(1.0).ln()).abs();
            if approx_width <= 0.5 * tol || !approx_width.is_finite() {
                let enc = exact_enclosure(&b, &x);
                if enc.width() <= tol {
                    return Ok(enc);
                }
                last = Some(enc);
                exact_failures += 1;
                if exact_failures > 8 {
                    break;
                }
            }
            let scale = y.iter().cloned().fold(0.0f64, f64::max);
            x = y
                .iter()
                .map(|v| (v / scale).max(f64::MIN_POSITIVE))
                .collect();
        }
        let enc = last.unwrap_or_else(|| exact_enclosure(&b, &x));
        Err(Error::budget(format!(
            "entropy enclosure did not reach width {tol:e}; last enclosure [{:.15}, {:.15}]",
            enc.lo, enc.hi
        )))
    }

    /// Entropy of a possibly reducible graph: the largest entropy among its
    /// irreducible components, or `None` when the graph has no cycle.
    pub fn entropy_reducible(&self, tol: f64) -> Result<Option<Enclosure>> {
        let comps = self.strongly_connected_components();
        let mut best: Option<Enclosure> = None;
        for comp in comps.components {
            if !self.component_is_irreducible(&comp) {
                continue;
            }
            let e = self.induced(&comp).entropy(tol)?;
            best = Some(match best {
                Some(b) if b.midpoint() >= e.midpoint() => b,
                _ => e,
            });
        }
        Ok(best)
    }
}

fn mat_vec_f64(b: &[Vec<u64>], x: &[f64]) -> Vec<f64> {
    b.iter()
        .map(|row| row.iter().zip(x).map(|(&a, &xi)| a as f64 * xi).sum())
        .collect()
}

fn ratio_bounds_f64(y: &[f64], x: &[f64]) -> (f64, f64) {
    y.iter()
        .zip(x)
        .map(|(a, b)| a / b)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        })
}

fn exact_enclosure(b: &[Vec<u64>], x: &[f64]) -> Enclosure {
    let xr: Vec<BigRational> = x
        .iter()
        .map(|&v| BigRational::from_float(v).expect("finite positive entry"))
        .collect();
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for (row, xi) in b.iter().zip(&xr) {
        let mut acc = BigRational::zero();
        for (&a, xj) in row.iter().zip(&xr) {
            if a != 0 {
                acc += xj * BigRational::from_integer(BigInt::from(a));
            }
        }
        let r = acc / xi;
        if lo.as_ref().is_none_or(|l| &r < l) {
            lo = Some(r.clone());
        }
        if hi.as_ref().is_none_or(|h| &r > h) {
            hi = Some(r);
        }
    }
    let one = BigRational::one();
    let mut lam_lo = lo.expect("nonempty graph") - &one;
    let lam_hi = hi.expect("nonempty graph") - &one;
    // An irreducible nonnegative integer matrix has spectral radius ≥ 1.
    if lam_lo < one {
        lam_lo = one;
    }
    Enclosure {
        lo: log_down(&lam_lo),
        hi: log_up(&lam_hi),
    }
}

const LOG_SLACK: f64 = 4.0 * f64::EPSILON;

fn log_down(r: &BigRational) -> f64 {
    let f = r.to_f64().expect("finite rational");
    (f * (1.0 - LOG_SLACK)).ln() - LOG_SLACK
}

fn log_up(r: &BigRational) -> f64 {
    let f = r.to_f64().expect("finite rational");
    (f * (1.0 + LOG_SLACK)).ln() + LOG_SLACK
}

/// A directed multigraph whose edges carry alphabet symbols.
///
/// Vertices that cannot lie on a bi-infinite walk are kept in the edge list
/// but ignored by every language operation.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    n: usize,
    edges: Vec<(usize, usize, Symbol)>,
    live: Vec<bool>,
    // succ[v][a]: live targets of a-labeled edges leaving live vertex v
    succ: Vec<Vec<Vec<usize>>>,
    right_resolving: bool,
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.n == other.n && self.edges == other.edges
    }
}

/// Output of [`LabeledGraph::determinize`]: a right-resolving presentation
/// and, for each of its vertices, the subset of original vertices it stands
/// for.
#[derive(Debug, Clone)]
pub struct Determinized {
    pub graph: LabeledGraph,
    pub subsets: Vec<Vec<usize>>,
}

impl LabeledGraph {
    pub fn new(alphabet: Alphabet, n: usize, edges: Vec<(usize, usize, Symbol)>) -> Result<Self> {
        for &(u, v, a) in &edges {
            if u >= n || v >= n {
                return Err(Error::input(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if a >= alphabet.len() {
                return Err(Error::input(format!("edge label {a} outside the alphabet")));
            }
        }
        let live = essential_mask(n, &edges);
        let mut succ = vec![vec![Vec::new(); alphabet.len()]; n];
        let mut right_resolving = true;
        for &(u, v, a) in &edges {
            if live[u] && live[v] {
                succ[u][a].push(v);
            }
        }
        let mut seen = vec![vec![false; alphabet.len()]; n];
        for &(u, _, a) in &edges {
            if seen[u][a] {
                right_resolving = false;
            }
            seen[u][a] = true;
        }
        for row in succ.iter_mut() {
            for targets in row.iter_mut() {
                targets.sort_unstable();
                targets.dedup();
            }
        }
        Ok(LabeledGraph {
            alphabet,
            n,
            edges,
            live,
            succ,
            right_resolving,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, Symbol)] {
        &self.edges
    }

    /// For each vertex I, the edges starting at I carry different labels.
    pub fn is_right_resolving(&self) -> bool {
        self.right_resolving
    }

    fn require_right_resolving(&self) -> Result<()> {
        if self.right_resolving {
            Ok(())
        } else {
            Err(Error::precondition("labeled graph is not right-resolving"))
        }
    }

    pub fn underlying(&self) -> DiGraph {
        DiGraph {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v, _)| (u, v)).collect(),
        }
    }

    pub fn live_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.live[v]).collect()
    }

    /// Live a-successors of `v`.
    pub fn successors(&self, v: usize, a: Symbol) -> &[usize] {
        &self.succ[v][a]
    }

    /// The subgraph on vertices lying on bi-infinite walks, with the original
    /// index of each kept vertex.
    pub fn essential(&self) -> (LabeledGraph, Vec<usize>) {
        let kept = self.live_vertices();
        (self.restrict(&kept), kept)
    }

    fn restrict(&self, kept: &[usize]) -> LabeledGraph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in kept.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v, _)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v, a)| (pos[u], pos[v], a))
            .collect();
        LabeledGraph::new(self.alphabet.clone(), kept.len(), edges).expect("restriction is valid")
    }

    /// Image of a vertex set under reading one symbol.
    pub fn step(&self, set: &[usize], a: Symbol) -> Vec<usize> {
        let mut out: Vec<usize> = set
            .iter()
            .flat_map(|&v| self.succ[v][a].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Image of a vertex set under reading a word.
    pub fn step_word(&self, set: &[usize], w: &[Symbol]) -> Vec<usize> {
        let mut cur = set.to_vec();
        for &a in w {
            if cur.is_empty() {
                break;
            }
            cur = self.step(&cur, a);
        }
        cur
    }

    /// Subset construction started from `starts`, visiting reachable nonempty
    /// subsets in BFS order (symbols in alphabet order).
    fn subset_construction(&self, starts: Vec<Vec<usize>>) -> Result<Determinized> {
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::new();
        for s in starts {
            if !s.is_empty() && !index.contains_key(&s) {
                index.insert(s.clone(), subsets.len());
                queue.push_back(subsets.len());
                subsets.push(s);
            }
        }
        let mut edges = Vec::new();
        while let Some(i) = queue.pop_front() {
            for a in self.alphabet.symbols() {
                let t = self.step(&subsets[i], a);
                if t.is_empty() {
                    continue;
                }
                let j = match index.get(&t) {
                    Some(&j) => j,
                    None => {
                        if subsets.len() >= SUBSET_CAP {
                            return Err(Error::budget(format!(
                                "subset construction exceeded {SUBSET_CAP} states"
                            )));
                        }
                        let j = subsets.len();
                        index.insert(t.clone(), j);
                        subsets.push(t);
                        queue.push_back(j);
                        j
                    }
                };
                edges.push((i, j, a));
            }
        }
        let graph = LabeledGraph::new(self.alphabet.clone(), subsets.len(), edges)?;
        Ok(Determinized { graph, subsets })
    }

    /// Right-resolving presentation of the same shift by the subset
    /// construction from singletons, over the essential part of `self`.
    /// A right-resolving input comes back unchanged up to pruning.
    pub fn determinize(&self) -> Result<Determinized> {
        let starts = self.live_vertices().into_iter().map(|v| vec![v]).collect();
        let mut d = self.subset_construction(starts)?;
        // subsets reached only transiently are dropped with the graph pruning
        let (g, kept) = d.graph.essential();
        d.subsets = kept.iter().map(|&i| d.subsets[i].clone()).collect();
        d.graph = g;
        Ok(d)
    }

    /// The Fischer cover: the minimal right-resolving presentation of the
    /// irreducible sofic shift presented by `self`.
    ///
    /// Runs the subset construction from the full vertex set, merges states
    /// with equal follower sets by partition refinement, and keeps the unique
    /// terminal irreducible component (the states reached by synchronizing
    /// words). The result is checked to present the same language.
    pub fn fischer_cover(&self) -> Result<LabeledGraph> {
        let live = self.live_vertices();
        if live.is_empty() {
            return Err(Error::precondition("presentation has an empty shift space"));
        }
        let det = self.subset_construction(vec![live])?;
        let blocks = follower_partition(&det.graph);
        let block_count = blocks.iter().copied().max().map_or(0, |m| m + 1);

        // quotient; determinism makes each (block, symbol) edge unique
        let mut qedges = BTreeMap::new();
        for &(u, v, a) in det.graph.edges() {
            qedges.insert((blocks[u], a), blocks[v]);
        }
        let qgraph = DiGraph {
            n: block_count,
            edges: qedges.iter().map(|(&(u, _), &v)| (u, v)).collect(),
        };
        let comps = qgraph.strongly_connected_components();
        let sinks: Vec<&Vec<usize>> = comps
            .components
            .iter()
            .filter(|c| {
                qgraph.component_is_irreducible(c)
                    && qgraph.edges.iter().all(|&(u, v)| {
                        comps.component_of[u] != comps.component_of[c[0]]
                            || comps.component_of[v] == comps.component_of[c[0]]
                    })
            })
            .collect();
        if sinks.len() != 1 {
            return Err(Error::precondition(format!(
                "presentation is reducible: found {} terminal irreducible components",
                sinks.len()
            )));
        }
        let sink = sinks[0];

        // name each block by its lexicographically smallest member subset
        let mut names: Vec<(Vec<usize>, usize)> = sink
            .iter()
            .map(|&b| {
                let name = (0..det.subsets.len())
                    .filter(|&s| blocks[s] == b)
                    .map(|s| det.subsets[s].clone())
                    .min()
                    .expect("nonempty block");
                (name, b)
            })
            .collect();
        names.sort();
        let mut pos = vec![usize::MAX; block_count];
        for (i, (_, b)) in names.iter().enumerate() {
            pos[*b] = i;
        }
        let edges = qedges
            .iter()
            .filter(|(&(u, _), &v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|(&(u, a), &v)| (pos[u], pos[v], a))
            .collect();
        let cover = LabeledGraph::new(self.alphabet.clone(), names.len(), edges)?;
        if !same_language(self, &cover)? {
            return Err(Error::precondition(
                "presentation does not present an irreducible sofic shift",
            ));
        }
        Ok(cover)
    }

    /// Shortest word focusing every path onto a single terminal vertex, found
    /// by BFS over vertex subsets from the full (live) vertex set. Such a word
    /// is synchronizing for the presented shift.
    pub fn find_synchronizing_word(&self, max_len: usize) -> Result<Option<Word>> {
        self.require_right_resolving()?;
        let start = self.live_vertices();
        if start.is_empty() {
            return Ok(None);
        }
        if start.len() == 1 {
            return Ok(Some(Word::empty()));
        }
        let mut parent: HashMap<Vec<usize>, Option<(Vec<usize>, Symbol)>> = HashMap::new();
        parent.insert(start.clone(), None);
        let mut frontier = vec![start];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for set in &frontier {
                for a in self.alphabet.symbols() {
                    let t = self.step(set, a);
                    if t.is_empty() || parent.contains_key(&t) {
                        continue;
                    }
                    if parent.len() >= SUBSET_CAP {
                        return Err(Error::budget(format!(
                            "synchronizing-word search exceeded {SUBSET_CAP} subsets"
                        )));
                    }
                    parent.insert(t.clone(), Some((set.clone(), a)));
                    if t.len() == 1 {
                        let mut word = Vec::new();
                        let mut cur = t;
                        while let Some(Some((prev, a))) = parent.get(&cur) {
                            word.push(*a);
                            cur = prev.clone();
                        }
                        word.reverse();
                        return Ok(Some(Word(word)));
                    }
                    next.push(t);
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(None)
    }

    /// Synchronizing-word test on the presented language. A word that focuses
    /// a right-resolving presentation is certified; otherwise an exhaustive
    /// search for a counterexample runs up to `horizon`.
    pub fn is_synchronizing_word(&self, w: &Word, horizon: usize) -> Result<SyncVerdict> {
        self.alphabet.check(w)?;
        if !self.accepts(w) {
            return Err(Error::input("word is not admissible"));
        }
        if self.right_resolving && self.step_word(&self.live_vertices(), w).len() == 1 {
            return Ok(SyncVerdict::Yes);
        }
        Ok(match sync_counterexample(self, w, horizon) {
            Some((left, right)) => SyncVerdict::No { left, right },
            None => SyncVerdict::Unknown { horizon },
        })
    }

    /// Exact |B_n| of the presented shift by dynamic programming over subset
    /// states reachable from the full vertex set.
    pub fn block_count(&self, n: usize) -> BigUint {
        self.block_counts(n).pop().unwrap_or_else(BigUint::one)
    }

    /// |B_0|, ..., |B_n|.
    pub fn block_counts(&self, n: usize) -> Vec<BigUint> {
        let start = self.live_vertices();
        let mut out = vec![BigUint::one()];
        if start.is_empty() {
            out.extend(std::iter::repeat_n(BigUint::zero(), n));
            return out;
        }
        let mut cur: HashMap<Vec<usize>, BigUint> = HashMap::from([(start, BigUint::one())]);
        for _ in 0..n {
            let mut next: HashMap<Vec<usize>, BigUint> = HashMap::new();
            for (set, c) in &cur {
                for a in self.alphabet.symbols() {
                    let t = self.step(set, a);
                    if !t.is_empty() {
                        *next.entry(t).or_default() += c;
                    }
                }
            }
            out.push(next.values().sum());
            cur = next;
        }
        out
    }

    /// Presentation of the subsystem of points avoiding `w`: the product of
    /// `self` with a pattern matcher for `w`.
    pub fn forbid_word(&self, w: &[Symbol]) -> Result<LabeledGraph> {
        self.alphabet.check(w)?;
        if w.is_empty() {
            return Err(Error::input("cannot forbid the empty word"));
        }
        let m = crate::shift::Matcher::new(w);
        let k = w.len();
        let id = |v: usize, s: usize| v * k + s;
        let mut edges = Vec::new();
        for &(u, v, a) in &self.edges {
            for s in 0..k {
                let t = m.step(s, a);
                if t < k {
                    edges.push((id(u, s), id(v, t), a));
                }
            }
        }
        LabeledGraph::new(self.alphabet.clone(), self.n * k, edges)
    }
}

impl Language for LabeledGraph {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn accepts(&self, w: &[Symbol]) -> bool {
        let start = self.live_vertices();
        !start.is_empty() && !self.step_word(&start, w).is_empty()
    }

    fn presentation(&self) -> Option<LabeledGraph> {
        Some(self.clone())
    }
}

/// Vertices lying on bi-infinite walks: iteratively strip vertices without
/// an incoming or outgoing edge.
fn essential_mask(n: usize, edges: &[(usize, usize, Symbol)]) -> Vec<bool> {
    let mut live = vec![true; n];
    loop {
        let mut indeg = vec![0usize; n];
        let mut outdeg = vec![0usize; n];
        for &(u, v, _) in edges {
            if live[u] && live[v] {
                outdeg[u] += 1;
                indeg[v] += 1;
            }
        }
        let mut changed = false;
        for v in 0..n {
            if live[v] && (indeg[v] == 0 || outdeg[v] == 0) {
                live[v] = false;
                changed = true;
            }
        }
        if !changed {
            return live;
        }
    }
}

/// Coarsest partition of a deterministic graph's vertices into classes with
/// equal follower sets (Moore-style refinement to a fixed point).
fn follower_partition(g: &LabeledGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let k = g.alphabet.len();
    let mut delta = vec![vec![None; k]; n];
    for &(u, v, a) in g.edges() {
        delta[u][a] = Some(v);
    }
    let mut block = vec![0usize; n];
    let mut count = 1;
    loop {
        let mut sig_index: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
        let mut next = vec![0; n];
        for v in 0..n {
            let sig: Vec<Option<usize>> = delta[v].iter().map(|t| t.map(|t| block[t])).collect();
            let len = sig_index.len();
            next[v] = *sig_index.entry((block[v], sig)).or_insert(len);
        }
        let new_count = sig_index.len();
        block = next;
        if new_count == count {
            return block;
        }
        count = new_count;
    }
}

/// Decides B(X_a) = B(X_b) by simulating both subset automata together.
pub fn same_language(a: &LabeledGraph, b: &LabeledGraph) -> Result<bool> {
    if a.alphabet != b.alphabet {
        return Ok(false);
    }
    let start = (a.live_vertices(), b.live_vertices());
    if start.0.is_empty() != start.1.is_empty() {
        return Ok(false);
    }
    let mut seen = std::collections::HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((sa, sb)) = queue.pop_front() {
        for s in a.alphabet.symbols() {
            let ta = a.step(&sa, s);
            let tb = b.step(&sb, s);
            if ta.is_empty() != tb.is_empty() {
                return Ok(false);
            }
            if ta.is_empty() {
                continue;
            }
            let key = (ta, tb);
            if !seen.contains(&key) {
                if seen.len() >= SUBSET_CAP {
                    return Err(Error::budget("language comparison exceeded subset cap"));
                }
                seen.insert(key.clone());
                queue.push_back(key);
            }
        }
    }
    Ok(true)
}

/// Isomorphism of right-resolving labeled graphs preserving labels.
pub fn label_isomorphic(a: &LabeledGraph, b: &LabeledGraph) -> bool {
    if a.alphabet != b.alphabet || a.n != b.n || a.edges.len() != b.edges.len() {
        return false;
    }
    if !a.right_resolving || !b.right_resolving {
        return false;
    }
    let k = a.alphabet.len();
    let table = |g: &LabeledGraph| {
        let mut t = vec![vec![None; k]; g.n];
        for &(u, v, s) in &g.edges {
            t[u][s] = Some(v);
        }
        t
    };
    let (ta, tb) = (table(a), table(b));
    let mut map = vec![usize::MAX; a.n];
    let mut used = vec![false; b.n];
    extend_iso(&ta, &tb, &mut map, &mut used)
}

fn extend_iso(
    ta: &[Vec<Option<usize>>],
    tb: &[Vec<Option<usize>>],
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let Some(root) = map.iter().position(|&m| m == usize::MAX) else {
        return true;
    };
    for cand in 0..tb.len() {
        if used[cand] {
            continue;
        }
        let (saved_map, saved_used) = (map.clone(), used.clone());
        if propagate(ta, tb, root, cand, map, used) && extend_iso(ta, tb, map, used) {
            return true;
        }
        *map = saved_map;
        *used = saved_used;
    }
    false
}

fn propagate(
    ta: &[Vec<Option<usize>>],
    tb: &[Vec<Option<usize>>],
    root: usize,
    cand: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let mut stack = vec![(root, cand)];
    while let Some((u, v)) = stack.pop() {
        if map[u] != usize::MAX {
            if map[u] != v {
                return false;
            }
            continue;
        }
        if used[v] {
            return false;
        }
        map[u] = v;
        used[v] = true;
        for (ea, eb) in ta[u].iter().zip(&tb[v]) {
            match (ea, eb) {
                (Some(x), Some(y)) => stack.push((*x, *y)),
                (None, None) => {}
                _ => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::SftPresentation;

    fn alphabet01() -> Alphabet {
        Alphabet::new(["0", "1"]).unwrap()
    }

    pub(crate) fn even_cover() -> LabeledGraph {
        LabeledGraph::new(alphabet01(), 2, vec![(0, 0, 0), (0, 1, 1), (1, 0, 1)]).unwrap()
    }

    fn golden_graph() -> LabeledGraph {
        LabeledGraph::new(alphabet01(), 2, vec![(0, 0, 0), (0, 1, 1), (1, 0, 0)]).unwrap()
    }

    #[test]
    fn scc_examples() {
        let g = DiGraph::new(1, vec![(0, 0)]).unwrap();
        assert_eq!(g.strongly_connected_components().components, vec![vec![0]]);
        let g = DiGraph::new(2, vec![(0, 1)]).unwrap();
        let c = g.strongly_connected_components();
        assert_eq!(c.components, vec![vec![0], vec![1]]);
        assert!(!g.component_is_irreducible(&[0]));
        let g = DiGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(
            g.strongly_connected_components().components,
            vec![vec![0, 1, 2]]
        );
    }

    #[test]
    fn period_examples() {
        assert_eq!(DiGraph::new(1, vec![(0, 0)]).unwrap().period().unwrap(), 1);
        let cycle3 = DiGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(cycle3.period().unwrap(), 3);
        // loops of length 4 and 6 through vertex 0
        let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
        edges.extend([(0, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 0)]);
        assert_eq!(DiGraph::new(9, edges).unwrap().period().unwrap(), 2);
        let g = DiGraph::new(2, vec![(0, 1)]).unwrap();
        assert!(matches!(g.period(), Err(Error::Precondition(_))));
    }

    #[test]
    fn path_counts() {
        let g = DiGraph::new(1, vec![(0, 0)]).unwrap();
        assert_eq!(g.count_paths(0, 0, 7).unwrap(), BigUint::one());
        let golden = DiGraph::new(2, vec![(0, 0), (0, 1), (1, 0)]).unwrap();
        assert_eq!(golden.count_paths(0, 0, 4).unwrap(), BigUint::from(5u32));
        let split = DiGraph::new(2, vec![(0, 0), (1, 1)]).unwrap();
        for n in 1..6 {
            assert!(split.count_paths(0, 1, n).unwrap().is_zero());
        }
    }

    #[test]
    fn entropy_enclosures() {
        let full = DiGraph::new(1, vec![(0, 0), (0, 0)]).unwrap();
        let e = full.entropy(1e-9).unwrap();
        assert!(e.contains(2f64.ln()) && e.width() <= 1e-9);
        let golden = DiGraph::new(2, vec![(0, 0), (0, 1), (1, 0)]).unwrap();
        let e = golden.entropy(1e-6).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(e.contains(phi.ln()) && e.width() <= 1e-6, "{e:?}");
        let cycle3 = DiGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let e = cycle3.entropy(1e-9).unwrap();
        assert!(e.contains(0.0));
        assert!(matches!(
            DiGraph::new(2, vec![(0, 1)]).unwrap().entropy(1e-6),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(golden.entropy(1e-30), Err(Error::Budget(_))));
    }

    #[test]
    fn determinize_examples() {
        let g = golden_graph();
        let d = g.determinize().unwrap();
        assert!(label_isomorphic(&d.graph, &g));
        // both out-edges of vertex 0 read "a"
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let g = LabeledGraph::new(ab, 2, vec![(0, 0, 0), (0, 1, 0), (1, 0, 1)]).unwrap();
        let d = g.determinize().unwrap();
        assert!(d.graph.is_right_resolving());
        assert!(d.subsets.contains(&vec![0, 1]));
        assert!(same_language(&g, &d.graph).unwrap());
        // a dangling vertex contributes nothing
        let g = LabeledGraph::new(
            alphabet01(),
            3,
            vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (0, 2, 0)],
        )
        .unwrap();
        let d = g.determinize().unwrap();
        assert_eq!(d.graph.vertex_count(), 2);
    }

    #[test]
    fn fischer_cover_examples() {
        // even shift with vertex 2 duplicating vertex 0
        let redundant = LabeledGraph::new(
            alphabet01(),
            3,
            vec![(0, 0, 0), (0, 1, 1), (1, 2, 1), (2, 0, 0), (2, 1, 1)],
        )
        .unwrap();
        let f = redundant.fischer_cover().unwrap();
        assert_eq!(f.vertex_count(), 2);
        assert!(label_isomorphic(&f, &even_cover()));

        let full_dup = LabeledGraph::new(
            alphabet01(),
            2,
            vec![(0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 1, 1)],
        )
        .unwrap();
        let f = full_dup.fischer_cover().unwrap();
        assert_eq!(f.vertex_count(), 1);
        assert_eq!(f.edges().len(), 2);

        let g = golden_graph();
        assert!(label_isomorphic(&g.fischer_cover().unwrap(), &g));
    }

    #[test]
    fn fischer_cover_rejects_reducible() {
        // 0^∞ feeding into 1^∞: two irreducible pieces
        let g = LabeledGraph::new(alphabet01(), 2, vec![(0, 0, 0), (0, 1, 1), (1, 1, 1)]).unwrap();
        assert!(matches!(g.fischer_cover(), Err(Error::Precondition(_))));
        // two disjoint loops
        let g = LabeledGraph::new(alphabet01(), 2, vec![(0, 0, 0), (1, 1, 1)]).unwrap();
        assert!(matches!(g.fischer_cover(), Err(Error::Precondition(_))));
    }

    #[test]
    fn synchronizing_word_search() {
        let w = even_cover().find_synchronizing_word(8).unwrap().unwrap();
        assert_eq!(w, Word(vec![0]));
        let full = LabeledGraph::new(alphabet01(), 1, vec![(0, 0, 0), (0, 0, 1)]).unwrap();
        assert_eq!(
            full.find_synchronizing_word(4).unwrap(),
            Some(Word::empty())
        );
        let twins = LabeledGraph::new(alphabet01(), 2, vec![(0, 0, 0), (1, 1, 0)]).unwrap();
        assert_eq!(twins.find_synchronizing_word(10).unwrap(), None);
        let nondet =
            LabeledGraph::new(alphabet01(), 2, vec![(0, 0, 0), (0, 1, 0), (1, 0, 1)]).unwrap();
        assert!(matches!(
            nondet.find_synchronizing_word(3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn even_shift_sync_verdicts() {
        let g = even_cover();
        assert_eq!(
            g.is_synchronizing_word(&Word(vec![0]), 6).unwrap(),
            SyncVerdict::Yes
        );
        match g.is_synchronizing_word(&Word(vec![1]), 6).unwrap() {
            SyncVerdict::No { left, right } => {
                let uwv = Word::concat(&[&left, &[1], &right]);
                assert!(g.accepts(&Word::concat(&[&left, &[1]])));
                assert!(g.accepts(&Word::concat(&[&[1], &right])));
                assert!(!g.accepts(&uwv));
                assert_eq!((left, right), (Word(vec![0]), Word(vec![0])));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sofic_counts() {
        let full = LabeledGraph::new(alphabet01(), 1, vec![(0, 0, 0), (0, 0, 1)]).unwrap();
        for n in 0..10 {
            assert_eq!(full.block_count(n), BigUint::from(1u32 << n));
        }
        // oracle: binary words whose 1-runs bounded by 0 on both sides are even
        let even_oracle = |n: usize| {
            (0u32..1 << n)
                .filter(|&bits| {
                    let w: Vec<u32> = (0..n).map(|i| (bits >> i) & 1).collect();
                    let zeros: Vec<usize> = (0..n).filter(|&i| w[i] == 0).collect();
                    zeros.windows(2).all(|z| (z[1] - z[0] - 1) % 2 == 0)
                })
                .count() as u32
        };
        let even: Vec<u32> = even_cover().block_counts(10)[1..]
            .iter()
            .map(|c| c.to_u32().unwrap())
            .collect();
        let expected: Vec<u32> = (1..=10).map(even_oracle).collect();
        assert_eq!(even, expected);
        assert_eq!(&even[..5], &[2, 4, 7, 12, 20]);
        assert_eq!(golden_graph().block_count(3), BigUint::from(5u32));
    }

    #[test]
    fn forbidding_a_word_presents_the_subsystem() {
        let sft = SftPresentation::parse(&["0", "1"], &["11"]).unwrap();
        let sub = sft.with_forbidden(Word(vec![0, 0])).unwrap();
        let g = golden_graph().forbid_word(&[0, 0]).unwrap();
        for n in 0..9 {
            assert_eq!(g.block_count(n), sub.block_count(n));
        }
    }
}
