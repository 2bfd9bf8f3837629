//! Solutions of `sum u_d d = 0 mod p^r - 1`, their digit weights, and the
//! p-density of an exponent set.
//!
//! A solution of length `r` is a closed walk of length `r` in the support
//! graph: consecutive support points satisfy `p e - e' = sum_d d v_d` where `v`
//! is a column of base-`p` digits. The density is therefore a minimum cycle
//! mean divided by `p - 1`, which Karp's algorithm computes exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_rational::Ratio;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Finite set of exponent vectors in `N^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentSet {
    n: usize,
    vectors: Vec<Vec<u32>>,
}

impl ExponentSet {
    pub fn new(n: usize, vectors: Vec<Vec<u32>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for d in &vectors {
            if d.len() != n {
                return Err(Error::Argument(format!(
                    "exponent {d:?} has dimension {} (expected {n})",
                    d.len()
                )));
            }
            if d.iter().all(|&x| x == 0) {
                return Err(Error::Argument("the zero exponent is not allowed".into()));
            }
            if !seen.insert(d.clone()) {
                return Err(Error::Argument(format!("duplicate exponent {d:?}")));
            }
        }
        Ok(ExponentSet { n, vectors })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vectors(&self) -> &[Vec<u32>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Some coordinate vanishes on every vector (always true when empty).
    pub fn hyperplane_contained(&self) -> bool {
        self.is_empty() || (0..self.n).any(|i| self.vectors.iter().all(|d| d[i] == 0))
    }

    /// Componentwise sum of all vectors.
    pub fn sum_vector(&self) -> Vec<u32> {
        (0..self.n)
            .map(|i| self.vectors.iter().map(|d| d[i]).sum())
            .collect()
    }

    /// Vectors supported in the coordinates `idx` (sorted), projected to them,
    /// with their positions in `self`.
    pub fn restrict(&self, idx: &[usize]) -> (ExponentSet, Vec<usize>) {
        let mut vecs = Vec::new();
        let mut pos = Vec::new();
        for (k, d) in self.vectors.iter().enumerate() {
            if (0..self.n).all(|i| idx.contains(&i) || d[i] == 0) {
                vecs.push(idx.iter().map(|&i| d[i]).collect());
                pos.push(k);
            }
        }
        (
            ExponentSet {
                n: idx.len(),
                vectors: vecs,
            },
            pos,
        )
    }
}

/// `p`-density: an exact rational or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Density {
    Finite(Ratio<i64>),
    Infinite,
}

impl Density {
    pub fn finite(&self) -> Option<Ratio<i64>> {
        match self {
            Density::Finite(r) => Some(*r),
            Density::Infinite => None,
        }
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Finite(r) => write!(f, "{r}"),
            Density::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Density {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A tuple `(u_d)` stored by base-`p` digits, lowest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Solution {
    p: u64,
    r: usize,
    digits: Vec<Vec<u64>>,
}

impl Solution {
    pub fn from_values(p: u64, r: usize, values: &[u128]) -> Self {
        let digits = values
            .iter()
            .map(|&u| {
                let mut u = u;
                (0..r)
                    .map(|_| {
                        let d = (u % p as u128) as u64;
                        u /= p as u128;
                        d
                    })
                    .collect()
            })
            .collect();
        Solution { p, r, digits }
    }

    pub fn from_digits(p: u64, digits: Vec<Vec<u64>>) -> Self {
        let r = digits.first().map_or(0, |d| d.len());
        Solution { p, r, digits }
    }

    pub fn len(&self) -> usize {
        self.r
    }

    pub fn is_empty(&self) -> bool {
        self.r == 0
    }

    pub fn digits(&self) -> &[Vec<u64>] {
        &self.digits
    }

    /// Digit column at position `i`, one entry per exponent.
    pub fn column(&self, i: usize) -> Vec<u64> {
        self.digits.iter().map(|d| d[i]).collect()
    }

    pub fn values(&self) -> Vec<u128> {
        self.digits
            .iter()
            .map(|ds| ds.iter().rev().fold(0u128, |acc, &d| acc * self.p as u128 + d as u128))
            .collect()
    }

    /// Total digit sum `s_p(U)`.
    pub fn weight(&self) -> u64 {
        self.digits.iter().flatten().sum()
    }

    /// Multiplication by `p` modulo `p^r - 1`, a rotation of every digit string.
    pub fn shift(&self) -> Solution {
        let digits = self
            .digits
            .iter()
            .map(|ds| {
                let mut out = vec![0; self.r];
                for (i, &d) in ds.iter().enumerate() {
                    out[(i + 1) % self.r] = d;
                }
                out
            })
            .collect();
        Solution {
            p: self.p,
            r: self.r,
            digits,
        }
    }

    fn weighted_sum(&self, set: &ExponentSet) -> Vec<u128> {
        let vals = self.values();
        (0..set.dim())
            .map(|i| {
                set.vectors()
                    .iter()
                    .zip(&vals)
                    .map(|(d, &u)| d[i] as u128 * u)
                    .sum()
            })
            .collect()
    }

    /// `[phi(0), ..., phi(r-1)]` with `phi(k) = (sum_d d u_d^{(k)}) / (p^r - 1)`
    /// for the `k`-th shift.
    pub fn support(&self, set: &ExponentSet) -> Vec<Vec<u64>> {
        let modulus = (self.p as u128).pow(self.r as u32) - 1;
        let mut cur = self.clone();
        let mut out = Vec::with_capacity(self.r);
        for _ in 0..self.r {
            out.push(
                cur.weighted_sum(set)
                    .into_iter()
                    .map(|s| (s / modulus) as u64)
                    .collect(),
            );
            cur = cur.shift();
        }
        out
    }

    pub fn is_solution(&self, set: &ExponentSet) -> bool {
        let modulus = (self.p as u128).pow(self.r as u32) - 1;
        self.weighted_sum(set)
            .iter()
            .all(|&s| s > 0 && s % modulus == 0)
    }

    /// Support map is injective.
    pub fn is_irreducible(&self, set: &ExponentSet) -> bool {
        let sup = self.support(set);
        let uniq: BTreeSet<_> = sup.iter().collect();
        uniq.len() == sup.len()
    }
}

/// Concatenates digits (`u` low, `u2` high); both must start at the same support point.
pub fn glue(set: &ExponentSet, u: &Solution, u2: &Solution) -> Result<Solution> {
    if u.p != u2.p || u.digits.len() != u2.digits.len() {
        return Err(Error::Argument("solutions for different problems".into()));
    }
    if u.support(set)[0] != u2.support(set)[0] {
        return Err(Error::Precondition(
            "solutions start at different support points".into(),
        ));
    }
    let digits = u
        .digits
        .iter()
        .zip(&u2.digits)
        .map(|(a, b)| a.iter().chain(b).copied().collect())
        .collect();
    Ok(Solution {
        p: u.p,
        r: u.r + u2.r,
        digits,
    })
}

/// `0` for `0`, otherwise the representative of `u mod p^r - 1` in `1..=p^r - 1`.
pub fn reduce_mod(u: u128, p: u64, r: u32) -> u128 {
    if u == 0 {
        return 0;
    }
    let m = (p as u128).pow(r) - 1;
    (u - 1) % m + 1
}

/// Every element of `E_{D,p}(r)`, by exhaustive scan of `[0, p^r)^{#D}`.
pub fn enumerate_solutions(set: &ExponentSet, p: u64, r: usize, budget: u128) -> Result<Vec<Solution>> {
    if r == 0 {
        return Err(Error::Argument("solution length must be positive".into()));
    }
    let side = (p as u128)
        .checked_pow(r as u32)
        .ok_or_else(|| Error::budget("solution enumeration", u128::MAX, budget))?;
    let total = side.checked_pow(set.len() as u32).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::budget(
            format!("enumerating E(r={r}) for {} exponents", set.len()),
            total,
            budget,
        ));
    }
    let modulus = side - 1;
    let mut out = Vec::new();
    let mut vals = vec![0u128; set.len()];
    for idx in 0..total {
        let mut t = idx;
        for v in vals.iter_mut() {
            *v = t % side;
            t /= side;
        }
        let ok = (0..set.dim()).all(|i| {
            let s: u128 = set
                .vectors()
                .iter()
                .zip(&vals)
                .map(|(d, &u)| d[i] as u128 * u)
                .sum();
            s > 0 && s % modulus == 0
        });
        if ok {
            out.push(Solution::from_values(p, r, &vals));
        }
    }
    Ok(out)
}

/// Minimum weight over `E_{D,p}(r)` (`None` if empty), by a digit-by-digit
/// carry recursion for each target `(p^r - 1) e` with `1 <= e <= sum D`.
pub fn s_min(set: &ExponentSet, p: u64, r: usize, budget: u128) -> Result<Option<u64>> {
    if r == 0 {
        return Err(Error::Argument("solution length must be positive".into()));
    }
    if set.hyperplane_contained() {
        return Ok(None);
    }
    let n = set.dim();
    let columns = digit_columns(set, p, budget)?;
    let boxv = set.sum_vector();
    let targets: u128 = boxv.iter().map(|&b| b as u128).product();
    let states: u128 = boxv.iter().map(|&b| b as u128 + 1).product();
    let work = targets * states * columns.len() as u128 * r as u128;
    if work > budget {
        return Err(Error::budget("carry recursion for s_min", work, budget));
    }
    let pr = (p as u128).pow(r as u32);
    let mut best: Option<u64> = None;
    for e in box_points(&boxv) {
        let t: Vec<u128> = e.iter().map(|&x| (pr - 1) * x as u128).collect();
        let mut dp: HashMap<Vec<u128>, u64> = HashMap::new();
        dp.insert(vec![0; n], 0);
        for i in 0..r {
            let digit: Vec<u128> = t
                .iter()
                .map(|&x| x / (p as u128).pow(i as u32) % p as u128)
                .collect();
            let mut next: HashMap<Vec<u128>, u64> = HashMap::new();
            for (carry, &w) in &dp {
                for (sum, cw) in &columns {
                    let s: Vec<u128> = (0..n).map(|j| carry[j] + sum[j] as u128).collect();
                    if (0..n).all(|j| s[j] % p as u128 == digit[j]) {
                        let c: Vec<u128> = (0..n).map(|j| (s[j] - digit[j]) / p as u128).collect();
                        let entry = next.entry(c).or_insert(u64::MAX);
                        *entry = (*entry).min(w + cw);
                    }
                }
            }
            dp = next;
        }
        let high: Vec<u128> = t.iter().map(|&x| x / pr).collect();
        if let Some(&w) = dp.get(&high) {
            best = Some(best.map_or(w, |b| b.min(w)));
        }
    }
    Ok(best)
}

/// `min_{r <= rmax} s(r) / (r (p-1))`, the brute-force side of the density.
pub fn density_upto(set: &ExponentSet, p: u64, rmax: usize, budget: u128) -> Result<Density> {
    let mut best: Option<Ratio<i64>> = None;
    for r in 1..=rmax {
        if let Some(s) = s_min(set, p, r, budget)? {
            let val = Ratio::new(s as i64, r as i64 * (p as i64 - 1));
            best = Some(best.map_or(val, |b| b.min(val)));
        }
    }
    Ok(best.map_or(Density::Infinite, Density::Finite))
}

/// `(sum_d d v_d, weight)` for every digit vector `v in [0, p)^{#D}`.
fn digit_columns(set: &ExponentSet, p: u64, budget: u128) -> Result<Vec<(Vec<u64>, u64)>> {
    Ok(digit_vectors(set.len(), p, budget)?
        .into_iter()
        .map(|v| {
            let sum = (0..set.dim())
                .map(|i| {
                    set.vectors()
                        .iter()
                        .zip(&v)
                        .map(|(d, &x)| d[i] as u64 * x)
                        .sum()
                })
                .collect();
            (sum, v.iter().sum())
        })
        .collect())
}

fn digit_vectors(len: usize, p: u64, budget: u128) -> Result<Vec<Vec<u64>>> {
    let total = (p as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::budget("digit vectors", total, budget));
    }
    Ok((0..total as u64)
        .map(|mut c| {
            (0..len)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect()
        })
        .collect())
}

/// All `e` with `1 <= e <= b` componentwise, first coordinate slowest.
fn box_points(b: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &bi in b {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=bi).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

// ---------------------------------------------------------------------------

/// Digit vectors carrying one support point to the next.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    /// All digit vectors `v` with `sum_d d v_d = p e - e'`.
    pub digits: Vec<Vec<u64>>,
    /// Minimum digit sum over `digits`.
    pub weight: u64,
}

/// Nodes are the points `1 <= e <= sum D`; see the module documentation.
#[derive(Clone, Debug)]
pub struct SupportGraph {
    p: u64,
    nodes: Vec<Vec<u32>>,
    edges: BTreeMap<(usize, usize), Edge>,
}

/// Edges with `(sum_d d v_d)` for every digit vector, checked against the box bound.
pub fn build_support_graph(set: &ExponentSet, p: u64, budget: u128) -> Result<SupportGraph> {
    if set.hyperplane_contained() {
        return Err(Error::DensityInfinite);
    }
    let boxv = set.sum_vector();
    let node_count: u128 = boxv.iter().map(|&b| b as u128).product();
    let cols = (p as u128).checked_pow(set.len() as u32).unwrap_or(u128::MAX);
    let work = node_count.saturating_mul(cols);
    if work > budget {
        return Err(Error::budget("support graph construction", work, budget));
    }
    let nodes = box_points(&boxv);
    let index: HashMap<Vec<u32>, usize> =
        nodes.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let columns = digit_vectors(set.len(), p, budget)?;
    let sums = digit_columns(set, p, budget)?;
    let mut edges: BTreeMap<(usize, usize), Edge> = BTreeMap::new();
    for (a, e) in nodes.iter().enumerate() {
        for (v, (sum, w)) in columns.iter().zip(&sums) {
            let target: Option<Vec<u32>> = e
                .iter()
                .zip(sum)
                .map(|(&ei, &si)| {
                    let t = p as i64 * ei as i64 - si as i64;
                    u32::try_from(t).ok()
                })
                .collect();
            let Some(target) = target else { continue };
            let Some(&b) = index.get(&target) else { continue };
            let edge = edges.entry((a, b)).or_insert(Edge {
                digits: Vec::new(),
                weight: u64::MAX,
            });
            edge.digits.push(v.clone());
            edge.weight = edge.weight.min(*w);
        }
    }
    Ok(SupportGraph { p, nodes, edges })
}

impl SupportGraph {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nodes(&self) -> &[Vec<u32>] {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), Edge> {
        &self.edges
    }

    pub fn node_index(&self, e: &[u32]) -> Option<usize> {
        self.nodes.iter().position(|x| x == e)
    }

    pub fn edge_between(&self, e: &[u32], e2: &[u32]) -> Option<&Edge> {
        let a = self.node_index(e)?;
        let b = self.node_index(e2)?;
        self.edges.get(&(a, b))
    }
}

/// Minimum cycle mean and the nodes and edges on cycles attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalCycles {
    pub mean: Ratio<i64>,
    pub nodes: BTreeSet<usize>,
    pub edges: BTreeSet<(usize, usize)>,
}

/// Karp's algorithm on the edge weights, then the tight subgraph of a
/// feasible potential for the reduced weights `den * w - num`.
pub fn min_mean_cycle(g: &SupportGraph) -> Result<CriticalCycles> {
    let arcs: Vec<(usize, usize, i64)> = g
        .edges
        .iter()
        .map(|(&(a, b), e)| (a, b, e.weight as i64))
        .collect();
    let (mean, crit_edges) = min_mean_cycle_arcs(g.nodes.len(), &arcs)?;
    let nodes = crit_edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    Ok(CriticalCycles {
        mean,
        nodes,
        edges: crit_edges,
    })
}

/// Minimum cycle mean of a weighted digraph and its critical edges.
pub fn min_mean_cycle_arcs(
    n: usize,
    arcs: &[(usize, usize, i64)],
) -> Result<(Ratio<i64>, BTreeSet<(usize, usize)>)> {
    if n == 0 {
        return Err(Error::DensityInfinite);
    }
    // dist[k][v]: least weight of a walk with exactly k arcs ending at v.
    let mut dist: Vec<Vec<Option<i64>>> = vec![vec![Some(0); n]];
    for k in 1..=n {
        let mut row = vec![None; n];
        for &(a, b, w) in arcs {
            if let Some(d) = dist[k - 1][a] {
                let cand = d + w;
                if row[b].is_none_or(|x: i64| cand < x) {
                    row[b] = Some(cand);
                }
            }
        }
        dist.push(row);
    }
    let mut mean: Option<Ratio<i64>> = None;
    for v in 0..n {
        let Some(dn) = dist[n][v] else { continue };
        let worst = (0..n)
            .filter_map(|k| dist[k][v].map(|dk| Ratio::new(dn - dk, (n - k) as i64)))
            .max();
        if let Some(w) = worst {
            mean = Some(mean.map_or(w, |m| m.min(w)));
        }
    }
    let mean = mean.ok_or(Error::DensityInfinite)?;

    let (num, den) = (*mean.numer(), *mean.denom());
    let reduced: Vec<(usize, usize, i64)> =
        arcs.iter().map(|&(a, b, w)| (a, b, den * w - num)).collect();
    let mut pot = vec![0i64; n];
    for _ in 0..n {
        let mut changed = false;
        for &(a, b, w) in &reduced {
            if pot[a] + w < pot[b] {
                pot[b] = pot[a] + w;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if reduced.iter().any(|&(a, b, w)| pot[a] + w < pot[b]) {
        return Err(Error::Internal(
            "reduced weights have a negative cycle".into(),
        ));
    }
    let tight: Vec<(usize, usize)> = reduced
        .iter()
        .filter(|&&(a, b, w)| pot[a] + w == pot[b])
        .map(|&(a, b, _)| (a, b))
        .collect();
    let mut graph = DiGraph::<(), ()>::new();
    let idx: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for &(a, b) in &tight {
        graph.add_edge(idx[a], idx[b], ());
    }
    let mut comp = vec![usize::MAX; n];
    for (c, scc) in tarjan_scc(&graph).into_iter().enumerate() {
        for v in scc {
            comp[v.index()] = c;
        }
    }
    let critical = tight
        .into_iter()
        .filter(|&(a, b)| comp[a] == comp[b])
        .collect();
    Ok((mean, critical))
}

/// `p`-density, minimal support and digit sets of one exponent set.
#[derive(Clone, Debug)]
pub struct DensityAnalysis {
    pub graph: SupportGraph,
    pub critical: CriticalCycles,
    pub density: Ratio<i64>,
}

pub fn analyze(set: &ExponentSet, p: u64, budget: u128) -> Result<DensityAnalysis> {
    let graph = build_support_graph(set, p, budget)?;
    let critical = min_mean_cycle(&graph)?;
    let density = critical.mean / Ratio::from_integer(p as i64 - 1);
    Ok(DensityAnalysis {
        graph,
        critical,
        density,
    })
}

/// `delta_p(D)`, infinite when `D` lies in a coordinate hyperplane.
pub fn density(set: &ExponentSet, p: u64, budget: u128) -> Result<Density> {
    match analyze(set, p, budget) {
        Ok(a) => Ok(Density::Finite(a.density)),
        Err(Error::DensityInfinite) => Ok(Density::Infinite),
        Err(e) => Err(e),
    }
}

/// Digit set attached to a critical edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DigitSet {
    pub from: Vec<u32>,
    pub to: Vec<u32>,
    pub digits: Vec<Vec<u64>>,
    pub weight: u64,
}

impl DensityAnalysis {
    /// The critical nodes, in increasing order.
    pub fn minimal_support(&self) -> Vec<Vec<u32>> {
        self.critical
            .nodes
            .iter()
            .map(|&i| self.graph.nodes[i].clone())
            .collect()
    }

    /// `V(e, e')` and its weight for every critical edge.
    pub fn digit_sets(&self) -> Vec<DigitSet> {
        self.critical
            .edges
            .iter()
            .map(|&(a, b)| {
                let edge = &self.graph.edges[&(a, b)];
                DigitSet {
                    from: self.graph.nodes[a].clone(),
                    to: self.graph.nodes[b].clone(),
                    digits: edge
                        .digits
                        .iter()
                        .filter(|v| v.iter().sum::<u64>() == edge.weight)
                        .cloned()
                        .collect(),
                    weight: edge.weight,
                }
            })
            .collect()
    }

    /// `V(e, e')` as a lookup table.
    pub fn digit_map(&self) -> BTreeMap<(Vec<u32>, Vec<u32>), Vec<Vec<u64>>> {
        self.digit_sets()
            .into_iter()
            .map(|s| ((s.from, s.to), s.digits))
            .collect()
    }

    /// Minimum weight of a solution of length `r`: `r (p-1) delta`.
    pub fn minimal_weight(&self, r: usize) -> Option<u64> {
        let w = self.critical.mean * Ratio::from_integer(r as i64);
        w.is_integer().then(|| w.to_integer() as u64)
    }
}

/// `V(e, e')` read off directly from the minimal irreducible solutions of
/// length at most `rmax`, found by exhaustive enumeration.
pub fn digit_sets_from_solutions(
    set: &ExponentSet,
    p: u64,
    analysis: &DensityAnalysis,
    rmax: usize,
    budget: u128,
) -> Result<BTreeMap<(Vec<u32>, Vec<u32>), BTreeSet<Vec<u64>>>> {
    let mut out: BTreeMap<(Vec<u32>, Vec<u32>), BTreeSet<Vec<u64>>> = BTreeMap::new();
    for r in 1..=rmax {
        let Some(w) = analysis.minimal_weight(r) else { continue };
        for u in enumerate_solutions(set, p, r, budget)? {
            if u.weight() != w || !u.is_irreducible(set) {
                continue;
            }
            let sup = u.support(set);
            let key = (to_u32(&sup[r - 1]), to_u32(&sup[0]));
            out.entry(key).or_default().insert(u.column(0));
        }
    }
    Ok(out)
}

fn to_u32(v: &[u64]) -> Vec<u32> {
    v.iter().map(|&x| x as u32).collect()
}

/// Result of comparing minimal solutions with a fixed support against the
/// product of digit sets along that support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionCheck {
    pub length: usize,
    pub supports_checked: usize,
    pub mismatches: Vec<String>,
}

/// For each length `r <= rmax`: the minimal solutions with support `phi` are
/// in bijection, via their digit columns, with `prod_i V(phi(-i-1), phi(-i))`.
pub fn check_digit_bijection(
    set: &ExponentSet,
    p: u64,
    analysis: &DensityAnalysis,
    rmax: usize,
    budget: u128,
) -> Result<Vec<BijectionCheck>> {
    let vmap = analysis.digit_map();
    let support_nodes = analysis.minimal_support();
    let mut out = Vec::new();
    for r in 1..=rmax {
        let mut mismatches = Vec::new();
        let mut by_support: BTreeMap<Vec<Vec<u32>>, BTreeSet<Vec<Vec<u64>>>> = BTreeMap::new();
        if let Some(w) = analysis.minimal_weight(r) {
            for u in enumerate_solutions(set, p, r, budget)? {
                if u.weight() != w {
                    continue;
                }
                let sup: Vec<Vec<u32>> = u.support(set).iter().map(|e| to_u32(e)).collect();
                let cols: Vec<Vec<u64>> = (0..r).map(|i| u.column(i)).collect();
                by_support.entry(sup).or_default().insert(cols);
            }
        }
        // Every support map Z/r -> Sigma with non-empty digit sets along it.
        let count = (support_nodes.len() as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
        if count > budget {
            return Err(Error::budget("support maps", count, budget));
        }
        let mut checked = 0;
        for code in 0..count {
            let mut c = code;
            let phi: Vec<Vec<u32>> = (0..r)
                .map(|_| {
                    let e = support_nodes[(c % support_nodes.len() as u128) as usize].clone();
                    c /= support_nodes.len() as u128;
                    e
                })
                .collect();
            // Digit position i joins phi(-i-1) to phi(-i).
            let at = |k: i64| phi[k.rem_euclid(r as i64) as usize].clone();
            let sets: Vec<Option<&Vec<Vec<u64>>>> = (0..r as i64)
                .map(|i| vmap.get(&(at(-i - 1), at(-i))))
                .collect();
            let expected: u128 = sets
                .iter()
                .map(|s| s.map_or(0, |v| v.len() as u128))
                .product();
            let found = by_support.remove(&phi).unwrap_or_default();
            if expected == 0 && found.is_empty() {
                continue;
            }
            checked += 1;
            if found.len() as u128 != expected {
                mismatches.push(format!(
                    "support {phi:?}: {} minimal solutions, digit product {expected}",
                    found.len()
                ));
                continue;
            }
            for cols in &found {
                let inside = cols
                    .iter()
                    .zip(&sets)
                    .all(|(col, s)| s.is_some_and(|v| v.contains(col)));
                if !inside {
                    mismatches.push(format!("support {phi:?}: digits {cols:?} outside product"));
                }
            }
        }
        for (phi, sols) in by_support {
            mismatches.push(format!(
                "{} minimal solutions with support {phi:?} outside the minimal support",
                sols.len()
            ));
        }
        out.push(BijectionCheck {
            length: r,
            supports_checked: checked,
            mismatches,
        });
    }
    Ok(out)
}

/// All subsets of `0..n` in increasing bitmask order, as sorted index lists.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// `delta_p(D_I)` for every coordinate subset `I`.
pub fn subset_densities(set: &ExponentSet, p: u64, budget: u128) -> Result<Vec<(Vec<usize>, Density)>> {
    subsets(set.dim())
        .into_iter()
        .map(|idx| {
            let (sub, _) = set.restrict(&idx);
            Ok((idx, density(&sub, p, budget)?))
        })
        .collect()
}
