//! Digit matrices `M(Gamma_I)`, their Frobenius-twisted products and the
//! product of characteristic series predicted for the L-function, together
//! with truncated Fredholm determinants of the Dwork operator used as an
//! independent route to the same L-function.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::density::{analyze, density, subsets, Density, DensityAnalysis, ExponentSet};
use crate::error::{Error, Result};
use crate::matrix::{charpoly_divfree, determinant_leibniz, Matrix};
use crate::padic::{digit_sum, lambda_coeffs, PadicScalar, RamCtx};
use crate::problem::{Correction, Problem, SignConvention};
use crate::series::TruncatedSeries;

/// Everything derived from a problem before any determinant is taken:
/// the density, the ramified ring that realizes its fractional powers of
/// `pi`, and the Teichmuller lifts of the coefficients.
#[derive(Clone, Debug)]
pub struct Setup {
    problem: Problem,
    analysis: DensityAnalysis,
    u: u64,
    v: u64,
    ram: Arc<RamCtx>,
    gamma: Vec<PadicScalar>,
    kmax: usize,
    budget: u128,
}

impl Setup {
    /// `precision` is the `p`-adic precision `K`; by default the smallest `K`
    /// with `e K > m u kmax + e`.
    pub fn new(problem: Problem, kmax: usize, precision: Option<u32>, budget: u128) -> Result<Self> {
        let p = problem.p();
        let m = problem.m() as u64;
        let analysis = analyze(problem.set(), p, budget)?;
        let scaled = analysis.critical.mean;
        let u = *scaled.numer() as u64;
        let v = *scaled.denom() as u64;
        let e = v * (p - 1);
        let top = m * u * kmax as u64;
        let k = match precision {
            Some(k) if k as u64 * e > top => k,
            Some(k) => {
                return Err(Error::Precision(format!(
                    "precision {k} gives cap {} but the threshold at degree {kmax} is {}",
                    k as u64 * e,
                    top + 1
                )))
            }
            None => ((top + e) / e + 1) as u32,
        };
        let ram = RamCtx::new(p, problem.m(), v, k)?;
        let gamma = problem
            .coeffs()
            .iter()
            .map(|c| Ok(PadicScalar::from_om(&ram, &ram.base().teichmuller(c)?)))
            .collect::<Result<_>>()?;
        Ok(Setup {
            problem,
            analysis,
            u,
            v,
            ram,
            gamma,
            kmax,
            budget,
        })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn analysis(&self) -> &DensityAnalysis {
        &self.analysis
    }

    pub fn delta(&self) -> Ratio<i64> {
        self.analysis.density
    }

    /// Numerator of `(p-1) delta` in lowest terms.
    pub fn u(&self) -> u64 {
        self.u
    }

    /// Denominator of `(p-1) delta`; `w^v = pi`.
    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn ram(&self) -> &Arc<RamCtx> {
        &self.ram
    }

    /// Teichmuller lifts, aligned with `problem().set().vectors()`.
    pub fn gamma(&self) -> &[PadicScalar] {
        &self.gamma
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn budget(&self) -> u128 {
        self.budget
    }

    /// Smallest `v_w` of `a_k - b_k` allowed at degree `k`: `m u k + 1`.
    pub fn threshold(&self, k: usize) -> u64 {
        self.problem.m() as u64 * self.u * k as u64 + 1
    }

    fn scalar_int(&self, n: &BigInt) -> PadicScalar {
        PadicScalar::from_bigint(&self.ram, n)
    }

    fn q_pow(&self, e: usize) -> BigInt {
        BigInt::from(self.problem.q()).pow(e as u32)
    }
}

/// `M(Gamma)` with rows and columns labelled by the minimal support.
#[derive(Clone, Debug)]
pub struct DigitMatrix {
    pub labels: Vec<Vec<u32>>,
    pub matrix: Matrix<PadicScalar>,
}

/// `m_{e,e'} = sum_{V in V(e,e')} prod_d gamma_d^{v_d} / v_d!`.
///
/// `gamma` is aligned with the vectors of the analysed set.
pub fn build_m(analysis: &DensityAnalysis, gamma: &[PadicScalar], ram: &Arc<RamCtx>) -> Result<DigitMatrix> {
    let labels = analysis.minimal_support();
    let map = analysis.digit_map();
    let zero = PadicScalar::zero(ram);
    let mut rows = Vec::with_capacity(labels.len());
    for a in &labels {
        let mut row = Vec::with_capacity(labels.len());
        for b in &labels {
            let mut entry = zero.clone();
            if let Some(digits) = map.get(&(a.clone(), b.clone())) {
                for vd in digits {
                    let mut term = PadicScalar::from_int(ram, 1);
                    let mut fact = BigInt::one();
                    for (g, &k) in gamma.iter().zip(vd) {
                        term = term * pow(g, k);
                        for t in 2..=k {
                            fact *= t;
                        }
                    }
                    entry = entry + term.div_int(&fact)?;
                }
            }
            row.push(entry);
        }
        rows.push(row);
    }
    Ok(DigitMatrix {
        labels,
        matrix: if rows.is_empty() { Matrix::from_fn(0, |_, _| zero.clone()) } else { Matrix::from_rows(rows) },
    })
}

fn pow(a: &PadicScalar, k: u64) -> PadicScalar {
    crate::ring::Ring::pow_u(a, k)
}

/// `tau^{m-1}(M) ... tau(M) M`.
pub fn twisted_product(m: &Matrix<PadicScalar>, degree: usize) -> Matrix<PadicScalar> {
    let mut acc = m.clone();
    let mut cur = m.clone();
    for _ in 1..degree {
        cur = cur.map(|x| x.frobenius());
        acc = cur.mul(&acc);
    }
    acc
}

/// One determinant of the predicted product, before its exponent is applied.
#[derive(Clone, Debug)]
pub struct RhsFactor {
    pub subset: Vec<usize>,
    pub density: Ratio<i64>,
    /// `(-1)^{#I+1}`.
    pub exponent: i64,
    pub digit_matrix: DigitMatrix,
    /// Power of `w` in the scaling.
    pub varpi_power: u64,
    /// Power of `q` in the scaling.
    pub q_power: usize,
    pub series: TruncatedSeries<PadicScalar>,
}

/// Coordinate sets `I` with `delta_p(D_I) + n - #I = delta_p(D)`, with `delta_p(D_I)`.
pub fn qualifying_subsets(setup: &Setup) -> Result<Vec<(Vec<usize>, Ratio<i64>)>> {
    let n = setup.problem.n() as i64;
    let set = setup.problem.set();
    let mut out = Vec::new();
    for idx in subsets(set.dim()) {
        let (sub, _) = set.restrict(&idx);
        if let Density::Finite(d) = density(&sub, setup.problem.p(), setup.budget)? {
            if d + Ratio::from_integer(n - idx.len() as i64) == setup.delta() {
                out.push((idx, d));
            }
        }
    }
    Ok(out)
}

/// `det(I - c T tau^{m-1}(M) ... M)` for the restriction `D_I`, where `c` is
/// `q^{n-#I} pi^{m (p-1) delta_I}` (`Proof`) or `pi^{m (p-1) delta}` (`Literal`).
pub fn rhs_factor(setup: &Setup, subset: &[usize], convention: SignConvention) -> Result<RhsFactor> {
    let pr = &setup.problem;
    let (sub, pos) = pr.set().restrict(subset);
    let analysis = analyze(&sub, pr.p(), setup.budget)?;
    let gamma: Vec<PadicScalar> = pos.iter().map(|&k| setup.gamma[k].clone()).collect();
    let dm = build_m(&analysis, &gamma, &setup.ram)?;
    let tw = twisted_product(&dm.matrix, pr.m());
    let m = pr.m() as u64;
    let (varpi_power, q_power) = match convention {
        SignConvention::Proof => {
            let scaled = analysis.critical.mean * Ratio::from_integer(setup.v as i64);
            if !scaled.is_integer() {
                return Err(Error::Internal(format!(
                    "(p-1) delta for {subset:?} is {} but w^{} = pi",
                    analysis.critical.mean, setup.v
                )));
            }
            (m * scaled.to_integer() as u64, pr.n() - subset.len())
        }
        SignConvention::Literal => (m * setup.u, 0),
        SignConvention::Both => {
            return Err(Error::Argument("a single factor needs one scaling convention".into()))
        }
    };
    let c = PadicScalar::varpi_pow(&setup.ram, varpi_power) * setup.scalar_int(&setup.q_pow(q_power));
    let one = PadicScalar::from_int(&setup.ram, 1);
    let series = charpoly_divfree(&tw.scale(&c), setup.kmax, &one);
    Ok(RhsFactor {
        subset: subset.to_vec(),
        density: analysis.density,
        exponent: if subset.len() % 2 == 1 { 1 } else { -1 },
        digit_matrix: dm,
        varpi_power,
        q_power,
        series,
    })
}

/// The assembled product of factors.
#[derive(Clone, Debug)]
pub struct RhsAssembly {
    pub factors: Vec<RhsFactor>,
    pub correction_applied: bool,
    pub series: TruncatedSeries<PadicScalar>,
}

/// Whether the factor `(1 - q^n T)^{-1}` is used.
pub fn correction_applies(setup: &Setup, correction: Correction) -> bool {
    match correction {
        Correction::On => true,
        Correction::Off => false,
        Correction::Auto => setup.delta() == Ratio::from_integer(setup.problem.n() as i64),
    }
}

/// `prod_I factor_I^{(-1)^{#I+1}}`, optionally times `(1 - q^n T)^{-1}`.
pub fn rhs_assemble(setup: &Setup, correction: Correction, convention: SignConvention) -> Result<RhsAssembly> {
    let one = PadicScalar::from_int(&setup.ram, 1);
    let mut series = TruncatedSeries::one(&one, setup.kmax);
    let mut factors = Vec::new();
    for (idx, _) in qualifying_subsets(setup)? {
        let f = rhs_factor(setup, &idx, convention)?;
        series = series.mul(&f.series.powi(f.exponent)?);
        factors.push(f);
    }
    let correction_applied = correction_applies(setup, correction);
    if correction_applied {
        let qn = setup.scalar_int(&setup.q_pow(setup.problem.n()));
        series = series.mul(&TruncatedSeries::one_minus(qn, setup.kmax).inverse()?);
    }
    Ok(RhsAssembly {
        factors,
        correction_applied,
        series,
    })
}

// ---------------------------------------------------------------------------

/// Row-major indexing of the box `[0, extent_0] x ... x [0, extent_{n-1}]`.
#[derive(Clone, Debug)]
struct BoxIndex {
    extent: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl BoxIndex {
    fn new(extent: &[usize], budget: u128) -> Result<Self> {
        let mut strides = vec![0; extent.len()];
        let mut size: u128 = 1;
        for i in (0..extent.len()).rev() {
            strides[i] = size as usize;
            size *= extent[i] as u128 + 1;
            if size > budget {
                return Err(Error::budget("coefficient box", size, budget));
            }
        }
        Ok(BoxIndex {
            extent: extent.to_vec(),
            strides,
            size: size as usize,
        })
    }

    fn flat(&self, k: &[usize]) -> Option<usize> {
        let mut f = 0;
        for ((&x, &e), &s) in k.iter().zip(&self.extent).zip(&self.strides) {
            if x > e {
                return None;
            }
            f += x * s;
        }
        Some(f)
    }

    fn unflat(&self, mut f: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|&s| {
                let x = f / s;
                f %= s;
                x
            })
            .collect()
    }
}

/// Largest `u` with `u d <= extent` coordinatewise.
fn max_multiple(d: &[u32], extent: &[usize]) -> usize {
    d.iter()
        .zip(extent)
        .filter(|(&x, _)| x > 0)
        .map(|(&x, &e)| e / x as usize)
        .min()
        .unwrap_or(0)
}

/// Coefficients `f_i` of `prod_d theta_level(gamma_d X^d)` on a box, where
/// `theta_level(X) = exp(pi X - pi X^{p^level})`.
#[derive(Clone, Debug)]
pub struct FmTable {
    level: usize,
    index: BoxIndex,
    values: Vec<PadicScalar>,
}

impl FmTable {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn extent(&self) -> &[usize] {
        &self.index.extent
    }

    /// `f_k`, or `None` outside the box.
    pub fn get(&self, k: &[usize]) -> Option<&PadicScalar> {
        self.index.flat(k).map(|f| &self.values[f])
    }
}

/// `f^{(level)}_i = sum_{sum u_d d = i} prod_d lambda^{(level)}_{u_d} gamma_d^{u_d}`
/// for every `i` in `[0, extent]`.
pub fn fm_coefficients(setup: &Setup, level: usize, extent: &[usize]) -> Result<FmTable> {
    let pr = &setup.problem;
    if extent.len() != pr.n() {
        return Err(Error::Argument("extent has the wrong dimension".into()));
    }
    let index = BoxIndex::new(extent, setup.budget)?;
    let ram = &setup.ram;
    let umax = pr
        .set()
        .vectors()
        .iter()
        .map(|d| max_multiple(d, extent))
        .max()
        .unwrap_or(0);
    let lam: Vec<PadicScalar> = lambda_coeffs(pr.p(), level, umax as u64)?
        .iter()
        .map(|l| PadicScalar::from_exact(ram, l))
        .collect::<Result<_>>()?;
    let zero = PadicScalar::zero(ram);
    let mut values = vec![zero.clone(); index.size];
    values[0] = PadicScalar::from_int(ram, 1);
    for (d, g) in pr.set().vectors().iter().zip(&setup.gamma) {
        let um = max_multiple(d, extent);
        let mut coef = Vec::with_capacity(um + 1);
        let mut gp = PadicScalar::from_int(ram, 1);
        for l in lam.iter().take(um + 1) {
            coef.push(l.clone() * gp.clone());
            gp = gp * g.clone();
        }
        let mut next = vec![zero.clone(); index.size];
        for (f, slot) in next.iter_mut().enumerate() {
            let k = index.unflat(f);
            let mut acc = zero.clone();
            for (u, c) in coef.iter().enumerate() {
                let shifted: Option<Vec<usize>> = k
                    .iter()
                    .zip(d)
                    .map(|(&x, &dd)| x.checked_sub(u * dd as usize))
                    .collect();
                let Some(s) = shifted else { break };
                let prev = &values[index.flat(&s).expect("inside box")];
                if !prev.is_zero() && !c.is_zero() {
                    acc = acc + c.clone() * prev.clone();
                }
            }
            *slot = acc;
        }
        values = next;
    }
    Ok(FmTable { level, index, values })
}

/// Indices with support exactly `subset` and coordinates at most `bound`.
pub fn support_indices(n: usize, subset: &[usize], bound: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; n]];
    for &c in subset {
        out = out
            .into_iter()
            .flat_map(|i| {
                (1..=bound).map(move |x| {
                    let mut j = i.clone();
                    j[c] = x;
                    j
                })
            })
            .collect();
    }
    out
}

/// The matrix `(f_{q i - j})_{i, j}` over the given indices.
pub fn operator_matrix(table: &FmTable, q: u64, indices: &[Vec<usize>]) -> Result<Matrix<PadicScalar>> {
    let zero = PadicScalar::zero(table.values[0].ctx());
    let mut rows = Vec::with_capacity(indices.len());
    for i in indices {
        let mut row = Vec::with_capacity(indices.len());
        for j in indices {
            let k: Option<Vec<usize>> = i
                .iter()
                .zip(j)
                .map(|(&a, &b)| (a * q as usize).checked_sub(b))
                .collect();
            row.push(match k {
                None => zero.clone(),
                Some(k) => table
                    .get(&k)
                    .ok_or_else(|| Error::Precondition(format!("index {k:?} outside the coefficient table")))?
                    .clone(),
            });
        }
        rows.push(row);
    }
    Ok(if rows.is_empty() { Matrix::from_fn(0, |_, _| zero.clone()) } else { Matrix::from_rows(rows) })
}

/// Table extent needed for indices up to `bound`.
pub fn table_extent(setup: &Setup, bound: usize) -> Vec<usize> {
    vec![(setup.problem.q() as usize * bound).saturating_sub(1); setup.problem.n()]
}

/// `det(I - T A_J)` with `A_J` restricted to indices of support exactly `J`
/// and coordinates at most `bound`.
pub fn fredholm_truncated(
    setup: &Setup,
    table: &FmTable,
    subset: &[usize],
    bound: usize,
    kmax: usize,
) -> Result<TruncatedSeries<PadicScalar>> {
    let idx = support_indices(setup.problem.n(), subset, bound);
    let a = operator_matrix(table, setup.problem.q(), &idx)?;
    Ok(charpoly_divfree(&a, kmax, &PadicScalar::from_int(&setup.ram, 1)))
}

/// Lower bound, in `pi`-units, for `v(lambda^{(level)}_u)` for `u <= umax`.
///
/// Exact valuations for `u <= exact_upto`; beyond that the larger of
/// `s_p(u)` and `u (p-1)^2 / (p q)`, the overconvergence bound of the
/// splitting function.
pub fn lambda_valuation_bounds(p: u64, level: usize, umax: usize, exact_upto: usize) -> Result<Vec<u64>> {
    let q = p.pow(level as u32);
    let exact = lambda_coeffs(p, level, exact_upto.min(umax) as u64)?;
    Ok((0..=umax)
        .map(|u| {
            let lin = Ratio::new((u as u64) * (p - 1) * (p - 1), p * q).ceil().to_integer();
            let floor = digit_sum(u as u64, p).max(lin);
            match exact.get(u) {
                Some(l) => l.valuation().map_or(u64::MAX, |v| v.max(0) as u64),
                None => floor,
            }
        })
        .collect())
}

/// `w(k) = min sum_d v(lambda_{u_d})` over `sum u_d d = k`, in `pi`-units, on a box.
fn weight_table(setup: &Setup, level: usize, extent: &[usize]) -> Result<(BoxIndex, Vec<u64>)> {
    let pr = &setup.problem;
    let index = BoxIndex::new(extent, setup.budget)?;
    let umax = pr
        .set()
        .vectors()
        .iter()
        .map(|d| max_multiple(d, extent))
        .max()
        .unwrap_or(0);
    let lv = lambda_valuation_bounds(pr.p(), level, umax, 64)?;
    let mut w = vec![u64::MAX; index.size];
    w[0] = 0;
    for d in pr.set().vectors() {
        let mut next = vec![u64::MAX; index.size];
        for (f, slot) in next.iter_mut().enumerate() {
            let k = index.unflat(f);
            let mut best = u64::MAX;
            for (u, &l) in lv.iter().enumerate() {
                let shifted: Option<Vec<usize>> = k
                    .iter()
                    .zip(d)
                    .map(|(&x, &dd)| x.checked_sub(u * dd as usize))
                    .collect();
                let Some(s) = shifted else { break };
                let prev = w[index.flat(&s).expect("inside box")];
                best = best.min(prev.saturating_add(l));
            }
            *slot = best;
        }
        w = next;
    }
    Ok((index, w))
}

/// Smallest index bound `B <= max_bound` such that every entry `f_k` with
/// `|k|_1 >= (q-1)(B+1)`, within a search box of side `2q(max_bound+1)`,
/// has `v_w >= window`.
///
/// Any term of a principal minor using an index outside `[0,B]^n` contains
/// such an entry, so the truncation changes no coefficient below `window`
/// as long as the bound holds everywhere (checked only on the search box).
pub fn certify_bound(setup: &Setup, window: u64, max_bound: usize) -> Result<usize> {
    let q = setup.problem.q() as usize;
    let side = 2 * q * (max_bound + 1);
    let extent = vec![side; setup.problem.n()];
    let (index, w) = weight_table(setup, setup.problem.m(), &extent)?;
    // Smallest pi-valuation of an entry at each l1-norm and beyond.
    let mut by_norm = vec![u64::MAX; side * setup.problem.n() + 2];
    for (f, &val) in w.iter().enumerate() {
        let norm: usize = index.unflat(f).iter().sum();
        by_norm[norm] = by_norm[norm].min(val);
    }
    for i in (0..by_norm.len() - 1).rev() {
        by_norm[i] = by_norm[i].min(by_norm[i + 1]);
    }
    let v = setup.v;
    for b in 1..=max_bound {
        let start = (q - 1) * (b + 1);
        if by_norm[start.min(by_norm.len() - 1)].saturating_mul(v) >= window {
            return Ok(b);
        }
    }
    Err(Error::Precision(format!(
        "no index bound up to {max_bound} certifies window {window}"
    )))
}

/// The L-function assembled from truncated Fredholm determinants.
#[derive(Clone, Debug)]
pub struct FredholmL {
    pub bound: usize,
    pub window: u64,
    pub series: TruncatedSeries<PadicScalar>,
}

/// `L = prod_J prod_{i=0}^{|J|} h_J(q^i T)^{(-1)^{|J|-i+1} C(|J|, i)}`,
/// `h_J(t) = det(I - q^{n-|J|} t A_J)`, with `A_J` cut at `bound`.
pub fn l_from_fredholm(setup: &Setup, bound: usize, window: u64) -> Result<FredholmL> {
    let pr = &setup.problem;
    let n = pr.n();
    let kmax = setup.kmax;
    let dim = (bound as u128).pow(n as u32);
    if dim > 4096 {
        return Err(Error::budget("Fredholm matrix dimension", dim, 4096));
    }
    let table = fm_coefficients(setup, pr.m(), &table_extent(setup, bound))?;
    let one = PadicScalar::from_int(&setup.ram, 1);
    let mut series = TruncatedSeries::one(&one, kmax);
    for j in subsets(n) {
        let det = fredholm_truncated(setup, &table, &j, bound, kmax)?;
        let h = det.scale_var(&setup.scalar_int(&setup.q_pow(n - j.len())));
        let mut binom = BigInt::one();
        for i in 0..=j.len() {
            if i > 0 {
                binom = binom * (j.len() - i + 1) / i;
            }
            let sign = if (j.len() - i + 1) % 2 == 0 { 1 } else { -1 };
            let e = sign * binom.to_i64().expect("small binomial");
            let hi = h.scale_var(&setup.scalar_int(&setup.q_pow(i)));
            series = series.mul(&hi.powi(e)?);
        }
    }
    Ok(FredholmL { bound, window, series })
}

/// `det A[F]` computed directly and as the sum over cycle decompositions of
/// `F` of products of `(-1)^{l-1} prod_i f_{q theta(i) - theta(i+1)}`.
pub fn cyclic_minor_check(setup: &Setup, table: &FmTable, f: &[Vec<usize>]) -> Result<bool> {
    if f.len() > 5 {
        return Err(Error::Argument("cyclic minor check supports at most 5 indices".into()));
    }
    let q = setup.problem.q();
    let a = operator_matrix(table, q, f)?;
    let one = PadicScalar::from_int(&setup.ram, 1);
    let direct = determinant_leibniz(&a, &one);
    let remaining: Vec<usize> = (0..f.len()).collect();
    let by_cycles = cycle_sum(&a, &remaining, &one);
    Ok(direct == by_cycles)
}

/// Sum over partitions of `rest` into cycles, each starting at its smallest element.
fn cycle_sum(a: &Matrix<PadicScalar>, rest: &[usize], one: &PadicScalar) -> PadicScalar {
    if rest.is_empty() {
        return one.clone();
    }
    let start = rest[0];
    let others = &rest[1..];
    let mut total = PadicScalar::zero(one.ctx());
    // Every ordered selection of the other elements closes one cycle through `start`.
    let mut stack: Vec<(Vec<usize>, PadicScalar)> = vec![(vec![start], one.clone())];
    while let Some((path, prod)) = stack.pop() {
        let last = *path.last().expect("non-empty");
        let closed = prod.clone() * a.get(last, start).clone();
        if !closed.is_zero() {
            let left: Vec<usize> = rest.iter().copied().filter(|x| !path.contains(x)).collect();
            let sub = cycle_sum(a, &left, one);
            let term = closed * sub;
            total = if path.len() % 2 == 1 { total + term } else { total - term };
        }
        for &x in others {
            if !path.contains(&x) {
                let next = prod.clone() * a.get(last, x).clone();
                if !next.is_zero() {
                    let mut p2 = path.clone();
                    p2.push(x);
                    stack.push((p2, next));
                }
            }
        }
    }
    total
}

/// Degree-`k` coefficient valuations of a series, as lower bounds in `w`-units.
pub fn coefficient_valuations(s: &TruncatedSeries<PadicScalar>) -> Vec<u64> {
    s.coeffs().iter().map(|c| c.valuation().lower_bound()).collect()
}

/// Summary of a restricted exponent set, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct SubsetInfo {
    pub subset: Vec<usize>,
    pub density: String,
}

/// Densities of all restrictions, keyed by coordinate set.
pub fn restriction_densities(set: &ExponentSet, p: u64, budget: u128) -> Result<BTreeMap<Vec<usize>, Density>> {
    subsets(set.dim())
        .into_iter()
        .map(|idx| {
            let (sub, _) = set.restrict(&idx);
            Ok((idx, density(&sub, p, budget)?))
        })
        .collect()
}

/// `lcm` of the denominators of `(p-1) delta_I` over the given densities.
pub fn ramification_lcm(p: u64, densities: &[Ratio<i64>]) -> u64 {
    densities
        .iter()
        .map(|d| *(d * Ratio::from_integer(p as i64 - 1)).denom() as u64)
        .fold(1, |a, b| a.lcm(&b))
}
