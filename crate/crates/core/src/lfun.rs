//! Exponential sums by point counting, the exact L-series over `Z[zeta_p]`,
//! and zeta numerators of Artin-Schreier curves.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{extend_field, FieldCtx};
use crate::padic::{zeta_p, PadicScalar, RamCtx};
use crate::problem::Problem;
use crate::ring::Ring;
use crate::series::TruncatedSeries;

/// Element of `Z[zeta_p]` in the basis `1, zeta, ..., zeta^{p-2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    c: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: u64) -> Self {
        CycInt {
            p,
            c: vec![BigInt::zero(); (p - 1) as usize],
        }
    }

    pub fn from_int(p: u64, n: BigInt) -> Self {
        let mut s = Self::zero(p);
        s.c[0] = n;
        s
    }

    /// `sum_j a_j zeta^j` for `j < p`.
    pub fn from_powers(p: u64, a: &[BigInt]) -> Self {
        let mut full = vec![BigInt::zero(); p as usize];
        for (j, x) in a.iter().enumerate() {
            full[j % p as usize] += x;
        }
        Self::reduce(p, full)
    }

    /// Reduces a coefficient list of length `p` using `zeta^{p-1} = -(1 + ... + zeta^{p-2})`.
    fn reduce(p: u64, mut full: Vec<BigInt>) -> Self {
        let top = full.pop().expect("length p");
        for x in full.iter_mut() {
            *x -= &top;
        }
        CycInt { p, c: full }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// The integer value, when the element lies in `Z`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.c[1..].iter().all(Zero::is_zero).then(|| &self.c[0])
    }

    /// Division by an integer, `None` unless exact.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.c.len());
        for x in &self.c {
            let (q, r) = x.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(CycInt { p: self.p, c: out })
    }

    /// Image under `zeta -> zeta^a`, `a` prime to `p`.
    pub fn conjugate(&self, a: u64) -> Self {
        let p = self.p;
        let mut full = vec![BigInt::zero(); p as usize];
        for (j, x) in self.c.iter().enumerate() {
            full[(j as u64 * a % p) as usize] += x;
        }
        Self::reduce(p, full)
    }

    /// `sum a_i zeta^i` with `zeta` the root of unity pinned in `ctx`.
    pub fn embed(&self, ctx: &Arc<RamCtx>) -> Result<PadicScalar> {
        let z = zeta_p(ctx)?;
        let mut acc = PadicScalar::zero(ctx);
        let mut pw = PadicScalar::from_int(ctx, 1);
        for x in &self.c {
            acc = acc + PadicScalar::from_bigint(ctx, x) * pw.clone();
            pw = pw * z.clone();
        }
        Ok(acc)
    }
}

impl Add for CycInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        CycInt {
            p: self.p,
            c: self.c.into_iter().zip(o.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for CycInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for CycInt {
    type Output = Self;
    fn neg(self) -> Self {
        CycInt {
            p: self.p,
            c: self.c.into_iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for CycInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = self.p as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                full[(i + j) % p] += a * b;
            }
        }
        Self::reduce(self.p, full)
    }
}

impl Ring for CycInt {
    fn zero_like(&self) -> Self {
        Self::zero(self.p)
    }
    fn one_like(&self) -> Self {
        Self::from_int(self.p, BigInt::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn int_like(&self, n: i64) -> Self {
        Self::from_int(self.p, BigInt::from(n))
    }
}

/// `3 - 2z + z^2` with `z` a primitive `p`-th root of unity.
impl std::fmt::Display for CycInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = String::new();
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude().to_string();
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (i, mag.as_str()) {
                (0, _) => out.push_str(&mag),
                (1, "1") => out.push('z'),
                (1, _) => out.push_str(&format!("{mag}z")),
                (_, "1") => out.push_str(&format!("z^{i}")),
                _ => out.push_str(&format!("{mag}z^{i}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl Serialize for CycInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.c.iter().map(|x| x.to_string()))
    }
}

/// `N_j = #{x in A^n(F_{q^r}) : Tr f(x) = j}` for `j in F_p`.
pub fn trace_histogram(problem: &Problem, r: usize, budget: u128) -> Result<Vec<u128>> {
    let ext = Arc::new(extend_field(problem.field(), r)?);
    let n = problem.n();
    let big_q = ext.size() as u128;
    let total = big_q
        .checked_pow(n as u32)
        .filter(|&t| t <= budget)
        .ok_or_else(|| Error::budget(format!("point count over F_{}^{}", problem.p(), problem.m() * r), big_q.saturating_pow(n as u32), budget))?;
    let coeffs: Vec<_> = problem
        .coeffs()
        .iter()
        .map(|c| ext.embed(c))
        .collect::<Result<_>>()?;
    let (table, logs) = ext.trace_log_tables(&coeffs);
    // Nonzero terms only: (log c, exponent).
    let terms: Vec<(u64, &[u32])> = problem
        .set()
        .vectors()
        .iter()
        .zip(&logs)
        .filter_map(|(d, l)| l.map(|l| (l, d.as_slice())))
        .collect();
    let p = problem.p() as usize;
    let order = table.order;
    let chunk: u128 = 1 << 14;
    let nchunks = total.div_ceil(chunk);
    let hist = (0..nchunks)
        .into_par_iter()
        .map(|ci| {
            let mut h = vec![0u128; p];
            // Coordinate digit `Q - 1` stands for zero, others are logarithms.
            let mut pt = vec![0u64; n];
            let start = ci * chunk;
            let end = (start + chunk).min(total);
            for idx in start..end {
                let mut x = idx;
                for slot in pt.iter_mut() {
                    *slot = (x % big_q) as u64;
                    x /= big_q;
                }
                let mut tr = 0usize;
                for &(lc, d) in &terms {
                    let mut lg = lc;
                    let mut zero = false;
                    for (&e, &xi) in d.iter().zip(&pt) {
                        if e == 0 {
                            continue;
                        }
                        if xi == order {
                            zero = true;
                            break;
                        }
                        lg = (lg + e as u64 % order * xi) % order;
                    }
                    if !zero {
                        tr += table.trace_pow[lg as usize] as usize;
                    }
                }
                h[tr % p] += 1;
            }
            h
        })
        .reduce(
            || vec![0u128; p],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(hist)
}

/// The same histogram by direct evaluation of `f` at every point.
pub fn trace_histogram_naive(problem: &Problem, r: usize, budget: u128) -> Result<Vec<u128>> {
    let ext: Arc<FieldCtx> = Arc::new(extend_field(problem.field(), r)?);
    let mut h = vec![0u128; problem.p() as usize];
    for pt in ext.enumerate_points(problem.n(), budget)? {
        let v = problem.poly().eval(&ext, &pt)?;
        h[ext.trace_to_prime(&v)? as usize] += 1;
    }
    Ok(h)
}

/// `S_r(f) = sum_j N_j zeta^j`.
pub fn exp_sum(problem: &Problem, r: usize, budget: u128) -> Result<CycInt> {
    let h = trace_histogram(problem, r, budget)?;
    let a: Vec<BigInt> = h.into_iter().map(BigInt::from).collect();
    Ok(CycInt::from_powers(problem.p(), &a))
}

/// Exact L-series coefficients up to `T^kmax`.
#[derive(Clone, Debug, Serialize)]
pub struct LSeriesExact {
    pub p: u64,
    pub m: usize,
    pub n: usize,
    pub f: String,
    pub kmax: usize,
    pub rmax: usize,
    pub sums: Vec<CycInt>,
    pub coeffs: Vec<CycInt>,
}

impl LSeriesExact {
    pub fn series(&self) -> TruncatedSeries<CycInt> {
        TruncatedSeries::from_coeffs(self.coeffs.clone())
    }

    /// Image in the ramified ring of `ctx`.
    pub fn embed(&self, ctx: &Arc<RamCtx>) -> Result<TruncatedSeries<PadicScalar>> {
        self.series().try_map(|c| c.embed(ctx))
    }
}

/// `exp(sum_r S_r T^r / r)` from the power sums, by `k a_k = sum_{r<=k} S_r a_{k-r}`.
pub fn exp_of_sums(p: u64, sums: &[CycInt], kmax: usize) -> Result<Vec<CycInt>> {
    let mut a = vec![CycInt::from_int(p, BigInt::one())];
    for k in 1..=kmax {
        let mut acc = CycInt::zero(p);
        for r in 1..=k {
            acc = acc + sums[r - 1].clone() * a[k - r].clone();
        }
        let ak = acc.div_exact(&BigInt::from(k)).ok_or_else(|| {
            Error::Internal(format!("L-series coefficient {k} is not integral"))
        })?;
        a.push(ak);
    }
    Ok(a)
}

/// The largest `r <= want` with `q^{rn} <= budget`.
pub fn feasible_degree(problem: &Problem, want: usize, budget: u128) -> usize {
    let q = problem.q() as u128;
    let mut r = 0;
    while r < want {
        match q.checked_pow(((r + 1) * problem.n()) as u32) {
            Some(c) if c <= budget => r += 1,
            _ => break,
        }
    }
    r
}

pub fn l_series(problem: &Problem, kmax: usize, budget: u128) -> Result<LSeriesExact> {
    let p = problem.p();
    let sums: Vec<CycInt> = (1..=kmax)
        .map(|r| exp_sum(problem, r, budget))
        .collect::<Result<_>>()?;
    let coeffs = exp_of_sums(p, &sums, kmax)?;
    Ok(LSeriesExact {
        p,
        m: problem.m(),
        n: problem.n(),
        f: problem.describe(),
        kmax,
        rmax: kmax,
        sums,
        coeffs,
    })
}

/// Zeta numerator of `y^p - y = f(x)`.
#[derive(Clone, Debug, Serialize)]
pub struct CurveNumerator {
    pub genus: usize,
    /// `#C(F_{q^r})` for the extension degrees actually counted.
    pub counts: Vec<u128>,
    /// Coefficients of `P(T)`, degree `2g`.
    #[serde(serialize_with = "decimal_strings")]
    pub coeffs: Vec<BigInt>,
}

pub(crate) fn decimal_strings<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * (n - i) / (i + 1);
    }
    b
}

/// `P(T)` from point counts over `F_{q^r}`, `r <= 2g` (or `r <= g` plus the
/// functional equation when the budget is short).
pub fn artin_schreier_numerator(problem: &Problem, budget: u128) -> Result<CurveNumerator> {
    if problem.n() != 1 {
        return Err(Error::Unsupported("curves need a polynomial in one variable".into()));
    }
    let p = problem.p();
    let deg = problem.poly().degree() as u64;
    if deg == 0 || deg % p == 0 {
        return Err(Error::Unsupported(format!("degree {deg} of f is divisible by p = {p}")));
    }
    let g = ((p - 1) * (deg - 1) / 2) as usize;
    let q = BigInt::from(problem.q());
    let rmax = feasible_degree(problem, 2 * g, budget);
    if rmax < g {
        return Err(Error::budget(
            format!("point counts for genus {g}"),
            (problem.q() as u128).saturating_pow(g as u32),
            budget,
        ));
    }
    let mut counts = Vec::with_capacity(rmax);
    for r in 1..=rmax {
        let h = trace_histogram(problem, r, budget)?;
        counts.push(p as u128 * h[0] + 1);
    }
    let mut a = vec![BigInt::one()];
    for k in 1..=rmax {
        let mut acc = BigInt::zero();
        for r in 1..=k {
            let s = BigInt::from(counts[r - 1]) - 1 - q.pow(r as u32);
            acc += s * &a[k - r];
        }
        let (ak, rem) = acc.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(Error::Internal(format!("numerator coefficient {k} is not integral")));
        }
        a.push(ak);
    }
    for k in rmax + 1..=2 * g {
        let v = q.pow((k - g) as u32) * &a[2 * g - k];
        a.push(v);
    }
    for k in g..=2 * g {
        if a[k] != q.pow((k - g) as u32) * &a[2 * g - k] {
            return Err(Error::Internal(format!("functional equation fails at degree {k}")));
        }
    }
    for (k, c) in a.iter().enumerate() {
        let b = binomial(2 * g, k);
        if c * c > &b * &b * q.pow(k as u32) {
            return Err(Error::Internal(format!("coefficient {k} = {c} breaks the Weil bound")));
        }
    }
    Ok(CurveNumerator { genus: g, counts, coeffs: a })
}

/// `prod_{a=1}^{p-1} L(af, T)` from the exact series, as integers.
pub fn character_product(l: &LSeriesExact) -> Result<Vec<BigInt>> {
    let s = l.series();
    let mut acc = TruncatedSeries::one(&s.coeff(0).clone(), s.kmax());
    for a in 1..l.p {
        acc = acc.mul(&s.map(|c| c.conjugate(a)));
    }
    acc.coeffs()
        .iter()
        .map(|c| {
            c.as_integer()
                .cloned()
                .ok_or_else(|| Error::Internal("character product is not rational".into()))
        })
        .collect()
}

/// Product of the conjugates `pi -> omega(a) pi`, `a = 1..p-1`.
pub fn norm_poly(s: &TruncatedSeries<PadicScalar>) -> Result<TruncatedSeries<PadicScalar>> {
    let ctx = Arc::clone(s.coeff(0).ctx());
    if let Some(c) = s.coeffs().iter().find(|c| !c.in_zp_pi()) {
        return Err(Error::Precondition(format!(
            "coefficient {c:?} has fractional powers of pi"
        )));
    }
    let base = ctx.base();
    let field = Arc::clone(base.residue_field());
    let v = ctx.v() as usize;
    let mut acc = TruncatedSeries::one(s.coeff(0), s.kmax());
    for a in 1..ctx.p() {
        let w = PadicScalar::from_om(&ctx, &base.teichmuller(&field.from_int(a))?);
        let conj = s.map(|c| {
            let mut out = PadicScalar::zero(&ctx);
            let mut wj = PadicScalar::from_int(&ctx, 1);
            for i in (0..ctx.e()).step_by(v) {
                let slot = PadicScalar::from_om(&ctx, c.om_coeff(i)) * PadicScalar::varpi_pow(&ctx, i as u64);
                out = out + slot * wj.clone();
                wj = wj * w.clone();
            }
            out
        });
        acc = acc.mul(&conj);
    }
    Ok(acc)
}

/// Integer value of a `Z_p` element, in `(-p^K/2, p^K/2]`.
pub fn small_integer(c: &PadicScalar) -> Option<BigInt> {
    if c.coeffs()[1..].iter().any(|&x| x != 0) {
        return None;
    }
    let pk = BigInt::from(c.ctx().base().pk());
    let x = BigInt::from(c.coeffs()[0]);
    Some(if &x * 2 > pk { x - pk } else { x })
}

/// Whether every coefficient is an integer of absolute value below `p^K/2`.
pub fn as_integers(s: &TruncatedSeries<PadicScalar>) -> Option<Vec<BigInt>> {
    s.coeffs().iter().map(small_integer).collect()
}

/// Integer series into the ramified ring.
pub fn embed_integers(ctx: &Arc<RamCtx>, a: &[BigInt], kmax: usize) -> TruncatedSeries<PadicScalar> {
    let zero = PadicScalar::zero(ctx);
    TruncatedSeries::new(a.iter().map(|x| PadicScalar::from_bigint(ctx, x)).collect(), &zero, kmax)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_display() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(CycInt::from_powers(3, &b(&[3, -2])).to_string(), "3 - 2z");
        assert_eq!(CycInt::from_powers(5, &b(&[0, 1, 0, -1])).to_string(), "z - z^3");
        assert_eq!(CycInt::zero(2).to_string(), "0");
        assert_eq!(CycInt::from_int(2, BigInt::from(-4)).to_string(), "-4");
    }
    use proptest::prelude::*;

    const B: u128 = 10_000_000;

    fn ints(v: &[CycInt]) -> Vec<i64> {
        v.iter()
            .map(|c| i64::try_from(c.as_integer().expect("integer").clone()).unwrap())
            .collect()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn exp_sum_examples() {
        let x = Problem::univariate(2, 1, &[(1, vec![1])]).unwrap();
        assert!(exp_sum(&x, 1, B).unwrap().is_zero());
        let x2 = Problem::univariate(3, 1, &[(2, vec![1])]).unwrap();
        assert_eq!(trace_histogram(&x2, 1, B).unwrap(), vec![1, 2, 0]);
        assert_eq!(exp_sum(&x2, 1, B).unwrap(), CycInt::from_powers(3, &big(&[1, 2])));
        let x3 = Problem::univariate(2, 1, &[(3, vec![1])]).unwrap();
        assert_eq!(exp_sum(&x3, 2, B).unwrap().as_integer(), Some(&BigInt::from(4)));
    }

    #[test]
    fn histogram_matches_direct_evaluation() {
        let cases = [
            Problem::univariate(2, 2, &[(3, vec![1, 0]), (1, vec![0, 1])]).unwrap(),
            Problem::univariate(5, 1, &[(4, vec![1]), (1, vec![3])]).unwrap(),
            Problem::new(3, 1, 2, vec![vec![2, 0], vec![1, 1], vec![0, 2]], &[(vec![2, 0], vec![1]), (vec![1, 1], vec![2])]).unwrap(),
            Problem::new(2, 1, 2, vec![vec![1, 0], vec![0, 1]], &[(vec![1, 0], vec![1]), (vec![0, 1], vec![1])]).unwrap(),
        ];
        for pr in &cases {
            for r in 1..=2 {
                let fast = trace_histogram(pr, r, B).unwrap();
                assert_eq!(fast, trace_histogram_naive(pr, r, B).unwrap(), "{} r={r}", pr.describe());
                let total: u128 = fast.iter().sum();
                assert_eq!(total, (pr.q() as u128).pow((r * pr.n()) as u32));
            }
        }
    }

    #[test]
    fn l_series_examples() {
        let x = Problem::univariate(2, 1, &[(1, vec![1])]).unwrap();
        assert_eq!(ints(&l_series(&x, 4, B).unwrap().coeffs), vec![1, 0, 0, 0, 0]);
        let x3 = Problem::univariate(2, 1, &[(3, vec![1])]).unwrap();
        let l = l_series(&x3, 4, B).unwrap();
        assert_eq!(ints(&l.sums), vec![0, 4, 0, -8]);
        assert_eq!(ints(&l.coeffs), vec![1, 0, 2, 0, 0]);
        let xy = Problem::new(2, 1, 2, vec![vec![1, 1]], &[(vec![1, 1], vec![1])]).unwrap();
        assert_eq!(ints(&l_series(&xy, 4, B).unwrap().coeffs), vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn quadratic_gauss_sum_powers() {
        // S_r(x^2) over F_3 equals -(-S_1)^r.
        let x2 = Problem::univariate(3, 1, &[(2, vec![1])]).unwrap();
        let s1 = exp_sum(&x2, 1, B).unwrap();
        let minus = -s1.clone();
        let mut pw = minus.clone();
        for r in 1..=3 {
            assert_eq!(exp_sum(&x2, r, B).unwrap(), -pw.clone());
            pw = pw * minus.clone();
        }
    }

    #[test]
    fn curve_examples() {
        let x = Problem::univariate(2, 1, &[(1, vec![1])]).unwrap();
        assert_eq!(artin_schreier_numerator(&x, B).unwrap().coeffs, big(&[1]));
        let x3 = Problem::univariate(2, 1, &[(3, vec![1])]).unwrap();
        let c = artin_schreier_numerator(&x3, B).unwrap();
        assert_eq!(c.counts, vec![3, 9]);
        assert_eq!(c.coeffs, big(&[1, 0, 2]));
        let x3_4 = Problem::univariate(2, 2, &[(3, vec![1, 0])]).unwrap();
        let c = artin_schreier_numerator(&x3_4, B).unwrap();
        assert_eq!(c.counts[0], 9);
        assert_eq!(c.coeffs, big(&[1, 4, 4]));
        let x2 = Problem::univariate(2, 1, &[(2, vec![1])]).unwrap();
        assert!(matches!(artin_schreier_numerator(&x2, B), Err(Error::Unsupported(_))));
    }

    #[test]
    fn curve_numerator_symmetry_and_characters() {
        for pr in [
            Problem::univariate(3, 1, &[(2, vec![1])]).unwrap(),
            Problem::univariate(5, 1, &[(2, vec![2])]).unwrap(),
            Problem::univariate(3, 1, &[(4, vec![1]), (1, vec![1])]).unwrap(),
            Problem::univariate(2, 1, &[(5, vec![1])]).unwrap(),
        ] {
            let c = artin_schreier_numerator(&pr, B).unwrap();
            let g = c.genus;
            let q = BigInt::from(pr.q());
            for k in 0..=g {
                assert_eq!(c.coeffs[2 * g - k], q.pow((g - k) as u32) * &c.coeffs[k], "{}", pr.describe());
            }
            let kmax = feasible_degree(&pr, (2 * g).min(4), B);
            let l = l_series(&pr, kmax, B).unwrap();
            let prod = character_product(&l).unwrap();
            assert_eq!(prod[..], c.coeffs[..=kmax.min(2 * g)], "{}", pr.describe());
        }
    }

    #[test]
    fn p2_l_series_are_integers_and_equal_numerator() {
        let pr = Problem::univariate(2, 1, &[(5, vec![1]), (1, vec![1])]).unwrap();
        let c = artin_schreier_numerator(&pr, B).unwrap();
        let l = l_series(&pr, 4, B).unwrap();
        let li: Vec<BigInt> = l.coeffs.iter().map(|x| x.as_integer().unwrap().clone()).collect();
        assert_eq!(li, c.coeffs);
    }

    #[test]
    fn norm_examples() {
        let ctx = RamCtx::new(3, 1, 1, 6).unwrap();
        let pi = PadicScalar::pi(&ctx);
        let s = TruncatedSeries::one_minus(pi, 3);
        let n = norm_poly(&s).unwrap();
        assert_eq!(as_integers(&n).unwrap(), big(&[1, 0, 3, 0]));
        let one = TruncatedSeries::one(&PadicScalar::from_int(&ctx, 1), 3);
        assert_eq!(norm_poly(&one).unwrap(), one);
        let ctx2 = RamCtx::new(2, 1, 1, 6).unwrap();
        let s = TruncatedSeries::one_minus(PadicScalar::from_int(&ctx2, 5), 2);
        assert_eq!(norm_poly(&s).unwrap(), s);
        let ctx3 = RamCtx::new(3, 1, 2, 6).unwrap();
        let s = TruncatedSeries::one_minus(PadicScalar::varpi_pow(&ctx3, 1), 2);
        assert!(norm_poly(&s).is_err());
    }

    #[test]
    fn embedding_examples() {
        let ctx = RamCtx::new(3, 1, 1, 6).unwrap();
        assert_eq!(CycInt::from_int(3, BigInt::one()).embed(&ctx).unwrap(), PadicScalar::from_int(&ctx, 1));
        let a = CycInt::from_powers(3, &big(&[1, 2]));
        let e = a.embed(&ctx).unwrap() - PadicScalar::from_int(&ctx, 3);
        // 1 + 2 zeta - 3 = 2 (zeta - 1): valuation 1.
        assert_eq!(e.valuation().lower_bound(), 1);
        let ctx2 = RamCtx::new(2, 1, 1, 6).unwrap();
        assert_eq!(CycInt::from_int(2, BigInt::from(3)).embed(&ctx2).unwrap(), PadicScalar::from_int(&ctx2, 3));
    }

    #[test]
    fn integrality_is_checked() {
        let bad = vec![CycInt::from_int(2, BigInt::one())];
        assert!(matches!(exp_of_sums(2, &bad, 1), Ok(_)));
        let bad = vec![CycInt::from_int(2, BigInt::one()), CycInt::from_int(2, BigInt::zero())];
        assert!(matches!(exp_of_sums(2, &bad, 2), Err(Error::Internal(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn conjugation_is_a_ring_map(a in proptest::collection::vec(-20i64..20, 4), b in proptest::collection::vec(-20i64..20, 4), k in 1u64..5) {
            let x = CycInt::from_powers(5, &big(&a));
            let y = CycInt::from_powers(5, &big(&b));
            prop_assert_eq!((x.clone() * y.clone()).conjugate(k), x.conjugate(k) * y.conjugate(k));
            prop_assert_eq!(x.clone().conjugate(1), x);
        }

        #[test]
        fn embedding_is_a_ring_map(a in proptest::collection::vec(-9i64..9, 2), b in proptest::collection::vec(-9i64..9, 2)) {
            let ctx = RamCtx::new(3, 1, 1, 8).unwrap();
            let x = CycInt::from_powers(3, &big(&a));
            let y = CycInt::from_powers(3, &big(&b));
            prop_assert_eq!((x.clone() * y.clone()).embed(&ctx).unwrap(), x.embed(&ctx).unwrap() * y.embed(&ctx).unwrap());
        }
    }
}
