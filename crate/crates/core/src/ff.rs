//! Small finite fields `F_p ⊂ F_q ⊂ F_{q^r}` as dense coefficient vectors.
//!
//! Every field is `F_p[x]/(modulus)` with the lexicographically least monic
//! irreducible modulus of its degree. An extension of `F_q` additionally
//! stores the image of the generator of `F_q`, so that coefficients of a
//! polynomial over `F_q` embed the same way for every extension degree.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Element of a [`FieldCtx`]: coefficients in the power basis `1, x, x^2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FFElement {
    coeffs: Vec<u64>,
}

impl FFElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

#[derive(Clone, Debug)]
pub struct Embedding {
    pub base: Arc<FieldCtx>,
    /// Image of the base generator, a root of `base.modulus`.
    pub image: FFElement,
}

#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u64,
    degree: usize,
    /// Monic, lowest coefficient first, length `degree + 1`.
    modulus: Vec<u64>,
    base: Option<Embedding>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

// ---------------------------------------------------------------------------
// Polynomials over F_p, lowest coefficient first, no trailing zeros.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let k = r.len() - 1;
        let c = r[k] * lead_inv % p;
        let shift = k - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    poly_rem(&poly_mul(a, b, p), m, p)
}

fn poly_powmod(a: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(a, m, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `x^{p^n} = x mod f` and `gcd(x^{p^{n/l}} - x, f) = 1` for primes `l | n`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // frob[i] = x^{p^i} mod f
    let mut frob = vec![poly_rem(&x, f, p)];
    for i in 1..=n {
        let next = poly_powmod(&frob[i - 1], p as u128, f, p);
        frob.push(next);
    }
    if trim(frob[n].clone()) != x {
        return false;
    }
    for l in prime_factors(n as u64) {
        let d = poly_sub(&frob[n / l as usize], &x, p);
        if poly_gcd(f, &d, p).len() != 1 {
            return false;
        }
    }
    true
}

/// Lexicographically least monic irreducible polynomial of the given degree:
/// candidates `x^n + sum c_i x^i` are scanned by the integer `sum c_i p^i`.
fn least_irreducible(p: u64, degree: usize) -> Result<Vec<u64>> {
    let count = checked_pow(p, degree)
        .ok_or_else(|| Error::Argument(format!("field F_{p}^{degree} too large")))?;
    for code in 0..count {
        let mut f = digits(code, p, degree);
        f.push(1);
        if is_irreducible(&f, p) {
            return Ok(f);
        }
    }
    Err(Error::Internal(format!(
        "no irreducible polynomial of degree {degree} over F_{p}"
    )))
}

fn digits(mut code: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

// ---------------------------------------------------------------------------

/// The prime field or `F_{p^degree}` with the lex-least irreducible modulus.
pub fn make_field(p: u64, degree: usize) -> Result<FieldCtx> {
    if !is_prime(p) {
        return Err(Error::Argument(format!("{p} is not prime")));
    }
    if degree == 0 {
        return Err(Error::Argument("field degree must be positive".into()));
    }
    if p > u32::MAX as u64 {
        return Err(Error::Argument(format!("prime {p} too large")));
    }
    let modulus = least_irreducible(p, degree)?;
    Ok(FieldCtx {
        p,
        degree,
        modulus,
        base: None,
    })
}

/// Degree-`r` extension of `base`, with `base`'s generator sent to the least root
/// of `base.modulus` (identity embedding when `r = 1`).
pub fn extend_field(base: &Arc<FieldCtx>, r: usize) -> Result<FieldCtx> {
    if r == 0 {
        return Err(Error::Argument("extension degree must be positive".into()));
    }
    if r == 1 {
        let mut ctx = FieldCtx {
            p: base.p,
            degree: base.degree,
            modulus: base.modulus.clone(),
            base: None,
        };
        let image = ctx.generator();
        ctx.base = Some(Embedding {
            base: Arc::clone(base),
            image,
        });
        return Ok(ctx);
    }
    let mut ctx = make_field(base.p, base.degree * r)?;
    let image = if base.degree == 1 {
        // Prime field: the modulus is x, its only root is 0.
        let root = ctx.from_int((base.p - base.modulus[0]) % base.p);
        debug_assert!(ctx.is_zero(&ctx.eval_univariate(&base.modulus, &root)));
        root
    } else {
        let big = ctx.size() - 1;
        let small = base.size() - 1;
        let g = ctx.primitive_element();
        let h = ctx.pow(&g, big / small);
        let mut roots = Vec::new();
        let mut y = ctx.one();
        for _ in 0..small {
            if ctx.is_zero(&ctx.eval_univariate(&base.modulus, &y)) {
                roots.push(y.clone());
            }
            y = ctx.mul(&y, &h);
        }
        roots
            .into_iter()
            .min_by_key(|e| ctx.encode(e))
            .ok_or_else(|| Error::Internal("base modulus has no root in extension".into()))?
    };
    ctx.base = Some(Embedding {
        base: Arc::clone(base),
        image,
    });
    Ok(ctx)
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn base(&self) -> Option<&Embedding> {
        self.base.as_ref()
    }

    /// Number of elements, `p^degree`.
    pub fn size(&self) -> u64 {
        checked_pow(self.p, self.degree).expect("field size fits u64")
    }

    pub fn zero(&self) -> FFElement {
        FFElement {
            coeffs: vec![0; self.degree],
        }
    }

    pub fn one(&self) -> FFElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: u64) -> FFElement {
        let mut e = self.zero();
        e.coeffs[0] = n % self.p;
        e
    }

    /// The class of `x`; equals the constant root when the modulus is linear.
    pub fn generator(&self) -> FFElement {
        if self.degree == 1 {
            return self.from_int((self.p - self.modulus[0]) % self.p);
        }
        let mut e = self.zero();
        e.coeffs[1] = 1;
        e
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<FFElement> {
        if coeffs.len() > self.degree {
            return Err(Error::Argument(format!(
                "{} coefficients given for a degree-{} field",
                coeffs.len(),
                self.degree
            )));
        }
        let mut e = self.zero();
        for (i, &c) in coeffs.iter().enumerate() {
            e.coeffs[i] = c % self.p;
        }
        Ok(e)
    }

    pub fn contains(&self, a: &FFElement) -> bool {
        a.coeffs.len() == self.degree && a.coeffs.iter().all(|&c| c < self.p)
    }

    fn check(&self, a: &FFElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "element {:?} does not belong to F_{}^{}",
                a.coeffs, self.p, self.degree
            )))
        }
    }

    /// Base-`p` integer code of an element; a bijection onto `0..size()`.
    pub fn encode(&self, a: &FFElement) -> u64 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn decode(&self, code: u64) -> FFElement {
        FFElement {
            coeffs: digits(code, self.p, self.degree),
        }
    }

    pub fn is_zero(&self, a: &FFElement) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FFElement, b: &FFElement) -> FFElement {
        FFElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FFElement) -> FFElement {
        FFElement {
            coeffs: a.coeffs.iter().map(|x| (self.p - x) % self.p).collect(),
        }
    }

    pub fn sub(&self, a: &FFElement, b: &FFElement) -> FFElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FFElement, b: &FFElement) -> FFElement {
        if self.degree == 1 {
            return self.from_int(a.coeffs[0] * b.coeffs[0]);
        }
        let prod = poly_mulmod(&a.coeffs, &b.coeffs, &self.modulus, self.p);
        self.pad(prod)
    }

    fn pad(&self, mut v: Vec<u64>) -> FFElement {
        v.resize(self.degree, 0);
        FFElement { coeffs: v }
    }

    pub fn pow(&self, a: &FFElement, mut e: u64) -> FFElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FFElement) -> Result<FFElement> {
        if self.is_zero(a) {
            return Err(Error::Argument("inverse of zero".into()));
        }
        Ok(self.pow(a, self.size() - 2))
    }

    pub fn frobenius(&self, a: &FFElement) -> FFElement {
        self.pow(a, self.p)
    }

    /// Evaluates a polynomial with `F_p` coefficients (lowest first) at `y`.
    pub fn eval_univariate(&self, poly: &[u64], y: &FFElement) -> FFElement {
        poly.iter().rev().fold(self.zero(), |acc, &c| {
            self.add(&self.mul(&acc, y), &self.from_int(c))
        })
    }

    /// `Tr(a) = a + a^p + ... + a^{p^{degree-1}}`, an element of `F_p`.
    pub fn trace_to_prime(&self, a: &FFElement) -> Result<u64> {
        self.check(a)?;
        let mut acc = self.zero();
        let mut cur = a.clone();
        for _ in 0..self.degree {
            acc = self.add(&acc, &cur);
            cur = self.frobenius(&cur);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        Ok(acc.coeffs[0])
    }

    /// Trace down to the embedded base field, `sum_{i<r} a^{q^i}`, as an element of `self`.
    pub fn trace_to_base(&self, a: &FFElement) -> Result<FFElement> {
        self.check(a)?;
        let emb = self
            .base
            .as_ref()
            .ok_or_else(|| Error::Argument("field has no base".into()))?;
        let q = emb.base.size();
        let r = self.degree / emb.base.degree;
        let mut acc = self.zero();
        let mut cur = a.clone();
        for _ in 0..r {
            acc = self.add(&acc, &cur);
            cur = self.pow(&cur, q);
        }
        Ok(acc)
    }

    /// Image of a base-field element.
    pub fn embed(&self, c: &FFElement) -> Result<FFElement> {
        match &self.base {
            None => {
                self.check(c)?;
                Ok(c.clone())
            }
            Some(emb) => {
                emb.base.check(c)?;
                let mut acc = self.zero();
                let mut pw = self.one();
                for &ci in &c.coeffs {
                    acc = self.add(&acc, &self.mul(&pw, &self.from_int(ci)));
                    pw = self.mul(&pw, &emb.image);
                }
                Ok(acc)
            }
        }
    }

    /// Base-field preimage of `a` under [`Self::embed`], by exhaustive search.
    pub fn preimage(&self, a: &FFElement) -> Option<FFElement> {
        let emb = self.base.as_ref()?;
        (0..emb.base.size())
            .map(|c| emb.base.decode(c))
            .find(|c| self.embed(c).ok().as_ref() == Some(a))
    }

    /// Least (by code) generator of the multiplicative group.
    pub fn primitive_element(&self) -> FFElement {
        let order = self.size() - 1;
        if order == 1 {
            return self.one();
        }
        let factors = prime_factors(order);
        let start = if self.degree > 1 { self.p } else { 1 };
        for code in start..self.size() {
            let g = self.decode(code);
            if factors
                .iter()
                .all(|&l| self.pow(&g, order / l) != self.one())
            {
                return g;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    /// Discrete-log tables for fast evaluation of `Tr(c x^d)`.
    ///
    /// Returns the table `k -> Tr(g^k)` for a primitive `g` together with the
    /// logarithm (`None` for zero) of every element of `targets`.
    pub fn trace_log_tables(&self, targets: &[FFElement]) -> (TraceTable, Vec<Option<u64>>) {
        let order = self.size() - 1;
        let g = self.primitive_element();
        // Tr is linear: Tr(a) = sum a_i Tr(x^i).
        let basis_traces: Vec<u64> = (0..self.degree)
            .map(|i| {
                let mut xi = self.zero();
                xi.coeffs[i] = 1;
                self.trace_to_prime(&xi).expect("basis element")
            })
            .collect();
        let target_codes: Vec<u64> = targets.iter().map(|t| self.encode(t)).collect();
        let mut logs: Vec<Option<u64>> = vec![None; targets.len()];
        let mut trace_pow = Vec::with_capacity(order as usize);
        let mut cur = self.one();
        for k in 0..order {
            let tr = cur
                .coeffs
                .iter()
                .zip(&basis_traces)
                .fold(0u64, |acc, (a, t)| (acc + a * t) % self.p);
            trace_pow.push(tr as u32);
            let code = self.encode(&cur);
            for (slot, &tc) in logs.iter_mut().zip(&target_codes) {
                if slot.is_none() && tc == code {
                    *slot = Some(k);
                }
            }
            cur = self.mul(&cur, &g);
        }
        (
            TraceTable {
                p: self.p,
                order,
                trace_pow,
            },
            logs,
        )
    }

    /// Stream over all points of affine `n`-space, refusing more than `budget` points.
    pub fn enumerate_points(self: &Arc<Self>, n: usize, budget: u128) -> Result<PointStream> {
        let total = (self.size() as u128)
            .checked_pow(n as u32)
            .unwrap_or(u128::MAX);
        if total > budget {
            return Err(Error::budget(
                format!("enumerating A^{n}(F_{}^{})", self.p, self.degree),
                total,
                budget,
            ));
        }
        Ok(PointStream {
            ctx: Arc::clone(self),
            n,
            next: 0,
            end: total,
        })
    }
}

/// `Tr(g^k)` for `0 <= k < order` and a fixed primitive `g`.
#[derive(Clone, Debug)]
pub struct TraceTable {
    pub p: u64,
    pub order: u64,
    pub trace_pow: Vec<u32>,
}

/// Points of `A^n` by index, each index decoded as `n` base-`Q` digits.
#[derive(Clone, Debug)]
pub struct PointStream {
    ctx: Arc<FieldCtx>,
    n: usize,
    next: u128,
    end: u128,
}

impl PointStream {
    pub fn len(&self) -> u128 {
        self.end - self.next
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Splits the remaining range into at most `k` contiguous chunks.
    pub fn chunks(&self, k: usize) -> Vec<PointStream> {
        let k = k.max(1) as u128;
        let total = self.len();
        let step = total.div_ceil(k).max(1);
        let mut out = Vec::new();
        let mut start = self.next;
        while start < self.end {
            let end = (start + step).min(self.end);
            out.push(PointStream {
                ctx: Arc::clone(&self.ctx),
                n: self.n,
                next: start,
                end,
            });
            start = end;
        }
        out
    }
}

impl Iterator for PointStream {
    type Item = Vec<FFElement>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let mut idx = self.next;
        self.next += 1;
        let q = self.ctx.size() as u128;
        let mut pt = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            pt.push(self.ctx.decode((idx % q) as u64));
            idx /= q;
        }
        Some(pt)
    }
}

/// `f = sum c_d x^d` with coefficients in a fixed field `F_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, FFElement>,
}

impl SparsePoly {
    pub fn new(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, FFElement)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (d, c) in terms {
            if d.len() != n {
                return Err(Error::Argument(format!(
                    "exponent {d:?} has wrong dimension (expected {n})"
                )));
            }
            if map.insert(d.clone(), c).is_some() {
                return Err(Error::Argument(format!("duplicate exponent {d:?}")));
            }
        }
        Ok(SparsePoly { n, terms: map })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, FFElement> {
        &self.terms
    }

    /// Univariate degree (largest exponent) when `n = 1`.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|d| d.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// `sum c_d x^d` with the coefficients embedded into `field`.
    pub fn eval(&self, field: &FieldCtx, x: &[FFElement]) -> Result<FFElement> {
        if x.len() != self.n {
            return Err(Error::Argument(format!(
                "point has {} coordinates, polynomial has {}",
                x.len(),
                self.n
            )));
        }
        let mut acc = field.zero();
        for (d, c) in &self.terms {
            let mut term = self.embed_coeff(field, c)?;
            for (xi, &di) in x.iter().zip(d) {
                term = field.mul(&term, &field.pow(xi, di as u64));
            }
            acc = field.add(&acc, &term);
        }
        Ok(acc)
    }

    pub(crate) fn embed_coeff(&self, field: &FieldCtx, c: &FFElement) -> Result<FFElement> {
        match field.base() {
            Some(emb) if emb.base.contains(c) && emb.base.degree() != field.degree() => {
                field.embed(c)
            }
            _ if field.contains(c) => Ok(c.clone()),
            _ => field.embed(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Oracle: brute-force irreducibility by trial division against every
    /// monic polynomial of degree between 1 and deg/2.
    fn irreducible_by_trial(f: &[u64], p: u64) -> bool {
        let n = f.len() - 1;
        for d in 1..=n / 2 {
            for code in 0..p.pow(d as u32) {
                let mut g = digits(code, p, d);
                g.push(1);
                if poly_rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    fn least_by_scan(p: u64, n: usize) -> Vec<u64> {
        (0..p.pow(n as u32))
            .map(|c| {
                let mut f = digits(c, p, n);
                f.push(1);
                f
            })
            .find(|f| irreducible_by_trial(f, p))
            .unwrap()
    }

    #[test]
    fn moduli_are_lex_least() {
        assert_eq!(make_field(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(make_field(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        for (p, n) in [(2, 2), (2, 4), (3, 3), (5, 2), (2, 6), (7, 2)] {
            assert_eq!(make_field(p, n).unwrap().modulus(), least_by_scan(p, n));
        }
    }

    #[test]
    fn rejects_composite() {
        assert!(matches!(make_field(4, 1), Err(Error::Argument(_))));
        assert!(make_field(1, 1).is_err());
    }

    #[test]
    fn extension_embeddings() {
        let f2 = Arc::new(make_field(2, 1).unwrap());
        let same = extend_field(&f2, 1).unwrap();
        assert_eq!(same.degree(), 1);
        assert_eq!(same.embed(&f2.one()).unwrap(), same.one());

        let f4 = extend_field(&f2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.embed(&f2.one()).unwrap(), f4.one());

        let f9 = Arc::new(make_field(3, 2).unwrap());
        let f81 = extend_field(&f9, 2).unwrap();
        assert_eq!(f81.degree(), 4);
        let g = &f81.base().unwrap().image;
        let g2p1 = f81.add(&f81.mul(g, g), &f81.one());
        assert!(f81.is_zero(&g2p1));
        // Embedding is a ring homomorphism on all of F_9.
        for a in 0..9 {
            for b in 0..9 {
                let (x, y) = (f9.decode(a), f9.decode(b));
                let lhs = f81.embed(&f9.mul(&x, &y)).unwrap();
                let rhs = f81.mul(&f81.embed(&x).unwrap(), &f81.embed(&y).unwrap());
                assert_eq!(lhs, rhs);
                let lhs = f81.embed(&f9.add(&x, &y)).unwrap();
                let rhs = f81.add(&f81.embed(&x).unwrap(), &f81.embed(&y).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn traces() {
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(f9.trace_to_prime(&f9.zero()).unwrap(), 0);
        assert_eq!(f9.trace_to_prime(&f9.one()).unwrap(), 2);
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.trace_to_prime(&f4.generator()).unwrap(), 1);
        let f2 = make_field(2, 1).unwrap();
        assert!(f4.trace_to_prime(&f2.one()).is_err());
    }

    #[test]
    fn frobenius_preserves_trace() {
        for (p, n) in [(2, 3), (3, 2), (5, 2), (2, 4)] {
            let f = make_field(p, n).unwrap();
            for c in 0..f.size() {
                let a = f.decode(c);
                assert_eq!(
                    f.trace_to_prime(&a).unwrap(),
                    f.trace_to_prime(&f.frobenius(&a)).unwrap()
                );
            }
        }
    }

    #[test]
    fn trace_transitivity_exhaustive() {
        for (p, m, r) in [(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2), (2, 1, 4)] {
            let base = Arc::new(make_field(p, m).unwrap());
            let big = extend_field(&base, r).unwrap();
            assert!(big.size() <= 256);
            for c in 0..big.size() {
                let a = big.decode(c);
                let rel = big.trace_to_base(&a).unwrap();
                let pre = big.preimage(&rel).expect("relative trace lies in F_q");
                assert_eq!(
                    big.trace_to_prime(&a).unwrap(),
                    base.trace_to_prime(&pre).unwrap()
                );
            }
        }
    }

    #[test]
    fn evaluation() {
        let f2 = Arc::new(make_field(2, 1).unwrap());
        let x1 = SparsePoly::new(1, [(vec![1], f2.one())]).unwrap();
        assert_eq!(x1.eval(&f2, &[f2.zero()]).unwrap(), f2.zero());

        let f3 = make_field(3, 1).unwrap();
        let sq = SparsePoly::new(1, [(vec![2], f3.one())]).unwrap();
        assert_eq!(sq.eval(&f3, &[f3.from_int(2)]).unwrap(), f3.one());

        let f4 = extend_field(&f2, 2).unwrap();
        let xy = SparsePoly::new(2, [(vec![1, 1], f2.one())]).unwrap();
        let w = f4.generator();
        assert_eq!(xy.eval(&f4, &[w.clone(), w.clone()]).unwrap(), f4.mul(&w, &w));
        assert!(xy.eval(&f4, &[w]).is_err());
    }

    #[test]
    fn sparse_poly_rejects_duplicates_and_bad_dims() {
        let f2 = make_field(2, 1).unwrap();
        assert!(SparsePoly::new(1, [(vec![1], f2.one()), (vec![1], f2.one())]).is_err());
        assert!(SparsePoly::new(2, [(vec![1], f2.one())]).is_err());
    }

    #[test]
    fn point_enumeration() {
        let f2 = Arc::new(make_field(2, 1).unwrap());
        let pts: Vec<_> = f2.enumerate_points(1, 100).unwrap().collect();
        assert_eq!(pts, vec![vec![f2.zero()], vec![f2.one()]]);

        let f3 = Arc::new(make_field(3, 1).unwrap());
        let pts: HashSet<_> = f3.enumerate_points(2, 100).unwrap().collect();
        assert_eq!(pts.len(), 9);

        let f4 = Arc::new(make_field(2, 2).unwrap());
        let stream = f4.enumerate_points(1, 100).unwrap();
        let all: HashSet<_> = stream.clone().collect();
        let chunks = stream.chunks(2);
        assert_eq!(chunks.len(), 2);
        let union: HashSet<_> = chunks.into_iter().flatten().collect();
        assert_eq!(all.len(), 4);
        assert_eq!(union, all);

        assert!(matches!(
            f4.enumerate_points(3, 10),
            Err(Error::Budget { needed: 64, .. })
        ));
    }

    #[test]
    fn trace_tables_agree_with_direct_trace() {
        let base = Arc::new(make_field(3, 2).unwrap());
        let big = extend_field(&base, 2).unwrap();
        let targets = vec![big.zero(), big.one(), big.generator()];
        let (table, logs) = big.trace_log_tables(&targets);
        assert_eq!(logs[0], None);
        assert_eq!(logs[1], Some(0));
        let g = big.primitive_element();
        let k = logs[2].unwrap();
        assert_eq!(big.pow(&g, k), big.generator());
        for k in [0u64, 1, 5, 17, 79] {
            let a = big.pow(&g, k);
            assert_eq!(table.trace_pow[k as usize] as u64, big.trace_to_prime(&a).unwrap());
        }
    }
}
