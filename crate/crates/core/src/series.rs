//! Power series in `T` truncated after a fixed degree.

use crate::error::{Error, Result};
use crate::ring::Ring;

/// `a_0 + a_1 T + ... + a_kmax T^kmax`, coefficients in any [`Ring`].
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> TruncatedSeries<R> {
    /// Pads with zeros or drops terms so that exactly `kmax + 1` coefficients remain.
    pub fn new(mut coeffs: Vec<R>, template: &R, kmax: usize) -> Self {
        coeffs.truncate(kmax + 1);
        while coeffs.len() < kmax + 1 {
            coeffs.push(template.zero_like());
        }
        TruncatedSeries { coeffs }
    }

    pub fn one(template: &R, kmax: usize) -> Self {
        Self::new(vec![template.one_like()], template, kmax)
    }

    /// `1 - c T`.
    pub fn one_minus(c: R, kmax: usize) -> Self {
        let t = c.zero_like();
        Self::new(vec![c.one_like(), -c], &t, kmax)
    }

    pub fn kmax(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn truncate(&self, kmax: usize) -> Self {
        let t = self.coeffs[0].clone();
        Self::new(self.coeffs.clone(), &t, kmax.min(self.kmax()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = self.kmax().min(other.kmax());
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; k + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(k + 1) {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(k + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Multiplicative inverse; the constant term must be one.
    pub fn inverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_one_elem() {
            return Err(Error::Precondition(
                "series inversion needs constant term 1".into(),
            ));
        }
        let k = self.kmax();
        let mut out: Vec<R> = Vec::with_capacity(k + 1);
        out.push(self.coeffs[0].one_like());
        for n in 1..=k {
            let mut acc = self.coeffs[0].zero_like();
            for i in 1..=n {
                acc = acc + self.coeffs[i].clone() * out[n - i].clone();
            }
            out.push(-acc);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Integer power, negative exponents through [`Self::inverse`].
    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(&self.coeffs[0], self.kmax());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// The series `g(c T)`.
    pub fn scale_var(&self, c: &R) -> Self {
        let mut pw = c.one_like();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.clone() * pw.clone());
            pw = pw * c.clone();
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let k = self.kmax().min(other.kmax());
        TruncatedSeries {
            coeffs: (0..=k)
                .map(|i| self.coeffs[i].clone() - other.coeffs[i].clone())
                .collect(),
        }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> TruncatedSeries<S> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_map<S: Ring>(&self, f: impl Fn(&R) -> Result<S>) -> Result<TruncatedSeries<S>> {
        Ok(TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn from_coeffs(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "series needs a constant term");
        TruncatedSeries { coeffs }
    }
}
