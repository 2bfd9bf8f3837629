//! Commutative ring abstraction shared by the series and matrix code.
//!
//! Scalars in this crate often carry a context (a p-adic precision, a prime
//! for cyclotomic integers), so zero and one are produced from an existing
//! element instead of from a bare type as `num_traits::Zero` would.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// The additive identity of the ring `self` belongs to.
    fn zero_like(&self) -> Self;
    /// The multiplicative identity of the ring `self` belongs to.
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    /// Image of an integer in the ring of `self`.
    fn int_like(&self, n: i64) -> Self;

    fn is_one_elem(&self) -> bool {
        *self == self.one_like()
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

macro_rules! impl_ring_for_num {
    ($($t:ty),*) => {$(
        impl Ring for $t {
            fn zero_like(&self) -> Self { <$t>::zero() }
            fn one_like(&self) -> Self { <$t>::one() }
            fn is_zero_elem(&self) -> bool { Zero::is_zero(self) }
            fn int_like(&self, n: i64) -> Self { <$t>::from(n) }
        }
    )*};
}

impl_ring_for_num!(i64, i128, BigInt);

impl Ring for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn int_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Ring for Ratio<i64> {
    fn zero_like(&self) -> Self {
        Ratio::zero()
    }
    fn one_like(&self) -> Self {
        Ratio::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn int_like(&self, n: i64) -> Self {
        Ratio::from_integer(n)
    }
}

/// Sum of a non-empty slice; `template` supplies the zero when it is empty.
pub fn sum_with<R: Ring>(template: &R, items: impl IntoIterator<Item = R>) -> R {
    items
        .into_iter()
        .fold(template.zero_like(), |acc, x| acc + x)
}
