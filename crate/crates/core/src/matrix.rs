//! Dense square matrices over a [`Ring`] and the division-free
//! characteristic polynomial.

use crate::ring::Ring;
use crate::series::TruncatedSeries;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize, template: &R) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                template.one_like()
            } else {
                template.zero_like()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.n + j] = v;
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        Self::from_fn(n, |i, j| {
            let mut acc = self.get(i, j).zero_like();
            for k in 0..n {
                acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
            }
            acc
        })
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    /// Submatrix on the given (row = column) index list.
    pub fn principal(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]).clone())
    }
}

/// Coefficients of `det(I - T A)` up to `T^kmax`, by Berkowitz's algorithm.
///
/// Only ring additions and multiplications are used, so the result is exact
/// in any commutative ring (no division by integers). `template` supplies the
/// ring of an empty matrix.
pub fn charpoly_divfree<R: Ring>(a: &Matrix<R>, kmax: usize, template: &R) -> TruncatedSeries<R> {
    let zero = template.zero_like();
    let one = template.one_like();
    // `poly` holds det(lambda I - A_r) from the top coefficient down, which is
    // the same list as the coefficients of det(I - T A_r) from T^0 up.
    let mut poly: Vec<R> = vec![one.clone()];
    for r in 0..a.dim() {
        let len = (r + 2).min(kmax + 1);
        let mut toeplitz: Vec<R> = Vec::with_capacity(len);
        toeplitz.push(one.clone());
        if len > 1 {
            toeplitz.push(-a.get(r, r).clone());
        }
        // Column C = A[0..r][r]; successive products M^k C with M = A[0..r][0..r].
        let mut v: Vec<R> = (0..r).map(|i| a.get(i, r).clone()).collect();
        for k in 2..len {
            let rc = (0..r).fold(zero.clone(), |acc, j| acc + a.get(r, j).clone() * v[j].clone());
            toeplitz.push(-rc);
            if k + 1 < len {
                v = (0..r)
                    .map(|i| {
                        (0..r).fold(zero.clone(), |acc, j| {
                            acc + a.get(i, j).clone() * v[j].clone()
                        })
                    })
                    .collect();
            }
        }
        let mut next = Vec::with_capacity(len);
        for i in 0..len {
            let mut acc = zero.clone();
            for (j, pj) in poly.iter().enumerate().take(i + 1) {
                if let Some(t) = toeplitz.get(i - j) {
                    acc = acc + t.clone() * pj.clone();
                }
            }
            next.push(acc);
        }
        poly = next;
    }
    TruncatedSeries::new(poly, template, kmax)
}

/// Determinant via the constant term of the characteristic polynomial.
pub fn determinant<R: Ring>(a: &Matrix<R>, template: &R) -> R {
    let n = a.dim();
    let cp = charpoly_divfree(a, n, template);
    let top = cp.coeff(n).clone();
    if n % 2 == 0 {
        top
    } else {
        -top
    }
}

/// Leibniz expansion, only for tiny matrices in tests and cross-checks.
pub fn determinant_leibniz<R: Ring>(a: &Matrix<R>, template: &R) -> R {
    let n = a.dim();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = template.zero_like();
    permute(&mut perm, 0, &mut |p: &[usize]| {
        let mut term = template.one_like();
        for (i, &j) in p.iter().enumerate() {
            term = term * a.get(i, j).clone();
        }
        if sign(p) < 0 {
            total = total.clone() - term;
        } else {
            total = total.clone() + term;
        }
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn sign(p: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i128]]) -> Matrix<i128> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn identity_two() {
        let cp = charpoly_divfree(&Matrix::identity(2, &0i128), 4, &0);
        assert_eq!(cp.coeffs(), &[1, -2, 1, 0, 0]);
    }

    #[test]
    fn antidiagonal_with_gamma() {
        let g = 7i128;
        let cp = charpoly_divfree(&m(&[&[0, 1], &[g, 0]]), 2, &0);
        assert_eq!(cp.coeffs(), &[1, 0, -g]);
    }

    #[test]
    fn one_by_one() {
        assert_eq!(charpoly_divfree(&m(&[&[5]]), 3, &0).coeffs(), &[1, -5, 0, 0]);
    }

    #[test]
    fn empty_matrix_is_one() {
        let e: Matrix<i128> = Matrix::from_rows(vec![]);
        assert_eq!(charpoly_divfree(&e, 2, &0).coeffs(), &[1, 0, 0]);
    }

    #[test]
    fn zero_row_and_column_drop_out() {
        let a = m(&[&[2, 0, 1], &[0, 0, 0], &[3, 0, 4]]);
        let reduced = m(&[&[2, 1], &[3, 4]]);
        assert_eq!(
            charpoly_divfree(&a, 3, &0),
            charpoly_divfree(&reduced, 3, &0)
        );
    }

    /// Principal-minor oracle: the T^k coefficient of det(I - TA) is
    /// (-1)^k times the sum of the k x k principal minors.
    fn minor_sum(a: &Matrix<i128>, k: usize) -> i128 {
        let n = a.dim();
        let mut total = 0;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            total += determinant_leibniz(&a.principal(&idx), &0);
        }
        if k % 2 == 0 {
            total
        } else {
            -total
        }
    }

    proptest! {
        #[test]
        fn berkowitz_matches_principal_minors(
            n in 1usize..5,
            entries in proptest::collection::vec(-6i128..6, 16),
            kmax in 0usize..6,
        ) {
            let a = Matrix::from_fn(n, |i, j| entries[i * 4 + j]);
            let cp = charpoly_divfree(&a, kmax, &0);
            for k in 0..=kmax {
                let expect = if k <= n { minor_sum(&a, k) } else { 0 };
                prop_assert_eq!(*cp.coeff(k), expect);
            }
            prop_assert_eq!(determinant(&a, &0), determinant_leibniz(&a, &0));
        }
    }
}
