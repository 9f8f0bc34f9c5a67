//! Dense matrices over exact rationals or complex floats.

use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::poly::Polynomial;

/// Field operations shared by the exact and floating-point pipelines.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether equality tests on this type are exact.
    const EXACT: bool;

    fn from_i64(x: i64) -> Self;
    fn from_bigint(x: &BigInt) -> Self;
    fn conj(&self) -> Self;
    fn to_complex(&self) -> Complex64;

    fn modulus(&self) -> f64 {
        self.to_complex().norm()
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }

    fn from_bigint(x: &BigInt) -> Self {
        BigRational::from_integer(x.clone())
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_i64(x: i64) -> Self {
        Complex64::new(x as f64, 0.0)
    }

    fn from_bigint(x: &BigInt) -> Self {
        Complex64::new(x.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: alloc::vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        Mat::from_fn(m.rows(), m.cols(), |i, j| T::from_bigint(&m[(i, j)]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    fn check_same_shape(&self, other: &Mat<T>) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{}x{} vs {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat<T>) -> Result<Mat<T>> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Mat<T>) -> Result<Mat<T>> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, k: &T) -> Mat<T> {
        let data = self.data.iter().map(|a| a.clone() * k.clone()).collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &Mat<T>) -> Result<Mat<T>> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{}x{} * {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            )));
        }
        let mut out: Mat<T> = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Mat<T>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut result = Mat::identity(self.rows);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn max_abs_diff(&self, other: &Mat<T>) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).modulus())
            .fold(0.0, f64::max))
    }

    /// Inverse by Gauss-Jordan with partial pivoting on modulus.
    pub fn inverse(&self) -> Result<Mat<T>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv: Mat<T> = Mat::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a[(r, col)].is_zero())
                .max_by(|&x, &y| a[(x, col)].modulus().total_cmp(&a[(y, col)].modulus()));
            let p = match pivot {
                Some(p) if T::EXACT || a[(p, col)].modulus() > 1e-300 => p,
                _ => return Err(Error::Precondition("singular matrix".into())),
            };
            a.swap_rows(p, col);
            inv.swap_rows(p, col);
            let d = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = a[(col, j)].clone() / d.clone();
                inv[(col, j)] = inv[(col, j)].clone() / d.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let k = a[(r, col)].clone();
                for j in 0..n {
                    a[(r, j)] = a[(r, j)].clone() - k.clone() * a[(col, j)].clone();
                    inv[(r, j)] = inv[(r, j)].clone() - k.clone() * inv[(col, j)].clone();
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Assembles a block matrix from equally sized square blocks.
    pub fn from_blocks(blocks: &[Vec<Mat<T>>], k: usize) -> Mat<T> {
        let n = blocks.len();
        let mut out = Mat::zeros(n * k, n * k);
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, b) in row.iter().enumerate() {
                for i in 0..k {
                    for j in 0..k {
                        out[(bi * k + i, bj * k + j)] = b[(i, j)].clone();
                    }
                }
            }
        }
        out
    }

    pub fn to_complex(&self) -> Mat<Complex64> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(T::to_complex).collect(),
        }
    }

    /// `det(I − tM)` as a polynomial in `t`, via Faddeev–LeVerrier.
    pub fn det_one_minus_t(&self) -> Result<Polynomial<T>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut coeffs = Vec::with_capacity(n + 1);
        coeffs.push(T::one());
        // M_1 = I; c_k = −tr(M·M_k)/k; M_{k+1} = M·M_k + c_k I
        let mut mk = Mat::identity(n);
        for k in 1..=n {
            let amk = self.mul(&mk)?;
            let c = -(amk.trace() / T::from_i64(k as i64));
            mk = amk;
            for i in 0..n {
                mk[(i, i)] = mk[(i, i)].clone() + c.clone();
            }
            coeffs.push(c);
        }
        Ok(Polynomial::new(coeffs))
    }

    /// Characteristic polynomial `det(λI − M)` with ascending coefficients.
    pub fn char_poly(&self) -> Result<Polynomial<T>> {
        let mut c = self.det_one_minus_t()?.coeffs().to_vec();
        c.resize(self.rows + 1, T::zero());
        c.reverse();
        Ok(Polynomial::new(c))
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Upper-left Hessenberg eigenvalues by shifted complex QR.
pub(crate) fn hessenberg_eigenvalues(mut h: Mat<Complex64>) -> Result<Vec<Complex64>> {
    let n = h.rows();
    let mut eig = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eig);
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[(l, l - 1)].norm() <= f64::EPSILON * s {
                h[(l, l - 1)] = Complex64::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig.push(h[(hi, hi)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 60 * n {
            return Err(Error::Internal("QR iteration did not converge".into()));
        }
        let shift = if iter % 11 == 10 {
            h[(hi, hi)] + Complex64::new(h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for i in l..=hi {
            h[(i, i)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let a = h[(k, k)];
            let b = h[(k + 1, k)];
            let r = Float::sqrt(a.norm_sqr() + b.norm_sqr());
            let (c, s) = if r == 0.0 {
                (Complex64::one(), Complex64::zero())
            } else {
                (a / r, b / r)
            };
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = c.conj() * x + s.conj() * y;
                h[(k + 1, j)] = -s * x + c * y;
            }
            rotations.push((c, s));
        }
        for (idx, (c, s)) in rotations.into_iter().enumerate() {
            let k = l + idx;
            for i in l..=(k + 1).min(hi) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s;
                h[(i, k + 1)] = -x * s.conj() + y * c.conj();
            }
        }
        for i in l..=hi {
            h[(i, i)] += shift;
        }
    }
    eig.push(h[(0, 0)]);
    Ok(eig)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let half = tr * 0.5;
    let l1 = half + disc;
    let l2 = half - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Real rationals to `f64` for reporting.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n)
    }

    fn qm(rows: usize, cols: usize, e: &[i64]) -> Mat<BigRational> {
        Mat::from_int(&IntMatrix::from_i64(rows, cols, e))
    }

    #[test]
    fn faddeev_examples() {
        let p = qm(2, 2, &[1, 1, 1, 0]).det_one_minus_t().unwrap();
        assert_eq!(p, Polynomial::new(vec![q(1), q(-1), q(-1)]));
        let p = Mat::<BigRational>::identity(3).det_one_minus_t().unwrap();
        assert_eq!(p, Polynomial::new(vec![q(1), q(-3), q(3), q(-1)]));
        let c = qm(2, 2, &[2, 1, 1, 1]).char_poly().unwrap();
        assert_eq!(c, Polynomial::new(vec![q(1), q(-3), q(1)]));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = qm(3, 3, &[2, 1, 0, 1, 1, 1, 0, 1, 3]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Mat::identity(3));
        assert!(qm(2, 2, &[1, 2, 2, 4]).inverse().is_err());
    }

    #[test]
    fn qr_eigenvalues_of_companion() {
        // x^3 − 6x^2 + 11x − 6
        let h = Mat::from_rows(vec![
            vec![
                Complex64::new(6.0, 0.0),
                Complex64::new(-11.0, 0.0),
                Complex64::new(6.0, 0.0),
            ],
            vec![Complex64::one(), Complex64::zero(), Complex64::zero()],
            vec![Complex64::zero(), Complex64::one(), Complex64::zero()],
        ])
        .unwrap();
        let mut e: Vec<f64> = hessenberg_eigenvalues(h).unwrap().iter().map(|z| z.re).collect();
        e.sort_by(f64::total_cmp);
        for (x, want) in e.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - want).abs() < 1e-9, "{x}");
        }
    }

    proptest! {
        #[test]
        fn det_poly_matches_bareiss(entries in proptest::collection::vec(-4i64..=4, 9), t in -3i64..=3) {
            let m = IntMatrix::from_i64(3, 3, &entries);
            let p = Mat::<BigRational>::from_int(&m).det_one_minus_t().unwrap();
            let mut shifted = IntMatrix::identity(3);
            for i in 0..3 {
                for j in 0..3 {
                    shifted[(i, j)] -= &m[(i, j)] * BigInt::from(t);
                }
            }
            prop_assert_eq!(p.eval(&q(t)), q(0) + BigRational::from_integer(shifted.det().unwrap()));
        }
    }
}
