//! Dense integer matrices with arbitrary-precision entries and Smith normal form.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: alloc::vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Row-major construction from machine integers.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        IntMatrix {
            rows,
            cols,
            data: entries.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
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

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{}x{} * {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("subtraction of unequal shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut result = IntMatrix::identity(self.rows);
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

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| &self[(i, i)]).sum()
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.cols)
            .map(|j| v.iter().enumerate().map(|(i, x)| x * &self[(i, j)]).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(p) => {
                        m.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = v / &prev;
                }
            }
            prev = m[(k, k)].clone();
        }
        Ok(sign * &m[(n - 1, n - 1)])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = k * &self[(src, j)];
            self[(dst, j)] += v;
        }
    }

    /// `col[dst] += k * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = k * &self[(i, src)];
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Smith normal form `U * self * V = D` with `U`, `V` unimodular and
    /// `D` diagonal, nonnegative, each invariant factor dividing the next.
    pub fn smith(&self) -> Smith {
        let (r, c) = (self.rows, self.cols);
        let mut d = self.clone();
        let mut u = IntMatrix::identity(r);
        let mut v = IntMatrix::identity(c);
        let mut t = 0;
        while t < r.min(c) {
            // pivot: smallest nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &d[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..r {
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                if !q.is_zero() {
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                }
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..c {
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                if !q.is_zero() {
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                }
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                // remainders are smaller than the pivot; repeat with a new pivot
                continue;
            }
            // divisibility: fold any entry not divisible by the pivot into row t
            let mut fixed = false;
            'outer: for i in t + 1..r {
                for j in t + 1..c {
                    if !d[(i, j)].is_multiple_of(&d[(t, t)]) {
                        d.add_row(t, i, &BigInt::one());
                        u.add_row(t, i, &BigInt::one());
                        fixed = true;
                        break 'outer;
                    }
                }
            }
            if fixed {
                continue;
            }
            if d[(t, t)].is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        let diagonal = (0..r.min(c)).map(|i| d[(i, i)].clone()).collect();
        Smith { u, v, diagonal }
    }
}

/// Result of [`IntMatrix::smith`].
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Invariant factors `d_1 | d_2 | ...`, zeros last.
    pub diagonal: Vec<BigInt>,
}

impl Smith {
    /// Order of the cokernel, `None` when it is infinite.
    pub fn cokernel_order(&self, rows: usize) -> Option<BigInt> {
        if self.diagonal.len() < rows || self.diagonal.iter().any(Zero::is_zero) {
            return None;
        }
        Some(self.diagonal.iter().product())
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_smith(m: &IntMatrix) {
        let s = m.smith();
        let prod = s.u.mul(m).unwrap().mul(&s.v).unwrap();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let expected = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(prod[(i, j)], expected, "U M V is not diagonal for {m}");
            }
        }
        assert!(s.u.det().unwrap().abs().is_one());
        assert!(s.v.det().unwrap().abs().is_one());
        for w in s.diagonal.windows(2) {
            if !w[1].is_zero() {
                assert!(
                    w[1].is_multiple_of(&w[0]),
                    "divisibility chain broken: {:?}",
                    s.diagonal
                );
            } else {
                assert!(w[0].is_zero() || !w[0].is_negative());
            }
        }
        assert!(s.diagonal.iter().all(|d| !d.is_negative()));
    }

    #[test]
    fn smith_small_cases() {
        check_smith(&IntMatrix::from_i64(1, 1, &[-1]));
        check_smith(&IntMatrix::from_i64(2, 2, &[0, -1, -1, 1]));
        check_smith(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]));
        check_smith(&IntMatrix::from_i64(2, 3, &[2, 4, 4, -6, 6, 12]));
        let s = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]).smith();
        assert_eq!(s.diagonal, alloc::vec![BigInt::from(1), BigInt::from(6)]);
        let z = IntMatrix::zeros(2, 2).smith();
        assert_eq!(z.cokernel_order(2), None);
    }

    #[test]
    fn det_matches_cofactor_2x2_3x3() {
        let m = IntMatrix::from_i64(2, 2, &[5, 3, 3, 2]);
        assert_eq!(m.det().unwrap(), BigInt::from(1));
        let m = IntMatrix::from_i64(3, 3, &[0, 2, 1, 3, 0, 4, 1, 1, 0]);
        // 0*(0-4) - 2*(0-4) + 1*(3-0) = 11
        assert_eq!(m.det().unwrap(), BigInt::from(11));
    }

    proptest! {
        #[test]
        fn smith_is_valid(entries in proptest::collection::vec(-6i64..=6, 9), rows in 1usize..=3) {
            let cols = 3;
            let m = IntMatrix::from_i64(rows, cols, &entries[..rows * cols]);
            check_smith(&m);
        }

        #[test]
        fn smith_order_is_abs_det(entries in proptest::collection::vec(-5i64..=5, 4)) {
            let m = IntMatrix::from_i64(2, 2, &entries);
            let d = m.det().unwrap();
            let s = m.smith();
            match s.cokernel_order(2) {
                Some(order) => prop_assert_eq!(order, d.abs()),
                None => prop_assert!(d.is_zero()),
            }
        }
    }
}
