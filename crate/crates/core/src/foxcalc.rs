//! The integral group ring of a free group, Fox derivatives, and the
//! chain matrices of the lifted cellular map of a bouquet of circles.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::freegroup::{Endomorphism, Word};
use crate::intmat::IntMatrix;

/// A finite integer combination of reduced words. Zero coefficients are
/// never stored, so equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    terms: BTreeMap<Word, BigInt>,
}

impl RingElem {
    pub fn zero() -> Self {
        RingElem::default()
    }

    pub fn one() -> Self {
        RingElem::from_word(Word::identity())
    }

    pub fn from_word(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, BigInt::one());
        RingElem { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, BigInt)>>(terms: I) -> Self {
        let mut r = RingElem::zero();
        for (w, c) in terms {
            r.add_term(w, c);
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &RingElem) -> RingElem {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn add_assign(&mut self, other: &RingElem) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &RingElem) -> RingElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RingElem {
        RingElem {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> RingElem {
        if k.is_zero() {
            return RingElem::zero();
        }
        RingElem {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect(),
        }
    }

    /// Ring product: words multiply by concatenation and reduction.
    pub fn mul(&self, other: &RingElem) -> RingElem {
        let mut r = RingElem::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                r.add_term(u.mul(v), a * b);
            }
        }
        r
    }

    /// Applies an endomorphism to every word (the ring map `f_#`).
    pub fn map_endo(&self, f: &Endomorphism) -> RingElem {
        let mut r = RingElem::zero();
        for (w, c) in &self.terms {
            r.add_term(f.apply_unchecked(w), c.clone());
        }
        r
    }

    /// Augmentation: every word maps to 1.
    pub fn augment(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Sum of absolute values of the coefficients.
    pub fn norm(&self) -> BigUint {
        self.terms.values().map(|c| c.magnitude().clone()).sum()
    }

    pub fn max_generator(&self) -> usize {
        self.terms.keys().map(Word::max_generator).max().unwrap_or(0)
    }
}

impl From<Word> for RingElem {
    fn from(w: Word) -> Self {
        RingElem::from_word(w)
    }
}

impl fmt::Display for RingElem {
    /// `1 + a - 2 a B`; the zero element prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let mag = c.magnitude();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if w.is_identity() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag} {w}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for RingElem {
    type Err = Error;

    /// Parses the format produced by `Display`, e.g. `"1 + a - 2 a B"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = RingElem::zero();
        let mut sign = BigInt::one();
        let mut coeff: Option<BigInt> = None;
        let mut letters: Vec<&str> = Vec::new();
        let mut seen_any = false;

        let flush =
            |out: &mut RingElem, sign: &BigInt, coeff: &mut Option<BigInt>, letters: &mut Vec<&str>| -> Result<bool> {
                if coeff.is_none() && letters.is_empty() {
                    return Ok(false);
                }
                let w: Word = if letters.is_empty() {
                    Word::identity()
                } else {
                    letters.join(" ").parse()?
                };
                let c = coeff.take().unwrap_or_else(BigInt::one);
                out.add_term(w, sign * c);
                letters.clear();
                Ok(true)
            };

        for token in s.split_whitespace() {
            match token {
                "+" | "-" => {
                    let had = flush(&mut out, &sign, &mut coeff, &mut letters)?;
                    if !had && seen_any {
                        return Err(Error::Parse(alloc::format!("dangling operator in `{s}`")));
                    }
                    sign = if token == "-" { -BigInt::one() } else { BigInt::one() };
                    seen_any = true;
                }
                _ => {
                    seen_any = true;
                    let (neg, body) = match token.strip_prefix('-') {
                        Some(rest) if !rest.is_empty() && letters.is_empty() && coeff.is_none() => (true, rest),
                        _ => (false, token),
                    };
                    if neg {
                        sign = -sign;
                    }
                    if body.chars().all(|c| c.is_ascii_digit()) {
                        if coeff.is_some() || !letters.is_empty() {
                            return Err(Error::Parse(alloc::format!("misplaced integer in `{s}`")));
                        }
                        let v: BigInt = body
                            .parse()
                            .map_err(|_| Error::Parse(alloc::format!("bad integer `{body}`")))?;
                        coeff = Some(v);
                    } else {
                        letters.push(body);
                    }
                }
            }
        }
        if !flush(&mut out, &sign, &mut coeff, &mut letters)? && seen_any {
            return Err(Error::Parse(alloc::format!("dangling operator in `{s}`")));
        }
        if !seen_any {
            return Err(Error::Parse("empty ring element".to_string()));
        }
        Ok(out)
    }
}

/// A matrix over the group ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RingElem>,
}

impl RingMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RingMatrix {
            rows,
            cols,
            entries: alloc::vec![RingElem::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RingMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = RingElem::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RingElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch("empty ring matrix".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(RingMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
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

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: RingElem) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.entries
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{}x{} * {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            )));
        }
        let mut out = RingMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = RingElem::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn map_endo(&self, f: &Endomorphism) -> RingMatrix {
        RingMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x.map_endo(f)).collect(),
        }
    }

    pub fn trace(&self) -> RingElem {
        let mut acc = RingElem::zero();
        for i in 0..self.rows.min(self.cols) {
            acc.add_assign(self.get(i, i));
        }
        acc
    }

    /// Entrywise augmentation.
    pub fn augment(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self.get(i, j).augment();
            }
        }
        m
    }

    /// Total norm: sum of entry norms.
    pub fn norm(&self) -> BigUint {
        self.entries.iter().map(RingElem::norm).sum()
    }

    pub fn max_generator(&self) -> usize {
        self.entries.iter().map(RingElem::max_generator).max().unwrap_or(0)
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Fox derivative `∂w/∂a_j`, computed in one scan over the prefixes of `w`.
pub fn fox_derivative(w: &Word, j: usize, rank: usize) -> Result<RingElem> {
    if j == 0 || j > rank {
        return Err(Error::GeneratorOutOfRange { index: j, rank });
    }
    if w.max_generator() > rank {
        return Err(Error::GeneratorOutOfRange {
            index: w.max_generator(),
            rank,
        });
    }
    Ok(fox_row(w, rank).swap_remove(j - 1))
}

/// All derivatives `∂w/∂a_1 .. ∂w/∂a_rank` in a single pass.
fn fox_row(w: &Word, rank: usize) -> Vec<RingElem> {
    let mut row = alloc::vec![RingElem::zero(); rank];
    let letters = w.letters();
    for (k, &l) in letters.iter().enumerate() {
        let g = l.unsigned_abs() as usize - 1;
        if l > 0 {
            // + x_1 ... x_{k-1}
            row[g].add_term(Word::from_reduced_unchecked(letters[..k].to_vec()), BigInt::one());
        } else {
            // - x_1 ... x_k
            row[g].add_term(Word::from_reduced_unchecked(letters[..=k].to_vec()), -BigInt::one());
        }
    }
    row
}

/// Fox Jacobian `D = (∂b_i/∂a_j)`.
pub fn jacobian(f: &Endomorphism) -> RingMatrix {
    let r = f.rank();
    let rows = f.images().iter().map(|b| fox_row(b, r)).collect();
    RingMatrix::from_rows(rows).expect("jacobian has rank x rank shape")
}

/// Matrices `F_0, F_1, ...` of the lifted cellular chain map.
///
/// For a bouquet of circles these are `F_0 = (1)` and `F_1 = D`; any further
/// matrices are taken verbatim from the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMatrices {
    matrices: Vec<RingMatrix>,
}

impl ChainMatrices {
    pub fn new(matrices: Vec<RingMatrix>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::Precondition("at least one chain matrix is required".into()));
        }
        if let Some(m) = matrices.iter().find(|m| !m.is_square()) {
            return Err(Error::DimensionMismatch(alloc::format!(
                "chain matrices must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(ChainMatrices { matrices })
    }

    /// Appends user-supplied matrices for dimensions `2, 3, ...`.
    pub fn with_extra(mut self, extra: Vec<RingMatrix>, rank: usize) -> Result<Self> {
        for m in &extra {
            if !m.is_square() {
                return Err(Error::DimensionMismatch("extra chain matrix is not square".into()));
            }
            if m.max_generator() > rank {
                return Err(Error::GeneratorOutOfRange {
                    index: m.max_generator(),
                    rank,
                });
            }
        }
        self.matrices.extend(extra);
        Ok(self)
    }

    /// Matrix in cell dimension `d`.
    pub fn get(&self, d: usize) -> Option<&RingMatrix> {
        self.matrices.get(d)
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &RingMatrix)> {
        self.matrices.iter().enumerate()
    }
}

pub fn chain_matrices(f: &Endomorphism) -> ChainMatrices {
    ChainMatrices {
        matrices: alloc::vec![RingMatrix::identity(1), jacobian(f)],
    }
}

/// Augmentation `ℤπ → ℤ`.
pub fn augment(x: &RingElem) -> BigInt {
    x.augment()
}
