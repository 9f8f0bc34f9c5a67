//! Reduced words in a free group, endomorphisms given by generator images,
//! and their abelianization.
//!
//! A letter is a nonzero `i32`: `+i` is the generator `a_i`, `-i` its
//! inverse. Generators are 1-based. In text, generator `i` is the `i`-th
//! lowercase letter (`a`, `b`, ...); an uppercase letter or a `^-1` suffix
//! denotes the inverse.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// Largest rank that has a text representation (`a` ..= `z`).
pub const MAX_TEXT_RANK: usize = 26;

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<i32>);

fn letter_key(l: i32) -> (u32, bool) {
    (l.unsigned_abs(), l < 0)
}

impl Ord for Word {
    /// Length-lexicographic, with `a < A < b < B < ...`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| {
            self.0
                .iter()
                .map(|&l| letter_key(l))
                .cmp(other.0.iter().map(|&l| letter_key(l)))
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn push_reduced(buf: &mut Vec<i32>, l: i32) {
    if buf.last() == Some(&-l) {
        buf.pop();
    } else {
        buf.push(l);
    }
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// The single-letter word `a_index`.
    pub fn generator(index: usize) -> Self {
        Word(alloc::vec![index as i32])
    }

    /// Freely reduces a raw letter sequence over generators `1..=rank`.
    pub fn reduce(letters: &[i32], rank: usize) -> Result<Self> {
        let mut buf = Vec::with_capacity(letters.len());
        for &l in letters {
            check_letter(l, rank)?;
            push_reduced(&mut buf, l);
        }
        Ok(Word(buf))
    }

    /// Wraps letters already known to be reduced and in range.
    pub(crate) fn from_reduced_unchecked(letters: Vec<i32>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] != -w[1]));
        Word(letters)
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, 0 for the identity.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &Word) -> Word {
        let a = &self.0;
        let b = &other.0;
        let mut k = 0;
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == -b[k] {
            k += 1;
        }
        let mut out = Vec::with_capacity(a.len() + b.len() - 2 * k);
        out.extend_from_slice(&a[..a.len() - k]);
        out.extend_from_slice(&b[k..]);
        Word(out)
    }

    /// Exponent sum of each generator, indexed `0..rank`.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut sums = alloc::vec![0i64; rank];
        for &l in &self.0 {
            sums[l.unsigned_abs() as usize - 1] += i64::from(l.signum());
        }
        sums
    }

    /// Parses whitespace-separated letters, checking indices against `rank`.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let w: Word = text.parse()?;
        Word::reduce(&w.0, rank)
    }
}

fn check_letter(l: i32, rank: usize) -> Result<()> {
    let index = l.unsigned_abs() as usize;
    if l == 0 || index > rank {
        return Err(Error::GeneratorOutOfRange { index, rank });
    }
    Ok(())
}

fn parse_letter(token: &str) -> Result<i32> {
    let (base, inverted) = match token.strip_suffix("^-1") {
        Some(b) => (b, true),
        None => (token, false),
    };
    let mut chars = base.chars();
    let (c, rest) = (chars.next(), chars.next());
    let c = match (c, rest) {
        (Some(c), None) if c.is_ascii_alphabetic() => c,
        _ => return Err(Error::Parse(alloc::format!("bad letter `{token}`"))),
    };
    let index = (c.to_ascii_lowercase() as u8 - b'a') as i32 + 1;
    let sign = if c.is_ascii_uppercase() { -1 } else { 1 };
    Ok(if inverted { -sign * index } else { sign * index })
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `"a b A"`, `"a b^-1"`, or `"1"` for the identity. Indices are
    /// not range-checked; use [`Word::parse`] for that.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::identity());
        }
        let mut buf = Vec::new();
        for token in s.split_whitespace() {
            push_reduced(&mut buf, parse_letter(token)?);
        }
        Ok(Word(buf))
    }
}

pub(crate) fn letter_char(l: i32) -> char {
    let idx = l.unsigned_abs() - 1;
    let base = if l > 0 { b'a' } else { b'A' };
    if idx < MAX_TEXT_RANK as u32 {
        (base + idx as u8) as char
    } else {
        '?'
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, &l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", letter_char(l))?;
        }
        Ok(())
    }
}

/// An endomorphism of the free group of rank `r`, `a_i ↦ b_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    rank: usize,
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn new(rank: usize, images: Vec<Word>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Precondition("rank must be positive".to_string()));
        }
        if images.len() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                found: images.len(),
            });
        }
        for w in &images {
            let m = w.max_generator();
            if m > rank {
                return Err(Error::GeneratorOutOfRange { index: m, rank });
            }
        }
        Ok(Endomorphism { rank, images })
    }

    /// Builds from text images such as `["a b", "a"]`.
    pub fn parse(rank: usize, images: &[&str]) -> Result<Self> {
        let images = images
            .iter()
            .map(|s| Word::parse(s, rank))
            .collect::<Result<Vec<_>>>()?;
        Endomorphism::new(rank, images)
    }

    pub fn identity(rank: usize) -> Self {
        Endomorphism {
            rank,
            images: (1..=rank).map(Word::generator).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, generator: usize) -> &Word {
        &self.images[generator - 1]
    }

    /// Image of a word under substitution `a_i ↦ b_i`, `a_i⁻¹ ↦ b_i⁻¹`.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        let m = w.max_generator();
        if m > self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: m,
            });
        }
        Ok(self.apply_unchecked(w))
    }

    pub(crate) fn apply_unchecked(&self, w: &Word) -> Word {
        let mut buf = Vec::new();
        for &l in w.letters() {
            let img = &self.images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                for &x in img.letters() {
                    push_reduced(&mut buf, x);
                }
            } else {
                for &x in img.letters().iter().rev() {
                    push_reduced(&mut buf, -x);
                }
            }
        }
        Word(buf)
    }

    /// `self ∘ other`: `a_i ↦ self(other(a_i))`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        let images = other.images.iter().map(|w| self.apply_unchecked(w)).collect();
        Ok(Endomorphism {
            rank: self.rank,
            images,
        })
    }

    /// The `n`-fold composite; `n = 0` is the identity.
    pub fn iterate(&self, n: u32) -> Endomorphism {
        let mut acc = Endomorphism::identity(self.rank);
        for _ in 0..n {
            acc = Endomorphism {
                rank: self.rank,
                images: acc.images.iter().map(|w| self.apply_unchecked(w)).collect(),
            };
        }
        acc
    }

    /// Matrix of the induced map on `H_1`: entry `(i, j)` is the exponent
    /// sum of `a_j` in `b_i`.
    pub fn abelianize(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rank, self.rank);
        for (i, w) in self.images.iter().enumerate() {
            for (j, s) in w.exponent_sums(self.rank).into_iter().enumerate() {
                m[(i, j)] = BigInt::from(s);
            }
        }
        m
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} -> {}", letter_char(i as i32 + 1), w)?;
        }
        Ok(())
    }
}

/// Renders a generator index as its text letter.
pub fn generator_name(index: usize) -> String {
    let mut s = String::new();
    s.push(letter_char(index as i32));
    s
}
