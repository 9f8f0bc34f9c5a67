//! Toral automorphisms `x ↦ Ax` of `ℝ²/ℤ²`: Lefschetz numbers and exact
//! fixed-point counts of iterates.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// Largest `|det(Aⁿ − I)|` for which fixed points are also enumerated.
pub const ENUMERATION_LIMIT: u64 = 100_000;

fn check_2x2(a: &IntMatrix) -> Result<()> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::DimensionMismatch(alloc::format!(
            "expected a 2x2 matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// Eigenvalue data of an integer 2×2 matrix, decided exactly from trace and determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToralSpectrum {
    /// Eigenvalues of modulus greater than one.
    pub expanding: u32,
    /// Real eigenvalues less than −1.
    pub negative_expanding: u32,
    /// Whether the eigenvalues are non-real.
    pub complex: bool,
}

/// Classifies `A`; rejects matrices with an eigenvalue of modulus one.
pub fn toral_spectrum(a: &IntMatrix) -> Result<ToralSpectrum> {
    check_2x2(a)?;
    let tr = a.trace();
    let det = a.det()?;
    let one = BigInt::one();
    // p(x) = x² − tr·x + det
    let p_at_1 = &one - &tr + &det;
    let p_at_m1 = &one + &tr + &det;
    let disc = &tr * &tr - BigInt::from(4) * &det;
    if p_at_1.is_zero() {
        return Err(Error::NotHyperbolic("eigenvalue 1".into()));
    }
    if p_at_m1.is_zero() {
        return Err(Error::NotHyperbolic("eigenvalue -1".into()));
    }
    if disc.is_negative() {
        if det.is_one() {
            return Err(Error::NotHyperbolic("complex eigenvalues on the unit circle".into()));
        }
        // |λ|² = det ≥ 2 here
        return Ok(ToralSpectrum {
            expanding: 2,
            negative_expanding: 0,
            complex: true,
        });
    }
    // p monic: one root beyond ±1 when p(±1) < 0, else zero or two by the vertex tr/2
    let above = if p_at_1.is_negative() {
        1
    } else if tr > BigInt::from(2) {
        2
    } else {
        0
    };
    let below = if p_at_m1.is_negative() {
        1
    } else if tr < BigInt::from(-2) {
        2
    } else {
        0
    };
    Ok(ToralSpectrum {
        expanding: above + below,
        negative_expanding: below,
        complex: false,
    })
}

pub fn is_hyperbolic(a: &IntMatrix) -> bool {
    toral_spectrum(a).is_ok()
}

/// `L(φⁿ) = det(I − Aⁿ)`.
pub fn lefschetz_number(a: &IntMatrix, n: u32) -> Result<BigInt> {
    check_2x2(a)?;
    if n == 0 {
        return Err(Error::Precondition("iterate n must be >= 1".into()));
    }
    IntMatrix::identity(2).sub(&a.pow(n)?)?.det()
}

/// Fixed points of `φⁿ`, counted by Smith normal form and, for small counts,
/// by listing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointCount {
    pub n: u32,
    pub count: BigUint,
    /// Number of distinct listed points, when below [`ENUMERATION_LIMIT`].
    pub enumerated: Option<BigUint>,
}

/// Fixed points of `φⁿ` as exact rationals in `[0, 1)²`.
pub fn fixed_points(a: &IntMatrix, n: u32) -> Result<Vec<(BigRational, BigRational)>> {
    let (b, smith) = shifted_smith(a, n)?;
    let d: Vec<BigInt> = smith.diagonal.clone();
    let total = d.iter().product::<BigInt>();
    if total > BigInt::from(ENUMERATION_LIMIT) {
        return Err(Error::Precondition(alloc::format!(
            "{total} fixed points exceed the listing limit"
        )));
    }
    // B x ∈ ℤ² ⟺ D V⁻¹x ∈ ℤ²: x = V (k₁/d₁, k₂/d₂) mod 1
    let v = &smith.v;
    let mut out = BTreeSet::new();
    let mut k1 = BigInt::zero();
    while k1 < d[0] {
        let mut k2 = BigInt::zero();
        while k2 < d[1] {
            let y = [
                BigRational::new(k1.clone(), d[0].clone()),
                BigRational::new(k2.clone(), d[1].clone()),
            ];
            let x: Vec<BigRational> = (0..2)
                .map(|i| {
                    let s = BigRational::from_integer(v[(i, 0)].clone()) * &y[0]
                        + BigRational::from_integer(v[(i, 1)].clone()) * &y[1];
                    frac(&s)
                })
                .collect();
            for i in 0..2 {
                let img = BigRational::from_integer(b[(i, 0)].clone()) * &x[0]
                    + BigRational::from_integer(b[(i, 1)].clone()) * &x[1];
                if !img.is_integer() {
                    return Err(Error::Internal("listed point is not fixed".into()));
                }
            }
            out.insert((x[0].clone(), x[1].clone()));
            k2 += 1;
        }
        k1 += 1;
    }
    Ok(out.into_iter().collect())
}

fn frac(x: &BigRational) -> BigRational {
    let fl = BigRational::from_integer(x.numer().div_floor(x.denom()));
    x - fl
}

fn shifted_smith(a: &IntMatrix, n: u32) -> Result<(IntMatrix, crate::intmat::Smith)> {
    check_2x2(a)?;
    if n == 0 {
        return Err(Error::Precondition("iterate n must be >= 1".into()));
    }
    let b = a.pow(n)?.sub(&IntMatrix::identity(2))?;
    let smith = b.smith();
    if smith.diagonal.iter().any(Zero::is_zero) {
        return Err(Error::NonIsolatedFixedPoints { n });
    }
    Ok((b, smith))
}

fn smith_count(a: &IntMatrix, n: u32) -> Result<BigUint> {
    let (_, smith) = shifted_smith(a, n)?;
    Ok(smith.diagonal.iter().map(|d| d.magnitude().clone()).product())
}

pub fn fixed_point_count(a: &IntMatrix, n: u32) -> Result<FixedPointCount> {
    let count = smith_count(a, n)?;
    let enumerated = if count <= BigUint::from(ENUMERATION_LIMIT) {
        let listed = BigUint::from(fixed_points(a, n)?.len());
        if listed != count {
            return Err(Error::Internal(alloc::format!(
                "Smith count {count} but {listed} listed points"
            )));
        }
        Some(listed)
    } else {
        None
    };
    Ok(FixedPointCount { n, count, enumerated })
}

/// `(N(φⁿ))_{n=1..=count}`; requires a hyperbolic matrix.
pub fn nielsen_sequence(a: &IntMatrix, count: u32) -> Result<Vec<BigUint>> {
    toral_spectrum(a)?;
    (1..=count).map(|n| smith_count(a, n)).collect()
}

/// `|det(I − Aⁿ)|` as `f64`, for growth estimates.
pub fn nielsen_sequence_f64(a: &IntMatrix, count: u32) -> Result<Vec<f64>> {
    Ok(nielsen_sequence(a, count)?
        .iter()
        .map(|x| x.to_f64().unwrap_or(f64::INFINITY))
        .collect())
}
