//! Symplectic zeta functions of dimension sequences, the periodic product
//! formula, and closed forms for hyperbolic toral automorphisms.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::growth::{growth_rate_big, GrowthEstimate};
use crate::intmat::IntMatrix;
use crate::poly::{Polynomial, PowerSeries, RationalFunction};
use crate::torus::toral_spectrum;

fn to_q(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

/// `exp(Σ_{n≤N} dims_n tⁿ/n)` through `t^N`.
pub fn symplectic_zeta_series(dims: &[BigUint], order: usize) -> Result<PowerSeries<BigRational>> {
    if dims.len() < order {
        return Err(Error::SequenceTooShort {
            needed: order,
            found: dims.len(),
        });
    }
    let v: Vec<BigRational> = dims[..order].iter().map(to_q).collect();
    PowerSeries::exp_of_counts(&v, order)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadiusEstimate {
    pub radius: f64,
    pub growth: GrowthEstimate,
}

/// `1/grow(dims)` from the first `order` terms.
pub fn radius_estimate(dims: &[BigUint], order: usize) -> Result<RadiusEstimate> {
    if order < 3 {
        return Err(Error::SequenceTooShort {
            needed: 3,
            found: order,
        });
    }
    if dims.len() < order {
        return Err(Error::SequenceTooShort {
            needed: order,
            found: dims.len(),
        });
    }
    let growth = growth_rate_big(&dims[..order])?;
    Ok(RadiusEstimate {
        radius: 1.0 / growth.value,
        growth,
    })
}

/// Möbius function.
pub fn mobius(n: u64) -> i32 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// `(1 − t^d)^{−P/d}`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalFactor {
    pub d: u64,
    pub exponent_numerator: BigInt,
    pub exponent_denominator: u64,
}

impl RadicalFactor {
    /// The exponent `−P/d` of `(1 − t^d)`.
    pub fn exponent(&self) -> BigRational {
        -BigRational::new(self.exponent_numerator.clone(), BigInt::from(self.exponent_denominator))
    }
}

/// Product `Π_{d|m} (1 − t^d)^{−P(d)/d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalRational {
    pub factors: Vec<RadicalFactor>,
}

/// `(1 − t^d)^α` through `t^order` by the binomial series.
fn binomial_series(d: u64, alpha: &BigRational, order: usize) -> PowerSeries<BigRational> {
    let mut out = alloc::vec![BigRational::zero(); order + 1];
    let mut c = BigRational::one();
    let mut k = 0usize;
    while k * d as usize <= order {
        // (−1)^k C(α, k)
        out[k * d as usize] = c.clone();
        let kk = BigRational::from_integer(BigInt::from(k));
        c = -c * (alpha - &kk) / (kk + BigRational::one());
        k += 1;
    }
    PowerSeries::new(out, order)
}

impl RadicalRational {
    pub fn series(&self, order: usize) -> PowerSeries<BigRational> {
        self.factors.iter().fold(PowerSeries::one(order), |acc, f| {
            acc.mul(&binomial_series(f.d, &f.exponent(), order))
        })
    }

    /// Whether every exponent is an integer, so the product is a rational function.
    pub fn is_rational(&self) -> bool {
        self.factors.iter().all(|f| f.exponent().is_integer())
    }

    /// The rational function when [`RadicalRational::is_rational`] holds.
    pub fn to_rational_function(&self) -> Option<RationalFunction<BigRational>> {
        if !self.is_rational() {
            return None;
        }
        let mut num = Polynomial::one();
        let mut den = Polynomial::one();
        for f in &self.factors {
            let e = f.exponent().to_integer();
            let base = Polynomial::one().sub(&Polynomial::monomial(BigRational::one(), f.d as usize));
            let k: u32 = e.magnitude().try_into().ok()?;
            if e.is_negative() {
                den = den.mul(&base.pow(k));
            } else {
                num = num.mul(&base.pow(k));
            }
        }
        RationalFunction::new(num, den).ok()
    }
}

impl fmt::Display for RadicalRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for fac in &self.factors {
            let e = fac.exponent();
            if e.is_zero() {
                continue;
            }
            if any {
                f.write_str(" ")?;
            }
            any = true;
            let base = if fac.d == 1 {
                alloc::string::String::from("1 - t")
            } else {
                alloc::format!("1 - t^{}", fac.d)
            };
            if e.is_integer() {
                write!(f, "({base})^{}", e.numer())?;
            } else {
                write!(f, "({base})^({e})")?;
            }
        }
        if !any {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Product formula for an `m`-periodic dimension sequence given on the divisors of `m`.
pub fn periodic_zeta(m: u64, dims: &BTreeMap<u64, BigInt>) -> Result<RadicalRational> {
    if m == 0 {
        return Err(Error::Precondition("period must be positive".into()));
    }
    let divs = divisors(m);
    for d in &divs {
        match dims.get(d) {
            None => {
                return Err(Error::MissingData(alloc::format!(
                    "no dimension for divisor {d} of {m}"
                )))
            }
            Some(x) if x.is_negative() => {
                return Err(Error::Precondition(alloc::format!("negative dimension at divisor {d}")))
            }
            _ => {}
        }
    }
    let factors = divs
        .iter()
        .map(|&d| {
            let p: BigInt = divisors(d)
                .into_iter()
                .map(|d1| BigInt::from(mobius(d1)) * &dims[&(d / d1)])
                .sum();
            RadicalFactor {
                d,
                exponent_numerator: p,
                exponent_denominator: d,
            }
        })
        .collect();
    Ok(RadicalRational { factors })
}

/// `dims(gcd(n, m))` for `n = 1..=len`: the sequence the product formula expands.
pub fn periodic_extension(m: u64, dims: &BTreeMap<u64, BigInt>, len: usize) -> Result<Vec<BigInt>> {
    (1..=len as u64)
        .map(|n| {
            let g = n.gcd(&m);
            dims.get(&g)
                .cloned()
                .ok_or_else(|| Error::MissingData(alloc::format!("no dimension for divisor {g}")))
        })
        .collect()
}

fn trace_det(a: &IntMatrix) -> Result<(BigInt, BigInt)> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::DimensionMismatch("expected a 2x2 matrix".into()));
    }
    Ok((a.trace(), a.det()?))
}

/// `exp(Σ L(φⁿ) tⁿ/n) = det(I − tA)/((1 − t)(1 − det(A)·t))`, reduced.
pub fn weil_zeta_torus(a: &IntMatrix) -> Result<RationalFunction<BigRational>> {
    let (tr, det) = trace_det(a)?;
    let q = |x: BigInt| BigRational::from_integer(x);
    let num = Polynomial::new(alloc::vec![BigRational::one(), q(-tr), q(det.clone())]);
    let den =
        Polynomial::<BigRational>::from_i64(&[1, -1]).mul(&Polynomial::new(alloc::vec![BigRational::one(), q(-det)]));
    Ok(RationalFunction::new(num, den)?.reduced())
}

/// Closed form of the symplectic zeta function of a hyperbolic toral automorphism.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusZeta {
    /// `L(σt)^{(−1)^r}`, already inverted when `r` is odd.
    pub zeta: RationalFunction<BigRational>,
    /// `L(t)`
    pub weil: RationalFunction<BigRational>,
    /// Eigenvalues of modulus greater than one.
    pub r: u32,
    /// Real eigenvalues less than −1.
    pub p: u32,
    /// `(−1)^p`
    pub sigma: i32,
    /// Whether `zeta` is the reciprocal of `L(σt)`.
    pub reciprocal: bool,
}

pub fn torus_symplectic_zeta(a: &IntMatrix) -> Result<TorusZeta> {
    let spec = toral_spectrum(a)?;
    let weil = weil_zeta_torus(a)?;
    let sigma: i32 = if spec.negative_expanding % 2 == 0 { 1 } else { -1 };
    let scaled = weil.substitute_scale(&BigRational::from_integer(BigInt::from(sigma)));
    let reciprocal = spec.expanding % 2 == 1;
    let zeta = if reciprocal { scaled.reciprocal()? } else { scaled };
    Ok(TorusZeta {
        zeta,
        weil,
        r: spec.expanding,
        p: spec.negative_expanding,
        sigma,
        reciprocal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;
    use crate::torus::{is_hyperbolic, nielsen_sequence};
    use alloc::string::ToString;
    use alloc::vec;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn m(e: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(2, 2, e)
    }
    fn u(x: u64) -> BigUint {
        BigUint::from(x)
    }
    fn p(c: &[i64]) -> Polynomial<BigRational> {
        Polynomial::from_i64(c)
    }

    /// `exp(Σ cₙ tⁿ/n)` by composing the textbook exp series, as an independent oracle.
    fn exp_oracle(c: &[BigRational], order: usize) -> PowerSeries<BigRational> {
        let mut l = vec![q(0)];
        l.extend(c.iter().take(order).enumerate().map(|(i, x)| x / q(i as i64 + 1)));
        let l = PowerSeries::new(l, order);
        let mut term = PowerSeries::one(order);
        let mut sum = PowerSeries::one(order);
        for k in 1..=order {
            term = term.mul(&l);
            let scaled: Vec<BigRational> = term.coeffs().iter().map(|x| x / q((1..=k as i64).product())).collect();
            sum = sum.add(&PowerSeries::new(scaled, order));
        }
        sum
    }

    fn torus_lefschetz(a: &IntMatrix, n: usize) -> Vec<BigRational> {
        (1..=n as u32)
            .map(|k| BigRational::from_integer(crate::torus::lefschetz_number(a, k).unwrap()))
            .collect()
    }

    #[test]
    fn series_examples() {
        assert_eq!(symplectic_zeta_series(&vec![u(0); 6], 6).unwrap(), PowerSeries::one(6));
        let s = symplectic_zeta_series(&vec![u(1); 6], 6).unwrap();
        assert!(s.coeffs().iter().all(|c| c.is_one()));
        let pow2: Vec<BigUint> = (1..=10).map(|n| u(1 << n)).collect();
        let s = symplectic_zeta_series(&pow2, 10).unwrap();
        let oracle = exp_oracle(&pow2.iter().map(to_q).collect::<Vec<_>>(), 10);
        assert_eq!(s, oracle);
        assert_eq!(s.coeff(7), q(128));
        assert!(symplectic_zeta_series(&vec![u(1); 3], 5).is_err());
    }

    #[test]
    fn radius_examples() {
        assert!((radius_estimate(&vec![u(1); 10], 10).unwrap().radius - 1.0).abs() < 1e-12);
        let pow2: Vec<BigUint> = (1..=20).map(|n| u(1 << n)).collect();
        assert!((radius_estimate(&pow2, 20).unwrap().radius - 0.5).abs() < 1e-12);
        let seq = nielsen_sequence(&m(&[2, 1, 1, 1]), 30).unwrap();
        let want = 2.0 / (3.0 + 5f64.sqrt());
        let r = radius_estimate(&seq, 30).unwrap().radius;
        assert!((r - want).abs() / want < 0.02, "{r}");
    }

    #[test]
    fn mobius_examples() {
        let want = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, w) in want.iter().enumerate() {
            assert_eq!(mobius(i as u64 + 1), *w);
        }
    }

    fn dims(pairs: &[(u64, i64)]) -> BTreeMap<u64, BigInt> {
        pairs.iter().map(|&(d, x)| (d, BigInt::from(x))).collect()
    }

    #[test]
    fn periodic_examples() {
        let r = periodic_zeta(1, &dims(&[(1, 5)])).unwrap();
        assert_eq!(r.to_string(), "(1 - t)^-5");
        let r = periodic_zeta(2, &dims(&[(1, 2), (2, 4)])).unwrap();
        assert_eq!(
            r.factors
                .iter()
                .map(|f| f.exponent_numerator.clone())
                .collect::<Vec<_>>(),
            vec![BigInt::from(2), BigInt::from(2)]
        );
        assert_eq!(r.to_string(), "(1 - t)^-2 (1 - t^2)^-1");
        let r = periodic_zeta(3, &dims(&[(1, 1), (3, 4)])).unwrap();
        assert_eq!(r.to_string(), "(1 - t)^-1 (1 - t^3)^-1");
        assert!(r.is_rational());
        let r = periodic_zeta(2, &dims(&[(1, 1), (2, 2)])).unwrap();
        assert_eq!(r.to_string(), "(1 - t)^-1 (1 - t^2)^(-1/2)");
        assert!(!r.is_rational());
        assert!(matches!(
            periodic_zeta(4, &dims(&[(1, 1), (4, 2)])),
            Err(Error::MissingData(_))
        ));
    }

    #[test]
    fn weil_examples() {
        assert!(weil_zeta_torus(&IntMatrix::identity(2)).unwrap().is_one());
        let w = weil_zeta_torus(&m(&[2, 1, 1, 1])).unwrap();
        assert_eq!(w, RationalFunction::new(p(&[1, -3, 1]), p(&[1, -2, 1])).unwrap());
        assert_eq!(w.to_string(), "(1 - 3t + t^2)/(1 - t)^2");
        let w = weil_zeta_torus(&m(&[0, 1, 1, 1])).unwrap();
        assert_eq!(w, RationalFunction::new(p(&[1, -1, -1]), p(&[1, 0, -1])).unwrap());
        for a in [m(&[2, 1, 1, 1]), m(&[0, 1, 1, 1])] {
            let l = torus_lefschetz(&a, 16);
            assert_eq!(weil_zeta_torus(&a).unwrap().taylor(16).unwrap(), exp_oracle(&l, 16));
        }
    }

    #[test]
    fn torus_zeta_examples() {
        let z = torus_symplectic_zeta(&m(&[2, 1, 1, 1])).unwrap();
        assert_eq!((z.r, z.p, z.sigma, z.reciprocal), (1, 0, 1, true));
        assert_eq!(z.zeta, RationalFunction::new(p(&[1, -2, 1]), p(&[1, -3, 1])).unwrap());
        assert_eq!(z.zeta.to_string(), "(1 - t)^2/(1 - 3t + t^2)");
        let z = torus_symplectic_zeta(&m(&[0, 1, 1, 1])).unwrap();
        assert_eq!(z.zeta, RationalFunction::new(p(&[1, 0, -1]), p(&[1, -1, -1])).unwrap());
        let z = torus_symplectic_zeta(&m(&[-2, -1, -1, -1])).unwrap();
        assert_eq!((z.r, z.p, z.sigma), (1, 1, -1));
        let weil_minus = weil_zeta_torus(&m(&[-2, -1, -1, -1])).unwrap().substitute_scale(&q(-1));
        assert_eq!(z.zeta, weil_minus.reciprocal().unwrap());
        assert!(torus_symplectic_zeta(&m(&[1, 1, 0, 1])).is_err());
    }

    #[test]
    fn torus_zeta_matches_nielsen_series() {
        for e in [
            [2, 1, 1, 1],
            [0, 1, 1, 1],
            [-2, -1, -1, -1],
            [3, 0, 0, -2],
            [1, -2, 2, 1],
            [3, 1, 1, 0],
        ] {
            let a = m(&e);
            let dims = nielsen_sequence(&a, 16).unwrap();
            let z = torus_symplectic_zeta(&a).unwrap();
            assert_eq!(
                z.zeta.taylor(16).unwrap(),
                symplectic_zeta_series(&dims, 16).unwrap(),
                "{e:?}"
            );
        }
    }

    #[test]
    fn torus_radius_is_inverse_spectral_radius() {
        for e in [[2, 1, 1, 1], [0, 1, 1, 1], [-2, -1, -1, -1], [3, 1, 1, 0]] {
            let a = m(&e);
            let z = torus_symplectic_zeta(&a).unwrap();
            let tr = a.trace().to_f64().unwrap();
            let det = a.det().unwrap().to_f64().unwrap();
            let disc = tr * tr - 4.0 * det;
            let lam = ((tr.abs() + disc.sqrt()) / 2.0).abs();
            let part = if z.reciprocal {
                z.zeta.denominator()
            } else {
                z.zeta.numerator()
            };
            let min = part
                .roots()
                .unwrap()
                .iter()
                .map(|r| r.value.norm())
                .fold(f64::INFINITY, f64::min);
            assert!((min - 1.0 / lam).abs() < 1e-9, "{e:?}: {min} vs {}", 1.0 / lam);
        }
    }

    proptest! {
        #[test]
        fn periodic_expansion_matches(mm in 1u64..=6, vals in proptest::collection::vec(0i64..=10, 6)) {
            let d: BTreeMap<u64, BigInt> = divisors(mm).into_iter().enumerate().map(|(i, d)| (d, BigInt::from(vals[i]))).collect();
            let r = periodic_zeta(mm, &d).unwrap();
            let ext: Vec<BigRational> = periodic_extension(mm, &d, 32).unwrap().into_iter().map(BigRational::from_integer).collect();
            prop_assert_eq!(r.series(32), PowerSeries::exp_of_counts(&ext, 32).unwrap());
        }

        #[test]
        fn weil_matches_lefschetz_series(e in proptest::collection::vec(-3i64..=3, 4)) {
            let a = m(&e);
            let w = weil_zeta_torus(&a).unwrap();
            let l: Vec<BigRational> = (1..=16u32).map(|n| {
                let an = a.pow(n).unwrap();
                BigRational::from_integer(BigInt::one() - an.trace() + a.det().unwrap().pow(n))
            }).collect();
            prop_assert_eq!(w.taylor(16).unwrap(), exp_oracle(&l, 16));
        }

        #[test]
        fn exp_log_roundtrip(vals in proptest::collection::vec(0u64..=50, 12)) {
            let d: Vec<BigUint> = vals.into_iter().map(BigUint::from).collect();
            let s = symplectic_zeta_series(&d, 12).unwrap();
            prop_assert_eq!(s.counts().unwrap(), d.iter().map(to_q).collect::<Vec<_>>());
        }

        #[test]
        fn torus_zeta_series_identity(e in proptest::collection::vec(-3i64..=3, 4)) {
            let a = m(&e);
            prop_assume!(is_hyperbolic(&a) && !a.det().unwrap().is_zero());
            let dims = nielsen_sequence(&a, 10).unwrap();
            let z = torus_symplectic_zeta(&a).unwrap();
            prop_assert_eq!(z.zeta.taylor(10).unwrap(), symplectic_zeta_series(&dims, 10).unwrap());
        }
    }
}
