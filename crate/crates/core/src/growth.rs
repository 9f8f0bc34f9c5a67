//! Growth rates of sequences and the algebraic bounds on the asymptotic
//! invariant: norm and spectral-radius upper bounds, zeta-root lower bound.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Float, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::foxcalc::{chain_matrices, ChainMatrices};
use crate::freegroup::Endomorphism;
use crate::groupring::norm_matrix;
use crate::intmat::IntMatrix;
use crate::linalg::Mat;
use crate::poly::Polynomial;
use crate::reptheory::{min_root_modulus, twisted_zeta_with_chain, MinRoot, Representation};

/// Finite-sample growth estimate of a nonnegative sequence `a_1, a_2, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthEstimate {
    /// `max(1, max_{n ∈ window} a_n^{1/n})`
    pub value: f64,
    /// `max(1, exp(slope))` of a least-squares fit of `ln a_n` against `n` on
    /// the positive terms of the window. Exact for `c·λⁿ`, insensitive to `c`.
    pub log_slope: f64,
    /// First and last index `n` (1-based) of the tail window.
    pub window: (usize, usize),
    pub terms: usize,
}

/// Growth of a sequence; the window is the last `⌈N/2⌉` terms.
pub fn growth_rate(a: &[f64]) -> Result<GrowthEstimate> {
    let n = a.len();
    if n < 3 {
        return Err(Error::SequenceTooShort { needed: 3, found: n });
    }
    if let Some(bad) = a.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::Precondition(alloc::format!(
            "sequence terms must be finite and nonnegative, got {bad}"
        )));
    }
    let len = n.div_ceil(2);
    let start = n - len + 1;
    let mut value = 1.0f64;
    let mut pts = Vec::new();
    for (i, &x) in a.iter().enumerate().skip(start - 1) {
        let k = (i + 1) as f64;
        if x > 0.0 {
            let l = Float::ln(x);
            value = value.max(Float::exp(l / k));
            pts.push((k, l));
        }
    }
    let log_slope = if pts.len() >= 2 {
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x, sy + y));
        let (mx, my) = (sx / m, sy / m);
        let (num, den) = pts.iter().fold((0.0, 0.0), |(num, den), (x, y)| {
            (num + (x - mx) * (y - my), den + (x - mx) * (x - mx))
        });
        Float::exp(num / den).max(1.0)
    } else {
        1.0
    };
    Ok(GrowthEstimate {
        value,
        log_slope,
        window: (start, n),
        terms: n,
    })
}

/// [`growth_rate`] for exact counts.
pub fn growth_rate_big(a: &[BigUint]) -> Result<GrowthEstimate> {
    let v: Vec<f64> = a.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect();
    growth_rate(&v)
}

/// Spectral radius of a nonnegative integer matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralRadius {
    pub value: f64,
    /// `det(λI − M)`
    pub char_poly: Polynomial<BigRational>,
    /// Power-iteration estimate on `I + M`, shifted back.
    pub power_iteration: f64,
    /// `|value − power_iteration| / max(1, value)`
    pub relative_gap: f64,
}

/// Largest root modulus of the exact characteristic polynomial, polished on
/// the real axis, with a power-iteration cross-check.
pub fn spectral_radius(m: &IntMatrix) -> Result<SpectralRadius> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(
            "spectral radius of a non-square matrix".into(),
        ));
    }
    if m.entries().iter().any(|x| x < &BigInt::zero()) {
        return Err(Error::Precondition(
            "spectral_radius expects a nonnegative matrix".into(),
        ));
    }
    let char_poly = Mat::<BigRational>::from_int(m).char_poly()?;
    // repeated eigenvalues would cost half the digits; use the squarefree part
    let squarefree = char_poly.squarefree();
    let roots = if squarefree.degree().unwrap_or(0) == 0 {
        Vec::new()
    } else {
        squarefree.roots()?
    };
    let mut value = roots.iter().map(|r| r.value.norm()).fold(0.0, f64::max);
    if value > 0.0 {
        // Perron root is real: polish along the real axis
        let p = squarefree.to_complex();
        let dp = p.derivative();
        let mut x = num_complex::Complex64::new(value, 0.0);
        for _ in 0..6 {
            let d = dp.eval(&x);
            if d.norm() == 0.0 {
                break;
            }
            let next = x - p.eval(&x) / d;
            if (next.re - value).abs() > 1e-6 * value.max(1.0) {
                break;
            }
            x = num_complex::Complex64::new(next.re, 0.0);
        }
        value = x.re;
    }
    let power_iteration = power_iteration(m);
    let relative_gap = (value - power_iteration).abs() / value.max(1.0);
    Ok(SpectralRadius {
        value,
        char_poly,
        power_iteration,
        relative_gap,
    })
}

fn power_iteration(m: &IntMatrix) -> f64 {
    let n = m.rows();
    if n == 0 {
        return 0.0;
    }
    let a: Vec<f64> = m
        .entries()
        .iter()
        .map(|x| x.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    let mut x = alloc::vec![1.0 / n as f64; n];
    let mut est = 0.0;
    for _ in 0..5000 {
        let mut y = x.clone();
        for i in 0..n {
            for j in 0..n {
                y[i] += a[i * n + j] * x[j];
            }
        }
        let s: f64 = y.iter().sum();
        let next = s - 1.0;
        for v in y.iter_mut() {
            *v /= s;
        }
        x = y;
        if (next - est).abs() <= 1e-15 * next.abs().max(1.0) {
            est = next;
            break;
        }
        est = next;
    }
    est
}

/// Exact test `s(M) ≥ q` for a nonnegative integer matrix: the spectral
/// radius is the largest real eigenvalue.
pub fn spectral_radius_at_least(m: &IntMatrix, q: &BigRational) -> Result<bool> {
    if q <= &BigRational::zero() {
        return Ok(true);
    }
    let p = Mat::<BigRational>::from_int(m).char_poly()?;
    Ok(p.eval(q).is_zero() || p.count_real_roots_above(q) > 0)
}

/// Norm upper bound `max_d ‖zF_d‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormBound {
    pub value: BigUint,
    pub per_degree: Vec<BigUint>,
}

pub fn upper_bound_norm(chain: &ChainMatrices) -> NormBound {
    let per_degree: Vec<BigUint> = chain.iter().map(|(_, fd)| fd.norm()).collect();
    let value = per_degree.iter().max().cloned().unwrap_or_default();
    NormBound { value, per_degree }
}

/// Spectral upper bound `max_d s(F_d^norm)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralBound {
    pub value: f64,
    pub per_degree: Vec<SpectralRadius>,
}

pub fn upper_bound_spectral(chain: &ChainMatrices) -> Result<SpectralBound> {
    let per_degree = chain
        .iter()
        .map(|(_, fd)| spectral_radius(&norm_matrix(fd)))
        .collect::<Result<Vec<_>>>()?;
    let value = per_degree.iter().map(|s| s.value).fold(0.0, f64::max);
    Ok(SpectralBound { value, per_degree })
}

/// Exact test `max_d s(F_d^norm) ≥ q`.
pub fn upper_bound_spectral_at_least(chain: &ChainMatrices, q: &BigRational) -> Result<bool> {
    for (_, fd) in chain.iter() {
        if spectral_radius_at_least(&norm_matrix(fd), q)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Lower bound `1/|w|` from the smallest zero or pole `w` of the twisted zeta function.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaBound {
    /// `max(1, raw)`
    pub value: f64,
    /// `1/|w|`, or 0 when there is no zero or pole.
    pub raw: f64,
    pub min_root: MinRoot,
}

pub fn lower_bound_zeta(chain: &ChainMatrices, f: &Endomorphism, rho: &Representation) -> Result<ZetaBound> {
    let z = twisted_zeta_with_chain(chain, f, rho)?;
    let min_root = min_root_modulus(&z)?;
    let raw = if min_root.modulus.is_finite() {
        1.0 / min_root.modulus
    } else {
        0.0
    };
    Ok(ZetaBound {
        value: raw.max(1.0),
        raw,
        min_root,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyLogs {
    pub lower: f64,
    pub spectral: f64,
    pub norm: f64,
    pub sequence: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub lower_bound: f64,
    pub upper_bound_spectral: f64,
    pub upper_bound_norm: f64,
    pub sequence_estimate: Option<GrowthEstimate>,
    /// Natural logarithms of the bounds.
    pub entropy_log: EntropyLogs,
    /// One provenance line per bound.
    pub notes: Vec<String>,
    pub zeta: ZetaBound,
    pub spectral: SpectralBound,
    pub norm: NormBound,
}

impl GrowthReport {
    /// Lower and spectral upper bound agree to `tol`.
    pub fn is_pinned(&self, tol: f64) -> bool {
        self.upper_bound_spectral - self.lower_bound <= tol
    }
}

/// Relative slack for comparing float bounds in consistency checks.
pub const BOUND_SLACK: f64 = 1e-6;

/// All bounds for `f`; the trivial representation is used when `rho` is `None`.
pub fn full_report(
    f: &Endomorphism,
    extra: Option<Vec<crate::foxcalc::RingMatrix>>,
    rho: Option<&Representation>,
    dims: Option<&[f64]>,
) -> Result<GrowthReport> {
    let chain = match extra {
        Some(m) => chain_matrices(f).with_extra(m, f.rank())?,
        None => chain_matrices(f),
    };
    let trivial;
    let (rho, rho_note) = match rho {
        Some(r) => (
            r,
            alloc::format!("zeta root bound via {:?} rep of dim {}", r.kind(), r.dim()),
        ),
        None => {
            trivial = Representation::trivial(f.rank());
            (&trivial, String::from("zeta root bound via trivial rep"))
        }
    };
    let zeta = lower_bound_zeta(&chain, f, rho)?;
    let spectral = upper_bound_spectral(&chain)?;
    let norm = upper_bound_norm(&chain);
    let norm_value = norm.value.to_f64().unwrap_or(f64::INFINITY);
    let lower = zeta.value;
    if lower > spectral.value * (1.0 + BOUND_SLACK) || spectral.value > norm_value * (1.0 + BOUND_SLACK) {
        return Err(Error::Internal(alloc::format!(
            "bound ordering violated: lower {lower}, spectral {}, norm {norm_value}",
            spectral.value
        )));
    }
    let sequence_estimate = dims.map(growth_rate).transpose()?;
    let mut notes = alloc::vec![
        alloc::format!("{rho_note}; 1/|w| = {}", zeta.raw),
        alloc::format!(
            "spectral radius of norm matrices over {} chain degrees",
            spectral.per_degree.len()
        ),
        String::from("sum of coefficient norms of zF_d"),
    ];
    if let Some(s) = &sequence_estimate {
        notes.push(alloc::format!("tail root over n = {}..={}", s.window.0, s.window.1));
    }
    if !zeta.min_root.cancelled.is_empty() {
        notes.push(alloc::format!(
            "{} near-equal zero/pole pairs cancelled",
            zeta.min_root.cancelled.len()
        ));
    }
    let entropy_log = EntropyLogs {
        lower: Float::ln(lower),
        spectral: Float::ln(spectral.value.max(1.0)),
        norm: Float::ln(norm_value.max(1.0)),
        sequence: sequence_estimate.as_ref().map(|s| Float::ln(s.value)),
    };
    Ok(GrowthReport {
        lower_bound: lower,
        upper_bound_spectral: spectral.value.max(1.0),
        upper_bound_norm: norm_value.max(1.0),
        sequence_estimate,
        entropy_log,
        notes,
        zeta,
        spectral,
        norm,
    })
}
