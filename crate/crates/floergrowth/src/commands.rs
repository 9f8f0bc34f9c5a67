//! One function per subcommand, each producing a JSON report.

use std::collections::BTreeMap;

use floergrowth_core::foxcalc::{chain_matrices, fox_derivative, jacobian, ChainMatrices, RingMatrix};
use floergrowth_core::freegroup::{Endomorphism, Word};
use floergrowth_core::groupring::{reidemeister_interval_with_chain, ReidemeisterInterval};
use floergrowth_core::growth::{full_report, growth_rate, GrowthEstimate, BOUND_SLACK};
use floergrowth_core::intmat::IntMatrix;
use floergrowth_core::mappingclass::{
    assemble_dim, asymptotic_invariant, graph_manifold_test, periodic_zeta_for_class, ClassSpec,
};
use floergrowth_core::poly::{Polynomial, PowerSeries, ROOT_RESIDUAL_TOL};
use floergrowth_core::reptheory::{
    min_root_modulus, twisted_lefschetz_sequence, twisted_zeta_with_chain, validate_rep, MinRoot, Representation,
    TwistedValue, TwistedZeta, UNITARY_TOL,
};
use floergrowth_core::torus::{fixed_point_count, lefschetz_number, toral_spectrum};
use floergrowth_core::zetafns::{
    periodic_extension, periodic_zeta, radius_estimate, symplectic_zeta_series, torus_symplectic_zeta, RadicalRational,
};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report::{complex, float, int, rational, tagged, uint, with_cert, Cert};

/// Tolerance attached to float results derived from polynomial roots.
pub const ROOT_CERT: Cert = Cert::Float(ROOT_RESIDUAL_TOL);
/// Tolerance attached to tail-root growth estimates.
pub const GROWTH_CERT: Cert = Cert::Float(0.02);
/// Largest trace or class list printed in full.
pub const MAX_LISTED_TERMS: usize = 200;

/// A report plus the reasons it is not fully certified.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub uncertified: Vec<String>,
}

impl From<Value> for Outcome {
    fn from(report: Value) -> Self {
        Outcome {
            report,
            uncertified: Vec::new(),
        }
    }
}

fn chain_for(f: &Endomorphism, extra: Option<Vec<RingMatrix>>) -> Result<ChainMatrices, CliError> {
    let c = chain_matrices(f);
    Ok(match extra {
        Some(m) => c.with_extra(m, f.rank())?,
        None => c,
    })
}

fn int_matrix(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(int).collect()))
            .collect(),
    )
}

pub fn fox(f: &Endomorphism, word: Option<&str>) -> Result<Outcome, CliError> {
    let j = jacobian(f);
    let rows: Vec<Value> = (0..j.rows())
        .map(|r| Value::Array((0..j.cols()).map(|c| Value::String(j.get(r, c).to_string())).collect()))
        .collect();
    let mut report = json!({
        "command": "fox",
        "endomorphism": f.to_string(),
        "rank": f.rank(),
        "jacobian": with_cert(json!({ "rows": rows }), Cert::Exact),
        "abelianization": with_cert(json!({ "rows": int_matrix(&f.abelianize()) }), Cert::Exact),
    });
    if let Some(w) = word {
        let w = Word::parse(w, f.rank())?;
        let ds = (1..=f.rank())
            .map(|k| Ok(Value::String(fox_derivative(&w, k, f.rank())?.to_string())))
            .collect::<Result<Vec<_>, CliError>>()?;
        report["word"] = with_cert(json!({ "word": w.to_string(), "derivatives": ds }), Cert::Exact);
    }
    Ok(report.into())
}

fn interval_row(iv: &ReidemeisterInterval) -> Value {
    let mut row = json!({
        "n": iv.n,
        "lower": uint(&iv.interval.lower),
        "upper": uint(&iv.interval.upper),
        "certified": iv.interval.certified,
        "certification": Cert::Interval.tag(),
        "lefschetz": tagged(int(&iv.lefschetz_number()), Cert::Exact),
        "nielsen": with_cert(json!({
            "lower": iv.nielsen_lower,
            "upper": iv.nielsen_upper,
            "certified": iv.nielsen_certified(),
        }), Cert::Interval),
        "unresolved_groups": iv.unresolved.len(),
        "trace_terms": iv.trace.body().num_terms(),
    });
    if iv.trace.body().num_terms() <= MAX_LISTED_TERMS {
        row["trace"] = tagged(Value::String(iv.trace.to_string()), Cert::Exact);
    }
    let essential: Vec<_> = iv.essential_classes().collect();
    if essential.len() <= MAX_LISTED_TERMS {
        row["essential_classes"] = Value::Array(
            essential
                .iter()
                .map(|c| {
                    json!({
                        "representative": c.representative.to_string(),
                        "label": c.label.to_string(),
                        "index": tagged(int(&c.index), Cert::Exact),
                        "members": c.members.len(),
                    })
                })
                .collect(),
        );
    }
    row
}

pub fn trace(f: &Endomorphism, extra: Option<Vec<RingMatrix>>, iterates: u32, depth: u32) -> Result<Outcome, CliError> {
    let chain = chain_for(f, extra)?;
    let ivs = (1..=iterates)
        .into_par_iter()
        .map(|n| reidemeister_interval_with_chain(&chain, f, n, depth))
        .collect::<Result<Vec<_>, _>>()?;
    let uncertified: Vec<String> = ivs
        .iter()
        .filter(|iv| !iv.interval.certified)
        .map(|iv| format!("n={}: norm in [{}, {}]", iv.n, iv.interval.lower, iv.interval.upper))
        .collect();
    let report = json!({
        "command": "trace",
        "endomorphism": f.to_string(),
        "search_depth": depth,
        "all_certified": uncertified.is_empty(),
        "intervals": ivs.iter().map(interval_row).collect::<Vec<_>>(),
    });
    Ok(Outcome { report, uncertified })
}

fn poly_exact(p: &Polynomial<BigRational>) -> Value {
    Value::Array(p.coeffs().iter().map(rational).collect())
}

fn poly_float(p: &Polynomial<Complex64>) -> Value {
    Value::Array(p.coeffs().iter().copied().map(complex).collect())
}

fn min_root(m: &MinRoot) -> Value {
    with_cert(
        json!({
            "modulus": float(m.modulus),
            "root": m.root.map(|r| complex(r.value)),
            "is_zero": m.is_zero,
            "cancelled_pairs": m.cancelled.len(),
        }),
        ROOT_CERT,
    )
}

fn rep_or_trivial(f: &Endomorphism, rho: Option<Representation>) -> Representation {
    rho.unwrap_or_else(|| Representation::trivial(f.rank()))
}

fn validation(rho: &Representation, f: &Endomorphism) -> Result<Value, CliError> {
    let v = validate_rep(rho, f, UNITARY_TOL)?;
    if !v.valid {
        return Err(floergrowth_core::Error::InvalidRepresentation(format!(
            "relation residual {:e} exceeds {UNITARY_TOL:e}",
            v.max_residual
        ))
        .into());
    }
    let cert = match rho {
        Representation::Permutation(_) => Cert::Exact,
        Representation::Unitary(_) => Cert::Float(UNITARY_TOL),
    };
    Ok(with_cert(
        json!({ "kind": format!("{:?}", rho.kind()).to_lowercase(), "dim": rho.dim(), "max_residual": float(v.max_residual) }),
        cert,
    ))
}

pub fn zeta_twisted(
    f: &Endomorphism,
    extra: Option<Vec<RingMatrix>>,
    rho: Option<Representation>,
    order: usize,
) -> Result<Outcome, CliError> {
    let chain = chain_for(f, extra)?;
    let rho = rep_or_trivial(f, rho);
    let rep = validation(&rho, f)?;
    let zeta = twisted_zeta_with_chain(&chain, f, &rho)?;
    let count = u32::try_from(order).map_err(|_| CliError::Input("order too large".into()))?;
    let ls = twisted_lefschetz_sequence(&chain, f, &rho, count)?;
    let (zeta_json, lefschetz, taylor) = match &zeta {
        TwistedZeta::Exact(r) => {
            let qs: Vec<BigRational> = ls
                .iter()
                .map(|v| match v {
                    TwistedValue::Exact(q) => q.clone(),
                    TwistedValue::Float(_) => unreachable!("exact representation"),
                })
                .collect();
            let series = r.taylor(order)?;
            (
                with_cert(
                    json!({
                        "text": r.to_string(),
                        "numerator": poly_exact(r.numerator()),
                        "denominator": poly_exact(r.denominator()),
                    }),
                    Cert::Exact,
                ),
                with_cert(
                    json!({ "values": qs.iter().map(rational).collect::<Vec<_>>() }),
                    Cert::Exact,
                ),
                with_cert(
                    json!({ "coefficients": series.coeffs().iter().map(rational).collect::<Vec<_>>() }),
                    Cert::Exact,
                ),
            )
        }
        TwistedZeta::Float(r) => {
            let series = r.taylor(order)?;
            let cert = Cert::Float(1e-8);
            (
                with_cert(
                    json!({ "numerator": poly_float(r.numerator()), "denominator": poly_float(r.denominator()) }),
                    cert,
                ),
                with_cert(
                    json!({ "values": ls.iter().map(|v| complex(v.to_complex())).collect::<Vec<_>>() }),
                    cert,
                ),
                with_cert(
                    json!({ "coefficients": series.coeffs().iter().copied().map(complex).collect::<Vec<_>>() }),
                    cert,
                ),
            )
        }
    };
    let m = min_root_modulus(&zeta)?;
    Ok(json!({
        "command": "zeta-twisted",
        "endomorphism": f.to_string(),
        "representation": rep,
        "zeta": zeta_json,
        "lefschetz": lefschetz,
        "taylor": taylor,
        "min_root": min_root(&m),
    })
    .into())
}

fn estimate(g: &GrowthEstimate) -> Value {
    with_cert(
        json!({
            "value": float(g.value),
            "log_slope": float(g.log_slope),
            "window": [g.window.0, g.window.1],
            "terms": g.terms,
        }),
        GROWTH_CERT,
    )
}

pub fn bounds(
    f: &Endomorphism,
    extra: Option<Vec<RingMatrix>>,
    rho: Option<Representation>,
    dims: Option<&[f64]>,
) -> Result<Outcome, CliError> {
    let rep = match &rho {
        Some(r) => validation(r, f)?,
        None => with_cert(json!({ "kind": "trivial", "dim": 1 }), Cert::Exact),
    };
    let r = full_report(f, extra, rho.as_ref(), dims)?;
    let spectral_cert = Cert::Float(
        r.spectral
            .per_degree
            .iter()
            .map(|s| s.relative_gap)
            .fold(ROOT_RESIDUAL_TOL, f64::max),
    );
    let report = json!({
        "command": "bounds",
        "endomorphism": f.to_string(),
        "representation": rep,
        "lower_bound": tagged(float(r.lower_bound), ROOT_CERT),
        "upper_bound_spectral": tagged(float(r.upper_bound_spectral), spectral_cert),
        "upper_bound_norm": tagged(uint(&r.norm.value.clone().max(BigUint::from(1u32))), Cert::Exact),
        "pinned": r.is_pinned(BOUND_SLACK),
        "per_degree": {
            "spectral": tagged(Value::Array(r.spectral.per_degree.iter().map(|s| float(s.value)).collect()), spectral_cert),
            "power_iteration": tagged(Value::Array(r.spectral.per_degree.iter().map(|s| float(s.power_iteration)).collect()), Cert::Float(1e-3)),
            "norm": tagged(Value::Array(r.norm.per_degree.iter().map(uint).collect()), Cert::Exact),
        },
        "zeta_min_root": min_root(&r.zeta.min_root),
        "sequence_estimate": r.sequence_estimate.as_ref().map(estimate),
        "entropy_log": with_cert(json!({
            "lower": float(r.entropy_log.lower),
            "spectral": float(r.entropy_log.spectral),
            "norm": float(r.entropy_log.norm),
            "sequence": r.entropy_log.sequence.map(float),
        }), ROOT_CERT),
        "notes": r.notes,
    });
    Ok(report.into())
}

pub fn growth(seq: &[BigUint]) -> Result<Outcome, CliError> {
    let xs: Vec<f64> = seq
        .iter()
        .map(|x| num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY))
        .collect();
    let g = growth_rate(&xs)?;
    Ok(json!({ "command": "growth", "terms": seq.len(), "growth": estimate(&g) }).into())
}

fn radical(r: &RadicalRational) -> Value {
    let factors: Vec<Value> = r
        .factors
        .iter()
        .map(|f| {
            json!({
                "d": f.d,
                "exponent": rational(&f.exponent()),
                "primitive_count": int(&f.exponent_numerator),
            })
        })
        .collect();
    let mut out = json!({ "text": r.to_string(), "factors": factors, "rational": r.is_rational() });
    if let Some(rf) = r.to_rational_function() {
        out["rational_function"] = Value::String(rf.to_string());
    }
    with_cert(out, Cert::Exact)
}

fn series_json(s: &PowerSeries<BigRational>) -> Value {
    with_cert(
        json!({ "coefficients": s.coeffs().iter().map(rational).collect::<Vec<_>>() }),
        Cert::Exact,
    )
}

pub enum PeriodicSource<'a> {
    Dims(&'a BTreeMap<u64, BigInt>),
    Class(&'a ClassSpec),
}

pub fn periodic(m: u64, source: PeriodicSource<'_>, order: Option<usize>) -> Result<Outcome, CliError> {
    let (r, dims) = match source {
        PeriodicSource::Dims(d) => (periodic_zeta(m, d)?, d.clone()),
        PeriodicSource::Class(spec) => {
            let r = periodic_zeta_for_class(spec, m)?;
            let d = r
                .factors
                .iter()
                .map(|f| Ok((f.d, BigInt::from(assemble_dim(spec, f.d as u32)?))))
                .collect::<Result<BTreeMap<_, _>, CliError>>()?;
            (r, d)
        }
    };
    let mut report = json!({
        "command": "periodic-zeta",
        "period": m,
        "dims": with_cert(
            Value::Object(dims.iter().map(|(d, v)| (d.to_string(), int(v))).collect()),
            Cert::Exact,
        ),
        "zeta": radical(&r),
    });
    if let Some(k) = order {
        report["series"] = series_json(&r.series(k));
        let ext = periodic_extension(m, &dims, k)?;
        report["dims_sequence"] = with_cert(
            json!({ "values": ext.iter().map(int).collect::<Vec<_>>() }),
            Cert::Exact,
        );
    }
    Ok(report.into())
}

pub fn torus(a: &IntMatrix, iterates: u32) -> Result<Outcome, CliError> {
    let rows = (1..=iterates)
        .into_par_iter()
        .map(|n| {
            let l = lefschetz_number(a, n)?;
            let c = fixed_point_count(a, n)?;
            Ok(json!({
                "n": n,
                "L": tagged(int(&l), Cert::Exact),
                "N": tagged(uint(&c.count), Cert::Exact),
                "enumerated": c.enumerated.as_ref().map(|e| tagged(uint(e), Cert::Exact)),
            }))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut report = json!({
        "command": "torus",
        "matrix": int_matrix(a),
        "rows": rows,
    });
    match toral_spectrum(a) {
        Ok(s) => {
            report["spectrum"] = with_cert(
                json!({
                    "hyperbolic": true,
                    "expanding": s.expanding,
                    "negative_expanding": s.negative_expanding,
                    "complex": s.complex,
                }),
                Cert::Exact,
            );
            let z = torus_symplectic_zeta(a)?;
            report["zeta"] = with_cert(
                json!({
                    "text": z.zeta.to_string(),
                    "lefschetz_zeta": z.weil.to_string(),
                    "r": z.r,
                    "p": z.p,
                    "sigma": z.sigma,
                    "reciprocal": z.reciprocal,
                }),
                Cert::Exact,
            );
            if iterates >= 3 {
                let seq = floergrowth_core::torus::nielsen_sequence(a, iterates)?;
                let r = radius_estimate(&seq, seq.len())?;
                report["growth"] = estimate(&r.growth);
                report["radius_estimate"] = tagged(float(r.radius), GROWTH_CERT);
            }
        }
        Err(e) => report["spectrum"] = with_cert(json!({ "hyperbolic": false, "reason": e.to_string() }), Cert::Exact),
    }
    Ok(report.into())
}

pub fn assemble(spec: &ClassSpec, iterates: u32) -> Result<Outcome, CliError> {
    let dims = (1..=iterates)
        .into_par_iter()
        .map(|n| assemble_dim(spec, n))
        .collect::<Result<Vec<_>, _>>()?;
    let gm = graph_manifold_test(spec);
    let mut report = json!({
        "command": "assemble",
        "genus": spec.genus,
        "component_count": spec.components.len(),
        "dims": with_cert(json!({ "values": dims.iter().map(uint).collect::<Vec<_>>() }), Cert::Exact),
        "graph_manifold": {
            "graph_manifold": gm.graph_manifold,
            "hyperbolic": gm.hyperbolic,
            "infinitely_many_periodic_points": gm.infinitely_many_periodic_points,
            "notes": gm.notes,
        },
    });
    if iterates >= 3 {
        let inv = asymptotic_invariant(spec, iterates)?;
        report["asymptotic_invariant"] = json!({
            "value": tagged(float(inv.value), GROWTH_CERT),
            "pseudo_anosov": tagged(Value::Array(inv.components.iter().copied().map(float).collect()), GROWTH_CERT),
            "assembled": inv.assembled.as_ref().map(estimate),
            "diagnostics": inv.diagnostics,
        });
    }
    Ok(report.into())
}

pub fn series(dims: &[BigUint], order: usize) -> Result<Outcome, CliError> {
    let s = symplectic_zeta_series(dims, order)?;
    let mut report = json!({
        "command": "series",
        "order": order,
        "series": series_json(&s),
    });
    if order >= 3 {
        let r = radius_estimate(dims, order)?;
        report["radius_estimate"] = tagged(float(r.radius), GROWTH_CERT);
        report["growth"] = estimate(&r.growth);
    }
    Ok(report.into())
}
