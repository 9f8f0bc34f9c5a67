//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use floergrowth_core::foxcalc::{chain_matrices, fox_derivative, jacobian, RingElem};
use floergrowth_core::freegroup::{Endomorphism, Word};
use floergrowth_core::groupring::{norm_matrix, reidemeister_interval};
use floergrowth_core::growth::{
    growth_rate, growth_rate_big, lower_bound_zeta, upper_bound_norm, upper_bound_spectral,
    upper_bound_spectral_at_least,
};
use floergrowth_core::intmat::IntMatrix;
use floergrowth_core::linalg::Mat;
use floergrowth_core::mappingclass::{assemble_dim, graph_manifold_test, ClassSpec, ComponentSpec, ProngPair};
use floergrowth_core::poly::{PowerSeries, RationalFunction};
use floergrowth_core::reptheory::{
    min_root_modulus, twisted_lefschetz_sequence, twisted_zeta, validate_rep, Representation, TwistedValue, TwistedZeta,
};
use floergrowth_core::torus::nielsen_sequence;
use floergrowth_core::zetafns::{
    divisors, periodic_extension, periodic_zeta, radius_estimate, symplectic_zeta_series, torus_symplectic_zeta,
};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PHI: f64 = 1.618_033_988_749_895;
const SLACK: f64 = 1e-6;
const FLOAT_TOL: f64 = 1e-8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn endo(rank: usize, images: &[&str]) -> Endomorphism {
    Endomorphism::parse(rank, images).unwrap()
}

/// Maps with a nontrivial permutation representation each.
fn corpus() -> Vec<(&'static str, Endomorphism, Representation)> {
    vec![
        (
            "identity",
            Endomorphism::identity(2),
            Representation::affine(4, &[1, 3], 1).unwrap(),
        ),
        ("square", endo(1, &["a a"]), Representation::affine(3, &[1], 2).unwrap()),
        (
            "golden",
            endo(2, &["a b", "a"]),
            Representation::affine(5, &[1, 2], 3).unwrap(),
        ),
        (
            "swap",
            endo(2, &["b", "a"]),
            Representation::affine(3, &[1, 2], 2).unwrap(),
        ),
        (
            "twist",
            endo(2, &["a b", "b"]),
            Representation::affine(3, &[1, 0], 1).unwrap(),
        ),
        (
            "fib-shift",
            endo(2, &["b", "a b"]),
            Representation::affine(5, &[1, 3], 3).unwrap(),
        ),
        (
            "cycle3",
            endo(3, &["b", "c", "a"]),
            Representation::affine(7, &[1, 2, 4], 2).unwrap(),
        ),
    ]
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<i32> = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..=rank as i32);
            if rng.gen_bool(0.5) {
                -g
            } else {
                g
            }
        })
        .collect();
    Word::reduce(&letters, rank).unwrap()
}

fn random_endo(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Endomorphism {
    Endomorphism::new(rank, (0..rank).map(|_| random_word(rng, rank, max_len)).collect()).unwrap()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut failures = 0;
    for _ in 0..1000 {
        let rank = rng.gen_range(1..=4);
        let w = random_word(&mut rng, rank, 30);
        let mut lhs = RingElem::zero();
        for j in 1..=rank {
            let d = fox_derivative(&w, j, rank).unwrap();
            lhs.add_assign(&d.mul(&RingElem::from_word(Word::generator(j)).sub(&RingElem::one())));
        }
        if lhs != RingElem::from_word(w).sub(&RingElem::one()) {
            failures += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures == 0 && secs < 5.0,
        format!("1000 words, {failures} failures, {secs:.2}s (limit 5s)"),
    )
}

fn endo_pairs() -> Vec<(Endomorphism, Endomorphism)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    (0..200)
        .map(|_| {
            let rank = rng.gen_range(1..=3);
            (random_endo(&mut rng, rank, 6), random_endo(&mut rng, rank, 6))
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let mut failures = 0;
    for (f, g) in endo_pairs() {
        let lhs = jacobian(&f.compose(&g).unwrap());
        let rhs = jacobian(&g).map_endo(&f).mul(&jacobian(&f)).unwrap();
        if lhs != rhs {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("200 pairs, {failures} failures"))
}

fn criterion_3() -> Outcome {
    let mut failures = 0;
    let mut count = 0;
    for (f, g) in endo_pairs() {
        for h in [f, g] {
            count += 1;
            if jacobian(&h).augment() != h.abelianize() {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("{count} maps, {failures} failures"))
}

fn phase_rep(rank: usize, theta: f64) -> Representation {
    Representation::from_unitary(
        vec![Mat::identity(1); rank],
        Mat::from_rows(vec![vec![Complex64::from_polar(1.0, theta)]]).unwrap(),
    )
    .unwrap()
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for (name, f, perm) in corpus() {
        let chain = chain_matrices(&f);
        for rho in [Representation::trivial(f.rank()), perm] {
            if !validate_rep(&rho, &f, 1e-12).unwrap().valid {
                failures.push(format!("{name}: invalid rep"));
                continue;
            }
            let TwistedZeta::Exact(z) = twisted_zeta(&f, &rho).unwrap() else {
                failures.push(format!("{name}: expected exact zeta"));
                continue;
            };
            let ls: Vec<BigRational> = twisted_lefschetz_sequence(&chain, &f, &rho, 16)
                .unwrap()
                .into_iter()
                .map(|v| match v {
                    TwistedValue::Exact(q) => q,
                    TwistedValue::Float(_) => unreachable!(),
                })
                .collect();
            checked += 1;
            if z.taylor(16).unwrap() != PowerSeries::exp_of_counts(&ls, 16).unwrap() {
                failures.push(format!("{name}: exact mismatch"));
            }
        }
        let rho = phase_rep(f.rank(), 0.9);
        let TwistedZeta::Float(z) = twisted_zeta(&f, &rho).unwrap() else {
            unreachable!()
        };
        let ls: Vec<Complex64> = twisted_lefschetz_sequence(&chain, &f, &rho, 16)
            .unwrap()
            .iter()
            .map(TwistedValue::to_complex)
            .collect();
        let diff = z
            .taylor(16)
            .unwrap()
            .max_abs_diff(&PowerSeries::exp_of_counts(&ls, 16).unwrap());
        worst = worst.max(diff);
        checked += 1;
        if diff > FLOAT_TOL {
            failures.push(format!("{name}: float diff {diff:e}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!("{checked} (map, rep) pairs through t^16, worst float diff {worst:.1e} (tol 1e-8) {failures:?}"),
    )
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    for (name, f, perm) in corpus() {
        let chain = chain_matrices(&f);
        let spectral = upper_bound_spectral(&chain).unwrap().value;
        let norm = upper_bound_norm(&chain).value.to_f64().unwrap();
        if spectral > norm * (1.0 + SLACK) {
            failures.push(format!("{name}: spectral {spectral} > norm {norm}"));
        }
        for rho in [Representation::trivial(f.rank()), perm, phase_rep(f.rank(), 0.9)] {
            let lower = lower_bound_zeta(&chain, &f, &rho).unwrap().raw;
            if lower > spectral * (1.0 + SLACK) {
                failures.push(format!("{name}: 1/|w| {lower} > spectral {spectral}"));
            }
        }
    }
    let (_, golden, rho) = corpus().swap_remove(2);
    let chain = chain_matrices(&golden);
    let lower = lower_bound_zeta(&chain, &golden, &rho).unwrap().value;
    let spectral = upper_bound_spectral(&chain).unwrap().value;
    let pinned = (lower - PHI).abs() <= 1e-9 && (spectral - PHI).abs() <= 1e-9;
    if !pinned {
        failures.push(format!("golden not pinned: lower {lower}, spectral {spectral}"));
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} maps, golden lower {lower:.12} spectral {spectral:.12} {failures:?}",
            corpus().len()
        ),
    )
}

fn golden_torus() -> IntMatrix {
    IntMatrix::from_i64(2, 2, &[2, 1, 1, 1])
}

fn det_i_minus_power(a: &IntMatrix, n: u32) -> BigUint {
    let b = IntMatrix::identity(2).sub(&a.pow(n).unwrap()).unwrap();
    let d = &b[(0, 0)] * &b[(1, 1)] - &b[(0, 1)] * &b[(1, 0)];
    d.magnitude().clone()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let a = golden_torus();
    let seq = nielsen_sequence(&a, 30).unwrap();
    let exact = (1..=8).all(|n| seq[n as usize - 1] == det_i_minus_power(&a, n));
    let want = (3.0 + 5f64.sqrt()) / 2.0;
    let g = growth_rate_big(&seq).unwrap().value;
    let rel = (g - want).abs() / want;
    let secs = start.elapsed().as_secs_f64();
    outcome(
        exact && rel < 0.02 && secs < 10.0,
        format!("N(n) = |det(I - A^n)| for n <= 8: {exact}; growth {g:.6} vs {want:.10} ({:.2}%, tol 2%); {secs:.2}s (limit 10s)", rel * 100.0),
    )
}

fn criterion_7() -> Outcome {
    let a = golden_torus();
    let z = torus_symplectic_zeta(&a).unwrap();
    let closed = RationalFunction::new(
        floergrowth_core::poly::Polynomial::from_i64(&[1, -2, 1]),
        floergrowth_core::poly::Polynomial::from_i64(&[1, -3, 1]),
    )
    .unwrap();
    let series = symplectic_zeta_series(&nielsen_sequence(&a, 16).unwrap(), 16).unwrap();
    let pass = z.zeta == closed && z.zeta.taylor(16).unwrap() == series;
    outcome(
        pass,
        format!(
            "zeta = {} ; coefficient match through t^16: {}",
            z.zeta,
            z.zeta.taylor(16).unwrap() == series
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    let mut count = 0;
    for m in 1..=6u64 {
        for _ in 0..50 {
            let dims: BTreeMap<u64, BigInt> = divisors(m)
                .into_iter()
                .map(|d| (d, BigInt::from(rng.gen_range(0..=20u32))))
                .collect();
            let r = periodic_zeta(m, &dims).unwrap();
            let ext: Vec<BigRational> = periodic_extension(m, &dims, 32)
                .unwrap()
                .into_iter()
                .map(BigRational::from_integer)
                .collect();
            count += 1;
            if r.series(32) != PowerSeries::exp_of_counts(&ext, 32).unwrap() {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0,
        format!("{count} assignments over m <= 6 through t^32, {failures} failures"),
    )
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let mut info = Vec::new();
    for (name, f, _) in corpus().into_iter().take(4) {
        let chain = chain_matrices(&f);
        let mut values = Vec::new();
        for n in 1..=4u32 {
            let iv = reidemeister_interval(&f, n, 8).unwrap();
            if !iv.interval.certified || iv.interval.lower != iv.interval.upper {
                failures.push(format!("{name} n={n}: [{}, {}]", iv.interval.lower, iv.interval.upper));
            }
            let value = BigInt::from(iv.interval.upper.clone());
            let mut dom = BigInt::zero();
            for (_, fd) in chain.iter() {
                dom += norm_matrix(fd).pow(n).unwrap().trace();
            }
            if iv.lefschetz_number().abs() > value || value > dom {
                failures.push(format!("{name} n={n}: |L| <= {value} <= {dom} violated"));
            }
            values.push(value.to_f64().unwrap());
        }
        let g = growth_rate(&values).unwrap();
        let lower = lower_bound_zeta(&chain, &f, &Representation::trivial(f.rank()))
            .unwrap()
            .value;
        let norm = upper_bound_norm(&chain).value;
        info.push(format!(
            "{name}: {values:?} (tail root {:.3}, bounds [{lower:.3}, {norm}])",
            g.value
        ));
    }
    outcome(
        failures.is_empty(),
        format!(
            "certified, |L| <= value <= sum_d tr((F_d^norm)^n) for n <= 4; {} {failures:?}",
            info.join("; ")
        ),
    )
}

/// Largest rational not above `x` on a grid of step `x·1e-9`.
fn rational_below(x: f64) -> BigRational {
    let q = BigRational::from_f64(x * (1.0 - 1e-9)).unwrap();
    if q.is_positive() {
        q
    } else {
        BigRational::zero()
    }
}

fn criterion_10() -> Outcome {
    let mut failures = Vec::new();
    let tori = [[2, 1, 1, 1], [0, 1, 1, 1], [-2, -1, -1, -1], [3, 1, 1, 0], [3, 2, 1, 1]];
    let mut worst = 0.0f64;
    for e in tori {
        let a = IntMatrix::from_i64(2, 2, &e);
        let tr = a.trace().to_f64().unwrap();
        let det = (&a[(0, 0)] * &a[(1, 1)] - &a[(0, 1)] * &a[(1, 0)]).to_f64().unwrap();
        let lambda = (tr.abs() + (tr * tr - 4.0 * det).sqrt()) / 2.0;
        let r = radius_estimate(&nielsen_sequence(&a, 30).unwrap(), 30).unwrap().radius;
        let rel = (r * lambda - 1.0).abs();
        worst = worst.max(rel);
        if rel >= 0.02 {
            failures.push(format!("{e:?}: R {r} vs {}", 1.0 / lambda));
        }
    }
    let mut pairs = 0;
    for (name, f, perm) in corpus() {
        let chain = chain_matrices(&f);
        let norm = BigRational::from_integer(BigInt::from(upper_bound_norm(&chain).value));
        for rho in [Representation::trivial(f.rank()), perm] {
            let z = twisted_zeta(&f, &rho).unwrap();
            let w = min_root_modulus(&z).unwrap().modulus;
            pairs += 1;
            if !w.is_finite() {
                continue;
            }
            // R ≥ 1/B ⟺ B ≥ 1/R
            let inv = rational_below(1.0 / w);
            if norm < inv {
                failures.push(format!("{name}: R < 1/norm"));
            }
            if !upper_bound_spectral_at_least(&chain, &inv).unwrap() {
                failures.push(format!("{name}: R < 1/spectral"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} tori, worst |R·λ - 1| = {:.2}% (tol 2%); {pairs} (map, rep) radius bounds {failures:?}",
            tori.len(),
            worst * 100.0
        ),
    )
}

fn random_spec(rng: &mut ChaCha8Rng) -> ClassSpec {
    let count = rng.gen_range(1..=5);
    let pair = |rng: &mut ChaCha8Rng, min: u32| ProngPair {
        prongs: rng.gen_range(min..=6),
        count: BigUint::from(rng.gen_range(0..=3u32)),
        dim: BigUint::from(rng.gen_range(0..=4u32)),
    };
    let components = (0..count)
        .map(|_| match rng.gen_range(0..5) {
            0 => ComponentSpec::FixedA {
                dim: BigUint::from(rng.gen_range(0..=8u32)),
            },
            1 => ComponentSpec::FixedB {
                pairs: (0..rng.gen_range(0..=2)).map(|_| pair(rng, 1)).collect(),
            },
            2 => ComponentSpec::FixedC {
                pairs: (0..rng.gen_range(0..=2)).map(|_| pair(rng, 2)).collect(),
            },
            3 => ComponentSpec::Periodic {
                lefschetz: (0..8).map(|_| BigInt::from(rng.gen_range(0..=6))).collect(),
            },
            _ => {
                let l: f64 = rng.gen_range(1.2..4.0);
                ComponentSpec::PseudoAnosov {
                    dims: (1..=8).map(|n| BigUint::from(l.powi(n).round() as u64)).collect(),
                    dilatation: Some(l),
                }
            }
        })
        .collect();
    ClassSpec::new(components)
}

fn criterion_11() -> Outcome {
    let six = assemble_dim(
        &ClassSpec::new(vec![ComponentSpec::FixedA {
            dim: BigUint::from(6u32),
        }]),
        1,
    )
    .unwrap();
    let four = assemble_dim(
        &ClassSpec::new(vec![ComponentSpec::Periodic {
            lefschetz: vec![BigInt::from(4)],
        }]),
        1,
    )
    .unwrap();
    let nine = assemble_dim(
        &ClassSpec::new(vec![
            ComponentSpec::FixedB {
                pairs: vec![ProngPair {
                    prongs: 3,
                    count: BigUint::one(),
                    dim: BigUint::from(2u32),
                }],
            },
            ComponentSpec::PseudoAnosov {
                dims: vec![BigUint::from(5u32)],
                dilatation: None,
            },
        ]),
        1,
    )
    .unwrap();
    let examples = [six.clone(), four.clone(), nine.clone()] == [6u32, 4, 9].map(BigUint::from);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut disagreements = 0;
    let mut with_pa = 0;
    for _ in 0..50 {
        let s = random_spec(&mut rng);
        let pa = s.components.iter().any(ComponentSpec::is_pseudo_anosov);
        with_pa += pa as usize;
        if graph_manifold_test(&s).graph_manifold == pa {
            disagreements += 1;
        }
    }
    outcome(
        examples && disagreements == 0,
        format!("examples ({six}, {four}, {nine}); 50 random specs ({with_pa} with pA), {disagreements} disagreements"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("fox identity", criterion_1),
        ("chain rule", criterion_2),
        ("augmentation bridge", criterion_3),
        ("twisted zeta series identity", criterion_4),
        ("bound sandwich", criterion_5),
        ("torus growth", criterion_6),
        ("torus zeta closed form", criterion_7),
        ("periodic product formula", criterion_8),
        ("reidemeister interval certification", criterion_9),
        ("radius of convergence", criterion_10),
        ("assembler", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} {:>2} {name}: {} [{:.2}s]",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failed += !o.pass as usize;
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
