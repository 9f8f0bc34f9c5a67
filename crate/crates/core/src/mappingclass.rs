//! Reducible mapping classes in standard form: assembly of Floer dimensions
//! from component data, the asymptotic invariant, and the graph-manifold test.
//!
//! Component homology dimensions such as `dim H_*(M, ∂₊; ℤ₂)` are inputs;
//! the split of the boundary into `∂₊` and `∂₋` is the caller's choice.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::growth::{growth_rate, GrowthEstimate};
use crate::zetafns::{divisors, periodic_zeta, RadicalRational};

/// Relative tolerance between a supplied dilatation and the growth of its dims.
pub const DILATATION_TOL: f64 = 0.05;

/// One prong class of fixed-b or fixed-c components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProngPair {
    /// `p` for fixed-b, `q` for fixed-c.
    pub prongs: u32,
    /// Number of components with this prong count.
    pub count: BigUint,
    /// Homology dimension of those components relative to `∂₊`.
    pub dim: BigUint,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ComponentSpec {
    /// Fixed components meeting only reducing curves.
    FixedA { dim: BigUint },
    /// Fixed components adjacent to pseudo-Anosov pieces, by prong count `p ≥ 1`.
    FixedB { pairs: Vec<ProngPair> },
    /// Fixed components with `q ≥ 2` total prongs.
    FixedC { pairs: Vec<ProngPair> },
    /// `L(φ̄ⁿ|M₁)` for `n = 1, 2, …`.
    Periodic { lefschetz: Vec<BigInt> },
    /// `dims[n − 1]` is the contribution at iterate `n`; either may be absent
    /// but not both.
    PseudoAnosov {
        dims: Vec<BigUint>,
        dilatation: Option<f64>,
    },
}

impl ComponentSpec {
    pub fn is_pseudo_anosov(&self) -> bool {
        matches!(self, ComponentSpec::PseudoAnosov { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ComponentSpec::FixedB { pairs } => check_prongs(pairs, 1, "fixed-b"),
            ComponentSpec::FixedC { pairs } => check_prongs(pairs, 2, "fixed-c"),
            ComponentSpec::PseudoAnosov { dims, dilatation } => {
                if dims.is_empty() && dilatation.is_none() {
                    return Err(Error::MissingData(
                        "pseudo-Anosov component needs dims or a dilatation".into(),
                    ));
                }
                match dilatation {
                    Some(l) if !(l.is_finite() && *l > 1.0) => {
                        Err(Error::Precondition(alloc::format!("dilatation must exceed 1, got {l}")))
                    }
                    _ => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }

    /// Contribution of this component to `dim HF_*` at iterate `n ≥ 1`.
    pub fn contribution(&self, n: u32) -> Result<BigInt> {
        let at = |len: usize| -> Result<usize> {
            let i = n as usize - 1;
            if i < len {
                Ok(i)
            } else {
                Err(Error::MissingData(alloc::format!("no data for iterate {n}")))
            }
        };
        Ok(match self {
            ComponentSpec::FixedA { dim } => BigInt::from(dim.clone()),
            ComponentSpec::FixedB { pairs } => pairs
                .iter()
                .map(|p| BigInt::from(p.dim.clone() + (p.prongs - 1) * p.count.clone()))
                .sum(),
            ComponentSpec::FixedC { pairs } => pairs
                .iter()
                .map(|p| BigInt::from(p.dim.clone() + p.prongs * p.count.clone()))
                .sum(),
            ComponentSpec::Periodic { lefschetz } => lefschetz[at(lefschetz.len())?].clone(),
            ComponentSpec::PseudoAnosov { dims, .. } => BigInt::from(dims[at(dims.len())?].clone()),
        })
    }
}

fn check_prongs(pairs: &[ProngPair], min: u32, kind: &str) -> Result<()> {
    match pairs.iter().find(|p| p.prongs < min) {
        Some(p) => Err(Error::Precondition(alloc::format!(
            "{kind} prong count must be >= {min}, got {}",
            p.prongs
        ))),
        None => Ok(()),
    }
}

/// A reducible map in standard form, described by its components.
///
/// `per_iterate[n]` replaces `components` at iterate `n`; it is required when
/// components are permuted so that `φⁿ` decomposes differently.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ClassSpec {
    pub components: Vec<ComponentSpec>,
    pub genus: Option<u32>,
    pub per_iterate: BTreeMap<u32, Vec<ComponentSpec>>,
}

impl ClassSpec {
    pub fn new(components: Vec<ComponentSpec>) -> Self {
        ClassSpec {
            components,
            genus: None,
            per_iterate: BTreeMap::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::Precondition("class spec has no components".into()));
        }
        if self.per_iterate.contains_key(&0) {
            return Err(Error::Precondition("iterates start at 1".into()));
        }
        self.all_components().try_for_each(ComponentSpec::validate)
    }

    fn all_components(&self) -> impl Iterator<Item = &ComponentSpec> {
        self.components.iter().chain(self.per_iterate.values().flatten())
    }

    /// Components describing iterate `n`.
    pub fn components_at(&self, n: u32) -> &[ComponentSpec] {
        self.per_iterate.get(&n).unwrap_or(&self.components)
    }

    pub fn has_pseudo_anosov(&self) -> bool {
        self.all_components().any(ComponentSpec::is_pseudo_anosov)
    }

    /// Disjoint union: components and per-iterate overrides side by side.
    pub fn union(&self, other: &ClassSpec) -> ClassSpec {
        let mut per_iterate = BTreeMap::new();
        for n in self.per_iterate.keys().chain(other.per_iterate.keys()) {
            let mut c = self.components_at(*n).to_vec();
            c.extend_from_slice(other.components_at(*n));
            per_iterate.insert(*n, c);
        }
        let mut components = self.components.clone();
        components.extend_from_slice(&other.components);
        let genus = match (self.genus, other.genus) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        ClassSpec {
            components,
            genus,
            per_iterate,
        }
    }
}

/// `dim HF_*(φⁿ)` as the sum of the component contributions.
pub fn assemble_dim(spec: &ClassSpec, n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Precondition("iterate n must be >= 1".into()));
    }
    spec.validate()?;
    let mut total = BigInt::zero();
    for c in spec.components_at(n) {
        total += c.contribution(n)?;
    }
    total.to_biguint().ok_or_else(|| {
        Error::Precondition(alloc::format!(
            "assembled dimension at iterate {n} is negative: {total}"
        ))
    })
}

/// `(assemble_dim(spec, n))_{n=1..=count}`
pub fn assemble_sequence(spec: &ClassSpec, count: u32) -> Result<Vec<BigUint>> {
    (1..=count).map(|n| assemble_dim(spec, n)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticInvariant {
    /// Largest pseudo-Anosov growth, or 1 without pseudo-Anosov components.
    pub value: f64,
    /// Growth per pseudo-Anosov component, in order of appearance.
    pub components: Vec<f64>,
    /// Growth of the assembled dimensions, when every component covers `1..=count`.
    pub assembled: Option<GrowthEstimate>,
    pub diagnostics: Vec<String>,
}

/// `F^∞` of a class from the first `count` iterates of its data.
pub fn asymptotic_invariant(spec: &ClassSpec, count: u32) -> Result<AsymptoticInvariant> {
    spec.validate()?;
    let mut diagnostics = Vec::new();
    let mut growths = Vec::new();
    for c in &spec.components {
        let ComponentSpec::PseudoAnosov { dims, dilatation } = c else {
            continue;
        };
        let from_dims = if dims.len() >= 3 {
            let k = dims.len().min(count as usize).max(3);
            let seq: Vec<f64> = dims[..k].iter().map(|d| d.to_f64().unwrap_or(f64::INFINITY)).collect();
            Some(growth_rate(&seq)?.value)
        } else {
            None
        };
        let g = match (dilatation, from_dims) {
            (Some(l), Some(g)) => {
                if (g - l).abs() > DILATATION_TOL * l {
                    diagnostics.push(alloc::format!(
                        "dilatation {l} and dims growth {g} differ by more than {}%",
                        DILATATION_TOL * 100.0
                    ));
                }
                *l
            }
            (Some(l), None) => *l,
            (None, Some(g)) => g,
            (None, None) => {
                return Err(Error::MissingData(
                    "pseudo-Anosov component needs dims or a dilatation".into(),
                ))
            }
        };
        growths.push(g);
    }
    let value = growths.iter().copied().fold(1.0, f64::max);
    let assembled = match assemble_sequence(spec, count) {
        Ok(seq) if count >= 3 => {
            let seq: Vec<f64> = seq.iter().map(|d| d.to_f64().unwrap_or(f64::INFINITY)).collect();
            Some(growth_rate(&seq)?)
        }
        Ok(_) => None,
        Err(Error::MissingData(msg)) => {
            diagnostics.push(alloc::format!("assembled sequence unavailable: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };
    if let Some(a) = &assembled {
        log::debug!(
            "assembled growth {} (log-slope {}), pseudo-Anosov max {value}",
            a.value,
            a.log_slope
        );
    }
    Ok(AsymptoticInvariant {
        value,
        components: growths,
        assembled,
        diagnostics,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphManifoldReport {
    /// The mapping torus is a graph manifold, i.e. `F^∞ = 1`.
    pub graph_manifold: bool,
    /// A single pseudo-Anosov component: the mapping torus interior is hyperbolic of finite volume.
    pub hyperbolic: bool,
    /// `F^∞ > 1`: the number of periodic points grows exponentially.
    pub infinitely_many_periodic_points: bool,
    pub notes: Vec<String>,
}

pub fn graph_manifold_test(spec: &ClassSpec) -> GraphManifoldReport {
    let pa = spec.has_pseudo_anosov();
    let hyperbolic = spec.components.len() == 1 && spec.components[0].is_pseudo_anosov();
    let mut notes = Vec::new();
    if hyperbolic {
        notes.push("pure pseudo-Anosov class: the mapping torus interior is hyperbolic of finite volume".into());
    }
    if pa {
        notes.push("F^∞ > 1: infinitely many periodic points, growing exponentially".into());
    } else {
        notes.push("no pseudo-Anosov component: the mapping torus is a graph manifold".into());
    }
    GraphManifoldReport {
        graph_manifold: !pa,
        hyperbolic,
        infinitely_many_periodic_points: pa,
        notes,
    }
}

/// Product formula for a class of period dividing `m`, with dims assembled at the divisors of `m`.
pub fn periodic_zeta_for_class(spec: &ClassSpec, m: u64) -> Result<RadicalRational> {
    spec.validate()?;
    if spec.has_pseudo_anosov() {
        return Err(Error::Precondition(
            "periodic zeta requires a class without pseudo-Anosov components".into(),
        ));
    }
    if m == 0 {
        return Err(Error::Precondition("period must be positive".into()));
    }
    let mut dims = BTreeMap::new();
    for d in divisors(m) {
        let n = u32::try_from(d).map_err(|_| Error::Precondition("period too large".into()))?;
        dims.insert(d, BigInt::from(assemble_dim(spec, n)?));
    }
    periodic_zeta(m, &dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::IntMatrix;
    use crate::poly::PowerSeries;
    use crate::torus::nielsen_sequence;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn u(x: u64) -> BigUint {
        BigUint::from(x)
    }
    fn fixed_a(d: u64) -> ComponentSpec {
        ComponentSpec::FixedA { dim: u(d) }
    }
    fn periodic(l: &[i64]) -> ComponentSpec {
        ComponentSpec::Periodic {
            lefschetz: l.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }
    fn pa(dims: &[u64], dilatation: Option<f64>) -> ComponentSpec {
        ComponentSpec::PseudoAnosov {
            dims: dims.iter().map(|&x| u(x)).collect(),
            dilatation,
        }
    }
    fn pair(prongs: u32, count: u64, dim: u64) -> ProngPair {
        ProngPair {
            prongs,
            count: u(count),
            dim: u(dim),
        }
    }

    #[test]
    fn assemble_examples() {
        let id = ClassSpec {
            genus: Some(2),
            ..ClassSpec::new(vec![fixed_a(6)])
        };
        assert_eq!(assemble_dim(&id, 1).unwrap(), u(6));
        assert_eq!(assemble_dim(&ClassSpec::new(vec![periodic(&[4])]), 1).unwrap(), u(4));
        let s = ClassSpec::new(vec![
            ComponentSpec::FixedB {
                pairs: vec![pair(3, 1, 2)],
            },
            pa(&[5], None),
        ]);
        assert_eq!(assemble_dim(&s, 1).unwrap(), u(9));
    }

    #[test]
    fn fixed_c_and_errors() {
        let s = ClassSpec::new(vec![ComponentSpec::FixedC {
            pairs: vec![pair(2, 3, 1), pair(4, 1, 0)],
        }]);
        assert_eq!(assemble_dim(&s, 7).unwrap(), u(1 + 6 + 4));
        let bad = ClassSpec::new(vec![ComponentSpec::FixedC {
            pairs: vec![pair(1, 1, 0)],
        }]);
        assert!(matches!(assemble_dim(&bad, 1), Err(Error::Precondition(_))));
        let bad = ClassSpec::new(vec![ComponentSpec::FixedB {
            pairs: vec![pair(0, 1, 0)],
        }]);
        assert!(assemble_dim(&bad, 1).is_err());
        assert!(matches!(
            assemble_dim(&ClassSpec::new(vec![periodic(&[1, 2])]), 3),
            Err(Error::MissingData(_))
        ));
        assert!(assemble_dim(&ClassSpec::new(vec![]), 1).is_err());
        assert!(assemble_dim(&ClassSpec::new(vec![periodic(&[-3])]), 1).is_err());
        assert!(ClassSpec::new(vec![pa(&[], Some(0.5))]).validate().is_err());
        assert!(ClassSpec::new(vec![pa(&[], None)]).validate().is_err());
    }

    #[test]
    fn per_iterate_override() {
        let mut s = ClassSpec::new(vec![fixed_a(2), periodic(&[0, 4, 0, 4])]);
        s.per_iterate.insert(2, vec![fixed_a(2), fixed_a(3)]);
        assert_eq!(assemble_sequence(&s, 4).unwrap(), vec![u(2), u(5), u(2), u(6)]);
    }

    #[test]
    fn reduction_to_two_summands() {
        let l = [3, -1, 3, 7];
        let s = ClassSpec::new(vec![fixed_a(4), periodic(&l)]);
        for n in 1..=4u32 {
            assert_eq!(
                BigInt::from(assemble_dim(&s, n).unwrap()),
                BigInt::from(4 + l[n as usize - 1])
            );
        }
    }

    fn golden_dims(count: u32) -> Vec<BigUint> {
        nielsen_sequence(&IntMatrix::from_i64(2, 2, &[2, 1, 1, 1]), count).unwrap()
    }

    #[test]
    fn asymptotic_examples() {
        let s = ClassSpec::new(vec![fixed_a(6), periodic(&[2; 30])]);
        let a = asymptotic_invariant(&s, 30).unwrap();
        assert_eq!(a.value, 1.0);
        assert!(a.components.is_empty());

        let want = (3.0 + 5f64.sqrt()) / 2.0;
        let s = ClassSpec::new(vec![ComponentSpec::PseudoAnosov {
            dims: golden_dims(30),
            dilatation: None,
        }]);
        let a = asymptotic_invariant(&s, 30).unwrap();
        assert!((a.value - want).abs() / want < 0.02, "{}", a.value);
        assert!(a.diagnostics.is_empty());

        let s = ClassSpec::new(vec![pa(&[], Some(1.618)), pa(&[], Some(2.618))]);
        let a = asymptotic_invariant(&s, 30).unwrap();
        assert_eq!(a.value, 2.618);
        assert!(a.assembled.is_none());
        assert_eq!(a.diagnostics.len(), 1);
    }

    #[test]
    fn dilatation_mismatch_is_diagnosed() {
        let s = ClassSpec::new(vec![ComponentSpec::PseudoAnosov {
            dims: golden_dims(30),
            dilatation: Some(3.0),
        }]);
        let a = asymptotic_invariant(&s, 30).unwrap();
        assert_eq!(a.value, 3.0);
        assert!(a.diagnostics.iter().any(|d| d.contains("differ")));
        let s = ClassSpec::new(vec![ComponentSpec::PseudoAnosov {
            dims: golden_dims(30),
            dilatation: Some(2.618),
        }]);
        assert!(asymptotic_invariant(&s, 30).unwrap().diagnostics.is_empty());
    }

    #[test]
    fn graph_manifold_examples() {
        let r = graph_manifold_test(&ClassSpec::new(vec![periodic(&[4])]));
        assert!(r.graph_manifold && !r.hyperbolic && !r.infinitely_many_periodic_points);
        let r = graph_manifold_test(&ClassSpec::new(vec![pa(&[], Some(2.0))]));
        assert!(!r.graph_manifold && r.hyperbolic && r.infinitely_many_periodic_points);
        let r = graph_manifold_test(&ClassSpec::new(vec![fixed_a(1), pa(&[], Some(2.0))]));
        assert!(!r.graph_manifold && !r.hyperbolic);
        // twists along reducing curves between fixed pieces
        let twist = ClassSpec::new(vec![
            fixed_a(3),
            ComponentSpec::FixedC {
                pairs: vec![pair(2, 1, 1)],
            },
        ]);
        assert!(graph_manifold_test(&twist).graph_manifold);
    }

    #[test]
    fn periodic_zeta_examples() {
        let id = ClassSpec::new(vec![fixed_a(6)]);
        assert_eq!(periodic_zeta_for_class(&id, 1).unwrap().to_string(), "(1 - t)^-6");
        let s = ClassSpec::new(vec![periodic(&[2, 4])]);
        assert_eq!(
            periodic_zeta_for_class(&s, 2).unwrap().to_string(),
            "(1 - t)^-2 (1 - t^2)^-1"
        );
        let s = ClassSpec::new(vec![fixed_a(1), pa(&[5], None)]);
        assert!(matches!(periodic_zeta_for_class(&s, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn periodic_zeta_expands_periodic_dims() {
        // period-3 map with one fixed piece
        let s = ClassSpec::new(vec![fixed_a(2), periodic(&[1, 1, 4])]);
        let r = periodic_zeta_for_class(&s, 3).unwrap();
        let dims: Vec<_> = (1..=12u32)
            .map(|n| {
                let k = if n % 3 == 0 { 3 } else { 1 };
                crate::poly::q(assemble_dim(&s, k).unwrap().to_u64().unwrap() as i64)
            })
            .collect();
        assert_eq!(r.series(12), PowerSeries::exp_of_counts(&dims, 12).unwrap());
    }

    fn component() -> impl Strategy<Value = ComponentSpec> {
        let dims = || proptest::collection::vec(0u64..=40, 6);
        let pairs = |min: u32| proptest::collection::vec((min..=5u32, 0u64..=3, 0u64..=4), 0..=3);
        let to_pairs = |v: Vec<(u32, u64, u64)>| v.into_iter().map(|(p, c, d)| pair(p, c, d)).collect();
        prop_oneof![
            (0u64..=10).prop_map(fixed_a),
            pairs(1).prop_map(move |v| ComponentSpec::FixedB { pairs: to_pairs(v) }),
            pairs(2).prop_map(move |v| ComponentSpec::FixedC { pairs: to_pairs(v) }),
            dims().prop_map(|v| ComponentSpec::Periodic {
                lefschetz: v.into_iter().map(BigInt::from).collect()
            }),
            (1.2f64..5.0, any::<bool>()).prop_map(|(l, give)| ComponentSpec::PseudoAnosov {
                dims: (1..=6).map(|n| u(l.powi(n).round() as u64)).collect(),
                dilatation: give.then_some(l),
            }),
        ]
    }

    fn spec() -> impl Strategy<Value = ClassSpec> {
        proptest::collection::vec(component(), 1..=5).prop_map(ClassSpec::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn additivity(a in spec(), b in spec(), n in 1u32..=6) {
            let sum = assemble_dim(&a, n).unwrap() + assemble_dim(&b, n).unwrap();
            prop_assert_eq!(assemble_dim(&a.union(&b), n).unwrap(), sum);
        }

        #[test]
        fn graph_manifold_iff_no_growth(s in spec()) {
            let report = graph_manifold_test(&s);
            let pa = s.components.iter().any(ComponentSpec::is_pseudo_anosov);
            prop_assert_eq!(report.graph_manifold, !pa);
            let inv = asymptotic_invariant(&s, 6).unwrap();
            prop_assert_eq!(report.graph_manifold, inv.value <= 1.0 + 1e-9);
        }

        #[test]
        fn non_pa_components_keep_invariant(extra in proptest::collection::vec(component(), 1..=4)) {
            let extra: Vec<_> = extra.into_iter().filter(|c| !c.is_pseudo_anosov()).collect();
            let base = ClassSpec::new(vec![ComponentSpec::PseudoAnosov { dims: golden_dims(30), dilatation: None }]);
            let mut bigger = base.clone();
            bigger.components.extend(extra.into_iter().map(|c| match c {
                ComponentSpec::Periodic { lefschetz } => ComponentSpec::Periodic { lefschetz: lefschetz.into_iter().cycle().take(30).collect() },
                c => c,
            }));
            let a = asymptotic_invariant(&base, 30).unwrap();
            let b = asymptotic_invariant(&bigger, 30).unwrap();
            prop_assert!((a.value - b.value).abs() / a.value < 0.02);
            let assembled = b.assembled.unwrap().value;
            prop_assert!((assembled - a.value).abs() / a.value < 0.02, "{} vs {}", assembled, a.value);
        }
    }
}
