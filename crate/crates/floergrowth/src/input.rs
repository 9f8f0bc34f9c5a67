//! Input files: endomorphisms, representations and class specs as JSON or TOML.

use std::collections::BTreeMap;
use std::path::Path;

use floergrowth_core::foxcalc::{RingElem, RingMatrix};
use floergrowth_core::freegroup::Endomorphism;
use floergrowth_core::intmat::IntMatrix;
use floergrowth_core::linalg::Mat;
use floergrowth_core::mappingclass::{ClassSpec, ComponentSpec, ProngPair};
use floergrowth_core::reptheory::Representation;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Toml,
}

impl Format {
    /// TOML for `.toml` files, JSON otherwise.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("toml") => Format::Toml,
            _ => Format::Json,
        }
    }
}

/// Parses `text`; errors carry `origin:line:column`.
pub fn parse_str<T: DeserializeOwned>(text: &str, format: Format, origin: &str) -> Result<T, CliError> {
    match format {
        Format::Json => serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("{origin}:{}:{}: {e}", e.line(), e.column()))),
        Format::Toml => toml::from_str(text).map_err(|e| {
            let (line, col) = e.span().map(|s| line_col(text, s.start)).unwrap_or((0, 0));
            CliError::Input(format!("{origin}:{line}:{col}: {}", e.message()))
        }),
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub fn read_file<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_str(&text, Format::from_path(path), &path.display().to_string())
}

/// `{"rank": 2, "images": ["a b", "a"]}`, optionally with matrices for
/// cell dimensions 2, 3, … as rows of ring-element strings.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EndoInput {
    pub rank: usize,
    pub images: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_chain: Vec<Vec<Vec<String>>>,
}

impl EndoInput {
    pub fn endomorphism(&self) -> Result<Endomorphism, CliError> {
        let images: Vec<&str> = self.images.iter().map(String::as_str).collect();
        Ok(Endomorphism::parse(self.rank, &images)?)
    }

    pub fn extra(&self) -> Result<Option<Vec<RingMatrix>>, CliError> {
        if self.extra_chain.is_empty() {
            return Ok(None);
        }
        let mats = self
            .extra_chain
            .iter()
            .map(|m| {
                let rows = m
                    .iter()
                    .map(|r| r.iter().map(|s| s.parse::<RingElem>()).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                RingMatrix::from_rows(rows)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(mats))
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum RepKindInput {
    Permutation,
    Unitary,
}

/// `{"dim": k, "kind": "permutation"|"unitary", "a": [matrix, ...], "z": matrix}`;
/// unitary entries are `[re, im]` pairs.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RepInput {
    pub dim: usize,
    pub kind: RepKindInput,
    pub a: Vec<serde_json::Value>,
    pub z: serde_json::Value,
}

fn int_matrix(v: &serde_json::Value, dim: usize, what: &str) -> Result<IntMatrix, CliError> {
    let rows: Vec<Vec<i64>> = serde_json::from_value(v.clone())
        .map_err(|e| CliError::Input(format!("{what}: expected an integer matrix: {e}")))?;
    check_shape(rows.len(), rows.iter().map(Vec::len), dim, what)?;
    IntMatrix::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect(),
    )
    .map_err(CliError::from)
}

fn complex_matrix(v: &serde_json::Value, dim: usize, what: &str) -> Result<Mat<Complex64>, CliError> {
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_value(v.clone())
        .map_err(|e| CliError::Input(format!("{what}: expected a matrix of [re, im] pairs: {e}")))?;
    check_shape(rows.len(), rows.iter().map(Vec::len), dim, what)?;
    Mat::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect(),
    )
    .map_err(CliError::from)
}

fn check_shape(rows: usize, mut cols: impl Iterator<Item = usize>, dim: usize, what: &str) -> Result<(), CliError> {
    if rows != dim || !cols.all(|c| c == dim) {
        return Err(CliError::Input(format!("{what}: expected a {dim}x{dim} matrix")));
    }
    Ok(())
}

impl RepInput {
    pub fn representation(&self) -> Result<Representation, CliError> {
        let name = |i: usize| format!("a[{i}]");
        match self.kind {
            RepKindInput::Permutation => {
                let gens = self
                    .a
                    .iter()
                    .enumerate()
                    .map(|(i, m)| int_matrix(m, self.dim, &name(i)))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Representation::from_permutation_matrices(
                    &gens,
                    &int_matrix(&self.z, self.dim, "z")?,
                )?)
            }
            RepKindInput::Unitary => {
                let gens = self
                    .a
                    .iter()
                    .enumerate()
                    .map(|(i, m)| complex_matrix(m, self.dim, &name(i)))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Representation::from_unitary(
                    gens,
                    complex_matrix(&self.z, self.dim, "z")?,
                )?)
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ProngInput {
    pub prongs: u32,
    pub count: u64,
    pub dim: u64,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ComponentInput {
    FixedA {
        dim: u64,
    },
    FixedB {
        pairs: Vec<ProngInput>,
    },
    FixedC {
        pairs: Vec<ProngInput>,
    },
    Periodic {
        lefschetz: Vec<i64>,
    },
    #[serde(alias = "pseudoAnosov")]
    PseudoAnosov {
        #[serde(default)]
        dims: Vec<u64>,
        #[serde(default)]
        dilatation: Option<f64>,
    },
}

impl ComponentInput {
    fn to_spec(&self) -> ComponentSpec {
        let pairs = |ps: &[ProngInput]| {
            ps.iter()
                .map(|p| ProngPair {
                    prongs: p.prongs,
                    count: BigUint::from(p.count),
                    dim: BigUint::from(p.dim),
                })
                .collect()
        };
        match self {
            ComponentInput::FixedA { dim } => ComponentSpec::FixedA {
                dim: BigUint::from(*dim),
            },
            ComponentInput::FixedB { pairs: p } => ComponentSpec::FixedB { pairs: pairs(p) },
            ComponentInput::FixedC { pairs: p } => ComponentSpec::FixedC { pairs: pairs(p) },
            ComponentInput::Periodic { lefschetz } => ComponentSpec::Periodic {
                lefschetz: lefschetz.iter().map(|&x| BigInt::from(x)).collect(),
            },
            ComponentInput::PseudoAnosov { dims, dilatation } => ComponentSpec::PseudoAnosov {
                dims: dims.iter().map(|&x| BigUint::from(x)).collect(),
                dilatation: *dilatation,
            },
        }
    }
}

/// Components of a reducible map; `per_iterate` keys are iterates `n` as strings.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ClassInput {
    #[serde(default)]
    pub genus: Option<u32>,
    pub components: Vec<ComponentInput>,
    #[serde(default)]
    pub per_iterate: BTreeMap<String, Vec<ComponentInput>>,
}

impl ClassInput {
    pub fn class_spec(&self) -> Result<ClassSpec, CliError> {
        let mut per_iterate = BTreeMap::new();
        for (k, v) in &self.per_iterate {
            let n: u32 = k
                .parse()
                .map_err(|_| CliError::Input(format!("per_iterate key {k:?} is not a positive integer")))?;
            per_iterate.insert(n, v.iter().map(ComponentInput::to_spec).collect());
        }
        let spec = ClassSpec {
            components: self.components.iter().map(ComponentInput::to_spec).collect(),
            genus: self.genus,
            per_iterate,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Comma-separated integers, e.g. `2,1,1,1`.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| CliError::Input(format!("{t:?} in {s:?}: {e}")))
        })
        .collect()
}

/// Comma-separated nonnegative integers of any size.
pub fn parse_big_list(s: &str) -> Result<Vec<BigUint>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<BigUint>()
                .map_err(|e| CliError::Input(format!("{t:?} in {s:?}: {e}")))
        })
        .collect()
}

/// `d:dim` pairs, e.g. `1:2,2:4`.
pub fn parse_divisor_dims(s: &str) -> Result<BTreeMap<u64, BigInt>, CliError> {
    let mut out = BTreeMap::new();
    for item in s.split(',') {
        let (d, v) = item
            .split_once(':')
            .ok_or_else(|| CliError::Input(format!("expected d:dim, got {item:?}")))?;
        let d: u64 = d
            .trim()
            .parse()
            .map_err(|e| CliError::Input(format!("divisor {d:?}: {e}")))?;
        let v: BigInt = v
            .trim()
            .parse()
            .map_err(|e| CliError::Input(format!("dimension {v:?}: {e}")))?;
        out.insert(d, v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_error_has_location() {
        let err = parse_str::<EndoInput>("{\"rank\": 2,\n \"images\": [1]}", Format::Json, "f.json").unwrap_err();
        assert!(err.to_string().starts_with("f.json:2:"), "{err}");
    }

    #[test]
    fn toml_error_has_location() {
        let err = parse_str::<EndoInput>("rank = 2\nimages = \"a\"\n", Format::Toml, "f.toml").unwrap_err();
        assert!(err.to_string().starts_with("f.toml:2:"), "{err}");
    }

    #[test]
    fn endo_round_trip() {
        let e: EndoInput = parse_str(r#"{"rank": 2, "images": ["a b", "a"]}"#, Format::Json, "-").unwrap();
        assert_eq!(
            e.endomorphism().unwrap().to_string(),
            Endomorphism::parse(2, &["a b", "a"]).unwrap().to_string()
        );
        let t: EndoInput = parse_str("rank = 2\nimages = [\"a b\", \"a\"]\n", Format::Toml, "-").unwrap();
        assert_eq!(t.images, e.images);
        assert!(
            parse_str::<EndoInput>(r#"{"rank": 1, "images": ["b"]}"#, Format::Json, "-")
                .unwrap()
                .endomorphism()
                .is_err()
        );
    }

    #[test]
    fn rep_inputs() {
        let r: RepInput = parse_str(
            r#"{"dim": 2, "kind": "permutation", "a": [[[0,1],[1,0]]], "z": [[1,0],[0,1]]}"#,
            Format::Json,
            "-",
        )
        .unwrap();
        assert_eq!(r.representation().unwrap().dim(), 2);
        let u: RepInput = parse_str(
            r#"{"dim": 1, "kind": "unitary", "a": [[[[1,0]]]], "z": [[[0,1]]]}"#,
            Format::Json,
            "-",
        )
        .unwrap();
        assert_eq!(u.representation().unwrap().dim(), 1);
        let bad: RepInput = parse_str(
            r#"{"dim": 2, "kind": "permutation", "a": [[[1]]], "z": [[1,0],[0,1]]}"#,
            Format::Json,
            "-",
        )
        .unwrap();
        assert!(bad.representation().is_err());
    }

    #[test]
    fn class_input() {
        let c: ClassInput = parse_str(
            r#"{"genus": 2, "components": [
                {"kind": "fixed-b", "pairs": [{"prongs": 3, "count": 1, "dim": 2}]},
                {"kind": "pseudoAnosov", "dims": [5]}],
                "per_iterate": {"2": [{"kind": "fixed-a", "dim": 1}]}}"#,
            Format::Json,
            "-",
        )
        .unwrap();
        let s = c.class_spec().unwrap();
        assert_eq!(s.components.len(), 2);
        assert_eq!(s.per_iterate[&2].len(), 1);
        let bad: ClassInput = parse_str(r#"{"components": [], "per_iterate": {"x": []}}"#, Format::Json, "-").unwrap();
        assert!(bad.class_spec().is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_int_list("2, 1,1,-1").unwrap(), vec![2, 1, 1, -1]);
        assert!(parse_int_list("2,x").is_err());
        assert_eq!(parse_divisor_dims("1:2,2:4").unwrap()[&2], BigInt::from(4));
        assert!(parse_divisor_dims("1=2").is_err());
        assert_eq!(parse_big_list("1,2").unwrap().len(), 2);
    }
}
