//! JSON input formats for rods and optimization problems.
//!
//! ```json
//! {"E": 1, "J_ref": 1,
//!  "shape": {"kind": "piecewise", "L": 1, "values": [1, 2], "breakpoints": [0, 0.5, 1]},
//!  "law": {"n": 1, "alpha": 1}}
//! ```
//!
//! Anisotropic rods give `"Jy"` and `"Jz"` in place of `"J_ref"`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anisotropic::{AnisotropicRod, AnisotropicSection};
use crate::error::Error;
use crate::optimizer::OptimizationProblem;
use crate::sampling::{random_values_n, Lcg64};
use crate::shape::{AreaProfile, CrossSectionLaw, RodSpec, ShapeFunction};

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("line {line}, column {column}: {path}: {message}")]
    Syntax {
        path: String,
        message: String,
        line: usize,
        column: usize,
    },
    #[error("{field}: {source}")]
    Invalid {
        field: &'static str,
        #[source]
        source: Error,
    },
}

fn invalid(field: &'static str) -> impl FnOnce(Error) -> DescriptorError {
    move |source| DescriptorError::Invalid { field, source }
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, DescriptorError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let (line, column) = (inner.line(), inner.column());
        let message = inner.to_string();
        let message = message
            .strip_suffix(&format!(" at line {line} column {column}"))
            .unwrap_or(&message)
            .to_string();
        DescriptorError::Syntax {
            path,
            message,
            line,
            column,
        }
    })?;
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Constant,
    Piecewise,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeDescriptor {
    pub kind: ShapeKind,
    #[serde(rename = "L")]
    pub length: f64,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoints: Option<Vec<f64>>,
}

impl ShapeDescriptor {
    pub fn parse(text: &str) -> Result<Self, DescriptorError> {
        parse(text)
    }

    pub fn to_shape(&self) -> Result<ShapeFunction, DescriptorError> {
        let err = invalid("shape");
        match self.kind {
            ShapeKind::Constant => {
                if self.values.len() != 1 || self.breakpoints.is_some() {
                    return Err(err(Error::Domain(
                        "a constant shape takes exactly one value and no breakpoints".into(),
                    )));
                }
                ShapeFunction::constant(self.values[0], self.length).map_err(err)
            }
            ShapeKind::Piecewise => match &self.breakpoints {
                Some(b) => {
                    if b.last() != Some(&self.length) {
                        return Err(err(Error::Domain(format!(
                            "last breakpoint must equal L = {}",
                            self.length
                        ))));
                    }
                    ShapeFunction::piecewise(b.clone(), self.values.clone()).map_err(err)
                }
                None => ShapeFunction::piecewise_uniform(self.length, self.values.clone()).map_err(err),
            },
            ShapeKind::Sampled => {
                if self.breakpoints.is_some() {
                    return Err(err(Error::Domain("a sampled shape takes no breakpoints".into())));
                }
                ShapeFunction::sampled(self.length, self.values.clone()).map_err(err)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawDescriptor {
    pub n: u8,
    pub alpha: f64,
}

impl LawDescriptor {
    pub fn to_law(&self) -> Result<CrossSectionLaw, DescriptorError> {
        CrossSectionLaw::new(self.n, self.alpha).map_err(invalid("law"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RodDescriptor {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "J_ref", default, skip_serializing_if = "Option::is_none")]
    pub j_ref: Option<f64>,
    #[serde(rename = "Jy", default, skip_serializing_if = "Option::is_none")]
    pub jy: Option<f64>,
    #[serde(rename = "Jz", default, skip_serializing_if = "Option::is_none")]
    pub jz: Option<f64>,
    pub shape: ShapeDescriptor,
    pub law: LawDescriptor,
}

/// A parsed rod, isotropic or with a constant anisotropy ratio.
#[derive(Debug, Clone, PartialEq)]
pub enum Rod {
    Isotropic(RodSpec),
    Anisotropic(AnisotropicRod),
}

impl Rod {
    /// The isotropic rod with the same critical torque.
    pub fn isotropic(&self) -> Result<RodSpec, Error> {
        match self {
            Rod::Isotropic(spec) => Ok(spec.clone()),
            Rod::Anisotropic(rod) => crate::anisotropic::reduce_to_isotropic(rod),
        }
    }
}

impl RodDescriptor {
    pub fn parse(text: &str) -> Result<Self, DescriptorError> {
        parse(text)
    }

    pub fn to_rod(&self) -> Result<Rod, DescriptorError> {
        let shape = self.shape.to_shape()?;
        let law = self.law.to_law()?;
        match (self.j_ref, self.jy, self.jz) {
            (Some(j), None, None) => Ok(Rod::Isotropic(
                RodSpec::new(self.e, j, shape, law).map_err(invalid("J_ref"))?,
            )),
            (None, Some(jy), Some(jz)) => {
                let section = AnisotropicSection::new(jy, jz).map_err(invalid("Jy"))?;
                Ok(Rod::Anisotropic(
                    AnisotropicRod::new(self.e, section, shape, law).map_err(invalid("E"))?,
                ))
            }
            _ => Err(DescriptorError::Invalid {
                field: "J_ref",
                source: Error::Domain("give either \"J_ref\" or both \"Jy\" and \"Jz\"".into()),
            }),
        }
    }
}

/// Parses and validates a rod descriptor.
pub fn parse_rod(text: &str) -> Result<(RodDescriptor, Rod), DescriptorError> {
    let d = RodDescriptor::parse(text)?;
    let rod = d.to_rod()?;
    Ok((d, rod))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDescriptor {
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<f64>,
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub law: LawDescriptor,
    /// Initial areas on equal segments.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<Vec<f64>>,
    /// Segment count for a random initial design.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segments: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub const DEFAULT_SEED: u64 = 0;

impl ProblemDescriptor {
    pub fn parse(text: &str) -> Result<Self, DescriptorError> {
        parse(text)
    }

    /// Builds the problem. Without `init`, a random design with `segments`
    /// log-uniform areas is drawn from `seed` and rescaled to `V`.
    pub fn to_problem(&self) -> Result<OptimizationProblem, DescriptorError> {
        let law = self.law.to_law()?;
        let areas = match (&self.init, self.segments) {
            (Some(init), _) => init.clone(),
            (None, Some(k)) => {
                if k == 0 || k > 1_000_000 {
                    return Err(DescriptorError::Invalid {
                        field: "segments",
                        source: Error::Domain(format!("segment count must be in 1..=1000000, got {k}")),
                    });
                }
                let mut rng = Lcg64::new(self.seed.unwrap_or(DEFAULT_SEED));
                random_values_n(&mut rng, k)
            }
            (None, None) => {
                return Err(DescriptorError::Invalid {
                    field: "init",
                    source: Error::Domain("give \"init\" areas or a \"segments\" count".into()),
                })
            }
        };
        let profile = AreaProfile::from_segments(self.length, areas).map_err(invalid("init"))?;
        let volume = match (self.volume, &self.init) {
            (Some(v), _) => v,
            (None, Some(_)) => profile.volume(),
            (None, None) => {
                return Err(DescriptorError::Invalid {
                    field: "V",
                    source: Error::Domain("a random initial design needs a target volume".into()),
                })
            }
        };
        let profile = if self.init.is_none() {
            if !(volume.is_finite() && volume > 0.0) {
                return Err(DescriptorError::Invalid {
                    field: "V",
                    source: Error::Domain(format!("V must be positive, got {volume}")),
                });
            }
            profile.scaled(volume / profile.volume()).map_err(invalid("V"))?
        } else {
            profile
        };
        OptimizationProblem::new(volume, self.length, law, self.e, &profile).map_err(invalid("V"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONSTANT: &str = r#"{"E": 1, "J_ref": 1,
        "shape": {"kind": "constant", "L": 1, "values": [1]},
        "law": {"n": 1, "alpha": 1}}"#;

    #[test]
    fn parses_constant_rod() {
        let (d, rod) = parse_rod(CONSTANT).unwrap();
        assert_eq!(d.shape.kind, ShapeKind::Constant);
        assert!(matches!(rod, Rod::Isotropic(_)));
    }

    #[test]
    fn parses_piecewise_with_and_without_breakpoints() {
        let text = r#"{"E": 1, "J_ref": 1,
            "shape": {"kind": "piecewise", "L": 1, "values": [1, 2], "breakpoints": [0, 0.5, 1]},
            "law": {"n": 1, "alpha": 1}}"#;
        let a = parse_rod(text).unwrap().1;
        let text = r#"{"E": 1, "J_ref": 1,
            "shape": {"kind": "piecewise", "L": 1, "values": [1, 2]},
            "law": {"n": 1, "alpha": 1}}"#;
        let b = parse_rod(text).unwrap().1;
        assert_eq!(a, b);
    }

    #[test]
    fn parses_anisotropic() {
        let text = r#"{"E": 1, "Jy": 4, "Jz": 1,
            "shape": {"kind": "sampled", "L": 2, "values": [1, 1.5, 2]},
            "law": {"n": 2, "alpha": 0.0795}}"#;
        let rod = parse_rod(text).unwrap().1;
        assert!(matches!(rod, Rod::Anisotropic(_)));
        assert_eq!(rod.isotropic().unwrap().j_ref(), 2.0);
    }

    #[test]
    fn reports_syntax_location() {
        let text = "{\"E\": 1,\n \"J_ref\": \"one\"}";
        match RodDescriptor::parse(text).unwrap_err() {
            DescriptorError::Syntax { path, line, .. } => {
                assert_eq!(path, "J_ref");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_semantic_errors() {
        let cases = [
            // both J_ref and Jy
            r#"{"E": 1, "J_ref": 1, "Jy": 1, "Jz": 1, "shape": {"kind": "constant", "L": 1, "values": [1]}, "law": {"n": 1, "alpha": 1}}"#,
            // bad law exponent
            r#"{"E": 1, "J_ref": 1, "shape": {"kind": "constant", "L": 1, "values": [1]}, "law": {"n": 4, "alpha": 1}}"#,
            // negative stiffness
            r#"{"E": 1, "J_ref": 1, "shape": {"kind": "piecewise", "L": 1, "values": [1, -1]}, "law": {"n": 1, "alpha": 1}}"#,
            // breakpoints disagree with L
            r#"{"E": 1, "J_ref": 1, "shape": {"kind": "piecewise", "L": 2, "values": [1, 1], "breakpoints": [0, 0.5, 1]}, "law": {"n": 1, "alpha": 1}}"#,
            // constant with two values
            r#"{"E": 1, "J_ref": 1, "shape": {"kind": "constant", "L": 1, "values": [1, 2]}, "law": {"n": 1, "alpha": 1}}"#,
            // zero modulus
            r#"{"E": 0, "J_ref": 1, "shape": {"kind": "constant", "L": 1, "values": [1]}, "law": {"n": 1, "alpha": 1}}"#,
        ];
        for text in cases {
            assert!(
                matches!(parse_rod(text), Err(DescriptorError::Invalid { .. })),
                "{text}"
            );
        }
        let unknown = r#"{"E": 1, "J_ref": 1, "extra": 3, "shape": {"kind": "constant", "L": 1, "values": [1]}, "law": {"n": 1, "alpha": 1}}"#;
        assert!(matches!(parse_rod(unknown), Err(DescriptorError::Syntax { .. })));
    }

    #[test]
    fn echo_roundtrip() {
        let d = RodDescriptor::parse(CONSTANT).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(RodDescriptor::parse(&text).unwrap(), d);
        assert!(text.contains("\"J_ref\""));
        assert!(!text.contains("breakpoints"));
    }

    #[test]
    fn problem_from_init_and_random() {
        let p = ProblemDescriptor::parse(r#"{"L": 1, "E": 1, "law": {"n": 1, "alpha": 1}, "init": [1, 3]}"#)
            .unwrap()
            .to_problem()
            .unwrap();
        assert_eq!(p.v_target(), 2.0);
        let text = r#"{"V": 2, "L": 1, "E": 1, "law": {"n": 2, "alpha": 0.1}, "segments": 8, "seed": 5}"#;
        let a = ProblemDescriptor::parse(text).unwrap().to_problem().unwrap();
        let b = ProblemDescriptor::parse(text).unwrap().to_problem().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.segments(), 8);
        assert!((a.init().unwrap().volume() - 2.0).abs() < 1e-12);
        assert!(ProblemDescriptor::parse(r#"{"L": 1, "E": 1, "law": {"n": 1, "alpha": 1}}"#)
            .unwrap()
            .to_problem()
            .is_err());
        assert!(ProblemDescriptor::parse(r#"{"V": 3, "L": 1, "E": 1, "law": {"n": 1, "alpha": 1}, "init": [1, 3]}"#)
            .unwrap()
            .to_problem()
            .is_err());
    }
}
