//! Scenario documents.
//!
//! A scenario is a JSON object:
//!
//! ```json
//! {
//!   "name": "p2_circle",
//!   "group": "circle_power",
//!   "g": 1,
//!   "factors": [{ "dim": 2, "weights": [-1, 1, 1] }],
//!   "bundle": { "degrees": [1], "twist": [0] }
//! }
//! ```
//!
//! `group` is `"circle_power"` (with `g` the rank of the torus) or `"su2"`
//! (with `g = 3`). Circle factors list one weight per homogeneous
//! coordinate, either as integers (rank one) or as vectors of length `g`.
//! SU(2) factors give `sym_powers` instead, the `m_i` of `⊕ Sym^{m_i}(C²)`.
//! `twist` may be omitted (zero) and must be omitted or empty for SU(2).
//! `name` and `description` are optional labels.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use equivol_core::{FactorWeights, GroupSpec, LinearizedBundle, ProjectiveFactor, Scenario};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub group: String,
    pub g: usize,
    pub factors: Vec<FactorDocument>,
    pub bundle: BundleDocument,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDocument {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<WeightEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sym_powers: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightEntry {
    Scalar(i64),
    Vector(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDocument {
    pub degrees: Vec<i64>,
    #[serde(default)]
    pub twist: Vec<i64>,
}

/// A validated scenario together with its display name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedScenario {
    pub name: String,
    pub scenario: Scenario,
}

impl ScenarioDocument {
    pub fn parse(text: &str, origin: &str) -> Result<ScenarioDocument> {
        serde_json::from_str(text).map_err(|source| CliError::Parse {
            origin: origin.to_string(),
            source,
        })
    }

    pub fn to_scenario(&self, origin: &str) -> Result<Scenario> {
        let err = |message: String| CliError::Document {
            origin: origin.to_string(),
            message,
        };
        let group = match self.group.as_str() {
            "circle_power" => GroupSpec::circle(self.g),
            "su2" => {
                if self.g != 3 {
                    return Err(err(format!("field `g`: su2 has g = 3, got {}", self.g)));
                }
                GroupSpec::su2()
            }
            other => {
                return Err(err(format!(
                    "field `group`: expected \"circle_power\" or \"su2\", got {other:?}"
                )))
            }
        };
        let mut factors = Vec::new();
        for (j, f) in self.factors.iter().enumerate() {
            let weights = match (&f.weights, &f.sym_powers) {
                (Some(w), None) => FactorWeights::Circle(
                    w.iter()
                        .map(|entry| match entry {
                            WeightEntry::Scalar(x) => vec![*x],
                            WeightEntry::Vector(v) => v.clone(),
                        })
                        .collect(),
                ),
                (None, Some(p)) => FactorWeights::Su2(p.clone()),
                (Some(_), Some(_)) => {
                    return Err(err(format!(
                        "factors[{j}]: give either `weights` or `sym_powers`, not both"
                    )))
                }
                (None, None) => {
                    return Err(err(format!(
                        "factors[{j}]: missing field `weights` (or `sym_powers` for su2)"
                    )))
                }
            };
            factors.push(ProjectiveFactor::new(f.dim, weights));
        }
        let bundle = LinearizedBundle::new(self.bundle.degrees.clone(), self.bundle.twist.clone());
        Scenario::new(group, factors, bundle).map_err(|e| err(e.to_string()))
    }

    pub fn from_scenario(name: Option<String>, s: &Scenario) -> ScenarioDocument {
        let rank_one = !s.is_su2() && s.g() == 1;
        let factors = s
            .factors
            .iter()
            .map(|f| match &f.weights {
                FactorWeights::Circle(w) => FactorDocument {
                    dim: f.dim,
                    weights: Some(
                        w.iter()
                            .map(|v| {
                                if rank_one {
                                    WeightEntry::Scalar(v[0])
                                } else {
                                    WeightEntry::Vector(v.clone())
                                }
                            })
                            .collect(),
                    ),
                    sym_powers: None,
                },
                FactorWeights::Su2(p) => FactorDocument {
                    dim: f.dim,
                    weights: None,
                    sym_powers: Some(p.clone()),
                },
            })
            .collect();
        ScenarioDocument {
            name,
            description: None,
            group: if s.is_su2() { "su2" } else { "circle_power" }.to_string(),
            g: s.g(),
            factors,
            bundle: BundleDocument {
                degrees: s.bundle.degrees.clone(),
                twist: s.bundle.twist.clone(),
            },
        }
    }
}

/// Parses and validates a scenario document.
pub fn load_scenario(text: &str, origin: &str) -> Result<NamedScenario> {
    let doc = ScenarioDocument::parse(text, origin)?;
    let scenario = doc.to_scenario(origin)?;
    let name = doc.name.clone().unwrap_or_else(|| {
        Path::new(origin)
            .file_stem()
            .map_or_else(|| origin.to_string(), |s| s.to_string_lossy().into_owned())
    });
    Ok(NamedScenario { name, scenario })
}

pub fn load_scenario_file(path: &Path) -> Result<NamedScenario> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    load_scenario(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_degrees_names_the_field() {
        let text = r#"{"group": "circle_power", "g": 1,
            "factors": [{"dim": 1, "weights": [1, -1]}],
            "bundle": {"twist": [0]}}"#;
        let err = load_scenario(text, "bad.json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("missing field `degrees`"), "{msg}");
        assert!(msg.contains("line 3"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn validation_errors_are_forwarded() {
        let text = r#"{"group": "circle_power", "g": 1,
            "factors": [{"dim": 2, "weights": [1, -1]}],
            "bundle": {"degrees": [1]}}"#;
        let msg = load_scenario(text, "short.json").unwrap_err().to_string();
        assert!(msg.contains("short.json"), "{msg}");
    }

    #[test]
    fn round_trip() {
        let text = r#"{"group": "circle_power", "g": 2,
            "factors": [{"dim": 2, "weights": [[1, 0], [0, 1], [-1, -1]]}],
            "bundle": {"degrees": [1], "twist": [0, 0]}}"#;
        let s = load_scenario(text, "tri.json").unwrap();
        assert_eq!(s.name, "tri");
        let doc = ScenarioDocument::from_scenario(Some("tri".into()), &s.scenario);
        let again = doc.to_scenario("again").unwrap();
        assert_eq!(again, s.scenario);
    }

    #[test]
    fn unknown_group() {
        let text = r#"{"group": "so3", "g": 3, "factors": [], "bundle": {"degrees": []}}"#;
        assert!(load_scenario(text, "x").unwrap_err().to_string().contains("field `group`"));
    }
}
