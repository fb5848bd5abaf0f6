//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "universes": { "U": { "lo": 0, "hi": 10 } },
//!   "values": {
//!     "A": { "universe": "U", "support": [2, 8], "core": [4.5, 5.5], "peak": 5 }
//!   },
//!   "partitions": { "P": { "universe": "U", "granules": 3 } },
//!   "rules": { "R": { "conditions": ["A"], "consequent": "B" } },
//!   "grid_points": 201,
//!   "seed": 42
//! }
//! ```
//!
//! Partition members are addressable as `<partition>_<i>` (1-based).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use flexling::rules::{Combiner, FlexibleRule, Polarity};
use flexling::values::{make_flexible_value, FlexiblePartition, FlexibleValue, Interval, Universe};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_GRID_POINTS: usize = 201;
pub const DEFAULT_SEED: u64 = 42;
pub const MIN_GRID_POINTS: usize = 11;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{entity}`: {message}")]
    Validation { entity: String, message: String },
    #[error("`{referenced_by}` refers to undeclared `{name}`")]
    DanglingReference { name: String, referenced_by: String },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CombinerDoc {
    #[default]
    Conjunction,
    Disjunction,
    Synthesis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolarityDoc {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolaritySpec {
    One(PolarityDoc),
    Many(Vec<PolarityDoc>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseDoc {
    pub lo: f64,
    pub hi: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueDoc {
    pub universe: String,
    pub support: [f64; 2],
    pub core: [f64; 2],
    pub peak: f64,
    #[serde(default = "one")]
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extended_core: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionDoc {
    pub universe: String,
    pub granules: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    pub conditions: Vec<String>,
    pub consequent: String,
    #[serde(default)]
    pub combiner: CombinerDoc,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarity: Option<PolaritySpec>,
}

fn default_grid() -> usize {
    DEFAULT_GRID_POINTS
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// The on-disk document, before name resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    #[serde(default)]
    pub universes: BTreeMap<String, UniverseDoc>,
    #[serde(default)]
    pub values: BTreeMap<String, ValueDoc>,
    #[serde(default)]
    pub partitions: BTreeMap<String, PartitionDoc>,
    #[serde(default)]
    pub rules: BTreeMap<String, RuleDoc>,
    #[serde(default = "default_grid")]
    pub grid_points: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<PathBuf>,
}

/// A validated, fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub universes: BTreeMap<String, Universe>,
    pub values: BTreeMap<String, FlexibleValue>,
    pub partitions: BTreeMap<String, FlexiblePartition>,
    pub rules: BTreeMap<String, FlexibleRule>,
    pub grid_points: usize,
    pub seed: u64,
    pub outputs: Option<PathBuf>,
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let doc: ConfigDoc = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    ExperimentConfig::from_doc(doc)
}

fn invalid(entity: &str, err: impl ToString) -> ConfigError {
    ConfigError::Validation {
        entity: entity.to_string(),
        message: err.to_string(),
    }
}

impl ExperimentConfig {
    pub fn from_doc(doc: ConfigDoc) -> Result<Self, ConfigError> {
        if doc.grid_points < MIN_GRID_POINTS {
            return Err(invalid(
                "grid_points",
                format!("{} < {MIN_GRID_POINTS}", doc.grid_points),
            ));
        }

        let mut universes = BTreeMap::new();
        for (name, u) in &doc.universes {
            let universe = Universe::new(name.clone(), u.lo, u.hi).map_err(|e| invalid(name, e))?;
            universes.insert(name.clone(), universe);
        }
        let universe = |name: &str, by: &str| {
            universes
                .get(name)
                .ok_or_else(|| ConfigError::DanglingReference {
                    name: name.to_string(),
                    referenced_by: by.to_string(),
                })
        };

        let mut values = BTreeMap::new();
        for (name, v) in &doc.values {
            let u = universe(&v.universe, name)?;
            let value = make_flexible_value(
                name.clone(),
                u,
                Interval::new(v.support[0], v.support[1]),
                Interval::new(v.core[0], v.core[1]),
                v.peak,
                v.beta,
                v.extended_core.map(|[lo, hi]| Interval::new(lo, hi)),
            )
            .map_err(|e| invalid(name, e))?;
            values.insert(name.clone(), value);
        }

        let mut partitions = BTreeMap::new();
        for (name, p) in &doc.partitions {
            let u = universe(&p.universe, name)?;
            let partition =
                FlexiblePartition::triangular(name, u, p.granules).map_err(|e| invalid(name, e))?;
            for member in partition.values() {
                if values.contains_key(member.name()) {
                    return Err(invalid(
                        member.name(),
                        format!("partition `{name}` member clashes with a declared value"),
                    ));
                }
            }
            partitions.insert(name.clone(), partition);
        }

        let lookup = |name: &str, by: &str| -> Result<FlexibleValue, ConfigError> {
            values
                .get(name)
                .or_else(|| {
                    partitions
                        .values()
                        .flat_map(|p| p.values())
                        .find(|v| v.name() == name)
                })
                .cloned()
                .ok_or_else(|| ConfigError::DanglingReference {
                    name: name.to_string(),
                    referenced_by: by.to_string(),
                })
        };

        let mut rules = BTreeMap::new();
        for (name, r) in &doc.rules {
            let conditions = r
                .conditions
                .iter()
                .map(|c| lookup(c, name))
                .collect::<Result<Vec<_>, _>>()?;
            let consequent = lookup(&r.consequent, name)?;
            let combiner = match r.combiner {
                CombinerDoc::Conjunction => Combiner::Conjunction,
                CombinerDoc::Disjunction => Combiner::Disjunction,
                CombinerDoc::Synthesis => Combiner::Synthesis,
            };
            let to_polarity = |p: &PolarityDoc| match p {
                PolarityDoc::Increasing => Polarity::Increasing,
                PolarityDoc::Decreasing => Polarity::Decreasing,
            };
            let polarities = match &r.polarity {
                None => Vec::new(),
                Some(PolaritySpec::One(p)) => vec![to_polarity(p); conditions.len()],
                Some(PolaritySpec::Many(ps)) => ps.iter().map(to_polarity).collect(),
            };
            let rule = FlexibleRule::new(
                name.clone(),
                conditions,
                combiner,
                r.weights.clone(),
                consequent,
                polarities,
            )
            .map_err(|e| invalid(name, e))?;
            rules.insert(name.clone(), rule);
        }

        Ok(Self {
            universes,
            values,
            partitions,
            rules,
            grid_points: doc.grid_points,
            seed: doc.seed,
            outputs: doc.outputs,
        })
    }

    /// Normalized document: defaults written out explicitly.
    pub fn to_doc(&self) -> ConfigDoc {
        let universes = self
            .universes
            .iter()
            .map(|(k, u)| (k.clone(), UniverseDoc { lo: u.lo(), hi: u.hi() }))
            .collect();
        let values = self
            .values
            .iter()
            .map(|(k, v)| {
                let doc = ValueDoc {
                    universe: v.universe().name().to_string(),
                    support: [v.support().lo, v.support().hi],
                    core: [v.core().lo, v.core().hi],
                    peak: v.peak(),
                    beta: v.beta(),
                    extended_core: Some([v.extended_core().lo, v.extended_core().hi]),
                };
                (k.clone(), doc)
            })
            .collect();
        let partitions = self
            .partitions
            .iter()
            .map(|(k, p)| {
                let doc = PartitionDoc {
                    universe: p.universe().name().to_string(),
                    granules: p.len(),
                };
                (k.clone(), doc)
            })
            .collect();
        let rules = self
            .rules
            .iter()
            .map(|(k, r)| {
                let doc = RuleDoc {
                    conditions: r.conditions().iter().map(|c| c.name().to_string()).collect(),
                    consequent: r.consequent().name().to_string(),
                    combiner: match r.combiner() {
                        Combiner::Conjunction => CombinerDoc::Conjunction,
                        Combiner::Disjunction => CombinerDoc::Disjunction,
                        Combiner::Synthesis => CombinerDoc::Synthesis,
                    },
                    weights: r.weights().to_vec(),
                    polarity: Some(PolaritySpec::Many(
                        r.polarities()
                            .iter()
                            .map(|p| match p {
                                Polarity::Increasing => PolarityDoc::Increasing,
                                Polarity::Decreasing => PolarityDoc::Decreasing,
                            })
                            .collect(),
                    )),
                };
                (k.clone(), doc)
            })
            .collect();
        ConfigDoc {
            universes,
            values,
            partitions,
            rules,
            grid_points: self.grid_points,
            seed: self.seed,
            outputs: self.outputs.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("config serializes")
    }

    pub fn rule(&self, name: &str) -> Result<&FlexibleRule, ConfigError> {
        self.rules
            .get(name)
            .ok_or_else(|| ConfigError::DanglingReference {
                name: name.to_string(),
                referenced_by: "command line".into(),
            })
    }

    /// Resolves a comma-separated list of rule names.
    pub fn rules_for(&self, spec: &str) -> Result<Vec<FlexibleRule>, ConfigError> {
        spec.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| self.rule(name).cloned())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CANONICAL: &str = r#"{
        "universes": { "U": { "lo": 0, "hi": 10 }, "V": { "lo": 0, "hi": 100 } },
        "values": {
            "A": { "universe": "U", "support": [2, 8], "core": [4.5, 5.5], "peak": 5 },
            "B": { "universe": "V", "support": [20, 80], "core": [45, 55], "peak": 50 }
        },
        "rules": { "R": { "conditions": ["A"], "consequent": "B" } }
    }"#;

    #[test]
    fn loads_canonical() {
        let cfg = parse_config(CANONICAL).unwrap();
        assert_eq!(cfg.values.len(), 2);
        assert_eq!(cfg.rules.len(), 1);
        assert_eq!(cfg.grid_points, DEFAULT_GRID_POINTS);
        assert_eq!(cfg.seed, DEFAULT_SEED);
        assert_eq!(cfg.values["A"].extended_core(), Interval::new(3.25, 6.75));
    }

    #[test]
    fn invalid_value_is_named() {
        let text = CANONICAL.replace("\"core\": [4.5, 5.5]", "\"core\": [1, 5.5]");
        match parse_config(&text) {
            Err(ConfigError::Validation { entity, .. }) => assert_eq!(entity, "A"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dangling_reference() {
        let text = CANONICAL.replace("\"consequent\": \"B\"", "\"consequent\": \"C\"");
        match parse_config(&text) {
            Err(ConfigError::DanglingReference { name, referenced_by }) => {
                assert_eq!(name, "C");
                assert_eq!(referenced_by, "R");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_error_has_line() {
        let text = "{\n  \"universes\": {\n    \"U\": { \"lo\": 0, \"hi\": }\n  }\n}";
        match parse_config(text) {
            Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn small_grid_rejected() {
        let text = CANONICAL.replacen('{', "{ \"grid_points\": 5,", 1);
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::Validation { entity, .. }) if entity == "grid_points"
        ));
    }

    #[test]
    fn partition_members_resolve() {
        let text = r#"{
            "universes": { "X": { "lo": 0, "hi": 10 } },
            "partitions": { "P": { "universe": "X", "granules": 3 } },
            "rules": { "r": { "conditions": ["P_1"], "consequent": "P_3", "polarity": "decreasing" } }
        }"#;
        let cfg = parse_config(text).unwrap();
        let r = &cfg.rules["r"];
        assert_eq!(r.condition().unwrap().peak(), 0.0);
        assert_eq!(r.consequent().peak(), 10.0);
        assert_eq!(r.polarity(), Polarity::Decreasing);
    }

    #[test]
    fn normalized_round_trip() {
        let cfg = parse_config(CANONICAL).unwrap();
        let again = parse_config(&cfg.to_json()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.to_json(), again.to_json());
    }
}
