//! Suite configuration and verification reports.
//!
//! Reports are deterministic functions of `(suite, seed, trials, specs)`;
//! wall time is tracked for display but excluded from serialization so a
//! rerun yields byte-identical JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SuiteConfig {
    pub suite: String,
    pub algebra: String,
    pub module: String,
    pub trials: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerance_overrides: BTreeMap<String, f64>,
}

impl SuiteConfig {
    pub fn new(suite: &str, algebra: &str, module: &str, trials: u64, seed: u64) -> Self {
        SuiteConfig {
            suite: suite.to_string(),
            algebra: algebra.to_string(),
            module: module.to_string(),
            trials,
            seed,
            tolerance_overrides: BTreeMap::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(CoreError::Parse("trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-property aggregate over all trials.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PropertyStat {
    pub property: String,
    pub failures: u64,
    pub worst_residual: f64,
}

/// A failing trial, with its serialized inputs. Reports keep the exemplars
/// with the lowest trial indices.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FailureExemplar {
    pub trial: u64,
    pub property: String,
    pub residual: f64,
    pub input: serde_json::Value,
}

pub const MAX_EXEMPLARS: usize = 3;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerificationReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub trials: u64,
    pub passes: u64,
    pub failures: u64,
    pub properties: Vec<PropertyStat>,
    pub exemplars: Vec<FailureExemplar>,
    #[serde(skip)]
    pub wall_ms: u128,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Merge reports over disjoint trial ranges; associative and
    /// commutative except that exemplars keep the lowest trial indices.
    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        assert_eq!(self.suite, other.suite, "cannot merge different suites");
        self.trials += other.trials;
        self.passes += other.passes;
        self.failures += other.failures;
        for stat in other.properties {
            match self.properties.iter_mut().find(|s| s.property == stat.property) {
                Some(existing) => {
                    existing.failures += stat.failures;
                    existing.worst_residual = existing.worst_residual.max(stat.worst_residual);
                }
                None => self.properties.push(stat),
            }
        }
        self.exemplars.extend(other.exemplars);
        self.exemplars
            .sort_by(|a, b| (a.trial, &a.property).cmp(&(b.trial, &b.property)));
        self.exemplars.truncate(MAX_EXEMPLARS);
        self.wall_ms += other.wall_ms;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(trials: u64, failures: u64, residual: f64, exemplar_trial: Option<u64>) -> VerificationReport {
        VerificationReport {
            suite: "s".into(),
            config: SuiteConfig::new("s", "M2", "free(M2, rank=1)", trials, 42),
            trials,
            passes: trials - failures,
            failures,
            properties: vec![PropertyStat {
                property: "p".into(),
                failures,
                worst_residual: residual,
            }],
            exemplars: exemplar_trial
                .map(|t| {
                    vec![FailureExemplar {
                        trial: t,
                        property: "p".into(),
                        residual,
                        input: serde_json::json!({}),
                    }]
                })
                .unwrap_or_default(),
            wall_ms: 0,
        }
    }

    #[test]
    fn merge_is_commutative_on_content() {
        let a = report(10, 1, 0.5, Some(3));
        let b = report(5, 2, 0.9, Some(1));
        let ab = a.clone().merge(b.clone());
        let ba = b.merge(a);
        assert_eq!(ab.trials, ba.trials);
        assert_eq!(ab.failures, ba.failures);
        assert_eq!(ab.properties, ba.properties);
        assert_eq!(ab.exemplars, ba.exemplars);
        assert_eq!(ab.exemplars[0].trial, 1, "lowest trial index wins");
    }

    #[test]
    fn serialization_skips_wall_time() {
        let mut r = report(1, 0, 0.0, None);
        r.wall_ms = 1234;
        let s = r.to_json_string();
        assert!(!s.contains("wall_ms"));
        assert!(s.contains("\"suite\""));
        // byte-identical across reruns with different wall time
        let mut r2 = r.clone();
        r2.wall_ms = 99;
        assert_eq!(s, r2.to_json_string());
    }

    #[test]
    fn zero_trials_rejected() {
        let c = SuiteConfig::new("s", "M2", "", 0, 42);
        assert!(c.validate().is_err());
    }
}
