//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::arithmetic::FamilySpec;
use crate::error::{Error, Result};
use crate::haar::GroupSpec;
use crate::pipeline::zeros::Selector;
use crate::spectral::ExcisionRule;

pub const DEFAULT_COUNT: u64 = 1000;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_BINS: usize = 100;
/// Default pair-correlation window `[0, 3]`.
pub const DEFAULT_WINDOW: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Sample,
    Onelevel,
    Paircorr,
    Excise,
    Discriminants,
    Neff,
    Compare,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Sample => "sample",
            ExperimentKind::Onelevel => "onelevel",
            ExperimentKind::Paircorr => "paircorr",
            ExperimentKind::Excise => "excise",
            ExperimentKind::Discriminants => "discriminants",
            ExperimentKind::Neff => "neff",
            ExperimentKind::Compare => "compare",
        }
    }
}

/// Everything one experiment needs. Unset fields take the documented
/// defaults; fields an experiment does not use are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excision: Option<ExcisionRule>,
    /// JSON coefficient file for `neff`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<PathBuf>,
    /// Sample CSV written by `sample`, read by `excise` and `compare`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Zero list for `compare`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeros: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selector: Option<Selector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vanish_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        RunConfig {
            experiment,
            group: None,
            family: None,
            count: None,
            seed: None,
            bins: None,
            out: None,
            excision: None,
            coefficients: None,
            input: None,
            zeros: None,
            selector: None,
            vanish_tol: None,
            window: None,
            threads: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(f) = &self.family {
            f.validate()?;
        }
        if let Some(r) = &self.excision {
            r.validate()?;
        }
        if self.count == Some(0) {
            return Err(Error::invalid("count must be positive"));
        }
        if self.bins == Some(0) {
            return Err(Error::invalid("bins must be positive"));
        }
        if self.threads == Some(0) {
            return Err(Error::invalid("threads must be positive"));
        }
        if let Some(w) = self.window {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::invalid("window must be positive"));
            }
        }
        if let Some(t) = self.vanish_tol {
            if !(t >= 0.0) {
                return Err(Error::invalid("vanish_tol must be nonnegative"));
            }
        }
        Ok(())
    }

    pub fn count(&self) -> u64 {
        self.count.unwrap_or(DEFAULT_COUNT)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn bins(&self) -> usize {
        self.bins.unwrap_or(DEFAULT_BINS)
    }

    pub fn window(&self) -> f64 {
        self.window.unwrap_or(DEFAULT_WINDOW)
    }

    pub fn require_group(&self) -> Result<GroupSpec> {
        self.group.ok_or(Error::MissingInput("group"))
    }

    pub fn require_family(&self) -> Result<FamilySpec> {
        self.family.ok_or(Error::MissingInput("family"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::Group;
    use crate::theory::SymmetryCase;

    #[test]
    fn parses_and_rejects_unknown_keys() {
        let text = r#"{
            "experiment": "onelevel",
            "group": {"group": "usp", "n": 10},
            "count": 5000,
            "seed": 3,
            "bins": 50
        }"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert_eq!(cfg.group, Some(GroupSpec::new(Group::USp, 10).unwrap()));
        assert_eq!(cfg.count(), 5000);
        assert_eq!(cfg.window(), DEFAULT_WINDOW);
        assert!(RunConfig::from_json(r#"{"experiment": "sample", "colour": 1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"experiment": "sample", "group": {"group": "usp", "n": 10, "x": 1}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"experiment": "sample", "group": {"group": "usp", "n": 0}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"experiment": "sample", "count": 0}"#).is_err());
        assert!(RunConfig::from_json(r#"{"experiment": "plot"}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let mut cfg = RunConfig::new(ExperimentKind::Compare);
        cfg.group = Some(GroupSpec::new(Group::SoEven, 12).unwrap());
        cfg.family = Some(FamilySpec::new(11, 2, SymmetryCase::SelfCm, 1, Some(-1), 1000).unwrap());
        cfg.excision = Some(ExcisionRule::new(0.5, 2, 8.5673).unwrap());
        cfg.selector = Some(Selector::LowestNonvanishing);
        cfg.vanish_tol = Some(1e-8);
        cfg.out = Some(PathBuf::from("out/report.json"));
        let back = RunConfig::from_json(&cfg.to_json().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
