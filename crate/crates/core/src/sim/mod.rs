//! Simulation study: random base networks, temperature variations, estimated
//! correlation networks, and the connectivity/impact and centrality/impact
//! correlations aggregated per generator and weight combination.

mod report;
mod run;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::Encoding;

pub use report::{CombinationSummary, ReplicateRecord, StudyReport};
pub use run::{combination_seed, run_replicate, run_study, run_study_with, run_variation, VariationResult};

/// Normal distribution restricted to values strictly above `lower`, sampled
/// by redrawing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedNormal {
    pub mean: f64,
    pub sd: f64,
    pub lower: f64,
}

impl TruncatedNormal {
    pub fn check(&self) -> Result<()> {
        if !(self.sd >= 0.0 && self.sd.is_finite() && self.mean.is_finite()) {
            return Err(Error::param(format!("invalid normal N({}, {})", self.mean, self.sd)));
        }
        if self.mean <= self.lower && self.sd == 0.0 {
            return Err(Error::param("truncated normal has no mass above its bound"));
        }
        Ok(())
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let dist = Normal::new(self.mean, self.sd).expect("checked parameters");
        loop {
            let x = dist.sample(rng);
            if x > self.lower {
                return x;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalSpec {
    pub mean: f64,
    pub sd: f64,
}

impl NormalSpec {
    pub fn draw_many<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        let dist = Normal::new(self.mean, self.sd).expect("checked parameters");
        (0..n).map(|_| dist.sample(rng)).collect()
    }
}

/// When node thresholds are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdScope {
    #[default]
    PerVariation,
    PerReplicate,
}

/// Statistic relating the element sum score to the decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AverageImpact {
    #[default]
    Biserial,
    PointBiserial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StudyConfig {
    pub replicates: usize,
    pub variations: usize,
    pub individuals: usize,
    pub node_count: usize,
    pub beta: TruncatedNormal,
    pub thresholds: NormalSpec,
    pub threshold_scope: ThresholdScope,
    /// Registered generator name or `all`.
    pub generator: String,
    /// Registered weight distribution name or `all`.
    pub weights: String,
    /// Registered sampler name.
    pub sampler: String,
    /// State coding of the simulated Ising models.
    pub encoding: Encoding,
    pub average_impact: AverageImpact,
    /// A replicate is excluded when more than this share of its variations
    /// is degenerate.
    pub max_degenerate_share: f64,
    /// Keep every variation in the per-replicate records.
    pub keep_variations: bool,
    pub seed: u64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            replicates: 100,
            variations: 20,
            individuals: 1000,
            node_count: 11,
            beta: TruncatedNormal {
                mean: 1.0,
                sd: 0.2,
                lower: 0.0,
            },
            thresholds: NormalSpec { mean: 0.0, sd: 0.25 },
            threshold_scope: ThresholdScope::PerVariation,
            generator: "all".into(),
            weights: "all".into(),
            sampler: "exact".into(),
            encoding: Encoding::PlusMinusOne,
            average_impact: AverageImpact::Biserial,
            max_degenerate_share: 0.25,
            keep_variations: false,
            seed: 1,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("replicates", self.replicates),
            ("variations", self.variations),
            ("individuals", self.individuals),
        ] {
            if v == 0 {
                return Err(Error::param(format!("{name} must be at least 1")));
            }
        }
        if self.node_count < 3 {
            return Err(Error::param(
                "node_count must be at least 3 (decision plus two elements)",
            ));
        }
        if self.beta.lower < 0.0 {
            return Err(Error::param("inverse temperature truncation bound must be >= 0"));
        }
        self.beta.check()?;
        if !(self.thresholds.sd >= 0.0 && self.thresholds.sd.is_finite() && self.thresholds.mean.is_finite()) {
            return Err(Error::param("invalid threshold distribution"));
        }
        if !(0.0..=1.0).contains(&self.max_degenerate_share) {
            return Err(Error::param("max_degenerate_share must lie in [0, 1]"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn truncated_normal_stays_above_bound() {
        let t = TruncatedNormal {
            mean: 0.0,
            sd: 1.0,
            lower: 0.5,
        };
        let mut rng = seeded(1);
        assert!((0..1000).all(|_| t.draw(&mut rng) > 0.5));
    }

    #[test]
    fn config_validation() {
        assert!(StudyConfig::default().validate().is_ok());
        let bad = StudyConfig {
            replicates: 0,
            ..StudyConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = StudyConfig {
            beta: TruncatedNormal {
                mean: 1.0,
                sd: 0.2,
                lower: -1.0,
            },
            ..StudyConfig::default()
        };
        assert!(bad.validate().is_err());
        let json = serde_json::to_string(&StudyConfig::default()).unwrap();
        let back: StudyConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, StudyConfig::default());
        let partial: StudyConfig = serde_json::from_str(r#"{"replicates": 3}"#).unwrap();
        assert_eq!(partial.replicates, 3);
        assert_eq!(partial.variations, 20);
    }
}
