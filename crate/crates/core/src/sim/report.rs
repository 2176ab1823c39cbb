use std::io::Write;

use serde::{Deserialize, Serialize};

use super::run::VariationResult;
use super::StudyConfig;
use crate::error::Result;
use crate::graph::{AlgorithmConfig, WeightConfig};
use crate::stats::{mean, sample_sd};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub generator: String,
    pub weights: String,
    pub replicate: usize,
    pub seed: u64,
    pub decision_node: usize,
    pub edge_count: usize,
    pub connectivity_r: Option<f64>,
    pub centrality_r: Option<f64>,
    pub degenerate_variations: usize,
    /// Excluded from aggregation.
    pub flagged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variations: Option<Vec<VariationResult>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinationSummary {
    pub generator: String,
    pub weights: String,
    pub replicates_used: usize,
    pub replicates_flagged: usize,
    pub connectivity_mean: Option<f64>,
    /// Absent with fewer than two usable replicates.
    pub connectivity_sd: Option<f64>,
    pub centrality_mean: Option<f64>,
    pub centrality_sd: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub generator_configs: Vec<(String, AlgorithmConfig)>,
    pub weight_configs: Vec<(String, WeightConfig)>,
    pub combinations: Vec<CombinationSummary>,
    pub replicates: Vec<ReplicateRecord>,
}

fn moments(values: &[f64]) -> (Option<f64>, Option<f64>) {
    match values.len() {
        0 => (None, None),
        1 => (Some(values[0]), None),
        _ => (Some(mean(values)), Some(sample_sd(values))),
    }
}

pub(crate) fn aggregate(
    config: StudyConfig,
    generator_configs: Vec<(String, AlgorithmConfig)>,
    weight_configs: Vec<(String, WeightConfig)>,
    replicates: Vec<ReplicateRecord>,
) -> StudyReport {
    let mut combinations = Vec::new();
    for (g, _) in &generator_configs {
        for (w, _) in &weight_configs {
            let recs: Vec<&ReplicateRecord> = replicates
                .iter()
                .filter(|r| &r.generator == g && &r.weights == w)
                .collect();
            let used: Vec<&&ReplicateRecord> = recs.iter().filter(|r| !r.flagged).collect();
            let conn: Vec<f64> = used.iter().filter_map(|r| r.connectivity_r).collect();
            let cent: Vec<f64> = used.iter().filter_map(|r| r.centrality_r).collect();
            let (connectivity_mean, connectivity_sd) = moments(&conn);
            let (centrality_mean, centrality_sd) = moments(&cent);
            combinations.push(CombinationSummary {
                generator: g.clone(),
                weights: w.clone(),
                replicates_used: used.len(),
                replicates_flagged: recs.len() - used.len(),
                connectivity_mean,
                connectivity_sd,
                centrality_mean,
                centrality_sd,
            });
        }
    }
    StudyReport {
        config,
        generator_configs,
        weight_configs,
        combinations,
        replicates,
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

impl StudyReport {
    pub fn combination(&self, generator: &str, weights: &str) -> Option<&CombinationSummary> {
        self.combinations
            .iter()
            .find(|c| c.generator == generator && c.weights == weights)
    }

    /// One row per combination, in the layout of the usual summary table.
    pub fn write_table_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        w.write_record([
            "generator",
            "weights",
            "replicates_used",
            "replicates_flagged",
            "connectivity_impact_mean_r",
            "connectivity_impact_sd_r",
            "centrality_impact_mean_r",
            "centrality_impact_sd_r",
        ])?;
        for c in &self.combinations {
            w.write_record([
                c.generator.clone(),
                c.weights.clone(),
                c.replicates_used.to_string(),
                c.replicates_flagged.to_string(),
                cell(c.connectivity_mean),
                cell(c.connectivity_sd),
                cell(c.centrality_mean),
                cell(c.centrality_sd),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Per-replicate values for auditing.
    pub fn write_replicates_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        w.write_record([
            "generator",
            "weights",
            "replicate",
            "seed",
            "decision_node",
            "edge_count",
            "connectivity_r",
            "centrality_r",
            "degenerate_variations",
            "flagged",
        ])?;
        for r in &self.replicates {
            w.write_record([
                r.generator.clone(),
                r.weights.clone(),
                r.replicate.to_string(),
                r.seed.to_string(),
                r.decision_node.to_string(),
                r.edge_count.to_string(),
                cell(r.connectivity_r),
                cell(r.centrality_r),
                r.degenerate_variations.to_string(),
                r.flagged.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Unflagged replicate of a combination whose connectivity r is closest
    /// to the combination mean.
    pub fn nearest_to_mean(&self, generator: &str, weights: &str) -> Option<&ReplicateRecord> {
        let target = self.combination(generator, weights)?.connectivity_mean?;
        self.replicates
            .iter()
            .filter(|r| r.generator == generator && r.weights == weights && !r.flagged)
            .filter_map(|r| r.connectivity_r.map(|v| (r, (v - target).abs())))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(r, _)| r)
    }
}
