use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{aggregate, ReplicateRecord, StudyReport};
use super::{AverageImpact, StudyConfig, ThresholdScope};
use crate::error::Result;
use crate::graph::{
    assign_weights, GeneratorRegistry, GraphGenerator, WeightDistribution, WeightRegistry, WeightedGraph,
};
use crate::ising::{IsingModel, IsingSampler, SamplerRegistry};
use crate::network::{network_from_codes, shortest_paths};
use crate::rng::{derive_seed, seeded};
use crate::stats::{biserial, pearson, point_biserial, polychoric_pairs, zscore};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationResult {
    pub beta: f64,
    /// ASPL of the element-only correlation network.
    pub connectivity: f64,
    pub average_impact: f64,
    /// Per element node, in node order with the decision node skipped.
    pub closeness: Vec<f64>,
    pub impact: Vec<f64>,
    pub saturated_edges: usize,
    pub negative_edges: usize,
}

/// One temperature variation of a weighted base network.
#[allow(clippy::too_many_arguments)]
pub fn run_variation(
    base: &WeightedGraph,
    decision: usize,
    beta: f64,
    thresholds: &[f64],
    config: &StudyConfig,
    sampler: &dyn IsingSampler,
    rng: &mut dyn RngCore,
) -> Result<VariationResult> {
    let model = IsingModel::from_graph(base, thresholds.to_vec(), beta, config.encoding)?;
    let sample = sampler.sample(&model, config.individuals, rng)?;
    let n = sample.n_rows();
    let k = model.node_count();
    let elements: Vec<usize> = (0..k).filter(|&c| c != decision).collect();
    let codes: Vec<Vec<i32>> = (0..k)
        .map(|c| (0..n).map(|r| sample.get(r, c).expect("complete sample")).collect())
        .collect();
    let element_codes: Vec<Vec<i32>> = elements.iter().map(|&c| codes[c].clone()).collect();
    let network = network_from_codes(&sample, &elements, &element_codes)?;
    let distances = shortest_paths(&network);
    let connectivity = distances.aspl()?;
    let closeness = distances.closeness()?;

    let vote: Vec<u8> = codes[decision]
        .iter()
        .map(|&v| u8::from(v == config.encoding.up()))
        .collect();
    let sum_score: Vec<f64> = (0..n)
        .map(|r| element_codes.iter().map(|c| c[r] as f64).sum())
        .collect();
    let average_impact = match config.average_impact {
        AverageImpact::Biserial => biserial(&sum_score, &vote)?,
        AverageImpact::PointBiserial => point_biserial(&sum_score, &vote)?,
    };
    let impact = element_codes
        .iter()
        .map(|c| polychoric_pairs(c, &codes[decision]).map(|e| e.rho))
        .collect::<Result<Vec<_>>>()?;
    Ok(VariationResult {
        beta,
        connectivity,
        average_impact,
        closeness,
        impact,
        saturated_edges: network.provenance().saturated.len(),
        negative_edges: distances.negative_edges.len(),
    })
}

fn name_id(name: &str) -> u64 {
    // FNV-1a, stable across platforms and releases.
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Seed of a replicate's stream. It depends only on the master seed, the
/// strategy names and the replicate index, so a single-combination run
/// reproduces the corresponding part of a full run.
pub fn combination_seed(master: u64, generator: &str, weights: &str, replicate: usize) -> u64 {
    derive_seed(master, &[name_id(generator), name_id(weights), replicate as u64])
}

/// Pearson r over variations, and the pooled r of within-variation
/// standardized closeness and impact.
fn replicate_correlations(vars: &[VariationResult]) -> (Option<f64>, Option<f64>) {
    let aspl: Vec<f64> = vars.iter().map(|v| v.connectivity).collect();
    let imp: Vec<f64> = vars.iter().map(|v| v.average_impact).collect();
    let connectivity_r = pearson(&aspl, &imp).ok().map(|c| c.r);
    let (mut zc, mut zi) = (Vec::new(), Vec::new());
    for v in vars {
        if let (Ok(c), Ok(i)) = (zscore(&v.closeness), zscore(&v.impact)) {
            zc.extend(c);
            zi.extend(i);
        }
    }
    let centrality_r = pearson(&zc, &zi).ok().map(|c| c.r);
    (connectivity_r, centrality_r)
}

#[allow(clippy::too_many_arguments)]
pub fn run_replicate(
    config: &StudyConfig,
    generator_name: &str,
    generator: &dyn GraphGenerator,
    weights_name: &str,
    weights: &dyn WeightDistribution,
    sampler: &dyn IsingSampler,
    replicate: usize,
) -> Result<ReplicateRecord> {
    let seed = combination_seed(config.seed, generator_name, weights_name, replicate);
    let mut rng = seeded(seed);
    let graph = generator.generate(config.node_count, &mut rng)?;
    let base = assign_weights(&graph, weights, &mut rng);
    let decision = rng.random_range(0..config.node_count);
    let shared = config.thresholds.draw_many(config.node_count, &mut rng);
    let mut variations = Vec::with_capacity(config.variations);
    let mut degenerate = 0;
    for _ in 0..config.variations {
        let beta = config.beta.draw(&mut rng);
        let thresholds = match config.threshold_scope {
            ThresholdScope::PerVariation => config.thresholds.draw_many(config.node_count, &mut rng),
            ThresholdScope::PerReplicate => shared.clone(),
        };
        match run_variation(&base, decision, beta, &thresholds, config, sampler, &mut rng) {
            Ok(v) => variations.push(v),
            Err(e) if e.is_degenerate() => {
                log::debug!("{generator_name}/{weights_name} replicate {replicate}: variation dropped: {e}");
                degenerate += 1;
            }
            Err(e) => return Err(e),
        }
    }
    let (connectivity_r, centrality_r) = replicate_correlations(&variations);
    let too_many = degenerate as f64 > config.max_degenerate_share * config.variations as f64;
    let flagged = too_many || connectivity_r.is_none() || centrality_r.is_none();
    Ok(ReplicateRecord {
        generator: generator_name.to_string(),
        weights: weights_name.to_string(),
        replicate,
        seed,
        decision_node: decision,
        edge_count: base.nonzero_edge_count(),
        connectivity_r,
        centrality_r,
        degenerate_variations: degenerate,
        flagged,
        variations: config.keep_variations.then_some(variations),
    })
}

/// Runs every selected combination with the default strategy registries.
pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    run_study_with(
        config,
        &GeneratorRegistry::with_defaults(),
        &WeightRegistry::with_defaults(),
        &SamplerRegistry::with_defaults(),
    )
}

pub fn run_study_with(
    config: &StudyConfig,
    generators: &GeneratorRegistry,
    weights: &WeightRegistry,
    samplers: &SamplerRegistry,
) -> Result<StudyReport> {
    config.validate()?;
    let gens = generators.select(&config.generator)?;
    let dists = weights.select(&config.weights)?;
    let sampler = samplers.get(&config.sampler)?;
    let mut jobs = Vec::new();
    for (gname, g) in &gens {
        for (wname, w) in &dists {
            for rep in 0..config.replicates {
                jobs.push((gname, g, wname, w, rep));
            }
        }
    }
    log::info!(
        "running {} replicates over {} combinations",
        jobs.len(),
        gens.len() * dists.len()
    );
    let records = jobs
        .par_iter()
        .map(|(gname, g, wname, w, rep)| {
            run_replicate(config, gname, g.as_ref(), wname, w.as_ref(), sampler.as_ref(), *rep)
        })
        .collect::<Result<Vec<_>>>()?;
    let generator_configs = gens.iter().map(|(n, g)| (n.clone(), g.config())).collect();
    let weight_configs = dists.iter().map(|(n, w)| (n.clone(), w.config())).collect();
    Ok(aggregate(config.clone(), generator_configs, weight_configs, records))
}
