//! Ising attitude model: energies, exact Gibbs probabilities and sampling.
//!
//! Node states are coded either as -1/+1 or as 0/1. The inverse temperature
//! scales the whole Hamiltonian, thresholds and pairwise weights alike:
//! `P(x) = exp(-beta * H(x)) / Z` with
//! `H(x) = -sum_i tau_i x_i - sum_{i<j} omega_ij x_i x_j`.

mod conditional;
mod sample_matrix;
mod samplers;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

pub use conditional::{
    classify, conditional_params, conditional_prob, log_odds, logistic, pseudo_log_loss, pseudo_log_loss_base,
    ConditionalParams,
};
pub use sample_matrix::{recode, Column, ColumnRole, SampleMatrix};
pub use samplers::{sample_exact, sample_gibbs, ExactSampler, GibbsSampler, IsingSampler, SamplerRegistry};

/// Largest node count handled by full enumeration (2^20 configurations).
pub const ENUMERATION_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    #[default]
    PlusMinusOne,
    ZeroOne,
}

impl Encoding {
    pub fn up(self) -> i32 {
        1
    }

    pub fn down(self) -> i32 {
        match self {
            Encoding::PlusMinusOne => -1,
            Encoding::ZeroOne => 0,
        }
    }

    pub fn alphabet(self) -> [i32; 2] {
        [self.down(), self.up()]
    }

    pub fn contains(self, v: i32) -> bool {
        v == self.up() || v == self.down()
    }
}

/// One joint state of all nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    states: Vec<i32>,
}

impl Configuration {
    pub fn new(states: Vec<i32>) -> Self {
        Self { states }
    }

    /// Configuration whose node `s` is up iff bit `s` of `index` is set.
    pub fn from_index(index: usize, k: usize, encoding: Encoding) -> Self {
        let states = (0..k)
            .map(|s| {
                if index >> s & 1 == 1 {
                    encoding.up()
                } else {
                    encoding.down()
                }
            })
            .collect();
        Self { states }
    }

    pub fn states(&self) -> &[i32] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingModel {
    thresholds: Vec<f64>,
    weights: Vec<f64>,
    beta: f64,
    encoding: Encoding,
}

impl IsingModel {
    /// `weights` is the full row-major `k x k` matrix.
    pub fn new(thresholds: Vec<f64>, weights: Vec<f64>, beta: f64, encoding: Encoding) -> Result<Self> {
        let k = thresholds.len();
        if k == 0 {
            return Err(Error::param("Ising model needs at least one node"));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::param(format!("inverse temperature must be > 0, got {beta}")));
        }
        if weights.len() != k * k {
            return Err(Error::contract(format!(
                "weight matrix has {} entries for {k} nodes",
                weights.len()
            )));
        }
        for i in 0..k {
            if weights[i * k + i] != 0.0 {
                return Err(Error::contract(format!("nonzero self-weight at node {i}")));
            }
            for j in (i + 1)..k {
                if weights[i * k + j] != weights[j * k + i] {
                    return Err(Error::contract(format!("asymmetric weight at ({i},{j})")));
                }
            }
        }
        if thresholds.iter().chain(&weights).any(|v| !v.is_finite()) {
            return Err(Error::param("thresholds and weights must be finite"));
        }
        Ok(Self {
            thresholds,
            weights,
            beta,
            encoding,
        })
    }

    pub fn from_graph(graph: &WeightedGraph, thresholds: Vec<f64>, beta: f64, encoding: Encoding) -> Result<Self> {
        if thresholds.len() != graph.node_count() {
            return Err(Error::contract("threshold count differs from node count"));
        }
        Self::new(thresholds, graph.as_slice().to_vec(), beta, encoding)
    }

    pub fn node_count(&self) -> usize {
        self.thresholds.len()
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.node_count() + j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.thresholds.clone(), self.weights.clone(), beta, self.encoding)
    }

    fn check_config(&self, config: &Configuration) -> Result<()> {
        if config.len() != self.node_count() {
            return Err(Error::contract(format!(
                "configuration has {} states for {} nodes",
                config.len(),
                self.node_count()
            )));
        }
        if let Some(v) = config.states().iter().find(|&&v| !self.encoding.contains(v)) {
            return Err(Error::contract(format!(
                "state {v} is not in the {:?} alphabet",
                self.encoding
            )));
        }
        Ok(())
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.node_count() > ENUMERATION_LIMIT {
            return Err(Error::Capacity(format!(
                "{} nodes exceed the enumeration limit of {ENUMERATION_LIMIT}; use the Gibbs sampler",
                self.node_count()
            )));
        }
        Ok(())
    }

    fn energy_unchecked(&self, x: &[f64]) -> f64 {
        let k = x.len();
        let mut h = 0.0;
        for i in 0..k {
            h -= self.thresholds[i] * x[i];
            let row = &self.weights[i * k..(i + 1) * k];
            let mut pair = 0.0;
            for j in (i + 1)..k {
                pair += row[j] * x[j];
            }
            h -= x[i] * pair;
        }
        h
    }

    /// Log of `exp(-beta * H)` for every configuration, indexed by bit pattern.
    fn log_weights(&self) -> Vec<f64> {
        let k = self.node_count();
        let (up, down) = (self.encoding.up() as f64, self.encoding.down() as f64);
        let mut x = vec![0.0; k];
        (0..1usize << k)
            .map(|idx| {
                for (s, xs) in x.iter_mut().enumerate() {
                    *xs = if idx >> s & 1 == 1 { up } else { down };
                }
                -self.beta * self.energy_unchecked(&x)
            })
            .collect()
    }

    pub fn log_partition(&self) -> Result<f64> {
        self.check_enumerable()?;
        Ok(log_sum_exp(&self.log_weights()))
    }

    /// Exact joint distribution over all `2^k` configurations.
    pub fn probability_table(&self) -> Result<ProbabilityTable> {
        self.check_enumerable()?;
        let lw = self.log_weights();
        let log_z = log_sum_exp(&lw);
        let probs = lw.iter().map(|l| (l - log_z).exp()).collect();
        Ok(ProbabilityTable {
            node_count: self.node_count(),
            encoding: self.encoding,
            log_partition: log_z,
            probs,
        })
    }
}

pub fn hamiltonian(model: &IsingModel, config: &Configuration) -> Result<f64> {
    model.check_config(config)?;
    let x: Vec<f64> = config.states().iter().map(|&v| v as f64).collect();
    Ok(model.energy_unchecked(&x))
}

pub fn partition_function(model: &IsingModel) -> Result<f64> {
    Ok(model.log_partition()?.exp())
}

pub fn config_probability(model: &IsingModel, config: &Configuration) -> Result<f64> {
    let h = hamiltonian(model, config)?;
    let log_z = model.log_partition()?;
    Ok((-model.beta() * h - log_z).exp())
}

#[derive(Debug, Clone)]
pub struct ProbabilityTable {
    node_count: usize,
    encoding: Encoding,
    log_partition: f64,
    probs: Vec<f64>,
}

impl ProbabilityTable {
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn configuration(&self, index: usize) -> Configuration {
        Configuration::from_index(index, self.node_count, self.encoding)
    }

    /// Bit-pattern index of a configuration in this table.
    pub fn index_of(&self, states: &[i32]) -> usize {
        states
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == self.encoding.up())
            .fold(0, |acc, (s, _)| acc | 1 << s)
    }

    /// Total-variation distance between this table and empirical counts.
    pub fn total_variation(&self, counts: &[usize]) -> f64 {
        assert_eq!(counts.len(), self.probs.len());
        let n: usize = counts.iter().sum();
        0.5 * self
            .probs
            .iter()
            .zip(counts)
            .map(|(p, &c)| (p - c as f64 / n as f64).abs())
            .sum::<f64>()
    }
}

pub(crate) fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}
