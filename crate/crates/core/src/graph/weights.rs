use std::fmt::Debug;

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Normal, Pareto, Uniform};
use serde::{Deserialize, Serialize};

use super::{UnweightedGraph, WeightedGraph};
use crate::error::{Error, Result};

/// Source of strictly positive edge weights.
pub trait WeightDistribution: Debug + Send + Sync {
    fn name(&self) -> &'static str;

    fn config(&self) -> WeightConfig;

    fn draw(&self, rng: &mut dyn RngCore) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "distribution", rename_all = "snake_case")]
pub enum WeightConfig {
    Normal { mean: f64, sd: f64 },
    Pareto { shape: f64, scale: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl WeightConfig {
    pub fn build(&self) -> Result<Box<dyn WeightDistribution>> {
        Ok(match *self {
            WeightConfig::Normal { mean, sd } => Box::new(NormalWeights::new(mean, sd)?),
            WeightConfig::Pareto { shape, scale } => Box::new(ParetoWeights::new(shape, scale)?),
            WeightConfig::Uniform { lo, hi } => Box::new(UniformWeights::new(lo, hi)?),
        })
    }
}

/// Normal weights; non-positive draws are rejected and redrawn.
#[derive(Debug, Clone, Copy)]
pub struct NormalWeights {
    mean: f64,
    sd: f64,
    dist: Normal<f64>,
}

impl NormalWeights {
    pub fn new(mean: f64, sd: f64) -> Result<Self> {
        if !(mean > 0.0 && mean.is_finite()) {
            return Err(Error::param(format!("normal weight mean must be > 0, got {mean}")));
        }
        if !(sd >= 0.0 && sd.is_finite()) {
            return Err(Error::param(format!("normal weight sd must be >= 0, got {sd}")));
        }
        let dist = Normal::new(mean, sd).map_err(|e| Error::param(format!("normal weights: {e}")))?;
        Ok(Self { mean, sd, dist })
    }

    pub fn standard() -> Self {
        Self::new(0.15, 0.0075).expect("valid defaults")
    }
}

impl WeightDistribution for NormalWeights {
    fn name(&self) -> &'static str {
        "normal"
    }

    fn config(&self) -> WeightConfig {
        WeightConfig::Normal {
            mean: self.mean,
            sd: self.sd,
        }
    }

    fn draw(&self, rng: &mut dyn RngCore) -> f64 {
        loop {
            let w = self.dist.sample(rng);
            if w > 0.0 {
                return w;
            }
        }
    }
}

/// Pareto weights with `scale` as the minimum and `shape` as the tail index.
#[derive(Debug, Clone, Copy)]
pub struct ParetoWeights {
    shape: f64,
    scale: f64,
    dist: Pareto<f64>,
}

impl ParetoWeights {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::param(format!("pareto scale must be > 0, got {scale}")));
        }
        let dist = Pareto::new(scale, shape).map_err(|e| Error::param(format!("pareto weights: {e}")))?;
        Ok(Self { shape, scale, dist })
    }

    pub fn standard() -> Self {
        Self::new(3.0, 0.10).expect("valid defaults")
    }
}

impl WeightDistribution for ParetoWeights {
    fn name(&self) -> &'static str {
        "pareto"
    }

    fn config(&self) -> WeightConfig {
        WeightConfig::Pareto {
            shape: self.shape,
            scale: self.scale,
        }
    }

    fn draw(&self, rng: &mut dyn RngCore) -> f64 {
        self.dist.sample(rng)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct UniformWeights {
    lo: f64,
    hi: f64,
    dist: Uniform<f64>,
}

impl UniformWeights {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0) {
            return Err(Error::param(format!(
                "uniform weight lower bound must be > 0, got {lo}"
            )));
        }
        let dist = Uniform::new(lo, hi).map_err(|e| Error::param(format!("uniform weights: {e}")))?;
        Ok(Self { lo, hi, dist })
    }

    pub fn standard() -> Self {
        Self::new(0.01, 0.30).expect("valid defaults")
    }
}

impl WeightDistribution for UniformWeights {
    fn name(&self) -> &'static str {
        "uniform"
    }

    fn config(&self) -> WeightConfig {
        WeightConfig::Uniform {
            lo: self.lo,
            hi: self.hi,
        }
    }

    fn draw(&self, rng: &mut dyn RngCore) -> f64 {
        loop {
            let w = self.dist.sample(rng);
            if w > self.lo {
                return w;
            }
        }
    }
}

/// Gives every edge an independent weight, in canonical edge order.
pub fn assign_weights<R: Rng + ?Sized>(
    graph: &UnweightedGraph,
    dist: &dyn WeightDistribution,
    rng: &mut R,
) -> WeightedGraph {
    let mut rng = rng;
    let mut weighted = WeightedGraph::zeros(graph.node_count());
    for (a, b) in graph.edges() {
        weighted.set_weight(a, b, dist.draw(&mut rng));
    }
    weighted
}
