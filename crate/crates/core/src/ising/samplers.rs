use std::collections::BTreeMap;
use std::fmt::Debug;
use std::sync::Arc;

use rand::{Rng, RngCore};

use super::conditional::{log_odds_unchecked, logistic};
use super::{IsingModel, SampleMatrix};
use crate::error::{Error, Result};

/// A way of drawing respondents from an Ising model.
pub trait IsingSampler: Debug + Send + Sync {
    fn name(&self) -> &'static str;

    fn sample(&self, model: &IsingModel, n: usize, rng: &mut dyn RngCore) -> Result<SampleMatrix>;
}

/// Inverse-CDF draws from the fully enumerated distribution.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactSampler;

impl IsingSampler for ExactSampler {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn sample(&self, model: &IsingModel, n: usize, rng: &mut dyn RngCore) -> Result<SampleMatrix> {
        sample_exact(model, n, rng)
    }
}

/// Single-site Gibbs sweeps in node order.
#[derive(Debug, Clone, Copy)]
pub struct GibbsSampler {
    pub burn_in: usize,
    pub thin: usize,
}

impl Default for GibbsSampler {
    fn default() -> Self {
        Self { burn_in: 1000, thin: 5 }
    }
}

impl IsingSampler for GibbsSampler {
    fn name(&self) -> &'static str {
        "gibbs"
    }

    fn sample(&self, model: &IsingModel, n: usize, rng: &mut dyn RngCore) -> Result<SampleMatrix> {
        sample_gibbs(model, n, self.burn_in, self.thin, rng)
    }
}

fn node_labels(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("x{i}")).collect()
}

pub fn sample_exact<R: Rng + ?Sized>(model: &IsingModel, n: usize, rng: &mut R) -> Result<SampleMatrix> {
    let table = model.probability_table()?;
    let k = model.node_count();
    let mut cdf = Vec::with_capacity(table.probabilities().len());
    let mut acc = 0.0;
    for p in table.probabilities() {
        acc += p;
        cdf.push(acc);
    }
    let last = cdf.len() - 1;
    let (up, down) = (model.encoding().up(), model.encoding().down());
    let mut cells = Vec::with_capacity(n * k);
    for _ in 0..n {
        let u = rng.random::<f64>() * acc;
        let idx = cdf.partition_point(|&c| c <= u).min(last);
        cells.extend((0..k).map(|s| Some(if idx >> s & 1 == 1 { up } else { down })));
    }
    Ok(SampleMatrix::from_binary_rows(node_labels(k), model.encoding(), cells))
}

pub fn sample_gibbs<R: Rng + ?Sized>(
    model: &IsingModel,
    n: usize,
    burn_in: usize,
    thin: usize,
    rng: &mut R,
) -> Result<SampleMatrix> {
    if thin == 0 {
        return Err(Error::param("thinning interval must be at least 1"));
    }
    let k = model.node_count();
    let (up, down) = (model.encoding().up(), model.encoding().down());
    let mut state: Vec<i32> = (0..k).map(|_| if rng.random::<bool>() { up } else { down }).collect();
    let sweep = |state: &mut Vec<i32>, rng: &mut R| {
        for s in 0..k {
            let p = logistic(log_odds_unchecked(model, s, state));
            state[s] = if rng.random::<f64>() < p { up } else { down };
        }
    };
    for _ in 0..burn_in {
        sweep(&mut state, rng);
    }
    let mut cells = Vec::with_capacity(n * k);
    for _ in 0..n {
        for _ in 0..thin {
            sweep(&mut state, rng);
        }
        cells.extend(state.iter().map(|&v| Some(v)));
    }
    Ok(SampleMatrix::from_binary_rows(node_labels(k), model.encoding(), cells))
}

#[derive(Debug, Clone)]
pub struct SamplerRegistry {
    entries: BTreeMap<String, Arc<dyn IsingSampler>>,
}

impl SamplerRegistry {
    pub fn with_defaults() -> Self {
        let mut reg = Self {
            entries: BTreeMap::new(),
        };
        reg.register(Arc::new(ExactSampler));
        reg.register(Arc::new(GibbsSampler::default()));
        reg
    }

    pub fn register(&mut self, sampler: Arc<dyn IsingSampler>) {
        self.entries.insert(sampler.name().to_string(), sampler);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn IsingSampler>> {
        self.entries.get(name).cloned().ok_or_else(|| {
            let known: Vec<&str> = self.entries.keys().map(String::as_str).collect();
            Error::Config(format!("unknown sampler '{name}' (known: {})", known.join(", ")))
        })
    }
}
