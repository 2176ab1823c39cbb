//! Node-conditional (logistic) view of the Ising model.
//!
//! With states coded 0/1 the conditional log-odds of node `s` is linear in its
//! neighbours: `mu_s = m_s + sum_t A_st x_t`. For a model stored in -1/+1
//! coding the parameters are converted to their 0/1 equivalents first, so
//! `mu_s` is always the log-odds of the up state.

use super::{Configuration, Encoding, IsingModel};
use crate::error::{Error, Result};

/// Main effects `m` and interactions `A` (row-major) in 0/1 coordinates,
/// already scaled by the inverse temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalParams {
    pub main: Vec<f64>,
    pub interaction: Vec<f64>,
}

pub fn conditional_params(model: &IsingModel) -> ConditionalParams {
    let k = model.node_count();
    let beta = model.beta();
    match model.encoding() {
        Encoding::ZeroOne => ConditionalParams {
            main: model.thresholds().iter().map(|t| beta * t).collect(),
            interaction: model.weights().iter().map(|w| beta * w).collect(),
        },
        Encoding::PlusMinusOne => {
            // x = 2y - 1; log-odds 2*beta*(tau_s + sum_t w_st x_t) rewritten in y
            let main = (0..k)
                .map(|s| {
                    let row_sum: f64 = (0..k).map(|t| model.weight(s, t)).sum();
                    2.0 * beta * (model.thresholds()[s] - row_sum)
                })
                .collect();
            let interaction = model.weights().iter().map(|w| 4.0 * beta * w).collect();
            ConditionalParams { main, interaction }
        }
    }
}

/// Log-odds of node `s` being up given the other entries of `config`; the
/// entry at `s` itself is ignored.
pub fn log_odds(model: &IsingModel, s: usize, config: &Configuration) -> Result<f64> {
    let k = model.node_count();
    if s >= k {
        return Err(Error::contract(format!("node {s} out of range for {k} nodes")));
    }
    model.check_config(config)?;
    Ok(log_odds_unchecked(model, s, config.states()))
}

pub(crate) fn log_odds_unchecked(model: &IsingModel, s: usize, states: &[i32]) -> f64 {
    let k = model.node_count();
    let row = &model.weights()[s * k..(s + 1) * k];
    let field: f64 = model.thresholds()[s]
        + row
            .iter()
            .zip(states)
            .enumerate()
            .filter(|&(t, _)| t != s)
            .map(|(_, (w, &x))| w * x as f64)
            .sum::<f64>();
    match model.encoding() {
        Encoding::ZeroOne => model.beta() * field,
        Encoding::PlusMinusOne => 2.0 * model.beta() * field,
    }
}

pub fn conditional_prob(model: &IsingModel, s: usize, config: &Configuration) -> Result<f64> {
    log_odds(model, s, config).map(logistic)
}

pub fn logistic(mu: f64) -> f64 {
    if mu >= 0.0 {
        1.0 / (1.0 + (-mu).exp())
    } else {
        let e = mu.exp();
        e / (1.0 + e)
    }
}

/// Margin-form logistic loss `ln(1 + exp(-z * mu))` for `z` in {-1, +1}.
pub fn pseudo_log_loss(z: i32, mu: f64) -> Result<f64> {
    if z != 1 && z != -1 {
        return Err(Error::contract(format!("label must be -1 or +1, got {z}")));
    }
    Ok(softplus(-(z as f64) * mu))
}

/// As [`pseudo_log_loss`] in an arbitrary logarithm base; base 2 gives 1 at
/// zero margin.
pub fn pseudo_log_loss_base(z: i32, mu: f64, base: f64) -> Result<f64> {
    if !(base > 0.0 && base != 1.0) {
        return Err(Error::param(format!("invalid logarithm base {base}")));
    }
    Ok(pseudo_log_loss(z, mu)? / base.ln())
}

fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// Zero-one classifier: 1 iff the log-odds is strictly positive.
pub fn classify(mu: f64) -> u8 {
    u8::from(mu > 0.0)
}
