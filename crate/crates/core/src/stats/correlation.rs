use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::descriptive::{is_constant, mean, midranks, population_sd};
use super::normal::{norm_pdf, norm_quantile};
use crate::error::{Error, Result};

/// A correlation with its two-sided p-value from the t transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub r: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Two-sided p-value of `t` under Student's t with `df` degrees of freedom.
pub(crate) fn t_two_sided(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation> {
    if x.len() != y.len() {
        return Err(Error::contract("correlation inputs differ in length"));
    }
    if x.len() < 3 {
        return Err(Error::degenerate("correlation needs at least 3 pairs"));
    }
    if is_constant(x) || is_constant(y) {
        return Err(Error::degenerate("correlation undefined for a constant vector"));
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let df = (x.len() - 2) as f64;
    let p_value = if r.abs() == 1.0 {
        0.0
    } else {
        t_two_sided(r * (df / (1.0 - r * r)).sqrt(), df)
    };
    Ok(Correlation { r, p_value, n: x.len() })
}

/// Rank correlation: Pearson on midranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Correlation> {
    pearson(&midranks(x), &midranks(y))
}

fn split_means(continuous: &[f64], binary: &[u8]) -> Result<(f64, f64, f64)> {
    if continuous.len() != binary.len() {
        return Err(Error::contract("biserial inputs differ in length"));
    }
    if let Some(b) = binary.iter().find(|&&b| b > 1) {
        return Err(Error::contract(format!("binary variable has code {b}")));
    }
    let n1 = binary.iter().filter(|&&b| b == 1).count();
    let n = binary.len();
    if n1 == 0 || n1 == n {
        return Err(Error::degenerate("binary variable has a single class"));
    }
    if is_constant(continuous) {
        return Err(Error::degenerate("continuous variable is constant"));
    }
    let (mut s1, mut s0) = (0.0, 0.0);
    for (&x, &b) in continuous.iter().zip(binary) {
        if b == 1 {
            s1 += x;
        } else {
            s0 += x;
        }
    }
    let m1 = s1 / n1 as f64;
    let m0 = s0 / (n - n1) as f64;
    Ok((m1, m0, n1 as f64 / n as f64))
}

/// Biserial correlation between a continuous score and a dichotomized
/// latent normal variable: `((M1 - M0) / s) * p q / phi(Phi^-1(p))` with `s`
/// the population standard deviation of the score. Clamped to [-1, 1].
pub fn biserial(continuous: &[f64], binary: &[u8]) -> Result<f64> {
    let (m1, m0, p) = split_means(continuous, binary)?;
    let q = 1.0 - p;
    let s = population_sd(continuous);
    let r = (m1 - m0) / s * p * q / norm_pdf(norm_quantile(p));
    Ok(r.clamp(-1.0, 1.0))
}

/// Point-biserial correlation, i.e. Pearson with the 0/1 variable.
pub fn point_biserial(continuous: &[f64], binary: &[u8]) -> Result<f64> {
    let (m1, m0, p) = split_means(continuous, binary)?;
    let s = population_sd(continuous);
    Ok(((m1 - m0) / s * (p * (1.0 - p)).sqrt()).clamp(-1.0, 1.0))
}
