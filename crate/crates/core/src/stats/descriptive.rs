//! Moments, ranks, standardization and simple regression.
//!
//! Standard deviations use the sample (n - 1) convention unless the name says
//! otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn sum_sq_dev(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum()
}

pub fn sample_sd(x: &[f64]) -> f64 {
    (sum_sq_dev(x) / (x.len() as f64 - 1.0)).sqrt()
}

pub fn population_sd(x: &[f64]) -> f64 {
    (sum_sq_dev(x) / x.len() as f64).sqrt()
}

pub(crate) fn is_constant(x: &[f64]) -> bool {
    x.windows(2).all(|w| w[0] == w[1])
}

pub fn zscore(x: &[f64]) -> Result<Vec<f64>> {
    if x.len() < 2 {
        return Err(Error::degenerate("standardization needs at least 2 values"));
    }
    if is_constant(x) {
        return Err(Error::degenerate("cannot standardize a constant vector"));
    }
    let m = mean(x);
    let sd = sample_sd(x);
    Ok(x.iter().map(|v| (v - m) / sd).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
}

impl LinearFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Least-squares line of `y` on `x`.
pub fn ols_simple(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::contract("regression inputs differ in length"));
    }
    if x.len() < 2 {
        return Err(Error::degenerate("regression needs at least 2 points"));
    }
    if is_constant(x) {
        return Err(Error::degenerate("regressor is constant"));
    }
    let (mx, my) = (mean(x), mean(y));
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    Ok(LinearFit {
        intercept: my - slope * mx,
        slope,
    })
}

/// Ranks starting at 1, ties receive the mean of their positions.
pub fn midranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Sample quantile with linear interpolation between order statistics
/// (the common "type 7" definition).
pub fn quantile(x: &[f64], q: f64) -> f64 {
    assert!(!x.is_empty(), "quantile of empty slice");
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (s.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    s[lo] + (pos - lo as f64) * (s[hi] - s[lo])
}

pub fn median(x: &[f64]) -> f64 {
    quantile(x, 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    #[test]
    fn zscore_examples() {
        assert_eq!(zscore(&[1.0, 2.0, 3.0]).unwrap(), vec![-1.0, 0.0, 1.0]);
        let z = zscore(&[3.0, 7.0, -1.0, 4.5]).unwrap();
        let again = zscore(&z).unwrap();
        for (a, b) in z.iter().zip(&again) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(mean(&z).abs() < 1e-12);
        assert!((sample_sd(&z) - 1.0).abs() < 1e-12);
        assert!(zscore(&[5.0, 5.0]).is_err());
        assert!(zscore(&[5.0]).is_err());
    }

    #[test]
    fn ols_examples() {
        let x = [0.0, 1.0, 2.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let f = ols_simple(&x, &y).unwrap();
        assert!((f.intercept - 1.0).abs() < 1e-12 && (f.slope - 2.0).abs() < 1e-12);
        let f = ols_simple(&x, &[3.0; 4]).unwrap();
        assert_eq!(f.slope, 0.0);
        assert!(ols_simple(&[1.0, 1.0], &[0.0, 2.0]).is_err());
    }

    #[test]
    fn ols_matches_normal_equations() {
        let mut rng = seeded(21);
        let x: Vec<f64> = (0..50).map(|_| rng.random_range(-2.0..2.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| 0.3 - 1.2 * v + rng.random_range(-1.0..1.0)).collect();
        let f = ols_simple(&x, &y).unwrap();
        // [n, sum x; sum x, sum x^2] [a; b] = [sum y; sum xy] by Cramer's rule
        let n = x.len() as f64;
        let sx: f64 = x.iter().sum();
        let sxx: f64 = x.iter().map(|v| v * v).sum();
        let sy: f64 = y.iter().sum();
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let det = n * sxx - sx * sx;
        let a = (sy * sxx - sx * sxy) / det;
        let b = (n * sxy - sx * sy) / det;
        assert!((f.intercept - a).abs() < 1e-10 && (f.slope - b).abs() < 1e-10);
        let resid_dot_x: f64 = x.iter().zip(&y).map(|(xi, yi)| (yi - f.predict(*xi)) * xi).sum();
        assert!(resid_dot_x.abs() < 1e-10);
    }

    #[test]
    fn midranks_and_quantiles() {
        assert_eq!(midranks(&[10.0, 20.0, 10.0, 5.0]), vec![2.5, 4.0, 2.5, 1.0]);
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(median(&x), 2.5);
        assert_eq!(quantile(&x, 0.25), 1.75);
        assert_eq!(quantile(&x, 1.0), 4.0);
    }
}
