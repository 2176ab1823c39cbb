use serde::{Deserialize, Serialize};

use super::correlation::t_two_sided;
use super::descriptive::{mean, midranks};
use super::normal::norm_cdf;
use crate::error::{Error, Result};

/// Largest number of nonzero differences for which the automatic Wilcoxon
/// test enumerates the exact null distribution.
pub const WILCOXON_EXACT_LIMIT: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestMethod {
    WilcoxonExact,
    WilcoxonNormal,
    StudentT,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    /// V for the signed-rank test, T for the t-test.
    pub statistic: f64,
    pub p_value: f64,
    /// CLES for the signed-rank test, Cohen's D for the t-test.
    pub effect_size: f64,
    /// Pairs with a nonzero difference, or the combined group size.
    pub n: usize,
    pub method: TestMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub df: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WilcoxonMode {
    /// Exact up to [`WILCOXON_EXACT_LIMIT`] pairs, normal approximation above.
    #[default]
    Auto,
    Exact,
    Normal,
}

/// Probability that `a_i < b_i` over pairs, counting ties as one half.
pub fn cles_paired(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::contract("paired inputs differ in length"));
    }
    if a.is_empty() {
        return Err(Error::contract("paired inputs are empty"));
    }
    let score: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            if x < y {
                1.0
            } else if x == y {
                0.5
            } else {
                0.0
            }
        })
        .sum();
    Ok(score / a.len() as f64)
}

pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<TestResult> {
    wilcoxon_signed_rank_with(a, b, WilcoxonMode::Auto)
}

pub fn wilcoxon_signed_rank_with(a: &[f64], b: &[f64], mode: WilcoxonMode) -> Result<TestResult> {
    let cles = cles_paired(a, b)?;
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    if diffs.is_empty() {
        return Err(Error::degenerate("all paired differences are zero"));
    }
    let n = diffs.len();
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = midranks(&abs);
    let v: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let exact = match mode {
        WilcoxonMode::Auto => n <= WILCOXON_EXACT_LIMIT,
        WilcoxonMode::Exact => true,
        WilcoxonMode::Normal => false,
    };
    let (p_value, method) = if exact {
        (exact_p(&ranks, v)?, TestMethod::WilcoxonExact)
    } else {
        (normal_p(&ranks, v), TestMethod::WilcoxonNormal)
    };
    Ok(TestResult {
        statistic: v,
        p_value,
        effect_size: cles,
        n,
        method,
        df: None,
    })
}

/// Two-sided exact p-value: counts sign assignments over doubled (integer)
/// midranks by dynamic programming.
fn exact_p(ranks: &[f64], v: f64) -> Result<f64> {
    if ranks.len() > 63 {
        return Err(Error::param("exact signed-rank enumeration supports at most 63 pairs"));
    }
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max: usize = doubled.iter().sum();
    let mut ways = vec![0u64; max + 1];
    ways[0] = 1;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            if ways[s] > 0 {
                ways[s + r] += ways[s];
            }
        }
        reach += r;
    }
    let target = (2.0 * v).round() as usize;
    let total = 2f64.powi(ranks.len() as i32);
    let lower: u64 = ways[..=target].iter().sum();
    let upper: u64 = ways[target..].iter().sum();
    let tail = lower.min(upper) as f64 / total;
    Ok((2.0 * tail).min(1.0))
}

fn normal_p(ranks: &[f64], v: f64) -> f64 {
    let n = ranks.len() as f64;
    let mu = n * (n + 1.0) / 4.0;
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut ties = 0.0;
    for g in sorted.chunk_by(|x, y| x == y) {
        let t = g.len() as f64;
        ties += t * t * t - t;
    }
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - ties / 48.0;
    let z = ((v - mu).abs() - 0.5).max(0.0) / var.sqrt();
    (2.0 * norm_cdf(-z)).min(1.0)
}

/// Pooled-variance two-sample t-test with Cohen's D as effect size.
pub fn t_test_ind(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::degenerate("each group needs at least 2 observations"));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let ss = |x: &[f64], m: f64| x.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
    let df = na + nb - 2.0;
    let pooled = ((ss(a, ma) + ss(b, mb)) / df).sqrt();
    if pooled == 0.0 {
        return Err(Error::degenerate("pooled variance is zero"));
    }
    let t = (ma - mb) / (pooled * (1.0 / na + 1.0 / nb).sqrt());
    Ok(TestResult {
        statistic: t,
        p_value: t_two_sided(t, df),
        effect_size: (ma - mb) / pooled,
        n: a.len() + b.len(),
        method: TestMethod::StudentT,
        df: Some(df),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;
    use rand_distr::{Distribution, Normal};

    /// Brute force over every sign assignment.
    fn enumerate_p(ranks: &[f64], v: f64) -> f64 {
        let n = ranks.len();
        let (mut lo, mut hi) = (0u64, 0u64);
        for mask in 0u64..1 << n {
            let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
            if s <= v + 1e-9 {
                lo += 1;
            }
            if s >= v - 1e-9 {
                hi += 1;
            }
        }
        (2.0 * lo.min(hi) as f64 / (1u64 << n) as f64).min(1.0)
    }

    #[test]
    fn wilcoxon_examples() {
        let r = wilcoxon_signed_rank(&[1.0, 2.0, 3.0], &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(r.statistic, 6.0);
        assert_eq!(r.p_value, 0.25);
        assert_eq!(r.method, TestMethod::WilcoxonExact);
        let r = wilcoxon_signed_rank(&[1.0, 5.0, 5.0], &[0.0, 5.0, 5.0]).unwrap();
        assert_eq!((r.statistic, r.p_value, r.n), (1.0, 1.0, 1));
        assert!(wilcoxon_signed_rank(&[1.0, 2.0], &[1.0, 2.0])
            .unwrap_err()
            .is_degenerate());
    }

    #[test]
    fn exact_matches_brute_force_with_ties() {
        let mut rng = seeded(12);
        for n in 1..=12 {
            for _ in 0..5 {
                // small integer differences produce many ties
                let a: Vec<f64> = (0..n).map(|_| rng.random_range(-3..=3) as f64).collect();
                let b = vec![0.0; n];
                let Ok(r) = wilcoxon_signed_rank(&a, &b) else { continue };
                let d: Vec<f64> = a.iter().filter(|x| **x != 0.0).map(|x| x.abs()).collect();
                assert_eq!(r.p_value, enumerate_p(&midranks(&d), r.statistic));
            }
        }
    }

    #[test]
    fn normal_approximation_tracks_exact() {
        let mut rng = seeded(30);
        let a: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.4)).collect();
        let b = vec![0.0; 30];
        let approx = wilcoxon_signed_rank(&a, &b).unwrap();
        assert_eq!(approx.method, TestMethod::WilcoxonNormal);
        let exact = wilcoxon_signed_rank_with(&a, &b, WilcoxonMode::Exact).unwrap();
        assert!((approx.p_value - exact.p_value).abs() < 0.01);
        let sub = wilcoxon_signed_rank_with(&a[..15], &b[..15], WilcoxonMode::Exact).unwrap();
        let ranks = midranks(&a[..15].iter().map(|x| x.abs()).collect::<Vec<_>>());
        assert_eq!(sub.p_value, enumerate_p(&ranks, sub.statistic));
    }

    #[test]
    fn cles_examples() {
        assert_eq!(cles_paired(&[0.0, 1.0], &[1.0, 2.0]).unwrap(), 1.0);
        assert_eq!(cles_paired(&[3.0, 4.0], &[3.0, 4.0]).unwrap(), 0.5);
        let a = [0.0, 0.0, 1.0, 0.0];
        let b = [1.0, 1.0, 0.0, 0.0];
        assert_eq!(cles_paired(&a, &b).unwrap(), 0.625);
        assert!(cles_paired(&[], &[]).is_err());
    }

    #[test]
    fn t_test_examples() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let r = t_test_ind(&a, &a).unwrap();
        assert_eq!((r.statistic, r.effect_size, r.p_value), (0.0, 0.0, 1.0));
        assert!(t_test_ind(&[0.0, 0.0], &[1.0, 1.0]).unwrap_err().is_degenerate());
        assert!(t_test_ind(&[0.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn t_test_effect_size_monte_carlo() {
        let mut rng = seeded(99);
        let a: Vec<f64> = Normal::new(0.0, 1.0)
            .unwrap()
            .sample_iter(&mut rng)
            .take(1000)
            .collect();
        let b: Vec<f64> = Normal::new(0.5, 1.0)
            .unwrap()
            .sample_iter(&mut rng)
            .take(1000)
            .collect();
        let r = t_test_ind(&b, &a).unwrap();
        assert!((r.effect_size - 0.5).abs() < 0.1);
        assert!(r.statistic > 0.0 && r.p_value < 1e-6);
        assert_eq!(r.df, Some(1998.0));
    }

    #[test]
    fn t_test_textbook_value() {
        // means 3 and 5, both sample variances 2.5, n = 5 each: T = -2, df = 8
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [3.0, 4.0, 5.0, 6.0, 7.0];
        let r = t_test_ind(&a, &b).unwrap();
        assert!((r.statistic + 2.0).abs() < 1e-12);
        assert!((r.effect_size + 2.0 / 2.5f64.sqrt()).abs() < 1e-12);
        assert!((r.p_value - 0.080_516_8).abs() < 1e-6);
    }
}
