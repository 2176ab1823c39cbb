//! Two-step polychoric (tetrachoric for 2×2) correlation.
//!
//! Thresholds come from the cumulative margins, then `rho` maximizes the
//! bivariate normal cell likelihood by a coarse grid followed by
//! golden-section refinement.

use serde::{Deserialize, Serialize};

use super::normal::{bivariate_normal_cdf, norm_cdf, norm_quantile};
use crate::error::{Error, Result};

/// Largest admissible `|rho|`.
pub const RHO_BOUND: f64 = 0.999;
const SATURATION_EPS: f64 = 1e-5;
const GRID_POINTS: usize = 41;
const SEARCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    rows: usize,
    cols: usize,
    /// Row-major counts.
    counts: Vec<u64>,
    row_labels: Vec<i32>,
    col_labels: Vec<i32>,
}

impl ContingencyTable {
    pub fn new(counts: Vec<Vec<u64>>, row_labels: Vec<i32>, col_labels: Vec<i32>) -> Result<Self> {
        let rows = counts.len();
        let cols = counts.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::contract("contingency table is empty"));
        }
        if counts.iter().any(|r| r.len() != cols) {
            return Err(Error::contract("contingency table rows differ in length"));
        }
        if row_labels.len() != rows || col_labels.len() != cols {
            return Err(Error::contract("category labels do not match table shape"));
        }
        if !row_labels.windows(2).all(|w| w[0] < w[1]) || !col_labels.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::contract("category labels must be strictly increasing"));
        }
        let counts: Vec<u64> = counts.into_iter().flatten().collect();
        if counts.iter().sum::<u64>() == 0 {
            return Err(Error::EmptyData("contingency table has no observations".into()));
        }
        Ok(Self {
            rows,
            cols,
            counts,
            row_labels,
            col_labels,
        })
    }

    /// Table with categories labelled `0..r` and `0..c`.
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let r = counts.len() as i32;
        let c = counts.first().map_or(0, Vec::len) as i32;
        Self::new(counts, (0..r).collect(), (0..c).collect())
    }

    /// Cross-classifies paired codes; categories are the observed values.
    pub fn from_pairs(x: &[i32], y: &[i32]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::contract("paired codes differ in length"));
        }
        let cats = |v: &[i32]| {
            let mut c = v.to_vec();
            c.sort_unstable();
            c.dedup();
            c
        };
        let (rl, cl) = (cats(x), cats(y));
        let mut counts = vec![vec![0u64; cl.len()]; rl.len()];
        for (a, b) in x.iter().zip(y) {
            let i = rl.binary_search(a).expect("own category");
            let j = cl.binary_search(b).expect("own category");
            counts[i][j] += 1;
        }
        Self::new(counts, rl, cl)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.cols + j]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn row_labels(&self) -> &[i32] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[i32] {
        &self.col_labels
    }

    pub fn row_margins(&self) -> Vec<u64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.count(i, j)).sum())
            .collect()
    }

    pub fn col_margins(&self) -> Vec<u64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.count(i, j)).sum())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut counts = Vec::with_capacity(self.counts.len());
        for j in 0..self.cols {
            counts.extend((0..self.rows).map(|i| self.count(i, j)));
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            counts,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// Reverses the row category order (labels are negated to stay ascending).
    pub fn reverse_rows(&self) -> Self {
        let mut counts = Vec::with_capacity(self.counts.len());
        for i in (0..self.rows).rev() {
            counts.extend((0..self.cols).map(|j| self.count(i, j)));
        }
        Self {
            counts,
            row_labels: self.row_labels.iter().rev().map(|v| -v).collect(),
            ..self.clone()
        }
    }

    pub fn reverse_cols(&self) -> Self {
        self.transpose().reverse_rows().transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolychoricEstimate {
    pub rho: f64,
    /// The estimate sits at the `±0.999` bound.
    pub saturated: bool,
    /// Zero cells received the +0.5 correction.
    pub corrected: bool,
    pub row_thresholds: Vec<f64>,
    pub col_thresholds: Vec<f64>,
    pub loglik: f64,
}

struct Problem<'a> {
    rows: usize,
    cols: usize,
    counts: &'a [f64],
    a: Vec<f64>,
    b: Vec<f64>,
    pa: Vec<f64>,
    pb: Vec<f64>,
}

fn thresholds(margins: &[f64]) -> Vec<f64> {
    let total: f64 = margins.iter().sum();
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(margins.len() + 1);
    out.push(f64::NEG_INFINITY);
    for m in &margins[..margins.len() - 1] {
        acc += m;
        out.push(norm_quantile(acc / total));
    }
    out.push(f64::INFINITY);
    out
}

impl<'a> Problem<'a> {
    fn new(rows: usize, cols: usize, counts: &'a [f64]) -> Self {
        let rm: Vec<f64> = (0..rows)
            .map(|i| counts[i * cols..(i + 1) * cols].iter().sum())
            .collect();
        let cm: Vec<f64> = (0..cols)
            .map(|j| (0..rows).map(|i| counts[i * cols + j]).sum())
            .collect();
        let (a, b) = (thresholds(&rm), thresholds(&cm));
        Self {
            rows,
            cols,
            counts,
            pa: a.iter().map(|&t| norm_cdf(t)).collect(),
            pb: b.iter().map(|&t| norm_cdf(t)).collect(),
            a,
            b,
        }
    }

    fn loglik(&self, rho: f64, grid: &mut [f64]) -> f64 {
        let (r, c) = (self.rows, self.cols);
        let w = c + 1;
        // Border cells of the cumulative grid do not depend on rho.
        for i in 0..=r {
            for j in 0..=c {
                grid[i * w + j] = if i == 0 || j == 0 {
                    0.0
                } else if i == r {
                    self.pb[j]
                } else if j == c {
                    self.pa[i]
                } else {
                    bivariate_normal_cdf(self.a[i], self.b[j], rho)
                };
            }
        }
        let mut ll = 0.0;
        for i in 0..r {
            for j in 0..c {
                let n = self.counts[i * c + j];
                if n > 0.0 {
                    let p = grid[(i + 1) * w + j + 1] - grid[i * w + j + 1] - grid[(i + 1) * w + j] + grid[i * w + j];
                    ll += n * p.max(1e-300).ln();
                }
            }
        }
        ll
    }

    fn maximize(&self) -> (f64, f64) {
        let mut grid = vec![0.0; (self.rows + 1) * (self.cols + 1)];
        let mut f = |rho: f64| self.loglik(rho, &mut grid);
        let step = 2.0 * RHO_BOUND / (GRID_POINTS - 1) as f64;
        let knots: Vec<f64> = (0..GRID_POINTS).map(|i| -RHO_BOUND + i as f64 * step).collect();
        let values: Vec<f64> = knots.iter().map(|&x| f(x)).collect();
        let best = (0..GRID_POINTS).fold(0, |b, i| if values[i] > values[b] { i } else { b });
        let mut lo = knots[best.saturating_sub(1)];
        let mut hi = knots[(best + 1).min(GRID_POINTS - 1)];
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        while hi - lo > SEARCH_TOL {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = f(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = f(x1);
            }
        }
        let mid = (lo + hi) / 2.0;
        let mut cand = (mid, f(mid));
        for &edge in &[knots[0], knots[GRID_POINTS - 1]] {
            let fe = values[if edge < 0.0 { 0 } else { GRID_POINTS - 1 }];
            if fe > cand.1 {
                cand = (edge, fe);
            }
        }
        cand
    }
}

/// Picks one of the eight transpose/reversal images of the table so that
/// symmetric inputs share a single computation. Returns the image and the
/// sign relating its correlation to the original.
fn canonical(table: &ContingencyTable) -> (ContingencyTable, f64) {
    let mut best: Option<(ContingencyTable, f64)> = None;
    let key = |t: &ContingencyTable| (t.rows, t.cols, t.counts.clone());
    for transpose in [false, true] {
        let base = if transpose { table.transpose() } else { table.clone() };
        for rr in [false, true] {
            for rc in [false, true] {
                let mut t = base.clone();
                if rr {
                    t = t.reverse_rows();
                }
                if rc {
                    t = t.reverse_cols();
                }
                let sign = if rr != rc { -1.0 } else { 1.0 };
                if best.as_ref().is_none_or(|(b, _)| key(&t) < key(b)) {
                    best = Some((t, sign));
                }
            }
        }
    }
    best.expect("eight candidates")
}

fn saturated(rho: f64) -> bool {
    rho.abs() >= RHO_BOUND - SATURATION_EPS
}

/// Polychoric correlation of a cross-classification.
pub fn polychoric(table: &ContingencyTable) -> Result<PolychoricEstimate> {
    let (r, c) = table.shape();
    if r < 2 || c < 2 {
        return Err(Error::degenerate(format!(
            "polychoric needs at least 2 categories per variable, table is {r}x{c}"
        )));
    }
    if table.row_margins().contains(&0) || table.col_margins().contains(&0) {
        return Err(Error::degenerate("a margin category has zero total"));
    }
    let (canon, sign) = canonical(table);
    let (cr, cc) = canon.shape();
    let mut counts: Vec<f64> = canon.counts.iter().map(|&n| n as f64).collect();
    let (mut rho, mut loglik) = Problem::new(cr, cc, &counts).maximize();
    let mut corrected = false;
    if saturated(rho) && counts.contains(&0.0) {
        for n in counts.iter_mut().filter(|n| **n == 0.0) {
            *n = 0.5;
        }
        (rho, loglik) = Problem::new(cr, cc, &counts).maximize();
        corrected = true;
    }
    let rho = (sign * rho).clamp(-RHO_BOUND, RHO_BOUND);
    let f = |m: Vec<u64>| {
        let m: Vec<f64> = m.into_iter().map(|v| v as f64).collect();
        let t = thresholds(&m);
        t[1..t.len() - 1].to_vec()
    };
    Ok(PolychoricEstimate {
        rho,
        saturated: saturated(rho),
        corrected,
        row_thresholds: f(table.row_margins()),
        col_thresholds: f(table.col_margins()),
        loglik,
    })
}

/// Polychoric correlation of two paired code vectors.
pub fn polychoric_pairs(x: &[i32], y: &[i32]) -> Result<PolychoricEstimate> {
    polychoric(&ContingencyTable::from_pairs(x, y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand_distr::{Distribution, StandardNormal};
    use std::f64::consts::PI;

    #[test]
    fn independence_gives_zero() {
        let t = ContingencyTable::from_counts(vec![vec![25, 25], vec![25, 25]]).unwrap();
        let e = polychoric(&t).unwrap();
        assert!(e.rho.abs() < 1e-6, "{}", e.rho);
        assert!(!e.saturated && !e.corrected);
    }

    #[test]
    fn balanced_tetrachoric_closed_form() {
        let t = ContingencyTable::from_counts(vec![vec![200, 100], vec![100, 200]]).unwrap();
        let e = polychoric(&t).unwrap();
        let expected = (2.0 * PI * (1.0 / 3.0 - 0.25)).sin();
        assert!((e.rho - expected).abs() < 1e-7, "{}", e.rho);
        assert!((e.rho - 0.5).abs() < 1e-7);
        assert_eq!(e.row_thresholds, vec![0.0]);
    }

    #[test]
    fn recovers_generating_correlation_4x2() {
        let mut rng = seeded(404);
        let rho: f64 = 0.7;
        let cuts = [-0.5, 0.0, 0.8];
        let mut counts = vec![vec![0u64; 2]; 4];
        for _ in 0..100_000 {
            let z1: f64 = StandardNormal.sample(&mut rng);
            let z2: f64 = StandardNormal.sample(&mut rng);
            let y = rho * z1 + (1.0 - rho * rho).sqrt() * z2;
            let i = cuts.iter().filter(|&&c| z1 > c).count();
            let j = usize::from(y > 0.0);
            counts[i][j] += 1;
        }
        let e = polychoric(&ContingencyTable::from_counts(counts).unwrap()).unwrap();
        assert!((e.rho - 0.7).abs() < 0.02, "{}", e.rho);
        for (t, c) in e.row_thresholds.iter().zip(cuts) {
            assert!((t - c).abs() < 0.02);
        }
    }

    #[test]
    fn perfect_association_saturates() {
        let t = ContingencyTable::from_counts(vec![vec![50, 0], vec![0, 50]]).unwrap();
        let e = polychoric(&t).unwrap();
        assert_eq!(e.rho, RHO_BOUND);
        assert!(e.saturated && e.corrected);
        let e = polychoric(&t.reverse_cols()).unwrap();
        assert_eq!(e.rho, -RHO_BOUND);
    }

    #[test]
    fn correction_only_when_saturating() {
        // One empty cell but moderate association: no correction.
        let t = ContingencyTable::from_counts(vec![vec![30, 20, 0], vec![10, 25, 15]]).unwrap();
        let e = polychoric(&t).unwrap();
        assert!(!e.corrected && !e.saturated);
        assert!(e.rho > 0.3 && e.rho < 0.95);
    }

    #[test]
    fn symmetries_are_exact() {
        let t =
            ContingencyTable::from_counts(vec![vec![12, 7, 3], vec![5, 11, 9], vec![2, 6, 14], vec![1, 3, 8]]).unwrap();
        let e = polychoric(&t).unwrap().rho;
        assert_eq!(polychoric(&t.transpose()).unwrap().rho, e);
        assert_eq!(polychoric(&t.reverse_rows()).unwrap().rho, -e);
        assert_eq!(polychoric(&t.reverse_cols()).unwrap().rho, -e);
    }

    #[test]
    fn degenerate_margins_rejected() {
        let t = ContingencyTable::from_counts(vec![vec![5, 5]]).unwrap();
        assert!(polychoric(&t).unwrap_err().is_degenerate());
        let t = ContingencyTable::from_counts(vec![vec![5, 0], vec![7, 0]]).unwrap();
        assert!(polychoric(&t).unwrap_err().is_degenerate());
        assert!(polychoric_pairs(&[1, 1, 1], &[0, 1, 0]).unwrap_err().is_degenerate());
    }

    #[test]
    fn pairs_use_observed_categories() {
        let t = ContingencyTable::from_pairs(&[3, 1, 3, 5], &[-1, 1, 1, 1]).unwrap();
        assert_eq!(t.shape(), (3, 2));
        assert_eq!(t.row_labels(), &[1, 3, 5]);
        assert_eq!(t.count(1, 0), 1);
        assert_eq!(t.count(1, 1), 1);
        assert_eq!(t.total(), 4);
    }
}
