//! Correlation networks estimated from samples and their shortest-path
//! descriptives.

mod paths;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::SampleMatrix;
use crate::stats::{polychoric_pairs, PolychoricEstimate};

pub use paths::{
    aspl, closeness, describe, shortest_paths, shortest_paths_with, DescriptiveReport, DistanceMatrix, EdgeTransform,
    ABSENT_EDGE,
};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub sample_size: usize,
    pub estimator: String,
    /// Pairs `(i, j)`, `i < j`, whose estimate hit the correlation bound.
    #[serde(default)]
    pub saturated: Vec<(usize, usize)>,
    /// Pairs whose table received the zero-cell correction.
    #[serde(default)]
    pub corrected: Vec<(usize, usize)>,
}

/// Labelled symmetric correlation matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationNetwork {
    labels: Vec<String>,
    matrix: Vec<Vec<f64>>,
    #[serde(default)]
    provenance: Provenance,
}

impl CorrelationNetwork {
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_provenance(labels, matrix, Provenance::default())
    }

    pub fn with_provenance(labels: Vec<String>, matrix: Vec<Vec<f64>>, provenance: Provenance) -> Result<Self> {
        let k = labels.len();
        if k < 2 {
            return Err(Error::contract("a network needs at least 2 nodes"));
        }
        if matrix.len() != k || matrix.iter().any(|r| r.len() != k) {
            return Err(Error::contract(format!("matrix is not {k}x{k}")));
        }
        for i in 0..k {
            if matrix[i][i] != 0.0 {
                return Err(Error::contract(format!("diagonal entry {i} is nonzero")));
            }
            for j in 0..i {
                let w = matrix[i][j];
                if !(-1.0..=1.0).contains(&w) {
                    return Err(Error::contract(format!("entry ({i},{j}) = {w} outside [-1, 1]")));
                }
                if w != matrix[j][i] {
                    return Err(Error::contract(format!("matrix asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self {
            labels,
            matrix,
            provenance,
        })
    }

    /// Nodes labelled `n0, n1, ...`.
    pub fn unlabelled(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..matrix.len()).map(|i| format!("n{i}")).collect();
        Self::new(labels, matrix)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Copy with edge `(i, j)` set to `w`.
    pub fn with_weight(&self, i: usize, j: usize, w: f64) -> Result<Self> {
        let mut m = self.matrix.clone();
        m[i][j] = w;
        m[j][i] = w;
        Self::with_provenance(self.labels.clone(), m, self.provenance.clone())
    }

    /// Copy with nodes reordered so that new node `n` is old node `order[n]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let k = self.node_count();
        let m = (0..k)
            .map(|a| (0..k).map(|b| self.matrix[order[a]][order[b]]).collect())
            .collect();
        let labels = order.iter().map(|&o| self.labels[o].clone()).collect();
        Self::new(labels, m)
    }

    /// `i,j,weight,flag` for every pair `i < j`; the flag lists saturation,
    /// correction, negative sign or absence separated by `;`.
    pub fn write_edge_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        w.write_record(["i", "j", "weight", "flag"])?;
        let k = self.node_count();
        for i in 0..k {
            for j in i + 1..k {
                let weight = self.matrix[i][j];
                let mut flags = Vec::new();
                if self.provenance.saturated.contains(&(i, j)) {
                    flags.push("saturated");
                }
                if self.provenance.corrected.contains(&(i, j)) {
                    flags.push("corrected");
                }
                if weight.abs() < ABSENT_EDGE {
                    flags.push("absent");
                } else if weight < 0.0 {
                    flags.push("negative");
                }
                w.write_record([i.to_string(), j.to_string(), weight.to_string(), flags.join(";")])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Self = serde_json::from_str(text)?;
        Self::with_provenance(raw.labels, raw.matrix, raw.provenance)
    }
}

/// Codes of one column restricted to `rows`, which are assumed complete.
pub(crate) fn column_codes(samples: &SampleMatrix, col: usize, rows: &[usize]) -> Vec<i32> {
    rows.iter()
        .map(|&r| samples.get(r, col).expect("complete row"))
        .collect()
}

/// Pairwise polychoric network over the given columns after casewise
/// deletion on those columns.
pub fn correlation_network(samples: &SampleMatrix, element_columns: &[usize]) -> Result<CorrelationNetwork> {
    let rows = samples.complete_rows(element_columns);
    if rows.is_empty() {
        return Err(Error::EmptyData("no complete rows for the selected columns".into()));
    }
    let codes: Vec<Vec<i32>> = element_columns
        .iter()
        .map(|&c| column_codes(samples, c, &rows))
        .collect();
    network_from_codes(samples, element_columns, &codes)
}

pub(crate) fn network_from_codes(
    samples: &SampleMatrix,
    element_columns: &[usize],
    codes: &[Vec<i32>],
) -> Result<CorrelationNetwork> {
    let labels: Vec<String> = element_columns
        .iter()
        .map(|&c| samples.column(c).label.clone())
        .collect();
    network_from_labelled_codes(labels, codes)
}

/// Polychoric network over complete code columns, one label per column.
pub fn network_from_labelled_codes(labels: Vec<String>, codes: &[Vec<i32>]) -> Result<CorrelationNetwork> {
    if labels.len() != codes.len() {
        return Err(Error::contract(format!(
            "{} labels for {} columns",
            labels.len(),
            codes.len()
        )));
    }
    for (label, col) in labels.iter().zip(codes) {
        if col.iter().all(|v| *v == col[0]) {
            return Err(Error::degenerate(format!(
                "column '{label}' has a single observed category"
            )));
        }
    }
    let k = codes.len();
    let mut matrix = vec![vec![0.0; k]; k];
    let mut provenance = Provenance {
        sample_size: codes.first().map_or(0, Vec::len),
        estimator: "polychoric".into(),
        ..Provenance::default()
    };
    for i in 0..k {
        for j in i + 1..k {
            let PolychoricEstimate {
                rho,
                saturated,
                corrected,
                ..
            } = polychoric_pairs(&codes[i], &codes[j])?;
            matrix[i][j] = rho;
            matrix[j][i] = rho;
            if saturated {
                provenance.saturated.push((i, j));
            }
            if corrected {
                provenance.corrected.push((i, j));
            }
        }
    }
    CorrelationNetwork::with_provenance(labels, matrix, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::{sample_exact, Column, ColumnRole, Encoding, IsingModel};
    use crate::rng::seeded;
    use rand::Rng;

    fn binary_matrix(cols: Vec<Vec<i32>>) -> SampleMatrix {
        let n = cols[0].len();
        let columns = (0..cols.len())
            .map(|c| Column::new(format!("c{c}"), ColumnRole::Element, vec![-1, 1]))
            .collect();
        let cells = (0..n).flat_map(|r| cols.iter().map(move |c| Some(c[r]))).collect();
        SampleMatrix::new(columns, cells).unwrap()
    }

    #[test]
    fn perfectly_correlated_columns_saturate() {
        let x: Vec<i32> = (0..200).map(|i| if i % 3 == 0 { 1 } else { -1 }).collect();
        let s = binary_matrix(vec![x.clone(), x]);
        let net = correlation_network(&s, &[0, 1]).unwrap();
        assert_eq!(net.weight(0, 1), 0.999);
        assert_eq!(net.provenance().saturated, vec![(0, 1)]);
    }

    #[test]
    fn independent_columns_give_small_edges() {
        let mut rng = seeded(10);
        let cols = (0..4)
            .map(|_| (0..10_000).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect())
            .collect();
        let net = correlation_network(&binary_matrix(cols), &[0, 1, 2, 3]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!(net.weight(i, j).abs() < 0.05);
            }
        }
    }

    #[test]
    fn ferromagnetic_model_gives_positive_edges() {
        let k = 5;
        let mut rng = seeded(3);
        let mut w = vec![0.0; k * k];
        for i in 0..k {
            for j in i + 1..k {
                let v = rng.random_range(0.1..0.4);
                w[i * k + j] = v;
                w[j * k + i] = v;
            }
        }
        let model = IsingModel::new(vec![0.0; k], w, 1.0, Encoding::PlusMinusOne).unwrap();
        let s = sample_exact(&model, 5000, &mut rng).unwrap();
        let net = correlation_network(&s, &(0..k).collect::<Vec<_>>()).unwrap();
        for i in 0..k {
            for j in i + 1..k {
                assert!(net.weight(i, j) > 0.0);
            }
        }
    }

    #[test]
    fn constant_column_is_named() {
        let s = binary_matrix(vec![vec![1, -1, 1, -1], vec![1, 1, 1, 1]]);
        let err = correlation_network(&s, &[0, 1]).unwrap_err();
        assert!(err.is_degenerate());
        assert!(err.to_string().contains("c1"));
    }

    #[test]
    fn validation_and_serialization() {
        assert!(CorrelationNetwork::unlabelled(vec![vec![0.0, 0.5], vec![0.4, 0.0]]).is_err());
        assert!(CorrelationNetwork::unlabelled(vec![vec![0.1, 0.5], vec![0.5, 0.0]]).is_err());
        assert!(CorrelationNetwork::unlabelled(vec![vec![0.0, 1.5], vec![1.5, 0.0]]).is_err());
        let net = CorrelationNetwork::unlabelled(vec![vec![0.0, 0.5, -0.2], vec![0.5, 0.0, 0.0], vec![-0.2, 0.0, 0.0]])
            .unwrap();
        let back = CorrelationNetwork::from_json(&net.to_json().unwrap()).unwrap();
        assert_eq!(back, net);
        let mut buf = Vec::new();
        net.write_edge_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "i,j,weight,flag\n0,1,0.5,\n0,2,-0.2,negative\n1,2,0,absent\n"
        );
    }
}
