use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::CorrelationNetwork;
use crate::error::{Error, Result};

/// Edges whose absolute weight falls below this are treated as missing.
pub const ABSENT_EDGE: f64 = 1e-6;

/// How correlations become step costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeTransform {
    /// Cost `1/|w|`; negative edges are recorded.
    #[default]
    Absolute,
    /// Cost `1/w`; any negative edge is an error.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub distances: Vec<Vec<f64>>,
    /// Pairs `(i, j)`, `i < j`, whose negative weight entered as `|w|`.
    pub negative_edges: Vec<(usize, usize)>,
    pub connected: bool,
}

impl DistanceMatrix {
    pub fn node_count(&self) -> usize {
        self.distances.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.distances[i][j]
    }

    fn require_connected(&self) -> Result<()> {
        if self.connected {
            Ok(())
        } else {
            Err(Error::Disconnected("some node pairs have no connecting path".into()))
        }
    }

    /// Mean distance over unordered pairs.
    pub fn aspl(&self) -> Result<f64> {
        self.require_connected()?;
        let k = self.node_count();
        let mut total = 0.0;
        for i in 0..k {
            for j in i + 1..k {
                total += self.distances[i][j];
            }
        }
        Ok(total / (k * (k - 1) / 2) as f64)
    }

    /// Inverse of each node's summed distance to all others.
    pub fn closeness(&self) -> Result<Vec<f64>> {
        self.require_connected()?;
        Ok(self.distances.iter().map(|row| 1.0 / row.iter().sum::<f64>()).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(cost: &[Vec<f64>], source: usize) -> Vec<f64> {
    let k = cost.len();
    let mut dist = vec![f64::INFINITY; k];
    let mut done = vec![false; k];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry(0.0, source));
    while let Some(Entry(d, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for v in 0..k {
            let c = cost[u][v];
            if !done[v] && c.is_finite() {
                let nd = d + c;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Entry(nd, v));
                }
            }
        }
    }
    dist
}

pub fn shortest_paths(network: &CorrelationNetwork) -> DistanceMatrix {
    shortest_paths_with(network, EdgeTransform::Absolute).expect("absolute transform accepts every network")
}

pub fn shortest_paths_with(network: &CorrelationNetwork, transform: EdgeTransform) -> Result<DistanceMatrix> {
    let k = network.node_count();
    let mut negative_edges = Vec::new();
    let mut cost = vec![vec![f64::INFINITY; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let w = network.weight(i, j);
            if w.abs() < ABSENT_EDGE {
                continue;
            }
            if w < 0.0 {
                if transform == EdgeTransform::Strict {
                    return Err(Error::param(format!(
                        "edge {}-{} is negative ({w}) under the strict transform",
                        network.labels()[i],
                        network.labels()[j]
                    )));
                }
                negative_edges.push((i, j));
            }
            cost[i][j] = 1.0 / w.abs();
            cost[j][i] = cost[i][j];
        }
    }
    let mut distances: Vec<Vec<f64>> = (0..k).map(|s| dijkstra(&cost, s)).collect();
    // Each direction is computed independently; keep the matrix exactly symmetric.
    for i in 0..k {
        for j in i + 1..k {
            let d = distances[i][j].min(distances[j][i]);
            distances[i][j] = d;
            distances[j][i] = d;
        }
    }
    let connected = distances.iter().flatten().all(|d| d.is_finite());
    Ok(DistanceMatrix {
        distances,
        negative_edges,
        connected,
    })
}

pub fn aspl(network: &CorrelationNetwork) -> Result<f64> {
    shortest_paths(network).aspl()
}

pub fn closeness(network: &CorrelationNetwork) -> Result<Vec<f64>> {
    shortest_paths(network).closeness()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveReport {
    pub aspl: f64,
    pub closeness: Vec<f64>,
    pub distances: Vec<Vec<f64>>,
    pub negative_edges: Vec<(usize, usize)>,
}

pub fn describe(network: &CorrelationNetwork) -> Result<DescriptiveReport> {
    let dm = shortest_paths(network);
    Ok(DescriptiveReport {
        aspl: dm.aspl()?,
        closeness: dm.closeness()?,
        negative_edges: dm.negative_edges,
        distances: dm.distances,
    })
}
