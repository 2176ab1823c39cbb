//! Base graphs, weighted graphs, and the generators that produce them.

mod generators;
mod registry;
mod weights;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generators::{
    gen_erdos_renyi, gen_preferential_attachment, gen_small_world, grow_preferential, rewire_lattice, AlgorithmConfig,
    ErdosRenyi, GraphGenerator, IntRange, PreferentialAttachment, RealRange, SmallWorld,
};
pub use registry::{GeneratorRegistry, WeightRegistry};
pub use weights::{assign_weights, NormalWeights, ParetoWeights, UniformWeights, WeightConfig, WeightDistribution};

/// Undirected simple graph. Edges are stored as `(lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnweightedGraph {
    node_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl UnweightedGraph {
    pub fn new(node_count: usize) -> Result<Self> {
        if node_count < 2 {
            return Err(Error::param(format!("graph needs at least 2 nodes, got {node_count}")));
        }
        Ok(Self {
            node_count,
            edges: BTreeSet::new(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Adds the edge `{a, b}`. Returns false for self-loops and existing edges.
    pub fn add_edge(&mut self, a: usize, b: usize) -> bool {
        assert!(a < self.node_count && b < self.node_count, "node out of range");
        if a == b {
            return false;
        }
        self.edges.insert((a.min(b), a.max(b)))
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) -> bool {
        self.edges.remove(&(a.min(b), a.max(b)))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == node || b == node).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }
}

/// Symmetric weight matrix with zero diagonal; absent edges have weight zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    node_count: usize,
    weights: Vec<f64>,
}

impl WeightedGraph {
    pub fn zeros(node_count: usize) -> Self {
        Self {
            node_count,
            weights: vec![0.0; node_count * node_count],
        }
    }

    /// Builds from a full row-major matrix, checking symmetry and the diagonal.
    pub fn from_matrix(node_count: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != node_count * node_count {
            return Err(Error::contract(format!(
                "weight matrix has {} entries, expected {}",
                weights.len(),
                node_count * node_count
            )));
        }
        for i in 0..node_count {
            if weights[i * node_count + i] != 0.0 {
                return Err(Error::contract(format!("nonzero diagonal at node {i}")));
            }
            for j in (i + 1)..node_count {
                if weights[i * node_count + j] != weights[j * node_count + i] {
                    return Err(Error::contract(format!("asymmetric weight at ({i},{j})")));
                }
            }
        }
        Ok(Self { node_count, weights })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.node_count + j]
    }

    pub fn set_weight(&mut self, i: usize, j: usize, w: f64) {
        assert_ne!(i, j, "diagonal weights are fixed at zero");
        self.weights[i * self.node_count + j] = w;
        self.weights[j * self.node_count + i] = w;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn into_matrix(self) -> Vec<f64> {
        self.weights
    }

    pub fn nonzero_edge_count(&self) -> usize {
        (0..self.node_count)
            .flat_map(|i| ((i + 1)..self.node_count).map(move |j| (i, j)))
            .filter(|&(i, j)| self.weight(i, j) != 0.0)
            .count()
    }
}
