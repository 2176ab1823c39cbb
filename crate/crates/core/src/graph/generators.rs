use std::fmt::Debug;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::UnweightedGraph;
use crate::error::{Error, Result};

/// Inclusive integer range; draws are uniform over `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange {
    pub lo: usize,
    pub hi: usize,
}

impl IntRange {
    pub const fn new(lo: usize, hi: usize) -> Self {
        Self { lo, hi }
    }

    pub const fn fixed(v: usize) -> Self {
        Self { lo: v, hi: v }
    }

    fn check(&self, name: &str, min: usize, max: usize) -> Result<()> {
        if self.lo > self.hi {
            return Err(Error::param(format!("{name} range is empty: {self:?}")));
        }
        if self.lo < min || self.hi > max {
            return Err(Error::param(format!(
                "{name} range {}..={} outside [{min}, {max}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(self.lo..=self.hi)
    }
}

/// Closed real range; draws are continuous uniform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealRange {
    pub lo: f64,
    pub hi: f64,
}

impl RealRange {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub const fn fixed(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    fn check(&self, name: &str, min: f64, max: f64) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo > self.hi {
            return Err(Error::param(format!("{name} range is empty: {self:?}")));
        }
        if self.lo < min || self.hi > max {
            return Err(Error::param(format!(
                "{name} range [{}, {}] outside [{min}, {max}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            rng.random_range(self.lo..=self.hi)
        }
    }
}

/// A base-network algorithm. Implementations draw their own per-graph
/// parameters from configured ranges, once per call.
pub trait GraphGenerator: Debug + Send + Sync {
    fn name(&self) -> &'static str;

    fn config(&self) -> AlgorithmConfig;

    fn generate(&self, node_count: usize, rng: &mut dyn RngCore) -> Result<UnweightedGraph>;
}

/// Serializable selector for the three base-network algorithms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum AlgorithmConfig {
    PreferentialAttachment {
        m_range: IntRange,
        alpha_range: RealRange,
    },
    SmallWorld {
        neighbour_range: IntRange,
        p_range: RealRange,
    },
    ErdosRenyi {
        edge_count_range: IntRange,
    },
}

impl AlgorithmConfig {
    pub fn build(&self) -> Box<dyn GraphGenerator> {
        match *self {
            AlgorithmConfig::PreferentialAttachment { m_range, alpha_range } => {
                Box::new(PreferentialAttachment { m_range, alpha_range })
            }
            AlgorithmConfig::SmallWorld {
                neighbour_range,
                p_range,
            } => Box::new(SmallWorld {
                neighbour_range,
                p_range,
            }),
            AlgorithmConfig::ErdosRenyi { edge_count_range } => Box::new(ErdosRenyi { edge_count_range }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreferentialAttachment {
    pub m_range: IntRange,
    pub alpha_range: RealRange,
}

impl Default for PreferentialAttachment {
    fn default() -> Self {
        Self {
            m_range: IntRange::new(4, 6),
            alpha_range: RealRange::new(0.30, 0.70),
        }
    }
}

impl GraphGenerator for PreferentialAttachment {
    fn name(&self) -> &'static str {
        "ba"
    }

    fn config(&self) -> AlgorithmConfig {
        AlgorithmConfig::PreferentialAttachment {
            m_range: self.m_range,
            alpha_range: self.alpha_range,
        }
    }

    fn generate(&self, node_count: usize, rng: &mut dyn RngCore) -> Result<UnweightedGraph> {
        gen_preferential_attachment(node_count, self.m_range, self.alpha_range, rng)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallWorld {
    pub neighbour_range: IntRange,
    pub p_range: RealRange,
}

impl Default for SmallWorld {
    fn default() -> Self {
        Self {
            neighbour_range: IntRange::new(3, 4),
            p_range: RealRange::new(0.05, 0.10),
        }
    }
}

impl GraphGenerator for SmallWorld {
    fn name(&self) -> &'static str {
        "ws"
    }

    fn config(&self) -> AlgorithmConfig {
        AlgorithmConfig::SmallWorld {
            neighbour_range: self.neighbour_range,
            p_range: self.p_range,
        }
    }

    fn generate(&self, node_count: usize, rng: &mut dyn RngCore) -> Result<UnweightedGraph> {
        gen_small_world(node_count, self.neighbour_range, self.p_range, rng)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErdosRenyi {
    pub edge_count_range: IntRange,
}

impl Default for ErdosRenyi {
    fn default() -> Self {
        Self {
            edge_count_range: IntRange::new(30, 45),
        }
    }
}

impl GraphGenerator for ErdosRenyi {
    fn name(&self) -> &'static str {
        "er"
    }

    fn config(&self) -> AlgorithmConfig {
        AlgorithmConfig::ErdosRenyi {
            edge_count_range: self.edge_count_range,
        }
    }

    fn generate(&self, node_count: usize, rng: &mut dyn RngCore) -> Result<UnweightedGraph> {
        gen_erdos_renyi(node_count, self.edge_count_range, rng)
    }
}

/// Degree-preferential growth with `m` and `alpha` drawn once per graph.
pub fn gen_preferential_attachment<R: Rng + ?Sized>(
    node_count: usize,
    m_range: IntRange,
    alpha_range: RealRange,
    rng: &mut R,
) -> Result<UnweightedGraph> {
    if node_count < 2 {
        return Err(Error::param("preferential attachment needs at least 2 nodes"));
    }
    m_range.check("m", 1, node_count - 1)?;
    alpha_range.check("alpha", 0.0, 2.0)?;
    let m = m_range.draw(rng);
    let alpha = alpha_range.draw(rng);
    grow_preferential(node_count, m, alpha, rng)
}

/// Grows a graph one node at a time. The new node picks `min(m, existing)`
/// distinct targets, each draw proportional to `degree^alpha + 1` over the
/// targets not yet picked in this step. Degrees are frozen during a step.
pub fn grow_preferential<R: Rng + ?Sized>(
    node_count: usize,
    m: usize,
    alpha: f64,
    rng: &mut R,
) -> Result<UnweightedGraph> {
    let mut graph = UnweightedGraph::new(node_count)?;
    let mut degree = vec![0usize; node_count];
    let mut appeal = Vec::with_capacity(node_count);
    let mut chosen = Vec::with_capacity(m);
    for new in 1..node_count {
        appeal.clear();
        appeal.extend((0..new).map(|i| (degree[i] as f64).powf(alpha) + 1.0));
        chosen.clear();
        let picks = m.min(new);
        if picks == new {
            chosen.extend(0..new);
        } else {
            for _ in 0..picks {
                let total: f64 = appeal.iter().sum();
                let mut u = rng.random::<f64>() * total;
                let mut pick = None;
                for (i, &a) in appeal.iter().enumerate() {
                    if a == 0.0 {
                        continue;
                    }
                    pick = Some(i);
                    if u < a {
                        break;
                    }
                    u -= a;
                }
                let pick = pick.expect("at least one target with positive appeal");
                appeal[pick] = 0.0;
                chosen.push(pick);
            }
        }
        for &t in &chosen {
            graph.add_edge(new, t);
            degree[new] += 1;
            degree[t] += 1;
        }
    }
    Ok(graph)
}

/// Ring lattice with `n` neighbours per side, then one rewiring pass.
pub fn gen_small_world<R: Rng + ?Sized>(
    node_count: usize,
    neighbour_range: IntRange,
    p_range: RealRange,
    rng: &mut R,
) -> Result<UnweightedGraph> {
    if node_count < 3 {
        return Err(Error::param("small-world lattice needs at least 3 nodes"));
    }
    neighbour_range.check("neighbour", 1, (node_count - 1) / 2)?;
    p_range.check("p", 0.0, 1.0)?;
    let n = neighbour_range.draw(rng);
    let p = p_range.draw(rng);
    rewire_lattice(node_count, n, p, rng)
}

/// Builds the lattice and visits each lattice edge `(i, i+d)` once; with
/// probability `p` the far endpoint moves to a node drawn uniformly from those
/// that keep the graph simple (the current endpoint included).
pub fn rewire_lattice<R: Rng + ?Sized>(
    node_count: usize,
    neighbours: usize,
    p: f64,
    rng: &mut R,
) -> Result<UnweightedGraph> {
    if neighbours == 0 || 2 * neighbours >= node_count {
        return Err(Error::param(format!(
            "{neighbours} neighbours per side do not fit a ring of {node_count}"
        )));
    }
    let mut graph = UnweightedGraph::new(node_count)?;
    let mut lattice = Vec::with_capacity(node_count * neighbours);
    for i in 0..node_count {
        for d in 1..=neighbours {
            let j = (i + d) % node_count;
            graph.add_edge(i, j);
            lattice.push((i, j));
        }
    }
    let mut candidates = Vec::with_capacity(node_count);
    for (i, j) in lattice {
        if p < 1.0 && rng.random::<f64>() >= p {
            continue;
        }
        rewire_edge(&mut graph, i, j, &mut candidates, rng);
    }
    Ok(graph)
}

pub(crate) fn rewire_edge<R: Rng + ?Sized>(
    graph: &mut UnweightedGraph,
    keep: usize,
    old: usize,
    candidates: &mut Vec<usize>,
    rng: &mut R,
) -> usize {
    candidates.clear();
    candidates.extend((0..graph.node_count()).filter(|&k| k != keep && (k == old || !graph.has_edge(keep, k))));
    let target = candidates[rng.random_range(0..candidates.len())];
    if target != old {
        graph.remove_edge(keep, old);
        graph.add_edge(keep, target);
    }
    target
}

/// Exactly `E` distinct pairs chosen uniformly, with `E` drawn once per graph.
pub fn gen_erdos_renyi<R: Rng + ?Sized>(
    node_count: usize,
    edge_count_range: IntRange,
    rng: &mut R,
) -> Result<UnweightedGraph> {
    let mut graph = UnweightedGraph::new(node_count)?;
    let max_pairs = node_count * (node_count - 1) / 2;
    edge_count_range.check("edge count", 0, max_pairs)?;
    let edges = edge_count_range.draw(rng);
    let mut pairs = Vec::with_capacity(max_pairs);
    for i in 0..node_count {
        for j in (i + 1)..node_count {
            pairs.push((i, j));
        }
    }
    for idx in rand::seq::index::sample(rng, max_pairs, edges) {
        let (a, b) = pairs[idx];
        graph.add_edge(a, b);
    }
    Ok(graph)
}
