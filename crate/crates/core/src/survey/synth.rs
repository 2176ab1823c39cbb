use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::dataset::{CandidateData, ElectionDataset, Respondent, ELEMENT_COUNT};
use crate::error::{Error, Result};
use crate::graph::{assign_weights, GeneratorRegistry, WeightRegistry};
use crate::ising::{sample_exact, Encoding, IsingModel, SampleMatrix};
use crate::rng::derived;
use crate::sim::NormalSpec;

/// Element nodes plus the vote node, which is always the last one.
pub const SYNTH_NODES: usize = ELEMENT_COUNT + 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSpec {
    pub id: String,
    /// Drawn from the spaced grid when absent.
    #[serde(default)]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectionSpec {
    pub id: String,
    pub candidates: Vec<CandidateSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonVoterSpec {
    /// Share of each candidate's respondents who did not vote.
    pub share: f64,
    /// Their inverse temperature relative to the candidate's.
    pub beta_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthSpec {
    /// Explicit elections; when empty, `election_count` elections named
    /// 1980, 1984, ... with `candidate_count` candidates each.
    pub elections: Vec<ElectionSpec>,
    pub election_count: usize,
    pub candidate_count: usize,
    /// Respondents per candidate.
    pub respondents: usize,
    /// Candidates without an explicit beta get values evenly spaced over
    /// this range, in shuffled order.
    pub beta_range: [f64; 2],
    pub generator: String,
    pub weights: String,
    pub thresholds: NormalSpec,
    /// Four ordered categories per element instead of two.
    pub ordinal: bool,
    /// Probability that an element cell is left empty.
    pub missing_rate: f64,
    pub nonvoters: Option<NonVoterSpec>,
    /// Adds a party_id column; this share of respondents gets party 0.
    pub independent_share: Option<f64>,
    /// One base network and threshold vector for every candidate, so that
    /// candidates differ only in beta.
    pub shared_base: bool,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            elections: Vec::new(),
            election_count: 9,
            candidate_count: 2,
            respondents: 1000,
            beta_range: [0.5, 2.0],
            generator: "er".into(),
            weights: "normal".into(),
            thresholds: NormalSpec { mean: 0.0, sd: 0.25 },
            ordinal: false,
            missing_rate: 0.0,
            nonvoters: None,
            independent_share: None,
            shared_base: false,
        }
    }
}

impl SynthSpec {
    pub fn election_specs(&self) -> Vec<ElectionSpec> {
        if !self.elections.is_empty() {
            return self.elections.clone();
        }
        (0..self.election_count)
            .map(|e| ElectionSpec {
                id: (1980 + 4 * e).to_string(),
                candidates: (0..self.candidate_count)
                    .map(|c| CandidateSpec {
                        id: format!("c{}", c + 1),
                        beta: None,
                    })
                    .collect(),
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.respondents == 0 {
            return Err(Error::EmptyData(
                "synthetic elections need at least one respondent".into(),
            ));
        }
        let [lo, hi] = self.beta_range;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::param(format!(
                "beta_range [{lo}, {hi}] must be positive and ordered"
            )));
        }
        if !(0.0..1.0).contains(&self.missing_rate) {
            return Err(Error::param("missing_rate must lie in [0, 1)"));
        }
        if let Some(nv) = self.nonvoters {
            if !(0.0..1.0).contains(&nv.share) || !(nv.beta_scale > 0.0) {
                return Err(Error::param(
                    "non-voter share must lie in [0, 1) and beta_scale be positive",
                ));
            }
        }
        if let Some(s) = self.independent_share {
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::param("independent_share must lie in [0, 1]"));
            }
        }
        if self.election_specs().iter().map(|e| e.candidates.len()).sum::<usize>() == 0 {
            return Err(Error::EmptyData("synthetic spec has no candidates".into()));
        }
        Ok(())
    }
}

/// Generating model of one synthetic candidate network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateTruth {
    pub election: String,
    pub candidate: String,
    pub beta: f64,
    pub thresholds: Vec<f64>,
    /// Row-major weight matrix over the ten elements and the vote.
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthOutput {
    pub datasets: Vec<ElectionDataset>,
    pub truth: Vec<CandidateTruth>,
}

fn spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![(lo + hi) / 2.0],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Response code of element `s` in a sampled configuration.
fn element_code(model: &IsingModel, states: &[i32], s: usize, ordinal: bool) -> i32 {
    let up = i32::from(states[s] == 1);
    if !ordinal {
        return 1 + up;
    }
    let field = model.thresholds()[s]
        + (0..states.len())
            .filter(|&t| t != s)
            .map(|t| model.weight(s, t) * states[t] as f64)
            .sum::<f64>();
    2 * up + i32::from(field > 0.0) + 1
}

fn rows_from_sample<R: Rng>(
    model: &IsingModel,
    sample: &SampleMatrix,
    voter: bool,
    spec: &SynthSpec,
    rng: &mut R,
    next_id: &mut usize,
    out: &mut Vec<Respondent>,
) {
    let vote_node = SYNTH_NODES - 1;
    for r in 0..sample.n_rows() {
        let states: Vec<i32> = sample.row(r).iter().map(|v| v.expect("complete sample")).collect();
        let elements = (0..ELEMENT_COUNT)
            .map(|s| {
                let code = element_code(model, &states, s, spec.ordinal);
                (spec.missing_rate == 0.0 || !rng.random_bool(spec.missing_rate)).then_some(code)
            })
            .collect();
        let party_id = spec.independent_share.map(|share| {
            if rng.random_bool(share) {
                0
            } else {
                rng.random_range(1..=2)
            }
        });
        *next_id += 1;
        out.push(Respondent {
            id: next_id.to_string(),
            elements,
            vote: voter.then(|| u8::from(states[vote_node] == 1)),
            voted_at_all: spec.nonvoters.map(|_| u8::from(voter)),
            party_id,
        });
    }
}

/// Survey data drawn from per-candidate Ising networks. Output depends only
/// on the spec and the seed.
pub fn gen_synthetic_elections(spec: &SynthSpec, seed: u64) -> Result<SynthOutput> {
    spec.validate()?;
    let generator = GeneratorRegistry::with_defaults().get(&spec.generator)?;
    let weights = WeightRegistry::with_defaults().get(&spec.weights)?;
    let elections = spec.election_specs();
    let open = elections
        .iter()
        .flat_map(|e| &e.candidates)
        .filter(|c| c.beta.is_none())
        .count();
    let mut grid = spaced(spec.beta_range[0], spec.beta_range[1], open);
    grid.shuffle(&mut derived(seed, &[u64::MAX]));
    let mut grid = grid.into_iter();

    let draw_base = |rng: &mut crate::rng::SimRng| -> Result<(crate::graph::WeightedGraph, Vec<f64>)> {
        let graph = generator.generate(SYNTH_NODES, rng)?;
        let base = assign_weights(&graph, weights.as_ref(), rng);
        Ok((base, spec.thresholds.draw_many(SYNTH_NODES, rng)))
    };
    let shared = if spec.shared_base {
        Some(draw_base(&mut derived(seed, &[u64::MAX - 1]))?)
    } else {
        None
    };

    let mut datasets = Vec::new();
    let mut truth = Vec::new();
    for (ei, e) in elections.iter().enumerate() {
        let mut candidates = Vec::new();
        for (ci, c) in e.candidates.iter().enumerate() {
            let beta = c
                .beta
                .unwrap_or_else(|| grid.next().expect("one grid value per open candidate"));
            let mut rng = derived(seed, &[ei as u64, ci as u64]);
            let (base, thresholds) = match &shared {
                Some(s) => s.clone(),
                None => draw_base(&mut rng)?,
            };
            let model = IsingModel::from_graph(&base, thresholds.clone(), beta, Encoding::PlusMinusOne)?;
            let n_non = spec
                .nonvoters
                .map_or(0, |nv| (nv.share * spec.respondents as f64).round() as usize);
            let mut respondents = Vec::with_capacity(spec.respondents);
            let mut next_id = 0;
            let voters = sample_exact(&model, spec.respondents - n_non, &mut rng)?;
            rows_from_sample(&model, &voters, true, spec, &mut rng, &mut next_id, &mut respondents);
            if let Some(nv) = spec.nonvoters.filter(|_| n_non > 0) {
                let cold = model.with_beta(beta * nv.beta_scale)?;
                let sample = sample_exact(&cold, n_non, &mut rng)?;
                rows_from_sample(&cold, &sample, false, spec, &mut rng, &mut next_id, &mut respondents);
            }
            let category_counts = (0..ELEMENT_COUNT)
                .map(|k| respondents.iter().filter_map(|r| r.elements[k]).max().unwrap_or(0))
                .collect();
            candidates.push(CandidateData {
                candidate: c.id.clone(),
                respondents,
                category_counts,
            });
            truth.push(CandidateTruth {
                election: e.id.clone(),
                candidate: c.id.clone(),
                beta,
                thresholds,
                weights: base.into_matrix(),
            });
        }
        datasets.push(ElectionDataset {
            election: e.id.clone(),
            candidates,
            has_voted_at_all: spec.nonvoters.is_some(),
            has_party_id: spec.independent_share.is_some(),
        });
    }
    Ok(SynthOutput { datasets, truth })
}
