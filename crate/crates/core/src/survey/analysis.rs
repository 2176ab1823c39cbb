use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{casewise_delete, element_labels, ElectionDataset};
use super::PopulationFilter;
use crate::error::{Error, Result};
use crate::network::{network_from_labelled_codes, shortest_paths, CorrelationNetwork};
use crate::stats::{biserial, mean, pearson, polychoric_pairs, t_test_ind, zscore, TestResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateAnalysis {
    pub election: String,
    pub candidate: String,
    pub filter: PopulationFilter,
    pub n_before: usize,
    pub n_after: usize,
    pub small_sample: bool,
    /// ASPL of the ten-element network.
    pub connectivity: f64,
    /// Biserial correlation of the summed element codes with the vote.
    pub average_impact: f64,
    pub labels: Vec<String>,
    pub closeness: Vec<f64>,
    /// Polychoric correlation of each element with the vote.
    pub impact: Vec<f64>,
    /// Highest code per element among the analysed rows.
    pub category_counts: Vec<i32>,
    pub negative_edges: Vec<(usize, usize)>,
    pub network: CorrelationNetwork,
}

impl CandidateAnalysis {
    pub fn key(&self) -> String {
        format!("{}/{}", self.election, self.candidate)
    }
}

fn columns(rows: &[(Vec<i32>, u8)]) -> Vec<Vec<i32>> {
    let k = rows.first().map_or(0, |r| r.0.len());
    (0..k).map(|c| rows.iter().map(|r| r.0[c]).collect()).collect()
}

pub fn analyze_candidate(
    data: &ElectionDataset,
    candidate: &str,
    filter: PopulationFilter,
) -> Result<CandidateAnalysis> {
    let sel = casewise_delete(data, candidate, filter)?;
    let where_ = format!("{}/{candidate}", data.election);
    if sel.n() < 3 {
        return Err(Error::degenerate(format!(
            "{where_}: {} complete rows, need at least 3",
            sel.n()
        )));
    }
    let codes = columns(&sel.rows);
    let vote: Vec<u8> = sel.rows.iter().map(|r| r.1).collect();
    if vote.iter().all(|&v| v == vote[0]) {
        return Err(Error::degenerate(format!(
            "{where_}: every analysed respondent has vote {}",
            vote[0]
        )));
    }
    let network = network_from_labelled_codes(element_labels(), &codes).map_err(|e| {
        if e.is_degenerate() {
            Error::degenerate(format!("{where_}: {e}"))
        } else {
            e
        }
    })?;
    let dm = shortest_paths(&network);
    let connectivity = dm.aspl().map_err(|e| Error::Disconnected(format!("{where_}: {e}")))?;
    let closeness = dm.closeness()?;
    let sum: Vec<f64> = sel.rows.iter().map(|r| r.0.iter().map(|&c| c as f64).sum()).collect();
    let average_impact = biserial(&sum, &vote)?;
    let vote_codes: Vec<i32> = vote.iter().map(|&v| v as i32).collect();
    let impact = codes
        .iter()
        .map(|c| polychoric_pairs(c, &vote_codes).map(|e| e.rho))
        .collect::<Result<Vec<_>>>()?;
    Ok(CandidateAnalysis {
        election: data.election.clone(),
        candidate: candidate.to_string(),
        filter,
        n_before: sel.n_before,
        n_after: sel.n(),
        small_sample: sel.small_sample,
        connectivity,
        average_impact,
        labels: element_labels(),
        closeness,
        impact,
        category_counts: codes.iter().map(|c| *c.iter().max().expect("non-empty")).collect(),
        negative_edges: dm.negative_edges,
        network,
    })
}

/// Analyses every candidate of every election, in input order.
pub fn analyze_all(datasets: &[ElectionDataset], filter: PopulationFilter) -> Result<Vec<CandidateAnalysis>> {
    let jobs: Vec<(&ElectionDataset, &str)> = datasets
        .iter()
        .flat_map(|d| d.candidates.iter().map(move |c| (d, c.candidate.as_str())))
        .collect();
    jobs.par_iter().map(|(d, c)| analyze_candidate(d, c, filter)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub network: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTest {
    pub r: f64,
    pub p_value: f64,
    pub n: usize,
    pub points: Vec<ScatterPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// ASPL against average impact, one point per network.
    pub connectivity: CorrelationTest,
    /// Within-network standardized closeness against standardized impact.
    pub centrality: CorrelationTest,
    /// Networks left out of the centrality test because closeness or impact
    /// has no spread.
    pub excluded_from_centrality: Vec<String>,
    /// Element scales differ across networks.
    pub mixed_scales: bool,
}

pub fn hypothesis_tests(analyses: &[CandidateAnalysis]) -> Result<HypothesisReport> {
    let xs: Vec<f64> = analyses.iter().map(|a| a.connectivity).collect();
    let ys: Vec<f64> = analyses.iter().map(|a| a.average_impact).collect();
    let c = pearson(&xs, &ys)?;
    let connectivity = CorrelationTest {
        r: c.r,
        p_value: c.p_value,
        n: c.n,
        points: analyses
            .iter()
            .map(|a| ScatterPoint {
                network: a.key(),
                x: a.connectivity,
                y: a.average_impact,
            })
            .collect(),
    };
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for a in analyses {
        match (zscore(&a.closeness), zscore(&a.impact)) {
            (Ok(zc), Ok(zi)) => {
                points.extend(
                    zc.into_iter()
                        .zip(zi)
                        .map(|(x, y)| ScatterPoint { network: a.key(), x, y }),
                )
            }
            _ => {
                log::warn!(
                    "{}: closeness or impact is constant; excluded from the centrality test",
                    a.key()
                );
                excluded.push(a.key());
            }
        }
    }
    let px: Vec<f64> = points.iter().map(|p| p.x).collect();
    let py: Vec<f64> = points.iter().map(|p| p.y).collect();
    let c = pearson(&px, &py)?;
    let mixed_scales = analyses
        .windows(2)
        .any(|w| w[0].category_counts != w[1].category_counts);
    Ok(HypothesisReport {
        connectivity,
        centrality: CorrelationTest {
            r: c.r,
            p_value: c.p_value,
            n: c.n,
            points,
        },
        excluded_from_centrality: excluded,
        mixed_scales,
    })
}

/// ASPL of one candidate network for one respondent group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectivitySample {
    pub network: String,
    pub connectivity: f64,
    pub n: usize,
}

impl From<&CandidateAnalysis> for ConnectivitySample {
    fn from(a: &CandidateAnalysis) -> Self {
        Self {
            network: a.key(),
            connectivity: a.connectivity,
            n: a.n_after,
        }
    }
}

/// Element-network ASPL of the respondents with `voted_at_all == 0`.
/// Their vote is not needed, so deletion only looks at the elements.
pub fn nonvoter_connectivity(data: &ElectionDataset, candidate: &str) -> Result<ConnectivitySample> {
    if !data.has_voted_at_all {
        return Err(Error::Config(format!(
            "election '{}' has no voted_at_all column",
            data.election
        )));
    }
    let cand = data.candidate(candidate)?;
    let rows: Vec<Vec<i32>> = cand
        .respondents
        .iter()
        .filter(|r| r.voted_at_all == Some(0))
        .filter_map(|r| r.elements.iter().copied().collect::<Option<Vec<i32>>>())
        .collect();
    let key = format!("{}/{candidate}", data.election);
    if rows.len() < 3 {
        return Err(Error::EmptyData(format!(
            "{key}: {} complete non-voter rows",
            rows.len()
        )));
    }
    let k = rows[0].len();
    let codes: Vec<Vec<i32>> = (0..k).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
    let net = network_from_labelled_codes(element_labels(), &codes)?;
    Ok(ConnectivitySample {
        network: key,
        connectivity: shortest_paths(&net).aspl()?,
        n: rows.len(),
    })
}

/// Voter-group analyses paired with non-voter connectivity, skipping
/// candidates whose non-voter network cannot be estimated.
pub fn voter_nonvoter_groups(
    datasets: &[ElectionDataset],
    voters: &[CandidateAnalysis],
) -> (Vec<ConnectivitySample>, Vec<ConnectivitySample>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for v in voters {
        let Some(d) = datasets.iter().find(|d| d.election == v.election) else {
            continue;
        };
        match nonvoter_connectivity(d, &v.candidate) {
            Ok(s) => {
                a.push(ConnectivitySample::from(v));
                b.push(s);
            }
            Err(e) => log::warn!("{}: no non-voter network: {e}", v.key()),
        }
    }
    (a, b)
}

/// Independent-samples t-test on ASPL. The statistic and effect size are
/// positive when group `a` is the more connected one (smaller ASPL).
pub fn compare_groups(a: &[ConnectivitySample], b: &[ConnectivitySample]) -> Result<TestResult> {
    let xa: Vec<f64> = a.iter().map(|s| s.connectivity).collect();
    let xb: Vec<f64> = b.iter().map(|s| s.connectivity).collect();
    let r = t_test_ind(&xb, &xa)?;
    log::debug!("group means: a {:.4}, b {:.4}", mean(&xa), mean(&xb));
    Ok(r)
}
