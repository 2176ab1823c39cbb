use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::analysis::CandidateAnalysis;
use crate::error::{Error, Result};
use crate::stats::{mean, median, ols_simple, quantile, wilcoxon_signed_rank, TestResult};

const DEFAULT_ELEMENTS: [&str; 10] = [
    "honest",
    "intelligent",
    "knowledgeable",
    "moral",
    "cares",
    "leadership",
    "angry",
    "afraid",
    "hopeful",
    "proud",
];

/// Maps element columns to canonical element ids so that the same attitude
/// element can be matched across elections.
///
/// Keys are looked up as `election/candidate/column`, then
/// `election/column`, then `column`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementMap {
    entries: BTreeMap<String, String>,
}

impl Default for ElementMap {
    /// The ten standard items on columns `e01`..`e10`.
    fn default() -> Self {
        let entries = DEFAULT_ELEMENTS
            .iter()
            .enumerate()
            .map(|(i, id)| (format!("e{:02}", i + 1), id.to_string()))
            .collect();
        Self { entries }
    }
}

impl ElementMap {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, key: impl Into<String>, canonical: impl Into<String>) {
        self.entries.insert(key.into(), canonical.into());
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("element map: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn canonical(&self, election: &str, candidate: &str, column: &str) -> Result<&str> {
        [
            format!("{election}/{candidate}/{column}"),
            format!("{election}/{column}"),
            column.to_string(),
        ]
        .iter()
        .find_map(|k| self.entries.get(k))
        .map(String::as_str)
        .ok_or_else(|| Error::Config(format!("no canonical element for {election}/{candidate}/{column}")))
    }
}

/// Which networks feed a target network's regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pooling {
    /// Every element of every training network.
    #[default]
    Pooled,
    /// Only training networks of the same candidate id.
    PerCandidate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastRow {
    pub election: String,
    pub candidate: String,
    pub column: String,
    pub element: String,
    pub closeness: f64,
    pub predicted: f64,
    pub actual: f64,
    pub deviation: f64,
    pub overall_mean: f64,
    pub overall_deviation: f64,
    pub element_mean: f64,
    pub element_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub target: String,
    pub candidate: Option<String>,
    pub intercept: f64,
    pub slope: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationSummary {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
}

impl DeviationSummary {
    fn of(x: &[f64]) -> Self {
        let (q1, q3) = (quantile(x, 0.25), quantile(x, 0.75));
        Self {
            median: median(x),
            q1,
            q3,
            iqr: q3 - q1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastReport {
    pub targets: Vec<String>,
    pub pooling: Pooling,
    pub fits: Vec<FitRecord>,
    pub rows: Vec<ForecastRow>,
    pub centrality: DeviationSummary,
    pub overall_mean: DeviationSummary,
    pub element_mean: DeviationSummary,
    /// Paired test of centrality deviations against overall-mean deviations.
    pub vs_overall_mean: TestResult,
    pub vs_element_mean: TestResult,
}

struct Prediction {
    predicted: f64,
    overall_mean: f64,
    element_mean: f64,
    element: String,
}

/// Predictions for one target network. Only the target's closeness and
/// labels are available here; its impacts never enter.
fn predict_network(
    training: &[&CandidateAnalysis],
    election: &str,
    candidate: &str,
    labels: &[String],
    closeness: &[f64],
    map: &ElementMap,
) -> Result<(Vec<Prediction>, FitRecord)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut by_element: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for a in training {
        for (k, label) in a.labels.iter().enumerate() {
            xs.push(a.closeness[k]);
            ys.push(a.impact[k]);
            let id = map.canonical(&a.election, &a.candidate, label)?;
            by_element.entry(id.to_string()).or_default().push(a.impact[k]);
        }
    }
    let fit = ols_simple(&xs, &ys)?;
    let overall = mean(&ys);
    let preds = labels
        .iter()
        .zip(closeness)
        .map(|(label, &c)| {
            let id = map.canonical(election, candidate, label)?;
            let em = by_element
                .get(id)
                .ok_or_else(|| Error::Config(format!("element '{id}' has no training observations")))?;
            Ok(Prediction {
                predicted: fit.predict(c),
                overall_mean: overall,
                element_mean: mean(em),
                element: id.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let record = FitRecord {
        target: election.to_string(),
        candidate: None,
        intercept: fit.intercept,
        slope: fit.slope,
        n: xs.len(),
    };
    Ok((preds, record))
}

fn target_rows(
    analyses: &[CandidateAnalysis],
    target: &str,
    map: &ElementMap,
    pooling: Pooling,
) -> Result<(Vec<ForecastRow>, Vec<FitRecord>)> {
    let targets: Vec<&CandidateAnalysis> = analyses.iter().filter(|a| a.election == target).collect();
    if targets.is_empty() {
        return Err(Error::param(format!(
            "target election '{target}' is not among the analysed networks"
        )));
    }
    let training: Vec<&CandidateAnalysis> = analyses.iter().filter(|a| a.election != target).collect();
    let mut elections: Vec<&str> = training.iter().map(|a| a.election.as_str()).collect();
    elections.sort_unstable();
    elections.dedup();
    if elections.len() < 2 {
        return Err(Error::param(format!(
            "forecasting '{target}' needs at least two other elections, found {}",
            elections.len()
        )));
    }
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    let mut pooled_fit_done = false;
    for t in targets {
        let train: Vec<&CandidateAnalysis> = match pooling {
            Pooling::Pooled => training.clone(),
            Pooling::PerCandidate => training
                .iter()
                .copied()
                .filter(|a| a.candidate == t.candidate)
                .collect(),
        };
        if train.is_empty() {
            return Err(Error::param(format!(
                "no training networks for candidate '{}'",
                t.candidate
            )));
        }
        let (preds, mut fit) = predict_network(&train, &t.election, &t.candidate, &t.labels, &t.closeness, map)?;
        match pooling {
            Pooling::Pooled if !pooled_fit_done => {
                fits.push(fit);
                pooled_fit_done = true;
            }
            Pooling::Pooled => {}
            Pooling::PerCandidate => {
                fit.candidate = Some(t.candidate.clone());
                fits.push(fit);
            }
        }
        for (k, p) in preds.into_iter().enumerate() {
            let actual = t.impact[k];
            rows.push(ForecastRow {
                election: t.election.clone(),
                candidate: t.candidate.clone(),
                column: t.labels[k].clone(),
                element: p.element,
                closeness: t.closeness[k],
                predicted: p.predicted,
                actual,
                deviation: (p.predicted - actual).abs(),
                overall_mean: p.overall_mean,
                overall_deviation: (p.overall_mean - actual).abs(),
                element_mean: p.element_mean,
                element_deviation: (p.element_mean - actual).abs(),
            });
        }
    }
    Ok((rows, fits))
}

fn summarize(
    targets: Vec<String>,
    pooling: Pooling,
    fits: Vec<FitRecord>,
    rows: Vec<ForecastRow>,
) -> Result<ForecastReport> {
    let dev: Vec<f64> = rows.iter().map(|r| r.deviation).collect();
    let od: Vec<f64> = rows.iter().map(|r| r.overall_deviation).collect();
    let ed: Vec<f64> = rows.iter().map(|r| r.element_deviation).collect();
    Ok(ForecastReport {
        vs_overall_mean: wilcoxon_signed_rank(&dev, &od)?,
        vs_element_mean: wilcoxon_signed_rank(&dev, &ed)?,
        centrality: DeviationSummary::of(&dev),
        overall_mean: DeviationSummary::of(&od),
        element_mean: DeviationSummary::of(&ed),
        targets,
        pooling,
        fits,
        rows,
    })
}

/// Forecasts element impacts of one election from regressions fitted on all
/// other elections.
pub fn forecast_impact(
    analyses: &[CandidateAnalysis],
    target: &str,
    map: &ElementMap,
    pooling: Pooling,
) -> Result<ForecastReport> {
    let (rows, fits) = target_rows(analyses, target, map, pooling)?;
    summarize(vec![target.to_string()], pooling, fits, rows)
}

/// Leave-one-election-out forecasts over every election, tested jointly.
pub fn forecast_all(analyses: &[CandidateAnalysis], map: &ElementMap, pooling: Pooling) -> Result<ForecastReport> {
    let mut targets: Vec<String> = Vec::new();
    for a in analyses {
        if !targets.contains(&a.election) {
            targets.push(a.election.clone());
        }
    }
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for t in &targets {
        let (r, f) = target_rows(analyses, t, map, pooling)?;
        rows.extend(r);
        fits.extend(f);
    }
    summarize(targets, pooling, fits, rows)
}

impl ForecastReport {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        w.write_record([
            "election",
            "candidate",
            "column",
            "element",
            "closeness",
            "predicted",
            "actual",
            "deviation",
            "overall_mean",
            "overall_deviation",
            "element_mean",
            "element_deviation",
        ])?;
        for r in &self.rows {
            let f = |x: f64| format!("{x:.6}");
            w.write_record([
                r.election.clone(),
                r.candidate.clone(),
                r.column.clone(),
                r.element.clone(),
                f(r.closeness),
                f(r.predicted),
                f(r.actual),
                f(r.deviation),
                f(r.overall_mean),
                f(r.overall_deviation),
                f(r.element_mean),
                f(r.element_deviation),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
