//! Election survey pipeline: loading respondent data, per-candidate attitude
//! networks, the connectivity and centrality tests, leave-one-election-out
//! impact forecasts, and synthetic election suites with known generating
//! models.

mod analysis;
mod dataset;
mod forecast;
mod synth;

use serde::{Deserialize, Serialize};

pub use analysis::{
    analyze_all, analyze_candidate, compare_groups, hypothesis_tests, nonvoter_connectivity, voter_nonvoter_groups,
    CandidateAnalysis, ConnectivitySample, CorrelationTest, HypothesisReport, ScatterPoint,
};
pub use dataset::{
    casewise_delete, element_labels, load_datasets, read_datasets, write_datasets, CandidateData, CaseSelection,
    ElectionDataset, Respondent, ELEMENT_COUNT, MAX_ELEMENT_CODE, SMALL_SAMPLE,
};
pub use forecast::{
    forecast_all, forecast_impact, DeviationSummary, ElementMap, FitRecord, ForecastReport, ForecastRow, Pooling,
};
pub use synth::{
    gen_synthetic_elections, CandidateSpec, CandidateTruth, ElectionSpec, NonVoterSpec, SynthOutput, SynthSpec,
    SYNTH_NODES,
};

/// Which respondents enter a candidate analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PopulationFilter {
    /// Every row; rows without a vote drop out in casewise deletion.
    All,
    /// Rows with `voted_at_all == 1`, or every row when that column is absent.
    #[default]
    VotersOnly,
    /// Non-voters are kept and counted as not voting for the candidate.
    IncludeNonVotersAsAgainst,
    /// Voters with `party_id == 0`.
    IndependentsOnly,
}

impl std::str::FromStr for PopulationFilter {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "all" => Ok(Self::All),
            "voters" => Ok(Self::VotersOnly),
            "against" => Ok(Self::IncludeNonVotersAsAgainst),
            "independents" => Ok(Self::IndependentsOnly),
            _ => Err(crate::Error::Config(format!(
                "unknown filter '{s}'; expected all, voters, against or independents"
            ))),
        }
    }
}
