use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PopulationFilter;
use crate::error::{Error, Result};

pub const ELEMENT_COUNT: usize = 10;
/// Largest accepted element code; codes start at 1.
pub const MAX_ELEMENT_CODE: i32 = 5;
/// Below this many complete rows a candidate analysis is marked unstable.
pub const SMALL_SAMPLE: usize = 100;

pub fn element_labels() -> Vec<String> {
    (1..=ELEMENT_COUNT).map(|i| format!("e{i:02}")).collect()
}

const BASE_HEADER: [&str; 3] = ["election", "candidate", "respondent"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Respondent {
    pub id: String,
    pub elements: Vec<Option<i32>>,
    pub vote: Option<u8>,
    pub voted_at_all: Option<u8>,
    /// 0 marks a respondent without party identification.
    pub party_id: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateData {
    pub candidate: String,
    pub respondents: Vec<Respondent>,
    /// Highest observed code per element column.
    pub category_counts: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectionDataset {
    pub election: String,
    pub candidates: Vec<CandidateData>,
    pub has_voted_at_all: bool,
    pub has_party_id: bool,
}

impl ElectionDataset {
    pub fn candidate(&self, id: &str) -> Result<&CandidateData> {
        self.candidates
            .iter()
            .find(|c| c.candidate == id)
            .ok_or_else(|| Error::Config(format!("election '{}' has no candidate '{id}'", self.election)))
    }

    pub fn respondent_count(&self) -> usize {
        self.candidates.iter().map(|c| c.respondents.len()).sum()
    }
}

fn parse_opt<T: std::str::FromStr>(field: &str, line: u64, col: &str) -> Result<Option<T>> {
    let f = field.trim();
    if f.is_empty() {
        return Ok(None);
    }
    f.parse::<T>()
        .map(Some)
        .map_err(|_| Error::schema(format!("line {line}, column {col}"), format!("'{f}' is not an integer")))
}

fn binary(v: Option<i64>, line: u64, col: &str) -> Result<Option<u8>> {
    match v {
        None => Ok(None),
        Some(0) => Ok(Some(0)),
        Some(1) => Ok(Some(1)),
        Some(x) => Err(Error::schema(
            format!("line {line}, column {col}"),
            format!("value {x} is not 0 or 1"),
        )),
    }
}

/// Reads the survey CSV. Elections and candidates keep their order of first
/// appearance.
pub fn read_datasets<R: Read>(reader: R) -> Result<Vec<ElectionDataset>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let mut expected: Vec<String> = BASE_HEADER.iter().map(|s| s.to_string()).collect();
    expected.extend(element_labels());
    expected.push("vote".into());
    if header.len() < expected.len() || header[..expected.len()] != expected[..] {
        return Err(Error::schema(
            "line 1",
            format!("header must start with {}", expected.join(",")),
        ));
    }
    let extra: Vec<&str> = header[expected.len()..].iter().map(String::as_str).collect();
    let (has_voted, has_party) = match extra.as_slice() {
        [] => (false, false),
        ["voted_at_all"] => (true, false),
        ["party_id"] => (false, true),
        ["voted_at_all", "party_id"] => (true, true),
        _ => {
            return Err(Error::schema(
                "line 1",
                format!("unexpected trailing columns {extra:?}; allowed: voted_at_all,party_id"),
            ))
        }
    };
    let labels = element_labels();
    let mut out: Vec<ElectionDataset> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != header.len() {
            return Err(Error::schema(
                format!("line {line}"),
                format!("expected {} fields, found {}", header.len(), rec.len()),
            ));
        }
        let election = rec[0].trim();
        let candidate = rec[1].trim();
        if election.is_empty() || candidate.is_empty() {
            return Err(Error::schema(
                format!("line {line}"),
                "election and candidate must be non-empty",
            ));
        }
        let mut elements = Vec::with_capacity(ELEMENT_COUNT);
        for (k, label) in labels.iter().enumerate() {
            let v: Option<i32> = parse_opt(&rec[3 + k], line, label)?;
            if let Some(code) = v {
                if !(1..=MAX_ELEMENT_CODE).contains(&code) {
                    return Err(Error::schema(
                        format!("line {line}, column {label}"),
                        format!("code {code} outside 1..={MAX_ELEMENT_CODE}"),
                    ));
                }
            }
            elements.push(v);
        }
        let vote = binary(parse_opt(&rec[13], line, "vote")?, line, "vote")?;
        let mut next = 14;
        let voted_at_all = if has_voted {
            next += 1;
            binary(parse_opt(&rec[next - 1], line, "voted_at_all")?, line, "voted_at_all")?
        } else {
            None
        };
        let party_id = if has_party {
            parse_opt(&rec[next], line, "party_id")?
        } else {
            None
        };
        let respondent = Respondent {
            id: rec[2].trim().to_string(),
            elements,
            vote,
            voted_at_all,
            party_id,
        };
        let ei = match out.iter().position(|e| e.election == election) {
            Some(i) => i,
            None => {
                out.push(ElectionDataset {
                    election: election.to_string(),
                    candidates: Vec::new(),
                    has_voted_at_all: has_voted,
                    has_party_id: has_party,
                });
                out.len() - 1
            }
        };
        let cands = &mut out[ei].candidates;
        let ci = match cands.iter().position(|c| c.candidate == candidate) {
            Some(i) => i,
            None => {
                cands.push(CandidateData {
                    candidate: candidate.to_string(),
                    respondents: Vec::new(),
                    category_counts: Vec::new(),
                });
                cands.len() - 1
            }
        };
        cands[ci].respondents.push(respondent);
    }
    if out.is_empty() {
        return Err(Error::EmptyData("survey file has no respondent rows".into()));
    }
    for e in &mut out {
        for c in &mut e.candidates {
            c.category_counts = (0..ELEMENT_COUNT)
                .map(|k| c.respondents.iter().filter_map(|r| r.elements[k]).max().unwrap_or(0))
                .collect();
            if let Some(k) = c.category_counts.iter().position(|&m| m == 0) {
                return Err(Error::schema(
                    format!(
                        "election {}, candidate {}, column {}",
                        e.election, c.candidate, labels[k]
                    ),
                    "element column has no observed values",
                ));
            }
        }
    }
    Ok(out)
}

pub fn load_datasets(path: impl AsRef<Path>) -> Result<Vec<ElectionDataset>> {
    read_datasets(BufReader::new(File::open(path)?))
}

/// Writes datasets in the input schema. Optional columns are included when
/// any dataset carries them.
pub fn write_datasets<W: Write>(datasets: &[ElectionDataset], writer: W) -> Result<()> {
    let has_voted = datasets.iter().any(|d| d.has_voted_at_all);
    let has_party = datasets.iter().any(|d| d.has_party_id);
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let mut header: Vec<String> = BASE_HEADER.iter().map(|s| s.to_string()).collect();
    header.extend(element_labels());
    header.push("vote".into());
    if has_voted {
        header.push("voted_at_all".into());
    }
    if has_party {
        header.push("party_id".into());
    }
    w.write_record(&header)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for d in datasets {
        for c in &d.candidates {
            for r in &c.respondents {
                let mut rec = vec![d.election.clone(), c.candidate.clone(), r.id.clone()];
                rec.extend(r.elements.iter().map(|v| opt(v.map(|x| x.to_string()))));
                rec.push(opt(r.vote.map(|x| x.to_string())));
                if has_voted {
                    rec.push(opt(r.voted_at_all.map(|x| x.to_string())));
                }
                if has_party {
                    rec.push(opt(r.party_id.map(|x| x.to_string())));
                }
                w.write_record(&rec)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Respondents of a candidate after the population filter and casewise
/// deletion on the ten elements and the vote.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSelection {
    /// Rows as (element codes, vote).
    pub rows: Vec<(Vec<i32>, u8)>,
    /// Respondents admitted by the filter, before deletion.
    pub n_before: usize,
    pub excluded: usize,
    /// Fewer than [`SMALL_SAMPLE`] rows remain.
    pub small_sample: bool,
}

impl CaseSelection {
    pub fn n(&self) -> usize {
        self.rows.len()
    }
}

/// The filter's view of a respondent: `None` drops the row, otherwise the
/// vote to analyse.
pub(crate) fn filtered_vote(
    r: &Respondent,
    filter: PopulationFilter,
    data: &ElectionDataset,
) -> Result<Option<Option<u8>>> {
    let voter = |r: &Respondent| !data.has_voted_at_all || r.voted_at_all == Some(1);
    Ok(match filter {
        PopulationFilter::All => Some(r.vote),
        PopulationFilter::VotersOnly => voter(r).then_some(r.vote),
        PopulationFilter::IncludeNonVotersAsAgainst => {
            if data.has_voted_at_all && r.voted_at_all == Some(0) {
                Some(Some(0))
            } else {
                Some(r.vote)
            }
        }
        PopulationFilter::IndependentsOnly => {
            if !data.has_party_id {
                return Err(Error::Config(format!(
                    "election '{}' has no party_id column; the independents filter needs it",
                    data.election
                )));
            }
            (voter(r) && r.party_id == Some(0)).then_some(r.vote)
        }
    })
}

/// Drops every respondent with a missing element or vote.
pub fn casewise_delete(data: &ElectionDataset, candidate: &str, filter: PopulationFilter) -> Result<CaseSelection> {
    let cand = data.candidate(candidate)?;
    let mut rows = Vec::new();
    let mut n_before = 0;
    for r in &cand.respondents {
        let Some(vote) = filtered_vote(r, filter, data)? else {
            continue;
        };
        n_before += 1;
        if let (Some(v), Some(codes)) = (vote, r.elements.iter().copied().collect::<Option<Vec<i32>>>()) {
            rows.push((codes, v));
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyData(format!(
            "no complete rows for {}/{candidate} under the {filter:?} filter",
            data.election
        )));
    }
    let n = rows.len();
    if n < SMALL_SAMPLE {
        log::warn!(
            "{}/{candidate}: only {n} complete rows; estimates are unstable",
            data.election
        );
    }
    Ok(CaseSelection {
        n_before,
        excluded: n_before - n,
        small_sample: n < SMALL_SAMPLE,
        rows,
    })
}
