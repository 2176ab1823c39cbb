use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use attnet_core::graph::{GeneratorRegistry, WeightRegistry};
use attnet_core::ising::SamplerRegistry;
use attnet_core::sim::{run_replicate, run_study, ReplicateRecord, StudyConfig, StudyReport, VariationResult};
use attnet_core::stats::{zscore, TestResult};
use attnet_core::survey::{
    analyze_all, compare_groups, forecast_all, forecast_impact, gen_synthetic_elections, hypothesis_tests,
    read_datasets, voter_nonvoter_groups, write_datasets, CandidateAnalysis, ConnectivitySample, ElectionDataset,
    ElementMap, ForecastReport, HypothesisReport, Pooling, PopulationFilter, SynthSpec,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::args::{AnalyzeArgs, ForecastArgs, PoolingArg, SimulateArgs, SynthArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::{create_dir, now, write_json, RunManifest};
use crate::svg::Scatter;

/// Parses JSON, naming the offending field path on failure.
fn parse_json<T: DeserializeOwned>(bytes: &[u8], what: &Path) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Core(attnet_core::Error::Config(format!(
            "{} at '{path}': {}",
            what.display(),
            e.inner()
        )))
    })
}

fn create_file(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn write_svg(path: &Path, plot: Scatter<'_>) -> CliResult<()> {
    fs::write(path, plot.render()).map_err(|e| CliError::io(path, e))
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    manifest: &'a RunManifest,
    #[serde(flatten)]
    body: T,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |v| format!("{v:.3}"))
}

pub fn simulate(args: &SimulateArgs) -> CliResult<()> {
    let started = now();
    let mut config = StudyConfig::default();
    let mut manifest_inputs = RunManifest::new("simulate", &(), None);
    if let Some(path) = &args.config {
        let bytes = manifest_inputs.read_input(path)?;
        config = parse_json(&bytes, path)?;
    }
    if let Some(g) = &args.generator {
        config.generator = g.clone();
    }
    if let Some(w) = &args.weights {
        config.weights = w.clone();
    }
    if let Some(s) = &args.sampler {
        config.sampler = s.clone();
    }
    for (flag, slot) in [
        (args.replicates, &mut config.replicates),
        (args.variations, &mut config.variations),
        (args.individuals, &mut config.individuals),
        (args.nodes, &mut config.node_count),
    ] {
        if let Some(v) = flag {
            *slot = v as usize;
        }
    }
    if args.keep_variations {
        config.keep_variations = true;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }

    let mut manifest = RunManifest::new("simulate", &config, Some(config.seed));
    manifest.inputs = manifest_inputs.inputs;
    let report = run_study(&config)?;

    create_dir(&args.out)?;
    let embedded = manifest.embedded();
    write_json(
        &args.out.join("simulate.json"),
        &Envelope {
            manifest: &embedded,
            body: &report,
        },
    )?;
    report.write_table_csv(create_file(&args.out.join("table.csv"))?)?;
    report.write_replicates_csv(create_file(&args.out.join("replicates.csv"))?)?;
    if args.svg {
        simulate_plots(&report, &args.out)?;
    }

    println!("combination        used  connectivity r (sd)   centrality r (sd)");
    for c in &report.combinations {
        println!(
            "{:<17} {:>5}  {:>7} ({})        {:>7} ({})",
            format!("{}/{}", c.generator, c.weights),
            c.replicates_used,
            fmt_opt(c.connectivity_mean),
            fmt_opt(c.connectivity_sd),
            fmt_opt(c.centrality_mean),
            fmt_opt(c.centrality_sd)
        );
    }
    let path = manifest.write_timestamped(&args.out, started)?;
    log::info!("manifest written to {}", path.display());
    Ok(())
}

/// Variations of a replicate, rerunning it from its seed when the study did
/// not keep them.
fn replicate_variations(report: &StudyReport, record: &ReplicateRecord) -> CliResult<Vec<VariationResult>> {
    if let Some(v) = &record.variations {
        return Ok(v.clone());
    }
    let config = StudyConfig {
        keep_variations: true,
        ..report.config.clone()
    };
    let generator = GeneratorRegistry::with_defaults().get(&record.generator)?;
    let weights = WeightRegistry::with_defaults().get(&record.weights)?;
    let sampler = SamplerRegistry::with_defaults().get(&config.sampler)?;
    let rerun = run_replicate(
        &config,
        &record.generator,
        generator.as_ref(),
        &record.weights,
        weights.as_ref(),
        sampler.as_ref(),
        record.replicate,
    )?;
    Ok(rerun.variations.unwrap_or_default())
}

fn simulate_plots(report: &StudyReport, out: &Path) -> CliResult<()> {
    for c in &report.combinations {
        let Some(record) = report.nearest_to_mean(&c.generator, &c.weights) else {
            log::warn!("{}/{}: no usable replicate to plot", c.generator, c.weights);
            continue;
        };
        let variations = replicate_variations(report, record)?;
        let conn: Vec<(f64, f64)> = variations.iter().map(|v| (v.connectivity, v.average_impact)).collect();
        let mut cent = Vec::new();
        for v in &variations {
            if let (Ok(zc), Ok(zi)) = (zscore(&v.closeness), zscore(&v.impact)) {
                cent.extend(zc.into_iter().zip(zi));
            }
        }
        let stem = format!("{}_{}", c.generator, c.weights);
        let title = format!("{}/{} replicate {}", c.generator, c.weights, record.replicate);
        write_svg(
            &out.join(format!("{stem}_connectivity.svg")),
            Scatter {
                title: &title,
                x_label: "average shortest path length",
                y_label: "average impact",
                points: &conn,
            },
        )?;
        write_svg(
            &out.join(format!("{stem}_centrality.svg")),
            Scatter {
                title: &title,
                x_label: "closeness (z)",
                y_label: "impact (z)",
                points: &cent,
            },
        )?;
    }
    Ok(())
}

fn load_survey(manifest: &mut RunManifest, path: &Path) -> CliResult<Vec<ElectionDataset>> {
    let bytes = manifest.read_input(path)?;
    Ok(read_datasets(&bytes[..])?)
}

#[derive(Serialize)]
struct AnalyzeConfig {
    input: String,
    filter: PopulationFilter,
    svg: bool,
}

#[derive(Serialize)]
struct GroupComparison {
    voters: Vec<ConnectivitySample>,
    nonvoters: Vec<ConnectivitySample>,
    test: TestResult,
}

#[derive(Serialize)]
struct AnalyzeBody<'a> {
    analyses: &'a [CandidateAnalysis],
    hypotheses: &'a HypothesisReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    group_comparison: Option<GroupComparison>,
}

fn write_network_table(path: &Path, analyses: &[CandidateAnalysis]) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(create_file(path)?);
    let to_core = |e: csv::Error| CliError::Core(e.into());
    w.write_record([
        "election",
        "candidate",
        "n_before",
        "n_after",
        "small_sample",
        "connectivity",
        "average_impact",
        "negative_edges",
    ])
    .map_err(to_core)?;
    for a in analyses {
        w.write_record([
            a.election.clone(),
            a.candidate.clone(),
            a.n_before.to_string(),
            a.n_after.to_string(),
            a.small_sample.to_string(),
            format!("{:.6}", a.connectivity),
            format!("{:.6}", a.average_impact),
            a.negative_edges.len().to_string(),
        ])
        .map_err(to_core)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn analyze(args: &AnalyzeArgs) -> CliResult<()> {
    let started = now();
    let filter: PopulationFilter = args.filter.parse()?;
    let config = AnalyzeConfig {
        input: args.input.display().to_string(),
        filter,
        svg: args.svg,
    };
    let mut manifest = RunManifest::new("analyze", &config, None);
    let datasets = load_survey(&mut manifest, &args.input)?;
    let analyses = analyze_all(&datasets, filter)?;
    let hypotheses = hypothesis_tests(&analyses)?;

    // Non-voters only have a network of their own when they are kept apart
    // from the vote, so the comparison runs for the filter that retains them.
    let group_comparison =
        if filter == PopulationFilter::IncludeNonVotersAsAgainst && datasets.iter().any(|d| d.has_voted_at_all) {
            let voters = analyze_all(&datasets, PopulationFilter::VotersOnly)?;
            let (a, b) = voter_nonvoter_groups(&datasets, &voters);
            Some(GroupComparison {
                test: compare_groups(&a, &b)?,
                voters: a,
                nonvoters: b,
            })
        } else {
            None
        };

    create_dir(&args.out)?;
    let embedded = manifest.embedded();
    let body = AnalyzeBody {
        analyses: &analyses,
        hypotheses: &hypotheses,
        group_comparison,
    };
    println!(
        "{} networks; connectivity r = {:.3} (p = {:.3e}); centrality r = {:.3} (p = {:.3e}, n = {})",
        analyses.len(),
        hypotheses.connectivity.r,
        hypotheses.connectivity.p_value,
        hypotheses.centrality.r,
        hypotheses.centrality.p_value,
        hypotheses.centrality.n
    );
    if let Some(g) = &body.group_comparison {
        println!(
            "voters vs non-voters: t = {:.3}, p = {:.3e}, d = {:.3} over {} networks",
            g.test.statistic,
            g.test.p_value,
            g.test.effect_size,
            g.voters.len()
        );
    }
    write_json(
        &args.out.join("analysis.json"),
        &Envelope {
            manifest: &embedded,
            body,
        },
    )?;
    write_network_table(&args.out.join("networks.csv"), &analyses)?;
    if args.svg {
        let conn: Vec<(f64, f64)> = hypotheses.connectivity.points.iter().map(|p| (p.x, p.y)).collect();
        let cent: Vec<(f64, f64)> = hypotheses.centrality.points.iter().map(|p| (p.x, p.y)).collect();
        write_svg(
            &args.out.join("connectivity.svg"),
            Scatter {
                title: "connectivity and average impact",
                x_label: "average shortest path length",
                y_label: "average impact",
                points: &conn,
            },
        )?;
        write_svg(
            &args.out.join("centrality.svg"),
            Scatter {
                title: "centrality and impact",
                x_label: "closeness (z within network)",
                y_label: "impact (z within network)",
                points: &cent,
            },
        )?;
    }
    manifest.write_timestamped(&args.out, started)?;
    Ok(())
}

#[derive(Serialize)]
struct ForecastConfig {
    input: String,
    filter: PopulationFilter,
    target: Option<String>,
    element_map: Option<String>,
    pooling: Pooling,
}

fn print_forecast(report: &ForecastReport) {
    for (name, s) in [
        ("centrality", &report.centrality),
        ("overall mean", &report.overall_mean),
        ("element mean", &report.element_mean),
    ] {
        println!(
            "{name:<13} deviation: median {:.3}, IQR {:.3} [{:.3}, {:.3}]",
            s.median, s.iqr, s.q1, s.q3
        );
    }
    for (name, t) in [
        ("overall mean", &report.vs_overall_mean),
        ("element mean", &report.vs_element_mean),
    ] {
        println!(
            "centrality vs {name}: V = {:.1}, p = {:.3e}, CLES = {:.3}",
            t.statistic, t.p_value, t.effect_size
        );
    }
}

pub fn forecast(args: &ForecastArgs) -> CliResult<()> {
    let started = now();
    let filter: PopulationFilter = args.filter.parse()?;
    let pooling = match args.pooling {
        PoolingArg::Pooled => Pooling::Pooled,
        PoolingArg::PerCandidate => Pooling::PerCandidate,
    };
    let config = ForecastConfig {
        input: args.input.display().to_string(),
        filter,
        target: args.target.clone(),
        element_map: args.element_map.as_ref().map(|p| p.display().to_string()),
        pooling,
    };
    let mut manifest = RunManifest::new("forecast", &config, None);
    let datasets = load_survey(&mut manifest, &args.input)?;
    let map = match &args.element_map {
        Some(path) => {
            let bytes = manifest.read_input(path)?;
            parse_json::<ElementMap>(&bytes, path)?
        }
        None => ElementMap::default(),
    };
    let analyses = analyze_all(&datasets, filter)?;
    let report = match &args.target {
        Some(t) => forecast_impact(&analyses, t, &map, pooling)?,
        None => forecast_all(&analyses, &map, pooling)?,
    };

    create_dir(&args.out)?;
    let embedded = manifest.embedded();
    write_json(
        &args.out.join("forecast.json"),
        &Envelope {
            manifest: &embedded,
            body: &report,
        },
    )?;
    report.write_csv(create_file(&args.out.join("forecast.csv"))?)?;
    print_forecast(&report);
    manifest.write_timestamped(&args.out, started)?;
    Ok(())
}

pub fn synth(args: &SynthArgs) -> CliResult<()> {
    let started = now();
    let mut inputs = RunManifest::new("synth", &(), None);
    let mut spec = match &args.spec {
        Some(path) => {
            let bytes = inputs.read_input(path)?;
            parse_json::<SynthSpec>(&bytes, path)?
        }
        None => SynthSpec::default(),
    };
    if !spec.elections.is_empty() && (args.elections.is_some() || args.candidates.is_some()) {
        return Err(CliError::Usage(
            "--elections and --candidates cannot be combined with a spec that lists elections".into(),
        ));
    }
    if let Some(e) = args.elections {
        spec.election_count = e as usize;
    }
    if let Some(c) = args.candidates {
        spec.candidate_count = c as usize;
    }
    if let Some(r) = args.respondents {
        spec.respondents = r as usize;
    }
    let mut manifest = RunManifest::new("synth", &spec, Some(args.seed));
    manifest.inputs = inputs.inputs;
    let output = gen_synthetic_elections(&spec, args.seed)?;

    create_dir(&args.out)?;
    let csv_path = args.out.join("elections.csv");
    write_datasets(&output.datasets, create_file(&csv_path)?)?;
    let embedded = manifest.embedded();
    write_json(
        &args.out.join("truth.json"),
        &Envelope {
            manifest: &embedded,
            body: serde_json::json!({ "truth": output.truth }),
        },
    )?;
    let blocks: usize = output.datasets.iter().map(|d| d.candidates.len()).sum();
    println!(
        "{} elections, {blocks} candidate blocks written to {}",
        output.datasets.len(),
        csv_path.display()
    );
    manifest.write_timestamped(&args.out, started)?;
    Ok(())
}
