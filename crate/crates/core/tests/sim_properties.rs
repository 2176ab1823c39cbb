use attnet_core::sim::{run_study, StudyConfig};

fn small(replicates: usize) -> StudyConfig {
    StudyConfig {
        replicates,
        variations: 20,
        individuals: 1000,
        seed: 42,
        ..StudyConfig::default()
    }
}

#[test]
fn identical_seeds_give_identical_reports() {
    let cfg = StudyConfig {
        variations: 5,
        individuals: 300,
        ..small(2)
    };
    let a = run_study(&cfg).unwrap();
    let b = run_study(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn single_combination_reproduces_its_slice_of_a_full_run() {
    let cfg = StudyConfig {
        variations: 4,
        individuals: 300,
        ..small(2)
    };
    let full = run_study(&cfg).unwrap();
    let one = run_study(&StudyConfig {
        generator: "ws".into(),
        weights: "pareto".into(),
        ..cfg
    })
    .unwrap();
    let slice: Vec<_> = full
        .replicates
        .iter()
        .filter(|r| r.generator == "ws" && r.weights == "pareto")
        .cloned()
        .collect();
    assert_eq!(one.replicates, slice);
}

#[test]
fn connectivity_impact_correlation_is_negative_in_nearly_every_replicate() {
    let report = run_study(&small(12)).unwrap();
    let used: Vec<f64> = report
        .replicates
        .iter()
        .filter(|r| !r.flagged)
        .filter_map(|r| r.connectivity_r)
        .collect();
    assert!(used.len() >= 100, "{} usable replicates", used.len());
    let negative = used.iter().filter(|&&r| r < 0.0).count();
    assert!(negative as f64 >= 0.95 * used.len() as f64, "{negative}/{}", used.len());
}
