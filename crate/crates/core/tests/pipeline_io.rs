mod common;

use std::fs;

use fairdiv::pipeline::config::{ExperimentConfig, QuotaSpec};
use fairdiv::pipeline::experiment::run_experiment;
use fairdiv::pipeline::ingest::{load_dataset, write_dataset, Format};
use fairdiv::{Error, Measure, Metric, Quota};

const D1: &str = r#"{"id":0,"vec":[0],"color":0}
{"id":1,"vec":[1],"color":1}
{"id":2,"vec":[4],"color":0}
{"id":3,"vec":[9],"color":1}
{"id":4,"vec":[10],"color":0}
"#;

#[test]
fn experiment_on_a_file_matches_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d1.jsonl");
    fs::write(&data, D1).unwrap();
    let cfg = ExperimentConfig {
        dataset: Some(data),
        quota: QuotaSpec::Explicit(Quota::new(vec![2, 1])),
        measures: vec![Measure::SumNn],
        ..ExperimentConfig::default()
    };
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.rows[0].full_value, 13.0);
    assert_eq!(report.rows[0].n, 5);
}

#[test]
fn identical_config_gives_identical_csv() {
    let cfg = ExperimentConfig::from_toml_str(
        r#"
        n = 300
        dim = 5
        colors = 3
        quota = "ramp:1"
        measures = "all"
        use_coresets = true
        compare_dm = true
        partitions = 2
        seed = 4
        "#,
    )
    .unwrap();
    let csv = || {
        let report = run_experiment(&cfg).unwrap();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        report.write_csv(&mut a, false).unwrap();
        report.write_dm_csv(&mut b).unwrap();
        (a, b)
    };
    let first = csv();
    assert_eq!(first, csv());
    assert_eq!(String::from_utf8(first.0).unwrap().lines().count(), 4);
}

#[test]
fn timestamped_csv_gets_colored_by_interval() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    fs::write(&path, "id,t,v0,v1\n0,0,1,0\n1,25,0,1\n2,99,1,1\n3,100,2,2\n").unwrap();
    let ds = load_dataset(&path, Format::Csv, Some(4), Metric::Angular).unwrap();
    let colors: Vec<usize> = ds.points().iter().map(|p| p.color).collect();
    assert_eq!(colors, vec![0, 1, 3, 3]);
    assert!(load_dataset(&path, Format::Csv, None, Metric::Angular).is_err());
}

#[test]
fn written_datasets_load_back() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("d1.jsonl");
    fs::write(&src, D1).unwrap();
    let ds = load_dataset(&src, Format::Jsonl, None, Metric::Euclidean).unwrap();
    for (name, format) in [("out.csv", Format::Csv), ("out.jsonl", Format::Jsonl)] {
        let path = dir.path().join(name);
        write_dataset(&ds, &path, format).unwrap();
        let back = load_dataset(&path, Format::from_path(&path), None, Metric::Euclidean).unwrap();
        assert_eq!(back.points(), ds.points());
    }
}

#[test]
fn errors_name_the_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    fs::write(&path, "{\"id\":0,\"vec\":[1],\"color\":0}\n{\"id\":1,\"vec\":[1,\"x\"],\"color\":0}\n").unwrap();
    let err = load_dataset(&path, Format::Jsonl, None, Metric::Euclidean).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    assert!(err.to_string().contains("bad.jsonl:2"));

    let missing = load_dataset(&dir.path().join("nope.jsonl"), Format::Jsonl, None, Metric::Euclidean);
    assert!(matches!(missing, Err(Error::Io { .. })));
}

#[test]
fn infeasible_quota_is_reported_before_solving() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d1.jsonl");
    fs::write(&data, D1).unwrap();
    let cfg = ExperimentConfig {
        dataset: Some(data),
        quota: QuotaSpec::Uniform(3),
        ..ExperimentConfig::default()
    };
    assert!(matches!(run_experiment(&cfg), Err(Error::InfeasibleQuota { color: 1, .. })));
}
