use std::process::{Command, Output};

use dstrings::experiment::{
    emit_report, parse_report, run, ExperimentConfig, ExperimentName, ExperimentReport, OutputFormat,
};

fn dstrings(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dstrings"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn small_report(name: ExperimentName) -> ExperimentReport {
    let cfg = ExperimentConfig::new(name).with_params(1.0, 2.0).with_replicates(2_000);
    run(&cfg).unwrap()
}

#[test]
fn json_round_trips() {
    for name in [ExperimentName::FellerUniformity, ExperimentName::PlusDependence] {
        let report = small_report(name);
        let bytes = emit_report(&report, OutputFormat::Json).unwrap();
        assert!(bytes.ends_with(b"}\n"));
        let back = parse_report(&bytes).unwrap();
        assert_eq!(emit_report(&back, OutputFormat::Json).unwrap(), bytes);
        assert_eq!(back.tests.len(), report.tests.len());
        assert_eq!(back.experiment, name);
    }
}

#[test]
fn csv_has_one_row_per_test() {
    let report = small_report(ExperimentName::SwappedDependence);
    let bytes = emit_report(&report, OutputFormat::Csv).unwrap();
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["experiment", "test", "theoretical", "empirical", "statistic", "p_value", "verdict"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), report.tests.len());
    assert!(rows.iter().all(|r| &r[0] == "swapped-dependence"));
    assert!(rows.iter().all(|r| &r[6] == "pass" || &r[6] == "fail"));
}

#[test]
fn empty_test_list_stays_an_array() {
    let mut report = small_report(ExperimentName::FellerUniformity);
    report.tests.clear();
    let text = String::from_utf8(emit_report(&report, OutputFormat::Json).unwrap()).unwrap();
    assert!(text.contains("\"tests\": []"), "{text}");
}

#[test]
fn passing_run_writes_file_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = dstrings(&[
        "--experiment",
        "feller-uniformity",
        "--replicates",
        "5000",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = parse_report(&std::fs::read(&path).unwrap()).unwrap();
    assert!(report.passed);
    assert!(report.wall_clock_seconds.is_some());
}

#[test]
fn stdout_csv_when_no_path() {
    let out = dstrings(&["--experiment", "feller-uniformity", "--replicates", "5000", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("experiment,test,"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn failing_verdict_exits_one() {
    // no sample of this size gets within 1e-9 in total variation
    let out = dstrings(&[
        "--experiment",
        "enumeration-oracle",
        "--a",
        "2",
        "--b",
        "1",
        "--replicates",
        "2000",
        "--dmax",
        "4",
        "--tv-threshold",
        "1e-9",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = parse_report(&out.stdout).unwrap();
    assert!(report.retried);
    assert!(!report.passed);
    assert!(String::from_utf8_lossy(&out.stderr).contains("tv_z1"));
}

#[test]
fn invalid_configuration_exits_two() {
    for args in [
        &["--experiment", "bern-counts", "--a", "-1"][..],
        &["--experiment", "bern1-counts", "--a", "1", "--b", "0.5", "--replicates", "10"][..],
        &["--experiment", "plus-dependence", "--b", "0"][..],
        &["--experiment", "no-such-experiment"][..],
    ] {
        let out = dstrings(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("report.json");
    let out = dstrings(&[
        "--experiment",
        "feller-uniformity",
        "--replicates",
        "2000",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!path.exists());
}

#[test]
fn same_seed_same_bytes_through_the_binary() {
    let args = ["--experiment", "cmpp-equivalence", "--a", "1", "--b", "2", "--replicates", "3000", "--seed", "9"];
    let strip = |bytes: Vec<u8>| {
        let mut v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        v.as_object_mut().unwrap().remove("wall_clock_seconds");
        v
    };
    let first = dstrings(&args);
    let second = dstrings(&args);
    assert_eq!(strip(first.stdout), strip(second.stdout));
}
