use std::process::Command;

use loopbound::harness::{default_config, emit_report, run_scenario, Report, ReportFormat};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loopbound"))
}

#[test]
fn list_prints_every_scenario() {
    let out = bin().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("flat-cone-example-2-9"));
    assert!(text.contains("great-circle-equality"));
}

#[test]
fn run_writes_json_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gc.json");
    let out = bin().args(["run", "--scenario", "great-circle-equality", "--out"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.scenario, "great-circle-equality");
    for v in &report.verdicts {
        assert!(v.margin.abs() <= 1e-9, "{}: {}", v.name, v.margin);
    }
}

#[test]
fn csv_rows_recompute_margin() {
    let out = bin().args(["run", "--scenario", "corollary-constants", "--format", "csv"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), ["scenario", "name", "lhs", "rhs", "margin", "holds"]);
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let (lhs, rhs, margin): (f64, f64, f64) = (rec[2].parse().unwrap(), rec[3].parse().unwrap(), rec[4].parse().unwrap());
        assert_eq!(margin, lhs - rhs);
        rows += 1;
    }
    let report = run_scenario(&default_config("corollary-constants").unwrap()).unwrap();
    assert_eq!(rows, report.verdicts.len());
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"name": "flat-cone-example-2-9", "seed": 3, "params": {"a": 0.1}}"#).unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report = Report::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(report.inputs.params["a"], 0.1);
    assert_eq!(report.inputs.seed, 3);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"name": "f-nonneg", "seed": 1, "params": {"nope": 1}}"#).unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("params.nope"));

    let out = bin().args(["run", "--scenario", "no-such-thing"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["run", "--scenario", "f-nonneg", "--format", "xml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn violated_verdict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.json");
    // A negative tolerance cannot be met.
    std::fs::write(&cfg, r#"{"name": "turning-angle-latitude", "seed": 1, "params": {"circle_tol": -1.0}}"#).unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_reproducible() {
    let cfg = default_config("bishop-gromov-sphere").unwrap();
    let a = emit_report(&Report { runtime_ms: 0, ..run_scenario(&cfg).unwrap() }, ReportFormat::Json).unwrap();
    let b = emit_report(&Report { runtime_ms: 0, ..run_scenario(&cfg).unwrap() }, ReportFormat::Json).unwrap();
    assert_eq!(a, b);
    let parsed = Report::from_json(std::str::from_utf8(&a).unwrap()).unwrap();
    assert_eq!(emit_report(&parsed, ReportFormat::Json).unwrap(), a);
}
