use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ncg_cli::CliError;
use ncg_core::NcgError;
use serde_json::Value;
use tempfile::TempDir;

fn write_scenario(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn ncg(scenario: &Path, extra: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ncg"));
    cmd.arg("--scenario").arg(scenario).args(extra);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn json_report(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn classify_counts_on_m3() {
    let dir = TempDir::new().unwrap();
    for (partition, count) in [("[1,1,1]", 64), ("[2,1]", 6), ("[3]", 2)] {
        let body = format!(r#"{{"mode":"classify","n":3,"rep":{{"partition":{partition}}}}}"#);
        let path = write_scenario(&dir, "c.json", &body);
        let out = ncg(&path, &[], &[]);
        let text = String::from_utf8(out.stdout.clone()).unwrap();
        assert!(
            text.contains(&format!("\"scalar_field_count\": {count}")),
            "{text}"
        );
        let report = json_report(&out);
        assert_eq!(report["schema"], "ncg-report/1");
        assert!(report["results"]["tolerance"].is_f64());
    }
}

#[test]
fn verify_calculus_passes_at_seed_42() {
    let dir = TempDir::new().unwrap();
    let path = write_scenario(
        &dir,
        "v.json",
        r#"{"mode":"verify-calculus","n":2,"seed":1}"#,
    );
    let report = json_report(&ncg(&path, &["--seed", "42", "--trials", "100"], &[]));
    assert_eq!(report["scenario"]["seed"], 42);
    assert_eq!(report["all_passed"], true);
    for check in report["results"]["checks"].as_array().unwrap() {
        assert!(check["tolerance"].as_f64().unwrap() > 0.0);
        assert_eq!(check["passed"], true, "{check}");
    }
}

#[test]
fn spherical_ordinary_limit_rotation_defect() {
    let dir = TempDir::new().unwrap();
    let path = write_scenario(
        &dir,
        "s.json",
        r#"{"mode":"spherical","seed":5,"trials":50,"fields":{"phi":["1","0"],"eta":"1"}}"#,
    );
    let report = json_report(&ncg(&path, &[], &[]));
    let checks = report["results"]["checks"].as_array().unwrap();
    let rot = checks
        .iter()
        .find(|c| c["name"] == "rotation_invariance")
        .unwrap();
    assert!(rot["max_residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(report["all_passed"], true);
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let path = write_scenario(
        &dir,
        "s.json",
        r#"{"mode":"spherical","seed":3,"trials":20,
            "fields":{"a_t":"0.2*sin(t)","psi":["0.5*exp(-r)","0.1"],"phi":["cos(r)","0.3*t"],"eta":"0.8"}}"#,
    );
    for format in ["json", "csv"] {
        let a = dir.path().join(format!("a.{format}"));
        let b = dir.path().join(format!("b.{format}"));
        let run = |out: &Path, threads: &str| {
            let o = ncg(
                &path,
                &["--format", format, "--out", out.to_str().unwrap()],
                &[("NCG_THREADS", threads)],
            );
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        };
        run(&a, "1");
        run(&b, "4");
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
}

#[test]
fn csv_sweep_header_and_rows() {
    let dir = TempDir::new().unwrap();
    let path = write_scenario(
        &dir,
        "t.json",
        r#"{"mode":"transition","trials":5,
            "grid":{"t":[0.0],"r":[1.0,2.0],"theta":[0.5],"phi":[0.0,1.0]}}"#,
    );
    let out = ncg(&path, &["--format", "csv"], &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,r,theta,phi,component,re,im"));
    assert_eq!(lines.count(), 4 * 21);
}

#[test]
fn schema_violations_exit_with_2() {
    let dir = TempDir::new().unwrap();
    let cases = [
        "{not json",
        r#"{"mode":"classify","n":7,"rep":{"partition":[7]}}"#,
        r#"{"mode":"classify","n":3}"#,
        r#"{"mode":"classify","n":3,"rep":{"partition":[2,2]}}"#,
        r#"{"mode":"unknown"}"#,
        r#"{"mode":"transition","grid":{"t":[0],"r":[1],"theta":[0],"phi":[0]}}"#,
    ];
    for body in cases {
        let path = write_scenario(&dir, "bad.json", body);
        assert_eq!(ncg(&path, &[], &[]).status.code(), Some(2), "{body}");
    }
    let path = write_scenario(
        &dir,
        "ok.json",
        r#"{"mode":"classify","n":2,"rep":{"partition":[2]}}"#,
    );
    assert_eq!(ncg(&path, &["--format", "csv"], &[]).status.code(), Some(2));
    assert_eq!(
        ncg(&path, &[], &[("NCG_THREADS", "many")]).status.code(),
        Some(2)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(ncg(&missing, &[], &[]).status.code(), Some(2));
}

#[test]
fn error_classes_map_to_exit_codes() {
    let ambiguous = NcgError::AmbiguousRank {
        singular_value: 1e-9,
        threshold: 1e-8,
    };
    assert_eq!(CliError::compute(ambiguous.clone()).exit_code(), 3);
    assert_eq!(CliError::input(ambiguous).exit_code(), 3);
    assert_eq!(CliError::compute(NcgError::NonFinite).exit_code(), 1);
    assert_eq!(CliError::input(NcgError::NonFinite).exit_code(), 2);
}
