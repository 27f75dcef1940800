use std::path::Path;
use std::process::{Command, Output};

use microgrid_resilience::{classify_value, ComparisonReport, RatingLevel, RunReport};
use serde_json::{json, Value};

fn mgres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgres"))
        .args(args)
        .output()
        .expect("spawn mgres")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn builtin_document() -> Value {
    let o = mgres(&["builtin", "new-england"]);
    assert_eq!(o.status.code(), Some(0));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, value: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_vec_pretty(value).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn validate_builtin_file_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ne.json", &builtin_document());
    let o = mgres(&["validate", &path]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("15 threats, 51 pairs"));
}

#[test]
fn validate_reports_one_issue_for_bad_importance() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = builtin_document();
    doc["threats"][0]["importance"] = json!(2);
    let path = write(dir.path(), "bad.json", &doc);
    let o = mgres(&["validate", &path]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1, "{out}");
    assert!(out.contains("Hurricane") && out.contains("importance"), "{out}");
}

#[test]
fn validate_missing_file_is_io_error() {
    let o = mgres(&["validate", "/nonexistent/scenario.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/scenario.json"));
}

#[test]
fn malformed_json_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, b"{\"name\": ").unwrap();
    let o = mgres(&["run", path.to_str().unwrap(), "--iterations", "100"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn bad_config_and_usage_exit_one() {
    assert_eq!(
        mgres(&["run", "@new-england", "--iterations", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(mgres(&["run", "@new-england", "--bins", "0"]).status.code(), Some(1));
    assert_eq!(mgres(&["run", "@elsewhere"]).status.code(), Some(1));
    assert_eq!(mgres(&["run"]).status.code(), Some(1));
    assert_eq!(mgres(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_run_is_deterministic_and_consistent() {
    let args = ["run", "@new-england", "--iterations", "50000", "--format", "json"];
    let a = mgres(&args);
    let b = mgres(&[&args[..], &["--workers", "2"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let report: RunReport = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report.config.iterations, 50_000);
    let r = &report.resilience;
    let composed = 1.0 - (report.operational.mean + report.infrastructural.mean) / 2.0;
    assert!((r.mean - composed).abs() < 1e-12);
    assert!(r.min <= r.mean && r.mean <= r.max);
    assert_eq!(r.histogram.total(), 50_000);
    for d in [&report.operational, &report.infrastructural] {
        assert!(0.0 <= d.min && d.max <= 1.0);
        assert_eq!(d.pairs.len(), 51);
        let level = classify_value(d.mean.cbrt()).unwrap();
        assert!(matches!(level, RatingLevel::Low | RatingLevel::Moderate));
    }
}

#[test]
fn text_run_shows_ratings_and_resilience() {
    let o = mgres(&["run", "@new-england", "--iterations", "20000"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("operational risk"));
    assert!(out.contains("infrastructural risk"));
    assert!(out.contains("total resilience"));
    assert_eq!(
        out.matches("(Moderate)").count() + out.matches("(Low)").count(),
        2,
        "{out}"
    );
}

#[test]
fn histogram_csv_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hist.csv");
    let o = mgres(&[
        "run",
        "@new-england",
        "--iterations",
        "10000",
        "--bins",
        "20",
        "--histogram-csv",
        path.to_str().unwrap(),
        "--histogram-of",
        "operational",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("bin_lo,bin_hi,count"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 20);
    let total: u64 = rows.iter().map(|r| r[2].parse::<u64>().unwrap()).sum();
    assert_eq!(total, 10_000);
    for pair in rows.windows(2) {
        assert_eq!(pair[0][1], pair[1][0]);
    }
}

#[test]
fn histogram_to_unwritable_path_is_io_error() {
    let o = mgres(&[
        "run",
        "@new-england",
        "--iterations",
        "100",
        "--histogram-csv",
        "/nonexistent/dir/h.csv",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_without_patches_is_baseline_only() {
    let o = mgres(&["compare", "@new-england", "--iterations", "10000", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: ComparisonReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report.patches.is_empty() && report.ranking.is_empty());
    let text = stdout(&mgres(&["compare", "@new-england", "--iterations", "10000"]));
    assert!(text.contains("(no patches)"));
}

#[test]
fn identity_patch_has_zero_deltas() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "identity.json",
        &json!({"name": "identity", "description": "", "ops": []}),
    );
    let o = mgres(&["compare", "@new-england", "-p", &path, "--iterations", "10000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("identity")).unwrap();
    assert_eq!(row.matches("0.00%").count(), 2, "{row}");
}

#[test]
fn compare_builtin_patches_ranks_both() {
    let o = mgres(&[
        "compare",
        "@new-england",
        "-p",
        "@underground-distribution",
        "-p",
        "@harden-generation",
        "--iterations",
        "20000",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: ComparisonReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.ranking.len(), 2);
    for p in &report.patches {
        assert!(
            p.deltas.op_risk_abs > 0.0 && p.deltas.infra_risk_abs > 0.0,
            "{}",
            p.name
        );
        assert!(p.report.resilience.mean > report.baseline.resilience.mean);
    }
}

#[test]
fn patch_referencing_unknown_threat_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "p.json",
        &json!({"name": "p", "description": "", "ops": [{"op": "set_importance", "threat": "Meteor", "importance": 0.5}]}),
    );
    let o = mgres(&["compare", "@new-england", "-p", &path, "--iterations", "100"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Meteor"));
}

#[test]
fn builtin_patch_documents_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["underground-distribution", "harden-generation"] {
        let o = mgres(&["builtin", name]);
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, &o.stdout).unwrap();
        let from_file = mgres(&[
            "compare",
            "@new-england",
            "-p",
            path.to_str().unwrap(),
            "--iterations",
            "5000",
            "--format",
            "json",
        ]);
        let builtin = mgres(&[
            "compare",
            "@new-england",
            "-p",
            &format!("@{name}"),
            "--iterations",
            "5000",
            "--format",
            "json",
        ]);
        assert_eq!(from_file.status.code(), Some(0));
        assert_eq!(from_file.stdout, builtin.stdout);
    }
}

#[test]
fn serve_answers_http_and_busy_port_is_io_error() {
    use std::io::{BufRead, BufReader, Read, Write};
    use std::process::Stdio;

    let mut server = Command::new(env!("CARGO_BIN_EXE_mgres"))
        .args(["serve", "--port", "0"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(server.stdout.take().unwrap()).read_line(&mut line).unwrap();
    let addr = line.trim().strip_prefix("listening on http://").expect(&line).to_string();

    let mut stream = std::net::TcpStream::connect(&addr).unwrap();
    write!(stream, "GET /api/builtin/new-england HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n").unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();

    let port = addr.rsplit(':').next().unwrap().to_string();
    let busy = mgres(&["serve", "--port", &port]);
    server.kill().unwrap();
    server.wait().unwrap();

    assert!(response.starts_with("HTTP/1.1 200"), "{response}");
    assert!(response.contains("Coastal New England Microgrid"));
    assert_eq!(busy.status.code(), Some(2));
}
