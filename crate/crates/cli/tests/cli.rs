use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const PSI: &str = r#"{"kind": "polynomial_image", "coeffs": [[0,0],[1,0],[0.25,0]]}"#;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sphere-mergelyan"));
    cmd.env_remove("SPHERE_MERGELYAN_JOBS");
    cmd
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

#[test]
fn selftest_passes_and_debug_hook_fails_it() {
    let (code, out, _) = run(bin().args(["selftest", "--samples", "500"]));
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("domain validation fixtures"));

    let (code, out, _) = run(bin().args(["--debug-chi-scale", "2", "selftest", "--samples", "500"]));
    assert_eq!(code, 3);
    let failing: Vec<_> = out.lines().filter(|l| l.contains("FAILED")).collect();
    assert_eq!(failing.len(), 1, "{out}");
    assert!(failing[0].starts_with("χ(a,b) ≤ |a−b|"));
}

#[test]
fn convergence_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("table.csv");
    let config = write(
        dir.path(),
        "inf.json",
        &format!(
            r#"{{"domain": {PSI}, "function": {{"kind": "inf_const"}}, "metric": "chi",
                "degrees": [1, 10, 100], "output": "{}"}}"#,
            csv.display()
        ),
    );
    let svg = dir.path().join("chart.svg");
    let (code, out, err) = run(bin().arg("convergence").arg(&config).arg("--svg").arg(&svg));
    assert_eq!(code, 0, "{err}");
    assert!(out.is_empty());
    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("degree,disc_stage,mergelyan_stage,total,seconds"));
    let totals: Vec<f64> = lines.map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    let expected = [1.0 / 2f64.sqrt(), 1.0 / 101f64.sqrt(), 1.0 / 10001f64.sqrt()];
    for (t, e) in totals.iter().zip(expected) {
        assert!((t - e).abs() <= 1e-12, "{table}");
    }
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn timings_fill_the_seconds_column() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "c.json",
        &format!(r#"{{"domain": {PSI}, "function": {{"kind": "inf_const"}}, "metric": "chi", "degrees": [2]}}"#),
    );
    let (_, plain, _) = run(bin().arg("convergence").arg(&config));
    assert!(plain.lines().nth(1).unwrap().ends_with(','));
    let (code, timed, _) = run(bin().arg("convergence").arg(&config).arg("--timings"));
    assert_eq!(code, 0);
    let seconds: f64 = timed
        .lines()
        .nth(1)
        .unwrap()
        .rsplit(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(seconds >= 0.0);
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (
            "syntax.json",
            "{\n  \"domain\": {\"kind\": \"unit_disc\"},\n  \"metric\": chi\n}",
            "line 3",
        ),
        (
            "unknown.json",
            r#"{"domain": {"kind": "unit_disc"}, "function": {"kind": "inf_const"}, "metric": "chi", "degrees": [1], "degre": 2}"#,
            "degre",
        ),
        (
            "metric.json",
            r#"{"domain": {"kind": "unit_disc"}, "function": {"kind": "inf_type", "h": [[0,0],[1,0]]}, "metric": "chi", "degrees": [8]}"#,
            "metric",
        ),
        (
            "degrees.json",
            r#"{"domain": {"kind": "unit_disc"}, "function": {"kind": "inf_const"}, "metric": "chi", "degrees": [4, 2]}"#,
            "degrees",
        ),
    ];
    for (name, text, needle) in cases {
        let config = write(dir.path(), name, text);
        let (code, _, err) = run(bin().arg("convergence").arg(&config));
        assert_eq!(code, 1, "{name}: {err}");
        assert!(err.contains(needle), "{name}: {err}");
    }
    let (code, _, _) = run(bin().args(["approx", "/nonexistent/config.json"]));
    assert_eq!(code, 1);
}

#[test]
fn rejected_domain_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "bad.json",
        r#"{"domain": {"kind": "polynomial_image", "coeffs": [[0,0],[1,0],[1,0]]},
            "function": {"kind": "inf_const"}, "metric": "chi", "degrees": [1]}"#,
    );
    let (code, out, err) = run(bin().arg("validate-domain").arg(&config));
    assert_eq!(code, 2, "{err}");
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["failures"][0]["check"], "critical_point");
    let (code, _, _) = run(bin().arg("convergence").arg(&config));
    assert_eq!(code, 2);
}

#[test]
fn validate_and_approx_print_json() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "geom.json",
        &format!(
            r#"{{"domain": {PSI}, "function": {{"kind": "boundary_pole", "num": [[1,0]], "den": [[1,0],[-1,0]]}},
                "metric": "chi", "degrees": [8, 16]}}"#
        ),
    );
    let (code, out, _) = run(bin().arg("validate-domain").arg(&config));
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["winding_number"], 1);

    let (code, out, err) = run(bin().arg("approx").arg(&config).args(["--degree", "8"]));
    assert_eq!(code, 0, "{err}");
    let result: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(result["report"]["degree"], 8);
    assert_eq!(result["coefficients"].as_array().unwrap().len(), 9);
    assert!(result["report"]["total"].as_f64().unwrap() > 0.0);
}

#[test]
fn jobs_can_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "c.json",
        &format!(r#"{{"domain": {PSI}, "function": {{"kind": "inf_const"}}, "metric": "chi", "degrees": [3]}}"#),
    );
    let (code, _, err) = run(bin().env("SPHERE_MERGELYAN_JOBS", "2").arg("convergence").arg(&config));
    assert_eq!(code, 0, "{err}");
    let (code, _, _) = run(bin().args(["--jobs", "0", "convergence"]).arg(&config));
    assert_eq!(code, 1);
}
