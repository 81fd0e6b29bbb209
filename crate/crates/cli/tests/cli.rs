use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command as Process;

use sbem_cli::checks::run_kernel_checks;
use sbem_cli::config::{parse_config_text, Command, RunConfig};
use sbem_cli::run::{run_solve, run_validate_sphere};
use sbem_cli::CliError;

fn sbem() -> Process {
    Process::new(env!("CARGO_BIN_EXE_sbem"))
}

fn config(command: Command, pairs: &[(&str, &str)], out: &Path) -> RunConfig {
    let mut s: BTreeMap<String, String> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    s.insert("out".into(), out.display().to_string());
    RunConfig::from_settings(command, &s).unwrap()
}

#[test]
fn missing_mesh_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no-such-body.obj");
    let out = sbem()
        .args(["solve", "--mesh", missing.to_str().unwrap(), "--size-lambda", "1", "--out"])
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-body.obj"));
}

#[test]
fn usage_errors_exit_with_one() {
    let out = sbem().args(["solve", "--sphere-subdiv", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = sbem().args(["solve", "--sphere-subdiv", "1", "--size-lambda", "1", "--q", "x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("q:"));
    let out = sbem().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "sphere_subdiv = 1\nsize_lambda = 0.5\nmaxit = 1\ndirections = 4x8\n").unwrap();
    let out = sbem()
        .args(["solve", "--config", path.to_str().unwrap(), "--maxit", "50", "--out"])
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config"]["maxit"], 50);
    assert_eq!(summary["config"]["directions"], serde_json::json!([4, 8]));
}

#[test]
fn config_parser_rejects_malformed_lines() {
    assert!(matches!(parse_config_text("N 16"), Err(CliError::Config(_))));
    assert_eq!(parse_config_text("n = 16").unwrap()["N"], "16");
}

#[test]
fn threshold_zero_always_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = sbem()
        .args(["validate-sphere", "--sphere-subdiv", "1", "--size-lambda", "0.5", "--directions", "4x8", "--threshold", "0", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("validation.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    assert!(report["farfield_error"].as_f64().unwrap() > 0.0);
}

#[test]
fn non_convergence_still_writes_a_flagged_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(Command::Solve, &[("sphere-subdiv", "1"), ("size-lambda", "1"), ("maxit", "2"), ("directions", "4x8")], dir.path());
    let err = run_solve(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["converged"], false);
    assert_eq!(summary["iterations"], 2);
    assert!(dir.path().join("density.csv").exists());
    assert!(dir.path().join("farfield.csv").exists());
}

#[test]
fn summary_has_the_result_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(Command::Solve, &[("sphere-subdiv", "2"), ("size-lambda", "1"), ("directions", "4x8")], dir.path());
    run_solve(&cfg).unwrap();
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    for key in [
        "n", "N", "delta", "p", "q", "filter", "eta", "kappa", "lambda", "iterations", "converged", "residuals",
        "true_residual", "time_per_iteration_s", "total_time_s", "ghat_time_s", "mem_bytes", "config",
    ] {
        assert!(summary.get(key).is_some(), "missing {key}");
    }
    assert_eq!(summary["n"], 320);
    assert_eq!(summary["p"], 4);
    assert_eq!(summary["q"], 5);
    assert_eq!(summary["filter"], "power");
    let kappa = summary["kappa"].as_f64().unwrap();
    assert!((summary["eta"].as_f64().unwrap() - kappa / 2.0).abs() < 1e-15);
    let density = std::fs::read_to_string(dir.path().join("density.csv")).unwrap();
    assert_eq!(density.lines().next(), Some("panel,cx,cy,cz,re,im"));
    assert_eq!(density.lines().count(), 321);
    let farfield = std::fs::read_to_string(dir.path().join("farfield.csv")).unwrap();
    assert_eq!(farfield.lines().count(), 1 + 32);
}

#[test]
fn sphere_at_six_wavelengths_with_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let pairs = [
        ("sphere-subdiv", "4"),
        ("size-lambda", "6.25"),
        ("directions", "8x16"),
        ("cache", cache.to_str().unwrap()),
        ("workers", "1"),
    ];
    let cold = run_solve(&config(Command::Solve, &pairs, &dir.path().join("cold"))).unwrap();
    assert_eq!(cold.summary.grid, 16);
    assert!((cold.summary.delta - 1.0e-4).abs() < 1e-12 * 1.0e-4, "{}", cold.summary.delta);
    assert!(cold.summary.iterations <= 20, "{}", cold.summary.iterations);
    assert!(!cold.summary.cache_hit);
    let warm = run_solve(&config(Command::Solve, &pairs, &dir.path().join("warm"))).unwrap();
    assert!(warm.summary.cache_hit);
    assert!(warm.result.times.setup_s < cold.result.times.setup_s);
    let a = std::fs::read(dir.path().join("cold/density.csv")).unwrap();
    let b = std::fs::read(dir.path().join("warm/density.csv")).unwrap();
    assert_eq!(a, b);
    assert!(cold.result.density.iter().zip(&warm.result.density).all(|(x, y)| x.re.to_bits() == y.re.to_bits()
        && x.im.to_bits() == y.im.to_bits()));
}

#[test]
fn validate_sphere_passes_a_loose_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        Command::ValidateSphere,
        &[("sphere-subdiv", "3"), ("size-lambda", "1"), ("directions", "8x16"), ("threshold", "0.5")],
        dir.path(),
    );
    let (_, report) = run_validate_sphere(&cfg).unwrap();
    assert!(report.passed, "{}", report.farfield_error);
    assert!(report.converged);
}

#[test]
fn kernel_check_default_passes() {
    let report = run_kernel_checks(false);
    assert!(report.all_passed, "{report:?}");
    let split = report.properties.iter().find(|p| p.name == "split_identity").unwrap();
    assert!(split.measured <= 1e-12);
    assert_eq!(report.properties.len(), 4);
}

#[test]
fn kernel_check_detects_residue_fault() {
    let dir = tempfile::tempdir().unwrap();
    let out = sbem().args(["kernel-check", "--inject-fault", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("kernel_check.json")).unwrap()).unwrap();
    let props = report["properties"].as_array().unwrap();
    let residue = props.iter().find(|p| p["name"] == "residue_sum").unwrap();
    assert_eq!(residue["passed"], false);
    assert_eq!(report["all_passed"], false);
}

#[test]
fn worker_count_does_not_change_the_answer() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = [("sphere-subdiv", "2"), ("size-lambda", "1.5"), ("directions", "4x8")];
    let run = |threads: usize, sub: &str| {
        let cfg = config(Command::Solve, &pairs, &dir.path().join(sub));
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| run_solve(&cfg)).unwrap().result.density
    };
    let one = run(1, "a");
    let again = run(1, "b");
    let four = run(4, "c");
    assert_eq!(one, again);
    let norm = |v: &[sbem::C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let diff: Vec<sbem::C64> = one.iter().zip(&four).map(|(a, b)| a - b).collect();
    assert!(norm(&diff) <= 1e-12 * norm(&one), "{}", norm(&diff) / norm(&one));
}
