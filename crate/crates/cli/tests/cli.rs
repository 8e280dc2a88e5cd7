//! End-to-end tests driving the compiled `olg` binary: artifact sets per
//! command, exit codes, stderr diagnostics, output determinism, and the
//! numbers the reports must carry for the bundled scenarios.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_olg");

/// Log savers with Cobb-Douglas technology and no dividends. The bubbleless
/// steady state is k* = 1 and the bubbly one sits at (0.6495.., 0.2165..);
/// every p0 in [0, 0.25] survives, everything above escapes.
const PURE_BUBBLE: &str = r#"
[economy]
growth = 1.0
k0 = 1.0
technology = { kind = "cobb_douglas", productivity = 2.25, capital_share = 0.3333333333333333 }
savings = { rule = "log", patience = 0.6666666666666666 }

[dividends]
kind = "zero"

[run]
p0 = 0.2
horizon = 100
tol = 1e-6
"#;

/// Closed-form scenario whose dividend ratios grow geometrically without
/// bound; the constructed path starts at p0 = 0.2 and sends capital to zero.
const FAMILY: &str = r#"
[economy]
growth = 1.0
k0 = 1.0
technology = { kind = "cobb_douglas", productivity = 6.0, capital_share = 0.6666666666666666 }
savings = { rule = "log", patience = 0.5 }

[dividends]
kind = "family"
family = "geometric_unbounded"
scale = 5.0
ratio = 1.1

[run]
horizon = 4
tol = 1e-9
"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .output()
        .expect("binary should run")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("binary should not be signalled")
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.toml");
    fs::write(&path, text).expect("config should be writable");
    path.to_str().expect("utf-8 path").to_owned()
}

fn read_json(path: &Path) -> Value {
    let text = fs::read_to_string(path).expect("report should exist");
    serde_json::from_str(&text).expect("report should be valid JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("field should be a finite number")
}

fn condition_status<'a>(report: &'a Value, name: &str) -> &'a str {
    report["conditions"]
        .as_array()
        .expect("conditions should be an array")
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("condition {name} should be reported"))["status"]
        .as_str()
        .expect("status should be a string")
}

fn csv_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .expect("csv should exist")
        .lines()
        .map(str::to_owned)
        .collect()
}

// ---------------------------------------------------------------------------
// Bundled scenarios
// ---------------------------------------------------------------------------

#[test]
fn preset_fig1_writes_all_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["preset", "fig1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));

    for name in ["trajectory.csv", "summary.json", "verify.json", "regime.json"] {
        assert!(dir.path().join(name).is_file(), "{name} should be written");
    }
    assert!(
        !dir.path().join("eqset.json").exists(),
        "presets run no bracketing search"
    );

    let lines = csv_lines(&dir.path().join("trajectory.csv"));
    assert_eq!(lines[0], "t,k,p,R,w,d,q,v,b");
    assert_eq!(lines.len(), 402, "header plus t = 0..=400");
    assert!(
        lines[1].starts_with("0,1.0000000000000000e0,"),
        "the path starts at k0 = 1: {}",
        lines[1]
    );

    let regime = read_json(&dir.path().join("regime.json"));
    assert_eq!(regime["classification"]["label"], "bubbleless_k_to_zero");
    assert_eq!(regime["bubble_test"]["verdict"], "bubbleless");
    assert!(regime["classification"]["target"].is_null());
    assert_eq!(condition_status(&regime, "reference_rate_exceeds_growth"), "holds");
    assert_eq!(condition_status(&regime, "dividend_sum_divergence"), "fails");

    let verify = read_json(&dir.path().join("verify.json"));
    assert_eq!(verify["family"], "geometric_unbounded");
    assert!(num(&verify["roundtrip"]["clearing_residual"]) <= 1e-10);
    assert!(num(&verify["roundtrip"]["pricing_residual"]) <= 1e-10);
    assert!((num(&verify["dividend_growth_factor"]) - 1.0 / 1.1).abs() <= 1e-12);
}

#[test]
fn preset_fig2_lands_on_the_bubbly_steady_state() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["preset", "fig2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));

    let regime = read_json(&dir.path().join("regime.json"));
    assert_eq!(regime["classification"]["label"], "asymptotically_bubbly");
    assert_eq!(regime["bubble_test"]["verdict"], "bubbly");
    let target = &regime["classification"]["target"];
    assert!((num(&target["capital"]) - 0.649519052838329).abs() <= 1e-9);
    assert!((num(&target["price"]) - 0.216506350946110).abs() <= 1e-9);
    assert!(num(&target["distance"]) <= 1e-9);
    assert_eq!(condition_status(&regime, "capital_overaccumulation"), "holds");
    assert_eq!(condition_status(&regime, "dividend_growth_ordering"), "holds");

    let verify = read_json(&dir.path().join("verify.json"));
    assert_eq!(verify["family"], "one_plus_geometric");
    assert!((num(&verify["dividend_growth_factor"]) - 0.9).abs() <= 1e-12);
}

#[test]
fn preset_fig3_prices_a_bubble_that_fades() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["preset", "fig3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));

    let regime = read_json(&dir.path().join("regime.json"));
    assert_eq!(regime["classification"]["label"], "asymptotically_bubbleless");
    // The price vanishes yet stays above fundamental value the whole way:
    // the dividend/price sum converges, so the test still says bubbly.
    assert_eq!(regime["bubble_test"]["verdict"], "bubbly");
    let target = &regime["classification"]["target"];
    assert!((num(&target["capital"]) - 1.0).abs() <= 1e-9);
    assert!(num(&target["price"]).abs() <= 1e-9);

    let verify = read_json(&dir.path().join("verify.json"));
    assert_eq!(verify["family"], "rho_plus_geometric");
    assert!((num(&verify["dividend_price_sum"]) - 4.0).abs() <= 1e-6);
    assert!((num(&verify["dividend_growth_factor"]) - 0.5625).abs() <= 1e-12);
}

#[test]
fn unknown_preset_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["preset", "fig9", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_text(&out).contains("unknown preset \"fig9\""));
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

#[test]
fn simulate_pure_bubble_completes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), PURE_BUBBLE);
    let out = run(&[
        "simulate",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));

    let summary = read_json(&dir.path().join("summary.json"));
    assert_eq!(summary["status"], "completed");
    assert!(summary["failure_index"].is_null());
    assert_eq!(summary["T"], 100);
    assert_eq!(summary["records"], 101);
    assert!((num(&summary["k_T"]) - 1.0).abs() <= 1e-6, "capital settles at k* = 1");
    assert!(num(&summary["p_T"]) <= 1e-9, "the undervalued bubble deflates");

    let lines = csv_lines(&dir.path().join("trajectory.csv"));
    assert_eq!(lines.len(), 102);
}

#[test]
fn identical_configs_produce_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), PURE_BUBBLE);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for sub in [&a, &b] {
        let out = run(&["simulate", "--config", &config, "--out", sub.to_str().unwrap()]);
        assert_eq!(exit_code(&out), 0);
    }
    for name in ["trajectory.csv", "summary.json"] {
        let left = fs::read(a.join(name)).unwrap();
        let right = fs::read(b.join(name)).unwrap();
        assert_eq!(left, right, "{name} should be byte-identical across runs");
    }
}

#[test]
fn overvalued_start_fails_high() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &PURE_BUBBLE.replace("p0 = 0.2", "p0 = 0.5"));
    let out = run(&[
        "simulate",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3);

    let summary = read_json(&dir.path().join("summary.json"));
    assert_eq!(summary["status"], "fail_high");
    assert!(summary["failure_index"].is_u64(), "the collapse period is recorded");
}

#[test]
fn undervalued_start_with_dividends_fails_low() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        &PURE_BUBBLE
            .replace("kind = \"zero\"", "kind = \"geometric\"\nlevel = 0.05\nratio = 0.9")
            .replace("p0 = 0.2", "p0 = 0.05"),
    );
    let out = run(&[
        "simulate",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);

    let summary = read_json(&dir.path().join("summary.json"));
    assert_eq!(summary["status"], "fail_low");
}

#[test]
fn simulate_without_p0_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &PURE_BUBBLE.replace("p0 = 0.2\n", ""));
    let out = run(&[
        "simulate",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_text(&out).contains("run.p0"));
}

#[test]
fn p0_sweep_writes_an_array_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        &PURE_BUBBLE.replace("p0 = 0.2", "p0_range = [0.0, 0.2]\np0_count = 5"),
    );
    let out = run(&[
        "simulate",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
        "--horizon",
        "80",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));
    assert!(
        !dir.path().join("trajectory.csv").exists(),
        "sweeps write no single trajectory"
    );

    let entries = read_json(&dir.path().join("summary.json"));
    let entries = entries.as_array().expect("sweep summary should be an array");
    assert_eq!(entries.len(), 5);
    assert!((num(&entries[0]["p0"]) - 0.0).abs() <= 1e-15);
    assert!((num(&entries[4]["p0"]) - 0.2).abs() <= 1e-15);
    for e in entries {
        assert_eq!(e["status"], "completed", "every probe in [0, 0.2] survives");
    }
}

#[test]
fn horizon_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), PURE_BUBBLE);
    let out = run(&[
        "simulate",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
        "--horizon",
        "10",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(csv_lines(&dir.path().join("trajectory.csv")).len(), 12);
    assert_eq!(read_json(&dir.path().join("summary.json"))["T"], 10);
}

// ---------------------------------------------------------------------------
// eqset
// ---------------------------------------------------------------------------

#[test]
fn eqset_brackets_the_pure_bubble_interval() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), PURE_BUBBLE);
    let out = run(&[
        "eqset",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
        "--horizon",
        "50",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));
    for name in ["eqset.json", "trajectory_lower.csv", "trajectory_upper.csv"] {
        assert!(dir.path().join(name).is_file(), "{name} should be written");
    }

    let set = read_json(&dir.path().join("eqset.json"));
    assert_eq!(num(&set["p_lower"]), 0.0, "zero is itself an equilibrium");
    assert_eq!(num(&set["p_lower_width"]), 0.0);
    assert!((num(&set["p_upper"]) - 0.25).abs() <= 2e-6);
    assert!(num(&set["p_upper_width"]) <= 2e-6);
    assert_eq!(set["T"], 50);
    assert!(num(&set["probes"]) >= 1.0);
    // Doubling the horizon barely moves the upper endpoint: the interval
    // is a genuine continuum, not a horizon artifact.
    assert_eq!(set["sensitivity"]["horizon"], 100);
    assert!((num(&set["sensitivity"]["p_upper"]) - 0.25).abs() <= 1e-6);
    assert_eq!(condition_status(&set, "capital_overaccumulation"), "holds");
    assert_eq!(
        condition_status(&set, "discounted_dividends_within_steady_price"),
        "holds"
    );

    let upper = csv_lines(&dir.path().join("trajectory_upper.csv"));
    assert_eq!(upper.len(), 52, "endpoint trajectories span the full horizon");
}

#[test]
fn eqset_pins_the_family_crossing_price() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), FAMILY);
    let out = run(&[
        "eqset",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));

    // With unbounded dividend ratios the surviving set collapses toward the
    // single constructed price 0.2; at T = 4 the bracket already pins it to
    // a few parts in a thousand and halving once more at 2T tightens it.
    let set = read_json(&dir.path().join("eqset.json"));
    assert!((num(&set["p_lower"]) - 0.2).abs() <= 5e-3);
    assert!((num(&set["p_upper"]) - 0.2).abs() <= 5e-3);
    assert!(num(&set["p_lower_width"]) <= 1e-9);
    assert!(num(&set["p_upper_width"]) <= 1e-9);
    assert!((num(&set["sensitivity"]["p_lower"]) - 0.2).abs() <= 1e-5);
    assert!((num(&set["sensitivity"]["p_upper"]) - 0.2).abs() <= 1e-5);
}

#[test]
fn eqset_reports_when_no_price_survives() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), FAMILY);
    let out = run(&[
        "eqset",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
        "--horizon",
        "40",
        "--tol",
        "1e-3",
    ]);
    assert_eq!(exit_code(&out), 1, "too coarse a grid is a configuration error");
    assert!(stderr_text(&out).contains("no surviving initial price"));
}

// ---------------------------------------------------------------------------
// construct / classify
// ---------------------------------------------------------------------------

#[test]
fn construct_roundtrip_residuals_vanish() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), FAMILY);
    let out = run(&[
        "construct",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
        "--horizon",
        "200",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));

    let verify = read_json(&dir.path().join("verify.json"));
    assert_eq!(verify["family"], "geometric_unbounded");
    assert_eq!(verify["horizon"], 200);
    assert_eq!(num(&verify["initial_capital"]), 1.0);
    assert!((num(&verify["initial_price"]) - 0.2).abs() <= 1e-9);
    assert!(num(&verify["roundtrip"]["clearing_residual"]) <= 1e-10);
    assert!(num(&verify["roundtrip"]["pricing_residual"]) <= 1e-10);
    assert!(num(&verify["feasibility"]["min_price_margin"]) > 0.0);
    assert!(num(&verify["feasibility"]["min_dividend_margin"]) > 0.0);

    let summary = read_json(&dir.path().join("summary.json"));
    assert_eq!(summary["records"], 201);
}

#[test]
fn construct_requires_family_dividends() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), PURE_BUBBLE);
    let out = run(&[
        "construct",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_text(&out).contains("family"));
}

#[test]
fn infeasible_family_names_the_offending_index() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &FAMILY.replace("scale = 5.0", "scale = 0.0"));
    let out = run(&[
        "construct",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 4);
    assert!(stderr_text(&out).contains("t = 0"));
}

#[test]
fn classify_writes_only_the_regime_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), PURE_BUBBLE);
    let out = run(&[
        "classify",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));
    assert!(dir.path().join("regime.json").is_file());
    assert!(!dir.path().join("trajectory.csv").exists());

    let regime = read_json(&dir.path().join("regime.json"));
    assert_eq!(regime["classification"]["label"], "asymptotically_bubbleless");
    assert_eq!(regime["status"], "completed");
}

#[test]
fn classify_family_rides_the_constructed_path() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), FAMILY);
    let out = run(&[
        "classify",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
        "--horizon",
        "200",
    ]);
    // Forward iteration cannot hold this saddle, but the constructed path
    // is exact, so classification completes.
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));

    let regime = read_json(&dir.path().join("regime.json"));
    assert_eq!(regime["classification"]["label"], "bubbleless_k_to_zero");
    assert_eq!(regime["status"], "completed");
    assert_eq!(regime["T"], 200);
}

// ---------------------------------------------------------------------------
// Configuration diagnostics
// ---------------------------------------------------------------------------

#[test]
fn nonpositive_growth_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &PURE_BUBBLE.replace("growth = 1.0", "growth = -1.0"));
    let out = run(&[
        "simulate",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_text(&out).contains("growth"));
}

#[test]
fn toml_errors_carry_line_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "[economy\ngrowth = 1.0\n");
    let out = run(&[
        "simulate",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    let err = stderr_text(&out);
    assert!(err.contains("line"), "parse errors should locate the fault: {err}");
}

#[test]
fn declared_command_must_match_the_invocation() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        &PURE_BUBBLE.replace("[run]", "[run]\ncommand = \"eqset\""),
    );
    let out = run(&[
        "simulate",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_text(&out).contains("run.command"));
}

#[test]
fn missing_config_flag_is_a_usage_error() {
    let out = run(&["simulate"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn version_flag_exits_cleanly() {
    let out = run(&["--version"]);
    assert_eq!(exit_code(&out), 0);
}
