//! Scenario-driven command line for the overlapping-generations asset
//! economy: simulate trajectories, bracket the equilibrium price set,
//! build closed-form equilibrium paths, and classify long-run behavior.
//!
//! Artifacts are written under the output directory with fixed names
//! (`trajectory.csv`, `summary.json`, `eqset.json`, `regime.json`,
//! `verify.json`); identical configs produce byte-identical files. Exit
//! codes are part of the contract: 0 completed, 1 invalid configuration,
//! 2 price hit zero from below (fail-low), 3 price exceeded what the young
//! can absorb (fail-high), 4 infeasible closed-form sequence.

// Validation uses `!(x > y)` rather than `x <= y` so that NaN, which is
// incomparable, fails the check instead of slipping through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod presets;
mod report;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use olg_core::{
    bubble_test, bubbleless_steady_states, classify, construct, equilibrium_set, regime_report,
    simulate, verify_roundtrip, Economy64, RunStatus, Trajectory64,
};

use config::{core_error, CliError, Overrides, Scenario};
use presets::DEFAULT_HORIZON;
use report::{EqsetJson, OutDir, RegimeJson, Summary, SweepEntry, VerifyJson};

const EXIT_OK: i32 = 0;
const EXIT_FAIL_LOW: i32 = 2;
const EXIT_FAIL_HIGH: i32 = 3;

#[derive(Parser)]
#[command(
    name = "olg",
    version,
    about = "Equilibria of an overlapping-generations economy with capital and a dividend-paying asset",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forward-simulate from an initial price; writes trajectory.csv and summary.json
    Simulate(ConfigArgs),
    /// Bracket the surviving initial prices; writes eqset.json and endpoint trajectory CSVs
    Eqset(ConfigArgs),
    /// Build and verify a closed-form equilibrium path; writes trajectory.csv, summary.json, verify.json
    Construct(ConfigArgs),
    /// Classify long-run behavior and evaluate regime conditions; writes regime.json
    Classify(ConfigArgs),
    /// Run a bundled scenario end to end; writes trajectory.csv, summary.json, verify.json, regime.json
    Preset(PresetArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Scenario file (TOML)
    #[arg(long, value_name = "path")]
    config: PathBuf,
    /// Output directory (default: the config's run.out, else ".")
    #[arg(long, value_name = "dir")]
    out: Option<PathBuf>,
    /// Override the run horizon T
    #[arg(long, value_name = "T")]
    horizon: Option<usize>,
    /// Override the equilibrium-set bracket tolerance
    #[arg(long, value_name = "x")]
    tol: Option<f64>,
}

impl ConfigArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            out: self.out.clone(),
            horizon: self.horizon,
            tol: self.tol,
        }
    }
}

#[derive(Args)]
struct PresetArgs {
    /// Bundled scenario: fig1, fig2, or fig3
    #[arg(value_name = "name")]
    name: String,
    /// Output directory (default ".")
    #[arg(long, value_name = "dir")]
    out: Option<PathBuf>,
    /// Override the run horizon T (default 400)
    #[arg(long, value_name = "T")]
    horizon: Option<usize>,
    /// Accepted for flag uniformity; presets run no tolerance-driven search
    #[arg(long, value_name = "x")]
    tol: Option<f64>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Eqset(args) => cmd_eqset(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Preset(args) => cmd_preset(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Exit code carrying a run's terminal status.
fn status_code(status: RunStatus) -> i32 {
    match status {
        RunStatus::Completed => EXIT_OK,
        RunStatus::FailLow { .. } => EXIT_FAIL_LOW,
        RunStatus::FailHigh { .. } => EXIT_FAIL_HIGH,
    }
}

/// Print non-fatal economy diagnostics (e.g. a failing gross-substitution
/// check on the savings rule) to stderr.
fn print_warnings(econ: &Economy64) {
    for w in econ.warnings() {
        eprintln!("warning: {w}");
    }
}

fn cmd_simulate(args: &ConfigArgs) -> Result<i32, CliError> {
    let scenario = Scenario::load(&args.config, &args.overrides())?;
    scenario.check_command("simulate")?;
    let settings = scenario.settings.clone();
    let out = OutDir::create(&settings.out)?;
    let (econ, path) = scenario.realize(settings.horizon)?;
    print_warnings(&econ);

    if let Some((low, high, count)) = settings.sweep {
        // Sweep mode: summary.json becomes an array of per-run summaries
        // and no trajectory is written; the exit code is the worst run's.
        let mut entries = Vec::with_capacity(count);
        let mut worst = EXIT_OK;
        for i in 0..count {
            let p0 = low + (high - low) * (i as f64) / ((count - 1) as f64);
            let traj = simulate(&econ, p0, settings.horizon).map_err(core_error)?;
            worst = worst.max(status_code(traj.status()));
            entries.push(SweepEntry::of(p0, &traj));
        }
        out.write("summary.json", &report::to_json(&entries))?;
        return Ok(worst);
    }

    let p0 = resolve_p0(settings.p0, path.as_ref().map(|p| p.price[0]))?;
    let traj = simulate(&econ, p0, settings.horizon).map_err(core_error)?;
    out.write("trajectory.csv", &report::trajectory_csv(&traj))?;
    out.write("summary.json", &report::to_json(&Summary::of(&traj)))?;
    Ok(status_code(traj.status()))
}

/// The initial price: explicit `run.p0`, else the closed-form family's
/// starting price when the dividends carry one.
fn resolve_p0(configured: Option<f64>, constructed: Option<f64>) -> Result<f64, CliError> {
    configured.or(constructed).ok_or_else(|| {
        CliError::Config(
            "run.p0: required (only closed-form family dividends carry a starting price to infer)"
                .into(),
        )
    })
}

fn cmd_eqset(args: &ConfigArgs) -> Result<i32, CliError> {
    let scenario = Scenario::load(&args.config, &args.overrides())?;
    scenario.check_command("eqset")?;
    let settings = scenario.settings.clone();
    let out = OutDir::create(&settings.out)?;
    let (econ, _) = scenario.realize(settings.horizon)?;
    print_warnings(&econ);

    let set = equilibrium_set(&econ, settings.horizon, settings.tol).map_err(core_error)?;
    let ss = bubbleless_steady_states(&econ, None, None).map_err(core_error)?;
    let regime = regime_report(&econ, &ss, settings.horizon).map_err(core_error)?;
    out.write("eqset.json", &report::to_json(&EqsetJson::of(&set, &regime)))?;
    out.write(
        "trajectory_lower.csv",
        &report::trajectory_csv(&set.lower().trajectory),
    )?;
    out.write(
        "trajectory_upper.csv",
        &report::trajectory_csv(&set.upper().trajectory),
    )?;
    Ok(EXIT_OK)
}

fn cmd_construct(args: &ConfigArgs) -> Result<i32, CliError> {
    let scenario = Scenario::load(&args.config, &args.overrides())?;
    scenario.check_command("construct")?;
    let settings = scenario.settings.clone();
    let out = OutDir::create(&settings.out)?;
    let path = scenario.construct_path(settings.horizon)?;
    let roundtrip = verify_roundtrip(&path).map_err(core_error)?;
    let traj = path.trajectory();
    out.write("trajectory.csv", &report::trajectory_csv(&traj))?;
    out.write("summary.json", &report::to_json(&Summary::of(&traj)))?;
    out.write(
        "verify.json",
        &report::to_json(&VerifyJson::of(&path, &roundtrip, &traj)),
    )?;
    Ok(EXIT_OK)
}

fn cmd_classify(args: &ConfigArgs) -> Result<i32, CliError> {
    let scenario = Scenario::load(&args.config, &args.overrides())?;
    scenario.check_command("classify")?;
    let settings = scenario.settings.clone();
    let out = OutDir::create(&settings.out)?;

    // Family scenarios are classified on their constructed trajectory:
    // the exact equilibrium path is available, and two of the three
    // families ride a saddle that forward iteration cannot hold.
    let (econ, traj) = if scenario.is_family() {
        let path = scenario.construct_path(settings.horizon)?;
        (path.economy(), path.trajectory())
    } else {
        let (econ, _) = scenario.realize(settings.horizon)?;
        let p0 = resolve_p0(settings.p0, None)?;
        let traj = simulate(&econ, p0, settings.horizon).map_err(core_error)?;
        (econ, traj)
    };
    print_warnings(&econ);

    write_regime(&out, &econ, &traj, settings.horizon)?;
    Ok(status_code(traj.status()))
}

fn cmd_preset(args: &PresetArgs) -> Result<i32, CliError> {
    let preset = presets::lookup(&args.name).ok_or_else(|| {
        CliError::Config(format!(
            "unknown preset {:?} (expected \"fig1\", \"fig2\", or \"fig3\")",
            args.name
        ))
    })?;
    let horizon = args.horizon.unwrap_or(DEFAULT_HORIZON);
    if horizon == 0 {
        return Err(CliError::Config("--horizon: must be at least 1".into()));
    }
    let _ = args.tol; // accepted but unused: presets run no bracketing search
    let out_path = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let out = OutDir::create(&out_path)?;

    let spec = preset.spec();
    let path = construct(&spec, presets::PRESET_K0, horizon).map_err(core_error)?;
    let roundtrip = verify_roundtrip(&path).map_err(core_error)?;
    let econ = path.economy();
    let traj = path.trajectory();

    out.write("trajectory.csv", &report::trajectory_csv(&traj))?;
    out.write("summary.json", &report::to_json(&Summary::of(&traj)))?;
    out.write(
        "verify.json",
        &report::to_json(&VerifyJson::of(&path, &roundtrip, &traj)),
    )?;
    write_regime(&out, &econ, &traj, horizon)?;
    Ok(EXIT_OK)
}

/// Classify a trajectory, run the bubble summability test and the regime
/// conditions, and write the combined regime.json.
fn write_regime(
    out: &OutDir,
    econ: &Economy64,
    traj: &Trajectory64,
    horizon: usize,
) -> Result<(), CliError> {
    let ss = bubbleless_steady_states(econ, None, None).map_err(core_error)?;
    let cls = classify(traj, &ss, econ);
    let bubble = bubble_test(traj);
    let regime = regime_report(econ, &ss, horizon).map_err(core_error)?;
    out.write(
        "regime.json",
        &report::to_json(&RegimeJson::of(&cls, &bubble, traj, &regime)),
    )
}
