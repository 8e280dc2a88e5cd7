//! TOML scenario files: schema, validation, and assembly into core types.
//!
//! A scenario has three sections. `[economy]` fixes the growth factor, the
//! technology, the savings rule, and the initial capital; `[dividends]`
//! picks the asset's dividend stream (omitting the section means a pure
//! bubble paying nothing); `[run]` carries the numeric knobs of the
//! requested command. Command-line flags override the `[run]` values.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use olg_core::{
    construct, ConstructedPath64, DividendStream, Economy, Economy64, Error as CoreError,
    ProductionTechnology, SavingsRule, Tail, XSequenceFamily, XSequenceSpec, XSequenceSpec64,
};

use crate::presets::DEFAULT_HORIZON;

/// Default bracket tolerance for the equilibrium-set search.
pub const DEFAULT_TOL: f64 = 1e-8;

/// A failure before or during a run, tagged with the exit code it implies.
#[derive(Debug)]
pub enum CliError {
    /// Invalid or inadequate configuration — exit code 1.
    Config(String),
    /// A closed-form construction hit an infeasible sequence — exit code 4.
    Infeasible(String),
    /// An artifact could not be written — exit code 1.
    Io(String),
}

impl CliError {
    /// The process exit code this failure maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Infeasible(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Infeasible(msg) | CliError::Io(msg) => {
                f.write_str(msg)
            }
        }
    }
}

/// Map a core error onto the exit-code taxonomy: infeasible x-sequences
/// keep their dedicated code, everything else is a configuration problem.
pub fn core_error(e: CoreError<f64>) -> CliError {
    match e {
        CoreError::InfeasibleSequence { .. } => CliError::Infeasible(e.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    economy: EconomySection,
    dividends: Option<DividendSection>,
    #[serde(default)]
    run: RunSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EconomySection {
    growth: f64,
    k0: f64,
    technology: TechnologySection,
    savings: SavingsSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TechnologySection {
    kind: String,
    productivity: f64,
    capital_share: f64,
    depreciation: Option<f64>,
    theta: Option<f64>,
}

impl TechnologySection {
    fn build(&self) -> Result<ProductionTechnology<f64>, CliError> {
        match self.kind.as_str() {
            "cobb_douglas" => {
                if self.theta.is_some() {
                    return Err(config_err(
                        "economy.technology.theta: only a parameter of kind = \"cd_plus_log\"",
                    ));
                }
                ProductionTechnology::cobb_douglas(
                    self.productivity,
                    self.capital_share,
                    self.depreciation.unwrap_or(1.0),
                )
                .map_err(core_error)
            }
            "cd_plus_log" => {
                if self.depreciation.is_some() {
                    return Err(config_err(
                        "economy.technology.depreciation: fixed at 1 for kind = \"cd_plus_log\"",
                    ));
                }
                let theta = self.theta.ok_or_else(|| {
                    config_err("economy.technology.theta: required for kind = \"cd_plus_log\"")
                })?;
                ProductionTechnology::cd_plus_log(self.productivity, self.capital_share, theta)
                    .map_err(core_error)
            }
            other => Err(config_err(format!(
                "economy.technology.kind: unknown kind {other:?} \
                 (expected \"cobb_douglas\" or \"cd_plus_log\")"
            ))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SavingsSection {
    rule: String,
    patience: f64,
    gamma_young: Option<f64>,
    gamma_old: Option<f64>,
}

impl SavingsSection {
    fn build(&self) -> Result<SavingsRule<f64>, CliError> {
        match self.rule.as_str() {
            "log" => {
                if self.gamma_young.is_some() || self.gamma_old.is_some() {
                    return Err(config_err(
                        "economy.savings.gamma_young/gamma_old: only parameters of rule = \"crra\"",
                    ));
                }
                SavingsRule::log(self.patience).map_err(core_error)
            }
            "crra" => {
                let young = self.gamma_young.ok_or_else(|| {
                    config_err("economy.savings.gamma_young: required for rule = \"crra\"")
                })?;
                let old = self.gamma_old.ok_or_else(|| {
                    config_err("economy.savings.gamma_old: required for rule = \"crra\"")
                })?;
                SavingsRule::crra(self.patience, young, old).map_err(core_error)
            }
            other => Err(config_err(format!(
                "economy.savings.rule: unknown rule {other:?} (expected \"log\" or \"crra\")"
            ))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DividendSection {
    kind: String,
    level: Option<f64>,
    ratio: Option<f64>,
    values: Option<Vec<f64>>,
    tail: Option<String>,
    tail_ratio: Option<f64>,
    family: Option<String>,
    scale: Option<f64>,
}

impl DividendSection {
    /// Reject fields that do not belong to the chosen kind, so typos fail
    /// loudly instead of being ignored.
    fn forbid_except(&self, allowed: &[&str]) -> Result<(), CliError> {
        let present: [(&str, bool); 7] = [
            ("level", self.level.is_some()),
            ("ratio", self.ratio.is_some()),
            ("values", self.values.is_some()),
            ("tail", self.tail.is_some()),
            ("tail_ratio", self.tail_ratio.is_some()),
            ("family", self.family.is_some()),
            ("scale", self.scale.is_some()),
        ];
        for (name, is_set) in present {
            if is_set && !allowed.contains(&name) {
                return Err(config_err(format!(
                    "dividends.{name}: not a parameter of kind = {:?}",
                    self.kind
                )));
            }
        }
        Ok(())
    }

    fn require(&self, value: Option<f64>, name: &str) -> Result<f64, CliError> {
        value.ok_or_else(|| {
            config_err(format!(
                "dividends.{name}: required for kind = {:?}",
                self.kind
            ))
        })
    }

    fn build(&self, economy: &EconomySection) -> Result<DividendSpec, CliError> {
        match self.kind.as_str() {
            "zero" => {
                self.forbid_except(&[])?;
                Ok(DividendSpec::Stream(DividendStream::zero()))
            }
            "geometric" => {
                self.forbid_except(&["level", "ratio"])?;
                let level = self.require(self.level, "level")?;
                let ratio = self.require(self.ratio, "ratio")?;
                DividendStream::geometric(level, ratio, economy.growth)
                    .map(DividendSpec::Stream)
                    .map_err(core_error)
            }
            "explicit" => {
                self.forbid_except(&["values", "tail", "tail_ratio"])?;
                let values = self
                    .values
                    .clone()
                    .ok_or_else(|| config_err("dividends.values: required for kind = \"explicit\""))?;
                let tail = match self.tail.as_deref() {
                    None | Some("zero") => {
                        if self.tail_ratio.is_some() {
                            return Err(config_err(
                                "dividends.tail_ratio: only valid with tail = \"geometric\"",
                            ));
                        }
                        Tail::Zero
                    }
                    Some("geometric") => Tail::Geometric {
                        ratio: self.require(self.tail_ratio, "tail_ratio")?,
                    },
                    Some(other) => {
                        return Err(config_err(format!(
                            "dividends.tail: unknown tail {other:?} (expected \"zero\" or \"geometric\")"
                        )))
                    }
                };
                DividendStream::explicit(values, tail)
                    .map(DividendSpec::Stream)
                    .map_err(core_error)
            }
            "family" => {
                self.forbid_except(&["family", "scale", "ratio"])?;
                if economy.savings.rule != "log" {
                    return Err(config_err(
                        "dividends.kind = \"family\": closed-form families require \
                         economy.savings.rule = \"log\"",
                    ));
                }
                if economy.technology.kind != "cobb_douglas"
                    || economy.technology.depreciation.unwrap_or(1.0) != 1.0
                {
                    return Err(config_err(
                        "dividends.kind = \"family\": closed-form families require \
                         economy.technology.kind = \"cobb_douglas\" with depreciation = 1",
                    ));
                }
                let scale = self.require(self.scale, "scale")?;
                let family = match self.family.as_deref() {
                    Some("geometric_unbounded") => XSequenceFamily::GeometricUnbounded {
                        scale,
                        ratio: self.require(self.ratio, "ratio")?,
                    },
                    Some("one_plus_geometric") => XSequenceFamily::OnePlusGeometric {
                        scale,
                        ratio: self.require(self.ratio, "ratio")?,
                    },
                    Some("rho_plus_geometric") => XSequenceFamily::RhoPlusGeometric {
                        scale,
                        ratio: self.ratio,
                    },
                    Some(other) => {
                        return Err(config_err(format!(
                            "dividends.family: unknown family {other:?} (expected \
                             \"geometric_unbounded\", \"one_plus_geometric\", or \
                             \"rho_plus_geometric\")"
                        )))
                    }
                    None => {
                        return Err(config_err(
                            "dividends.family: required for kind = \"family\"",
                        ))
                    }
                };
                XSequenceSpec::new(
                    family,
                    economy.technology.productivity,
                    economy.technology.capital_share,
                    economy.savings.patience,
                    economy.growth,
                )
                .map(DividendSpec::Family)
                .map_err(core_error)
            }
            other => Err(config_err(format!(
                "dividends.kind: unknown kind {other:?} (expected \"zero\", \"geometric\", \
                 \"explicit\", or \"family\")"
            ))),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    command: Option<String>,
    p0: Option<f64>,
    p0_range: Option<[f64; 2]>,
    p0_count: Option<usize>,
    horizon: Option<usize>,
    tol: Option<f64>,
    out: Option<String>,
}

/// Dividend specification after validation: either a directly usable
/// stream, or a closed-form family whose dividends (and reference path)
/// are materialized per run at the horizon the command needs.
enum DividendSpec {
    Stream(DividendStream<f64>),
    Family(XSequenceSpec64),
}

/// Numeric knobs after merging config values with command-line flags.
#[derive(Debug, Clone)]
pub struct RunSettings {
    /// Initial price for simulate/classify (single-run mode).
    pub p0: Option<f64>,
    /// Sweep `(low, high, count)` turning simulate into a p0 sweep.
    pub sweep: Option<(f64, f64, usize)>,
    /// Run horizon `T`.
    pub horizon: usize,
    /// Bracket tolerance for the equilibrium-set search.
    pub tol: f64,
    /// Output directory.
    pub out: PathBuf,
}

/// Command-line flag values that take precedence over `[run]`.
#[derive(Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub horizon: Option<usize>,
    pub tol: Option<f64>,
}

/// A parsed, validated scenario ready to be realized at some horizon.
pub struct Scenario {
    growth: f64,
    technology: ProductionTechnology<f64>,
    savings: SavingsRule<f64>,
    initial_capital: f64,
    dividends: DividendSpec,
    declared_command: Option<String>,
    /// Merged run settings.
    pub settings: RunSettings,
}

const COMMANDS: [&str; 4] = ["simulate", "eqset", "construct", "classify"];

impl Scenario {
    /// Read and validate a scenario file, merging `overrides` on top of
    /// its `[run]` section.
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            config_err(format!("cannot read config {}: {e}", path.display()))
        })?;
        let file: ConfigFile = toml::from_str(&text)
            .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        Self::assemble(file, overrides)
    }

    fn assemble(file: ConfigFile, overrides: &Overrides) -> Result<Self, CliError> {
        let technology = file.economy.technology.build()?;
        let savings = file.economy.savings.build()?;
        let dividends = match &file.dividends {
            Some(section) => section.build(&file.economy)?,
            None => DividendSpec::Stream(DividendStream::zero()),
        };
        let settings = merge_settings(&file.run, overrides)?;
        Ok(Scenario {
            growth: file.economy.growth,
            technology,
            savings,
            initial_capital: file.economy.k0,
            dividends,
            declared_command: file.run.command,
            settings,
        })
    }

    /// Error when the config's `run.command` names a different command
    /// than the one invoked (the field is optional documentation, but a
    /// mismatch means the wrong file was passed).
    pub fn check_command(&self, invoked: &str) -> Result<(), CliError> {
        match self.declared_command.as_deref() {
            None => Ok(()),
            Some(c) if c == invoked => Ok(()),
            Some(c) if COMMANDS.contains(&c) => Err(config_err(format!(
                "run.command: config declares {c:?} but the {invoked} command was invoked"
            ))),
            Some(c) => Err(config_err(format!(
                "run.command: unknown command {c:?} (expected one of {COMMANDS:?})"
            ))),
        }
    }

    /// Whether the dividends come from a closed-form family.
    pub fn is_family(&self) -> bool {
        matches!(self.dividends, DividendSpec::Family(_))
    }

    /// Build the economy, materializing family dividends over twice the
    /// horizon (plus slack) so doubled-horizon sensitivity probes in the
    /// equilibrium-set search still see real dividends. Returns the
    /// constructed path alongside when one exists.
    pub fn realize(
        &self,
        horizon: usize,
    ) -> Result<(Economy64, Option<ConstructedPath64>), CliError> {
        match &self.dividends {
            DividendSpec::Stream(stream) => {
                let econ = Economy::new(
                    self.growth,
                    self.technology,
                    self.savings.clone(),
                    stream.clone(),
                    self.initial_capital,
                )
                .map_err(core_error)?;
                Ok((econ, None))
            }
            DividendSpec::Family(spec) => {
                let path =
                    construct(spec, self.initial_capital, 2 * horizon + 2).map_err(core_error)?;
                let econ = path.economy();
                Ok((econ, Some(path)))
            }
        }
    }

    /// Build the closed-form path at exactly `horizon` periods; an error
    /// for scenarios whose dividends are not a family.
    pub fn construct_path(&self, horizon: usize) -> Result<ConstructedPath64, CliError> {
        match &self.dividends {
            DividendSpec::Family(spec) => {
                construct(spec, self.initial_capital, horizon).map_err(core_error)
            }
            DividendSpec::Stream(_) => Err(config_err(
                "construct requires [dividends] kind = \"family\"",
            )),
        }
    }
}

fn merge_settings(run: &RunSection, overrides: &Overrides) -> Result<RunSettings, CliError> {
    let horizon = overrides.horizon.or(run.horizon).unwrap_or(DEFAULT_HORIZON);
    if horizon == 0 {
        return Err(config_err("run.horizon: must be at least 1"));
    }
    let tol = overrides.tol.or(run.tol).unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(config_err("run.tol: must be positive and finite"));
    }
    let out = overrides
        .out
        .clone()
        .or_else(|| run.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let sweep = match (run.p0_range, run.p0_count) {
        (None, None) => None,
        (Some(_), None) => {
            return Err(config_err("run.p0_count: required alongside run.p0_range"))
        }
        (None, Some(_)) => {
            return Err(config_err("run.p0_count: only valid alongside run.p0_range"))
        }
        (Some([low, high]), Some(count)) => {
            if run.p0.is_some() {
                return Err(config_err("run.p0 and run.p0_range are mutually exclusive"));
            }
            if !(low.is_finite() && high.is_finite() && low >= 0.0 && high >= low) {
                return Err(config_err(
                    "run.p0_range: bounds must be finite with 0 <= low <= high",
                ));
            }
            if count < 2 {
                return Err(config_err("run.p0_count: must be at least 2"));
            }
            Some((low, high, count))
        }
    };
    Ok(RunSettings {
        p0: run.p0,
        sweep,
        horizon,
        tol,
        out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_config() -> &'static str {
        r#"
            [economy]
            growth = 1.0
            k0 = 1.0

            [economy.technology]
            kind = "cobb_douglas"
            productivity = 2.25
            capital_share = 0.3333333333333333

            [economy.savings]
            rule = "log"
            patience = 0.6666666666666666

            [dividends]
            kind = "zero"

            [run]
            command = "simulate"
            p0 = 0.2
            horizon = 100
            tol = 1e-6
            out = "results"
        "#
    }

    fn load(text: &str, overrides: &Overrides) -> Result<Scenario, CliError> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        Scenario::assemble(file, overrides)
    }

    fn load_err(text: &str) -> CliError {
        load(text, &Overrides::default())
            .err()
            .expect("config should be rejected")
    }

    #[test]
    fn full_config_round_trips() {
        let s = load(full_config(), &Overrides::default()).unwrap();
        assert_eq!(s.settings.p0, Some(0.2));
        assert_eq!(s.settings.horizon, 100);
        assert_eq!(s.settings.tol, 1e-6);
        assert_eq!(s.settings.out, PathBuf::from("results"));
        assert!(s.check_command("simulate").is_ok());
        assert!(s.check_command("eqset").is_err());
        let (econ, path) = s.realize(10).unwrap();
        assert!(path.is_none());
        assert!(econ.dividends().is_zero());
    }

    #[test]
    fn flag_overrides_beat_the_config() {
        let overrides = Overrides {
            out: Some(PathBuf::from("elsewhere")),
            horizon: Some(7),
            tol: Some(1e-3),
        };
        let s = load(full_config(), &overrides).unwrap();
        assert_eq!(s.settings.horizon, 7);
        assert_eq!(s.settings.tol, 1e-3);
        assert_eq!(s.settings.out, PathBuf::from("elsewhere"));
    }

    #[test]
    fn defaults_fill_missing_run_values() {
        let text = r#"
            [economy]
            growth = 1.0
            k0 = 1.0
            technology = { kind = "cobb_douglas", productivity = 2.25, capital_share = 0.3333333333333333 }
            savings = { rule = "log", patience = 0.6666666666666666 }
        "#;
        let s = load(text, &Overrides::default()).unwrap();
        assert_eq!(s.settings.horizon, DEFAULT_HORIZON);
        assert_eq!(s.settings.tol, DEFAULT_TOL);
        assert_eq!(s.settings.out, PathBuf::from("."));
        assert_eq!(s.settings.p0, None);
        assert!(s.check_command("anything-at-all").is_ok());
    }

    #[test]
    fn family_dividends_build_a_constructed_path() {
        let text = r#"
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
        "#;
        let s = load(text, &Overrides::default()).unwrap();
        assert!(s.is_family());
        let (econ, path) = s.realize(4).unwrap();
        let path = path.unwrap();
        // Materialized over 2·4+2 transitions for doubled-horizon probes.
        assert_eq!(path.horizon(), 10);
        assert!((path.price[0] - 0.2).abs() < 1e-15);
        assert!(!econ.dividends().is_zero());
        // And at the exact horizon on request.
        assert_eq!(s.construct_path(4).unwrap().horizon(), 4);
    }

    #[test]
    fn family_dividends_demand_the_log_cobb_douglas_economy() {
        let text = r#"
            [economy]
            growth = 1.0
            k0 = 1.0
            technology = { kind = "cobb_douglas", productivity = 6.0, capital_share = 0.6666666666666666 }
            savings = { rule = "crra", patience = 0.5, gamma_young = 2.0, gamma_old = 2.0 }

            [dividends]
            kind = "family"
            family = "geometric_unbounded"
            scale = 5.0
            ratio = 1.1
        "#;
        let err = load_err(text);
        assert!(err.to_string().contains("savings.rule"), "{err}");
    }

    #[test]
    fn unknown_kinds_and_stray_fields_are_named() {
        let bad_kind = full_config().replace("\"cobb_douglas\"", "\"leontief\"");
        let err = load_err(&bad_kind);
        assert!(err.to_string().contains("leontief"), "{err}");

        let stray = full_config().replace("kind = \"zero\"", "kind = \"zero\"\nlevel = 0.5");
        let err = load_err(&stray);
        assert!(err.to_string().contains("dividends.level"), "{err}");
    }

    #[test]
    fn sweep_settings_validate_their_shape() {
        let sweep = full_config().replace("p0 = 0.2", "p0_range = [0.0, 0.24]\np0_count = 5");
        let s = load(&sweep, &Overrides::default()).unwrap();
        assert_eq!(s.settings.sweep, Some((0.0, 0.24, 5)));

        let missing_count = full_config().replace("p0 = 0.2", "p0_range = [0.0, 0.24]");
        let err = load_err(&missing_count);
        assert!(err.to_string().contains("p0_count"), "{err}");

        let both = full_config().replace("p0 = 0.2", "p0 = 0.1\np0_range = [0.0, 0.24]\np0_count = 5");
        let err = load_err(&both);
        assert!(err.to_string().contains("mutually exclusive"), "{err}");
    }

    #[test]
    fn infeasible_family_scale_keeps_its_exit_code() {
        let text = r#"
            [economy]
            growth = 1.0
            k0 = 1.0
            technology = { kind = "cobb_douglas", productivity = 6.0, capital_share = 0.6666666666666666 }
            savings = { rule = "log", patience = 0.5 }

            [dividends]
            kind = "family"
            family = "geometric_unbounded"
            scale = 0.0
            ratio = 1.1
        "#;
        let err = load_err(text);
        assert_eq!(err.exit_code(), 4);
        assert!(err.to_string().contains("t = 0"), "{err}");
    }
}
