//! Deterministic artifact writers: the trajectory CSV and the JSON reports.
//!
//! Determinism contract: a given config produces byte-identical files on
//! every run. CSV numbers are printed with 17 significant digits (exact
//! round-trip for doubles), JSON numbers use the shortest round-trip form;
//! nothing varying between runs (timestamps, paths, map ordering) is ever
//! written.

use std::fs;
use std::path::{Path, PathBuf};

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use olg_core::{
    BubbleTest, Classification, ConstructedPath64, EquilibriumSet64, FundamentalTail,
    RegimeReport, RoundtripReport, Trajectory64,
};

use crate::config::CliError;

/// An output directory, created on demand.
pub struct OutDir(PathBuf);

impl OutDir {
    /// Create `path` (and parents) if needed.
    pub fn create(path: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(path).map_err(|e| {
            CliError::Io(format!("cannot create output directory {}: {e}", path.display()))
        })?;
        Ok(OutDir(path.to_path_buf()))
    }

    /// Write one artifact under its fixed name.
    pub fn write(&self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.0.join(name);
        fs::write(&path, contents)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
    }
}

/// One value at full round-trip precision (17 significant digits).
fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Render a trajectory as CSV with the fixed header `t,k,p,R,w,d,q,v,b`.
pub fn trajectory_csv(traj: &Trajectory64) -> String {
    let mut out = String::with_capacity(32 + traj.records().len() * 200);
    out.push_str("t,k,p,R,w,d,q,v,b\n");
    for r in traj.records() {
        out.push_str(&r.t.to_string());
        for x in [
            r.capital,
            r.price,
            r.rate,
            r.wage,
            r.dividend,
            r.discount,
            r.fundamental,
            r.bubble,
        ] {
            out.push(',');
            out.push_str(&sig17(x));
        }
        out.push('\n');
    }
    out
}

/// Serialize a report as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value)
        .expect("reports contain only JSON-representable values");
    text.push('\n');
    text
}

/// A float that degrades to a string for non-finite values (JSON has no
/// representation of its own for them).
#[derive(Clone, Copy, Debug)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else if self.0.is_nan() {
            s.serialize_str("nan")
        } else if self.0 > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

/// Named quantities serialized as a JSON object in their stored order.
pub struct ValueMap(Vec<(&'static str, f64)>);

impl Serialize for ValueMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (name, value) in &self.0 {
            map.serialize_entry(name, &Num(*value))?;
        }
        map.end()
    }
}

/// One regime condition: name, holds/fails/inconclusive, and the
/// quantities that decided it.
#[derive(Serialize)]
pub struct ConditionJson {
    name: &'static str,
    status: &'static str,
    values: ValueMap,
}

fn conditions_json(report: &RegimeReport<f64>) -> Vec<ConditionJson> {
    report
        .conditions
        .iter()
        .map(|c| ConditionJson {
            name: c.name,
            status: c.status.as_str(),
            values: ValueMap(c.values.clone()),
        })
        .collect()
}

fn tail_parts(tail: FundamentalTail<f64>) -> (&'static str, Option<Num>) {
    match tail {
        FundamentalTail::Exact => ("exact", None),
        FundamentalTail::Certified { bound } => ("certified", Some(Num(bound))),
        FundamentalTail::Truncated => ("truncated", None),
    }
}

/// The one-line-per-run summary written next to a trajectory.
#[derive(Serialize)]
pub struct Summary {
    status: &'static str,
    failure_index: Option<usize>,
    #[serde(rename = "T")]
    horizon: usize,
    records: usize,
    #[serde(rename = "k_T")]
    terminal_capital: Num,
    #[serde(rename = "p_T")]
    terminal_price: Num,
    #[serde(rename = "R_T")]
    terminal_rate: Num,
    completed: bool,
    dividend_price_sum: Num,
    fundamental_tail: &'static str,
    fundamental_tail_bound: Option<Num>,
}

impl Summary {
    pub fn of(traj: &Trajectory64) -> Self {
        let last = traj.last();
        let (tail, bound) = tail_parts(traj.fundamental_tail());
        Summary {
            status: traj.status().label(),
            failure_index: traj.status().failure_index(),
            horizon: traj.horizon(),
            records: traj.records().len(),
            terminal_capital: Num(last.capital),
            terminal_price: Num(last.price),
            terminal_rate: Num(last.rate),
            completed: traj.completed(),
            dividend_price_sum: Num(traj.dividend_price_sum()),
            fundamental_tail: tail,
            fundamental_tail_bound: bound,
        }
    }
}

/// One row of a p0-sweep summary.
#[derive(Serialize)]
pub struct SweepEntry {
    p0: Num,
    status: &'static str,
    failure_index: Option<usize>,
    records: usize,
    #[serde(rename = "k_T")]
    terminal_capital: Num,
    #[serde(rename = "p_T")]
    terminal_price: Num,
}

impl SweepEntry {
    pub fn of(p0: f64, traj: &Trajectory64) -> Self {
        let last = traj.last();
        SweepEntry {
            p0: Num(p0),
            status: traj.status().label(),
            failure_index: traj.status().failure_index(),
            records: traj.records().len(),
            terminal_capital: Num(last.capital),
            terminal_price: Num(last.price),
        }
    }
}

/// Endpoints of the surviving-price interval at the doubled horizon.
#[derive(Serialize)]
struct SensitivityJson {
    horizon: usize,
    p_lower: Option<Num>,
    p_upper: Option<Num>,
}

/// The equilibrium-set report: bracket endpoints with widths, the horizon,
/// search diagnostics, and the regime conditions of the economy.
#[derive(Serialize)]
pub struct EqsetJson {
    p_lower: Num,
    p_lower_width: Num,
    p_upper: Num,
    p_upper_width: Num,
    #[serde(rename = "T")]
    horizon: usize,
    tolerance: Num,
    probes: usize,
    sensitivity: SensitivityJson,
    conditions: Vec<ConditionJson>,
}

impl EqsetJson {
    pub fn of(set: &EquilibriumSet64, regime: &RegimeReport<f64>) -> Self {
        let s = set.sensitivity();
        EqsetJson {
            p_lower: Num(set.lower().price),
            p_lower_width: Num(set.lower().width),
            p_upper: Num(set.upper().price),
            p_upper_width: Num(set.upper().width),
            horizon: set.horizon(),
            tolerance: Num(set.tolerance()),
            probes: set.probes(),
            sensitivity: SensitivityJson {
                horizon: s.horizon,
                p_lower: s.lower.map(Num),
                p_upper: s.upper.map(Num),
            },
            conditions: conditions_json(regime),
        }
    }
}

#[derive(Serialize)]
struct TargetJson {
    capital: Num,
    price: Num,
    distance: Num,
}

#[derive(Serialize)]
struct ClassificationJson {
    label: &'static str,
    #[serde(rename = "k_T")]
    terminal_capital: Num,
    #[serde(rename = "p_T")]
    terminal_price: Num,
    #[serde(rename = "R_T")]
    terminal_rate: Num,
    dividend_price_sum: Num,
    target: Option<TargetJson>,
}

#[derive(Serialize)]
struct BubbleTestJson {
    verdict: &'static str,
    sum: Num,
    tail_bound: Option<Num>,
    reason: &'static str,
}

/// The classification report: long-run label with diagnostics, the bubble
/// summability test, and the regime conditions.
#[derive(Serialize)]
pub struct RegimeJson {
    classification: ClassificationJson,
    bubble_test: BubbleTestJson,
    status: &'static str,
    #[serde(rename = "T")]
    horizon: usize,
    conditions: Vec<ConditionJson>,
}

impl RegimeJson {
    pub fn of(
        cls: &Classification<f64>,
        bubble: &BubbleTest<f64>,
        traj: &Trajectory64,
        regime: &RegimeReport<f64>,
    ) -> Self {
        RegimeJson {
            classification: ClassificationJson {
                label: cls.label.as_str(),
                terminal_capital: Num(cls.terminal_capital),
                terminal_price: Num(cls.terminal_price),
                terminal_rate: Num(cls.terminal_rate),
                dividend_price_sum: Num(cls.dividend_price_sum),
                target: cls.target.map(|t| TargetJson {
                    capital: Num(t.capital),
                    price: Num(t.price),
                    distance: Num(t.distance),
                }),
            },
            bubble_test: BubbleTestJson {
                verdict: bubble.verdict.as_str(),
                sum: Num(bubble.sum),
                tail_bound: bubble.tail_bound.map(Num),
                reason: bubble.reason,
            },
            status: traj.status().label(),
            horizon: traj.horizon(),
            conditions: conditions_json(regime),
        }
    }
}

#[derive(Serialize)]
struct CrossChecksJson {
    capital: Num,
    dividend: Num,
    ratio: Num,
}

#[derive(Serialize)]
struct FeasibilityJson {
    min_price_margin: Num,
    min_dividend_margin: Num,
    cross_checks: CrossChecksJson,
}

#[derive(Serialize)]
struct RoundtripJson {
    clearing_residual: Num,
    pricing_residual: Num,
    simulate_status: &'static str,
    failure_index: Option<usize>,
    capital_deviation: Num,
    price_deviation: Num,
    tracked_until: usize,
}

/// The construction verification report: feasibility margins and
/// redundant-evaluation agreement of the closed form, equation residuals
/// along the path, and the forward-simulation comparison.
#[derive(Serialize)]
pub struct VerifyJson {
    family: &'static str,
    horizon: usize,
    initial_capital: Num,
    initial_price: Num,
    feasibility: FeasibilityJson,
    roundtrip: RoundtripJson,
    dividend_growth_factor: Num,
    dividend_price_sum: Num,
}

impl VerifyJson {
    pub fn of(
        path: &ConstructedPath64,
        roundtrip: &RoundtripReport<f64>,
        traj: &Trajectory64,
    ) -> Self {
        VerifyJson {
            family: path.spec().family_name(),
            horizon: path.horizon(),
            initial_capital: Num(path.initial_capital()),
            initial_price: Num(path.price[0]),
            feasibility: FeasibilityJson {
                min_price_margin: Num(path.min_price_margin),
                min_dividend_margin: Num(path.min_dividend_margin),
                cross_checks: CrossChecksJson {
                    capital: Num(path.checks.capital),
                    dividend: Num(path.checks.dividend),
                    ratio: Num(path.checks.ratio),
                },
            },
            roundtrip: RoundtripJson {
                clearing_residual: Num(roundtrip.clearing_residual),
                pricing_residual: Num(roundtrip.pricing_residual),
                simulate_status: roundtrip.simulate_status.label(),
                failure_index: roundtrip.simulate_status.failure_index(),
                capital_deviation: Num(roundtrip.capital_deviation),
                price_deviation: Num(roundtrip.price_deviation),
                tracked_until: roundtrip.tracked_until,
            },
            dividend_growth_factor: Num(path.spec().dividend_growth_factor()),
            dividend_price_sum: Num(traj.dividend_price_sum()),
        }
    }
}
