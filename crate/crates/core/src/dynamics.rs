//! Forward simulation of equilibrium trajectories and the decomposition of
//! asset prices into fundamental value and bubble.
//!
//! A trajectory records, per period: capital `k_t`, asset price `p_t`, gross
//! return `R_t = f'(k_t)`, wage `w_t`, dividend `d_t`, the date-0 discount
//! `q_t = Π_{s≤t} 1/R_s`, the truncated fundamental value `v_t` (discounted
//! dividends up to the horizon), and the bubble `b_t = p_t − v_t`.
//!
//! Prices follow the no-arbitrage recursion `p_{t+1} = (R_{t+1}/G)·p_t −
//! d_{t+1}`. A run ends in one of three ways: it completes the horizon;
//! the price falls below `−1e-12` (fail-low — the asset's value cannot be
//! negative); or the transition becomes undefined because the young can no
//! longer absorb the asset (fail-high).

use crate::economy::Economy;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One period of a simulated or constructed trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record<F> {
    /// Period index.
    pub t: usize,
    /// Capital per effective worker, `k_t`.
    pub capital: F,
    /// Detrended asset price, `p_t`.
    pub price: F,
    /// Gross return on capital, `R_t = f'(k_t)`.
    pub rate: F,
    /// Competitive wage, `w_t`.
    pub wage: F,
    /// Detrended dividend, `d_t`.
    pub dividend: F,
    /// Date-0 discount factor `q_t = Π_{s=1..t} 1/R_s` (`q_0 = 1`).
    pub discount: F,
    /// Fundamental value: dividends from `t+1` to the horizon, discounted.
    pub fundamental: F,
    /// Bubble component, `b_t = p_t − v_t`.
    pub bubble: F,
}

/// How a simulation run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// Reached the requested horizon.
    Completed,
    /// The price recursion produced `p_t < −1e-12` at period `t`.
    FailLow { t: usize },
    /// The transition from period `t` was undefined: the price exceeded
    /// what the young can absorb.
    FailHigh { t: usize },
}

impl RunStatus {
    /// Whether the run reached its horizon.
    pub fn is_completed(self) -> bool {
        matches!(self, Self::Completed)
    }

    /// Short machine-readable label.
    pub fn label(self) -> &'static str {
        match self {
            Self::Completed => "completed",
            Self::FailLow { .. } => "fail_low",
            Self::FailHigh { .. } => "fail_high",
        }
    }

    /// Period index at which the run failed, if it did.
    pub fn failure_index(self) -> Option<usize> {
        match self {
            Self::Completed => None,
            Self::FailLow { t } | Self::FailHigh { t } => Some(t),
        }
    }
}

/// Quality of the truncated fundamental value at the final recorded date.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FundamentalTail<F> {
    /// All dividends beyond the final date are identically zero, so the
    /// truncation error is exactly zero.
    Exact,
    /// A geometric certificate holds: observed returns on the second half
    /// of the run stay above both `G` and the dividend growth factor, and
    /// the omitted remainder at the final date is at most `bound`.
    Certified { bound: F },
    /// No certificate; `v` is a lower bound on the true fundamental.
    Truncated,
}

/// A simulated (or constructed) equilibrium path.
#[derive(Debug, Clone)]
pub struct Trajectory<F> {
    records: Vec<Record<F>>,
    status: RunStatus,
    horizon: usize,
    tail: FundamentalTail<F>,
}

impl<F: Real> Trajectory<F> {
    /// Per-period records, starting at `t = 0`. A failed run stops at the
    /// last valid period (the failing period itself is not recorded).
    pub fn records(&self) -> &[Record<F>] {
        &self.records
    }

    /// How the run ended.
    pub fn status(&self) -> RunStatus {
        self.status
    }

    /// The horizon that was requested (recorded periods may be fewer).
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Truncation quality of the fundamental-value column.
    pub fn fundamental_tail(&self) -> FundamentalTail<F> {
        self.tail
    }

    /// Final recorded period.
    pub fn last(&self) -> &Record<F> {
        self.records.last().expect("trajectories are never empty")
    }

    /// Whether the run reached its horizon.
    pub fn completed(&self) -> bool {
        self.status.is_completed()
    }

    /// Running partial sums of `Σ_{s=1..t} d_s/p_s`, indexed like
    /// [`records`](Self::records). The ratio follows the conventions
    /// `0/0 = 0` and `positive/0 = ∞`. A divergent sum (with dividends
    /// bounded away from zero relative to prices) rules out a bubble.
    pub fn dividend_price_partials(&self) -> Vec<F> {
        let mut sums = Vec::with_capacity(self.records.len());
        let mut acc = F::zero();
        for r in &self.records {
            if r.t > 0 {
                if r.price > F::zero() {
                    acc = acc + r.dividend / r.price;
                } else if r.dividend > F::zero() {
                    acc = F::infinity();
                }
            }
            sums.push(acc);
        }
        sums
    }

    /// Final value of the dividend/price sum.
    pub fn dividend_price_sum(&self) -> F {
        self.dividend_price_partials()
            .last()
            .copied()
            .unwrap_or_else(F::zero)
    }
}

/// Maximum scaled equation residuals along a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport<F> {
    /// Market clearing: `|G·k_{t+1} + p_t − s(w_t, f'(k_{t+1}))|`, scaled
    /// by `max(1, G·k_{t+1})`.
    pub clearing: F,
    /// Price recursion: `|p_{t+1} − ((R_{t+1}/G)·p_t − d_{t+1})|`, scaled
    /// by `max(1, (R_{t+1}/G)·|p_t|)`.
    pub pricing: F,
}

/// Evaluate both equilibrium equations along explicit state sequences.
///
/// `capital` and `price` must have equal length ≥ 2; `dividend(t)` supplies
/// `d_t`. Used to verify that a sequence — however it was produced — is an
/// equilibrium path of `econ`.
pub fn path_residuals<F: Real>(
    econ: &Economy<F>,
    capital: &[F],
    price: &[F],
    dividend: impl Fn(usize) -> F,
) -> ResidualReport<F> {
    assert_eq!(capital.len(), price.len());
    let g = econ.growth();
    let one = F::one();
    let mut clearing = F::zero();
    let mut pricing = F::zero();
    for t in 0..capital.len().saturating_sub(1) {
        let k_next = capital[t + 1];
        let w = econ.technology().wage_raw(capital[t]);
        let r_next = econ.technology().marginal_product_raw(k_next);
        let saved = econ.savings_rule().savings_raw(w, r_next);
        let lhs = g * k_next + price[t];
        let c = (lhs - saved).abs() / one.max(g * k_next);
        clearing = clearing.max(c);
        let growth_leg = r_next / g * price[t];
        let p = (price[t + 1] - (growth_leg - dividend(t + 1))).abs() / one.max(growth_leg.abs());
        pricing = pricing.max(p);
    }
    ResidualReport { clearing, pricing }
}

/// Simulate the economy forward from `(k_0, p_0)` for `horizon` periods.
///
/// Prices in the rounding band `(−1e-12, 0)` are treated as an exact zero
/// and the run continues; anything at or below `−1e-12` is a fail-low.
pub fn simulate<F: Real>(econ: &Economy<F>, p0: F, horizon: usize) -> Result<Trajectory<F>, F> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    if !(p0 >= F::zero()) || !p0.is_finite() {
        return Err(Error::Parameter {
            name: "initial price",
            requirement: "finite and >= 0",
            value: p0,
        });
    }
    let g = econ.growth();
    let band = -F::of(1e-12);
    let mut states: Vec<(F, F, F)> = Vec::with_capacity(horizon + 1);
    let mut k = econ.initial_capital();
    let mut p = p0;
    states.push((k, p, econ.dividends().value(0)));
    let mut status = RunStatus::Completed;
    for t in 0..horizon {
        let Some(k_next) = econ.transition_raw(k, p) else {
            status = RunStatus::FailHigh { t };
            break;
        };
        let r_next = econ.technology().marginal_product_raw(k_next);
        let d_next = econ.dividends().value(t + 1);
        let mut p_next = r_next / g * p - d_next;
        if p_next < band {
            status = RunStatus::FailLow { t: t + 1 };
            break;
        }
        if p_next < F::zero() {
            p_next = F::zero();
        }
        states.push((k_next, p_next, d_next));
        k = k_next;
        p = p_next;
    }
    Ok(assemble(econ, states, status, horizon))
}

/// Run the simulation loop without building records; used by the
/// equilibrium-set search where only the outcome matters.
pub(crate) fn survival_status<F: Real>(econ: &Economy<F>, p0: F, horizon: usize) -> RunStatus {
    let g = econ.growth();
    let band = -F::of(1e-12);
    let mut k = econ.initial_capital();
    let mut p = p0;
    for t in 0..horizon {
        let Some(k_next) = econ.transition_raw(k, p) else {
            return RunStatus::FailHigh { t };
        };
        let r_next = econ.technology().marginal_product_raw(k_next);
        let mut p_next = r_next / g * p - econ.dividends().value(t + 1);
        if p_next < band {
            return RunStatus::FailLow { t: t + 1 };
        }
        if p_next < F::zero() {
            p_next = F::zero();
        }
        k = k_next;
        p = p_next;
    }
    RunStatus::Completed
}

/// Build a full trajectory from raw `(k, p, d)` states: computes factor
/// prices, discounts, the backward fundamental-value recursion
/// `v_t = G·(v_{t+1} + d_{t+1})/R_{t+1}` (with `v_T = 0`), bubbles, and the
/// truncation certificate for the fundamental column.
pub(crate) fn assemble<F: Real>(
    econ: &Economy<F>,
    states: Vec<(F, F, F)>,
    status: RunStatus,
    horizon: usize,
) -> Trajectory<F> {
    let g = econ.growth();
    let n = states.len();
    let mut records = Vec::with_capacity(n);
    let mut discount = F::one();
    for (t, &(k, p, d)) in states.iter().enumerate() {
        let rate = econ.technology().marginal_product_raw(k);
        let wage = econ.technology().wage_raw(k);
        if t > 0 {
            discount = discount / rate;
        }
        records.push(Record {
            t,
            capital: k,
            price: p,
            rate,
            wage,
            dividend: d,
            discount,
            fundamental: F::zero(),
            bubble: F::zero(),
        });
    }
    let mut v = F::zero();
    for t in (0..n).rev() {
        if t + 1 < n {
            let next = records[t + 1];
            v = g * (v + next.dividend) / next.rate;
        } else {
            v = F::zero();
        }
        records[t].fundamental = v;
        records[t].bubble = records[t].price - v;
    }
    let tail = fundamental_tail(econ, &records);
    Trajectory {
        records,
        status,
        horizon,
        tail,
    }
}

/// Certificate for the truncated fundamental value at the final date.
fn fundamental_tail<F: Real>(econ: &Economy<F>, records: &[Record<F>]) -> FundamentalTail<F> {
    let last_t = match records.last() {
        Some(r) => r.t,
        None => return FundamentalTail::Exact,
    };
    if econ.dividends().vanishes_after(last_t) {
        return FundamentalTail::Exact;
    }
    let Some(gd) = econ.dividends().declared_growth() else {
        return FundamentalTail::Truncated;
    };
    let g = econ.growth();
    let half = last_t / 2;
    let mut min_rate = F::infinity();
    for r in records.iter().filter(|r| r.t > half) {
        min_rate = min_rate.min(r.rate);
    }
    if !(min_rate > gd.max(g)) {
        return FundamentalTail::Truncated;
    }
    // With d_t ≤ κ·(G_d/G)^t for t in the observed second half, the
    // remainder beyond T is at most κ·γ^T·x/(1−x) with x = G_d/min R < 1.
    let gamma = gd / g;
    if gamma <= F::zero() {
        return FundamentalTail::Certified { bound: F::zero() };
    }
    let mut kappa = F::zero();
    for r in records.iter().filter(|r| r.t > half) {
        let t = F::from_usize(r.t).unwrap();
        let weight = (t * gamma.ln()).exp();
        if weight > F::zero() {
            kappa = kappa.max(r.dividend / weight);
        }
    }
    let t_last = F::from_usize(last_t).unwrap();
    let gamma_t = (t_last * gamma.ln()).exp();
    let x = gd / min_rate;
    FundamentalTail::Certified {
        bound: kappa * gamma_t * x / (F::one() - x),
    }
}
