//! Simulation and analysis of an overlapping-generations economy in which
//! the young save through physical capital and a long-lived asset paying
//! exogenous dividends.
//!
//! Everything works in detrended (per effective worker) units. The state
//! of the economy at date `t` is a capital stock `k_t` and an asset price
//! `p_t`; one period of equilibrium is a market-clearing condition
//! `G·k_{t+1} + p_t = s(w_t, R_{t+1})` together with the no-arbitrage
//! price recursion `p_{t+1} = (R_{t+1}/G)·p_t − d_{t+1}`. From those two
//! equations the crate builds:
//!
//! * [`simulate`] — forward shooting from an initial price, with typed
//!   fail-low/fail-high outcomes and a price decomposition into
//!   fundamental value and bubble ([`dynamics`]);
//! * [`equilibrium_set`] — bisection bracketing of the set of initial
//!   prices that survive a horizon, plus trajectory classification, a
//!   bubble summability test, and regime condition reports
//!   ([`equilibria`]);
//! * [`bubbleless_steady_states`] / [`diamond_reference`] — steady-state
//!   enumeration and the no-asset reference path ([`steady`]);
//! * [`construct`] / [`construct_theta`] — closed-form equilibrium paths
//!   for the log-utility/Cobb-Douglas economy, used as oracles for the
//!   generic machinery ([`closedform`]);
//! * [`exact`] — rational-arithmetic mirrors of the reference scenarios
//!   for exact-value tests.
//!
//! All numeric code is generic over the scalar type through the [`Real`]
//! trait (`f64` and `f32` both qualify); `*64` aliases fix the common
//! choice.

// Validation uses `!(x > y)` rather than `x <= y` so that NaN, which is
// incomparable, fails the check instead of slipping through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dividends;
mod dynamics;
mod economy;
mod equilibria;
mod error;
mod production;
mod savings;
mod scalar;
mod solve;
mod steady;

pub mod closedform;
pub mod exact;

pub use dividends::{DividendStream, Tail};
pub use dynamics::{
    path_residuals, simulate, FundamentalTail, Record, ResidualReport, RunStatus, Trajectory,
};
pub use economy::Economy;
pub use equilibria::{
    bubble_test, classify, classify_with, equilibrium_set, regime_report, BubbleTest,
    BubbleVerdict, Classification, ClassificationLabel, ClassificationThresholds, Condition,
    ConditionStatus, EndpointEstimate, EquilibriumSet, RegimeReport, SensitivityReport,
    SteadyTarget,
};
pub use error::{Error, Result};
pub use production::ProductionTechnology;
pub use savings::{GrossSubstitutionCheck, MarginalUtility, SavingsRule};
pub use scalar::Real;
pub use steady::{
    bubbleless_steady_states, capital_bound, diamond_reference, dividend_growth_estimate,
    BubblySteadyState, DiamondReference, GrowthEstimate, SteadyStateReport,
};

pub use closedform::{
    construct, construct_theta, exponents, find_theta, verify_roundtrip, ConstructedPath,
    CrossChecks, RoundtripReport, ThetaPath, XSequenceFamily, XSequenceSpec,
};

/// The economy at the default scalar type.
pub type Economy64 = Economy<f64>;
/// Simulated trajectories at the default scalar type.
pub type Trajectory64 = Trajectory<f64>;
/// Equilibrium-set brackets at the default scalar type.
pub type EquilibriumSet64 = EquilibriumSet<f64>;
/// Steady-state reports at the default scalar type.
pub type SteadyStateReport64 = SteadyStateReport<f64>;
/// Closed-form path specifications at the default scalar type.
pub type XSequenceSpec64 = XSequenceSpec<f64>;
/// Constructed closed-form paths at the default scalar type.
pub type ConstructedPath64 = ConstructedPath<f64>;
/// Errors at the default scalar type.
pub type Error64 = Error<f64>;
