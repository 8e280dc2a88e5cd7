//! Error type shared by all fallible operations in the crate.

use crate::scalar::Real;

/// Everything that can go wrong while building or analysing an economy.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error<F: Real> {
    /// A constructor argument violates its documented domain.
    #[error("invalid {name}: must satisfy {requirement}, got {value}")]
    Parameter {
        name: &'static str,
        requirement: &'static str,
        value: F,
    },

    /// A requested gross return cannot be produced by the technology:
    /// marginal products range over (f'(∞), ∞) only.
    #[error("gross return {rate} out of range: marginal products lie in ({floor}, \u{221e})")]
    RateOutOfRange { rate: F, floor: F },

    /// The technology violates the long-run viability requirement
    /// f'(∞) < G, so capital per effective worker cannot stay bounded.
    #[error("technology incompatible with growth: f'(\u{221e}) = {limit} must be below G = {growth}")]
    UnviableTechnology { limit: F, growth: F },

    /// A horizon of zero periods was requested.
    #[error("horizon must be at least one period")]
    ZeroHorizon,

    /// A candidate x-sequence violates one of the equilibrium feasibility
    /// constraints (x_t > ρ, or x_t + ρ/x_{t+1} ≥ 1 + ρ) at some index.
    #[error("x-sequence infeasible at t = {index}: {constraint} fails by {margin}")]
    InfeasibleSequence {
        index: usize,
        constraint: &'static str,
        margin: F,
    },

    /// Equilibrium-set search exhausted its probe budget without finding a
    /// single initial price that survives the horizon.
    #[error(
        "no surviving initial price found: {probes} probes down to spacing {spacing} all failed"
    )]
    NoSurvivingPrice { probes: usize, spacing: F },

    /// The log-curvature search ran out of probes before pushing the
    /// modified technology's steady-state return below the requested bound.
    #[error("no curvature weight among {probed} probes brings the steady-state return below {bound} (best {best})")]
    ThetaExhausted { probed: usize, bound: F, best: F },
}

/// Crate-wide result alias.
pub type Result<T, F> = std::result::Result<T, Error<F>>;
