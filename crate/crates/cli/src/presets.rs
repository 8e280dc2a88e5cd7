//! The bundled reference scenarios.
//!
//! Each preset is a closed-form family scenario with exact rational
//! parameters, started from unit capital. Running one produces the full
//! artifact set: the constructed trajectory, its verification report, and
//! the long-run classification.

use olg_core::exact::ExactScenario;
use olg_core::XSequenceSpec64;

/// Default run horizon for presets and config-driven runs.
pub const DEFAULT_HORIZON: usize = 400;

/// Initial capital all presets start from.
pub const PRESET_K0: f64 = 1.0;

/// A bundled scenario.
pub struct Preset {
    /// Exact rational parameters.
    pub scenario: ExactScenario,
}

/// Look a preset up by name.
///
/// * `fig1` — collapsing capital: `A = 6`, `α = 2/3`, `β = 1/2`, `G = 1`,
///   ratio sequence `x_t = 5·1.1^t`. Capital shrinks to zero while returns
///   diverge; the dividends eventually decay at rate `1/1.1` per period.
/// * `fig2` — bubbly convergence: `A = 9/4`, `α = 1/3`, `β = 2/3`, `G = 1`,
///   `x_t = 1 + 0.9^t`. The path settles at the bubbly steady state with a
///   permanently positive price.
/// * `fig3` — bubbleless convergence: the `fig2` economy with
///   `x_t = ρ + ρ^t` (`ρ = 3/4`). The price decays to zero and capital
///   settles at the bubbleless steady state.
pub fn lookup(name: &str) -> Option<Preset> {
    match name {
        "fig1" => Some(Preset {
            scenario: ExactScenario::collapsing(),
        }),
        "fig2" => Some(Preset {
            scenario: ExactScenario::bubbly(),
        }),
        "fig3" => Some(Preset {
            scenario: ExactScenario::bubbleless(),
        }),
        _ => None,
    }
}

impl Preset {
    /// The floating-point family spec for this preset.
    pub fn spec(&self) -> XSequenceSpec64 {
        self.scenario.spec::<f64>()
    }
}
