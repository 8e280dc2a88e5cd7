//! Steady states and no-asset reference dynamics.
//!
//! Three related computations live here:
//!
//! * **Bubbleless steady states** — the positive fixed points of
//!   `k = g(k, 0)`, located by a sign-change scan over a log-spaced grid
//!   plus bisection. The maximal gross return over that set, `R`, and its
//!   ratio `ρ = R/G` control which closed-form equilibrium families exist.
//! * **The bubbly steady-state candidate** — the capital `k_b` with
//!   `f'(k_b) = G` and the price `p_b = s(w(k_b), G) − G·k_b` that would
//!   support it; it is a genuine steady state exactly when `p_b > 0`.
//! * **The no-asset reference path** — capital dynamics when households
//!   can only save in capital (`p ≡ 0`), whose limiting return `R*`
//!   separates economies where the asset can matter from those where it
//!   cannot, and the associated discounted-dividend sum.

use crate::dividends::DividendStream;
use crate::economy::{capital_floor, Economy};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solve;

/// A capital/price pair supporting a stationary equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubblySteadyState<F> {
    /// Capital with `f'(k) = G`.
    pub capital: F,
    /// Price clearing the market there, `s(w(k), G) − G·k`.
    pub price: F,
}

/// Output of the bubbleless steady-state scan.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateReport<F> {
    /// Positive fixed points of `k = g(k, 0)`, ascending. The trivial
    /// steady state at `k = 0` is not included.
    pub bubbleless: Vec<F>,
    /// Max gross return over the bubbleless set (returns fall in `k`, so
    /// this is attained at the smallest element); `None` when empty.
    pub max_rate: Option<F>,
    /// `max_rate / G`.
    pub rate_ratio: Option<F>,
    /// The would-be bubbly steady state `(k_b, p_b)`, always computed.
    pub bubbly_candidate: BubblySteadyState<F>,
    /// `Some` exactly when the candidate's price is positive.
    pub bubbly: Option<BubblySteadyState<F>>,
    /// Upper end of the scanned capital range.
    pub scan_max: F,
    /// Number of grid points scanned.
    pub grid_points: usize,
    /// Set when two detected roots are closer than one grid spacing —
    /// the scan may be merging or missing nearby fixed points.
    pub resolution_warning: bool,
}

/// Self-sustaining upper bound for capital scans: the largest `k̄` with
/// `f(k̄) = G·k̄`. Savings are at most the wage, which is at most output,
/// so detrended capital can never settle above `k̄`.
pub fn capital_bound<F: Real>(econ: &Economy<F>) -> Result<F, F> {
    let tech = econ.technology();
    let g = econ.growth();
    // f − G·k is positive and decreasing to −∞ on [k_b, ∞).
    let kb = tech.invert_marginal_product(g)?;
    let gap = |k: F| tech.output_raw(k) - g * k;
    let mut hi = kb.max(econ.initial_capital()).max(F::one());
    let mut guard = 0usize;
    while gap(hi) > F::zero() {
        hi = hi + hi;
        guard += 1;
        if guard > 600 || !hi.is_finite() {
            return Err(Error::UnviableTechnology {
                limit: tech.marginal_product_limit(),
                growth: g,
            });
        }
    }
    Ok(solve::bisect_decreasing(kb, hi, gap))
}

/// Locate every positive bubbleless steady state by scanning
/// `[1e-8·k_max, k_max]` on `grid_points` log-spaced nodes and bisecting
/// each sign change of `g(k, 0) − k`. Defaults: `k_max` from
/// [`capital_bound`] (times a small safety margin), 512 nodes.
pub fn bubbleless_steady_states<F: Real>(
    econ: &Economy<F>,
    k_max: Option<F>,
    grid_points: Option<usize>,
) -> Result<SteadyStateReport<F>, F> {
    let scan_max = match k_max {
        Some(k) if k.is_finite() && k > F::zero() => k,
        Some(k) => {
            return Err(Error::Parameter {
                name: "scan bound",
                requirement: "finite and > 0",
                value: k,
            })
        }
        None => capital_bound(econ)? * F::of(1.001),
    };
    let n = grid_points.unwrap_or(512).max(16);
    let lo = scan_max * F::of(1e-8);
    let ratio = scan_max / lo;
    let excess = |k: F| match econ.transition_raw(k, F::zero()) {
        Some(x) => x - k,
        // No market-clearing capital above the floor: treat as collapse.
        None => capital_floor::<F>() - k,
    };

    let mut roots: Vec<F> = Vec::new();
    let mut resolution_warning = false;
    let mut prev_k = lo;
    let mut prev_h = excess(lo);
    if prev_h == F::zero() {
        roots.push(lo);
    }
    for i in 1..n {
        let frac = F::from_usize(i).unwrap() / F::from_usize(n - 1).unwrap();
        let k = lo * ratio.powf(frac);
        let h = excess(k);
        if h == F::zero() {
            roots.push(k);
        } else if prev_h != F::zero() && (prev_h > F::zero()) != (h > F::zero()) {
            let root = if prev_h < F::zero() {
                solve::bisect_increasing(prev_k, k, excess)
            } else {
                solve::bisect_decreasing(prev_k, k, excess)
            };
            roots.push(root);
        }
        prev_k = k;
        prev_h = h;
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Merge near-duplicates (a root sitting exactly on a grid node can be
    // detected twice) and flag genuinely close pairs.
    let spacing = ratio.powf(F::one() / F::from_usize(n - 1).unwrap());
    let mut deduped: Vec<F> = Vec::with_capacity(roots.len());
    for r in roots {
        match deduped.last() {
            Some(&last) if r <= last * spacing => {
                if r > last * (F::one() + F::of(1e-9)) {
                    resolution_warning = true;
                    deduped.push(r);
                }
            }
            _ => deduped.push(r),
        }
    }

    let g = econ.growth();
    let max_rate = deduped
        .iter()
        .map(|&k| econ.technology().marginal_product_raw(k))
        .fold(None, |acc: Option<F>, r| Some(acc.map_or(r, |a| a.max(r))));
    let kb = econ.technology().invert_marginal_product(g)?;
    let pb = econ.steady_price(kb)?;
    let candidate = BubblySteadyState {
        capital: kb,
        price: pb,
    };
    Ok(SteadyStateReport {
        bubbleless: deduped,
        max_rate,
        rate_ratio: max_rate.map(|r| r / g),
        bubbly_candidate: candidate,
        bubbly: (pb > F::zero()).then_some(candidate),
        scan_max,
        grid_points: n,
        resolution_warning,
    })
}

/// The no-asset reference dynamics and its discounted-dividend sum.
#[derive(Debug, Clone, PartialEq)]
pub struct DiamondReference<F> {
    /// `(k*_t, R*_t)` for `t = 0..=horizon` with `p ≡ 0`.
    pub path: Vec<(F, F)>,
    /// Final capital (the limit when `converged`).
    pub limit_capital: F,
    /// Gross return at the final capital, `R*`.
    pub limit_rate: F,
    /// Whether the last step moved by ≤ `1e-12·max(1, k)`.
    pub converged: bool,
    /// `Σ_{t=1..T} d_t · Π_{s=1..t} (G/R*_s)`.
    pub discounted_dividends: F,
    /// Running partial sums of the above, indexed by `t`.
    pub partial_sums: Vec<F>,
    /// Geometric bound on the omitted tail, available when the dividend
    /// stream declares an exact growth factor below `R*` and the path
    /// converged.
    pub tail_bound: Option<F>,
}

/// Iterate `k_{t+1} = g(k_t, 0)` from the economy's initial capital.
pub fn diamond_reference<F: Real>(
    econ: &Economy<F>,
    horizon: usize,
) -> Result<DiamondReference<F>, F> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    let g = econ.growth();
    let mut path = Vec::with_capacity(horizon + 1);
    let mut partial_sums = Vec::with_capacity(horizon + 1);
    let mut k = econ.initial_capital();
    let mut rate = econ.technology().marginal_product_raw(k);
    path.push((k, rate));
    partial_sums.push(F::zero());
    let mut q = F::one();
    let mut sum = F::zero();
    let mut step = F::infinity();
    for t in 1..=horizon {
        let Some(k_next) = econ.transition_raw(k, F::zero()) else {
            break;
        };
        step = (k_next - k).abs();
        k = k_next;
        rate = econ.technology().marginal_product_raw(k);
        q = q * g / rate;
        sum = sum + econ.dividends().value(t) * q;
        path.push((k, rate));
        partial_sums.push(sum);
    }
    let converged = path.len() == horizon + 1 && step <= F::of(1e-12) * k.max(F::one());
    let tail_bound = diamond_tail_bound(econ, rate, q, horizon, converged);
    Ok(DiamondReference {
        path,
        limit_capital: k,
        limit_rate: rate,
        converged,
        discounted_dividends: sum,
        partial_sums,
        tail_bound,
    })
}

fn diamond_tail_bound<F: Real>(
    econ: &Economy<F>,
    limit_rate: F,
    q_final: F,
    horizon: usize,
    converged: bool,
) -> Option<F> {
    if econ.dividends().vanishes_after(horizon) {
        return Some(F::zero());
    }
    let gd = econ.dividends().declared_growth()?;
    if !converged || !(gd < limit_rate) {
        return None;
    }
    if gd <= F::zero() {
        return Some(F::zero());
    }
    let g = econ.growth();
    let gamma = gd / g;
    // κ over the second half of the horizon: d_t ≤ κ·γ^t observed.
    let mut kappa = F::zero();
    for t in (horizon / 2).max(1)..=horizon {
        let weight = (F::from_usize(t).unwrap() * gamma.ln()).exp();
        if weight > F::zero() {
            kappa = kappa.max(econ.dividends().value(t) / weight);
        }
    }
    let gamma_t = (F::from_usize(horizon).unwrap() * gamma.ln()).exp();
    let x = gd / limit_rate;
    Some(kappa * q_final * gamma_t * x / (F::one() - x))
}

/// Estimated (or declared) growth factor of the level dividend stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthEstimate<F> {
    /// The factor `G_d` with `D_t ≈ G_d^t` for large `t`.
    pub factor: F,
    /// Whether the stream declared it exactly (parametric streams) rather
    /// than it being fitted from a finite window.
    pub exact: bool,
}

/// Growth factor of the level dividends `D_t = d_t·G^t`.
///
/// Streams carrying an exact declaration short-circuit; otherwise the
/// estimate is `max_{T/2 ≤ t ≤ T} (d_t·G^t)^(1/t)`, computed in log space.
/// An all-zero window estimates zero.
pub fn dividend_growth_estimate<F: Real>(
    stream: &DividendStream<F>,
    growth: F,
    horizon: usize,
) -> GrowthEstimate<F> {
    if let Some(factor) = stream.declared_growth() {
        return GrowthEstimate {
            factor,
            exact: true,
        };
    }
    let mut best: Option<F> = None;
    for t in (horizon / 2).max(1)..=horizon.max(1) {
        let d = stream.value(t);
        if d > F::zero() {
            let tf = F::from_usize(t).unwrap();
            let root = (d.ln() / tf + growth.ln()).exp();
            best = Some(best.map_or(root, |b: F| b.max(root)));
        }
    }
    GrowthEstimate {
        factor: best.unwrap_or_else(F::zero),
        exact: false,
    }
}
