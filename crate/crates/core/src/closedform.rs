//! Closed-form equilibrium families for the log-utility, Cobb–Douglas,
//! full-depreciation economy, built from an exogenous ratio sequence.
//!
//! Write `x_t` for the ratio of capital income to next-period investment,
//! `x_t = A·α·k_t^α / (G·k_{t+1})`, and `ρ = α/(β(1−α))` for the ratio of
//! the bubbleless steady-state return to growth. Every equilibrium of this
//! economy is equivalent to a choice of `{x_t}` satisfying two constraints:
//!
//! * **price positivity** — `x_t > ρ`,
//! * **dividend non-negativity** — `x_t + ρ/x_{t+1} ≥ 1 + ρ`,
//!
//! under which the path is recovered in closed form:
//!
//! ```text
//! k_{t+1} = A·α·k_t^α / (G·x_t)
//! p_t     = A·α·k_t^α · (x_t − ρ) / (ρ·x_t)
//! d_{t+1} = (A·α/ρ) · k_{t+1}^α · (x_t + ρ/x_{t+1} − 1 − ρ)
//! ```
//!
//! Three parametric families are supported; all have `x_t = base + C·σ^t`:
//!
//! | family                 | base | constraints            | long run          |
//! |------------------------|------|------------------------|-------------------|
//! | `geometric_unbounded`  | 0    | `C ≥ 1+ρ`, `σ > 1`     | capital → 0       |
//! | `one_plus_geometric`   | 1    | `C > 0`, `ρ < σ < 1`   | bubbly steady state |
//! | `rho_plus_geometric`   | ρ    | `C > 0`, `0 < σ ≤ ρ`   | bubbleless steady state |
//!
//! The margins `x_t − ρ` and `x_t + ρ/x_{t+1} − (1+ρ)` decay geometrically
//! in two of the families while `x_t` itself stays order one, so evaluating
//! them by literal subtraction destroys every significant digit long before
//! the horizons of interest. All evaluation below goes through per-family
//! algebraic rearrangements that never subtract nearly equal quantities.

use crate::dividends::{DividendStream, Tail};
use crate::dynamics::{self, simulate, RunStatus, Trajectory};
use crate::economy::Economy;
use crate::error::{Error, Result};
use crate::production::ProductionTechnology;
use crate::savings::SavingsRule;
use crate::scalar::Real;
use crate::solve;

/// The parametric ratio-sequence families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XSequenceFamily<F> {
    /// `x_t = scale·ratio^t` with `scale ≥ 1+ρ`, `ratio > 1`: returns grow
    /// without bound, capital and prices collapse geometrically, and the
    /// dividend stream eventually shrinks (level growth `G·σ^((1−2α)/(1−α))`
    /// < G when α > 1/2).
    GeometricUnbounded { scale: F, ratio: F },
    /// `x_t = 1 + scale·ratio^t` with `scale > 0`, `ρ < ratio < 1`: the
    /// path converges to the bubbly steady state; dividends decay like σ^t.
    OnePlusGeometric { scale: F, ratio: F },
    /// `x_t = ρ + scale·ratio^t` with `scale > 0`, `0 < ratio ≤ ρ`
    /// (`ratio` defaults to ρ): the path converges to the bubbleless
    /// steady state with the price decaying like σ^t.
    RhoPlusGeometric { scale: F, ratio: Option<F> },
}

/// A validated ratio sequence plus the economy constants it lives in.
///
/// The economy is pinned to log utility and Cobb–Douglas production with
/// full depreciation — the assumptions under which the closed forms hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XSequenceSpec<F> {
    family: XSequenceFamily<F>,
    productivity: F,
    capital_share: F,
    patience: F,
    growth: F,
    rho: F,
    scale: F,
    ratio: F,
}

/// Which algebraic form to use; mirrors the family tag with ratios resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    Geometric,
    OnePlus,
    RhoPlus,
}

impl<F: Real> XSequenceSpec<F> {
    /// Validate family parameters against the economy constants.
    ///
    /// Violations of the price-positivity constraint itself (such as
    /// `scale = 0` in the unbounded family, which pins `x_0 = 0 ≤ ρ`) are
    /// reported as [`Error::InfeasibleSequence`] with the first failing
    /// index; structurally out-of-range parameters (a ratio outside the
    /// family's interval) are ordinary parameter errors.
    pub fn new(
        family: XSequenceFamily<F>,
        productivity: F,
        capital_share: F,
        patience: F,
        growth: F,
    ) -> Result<Self, F> {
        if !(productivity > F::zero()) || !productivity.is_finite() {
            return Err(Error::Parameter {
                name: "productivity",
                requirement: "finite and > 0",
                value: productivity,
            });
        }
        if !(capital_share > F::zero() && capital_share < F::one()) {
            return Err(Error::Parameter {
                name: "capital share",
                requirement: "strictly between 0 and 1",
                value: capital_share,
            });
        }
        if !(patience > F::zero() && patience < F::one()) {
            return Err(Error::Parameter {
                name: "patience",
                requirement: "strictly between 0 and 1",
                value: patience,
            });
        }
        if !(growth > F::zero()) || !growth.is_finite() {
            return Err(Error::Parameter {
                name: "growth",
                requirement: "finite and > 0",
                value: growth,
            });
        }
        let one = F::one();
        let rho = capital_share / (patience * (one - capital_share));
        let (scale, ratio) = match family {
            XSequenceFamily::GeometricUnbounded { scale, ratio } => {
                if scale <= rho {
                    // x_0 = scale already violates price positivity.
                    return Err(Error::InfeasibleSequence {
                        index: 0,
                        constraint: "x_t > rho (price positivity)",
                        margin: scale - rho,
                    });
                }
                if !(ratio > one) || !ratio.is_finite() {
                    return Err(Error::Parameter {
                        name: "ratio",
                        requirement: "> 1 for the unbounded family",
                        value: ratio,
                    });
                }
                if scale < one + rho {
                    return Err(Error::Parameter {
                        name: "scale",
                        requirement: ">= 1 + rho for the unbounded family",
                        value: scale,
                    });
                }
                (scale, ratio)
            }
            XSequenceFamily::OnePlusGeometric { scale, ratio } => {
                if !(rho < one) {
                    return Err(Error::Parameter {
                        name: "rho",
                        requirement: "< 1 (bubbly steady state must exist)",
                        value: rho,
                    });
                }
                if !(ratio > rho && ratio < one) {
                    return Err(Error::Parameter {
                        name: "ratio",
                        requirement: "strictly between rho and 1",
                        value: ratio,
                    });
                }
                if !(scale > F::zero()) || !scale.is_finite() {
                    return Err(Error::Parameter {
                        name: "scale",
                        requirement: "> 0",
                        value: scale,
                    });
                }
                (scale, ratio)
            }
            XSequenceFamily::RhoPlusGeometric { scale, ratio } => {
                if !(rho < one) {
                    return Err(Error::Parameter {
                        name: "rho",
                        requirement: "< 1 (bubbly steady state must exist)",
                        value: rho,
                    });
                }
                let ratio = ratio.unwrap_or(rho);
                if !(ratio > F::zero() && ratio <= rho) {
                    return Err(Error::Parameter {
                        name: "ratio",
                        requirement: "in (0, rho]",
                        value: ratio,
                    });
                }
                if !(scale > F::zero()) || !scale.is_finite() {
                    return Err(Error::Parameter {
                        name: "scale",
                        requirement: "> 0",
                        value: scale,
                    });
                }
                (scale, ratio)
            }
        };
        Ok(Self {
            family,
            productivity,
            capital_share,
            patience,
            growth,
            rho,
            scale,
            ratio,
        })
    }

    fn form(&self) -> Form {
        match self.family {
            XSequenceFamily::GeometricUnbounded { .. } => Form::Geometric,
            XSequenceFamily::OnePlusGeometric { .. } => Form::OnePlus,
            XSequenceFamily::RhoPlusGeometric { .. } => Form::RhoPlus,
        }
    }

    /// The family this spec was built from.
    pub fn family(&self) -> XSequenceFamily<F> {
        self.family
    }

    /// Snake-case family label used in reports and configs.
    pub fn family_name(&self) -> &'static str {
        match self.form() {
            Form::Geometric => "geometric_unbounded",
            Form::OnePlus => "one_plus_geometric",
            Form::RhoPlus => "rho_plus_geometric",
        }
    }

    /// Productivity `A`.
    pub fn productivity(&self) -> F {
        self.productivity
    }

    /// Capital share `α`.
    pub fn capital_share(&self) -> F {
        self.capital_share
    }

    /// Patience `β` of the log savings rule.
    pub fn patience(&self) -> F {
        self.patience
    }

    /// Growth factor `G`.
    pub fn growth(&self) -> F {
        self.growth
    }

    /// Return/growth ratio `ρ = α/(β(1−α))` of the bubbleless steady state.
    pub fn rho(&self) -> F {
        self.rho
    }

    /// Resolved scale `C`.
    pub fn scale(&self) -> F {
        self.scale
    }

    /// Resolved ratio `σ`.
    pub fn ratio(&self) -> F {
        self.ratio
    }

    /// The income/investment ratio `x_t`.
    pub fn value(&self, t: usize) -> F {
        let c = self.scale;
        let base = match self.form() {
            Form::Geometric => F::zero(),
            Form::OnePlus => F::one(),
            Form::RhoPlus => self.rho,
        };
        base + c * power(self.ratio, t)
    }

    /// Price-positivity margin `x_t − ρ`, evaluated without cancellation.
    pub fn price_margin(&self, t: usize) -> F {
        let c = self.scale;
        let rho = self.rho;
        match self.form() {
            // C·σ^t − ρ = C·(σ^t − 1) + (C − ρ), both pieces ≥ 0.
            Form::Geometric => c * expm1_power(self.ratio, t) + (c - rho),
            Form::OnePlus => (F::one() - rho) + c * power(self.ratio, t),
            Form::RhoPlus => c * power(self.ratio, t),
        }
    }

    /// Dividend margin `x_t + ρ/x_{t+1} − (1 + ρ)`, evaluated without
    /// cancellation. Non-negative exactly when the implied dividend
    /// `d_{t+1}` is non-negative.
    pub fn dividend_margin(&self, t: usize) -> F {
        let c = self.scale;
        let rho = self.rho;
        let sigma = self.ratio;
        let one = F::one();
        match self.form() {
            // C·σ^t + ρ/x_{t+1} − 1 − ρ
            //   = C·(σ^t − 1) + (C − 1 − ρ) + ρ/x_{t+1}.
            Form::Geometric => c * expm1_power(sigma, t) + (c - one - rho) + rho / self.value(t + 1),
            // (1 + Cσ^t) + ρ/(1 + Cσ^{t+1}) − 1 − ρ
            //   = Cσ^t·(1 − ρσ/(1 + Cσ^{t+1})).
            Form::OnePlus => {
                let next = one + c * power(sigma, t + 1);
                c * power(sigma, t) * (one - rho * sigma / next)
            }
            // (ρ + Cσ^t) + ρ/(ρ + Cσ^{t+1}) − 1 − ρ
            //   = Cσ^t·(ρ − σ + Cσ^{t+1})/(ρ + Cσ^{t+1}).
            Form::RhoPlus => {
                let tail = c * power(sigma, t + 1);
                c * power(sigma, t) * (rho - sigma + tail) / (rho + tail)
            }
        }
    }

    /// Exact growth factor of the level dividends implied by the family.
    pub fn dividend_growth_factor(&self) -> F {
        let g = self.growth;
        let sigma = self.ratio;
        let alpha = self.capital_share;
        let one = F::one();
        match self.form() {
            // ln d_t / t → ((1−2α)/(1−α))·ln σ.
            Form::Geometric => {
                let exponent = (one - alpha - alpha) / (one - alpha);
                g * (exponent * sigma.ln()).exp()
            }
            Form::OnePlus => g * sigma,
            // At σ = ρ the leading terms cancel and d_t ~ σ^(2t).
            Form::RhoPlus => {
                if sigma == self.rho {
                    g * sigma * sigma
                } else {
                    g * sigma
                }
            }
        }
    }
}

/// `base^t` for a positive base and modest `t`.
fn power<F: Real>(base: F, t: usize) -> F {
    if t <= i32::MAX as usize {
        base.powi(t as i32)
    } else {
        (F::from_usize(t).unwrap() * base.ln()).exp()
    }
}

/// `base^t − 1` without cancellation (`expm1` of `t·ln base`).
fn expm1_power<F: Real>(base: F, t: usize) -> F {
    (F::from_usize(t).unwrap() * base.ln()).exp_m1()
}

/// Largest relative mismatches between redundant evaluations of the same
/// path: the recursive capital sequence against its log-space closed form,
/// the stable dividend form against the pricing-recursion subtraction, and
/// the stored dividend/price ratio against its direct formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossChecks<F> {
    pub capital: F,
    pub dividend: F,
    pub ratio: F,
}

/// A constructed equilibrium path with its diagnostics.
#[derive(Debug, Clone)]
pub struct ConstructedPath<F> {
    spec: XSequenceSpec<F>,
    initial_capital: F,
    /// `k_0 … k_T`.
    pub capital: Vec<F>,
    /// `p_0 … p_T`.
    pub price: Vec<F>,
    /// `d_0 … d_T` with `d_0 = 0` by convention.
    pub dividend: Vec<F>,
    /// Diagnostic exponents `μ_t = 1 − Σ_{s=1..t} α^s` for `t = 0..=T`.
    pub mu: Vec<F>,
    /// Diagnostic exponents `ν_t = (t−1) − Σ_{s=1..t} α^s·(t−s)`;
    /// `ν_t/t → (1−2α)/(1−α)`, the exponent behind the dividend growth
    /// factor of the unbounded family.
    pub nu: Vec<F>,
    /// Redundant-evaluation agreement.
    pub checks: CrossChecks<F>,
    /// Smallest price-positivity margin seen over the horizon.
    pub min_price_margin: F,
    /// Smallest dividend margin seen over the horizon.
    pub min_dividend_margin: F,
}

/// Diagnostic exponent pair `(μ_t, ν_t)` in closed form:
/// `μ_t = 1 − α(1−α^t)/(1−α)` and
/// `ν_t = ((1−2α)/(1−α))(t−1) + (α/(1−α))²(1−α^(t−1))`.
pub fn exponents<F: Real>(alpha: F, t: usize) -> (F, F) {
    let one = F::one();
    let om = one - alpha;
    let tf = F::from_usize(t).unwrap();
    let mu = one - alpha * (one - power(alpha, t)) / om;
    let alpha_tm1 = if t == 0 {
        alpha.recip()
    } else {
        power(alpha, t - 1)
    };
    let nu = (one - alpha - alpha) / om * (tf - one) + (alpha / om).powi(2) * (one - alpha_tm1);
    (mu, nu)
}

/// Build the closed-form path for `spec` from `initial_capital` over
/// `horizon` periods, re-verifying both feasibility margins at every index.
pub fn construct<F: Real>(
    spec: &XSequenceSpec<F>,
    initial_capital: F,
    horizon: usize,
) -> Result<ConstructedPath<F>, F> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    if !(initial_capital > F::zero()) || !initial_capital.is_finite() {
        return Err(Error::Parameter {
            name: "initial capital",
            requirement: "finite and > 0",
            value: initial_capital,
        });
    }
    let one = F::one();
    let margin_tol = -F::epsilon() * F::of(8.0) * (one + spec.rho);
    let mut min_price_margin = F::infinity();
    let mut min_dividend_margin = F::infinity();
    for t in 0..=horizon {
        let pm = spec.price_margin(t);
        if !(pm > F::zero()) {
            return Err(Error::InfeasibleSequence {
                index: t,
                constraint: "x_t > rho (price positivity)",
                margin: pm,
            });
        }
        min_price_margin = min_price_margin.min(pm);
        if t < horizon {
            let dm = spec.dividend_margin(t);
            if dm < margin_tol {
                return Err(Error::InfeasibleSequence {
                    index: t,
                    constraint: "x_t + rho/x_{t+1} >= 1 + rho (dividend non-negativity)",
                    margin: dm,
                });
            }
            min_dividend_margin = min_dividend_margin.min(dm);
        }
    }

    let a = spec.productivity;
    let alpha = spec.capital_share;
    let g = spec.growth;
    let rho = spec.rho;
    let aa = a * alpha;

    let mut capital = Vec::with_capacity(horizon + 1);
    let mut price = Vec::with_capacity(horizon + 1);
    let mut dividend = Vec::with_capacity(horizon + 1);
    capital.push(initial_capital);
    dividend.push(F::zero());
    for t in 0..horizon {
        let k = capital[t];
        let income = aa * k.powf(alpha);
        let x = spec.value(t);
        let k_next = income / (g * x);
        capital.push(k_next);
        price.push(income * spec.price_margin(t) / (rho * x));
        dividend.push(aa / rho * k_next.powf(alpha) * spec.dividend_margin(t));
    }
    let last_income = aa * capital[horizon].powf(alpha);
    price.push(last_income * spec.price_margin(horizon) / (rho * spec.value(horizon)));

    // Cross-check 1: closed-form capital in log space,
    //   ln k_{t+1} = (1−α^{t+1})/(1−α)·ln(Aα/G) + α^{t+1}·ln k_0 − S_t,
    //   S_t = α·S_{t−1} + ln x_t.
    let mut capital_check = F::zero();
    let log_aag = (aa / g).ln();
    let log_k0 = initial_capital.ln();
    let mut s_weighted = F::zero();
    for t in 0..horizon {
        s_weighted = alpha * s_weighted + spec.value(t).ln();
        let steps = power(alpha, t + 1);
        let log_k = (one - steps) / (one - alpha) * log_aag + steps * log_k0 - s_weighted;
        let diff = (capital[t + 1].ln() - log_k).abs();
        // |Δln k| ≈ relative error of k.
        capital_check = capital_check.max(diff);
    }

    // Cross-check 2: dividends from the pricing-recursion subtraction,
    // scaled by the size of the cancelled terms (its natural noise floor).
    let mut dividend_check = F::zero();
    for t in 0..horizon {
        let r_next = aa * capital[t + 1].powf(alpha - one);
        let grown = r_next / g * price[t];
        let subtraction = grown - price[t + 1];
        let scale = grown.abs().max(one);
        dividend_check = dividend_check.max((subtraction - dividend[t + 1]).abs() / scale);
    }

    // Cross-check 3: stored d_t/p_t against the ratio formula
    // (x_{t−1} + ρ/x_t − 1 − ρ) / (1 − ρ/x_t).
    let mut ratio_check = F::zero();
    for t in 1..=horizon {
        let direct = spec.dividend_margin(t - 1) * spec.value(t) / spec.price_margin(t);
        let stored = dividend[t] / price[t];
        let scale = direct.abs().max(F::of(1e-300));
        ratio_check = ratio_check.max((stored - direct).abs() / scale);
    }

    let mut mu = Vec::with_capacity(horizon + 1);
    let mut nu = Vec::with_capacity(horizon + 1);
    for t in 0..=horizon {
        let (m, n) = exponents(alpha, t);
        mu.push(m);
        nu.push(n);
    }

    Ok(ConstructedPath {
        spec: *spec,
        initial_capital,
        capital,
        price,
        dividend,
        mu,
        nu,
        checks: CrossChecks {
            capital: capital_check,
            dividend: dividend_check,
            ratio: ratio_check,
        },
        min_price_margin,
        min_dividend_margin,
    })
}

impl<F: Real> ConstructedPath<F> {
    /// The validated spec this path was built from.
    pub fn spec(&self) -> &XSequenceSpec<F> {
        &self.spec
    }

    /// Number of transitions (`capital.len() − 1`).
    pub fn horizon(&self) -> usize {
        self.capital.len() - 1
    }

    /// Initial capital `k_0`.
    pub fn initial_capital(&self) -> F {
        self.initial_capital
    }

    /// The economy this path is an equilibrium of: Cobb–Douglas with full
    /// depreciation, log savings, and the constructed dividends (declared
    /// with their exact growth factor).
    pub fn economy(&self) -> Economy<F> {
        let tech = ProductionTechnology::cobb_douglas(
            self.spec.productivity,
            self.spec.capital_share,
            F::one(),
        )
        .expect("validated at spec construction");
        let savings = SavingsRule::log(self.spec.patience).expect("validated at spec construction");
        let dividends = DividendStream::explicit(self.dividend.clone(), Tail::Zero)
            .expect("constructed dividends are non-negative")
            .with_declared_growth(self.spec.dividend_growth_factor());
        Economy::new(
            self.spec.growth,
            tech,
            savings,
            dividends,
            self.initial_capital,
        )
        .expect("closed-form economies are always viable")
    }

    /// Package the stored sequences as a completed [`Trajectory`] with
    /// factor prices, discounts, and the fundamental/bubble split.
    pub fn trajectory(&self) -> Trajectory<F> {
        let econ = self.economy();
        let states = self
            .capital
            .iter()
            .zip(&self.price)
            .zip(&self.dividend)
            .map(|((&k, &p), &d)| (k, p, d))
            .collect();
        dynamics::assemble(&econ, states, RunStatus::Completed, self.horizon())
    }
}

/// Verification of a constructed path against the economy's equations and
/// against forward simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundtripReport<F> {
    /// Periods verified.
    pub horizon: usize,
    /// Max scaled market-clearing residual along the constructed path.
    pub clearing_residual: F,
    /// Max scaled pricing-recursion residual along the constructed path.
    pub pricing_residual: F,
    /// How the forward simulation from the constructed start ended.
    pub simulate_status: RunStatus,
    /// Max relative capital deviation, simulation vs construction, over
    /// the common prefix.
    pub capital_deviation: F,
    /// Max relative price deviation over the common prefix.
    pub price_deviation: F,
    /// Last period at which both deviations were still ≤ 1e-10.
    pub tracked_until: usize,
}

/// Check that a constructed path satisfies the equilibrium equations, then
/// re-run its initial condition through the forward simulator and measure
/// the deviation.
///
/// The residuals are the authoritative verification: paths approaching an
/// unstable steady state ride a saddle, where forward iteration in finite
/// precision *must* eventually escape no matter how the path was produced,
/// while the equation residuals stay at rounding level. The deviation
/// columns report how long forward simulation stays on the path before the
/// saddle takes over.
pub fn verify_roundtrip<F: Real>(path: &ConstructedPath<F>) -> Result<RoundtripReport<F>, F> {
    let econ = path.economy();
    roundtrip_against(&econ, &path.capital, &path.price, path.price[0])
}

fn roundtrip_against<F: Real>(
    econ: &Economy<F>,
    capital: &[F],
    price: &[F],
    p0: F,
) -> Result<RoundtripReport<F>, F> {
    let horizon = capital.len() - 1;
    let resid = dynamics::path_residuals(econ, capital, price, |t| econ.dividends().value(t));
    let sim = simulate(econ, p0, horizon)?;
    let mut capital_deviation = F::zero();
    let mut price_deviation = F::zero();
    let mut tracked_until = 0usize;
    let tol = F::of(1e-10);
    let mut within = true;
    for (i, rec) in sim.records().iter().enumerate() {
        let dk = (rec.capital - capital[i]).abs() / capital[i];
        let dp = (rec.price - price[i]).abs() / price[i].max(F::of(1e-300));
        capital_deviation = capital_deviation.max(dk);
        price_deviation = price_deviation.max(dp);
        if within && dk <= tol && dp <= tol {
            tracked_until = i;
        } else {
            within = false;
        }
    }
    Ok(RoundtripReport {
        horizon,
        clearing_residual: resid.clearing,
        pricing_residual: resid.pricing,
        simulate_status: sim.status(),
        capital_deviation,
        price_deviation,
        tracked_until,
    })
}

/// A curvature-modified equilibrium: same capital path as an unbounded-
/// family base, technology augmented with `θ·k·ln(1+1/k)`, prices shifted
/// by the extra wage income, and the dividends this implies.
#[derive(Debug, Clone)]
pub struct ThetaPath<F> {
    spec: XSequenceSpec<F>,
    theta: F,
    /// The modified technology.
    pub technology: ProductionTechnology<F>,
    /// Shared capital path `k_0 … k_T` (identical to the base).
    pub capital: Vec<F>,
    /// Modified prices `p^θ_t = p_t + β·θ·k_t/(1+k_t)`.
    pub price: Vec<F>,
    /// Implied dividends `d^θ_t = (f'_θ(k_t)/G)·p^θ_{t−1} − p^θ_t`
    /// (`d^θ_0 = 0`); positive from [`verified_start`](Self::verified_start)
    /// onward.
    pub dividend: Vec<F>,
    /// First date from which the path is a valid equilibrium (all later
    /// dividends strictly positive); at least the requested start.
    pub verified_start: usize,
    /// Bubbleless steady state of the modified economy.
    pub steady_capital: F,
    /// Gross return there, `f'_θ(k*_θ)`.
    pub steady_rate: F,
}

/// Graft a log-curvature term of weight `theta` onto the technology of an
/// unbounded-family path and re-derive the equilibrium prices/dividends.
///
/// Requires the base to come from the `geometric_unbounded` family with
/// capital share `α > 1/2` (otherwise the implied dividends are eventually
/// negative and no start date works). `start_hint` is the earliest date
/// from which positivity is demanded; the verified start may be later.
pub fn construct_theta<F: Real>(
    base: &ConstructedPath<F>,
    theta: F,
    start_hint: usize,
) -> Result<ThetaPath<F>, F> {
    let spec = *base.spec();
    if !matches!(spec.family(), XSequenceFamily::GeometricUnbounded { .. }) {
        return Err(Error::Parameter {
            name: "base family",
            requirement: "geometric_unbounded (curvature variants need collapsing capital)",
            value: spec.ratio(),
        });
    }
    let half = F::of(0.5);
    if !(spec.capital_share() > half) {
        return Err(Error::Parameter {
            name: "capital share",
            requirement: "> 1/2 for eventually positive curvature dividends",
            value: spec.capital_share(),
        });
    }
    if !(theta > F::zero()) || !theta.is_finite() {
        return Err(Error::Parameter {
            name: "theta",
            requirement: "finite and > 0",
            value: theta,
        });
    }
    let horizon = base.horizon();
    if start_hint + 1 >= horizon {
        return Err(Error::Parameter {
            name: "start hint",
            requirement: "at least two periods before the horizon",
            value: F::from_usize(start_hint).unwrap(),
        });
    }
    let technology =
        ProductionTechnology::cd_plus_log(spec.productivity(), spec.capital_share(), theta)?;
    let beta = spec.patience();
    let g = spec.growth();
    let one = F::one();

    let price: Vec<F> = base
        .capital
        .iter()
        .zip(&base.price)
        .map(|(&k, &p)| p + beta * theta * k / (one + k))
        .collect();
    let mut dividend = Vec::with_capacity(horizon + 1);
    dividend.push(F::zero());
    for t in 1..=horizon {
        let r = technology.marginal_product_raw(base.capital[t]);
        dividend.push(r / g * price[t - 1] - price[t]);
    }

    // Earliest s ≥ start_hint with d^θ_t > 0 for every t > s.
    let mut last_bad: Option<usize> = None;
    for (t, &d) in dividend.iter().enumerate().skip(1) {
        if !(d > F::zero()) {
            last_bad = Some(t);
        }
    }
    let verified_start = match last_bad {
        None => start_hint,
        Some(bad) if bad + 1 < horizon => start_hint.max(bad),
        Some(bad) => {
            return Err(Error::InfeasibleSequence {
                index: bad,
                constraint: "curvature dividends positive beyond the start",
                margin: dividend[bad],
            })
        }
    };

    // Bubbleless steady state of the modified economy solves
    // β·w_θ(k) = G·k, i.e. ψ(k) = β(A(1−α)k^(α−1) + θ/(1+k)) − G = 0,
    // with ψ strictly decreasing.
    let a = spec.productivity();
    let alpha = spec.capital_share();
    let psi = |k: F| beta * (a * (one - alpha) * k.powf(alpha - one) + theta / (one + k)) - g;
    let lo = F::of(1e-12);
    let mut hi = one;
    let mut guard = 0;
    while psi(hi) > F::zero() {
        hi = hi + hi;
        guard += 1;
        if guard > 600 {
            break;
        }
    }
    let steady_capital = solve::bisect_decreasing_log(lo, hi, psi);
    let steady_rate = technology.marginal_product_raw(steady_capital);

    Ok(ThetaPath {
        spec,
        theta,
        technology,
        capital: base.capital.clone(),
        price,
        dividend,
        verified_start,
        steady_capital,
        steady_rate,
    })
}

impl<F: Real> ThetaPath<F> {
    /// Curvature weight θ.
    pub fn theta(&self) -> F {
        self.theta
    }

    /// The base-family spec the capital path came from.
    pub fn spec(&self) -> &XSequenceSpec<F> {
        &self.spec
    }

    /// Horizon of the stored arrays.
    pub fn horizon(&self) -> usize {
        self.capital.len() - 1
    }

    /// The modified economy restarted at [`verified_start`], with the
    /// remaining dividends as an explicit stream (declared growth equal to
    /// the base family's exact factor, which the curvature term does not
    /// change).
    pub fn shifted_economy(&self) -> Result<Economy<F>, F> {
        let s = self.verified_start;
        let dividends =
            DividendStream::explicit(self.dividend[s..].to_vec(), Tail::Zero)?
                .with_declared_growth(self.spec.dividend_growth_factor());
        Economy::new(
            self.spec.growth(),
            self.technology,
            SavingsRule::log(self.spec.patience())?,
            dividends,
            self.capital[s],
        )
    }

    /// Initial price of the shifted economy, `p^θ` at the verified start.
    pub fn shifted_initial_price(&self) -> F {
        self.price[self.verified_start]
    }

    /// Verify the shifted window exactly like [`verify_roundtrip`]: equation
    /// residuals of the stored sequences plus forward-simulation deviation.
    pub fn verify_roundtrip(&self) -> Result<RoundtripReport<F>, F> {
        let econ = self.shifted_economy()?;
        let s = self.verified_start;
        roundtrip_against(&econ, &self.capital[s..], &self.price[s..], self.price[s])
    }

    /// Package the shifted window as a completed [`Trajectory`] of the
    /// shifted economy, with dates relabelled to start at zero. The date-0
    /// dividend is zeroed by convention (it was paid to the outgoing
    /// generation before the window opens).
    pub fn trajectory(&self) -> Result<Trajectory<F>, F> {
        let econ = self.shifted_economy()?;
        let s = self.verified_start;
        let states: Vec<(F, F, F)> = self.capital[s..]
            .iter()
            .zip(&self.price[s..])
            .zip(&self.dividend[s..])
            .enumerate()
            .map(|(t, ((&k, &p), &d))| (k, p, if t == 0 { F::zero() } else { d }))
            .collect();
        let horizon = states.len() - 1;
        Ok(dynamics::assemble(&econ, states, RunStatus::Completed, horizon))
    }
}

/// Probe curvature weights `2^0, 2^1, …, 2^20` and return the first whose
/// modified steady-state return falls strictly below `bound` (together
/// with its path); fails with the best rate seen if none does.
pub fn find_theta<F: Real>(
    base: &ConstructedPath<F>,
    bound: F,
    start_hint: usize,
) -> Result<(F, ThetaPath<F>), F> {
    let mut best = F::infinity();
    let mut probed = 0usize;
    for j in 0..=20u32 {
        let theta = F::of(f64::from(1u32 << j.min(30)));
        probed += 1;
        let path = construct_theta(base, theta, start_hint)?;
        if path.steady_rate < bound {
            return Ok((theta, path));
        }
        best = best.min(path.steady_rate);
    }
    Err(Error::ThetaExhausted {
        probed,
        bound,
        best,
    })
}
