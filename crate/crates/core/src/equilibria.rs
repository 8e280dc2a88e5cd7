//! Equilibrium-set search, long-run classification, bubble detection, and
//! the regime conditions that decide which of these outcomes is possible.
//!
//! The initial prices `p0` from which the economy can run forever form a
//! compact interval. Over a finite horizon `T` only an outer approximation
//! is observable: the set of `p0` whose simulation completes `T` steps.
//! [`equilibrium_set`] brackets that set by bisection — probes that fail
//! high sit above it, probes that fail low sit below it — and reports both
//! endpoints with their bracket widths plus a doubled-horizon sensitivity
//! check, so a caller can see whether the approximation has converged.

use crate::dividends::DividendStream;
use crate::dynamics::{simulate, survival_status, RunStatus, Trajectory};
use crate::economy::Economy;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::steady::{diamond_reference, dividend_growth_estimate, SteadyStateReport};

/// Total survival simulations `equilibrium_set` may spend before giving up.
///
/// The dyadic survivor search doubles its probe count per refinement level,
/// so a surviving window narrower than `span / MAX_SEARCH_PROBES` is
/// treated as not found. This protects against economies whose surviving
/// window shrinks exponentially in the horizon (constructed-dividend
/// economies on an unstable path), where no practical grid can land inside.
const MAX_SEARCH_PROBES: usize = 1 << 22;

/// Probe budget for the doubled-horizon sensitivity pass. The pass is
/// advisory — failing to find a survivor is itself the finding — so it gets
/// a much smaller budget than the primary search.
const SENSITIVITY_PROBES: usize = 1 << 16;

/// Bisection iteration cap for the endpoint searches.
const MAX_BISECT: usize = 200;

/// One endpoint of the surviving-price interval.
#[derive(Debug, Clone)]
pub struct EndpointEstimate<F> {
    /// A price that survives the horizon (the innermost bracket point).
    pub price: F,
    /// Distance to the nearest probed failing price. Zero when the
    /// endpoint sits on a hard boundary (`p0 = 0` surviving).
    pub width: F,
    /// Full simulation at `price`.
    pub trajectory: Trajectory<F>,
}

/// Endpoints recomputed at twice the horizon.
///
/// The surviving set at `2T` is contained in the set at `T`; how much the
/// endpoints move when the horizon doubles is the practical measure of how
/// well the finite-horizon approximation has converged.
#[derive(Debug, Clone, Copy)]
pub struct SensitivityReport<F> {
    /// The doubled horizon used.
    pub horizon: usize,
    /// Lower endpoint at the doubled horizon; `None` when no surviving
    /// price was found there within the sensitivity probe budget.
    pub lower: Option<F>,
    /// Upper endpoint at the doubled horizon.
    pub upper: Option<F>,
}

/// Bracketed approximation of the set of surviving initial prices.
#[derive(Debug, Clone)]
pub struct EquilibriumSet<F> {
    lower: EndpointEstimate<F>,
    upper: EndpointEstimate<F>,
    horizon: usize,
    tolerance: F,
    probes: usize,
    sensitivity: SensitivityReport<F>,
}

impl<F: Real> EquilibriumSet<F> {
    /// Smallest surviving initial price found.
    pub fn lower(&self) -> &EndpointEstimate<F> {
        &self.lower
    }

    /// Largest surviving initial price found.
    pub fn upper(&self) -> &EndpointEstimate<F> {
        &self.upper
    }

    /// Horizon the survival test used.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Requested bracket width.
    pub fn tolerance(&self) -> F {
        self.tolerance
    }

    /// Total survival simulations spent (search, bisection, sensitivity).
    pub fn probes(&self) -> usize {
        self.probes
    }

    /// Endpoints recomputed at twice the horizon.
    pub fn sensitivity(&self) -> &SensitivityReport<F> {
        &self.sensitivity
    }
}

/// Interval endpoints produced by one horizon's search, before trajectories
/// are attached.
struct IntervalEstimate<F> {
    lower: F,
    lower_width: F,
    upper: F,
    upper_width: F,
}

/// Bracket the set of initial prices that survive `horizon` periods.
///
/// The search space is `[0, cap]` where `cap` is the savings supremum at
/// the initial capital — no larger price can clear the market even once.
/// A dyadic grid refines over the space until some probe survives; two
/// independent bisections then push toward the smallest and largest
/// surviving price until the brackets are narrower than `tol`. When no
/// probe survives down to spacing `tol` (or the probe budget runs out) the
/// search fails with [`Error::NoSurvivingPrice`] carrying the finest
/// spacing tried — the usual remedies are a shorter horizon or coarser
/// tolerance, since a survivor is guaranteed to exist for some real `p0`.
pub fn equilibrium_set<F: Real>(
    econ: &Economy<F>,
    horizon: usize,
    tol: F,
) -> Result<EquilibriumSet<F>, F> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    if !(tol > F::zero()) || !tol.is_finite() {
        return Err(Error::Parameter {
            name: "tol",
            requirement: "positive and finite",
            value: tol,
        });
    }
    let cap = price_cap(econ)?;
    let mut probes = 0usize;

    let main = search(
        econ,
        horizon,
        tol,
        F::zero(),
        cap,
        MAX_SEARCH_PROBES,
        &mut probes,
    )?;
    let lower_traj = simulate(econ, main.lower, horizon)?;
    let upper_traj = simulate(econ, main.upper, horizon)?;
    debug_assert!(lower_traj.completed() && upper_traj.completed());

    // Sensitivity pass: the surviving set at 2T is inside the main
    // brackets, so the doubled-horizon search can start from them.
    let doubled = horizon * 2;
    let sens_lo = (main.lower - main.lower_width).max(F::zero());
    let sens_hi = main.upper + main.upper_width;
    let sensitivity = match search(
        econ,
        doubled,
        tol,
        sens_lo,
        sens_hi,
        SENSITIVITY_PROBES,
        &mut probes,
    ) {
        Ok(est) => SensitivityReport {
            horizon: doubled,
            lower: Some(est.lower),
            upper: Some(est.upper),
        },
        Err(Error::NoSurvivingPrice { .. }) => SensitivityReport {
            horizon: doubled,
            lower: None,
            upper: None,
        },
        Err(other) => return Err(other),
    };

    Ok(EquilibriumSet {
        lower: EndpointEstimate {
            price: main.lower,
            width: main.lower_width,
            trajectory: lower_traj,
        },
        upper: EndpointEstimate {
            price: main.upper,
            width: main.upper_width,
            trajectory: upper_traj,
        },
        horizon,
        tolerance: tol,
        probes,
        sensitivity,
    })
}

/// Upper bound of the probe space: the most the young can possibly save.
///
/// When the savings rule passed its gross-substitution screening this is
/// `s(w(k₀), R→∞)`, which dominates `s(w(k₀), R)` for every `R`; otherwise
/// monotonicity in `R` is unreliable and the wage itself — a bound for any
/// rule, since savings come out of the wage — is used instead.
fn price_cap<F: Real>(econ: &Economy<F>) -> Result<F, F> {
    let k0 = econ.initial_capital();
    if econ.warnings().is_empty() {
        econ.savings_cap(k0)
    } else {
        econ.wage(k0)
    }
}

/// Find both endpoints of the surviving set inside `[lo_bound, hi_bound]`.
///
/// `hi_bound` must fail (the caller passes either the savings cap or a
/// probe that already failed at a shorter horizon); `lo_bound` may survive,
/// in which case it is itself the lower endpoint.
fn search<F: Real>(
    econ: &Economy<F>,
    horizon: usize,
    tol: F,
    lo_bound: F,
    hi_bound: F,
    budget: usize,
    probes: &mut usize,
) -> Result<IntervalEstimate<F>, F> {
    let survives = |p0: F, probes: &mut usize| -> bool {
        *probes += 1;
        survival_status(econ, p0, horizon) == RunStatus::Completed
    };

    // A zero price survives any horizon when there are no dividends to pay
    // (the asset is then worthless forever, which is consistent), so the
    // lower search can resolve immediately; otherwise probe the bounds.
    let lo_survives = if lo_bound == F::zero() && econ.dividends().is_zero() {
        true
    } else {
        survives(lo_bound, probes)
    };
    if survives(hi_bound, probes) {
        // Defensive: cannot happen for the caps we pass in, but a caller-
        // supplied surviving top collapses the upper bracket to a point.
        return Ok(IntervalEstimate {
            lower: if lo_survives { lo_bound } else { hi_bound },
            lower_width: if lo_survives {
                F::zero()
            } else {
                hi_bound - lo_bound
            },
            upper: hi_bound,
            upper_width: F::zero(),
        });
    }

    // Locate one survivor. Each refinement level probes the odd multiples
    // of the current spacing, so no point is visited twice and after level
    // L the whole span has been covered at spacing span/2^(L+1).
    let span = hi_bound - lo_bound;
    let (survivor, gap) = if lo_survives {
        (lo_bound, F::zero())
    } else {
        let mut level: u32 = 0;
        'refine: loop {
            let spacing = span / F::of(2.0f64.powi(level as i32 + 1));
            if !(spacing >= tol) {
                return Err(Error::NoSurvivingPrice {
                    probes: *probes,
                    spacing,
                });
            }
            let count: u64 = 1 << level.min(62);
            for i in 0..count {
                if *probes >= budget {
                    return Err(Error::NoSurvivingPrice {
                        probes: *probes,
                        spacing,
                    });
                }
                let offset = F::of((2 * i + 1) as f64) * spacing;
                let p0 = lo_bound + offset;
                if p0 >= hi_bound {
                    break;
                }
                if survives(p0, probes) {
                    break 'refine (p0, spacing);
                }
            }
            level += 1;
        }
    };

    // Lower endpoint: bisect between the nearest failing probe below the
    // survivor (its dyadic neighbour, probed at an earlier level) and the
    // survivor itself.
    let (lower, lower_width) = if survivor == lo_bound {
        (lo_bound, F::zero())
    } else {
        let mut bad = survivor - gap;
        let mut good = survivor;
        for _ in 0..MAX_BISECT {
            if good - bad <= tol {
                break;
            }
            let mid = (bad + good) / F::of(2.0);
            if mid <= bad || mid >= good {
                break;
            }
            if survives(mid, probes) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        (good, good - bad)
    };

    // Upper endpoint: bisect between the survivor and the nearest failing
    // probe above it.
    let mut good = survivor;
    let mut bad = if gap > F::zero() {
        survivor + gap
    } else {
        hi_bound
    };
    for _ in 0..MAX_BISECT {
        if bad - good <= tol {
            break;
        }
        let mid = (bad + good) / F::of(2.0);
        if mid <= good || mid >= bad {
            break;
        }
        if survives(mid, probes) {
            good = mid;
        } else {
            bad = mid;
        }
    }

    Ok(IntervalEstimate {
        lower,
        lower_width,
        upper: good,
        upper_width: bad - good,
    })
}

/// Thresholds used by [`classify`].
#[derive(Debug, Clone, Copy)]
pub struct ClassificationThresholds<F> {
    /// Closeness required of terminal values to their limit targets.
    pub tolerance: F,
    /// Terminal capital at or below this counts as "driven to zero".
    pub capital_floor: F,
    /// Terminal return at or above this counts as "diverging".
    pub rate_ceiling: F,
}

impl<F: Real> ClassificationThresholds<F> {
    /// Defaults: tolerance `1e-4·max(1,G)`, capital floor `1e-6`, rate
    /// ceiling `10·G`.
    pub fn defaults(econ: &Economy<F>) -> Self {
        let g = econ.growth();
        ClassificationThresholds {
            tolerance: F::of(1e-4) * F::one().max(g),
            capital_floor: F::of(1e-6),
            rate_ceiling: F::of(10.0) * g,
        }
    }
}

/// Long-run label assigned to a completed trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassificationLabel {
    /// Capital collapses toward zero while returns diverge; the asset
    /// crowds investment out entirely.
    BubblelessKToZero,
    /// The path settles at a bubbleless steady state: price → 0, capital →
    /// some fixed point of `k = g(k, 0)`.
    AsymptoticallyBubbleless,
    /// The path settles at the bubbly steady state with a positive price.
    AsymptoticallyBubbly,
    /// None of the patterns matched at this horizon.
    Inconclusive,
}

impl ClassificationLabel {
    /// Stable machine-readable name.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::BubblelessKToZero => "bubbleless_k_to_zero",
            Self::AsymptoticallyBubbleless => "asymptotically_bubbleless",
            Self::AsymptoticallyBubbly => "asymptotically_bubbly",
            Self::Inconclusive => "inconclusive",
        }
    }
}

/// The steady state a classified trajectory is heading to.
#[derive(Debug, Clone, Copy)]
pub struct SteadyTarget<F> {
    /// Target capital.
    pub capital: F,
    /// Target price (zero for bubbleless targets).
    pub price: F,
    /// Euclidean distance of the terminal `(k, p)` from the target.
    pub distance: F,
}

/// Terminal diagnostics and the long-run label they support.
#[derive(Debug, Clone, Copy)]
pub struct Classification<F> {
    /// The assigned label.
    pub label: ClassificationLabel,
    /// Terminal capital `k_T`.
    pub terminal_capital: F,
    /// Terminal price `p_T`.
    pub terminal_price: F,
    /// Terminal gross return `R_T`.
    pub terminal_rate: F,
    /// Partial sum `Σ_{t≤T} d_t/p_t` (the bubble summability statistic).
    pub dividend_price_sum: F,
    /// Matched steady state, when the label names one.
    pub target: Option<SteadyTarget<F>>,
}

/// Label the long-run behavior of a completed trajectory.
///
/// Thresholds default per [`ClassificationThresholds::defaults`]; see
/// [`classify_with`] to override them. A trajectory that did not complete
/// its horizon is always `Inconclusive` — the failure index, not the
/// terminal state, is the informative datum there.
pub fn classify<F: Real>(
    traj: &Trajectory<F>,
    ss: &SteadyStateReport<F>,
    econ: &Economy<F>,
) -> Classification<F> {
    classify_with(traj, ss, econ.growth(), ClassificationThresholds::defaults(econ))
}

/// [`classify`] with explicit thresholds.
pub fn classify_with<F: Real>(
    traj: &Trajectory<F>,
    ss: &SteadyStateReport<F>,
    growth: F,
    thresholds: ClassificationThresholds<F>,
) -> Classification<F> {
    let last = traj.last();
    let (k, p, r) = (last.capital, last.price, last.rate);
    let sum = traj.dividend_price_sum();
    let tol = thresholds.tolerance;

    let mut label = ClassificationLabel::Inconclusive;
    let mut target = None;

    if traj.completed() {
        if let Some(b) = &ss.bubbly {
            if (r - growth).abs() <= tol
                && (k - b.capital).abs() <= tol
                && p >= b.price / F::of(2.0)
            {
                label = ClassificationLabel::AsymptoticallyBubbly;
                target = Some(SteadyTarget {
                    capital: b.capital,
                    price: b.price,
                    distance: (k - b.capital).hypot(p - b.price),
                });
            }
        }
        if label == ClassificationLabel::Inconclusive
            && k <= thresholds.capital_floor
            && r >= thresholds.rate_ceiling
        {
            label = ClassificationLabel::BubblelessKToZero;
        }
        if label == ClassificationLabel::Inconclusive && p <= tol {
            // Nearest bubbleless steady state, if any is within tolerance.
            let mut best: Option<F> = None;
            for &fixed in &ss.bubbleless {
                let better = match best {
                    Some(b) => (k - fixed).abs() < (k - b).abs(),
                    None => true,
                };
                if better {
                    best = Some(fixed);
                }
            }
            if let Some(fixed) = best {
                if (k - fixed).abs() <= tol {
                    label = ClassificationLabel::AsymptoticallyBubbleless;
                    target = Some(SteadyTarget {
                        capital: fixed,
                        price: F::zero(),
                        distance: (k - fixed).hypot(p),
                    });
                }
            }
        }
    }

    Classification {
        label,
        terminal_capital: k,
        terminal_price: p,
        terminal_rate: r,
        dividend_price_sum: sum,
        target,
    }
}

/// Verdict of the dividend-price summability test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BubbleVerdict {
    /// `Σ d_t/p_t` converges (tail certified geometric or identically
    /// zero): the price exceeds the fundamental value in the limit.
    Bubbly,
    /// The series diverges, or prices hit zero and stay there: the price
    /// is fully backed by dividends.
    Bubbleless,
    /// The tail behavior is ambiguous at this horizon.
    Inconclusive,
}

impl BubbleVerdict {
    /// Stable machine-readable name.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Bubbly => "bubbly",
            Self::Bubbleless => "bubbleless",
            Self::Inconclusive => "inconclusive",
        }
    }
}

/// Result of [`bubble_test`].
#[derive(Debug, Clone)]
pub struct BubbleTest<F> {
    /// The verdict.
    pub verdict: BubbleVerdict,
    /// Partial sums `S_t = Σ_{s≤t} d_s/p_s` (index 0 is zero).
    pub partial_sums: Vec<F>,
    /// `S_T`, the last partial sum.
    pub sum: F,
    /// Certified bound on the omitted tail `Σ_{t>T} d_t/p_t`, when the
    /// verdict is `Bubbly` via a geometric fit.
    pub tail_bound: Option<F>,
    /// One-line justification of the verdict.
    pub reason: &'static str,
}

/// Successive-ratio ceiling under which the increment tail counts as
/// dominated by a convergent geometric series.
const RATIO_CEILING_GAP: f64 = 1e-6;

/// Increment floor above which the series counts as divergent.
const INCREMENT_FLOOR: f64 = 1e-8;

/// Decide from the increments `d_t/p_t` whether the price carries a bubble.
///
/// A positive-price path carries a bubble exactly when `Σ d_t/p_t`
/// converges. Finitely many terms cannot settle convergence, so the test
/// inspects the second half of the horizon: increments identically zero or
/// dominated by a fitted geometric with ratio below `1 − 1e-6` certify a
/// convergent tail (bubbly); increments bounded below by `1e-8` certify
/// divergence (bubbleless); anything in between is inconclusive. Prices
/// that reach zero and stay there make the asset worthless outright, which
/// is the bubbleless case with a zero fundamental.
pub fn bubble_test<F: Real>(traj: &Trajectory<F>) -> BubbleTest<F> {
    let rec = traj.records();
    let partial_sums = traj.dividend_price_partials();
    let sum = *partial_sums.last().unwrap_or(&F::zero());
    let done = |verdict, tail_bound, reason| BubbleTest {
        verdict,
        partial_sums: partial_sums.clone(),
        sum,
        tail_bound,
        reason,
    };

    if rec.len() < 2 {
        return done(
            BubbleVerdict::Inconclusive,
            None,
            "trajectory too short to inspect the increment tail",
        );
    }

    if rec.iter().any(|r| r.price <= F::zero()) {
        // Prices can only hit zero and stay there (a revived price would
        // need a negative dividend), so a zero anywhere means the asset is
        // eventually worthless: price equals the zero fundamental.
        let zero_tail = rec
            .iter()
            .skip_while(|r| r.price > F::zero())
            .all(|r| r.price == F::zero());
        return if zero_tail {
            done(
                BubbleVerdict::Bubbleless,
                None,
                "price reaches zero and stays there; price equals the zero fundamental",
            )
        } else {
            done(
                BubbleVerdict::Inconclusive,
                None,
                "prices mix zeros and positives, which no equilibrium path does",
            )
        };
    }

    // Inspect the second half of the horizon.
    let start = (rec.len() / 2).max(1);
    let incs: Vec<F> = rec[start..]
        .iter()
        .map(|r| r.dividend / r.price)
        .collect();

    if incs.iter().all(|&x| x == F::zero()) {
        return done(
            BubbleVerdict::Bubbly,
            Some(F::zero()),
            "no dividends over the second half; the partial sums have converged",
        );
    }

    if incs.iter().all(|&x| x > F::zero()) {
        let mut max_ratio = F::zero();
        for pair in incs.windows(2) {
            max_ratio = max_ratio.max(pair[1] / pair[0]);
        }
        if max_ratio <= F::one() - F::of(RATIO_CEILING_GAP) {
            let last = *incs.last().unwrap();
            return done(
                BubbleVerdict::Bubbly,
                Some(last * max_ratio / (F::one() - max_ratio)),
                "increments are dominated by a geometric series with ratio below one",
            );
        }
    }

    let min_inc = incs.iter().cloned().fold(F::infinity(), F::min);
    if min_inc >= F::of(INCREMENT_FLOOR) {
        return done(
            BubbleVerdict::Bubbleless,
            None,
            "increments stay bounded below; the dividend-price series diverges",
        );
    }

    done(
        BubbleVerdict::Inconclusive,
        None,
        "increment tail neither certifies convergence nor divergence",
    )
}

/// Status of one testable regime condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionStatus {
    /// The finite-horizon evidence certifies the condition.
    Holds,
    /// The finite-horizon evidence certifies its negation.
    Fails,
    /// The evidence is consistent with both.
    Inconclusive,
}

impl ConditionStatus {
    /// Stable machine-readable name.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Holds => "holds",
            Self::Fails => "fails",
            Self::Inconclusive => "inconclusive",
        }
    }
}

/// One regime condition with the quantities that decided it.
#[derive(Debug, Clone)]
pub struct Condition<F> {
    /// Stable name of the condition.
    pub name: &'static str,
    /// Whether the condition holds, fails, or cannot be decided.
    pub status: ConditionStatus,
    /// Named quantities backing the status.
    pub values: Vec<(&'static str, F)>,
}

/// All testable regime conditions for one economy.
#[derive(Debug, Clone)]
pub struct RegimeReport<F> {
    /// Horizon used for the truncated sums and reference path.
    pub horizon: usize,
    /// The evaluated conditions, in a fixed order.
    pub conditions: Vec<Condition<F>>,
}

impl<F: Real> RegimeReport<F> {
    /// Look a condition up by name.
    pub fn condition(&self, name: &str) -> Option<&Condition<F>> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// Relative comparison margin for exact quantities.
const EXACT_MARGIN: f64 = 1e-9;

/// Relative comparison margin when a fitted (rather than declared)
/// dividend growth factor enters the comparison.
const FITTED_MARGIN: f64 = 2e-2;

/// Evaluate the testable regime conditions with finite-horizon caveats.
///
/// Each condition reports holds/fails/inconclusive together with the
/// computed quantities:
///
/// * `dividend_sum_divergence` — the detrended dividend sum diverges, which
///   rules out bubbles outright.
/// * `reference_rate_exceeds_growth` — the no-asset reference path settles
///   at a return above `G`; dividends are then valued and the bubbleless
///   equilibrium is unique.
/// * `dividend_growth_ordering` — `R < G_d < G` with `R` the top return
///   over the bubbleless steady states: the dichotomy regime where the
///   price either tracks the fundamental or leaves it asymptotically.
/// * `capital_overaccumulation` — `sup f'(𝒦) < G`: returns below growth,
///   the precondition for bubbles to be feasible at all.
/// * `discounted_dividends_within_steady_price` — the level dividend sum
///   discounted at `R_m = f'(max{k₀, max 𝒦})` fits under the steady-state-
///   consistent price at `k₀`; bubbleless equilibria then exist from `k₀`.
pub fn regime_report<F: Real>(
    econ: &Economy<F>,
    ss: &SteadyStateReport<F>,
    horizon: usize,
) -> Result<RegimeReport<F>, F> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    let g = econ.growth();
    let stream = econ.dividends();
    let exact = F::of(EXACT_MARGIN);

    let mut conditions = Vec::with_capacity(5);
    conditions.push(dividend_sum_condition(stream, g, horizon));

    // Reference-path return vs growth.
    let diamond = diamond_reference(econ, horizon)?;
    let r_star = diamond.limit_rate;
    let status = if !diamond.converged {
        ConditionStatus::Inconclusive
    } else if r_star > g * (F::one() + exact) {
        ConditionStatus::Holds
    } else if r_star < g * (F::one() - exact) {
        ConditionStatus::Fails
    } else {
        ConditionStatus::Inconclusive
    };
    conditions.push(Condition {
        name: "reference_rate_exceeds_growth",
        status,
        values: vec![
            ("reference_rate", r_star),
            ("growth", g),
            ("converged", if diamond.converged { F::one() } else { F::zero() }),
        ],
    });

    // R < G_d < G ordering.
    let est = dividend_growth_estimate(stream, g, horizon);
    let margin = if est.exact {
        exact
    } else {
        F::of(FITTED_MARGIN)
    } * F::one().max(g);
    let ordering = match ss.max_rate {
        Some(r_sup) => {
            if est.factor - r_sup > margin && g - est.factor > margin {
                ConditionStatus::Holds
            } else if est.factor < r_sup - margin || est.factor > g + margin {
                ConditionStatus::Fails
            } else {
                ConditionStatus::Inconclusive
            }
        }
        None => ConditionStatus::Inconclusive,
    };
    let mut values = vec![("dividend_growth", est.factor), ("growth", g)];
    if let Some(r_sup) = ss.max_rate {
        values.push(("rate_sup", r_sup));
    }
    values.push(("declared", if est.exact { F::one() } else { F::zero() }));
    conditions.push(Condition {
        name: "dividend_growth_ordering",
        status: ordering,
        values,
    });

    // sup f'(𝒦) < G.
    let over = match ss.max_rate {
        Some(r_sup) => {
            if r_sup < g * (F::one() - exact) {
                ConditionStatus::Holds
            } else if r_sup > g * (F::one() + exact) {
                ConditionStatus::Fails
            } else {
                ConditionStatus::Inconclusive
            }
        }
        None => ConditionStatus::Inconclusive,
    };
    let mut values = vec![("growth", g)];
    if let Some(r_sup) = ss.max_rate {
        values.insert(0, ("rate_sup", r_sup));
    }
    conditions.push(Condition {
        name: "capital_overaccumulation",
        status: over,
        values,
    });

    conditions.push(affordability_condition(econ, ss, horizon)?);

    Ok(RegimeReport {
        horizon,
        conditions,
    })
}

/// Does the detrended dividend sum diverge?
fn dividend_sum_condition<F: Real>(
    stream: &DividendStream<F>,
    growth: F,
    horizon: usize,
) -> Condition<F> {
    let mut partial = F::zero();
    for t in 1..=horizon {
        partial = partial + stream.value(t);
    }
    let mut values = vec![("partial_sum", partial)];

    let status = if stream.is_zero() || stream.vanishes_after(horizon) {
        ConditionStatus::Fails
    } else if let Some(gd) = stream.declared_growth() {
        let ratio = gd / growth;
        values.push(("detrended_ratio", ratio));
        if ratio >= F::one() {
            ConditionStatus::Holds
        } else {
            ConditionStatus::Fails
        }
    } else {
        // Fitted tail: bounded below ⇒ divergent; geometric decay ⇒
        // convergent; otherwise undecided.
        let start = (horizon / 2).max(1);
        let window: Vec<F> = (start..=horizon).map(|t| stream.value(t)).collect();
        let min_w = window.iter().cloned().fold(F::infinity(), F::min);
        values.push(("min_tail_dividend", min_w));
        if min_w >= F::of(INCREMENT_FLOOR) {
            ConditionStatus::Holds
        } else if window.iter().all(|&d| d > F::zero()) {
            let mut max_ratio = F::zero();
            for pair in window.windows(2) {
                max_ratio = max_ratio.max(pair[1] / pair[0]);
            }
            values.push(("max_tail_ratio", max_ratio));
            if max_ratio <= F::one() - F::of(RATIO_CEILING_GAP) {
                ConditionStatus::Fails
            } else {
                ConditionStatus::Inconclusive
            }
        } else {
            ConditionStatus::Inconclusive
        }
    };

    Condition {
        name: "dividend_sum_divergence",
        status,
        values,
    }
}

/// Is the discounted level dividend sum within the steady-state-consistent
/// price at the initial capital?
fn affordability_condition<F: Real>(
    econ: &Economy<F>,
    ss: &SteadyStateReport<F>,
    horizon: usize,
) -> Result<Condition<F>, F> {
    let g = econ.growth();
    let stream = econ.dividends();
    let k0 = econ.initial_capital();
    let k_m = ss
        .bubbleless
        .last()
        .copied()
        .map_or(k0, |top| top.max(k0));
    let r_m = econ.technology().marginal_product(k_m)?;
    let price_bound = econ.steady_price(k0)?;

    // Σ_{t≥1} d_t·(G/R_m)^t, truncated at the horizon.
    let step = g / r_m;
    let mut factor = F::one();
    let mut sum = F::zero();
    for t in 1..=horizon {
        factor = factor * step;
        sum = sum + stream.value(t) * factor;
        if !sum.is_finite() {
            break;
        }
    }

    // Geometric tail certificate when the stream declares its growth and
    // that growth is dominated by the discount rate.
    let tail = if stream.vanishes_after(horizon) {
        Some(F::zero())
    } else {
        stream.declared_growth().and_then(|gd| {
            let x = gd / r_m;
            if x < F::one() {
                Some(stream.value(horizon) * factor * x / (F::one() - x))
            } else {
                None
            }
        })
    };

    let status = if !sum.is_finite() || sum > price_bound {
        ConditionStatus::Fails
    } else {
        match tail {
            Some(bound) if sum + bound <= price_bound => ConditionStatus::Holds,
            Some(_) => ConditionStatus::Fails,
            None => ConditionStatus::Inconclusive,
        }
    };

    let mut values = vec![
        ("discounted_sum", sum),
        ("steady_price_at_start", price_bound),
        ("rate_cap", r_m),
    ];
    if let Some(bound) = tail {
        values.push(("tail_bound", bound));
    }
    Ok(Condition {
        name: "discounted_dividends_within_steady_price",
        status,
        values,
    })
}
