//! The economy aggregate: technology, savings behaviour, growth, dividends,
//! and the one-period equilibrium transition map.
//!
//! All quantities are detrended (per effective worker). Given today's
//! capital `k` and asset price `p`, next period's capital `x = g(k, p)`
//! clears the capital market:
//!
//! ```text
//! G·x + p = s(w(k), f'(x))
//! ```
//!
//! The left side is what the young must buy (new capital plus the asset);
//! the right side is what they save out of wages at the return they will
//! earn. Under gross substitution the residual is strictly increasing in
//! `x`, and a solution with `x ≥ 1e-14` either exists or the pair `(k, p)`
//! is certified as outside the transition's domain (the price is too high
//! for the young to absorb).

use crate::dividends::DividendStream;
use crate::error::{Error, Result};
use crate::production::ProductionTechnology;
use crate::savings::SavingsRule;
use crate::scalar::Real;
use crate::solve;

/// Lower edge of the capital domain: roots below this are treated as
/// non-existent (the economy cannot meaningfully operate there).
pub(crate) fn capital_floor<F: Real>() -> F {
    F::of(1e-14)
}

/// A fully specified economy.
#[derive(Clone)]
pub struct Economy<F> {
    growth: F,
    technology: ProductionTechnology<F>,
    savings: SavingsRule<F>,
    dividends: DividendStream<F>,
    initial_capital: F,
    warnings: Vec<String>,
}

impl<F: Real> std::fmt::Debug for Economy<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Economy")
            .field("growth", &self.growth)
            .field("technology", &self.technology)
            .field("savings", &self.savings)
            .field("dividends", &self.dividends)
            .field("initial_capital", &self.initial_capital)
            .field("warnings", &self.warnings)
            .finish()
    }
}

impl<F: Real> Economy<F> {
    /// Assemble and validate an economy.
    ///
    /// Requires `G > 0`, `k_0 > 0`, and long-run viability `f'(∞) < G`
    /// (otherwise detrended capital could grow without bound and no
    /// steady-state analysis applies). A failing gross-substitution check
    /// on the savings rule is recorded as a warning, not an error.
    pub fn new(
        growth: F,
        technology: ProductionTechnology<F>,
        savings: SavingsRule<F>,
        dividends: DividendStream<F>,
        initial_capital: F,
    ) -> Result<Self, F> {
        if !(growth > F::zero()) || !growth.is_finite() {
            return Err(Error::Parameter {
                name: "growth",
                requirement: "finite and > 0",
                value: growth,
            });
        }
        if !(initial_capital > F::zero()) || !initial_capital.is_finite() {
            return Err(Error::Parameter {
                name: "initial capital",
                requirement: "finite and > 0",
                value: initial_capital,
            });
        }
        let limit = technology.marginal_product_limit();
        if !(limit < growth) {
            return Err(Error::UnviableTechnology { limit, growth });
        }
        let mut warnings = Vec::new();
        let check = savings.check_gross_substitution(F::of(1e-6), F::of(1e6), 64);
        if let Some((c, drop)) = check.violation {
            warnings.push(format!(
                "gross substitution violated: c*v'(c) decreases by {drop} near c = {c}; \
                 savings may fall as returns rise and the transition root may be non-unique"
            ));
        }
        Ok(Self {
            growth,
            technology,
            savings,
            dividends,
            initial_capital,
            warnings,
        })
    }

    /// Growth factor `G` of effective labour.
    pub fn growth(&self) -> F {
        self.growth
    }

    /// The production technology.
    pub fn technology(&self) -> &ProductionTechnology<F> {
        &self.technology
    }

    /// The savings rule.
    pub fn savings_rule(&self) -> &SavingsRule<F> {
        &self.savings
    }

    /// The asset's dividend stream.
    pub fn dividends(&self) -> &DividendStream<F> {
        &self.dividends
    }

    /// Initial capital `k_0`.
    pub fn initial_capital(&self) -> F {
        self.initial_capital
    }

    /// Non-fatal diagnostics collected at construction.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Same economy with a different dividend stream.
    pub fn with_dividends(&self, dividends: DividendStream<F>) -> Self {
        Self {
            dividends,
            ..self.clone()
        }
    }

    /// Same economy restarted from a different initial capital.
    pub fn with_initial_capital(&self, initial_capital: F) -> Result<Self, F> {
        if !(initial_capital > F::zero()) || !initial_capital.is_finite() {
            return Err(Error::Parameter {
                name: "initial capital",
                requirement: "finite and > 0",
                value: initial_capital,
            });
        }
        Ok(Self {
            initial_capital,
            ..self.clone()
        })
    }

    /// Competitive wage at capital `k`.
    pub fn wage(&self, k: F) -> Result<F, F> {
        self.technology.wage(k)
    }

    /// Savings out of wage `w` at gross return `rate`.
    pub fn savings(&self, wage: F, rate: F) -> Result<F, F> {
        self.savings.savings(wage, rate)
    }

    /// One-period transition: the `x` clearing `G·x + p = s(w(k), f'(x))`.
    ///
    /// Returns `Ok(None)` when no market-clearing capital `x ≥ 1e-14`
    /// exists, i.e. the residual is already non-negative at the floor —
    /// the certificate that `(k, p)` lies outside the transition's domain.
    pub fn transition(&self, k: F, p: F) -> Result<Option<F>, F> {
        self.technology.marginal_product(k)?; // validates k
        if !(p >= F::zero()) || !p.is_finite() {
            return Err(Error::Parameter {
                name: "price",
                requirement: "finite and >= 0",
                value: p,
            });
        }
        Ok(self.transition_raw(k, p))
    }

    /// Highest asset price the young can absorb at capital `k`: their
    /// savings when the marginal return on capital is driven to its
    /// practical maximum (capital at the domain floor). Prices at or above
    /// this level leave the transition undefined immediately.
    pub fn savings_cap(&self, k: F) -> Result<F, F> {
        let w = self.technology.wage(k)?;
        let probe = F::of(1e-300).max(F::min_positive_value());
        let mut r = self.technology.marginal_product_raw(probe);
        if !r.is_finite() {
            r = F::max_value().sqrt();
        }
        Ok(self.savings.savings_raw(w, r))
    }

    /// Price supporting a steady state at capital `k`:
    /// `p(k) = s(w(k), f'(k)) − G·k` (may be negative; a positive value
    /// means the capital market at `k` only clears if the young also hold
    /// an asset worth `p(k)`).
    pub fn steady_price(&self, k: F) -> Result<F, F> {
        let w = self.technology.wage(k)?;
        let r = self.technology.marginal_product_raw(k);
        Ok(self.savings.savings_raw(w, r) - self.growth * k)
    }

    pub(crate) fn transition_raw(&self, k: F, p: F) -> Option<F> {
        let w = self.technology.wage_raw(k);
        let g = self.growth;
        let phi = |x: F| g * x + p - self.savings.savings_raw(w, self.technology.marginal_product_raw(x));
        let floor = capital_floor::<F>();
        if phi(floor) >= F::zero() {
            return None;
        }
        // φ(w/G) = w + p − s(w, ·) > 0 because savings never exceed the
        // wage; the expansion loop is a guard against rules that break
        // that contract.
        let mut hi = (w / g).max(floor + floor);
        let mut guard = 0usize;
        while phi(hi) < F::zero() {
            hi = hi + hi;
            guard += 1;
            if guard > 128 || !hi.is_finite() {
                return None;
            }
        }
        Some(solve::bisect_increasing(floor, hi, phi))
    }
}
