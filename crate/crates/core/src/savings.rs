//! Household savings behaviour: how much of the young-age wage is saved at a
//! given gross return.
//!
//! Two rules are supported: the log-utility closed form `s = β·w`, and a
//! general time-separable rule defined by a pair of marginal-utility
//! functions, solved from the first-order condition
//! `u'(w − s) = R·v'(R·s)` by bisection. The separable rule's comparative
//! statics in `R` are governed by whether `c·v'(c)` is non-decreasing
//! (gross substitution); that condition is checked on a grid and surfaced
//! as a warning, never an error.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solve;

/// Marginal utility as a shareable closure.
pub type MarginalUtility<F> = Arc<dyn Fn(F) -> F + Send + Sync>;

/// How the young convert wages into savings.
#[derive(Clone)]
pub enum SavingsRule<F> {
    /// Log utility: save the fraction `β` of the wage regardless of returns.
    Log { patience: F },
    /// Time-separable utility with marginal utilities `young` (first period)
    /// and `old` (second period); savings solve
    /// `young(w − s) = R·old(R·s)` on `(0, w)`.
    Separable {
        young: MarginalUtility<F>,
        old: MarginalUtility<F>,
    },
}

/// Result of the gross-substitution grid check on `c·v'(c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrossSubstitutionCheck<F> {
    /// Whether `c·v'(c)` was non-decreasing across the whole grid.
    pub satisfied: bool,
    /// First grid point where it strictly decreased, with the drop size.
    pub violation: Option<(F, F)>,
}

impl<F: Real> SavingsRule<F> {
    /// Log-utility rule with patience `β ∈ (0, 1)`.
    pub fn log(patience: F) -> Result<Self, F> {
        if !(patience > F::zero() && patience < F::one()) {
            return Err(Error::Parameter {
                name: "patience",
                requirement: "strictly between 0 and 1",
                value: patience,
            });
        }
        Ok(Self::Log { patience })
    }

    /// Separable rule from raw marginal utilities.
    ///
    /// Both closures must be positive and strictly decreasing on `(0, ∞)`
    /// with the usual boundary behaviour (→ ∞ at 0); that contract is the
    /// caller's responsibility and is what guarantees an interior root.
    pub fn separable(young: MarginalUtility<F>, old: MarginalUtility<F>) -> Self {
        Self::Separable { young, old }
    }

    /// Separable rule with isoelastic marginal utilities
    /// `u'(c) = (1−β)·c^(−γ_young)` and `v'(c) = β·c^(−γ_old)`.
    ///
    /// With `γ_young = γ_old = 1` this reproduces the log rule exactly.
    /// `γ_old > 1` violates gross substitution (savings fall as returns
    /// rise), which the economy constructor reports as a warning.
    pub fn crra(patience: F, gamma_young: F, gamma_old: F) -> Result<Self, F> {
        if !(patience > F::zero() && patience < F::one()) {
            return Err(Error::Parameter {
                name: "patience",
                requirement: "strictly between 0 and 1",
                value: patience,
            });
        }
        for (name, g) in [("gamma_young", gamma_young), ("gamma_old", gamma_old)] {
            if !(g > F::zero()) || !g.is_finite() {
                return Err(Error::Parameter {
                    name,
                    requirement: "finite and > 0",
                    value: g,
                });
            }
        }
        let weight_young = F::one() - patience;
        let young: MarginalUtility<F> = Arc::new(move |c| weight_young * c.powf(-gamma_young));
        let old: MarginalUtility<F> = Arc::new(move |c| patience * c.powf(-gamma_old));
        Ok(Self::Separable { young, old })
    }

    /// Savings out of wage `w` at gross return `rate`; requires both positive
    /// and finite. The result lies strictly inside `(0, w)` for rules
    /// honouring the marginal-utility contract.
    pub fn savings(&self, wage: F, rate: F) -> Result<F, F> {
        if !(wage > F::zero()) || !wage.is_finite() {
            return Err(Error::Parameter {
                name: "wage",
                requirement: "finite and > 0",
                value: wage,
            });
        }
        if !(rate > F::zero()) || !rate.is_finite() {
            return Err(Error::Parameter {
                name: "rate",
                requirement: "finite and > 0",
                value: rate,
            });
        }
        Ok(self.savings_raw(wage, rate))
    }

    /// Check `c·v'(c)` for monotonicity on a log-spaced grid of `n` points
    /// spanning `[c_lo, c_hi]`. Log rules satisfy it identically.
    pub fn check_gross_substitution(&self, c_lo: F, c_hi: F, n: usize) -> GrossSubstitutionCheck<F> {
        let old = match self {
            Self::Log { .. } => {
                return GrossSubstitutionCheck {
                    satisfied: true,
                    violation: None,
                }
            }
            Self::Separable { old, .. } => old,
        };
        let mut prev: Option<F> = None;
        // Tiny slack so that an exactly-constant c·v'(c) (γ_old = 1) is not
        // tripped up by rounding in powf.
        let slack = F::of(1e-12);
        for i in 0..n.max(2) {
            let frac = F::from_usize(i).unwrap() / F::from_usize(n.max(2) - 1).unwrap();
            let c = c_lo * (c_hi / c_lo).powf(frac);
            let m = c * old(c);
            if let Some(p) = prev {
                if m < p * (F::one() - slack) {
                    return GrossSubstitutionCheck {
                        satisfied: false,
                        violation: Some((c, p - m)),
                    };
                }
            }
            prev = Some(m);
        }
        GrossSubstitutionCheck {
            satisfied: true,
            violation: None,
        }
    }

    /// Unvalidated savings evaluation for the hot loops; arguments must be
    /// positive and finite.
    pub(crate) fn savings_raw(&self, wage: F, rate: F) -> F {
        match self {
            Self::Log { patience } => *patience * wage,
            Self::Separable { young, old } => {
                // First-order condition residual, strictly decreasing in s
                // when the marginal utilities are decreasing:
                //   Φ(s) = R·v'(R·s) − u'(w − s).
                let eps = F::of(1e-16);
                let lo = wage * eps;
                let hi = wage * (F::one() - eps);
                let phi = |s: F| rate * old(rate * s) - young(wage - s);
                // Corner guards for rules that violate the boundary
                // contract (e.g. bounded marginal utility at zero).
                if phi(lo) <= F::zero() {
                    return lo;
                }
                if phi(hi) >= F::zero() {
                    return hi;
                }
                solve::bisect_decreasing(lo, hi, phi)
            }
        }
    }
}

impl<F: Real> fmt::Debug for SavingsRule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Log { patience } => f.debug_struct("Log").field("patience", patience).finish(),
            Self::Separable { .. } => f.debug_struct("Separable").finish_non_exhaustive(),
        }
    }
}
