//! Production technologies: output per effective worker, marginal products,
//! competitive factor prices, and marginal-product inversion.
//!
//! Two families are supported:
//!
//! * **Cobb–Douglas with depreciation** — `f(k) = A·k^α + (1−δ)·k`, where the
//!   undepreciated capital stock is folded into gross output so that `f'`
//!   is the full gross return on capital.
//! * **Cobb–Douglas plus a log curvature term** — full depreciation and
//!   `f(k) = A·k^α + θ·k·ln(1+1/k)`. The extra term leaves returns almost
//!   unchanged for small `k` but lets the wage keep a θ/(1+k)-shaped boost
//!   for large `k`, which is what makes dividend-supporting steady states
//!   with low returns possible.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solve;

/// A constant-returns production technology in per-effective-worker form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProductionTechnology<F> {
    /// `f(k) = A·k^α + (1−δ)·k`.
    CobbDouglas {
        productivity: F,
        capital_share: F,
        depreciation: F,
    },
    /// `f(k) = A·k^α + θ·k·ln(1+1/k)`, full depreciation.
    CdPlusLog {
        productivity: F,
        capital_share: F,
        theta: F,
    },
}

impl<F: Real> ProductionTechnology<F> {
    /// Cobb–Douglas technology; requires `A > 0`, `0 < α < 1`, `0 ≤ δ ≤ 1`.
    pub fn cobb_douglas(productivity: F, capital_share: F, depreciation: F) -> Result<Self, F> {
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
        if !(depreciation >= F::zero() && depreciation <= F::one()) {
            return Err(Error::Parameter {
                name: "depreciation",
                requirement: "between 0 and 1",
                value: depreciation,
            });
        }
        Ok(Self::CobbDouglas {
            productivity,
            capital_share,
            depreciation,
        })
    }

    /// Cobb–Douglas plus log curvature; requires `A > 0`, `0 < α < 1`, `θ ≥ 0`.
    pub fn cd_plus_log(productivity: F, capital_share: F, theta: F) -> Result<Self, F> {
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
        if !(theta >= F::zero()) || !theta.is_finite() {
            return Err(Error::Parameter {
                name: "theta",
                requirement: "finite and >= 0",
                value: theta,
            });
        }
        Ok(Self::CdPlusLog {
            productivity,
            capital_share,
            theta,
        })
    }

    /// Productivity scale `A`.
    pub fn productivity(&self) -> F {
        match *self {
            Self::CobbDouglas { productivity, .. } | Self::CdPlusLog { productivity, .. } => {
                productivity
            }
        }
    }

    /// Capital share `α`.
    pub fn capital_share(&self) -> F {
        match *self {
            Self::CobbDouglas { capital_share, .. } | Self::CdPlusLog { capital_share, .. } => {
                capital_share
            }
        }
    }

    /// Output per effective worker, `f(k)`; requires `k > 0`.
    pub fn output(&self, k: F) -> Result<F, F> {
        self.check_capital(k)?;
        Ok(self.output_raw(k))
    }

    /// Gross marginal product of capital, `f'(k)`; requires `k > 0`.
    pub fn marginal_product(&self, k: F) -> Result<F, F> {
        self.check_capital(k)?;
        Ok(self.marginal_product_raw(k))
    }

    /// Competitive wage, `w(k) = f(k) − k·f'(k)`; requires `k > 0`.
    pub fn wage(&self, k: F) -> Result<F, F> {
        self.check_capital(k)?;
        Ok(self.wage_raw(k))
    }

    /// Limit of the marginal product as `k → ∞`.
    ///
    /// `1 − δ` for Cobb–Douglas (undepreciated capital is always worth
    /// itself), `0` for the log-curvature family (full depreciation).
    pub fn marginal_product_limit(&self) -> F {
        match *self {
            Self::CobbDouglas { depreciation, .. } => F::one() - depreciation,
            Self::CdPlusLog { .. } => F::zero(),
        }
    }

    /// The capital stock `k` with `f'(k) = rate`.
    ///
    /// Marginal products are strictly decreasing from `+∞` down to
    /// [`marginal_product_limit`](Self::marginal_product_limit), so the
    /// inverse exists exactly for rates strictly above that limit. The root
    /// is bracketed and bisected in log space; the result satisfies
    /// `|f'(k) − rate| ≤ 1e-12·max(1, rate)`.
    pub fn invert_marginal_product(&self, rate: F) -> Result<F, F> {
        let floor = self.marginal_product_limit();
        if !rate.is_finite() || !(rate > floor) {
            return Err(Error::RateOutOfRange { rate, floor });
        }
        // Smallest usable probe: 1e-300 in f64, the smallest normal number
        // in narrower types (the f64 constant rounds to zero there).
        let lo = F::of(1e-300).max(F::min_positive_value());
        if !(self.marginal_product_raw(lo) > rate) {
            return Err(Error::RateOutOfRange { rate, floor });
        }
        let mut hi = F::one();
        let mut guard = 0usize;
        while self.marginal_product_raw(hi) > rate {
            hi = hi + hi;
            guard += 1;
            if guard > 1200 || !hi.is_finite() {
                return Err(Error::RateOutOfRange { rate, floor });
            }
        }
        Ok(solve::bisect_decreasing_log(lo, hi, |k| {
            self.marginal_product_raw(k) - rate
        }))
    }

    fn check_capital(&self, k: F) -> Result<(), F> {
        if !(k > F::zero()) || !k.is_finite() {
            return Err(Error::Parameter {
                name: "capital",
                requirement: "finite and > 0",
                value: k,
            });
        }
        Ok(())
    }

    pub(crate) fn output_raw(&self, k: F) -> F {
        match *self {
            Self::CobbDouglas {
                productivity,
                capital_share,
                depreciation,
            } => productivity * k.powf(capital_share) + (F::one() - depreciation) * k,
            Self::CdPlusLog {
                productivity,
                capital_share,
                theta,
            } => productivity * k.powf(capital_share) + theta * k * k.recip().ln_1p(),
        }
    }

    pub(crate) fn marginal_product_raw(&self, k: F) -> F {
        match *self {
            Self::CobbDouglas {
                productivity,
                capital_share,
                depreciation,
            } => {
                productivity * capital_share * k.powf(capital_share - F::one())
                    + (F::one() - depreciation)
            }
            Self::CdPlusLog {
                productivity,
                capital_share,
                theta,
            } => {
                // d/dk [k·ln(1+1/k)] = ln(1+1/k) − 1/(1+k); ln_1p keeps the
                // difference accurate when both pieces are ≈ 1/k.
                let log_term = k.recip().ln_1p() - (F::one() + k).recip();
                productivity * capital_share * k.powf(capital_share - F::one()) + theta * log_term
            }
        }
    }

    pub(crate) fn wage_raw(&self, k: F) -> F {
        match *self {
            Self::CobbDouglas {
                productivity,
                capital_share,
                ..
            } => productivity * (F::one() - capital_share) * k.powf(capital_share),
            Self::CdPlusLog {
                productivity,
                capital_share,
                theta,
            } => {
                // f − k·f' telescopes to A(1−α)k^α + θ·k/(1+k).
                productivity * (F::one() - capital_share) * k.powf(capital_share)
                    + theta * k / (F::one() + k)
            }
        }
    }
}
