//! Exact rational arithmetic for the reference scenarios.
//!
//! The three bundled scenarios have rational parameters, and several of
//! their derived quantities — the return/growth ratio ρ, the first path
//! step from unit capital, the diagnostic exponents, the dividend growth
//! factors — are exactly rational too. This module evaluates them in
//! `BigRational` so the floating-point pipeline can be cross-checked
//! against values with no rounding error at all.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::closedform::{XSequenceFamily, XSequenceSpec};
use crate::scalar::Real;

/// Exact rational scalar.
pub type Rational = BigRational;

/// Shorthand constructor for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Family tag mirroring [`XSequenceFamily`] without float parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactFamily {
    GeometricUnbounded,
    OnePlusGeometric,
    RhoPlusGeometric,
}

/// Rational parameters of a closed-form scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactScenario {
    pub family: ExactFamily,
    /// Productivity `A`.
    pub productivity: Rational,
    /// Capital share `α`.
    pub capital_share: Rational,
    /// Patience `β`.
    pub patience: Rational,
    /// Growth factor `G`.
    pub growth: Rational,
    /// Family scale `C`.
    pub scale: Rational,
    /// Family ratio `σ`.
    pub ratio: Rational,
}

impl ExactScenario {
    /// Collapsing-capital scenario: `A = 6`, `α = 2/3`, `β = 1/2`, `G = 1`,
    /// `x_t = 5·1.1^t`.
    pub fn collapsing() -> Self {
        Self {
            family: ExactFamily::GeometricUnbounded,
            productivity: ratio(6, 1),
            capital_share: ratio(2, 3),
            patience: ratio(1, 2),
            growth: ratio(1, 1),
            scale: ratio(5, 1),
            ratio: ratio(11, 10),
        }
    }

    /// Bubbly-convergence scenario: `A = 9/4`, `α = 1/3`, `β = 2/3`,
    /// `G = 1`, `x_t = 1 + 0.9^t`.
    pub fn bubbly() -> Self {
        Self {
            family: ExactFamily::OnePlusGeometric,
            productivity: ratio(9, 4),
            capital_share: ratio(1, 3),
            patience: ratio(2, 3),
            growth: ratio(1, 1),
            scale: ratio(1, 1),
            ratio: ratio(9, 10),
        }
    }

    /// Bubbleless-convergence scenario: same economy as [`bubbly`], with
    /// `x_t = ρ + ρ^t` (σ = ρ = 3/4).
    pub fn bubbleless() -> Self {
        Self {
            family: ExactFamily::RhoPlusGeometric,
            ratio: ratio(3, 4),
            ..Self::bubbly()
        }
    }

    /// `ρ = α/(β(1−α))`.
    pub fn rho(&self) -> Rational {
        let one = Rational::one();
        &self.capital_share / (&self.patience * (one - &self.capital_share))
    }

    /// Capital income coefficient `A·α`.
    pub fn capital_income(&self) -> Rational {
        &self.productivity * &self.capital_share
    }

    /// Slope `β·A·(1−α)` of the log-utility capital map `g(k, 0)·G = β·w(k)`.
    pub fn saving_slope(&self) -> Rational {
        let one = Rational::one();
        &self.patience * &self.productivity * (one - &self.capital_share)
    }

    /// The ratio sequence value `x_t`, exactly.
    pub fn value(&self, t: usize) -> Rational {
        let sigma_t = pow_usize(&self.ratio, t);
        let base = match self.family {
            ExactFamily::GeometricUnbounded => Rational::zero(),
            ExactFamily::OnePlusGeometric => Rational::one(),
            ExactFamily::RhoPlusGeometric => self.rho(),
        };
        base + &self.scale * sigma_t
    }

    /// First path step from `k_0 = 1`: `(k_1, p_0)` with
    /// `k_1 = Aα/(G·x_0)` and `p_0 = (Aα/ρ)·(x_0 − ρ)/x_0`.
    pub fn first_step_from_unit_capital(&self) -> (Rational, Rational) {
        let aa = self.capital_income();
        let x0 = self.value(0);
        let rho = self.rho();
        let k1 = &aa / (&self.growth * &x0);
        let p0 = &aa / &rho * (&x0 - &rho) / &x0;
        (k1, p0)
    }

    /// Coefficient `c` in `d_1 = c·k_1^α`: `(Aα/ρ)·(x_0 + ρ/x_1 − 1 − ρ)`.
    pub fn first_dividend_coefficient(&self) -> Rational {
        let aa = self.capital_income();
        let rho = self.rho();
        let x0 = self.value(0);
        let x1 = self.value(1);
        let one = Rational::one();
        &aa / &rho * (&x0 + &rho / &x1 - &one - &rho)
    }

    /// Exponent `(1−2α)/(1−α)` controlling the level-dividend growth of
    /// the unbounded family.
    pub fn dividend_growth_exponent(&self) -> Rational {
        let one = Rational::one();
        let two = ratio(2, 1);
        (&one - &two * &self.capital_share) / (&one - &self.capital_share)
    }

    /// Exact level-dividend growth factor `G_d`, when it is rational:
    /// `G·σ^((1−2α)/(1−α))` for the unbounded family (rational only when
    /// the exponent is an integer), `G·σ` for the bubbly family, and
    /// `G·σ²` (σ = ρ) or `G·σ` (σ < ρ) for the bubbleless family.
    pub fn dividend_growth_factor(&self) -> Option<Rational> {
        match self.family {
            ExactFamily::GeometricUnbounded => {
                let e = self.dividend_growth_exponent();
                if !e.is_integer() {
                    return None;
                }
                let n = e.to_integer().to_i64()?;
                let sigma_pow = if n >= 0 {
                    pow_usize(&self.ratio, n as usize)
                } else {
                    Rational::one() / pow_usize(&self.ratio, (-n) as usize)
                };
                Some(&self.growth * sigma_pow)
            }
            ExactFamily::OnePlusGeometric => Some(&self.growth * &self.ratio),
            ExactFamily::RhoPlusGeometric => {
                if self.ratio == self.rho() {
                    Some(&self.growth * &self.ratio * &self.ratio)
                } else {
                    Some(&self.growth * &self.ratio)
                }
            }
        }
    }

    /// Convert to the floating-point spec (nearest representable values).
    pub fn spec<F: Real>(&self) -> XSequenceSpec<F> {
        let scale = to_real::<F>(&self.scale);
        let sigma = to_real::<F>(&self.ratio);
        let family = match self.family {
            ExactFamily::GeometricUnbounded => XSequenceFamily::GeometricUnbounded {
                scale,
                ratio: sigma,
            },
            ExactFamily::OnePlusGeometric => XSequenceFamily::OnePlusGeometric {
                scale,
                ratio: sigma,
            },
            ExactFamily::RhoPlusGeometric => XSequenceFamily::RhoPlusGeometric {
                scale,
                // Preserve the "σ = ρ" default exactly rather than routing
                // a rounded copy through the constructor.
                ratio: (self.ratio != self.rho()).then_some(sigma),
            },
        };
        XSequenceSpec::new(
            family,
            to_real::<F>(&self.productivity),
            to_real::<F>(&self.capital_share),
            to_real::<F>(&self.patience),
            to_real::<F>(&self.growth),
        )
        .expect("reference scenarios are valid by construction")
    }
}

/// Exact diagnostic exponents from their defining sums:
/// `μ_t = 1 − Σ_{s=1..t} α^s`, `ν_t = (t−1) − Σ_{s=1..t} α^s·(t−s)`.
pub fn exponents_exact(alpha: &Rational, t: usize) -> (Rational, Rational) {
    let mut mu = Rational::one();
    let mut nu = Rational::from_integer(BigInt::from(t as i64 - 1));
    let mut alpha_s = Rational::one();
    for s in 1..=t {
        alpha_s *= alpha;
        mu -= &alpha_s;
        nu -= &alpha_s * Rational::from_integer(BigInt::from((t - s) as i64));
    }
    (mu, nu)
}

/// Nearest `F` image of a rational.
pub fn to_real<F: Real>(q: &Rational) -> F {
    F::of(q.to_f64().expect("rational within f64 range"))
}

fn pow_usize(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// `|q|` as f64, for tolerance comparisons in tests.
pub fn abs_f64(q: &Rational) -> f64 {
    q.abs().to_f64().unwrap_or(f64::INFINITY)
}
