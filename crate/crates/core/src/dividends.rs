//! Dividend streams for the long-lived asset, stored in detrended
//! (per-effective-worker) units: the level dividend at date `t` is
//! `d_t · G^t`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Continuation of an explicitly listed stream beyond its stored prefix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail<F> {
    /// Dividends are zero after the stored prefix.
    Zero,
    /// Each further dividend is `ratio` times the previous one.
    Geometric { ratio: F },
}

#[derive(Debug, Clone)]
enum Kind<F> {
    Explicit { values: Arc<[F]>, tail: Tail<F> },
    Geometric { level: F, ratio: F },
}

/// A non-negative dividend stream `d_0, d_1, …` in detrended units.
#[derive(Debug, Clone)]
pub struct DividendStream<F> {
    kind: Kind<F>,
    declared_growth: Option<F>,
}

impl<F: Real> DividendStream<F> {
    /// The identically-zero stream (a pure bubble asset).
    pub fn zero() -> Self {
        Self {
            kind: Kind::Explicit {
                values: Arc::from(Vec::new()),
                tail: Tail::Zero,
            },
            declared_growth: Some(F::zero()),
        }
    }

    /// Detrended geometric stream `d_t = level · ratio^t`.
    ///
    /// `growth` is the economy's growth factor `G`; the level stream is then
    /// exactly geometric with factor `ratio · G`, which is recorded as the
    /// declared (exact) dividend growth factor.
    pub fn geometric(level: F, ratio: F, growth: F) -> Result<Self, F> {
        if !(level >= F::zero()) || !level.is_finite() {
            return Err(Error::Parameter {
                name: "dividend level",
                requirement: "finite and >= 0",
                value: level,
            });
        }
        if !(ratio >= F::zero()) || !ratio.is_finite() {
            return Err(Error::Parameter {
                name: "dividend ratio",
                requirement: "finite and >= 0",
                value: ratio,
            });
        }
        if !(growth > F::zero()) || !growth.is_finite() {
            return Err(Error::Parameter {
                name: "growth",
                requirement: "finite and > 0",
                value: growth,
            });
        }
        let declared = if level > F::zero() {
            ratio * growth
        } else {
            F::zero()
        };
        Ok(Self {
            kind: Kind::Geometric { level, ratio },
            declared_growth: Some(declared),
        })
    }

    /// Stream from an explicit prefix `d_0 … d_{n−1}` plus a tail rule.
    pub fn explicit(values: Vec<F>, tail: Tail<F>) -> Result<Self, F> {
        for &d in &values {
            if !(d >= F::zero()) || !d.is_finite() {
                return Err(Error::Parameter {
                    name: "dividend",
                    requirement: "finite and >= 0",
                    value: d,
                });
            }
        }
        if let Tail::Geometric { ratio } = tail {
            if !(ratio >= F::zero()) || !ratio.is_finite() {
                return Err(Error::Parameter {
                    name: "tail ratio",
                    requirement: "finite and >= 0",
                    value: ratio,
                });
            }
        }
        Ok(Self {
            kind: Kind::Explicit {
                values: Arc::from(values),
                tail,
            },
            declared_growth: None,
        })
    }

    /// Record an exactly known level-growth factor `G_d` with the stream
    /// (used by the closed-form constructions, whose limits are analytic).
    pub fn with_declared_growth(mut self, growth_factor: F) -> Self {
        self.declared_growth = Some(growth_factor);
        self
    }

    /// The declared level-growth factor, if one is known exactly.
    pub fn declared_growth(&self) -> Option<F> {
        self.declared_growth
    }

    /// Detrended dividend at date `t`.
    pub fn value(&self, t: usize) -> F {
        match &self.kind {
            Kind::Explicit { values, tail } => {
                if t < values.len() {
                    values[t]
                } else {
                    match (*tail, values.last()) {
                        (Tail::Zero, _) | (_, None) => F::zero(),
                        (Tail::Geometric { ratio }, Some(&last)) => {
                            let steps = t - (values.len() - 1);
                            last * geometric_factor(ratio, steps)
                        }
                    }
                }
            }
            Kind::Geometric { level, ratio } => *level * geometric_factor(*ratio, t),
        }
    }

    /// Whether every dividend is exactly zero (pure-bubble asset).
    pub fn is_zero(&self) -> bool {
        match &self.kind {
            Kind::Explicit { values, .. } => values.iter().all(|d| *d == F::zero()),
            Kind::Geometric { level, .. } => *level == F::zero(),
        }
    }

    /// Length of the explicitly stored prefix (0 for parametric streams).
    pub fn explicit_len(&self) -> usize {
        match &self.kind {
            Kind::Explicit { values, .. } => values.len(),
            Kind::Geometric { .. } => 0,
        }
    }

    /// Whether every dividend strictly after date `t` is exactly zero.
    pub fn vanishes_after(&self, t: usize) -> bool {
        match &self.kind {
            Kind::Explicit { values, tail } => {
                let stored_zero = values.iter().skip(t + 1).all(|d| *d == F::zero());
                let tail_zero = match (*tail, values.last()) {
                    (Tail::Zero, _) | (_, None) => true,
                    (Tail::Geometric { ratio }, Some(&last)) => {
                        last == F::zero() || ratio == F::zero()
                    }
                };
                stored_zero && tail_zero
            }
            // Dividends after t ≥ 0 involve ratio^(t+1) with t+1 ≥ 1.
            Kind::Geometric { level, ratio } => *level == F::zero() || *ratio == F::zero(),
        }
    }
}

/// `ratio^steps` without intermediate blow-ups: log-space for the huge
/// exponents that arise when probing far beyond the stored prefix.
fn geometric_factor<F: Real>(ratio: F, steps: usize) -> F {
    if steps == 0 {
        return F::one();
    }
    if ratio == F::zero() {
        return F::zero();
    }
    if steps <= i32::MAX as usize {
        ratio.powi(steps as i32)
    } else {
        (F::from_usize(steps).unwrap() * ratio.ln()).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_stream_is_zero_everywhere() {
        let d = DividendStream::<f64>::zero();
        assert!(d.is_zero());
        assert_eq!(d.value(0), 0.0);
        assert_eq!(d.value(10_000), 0.0);
        assert_eq!(d.declared_growth(), Some(0.0));
    }

    #[test]
    fn geometric_stream_declares_exact_growth() {
        let d = DividendStream::geometric(2.0f64, 0.9, 1.5).unwrap();
        assert_eq!(d.value(0), 2.0);
        assert!((d.value(3) - 2.0 * 0.9f64.powi(3)).abs() < 1e-15);
        assert_eq!(d.declared_growth(), Some(0.9 * 1.5));
        assert!(!d.is_zero());
        // Zero level is recognised as a pure bubble.
        let z = DividendStream::geometric(0.0f64, 0.9, 1.5).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.declared_growth(), Some(0.0));
    }

    #[test]
    fn explicit_prefix_and_tails() {
        let d = DividendStream::explicit(vec![0.0f64, 1.0, 0.5], Tail::Zero).unwrap();
        assert_eq!(d.value(1), 1.0);
        assert_eq!(d.value(2), 0.5);
        assert_eq!(d.value(3), 0.0);
        let g = DividendStream::explicit(vec![0.0f64, 1.0, 0.5], Tail::Geometric { ratio: 0.5 })
            .unwrap();
        assert_eq!(g.value(3), 0.25);
        assert_eq!(g.value(5), 0.0625);
        assert!(g.declared_growth().is_none());
        let tagged = g.with_declared_growth(0.5);
        assert_eq!(tagged.declared_growth(), Some(0.5));
    }

    #[test]
    fn rejects_negative_dividends() {
        assert!(DividendStream::explicit(vec![0.1f64, -0.2], Tail::Zero).is_err());
        assert!(DividendStream::geometric(-1.0f64, 0.5, 1.0).is_err());
        assert!(DividendStream::geometric(1.0f64, -0.5, 1.0).is_err());
    }

    #[test]
    fn far_tail_underflows_to_zero_without_panicking() {
        let d = DividendStream::geometric(1.0f64, 0.5, 1.0).unwrap();
        assert_eq!(d.value(100_000), 0.0);
    }
}
