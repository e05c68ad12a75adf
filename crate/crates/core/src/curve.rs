//! Lines in the `(alpha, beta)` plane and bound curves evaluated over `[0, 1]`.

use serde::Serialize;

use crate::boundary::PiecewiseLinearBoundary;
use crate::divergences::FGenerator;
use crate::error::{Error, Result};
use crate::lower_bounds::{
    implicit_lower, implicit_reversed_lower, named_lower_unchecked, LowerKind,
};
use crate::numeric::unit_grid;
use crate::upper_bounds::{envelope_unchecked, refined_unchecked, validate_chernoff};

/// Which side of a line holds the feasible points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Feasible side is `a alpha + b beta >= c`.
    Lower,
    /// Feasible side is `a alpha + b beta <= c`.
    Upper,
}

/// The line `a alpha + b beta = c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Line {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub orientation: Orientation,
}

impl Line {
    pub fn new(a: f64, b: f64, c: f64, orientation: Orientation) -> Result<Self> {
        if a == 0.0 && b == 0.0 {
            return Err(Error::ParamOutOfRange {
                name: "line normal",
                value: 0.0,
            });
        }
        Ok(Self {
            a,
            b,
            c,
            orientation,
        })
    }

    /// `beta` on the line at `alpha`; `None` for vertical lines.
    pub fn beta_at(&self, alpha: f64) -> Option<f64> {
        (self.b != 0.0).then(|| (self.c - self.a * alpha) / self.b)
    }

    /// `a alpha + b beta - c`.
    pub fn residual(&self, alpha: f64, beta: f64) -> f64 {
        self.a * alpha + self.b * beta - self.c
    }

    /// Whether `(alpha, beta)` lies on the feasible side, with absolute slack `tol`.
    pub fn admits(&self, alpha: f64, beta: f64, tol: f64) -> bool {
        let r = self.residual(alpha, beta);
        match self.orientation {
            Orientation::Lower => r >= -tol,
            Orientation::Upper => r <= tol,
        }
    }
}

/// Whether a curve bounds the boundary from below or above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// The formula behind a [`BoundCurve`].
#[derive(Debug, Clone, PartialEq)]
pub enum CurveShape {
    /// Closed-form or dedicated lower bound.
    Named { kind: LowerKind, value: f64 },
    /// Implicit lower bound from `D_f(P||Q)`.
    Generic {
        generator: FGenerator,
        divergence: f64,
    },
    /// Implicit lower bound from `D_f(Q||P)`.
    Reversed {
        generator: FGenerator,
        divergence: f64,
    },
    /// Envelope of the Chernoff tangent lines.
    ChernoffEnvelope { q: f64, rho: f64 },
    /// Envelope with its ends replaced by tangents through `(0, 1)` and `(1, 0)`.
    RefinedChernoff { q: f64, rho: f64 },
    /// The line of ignorance.
    Ignorance,
    /// Linear interpolation of a boundary polyline.
    Polyline(PiecewiseLinearBoundary),
}

/// A bound `beta(alpha)` on `[0, 1]` with tensorization count `samples`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    side: Side,
    shape: CurveShape,
    samples: u32,
}

fn check_divergence(d: f64) -> Result<()> {
    if d.is_nan() || d < 0.0 {
        return Err(Error::NegativeDivergence(d));
    }
    Ok(())
}

impl BoundCurve {
    pub fn named(kind: LowerKind, value: f64, samples: u32) -> Result<Self> {
        kind.validate(value, samples)?;
        Ok(Self {
            side: Side::Lower,
            shape: CurveShape::Named { kind, value },
            samples,
        })
    }

    pub fn generic(generator: FGenerator, divergence: f64) -> Result<Self> {
        check_divergence(divergence)?;
        Ok(Self {
            side: Side::Lower,
            shape: CurveShape::Generic {
                generator,
                divergence,
            },
            samples: 1,
        })
    }

    pub fn reversed(generator: FGenerator, divergence: f64) -> Result<Self> {
        check_divergence(divergence)?;
        Ok(Self {
            side: Side::Lower,
            shape: CurveShape::Reversed {
                generator,
                divergence,
            },
            samples: 1,
        })
    }

    pub fn chernoff_envelope(q: f64, rho: f64, samples: u32) -> Result<Self> {
        validate_chernoff(q, rho, samples)?;
        Ok(Self {
            side: Side::Upper,
            shape: CurveShape::ChernoffEnvelope { q, rho },
            samples,
        })
    }

    pub fn refined_chernoff(q: f64, rho: f64, samples: u32) -> Result<Self> {
        validate_chernoff(q, rho, samples)?;
        Ok(Self {
            side: Side::Upper,
            shape: CurveShape::RefinedChernoff { q, rho },
            samples,
        })
    }

    pub fn ignorance(side: Side) -> Self {
        Self {
            side,
            shape: CurveShape::Ignorance,
            samples: 1,
        }
    }

    pub fn polyline(side: Side, boundary: PiecewiseLinearBoundary) -> Self {
        Self {
            side,
            shape: CurveShape::Polyline(boundary),
            samples: 1,
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn shape(&self) -> &CurveShape {
        &self.shape
    }

    pub fn samples(&self) -> u32 {
        self.samples
    }

    /// `beta(alpha)` for `alpha` in `[0, 1]`. Lower curves lie in `[0, 1 - alpha]`;
    /// the raw Chernoff envelope is `+inf` at `alpha = 0`.
    pub fn eval(&self, alpha: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::DomainError {
                value: alpha,
                domain: "[0, 1]",
            });
        }
        let n = self.samples;
        let beta = match &self.shape {
            CurveShape::Named { kind, value } => named_lower_unchecked(*kind, *value, n, alpha),
            CurveShape::Generic {
                generator,
                divergence,
            } => implicit_lower(generator, *divergence, alpha),
            CurveShape::Reversed {
                generator,
                divergence,
            } => implicit_reversed_lower(generator, *divergence, alpha),
            CurveShape::ChernoffEnvelope { q, rho } => envelope_unchecked(*q, *rho, n, alpha),
            CurveShape::RefinedChernoff { q, rho } => refined_unchecked(*q, *rho, n, alpha),
            CurveShape::Ignorance => 1.0 - alpha,
            CurveShape::Polyline(b) => b.interpolate(alpha),
        };
        Ok(match self.side {
            Side::Lower => beta.clamp(0.0, 1.0 - alpha),
            Side::Upper => beta,
        })
    }

    /// `(alpha, beta)` pairs on `grid` equispaced points of `[0, 1]`.
    pub fn sample(&self, grid: usize) -> Result<Vec<(f64, f64)>> {
        if grid < 2 {
            return Err(Error::DegenerateGrid(
                "at least two grid points are required",
            ));
        }
        unit_grid(grid)
            .map(|a| self.eval(a).map(|b| (a, b)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_queries() {
        let l = Line::new(1.0, 1.0, 0.5, Orientation::Lower).unwrap();
        assert_eq!(l.beta_at(0.2), Some(0.3));
        assert!(l.admits(0.3, 0.3, 0.0));
        assert!(!l.admits(0.1, 0.1, 0.0));
        let v = Line::new(1.0, 0.0, 0.5, Orientation::Upper).unwrap();
        assert_eq!(v.beta_at(0.2), None);
        assert!(Line::new(0.0, 0.0, 1.0, Orientation::Lower).is_err());
    }

    #[test]
    fn curves_sample_on_unit_grid() {
        let c = BoundCurve::named(LowerKind::Tvd, 0.5, 1).unwrap();
        let pts = c.sample(5).unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0], (0.0, 0.5));
        assert_eq!(pts[4], (1.0, 0.0));
        assert!(c.sample(1).is_err());
        assert!(c.eval(1.1).is_err());
    }

    #[test]
    fn envelope_is_infinite_at_zero() {
        let c = BoundCurve::chernoff_envelope(0.5, 0.8, 1).unwrap();
        assert!(c.eval(0.0).unwrap().is_infinite());
        let r = BoundCurve::refined_chernoff(0.5, 0.8, 1).unwrap();
        assert!((r.eval(0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn validation_is_forwarded() {
        assert!(BoundCurve::named(LowerKind::Kl, 0.3, 2).is_err());
        assert!(BoundCurve::generic(FGenerator::Kl, -1.0).is_err());
        assert!(BoundCurve::chernoff_envelope(1.5, 0.8, 1).is_err());
    }
}
