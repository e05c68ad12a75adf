//! Bayes error under class priors, its conjugate form, and ROC conversions.

use serde::Serialize;

use crate::boundary::PiecewiseLinearBoundary;
use crate::curve::BoundCurve;
use crate::error::{Error, Result};
use crate::numeric::unit_grid;

/// Costs within this distance of the minimum count as ties.
pub const TIE_TOL: f64 = 1e-12;

/// Slack for accepting mixing targets on the region's edges.
pub const TARGET_TOL: f64 = 1e-12;

/// Class priors `(pi_p, 1 - pi_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PriorPair {
    pi_p: f64,
}

impl PriorPair {
    pub fn new(pi_p: f64) -> Result<Self> {
        if !(pi_p > 0.0 && pi_p < 1.0) {
            return Err(Error::ParamOutOfRange {
                name: "pi_p",
                value: pi_p,
            });
        }
        Ok(Self { pi_p })
    }

    pub fn pi_p(&self) -> f64 {
        self.pi_p
    }

    pub fn pi_q(&self) -> f64 {
        1.0 - self.pi_p
    }

    fn cost(&self, alpha: f64, beta: f64) -> f64 {
        self.pi_p * alpha + self.pi_q() * beta
    }
}

/// Minimum of `pi_p alpha + pi_q beta` over the boundary and the vertex that
/// attains it, preferring the smallest `alpha` among ties.
pub fn bayes_error(b: &PiecewiseLinearBoundary, prior: PriorPair) -> (f64, (f64, f64)) {
    let costs: Vec<f64> = b
        .vertices()
        .iter()
        .map(|&(a, be)| prior.cost(a, be))
        .collect();
    let best = costs.iter().copied().fold(f64::INFINITY, f64::min);
    let k = costs
        .iter()
        .position(|&c| c <= best + TIE_TOL)
        .expect("boundary has vertices");
    (best, b.vertices()[k])
}

/// Bayes-error interval from a lower and an upper curve sampled on `grid` points.
pub fn ber_bounds(
    lower: &BoundCurve,
    upper: &BoundCurve,
    prior: PriorPair,
    grid: usize,
) -> Result<(f64, f64)> {
    if grid < 2 {
        return Err(Error::DegenerateGrid(
            "at least two grid points are required",
        ));
    }
    let min_cost = |curve: &BoundCurve| -> Result<f64> {
        let mut best = f64::INFINITY;
        for a in unit_grid(grid) {
            best = best.min(prior.cost(a, curve.eval(a)?));
        }
        Ok(best)
    };
    Ok((min_cost(lower)?, min_cost(upper)?))
}

/// Value of the conjugate at slope `z` and the Bayes error it encodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Conjugate {
    pub b_star: f64,
    pub pi_p: f64,
    pub ber: f64,
}

/// `B*(z) = sup_alpha (z alpha - B(alpha))`, with `pi_p = z / (z - 1)` and
/// Bayes error `B*(z) / (z - 1)`.
pub fn conjugate(b: &PiecewiseLinearBoundary, z: f64) -> Result<Conjugate> {
    if z >= 0.0 || !z.is_finite() {
        return Err(Error::NonNegativeSlope(z));
    }
    let b_star = b
        .vertices()
        .iter()
        .map(|&(a, be)| z * a - be)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Conjugate {
        b_star,
        pi_p: z / (z - 1.0),
        ber: b_star / (z - 1.0),
    })
}

/// Boundary vertices as ROC points `(fpr, tpr) = (alpha, 1 - beta)`.
pub fn roc_points(b: &PiecewiseLinearBoundary) -> Vec<(f64, f64)> {
    b.vertices().iter().map(|&(a, be)| (a, 1.0 - be)).collect()
}

/// Randomization between the boundary test at `alpha = t` and a coin flip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingPlan {
    pub t: f64,
    /// Weight on the boundary test.
    pub lambda: f64,
    pub boundary_beta: f64,
    pub ignorance_beta: f64,
}

impl MixingPlan {
    /// `(t, lambda B(t) + (1 - lambda)(1 - t))`.
    pub fn reconstruct(&self) -> (f64, f64) {
        (
            self.t,
            self.lambda * self.boundary_beta + (1.0 - self.lambda) * self.ignorance_beta,
        )
    }
}

/// Weight `lambda` with `lambda B(t) + (1 - lambda)(1 - t) = g`.
pub fn roc_mixing_weight(b: &PiecewiseLinearBoundary, t: f64, g: f64) -> Result<MixingPlan> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::DomainError {
            value: t,
            domain: "(0, 1]",
        });
    }
    let bt = b.interpolate(t);
    let ign = 1.0 - t;
    if !(g >= bt - TARGET_TOL && g <= ign + TARGET_TOL) {
        return Err(Error::TargetOutsideRegion { alpha: t, beta: g });
    }
    let gap = ign - bt;
    let lambda = if gap <= 0.0 {
        1.0
    } else {
        ((ign - g) / gap).clamp(0.0, 1.0)
    };
    Ok(MixingPlan {
        t,
        lambda,
        boundary_beta: bt,
        ignorance_beta: ign,
    })
}
