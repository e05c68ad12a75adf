//! Upper bounds on the Neyman-Pearson boundary from the Chernoff coefficient
//! `rho_q`, and the sample-size queries built on them.
//!
//! For `q` in `(0, 1)` every line `(2-s) a + s b = s^q (2-s)^(1-q) rho` with
//! `s` in `(0, 2)` passes on or above the boundary. Their envelope is the curve
//! `b = C a^((q-1)/q)` with `C = (q^q (1-q)^(1-q) rho)^(1/q)`. Replacing the
//! envelope near the ends by its tangents through `(0, 1)` and `(1, 0)` gives
//! the smallest convex curve below both the envelope and the line of ignorance.

use crate::boundary::PiecewiseLinearBoundary;
use crate::curve::{BoundCurve, Line, Orientation};
use crate::error::{Error, Result};
use crate::hull::lower_hull;
use crate::lower_bounds::test_affinity;
use crate::numeric::unit_grid;

/// Default number of `alpha` samples used by [`convex_refine`].
pub const DEFAULT_HULL_GRID: usize = 4097;

/// Largest sample count the achievability search will consider.
pub const MAX_SAMPLE_SIZE: u64 = 1 << 62;

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::ParamOutOfRange {
            name: "q",
            value: q,
        });
    }
    Ok(())
}

pub(crate) fn validate_chernoff(q: f64, rho: f64, n: u32) -> Result<()> {
    check_q(q)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::ParamOutOfRange {
            name: "rho",
            value: rho,
        });
    }
    if n == 0 {
        return Err(Error::ParamOutOfRange {
            name: "n",
            value: 0.0,
        });
    }
    Ok(())
}

fn rho_pow(rho: f64, n: u64) -> f64 {
    rho.powf(n as f64)
}

/// Tangent line `(2-s) a + s b = s^q (2-s)^(1-q) rho`, upper orientation.
pub fn chernoff_tangent_line(s: f64, q: f64, rho: f64) -> Result<Line> {
    if !(s > 0.0 && s < 2.0) {
        return Err(Error::ParamOutOfRange {
            name: "s",
            value: s,
        });
    }
    validate_chernoff(q, rho, 1)?;
    let c = s.powf(q) * (2.0 - s).powf(1.0 - q) * rho;
    Line::new(2.0 - s, s, c, Orientation::Upper)
}

/// Point where [`chernoff_tangent_line`] touches [`chernoff_envelope`].
pub fn chernoff_tangent_point(s: f64, q: f64, rho: f64) -> Result<(f64, f64)> {
    chernoff_tangent_line(s, q, rho)?;
    let alpha = s.powf(q) * (2.0 - s).powf(-q) * rho * (1.0 - q);
    let beta = s.powf(q - 1.0) * (2.0 - s).powf(1.0 - q) * rho * q;
    Ok((alpha, beta))
}

fn envelope_constant(q: f64, rho_n: f64) -> f64 {
    (q.powf(q) * (1.0 - q).powf(1.0 - q) * rho_n).powf(1.0 / q)
}

pub(crate) fn envelope_unchecked(q: f64, rho: f64, n: u32, alpha: f64) -> f64 {
    if alpha == 0.0 {
        return f64::INFINITY;
    }
    envelope_constant(q, rho_pow(rho, n.into())) * alpha.powf((q - 1.0) / q)
}

/// Envelope `(q^q (1-q)^(1-q) rho^n)^(1/q) alpha^((q-1)/q)` for `alpha` in `(0, 1]`.
pub fn chernoff_envelope(q: f64, rho: f64, n: u32, alpha: f64) -> Result<f64> {
    validate_chernoff(q, rho, n)?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::DomainError {
            value: alpha,
            domain: "(0, 1]",
        });
    }
    Ok(envelope_unchecked(q, rho, n, alpha))
}

fn refined_at(q: f64, rho_n: f64, alpha: f64) -> f64 {
    if rho_n <= 0.0 {
        return if alpha == 0.0 { 1.0 } else { 0.0 };
    }
    // Tangent through (0, 1) touches at alpha1 with beta = q; tangent through
    // (1, 0) touches at alpha2 = 1 - q.
    let alpha1 = (1.0 - q) * rho_n.powf(1.0 / (1.0 - q));
    let alpha2 = 1.0 - q;
    if alpha <= alpha1 {
        1.0 - alpha * rho_n.powf(-1.0 / (1.0 - q))
    } else if alpha >= alpha2 {
        rho_n.powf(1.0 / q) * (1.0 - alpha)
    } else {
        envelope_constant(q, rho_n) * alpha.powf((q - 1.0) / q)
    }
}

pub(crate) fn refined_unchecked(q: f64, rho: f64, n: u32, alpha: f64) -> f64 {
    refined_at(q, rho_pow(rho, n.into()), alpha)
}

/// Convex refinement of the envelope on `[0, 1]`: the tangent from `(0, 1)`,
/// the envelope between the tangency points, and the tangent to `(1, 0)`.
pub fn refined_chernoff(q: f64, rho: f64, n: u32, alpha: f64) -> Result<f64> {
    validate_chernoff(q, rho, n)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::DomainError {
            value: alpha,
            domain: "[0, 1]",
        });
    }
    Ok(refined_unchecked(q, rho, n, alpha))
}

/// Lower convex hull of `min(g, 1 - alpha)` sampled on `grid` points, with
/// `(0, 1)` and `(1, 0)` added.
pub(crate) fn hull_of_fn<F: Fn(f64) -> f64>(g: F, grid: usize) -> Result<PiecewiseLinearBoundary> {
    if grid < 2 {
        return Err(Error::DegenerateGrid(
            "at least two grid points are required",
        ));
    }
    let mut points = Vec::with_capacity(grid + 2);
    points.push((0.0, 1.0));
    for a in unit_grid(grid) {
        let v = g(a);
        let b = if v.is_nan() { 1.0 - a } else { v.min(1.0 - a) };
        points.push((a, b.max(0.0)));
    }
    points.push((1.0, 0.0));
    let mut hull = lower_hull(&points);
    let last = hull.len() - 1;
    hull[last] = (1.0, 0.0);
    Ok(PiecewiseLinearBoundary::from_trusted(hull))
}

/// Lower convex envelope of `min(curve, ignorance line)` on a uniform grid.
pub fn convex_refine(curve: &BoundCurve, grid: usize) -> Result<PiecewiseLinearBoundary> {
    hull_of_fn(|a| curve.eval(a).expect("grid points lie in [0, 1]"), grid)
}

fn check_target(alpha: f64, beta: f64) -> Result<()> {
    for v in [alpha, beta] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::DomainError {
                value: v,
                domain: "(0, 1)",
            });
        }
    }
    Ok(())
}

/// Smallest `n` for which the `rho_q^n` lower bound no longer excludes `(alpha, beta)`.
pub fn min_sample_size(q: f64, rho: f64, alpha: f64, beta: f64) -> Result<u64> {
    check_q(q)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::ParamOutOfRange {
            name: "rho",
            value: rho,
        });
    }
    check_target(alpha, beta)?;
    if alpha + beta >= 1.0 {
        return Err(Error::DegenerateTarget(
            "target lies on or above the line of ignorance",
        ));
    }
    if rho == 1.0 {
        return Err(Error::DegenerateTarget(
            "rho = 1 admits no finite sample size",
        ));
    }
    if rho == 0.0 {
        return Ok(1);
    }
    let h = test_affinity(q, alpha, beta);
    let estimate = (h.ln() / rho.ln()).ceil();
    if !estimate.is_finite() || estimate > MAX_SAMPLE_SIZE as f64 {
        return Err(Error::BlowupLimit {
            size: estimate,
            limit: MAX_SAMPLE_SIZE as usize,
        });
    }
    let mut n = (estimate as u64).max(1);
    while n > 1 && rho_pow(rho, n - 1) <= h {
        n -= 1;
    }
    while rho_pow(rho, n) > h {
        n += 1;
    }
    Ok(n)
}

/// Smallest `n` with `refined_chernoff(q, rho, n, alpha) <= beta`, found by
/// doubling and then bisection.
pub fn achievability_sample_size(q: f64, rho: f64, alpha: f64, beta: f64) -> Result<u64> {
    validate_chernoff(q, rho, 1)?;
    check_target(alpha, beta)?;
    let ok = |n: u64| refined_at(q, rho_pow(rho, n), alpha) <= beta;
    if ok(1) {
        return Ok(1);
    }
    if rho >= 1.0 {
        return Err(Error::DegenerateTarget(
            "rho = 1 admits no finite sample size",
        ));
    }
    let mut lo = 1;
    let mut hi = 2;
    while !ok(hi) {
        if hi >= MAX_SAMPLE_SIZE {
            return Err(Error::BlowupLimit {
                size: hi as f64,
                limit: MAX_SAMPLE_SIZE as usize,
            });
        }
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lower_bounds::{named_lower, LowerKind};

    #[test]
    fn tangent_line_examples() {
        let l = chernoff_tangent_line(1.0, 0.5, 0.8).unwrap();
        assert_eq!((l.a, l.b), (1.0, 1.0));
        assert!((l.c - 0.8).abs() < 1e-15);
        for q in [0.25, 0.5, 0.75] {
            let line = chernoff_tangent_line(2.0 * q, q, 0.8).unwrap();
            let sym = line.c / (line.a + line.b);
            let want = 0.8 * q.powf(q) * (1.0 - q).powf(1.0 - q);
            assert!((sym - want).abs() < 1e-15);
        }
    }

    #[test]
    fn tangent_point_for_slope_of_first_tangent() {
        // Slope -(2-s)/s = -1.5625 gives s = 32/41.
        let s = 32.0 / 41.0;
        let (a, b) = chernoff_tangent_point(s, 0.5, 0.8).unwrap();
        assert!((a - 0.32).abs() < 1e-12 && (b - 0.5).abs() < 1e-12);
        let line = chernoff_tangent_line(s, 0.5, 0.8).unwrap();
        assert!((-line.a / line.b + 1.5625).abs() < 1e-12);
        assert!(line.residual(a, b).abs() < 1e-12);
    }

    #[test]
    fn tangency_residuals() {
        for q in [0.2, 0.5, 0.8] {
            for k in 1..40 {
                let s = k as f64 / 20.0;
                let (a, b) = chernoff_tangent_point(s, q, 0.7).unwrap();
                let line = chernoff_tangent_line(s, q, 0.7).unwrap();
                assert!(line.residual(a, b).abs() < 1e-10);
                let env = envelope_unchecked(q, 0.7, 1, a);
                assert!((env - b).abs() < 1e-10 * (1.0 + b));
            }
        }
    }

    #[test]
    fn envelope_examples() {
        assert!((chernoff_envelope(0.5, 0.8, 1, 0.4).unwrap() - 0.4).abs() < 1e-15);
        assert!((chernoff_envelope(0.5, 0.8, 1, 0.32).unwrap() - 0.5).abs() < 1e-15);
        assert!((chernoff_envelope(0.5, 1.0, 1, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!(chernoff_envelope(0.5, 0.8, 1, 0.0).is_err());
        assert!(chernoff_envelope(0.0, 0.8, 1, 0.5).is_err());
    }

    #[test]
    fn refined_examples() {
        let f = |a| refined_chernoff(0.5, 0.8, 1, a).unwrap();
        assert!((f(0.1) - 0.84375).abs() < 1e-12);
        assert!((f(0.4) - 0.4).abs() < 1e-12);
        assert!((f(0.9) - 0.064).abs() < 1e-12);
        assert!((f(0.32) - 0.5).abs() < 1e-12);
        assert!((f(0.0) - 1.0).abs() < 1e-15);
        assert!(f(1.0).abs() < 1e-15);
    }

    #[test]
    fn refined_is_continuous_at_tangency_points() {
        for q in [0.2, 0.5, 0.8] {
            for rho in [0.3, 0.8, 0.99] {
                let a1 = (1.0 - q) * f64::powf(rho, 1.0 / (1.0 - q));
                let a2 = 1.0 - q;
                let env = |a: f64| envelope_constant(q, rho) * a.powf((q - 1.0) / q);
                let first = 1.0 - a1 * rho.powf(-1.0 / (1.0 - q));
                let last = rho.powf(1.0 / q) * (1.0 - a2);
                assert!((first - env(a1)).abs() < 1e-12, "q={q} rho={rho}");
                assert!((last - env(a2)).abs() < 1e-12, "q={q} rho={rho}");
            }
        }
    }

    #[test]
    fn hull_matches_closed_form() {
        let env = BoundCurve::chernoff_envelope(0.5, 0.8, 1).unwrap();
        let hull = convex_refine(&env, DEFAULT_HULL_GRID).unwrap();
        for k in 0..=100 {
            let a = k as f64 / 100.0;
            let closed = refined_chernoff(0.5, 0.8, 1, a).unwrap();
            assert!((hull.eval(a).unwrap() - closed).abs() < 2e-4, "a={a}");
        }
    }

    #[test]
    fn hull_trivial_inputs() {
        let flat = hull_of_fn(|_| 1.0, 101).unwrap();
        assert_eq!(flat, PiecewiseLinearBoundary::ignorance());
        let ign = BoundCurve::ignorance(crate::curve::Side::Upper);
        assert_eq!(
            convex_refine(&ign, 33).unwrap(),
            PiecewiseLinearBoundary::ignorance()
        );
        assert!(hull_of_fn(|_| 1.0, 1).is_err());
    }

    #[test]
    fn sample_size_example() {
        let n = min_sample_size(0.5, 0.99, 0.05, 0.05).unwrap();
        assert_eq!(n, 83);
        assert!(named_lower(LowerKind::Hellinger, 0.99, 82, 0.05).unwrap() > 0.05);
        assert!(named_lower(LowerKind::Hellinger, 0.99, 83, 0.05).unwrap() <= 0.05);
        assert_eq!(min_sample_size(0.5, 1e-300, 0.2, 0.2).unwrap(), 1);
        assert_eq!(min_sample_size(0.5, 0.0, 0.2, 0.2).unwrap(), 1);
        assert!(matches!(
            min_sample_size(0.5, 1.0, 0.2, 0.2),
            Err(Error::DegenerateTarget(_))
        ));
        assert!(matches!(
            min_sample_size(0.5, 0.9, 0.6, 0.6),
            Err(Error::DegenerateTarget(_))
        ));
    }

    #[test]
    fn sample_size_brackets() {
        let n = min_sample_size(0.5, 0.9, 0.25, 0.25).unwrap() as u32;
        let lb = |m| named_lower(LowerKind::Hellinger, 0.9, m, 0.25).unwrap();
        assert!(lb(n) <= 0.25);
        if n > 1 {
            assert!(lb(n - 1) > 0.25);
        }
    }

    #[test]
    fn achievability_brackets() {
        let n = achievability_sample_size(0.5, 0.99, 0.05, 0.05).unwrap();
        let ub = |m: u32| refined_chernoff(0.5, 0.99, m, 0.05).unwrap();
        assert!(ub(n as u32) <= 0.05);
        assert!(ub(n as u32 - 1) > 0.05);
        assert!(n >= min_sample_size(0.5, 0.99, 0.05, 0.05).unwrap());
        assert_eq!(achievability_sample_size(0.5, 1.0, 0.3, 0.8).unwrap(), 1);
        assert!(achievability_sample_size(0.5, 1.0, 0.3, 0.3).is_err());
    }
}
