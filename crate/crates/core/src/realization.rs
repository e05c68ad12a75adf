//! Pairs whose boundary is a prescribed convex curve.
//!
//! A convex polyline with slopes `-k_1 < -k_2 < ...` is the boundary of the
//! categorical pair whose `i`-th item has `q_i` equal to the horizontal run and
//! `p_i` equal to the vertical drop of segment `i`, so that `p_i / q_i = k_i`.
//! On the unit interval, pairing Lebesgue measure with the distribution whose
//! cdf is `F(x) = B^{-1}(1 - x)` reproduces a continuous boundary `B`.

use crate::boundary::exact_boundary;
use crate::distributions::CategoricalPair;
use crate::error::{Error, Result};
use crate::format::csv_table;
use crate::numeric::{bisect_threshold, unit_grid};

/// Slack for the convexity check on tabulated cdfs.
pub const CDF_CONVEXITY_TOL: f64 = 1e-9;

/// Number of samples used to detect flat stretches of a boundary.
pub const FLATNESS_SAMPLES: usize = 1025;

const SNAP: f64 = 1e-12;

/// A convex cdf on `[0, 1]` tabulated at sorted knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfTable {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl CdfTable {
    /// Validates knots `0 = x_0 < ... < x_m = 1` and values `F(0) = 0`,
    /// `F(1) = 1`, nondecreasing and convex.
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::LengthMismatch {
                p: knots.len(),
                q: values.len(),
            });
        }
        if knots.len() < 2 {
            return Err(Error::DegenerateGrid(
                "a cdf table needs at least two knots",
            ));
        }
        let last = knots.len() - 1;
        if knots[0].abs() > SNAP || (knots[last] - 1.0).abs() > SNAP {
            return Err(Error::NonMonotoneInput(if knots[0].abs() > SNAP {
                0
            } else {
                last
            }));
        }
        if values[0].abs() > SNAP || (values[last] - 1.0).abs() > SNAP {
            return Err(Error::NonMonotoneInput(if values[0].abs() > SNAP {
                0
            } else {
                last
            }));
        }
        for i in 1..knots.len() {
            if knots[i].is_nan()
                || values[i].is_nan()
                || knots[i] <= knots[i - 1]
                || values[i] < values[i - 1]
            {
                return Err(Error::NonMonotoneInput(i));
            }
        }
        for i in 1..last {
            let w = (knots[i] - knots[i - 1]) / (knots[i + 1] - knots[i - 1]);
            let chord = values[i - 1] + w * (values[i + 1] - values[i - 1]);
            if values[i] > chord + CDF_CONVEXITY_TOL {
                return Err(Error::NonConvexInput(i));
            }
        }
        let mut knots = knots;
        let mut values = values;
        knots[0] = 0.0;
        knots[last] = 1.0;
        values[0] = 0.0;
        values[last] = 1.0;
        Ok(Self { knots, values })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `F(x)` by linear interpolation between knots.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::DomainError {
                value: x,
                domain: "[0, 1]",
            });
        }
        let k = self.knots.partition_point(|&t| t < x);
        if k == 0 {
            return Ok(self.values[0]);
        }
        let (x0, x1) = (self.knots[k - 1], self.knots[k]);
        let (f0, f1) = (self.values[k - 1], self.values[k]);
        Ok(f0 + (x - x0) / (x1 - x0) * (f1 - f0))
    }

    /// `x,F` rows with a header line.
    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<f64>> = self
            .knots
            .iter()
            .zip(&self.values)
            .map(|(&x, &f)| vec![x, f])
            .collect();
        csv_table(&["x", "F"], &rows)
    }
}

/// Pair whose boundary is the polyline `(0, 1), vertices..., (1, 0)`.
///
/// A leading `(0, 1)` is accepted and ignored. A first vertex at `alpha = 0`
/// describes a vertical first segment. A terminal item `(p, q) = (beta_n, 1 - alpha_n)`
/// is appended unless the last vertex is `(1, 0)`.
pub fn realize_categorical(vertices: &[(f64, f64)]) -> Result<CategoricalPair> {
    let mut pts: Vec<(f64, f64)> = vertices.to_vec();
    if pts.first() == Some(&(0.0, 1.0)) {
        pts.remove(0);
    }
    if pts.is_empty() {
        return Err(Error::Empty);
    }
    for (i, &(a, b)) in pts.iter().enumerate() {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
            return Err(Error::NonMonotoneInput(i));
        }
    }
    let (a_last, b_last) = pts[pts.len() - 1];
    let closes = (a_last - 1.0).abs() <= SNAP && b_last.abs() <= SNAP;
    if (a_last - 1.0).abs() <= SNAP && !closes {
        return Err(Error::NonConvexInput(pts.len() - 1));
    }

    let mut p = Vec::with_capacity(pts.len() + 1);
    let mut q = Vec::with_capacity(pts.len() + 1);
    let mut prev = (0.0, 1.0);
    let last = pts.len() - 1;
    for (i, &cur) in pts.iter().enumerate() {
        let cur = if i == last && closes { (1.0, 0.0) } else { cur };
        let run = cur.0 - prev.0;
        let drop = prev.1 - cur.1;
        let first_vertical = i == 0 && run == 0.0;
        if !(run > 0.0 || first_vertical) || drop < 0.0 || (drop == 0.0 && prev.1 > 0.0) {
            return Err(Error::NonMonotoneInput(i));
        }
        q.push(run);
        p.push(drop);
        prev = cur;
    }
    if !closes {
        q.push(1.0 - prev.0);
        p.push(prev.1);
    }

    // Strictly decreasing ratios; the first may be infinite.
    for i in 1..q.len() {
        let ratio = |j: usize| {
            if q[j] == 0.0 {
                f64::INFINITY
            } else {
                p[j] / q[j]
            }
        };
        let (k0, k1) = (ratio(i - 1), ratio(i));
        let strictly_less = if k0.is_infinite() {
            k1.is_finite()
        } else {
            k1 < k0 - 1e-12 * k0.max(1.0)
        };
        if !strictly_less {
            return Err(Error::NonConvexInput(i.min(pts.len() - 1)));
        }
    }
    let sp: f64 = p.iter().sum();
    let sq: f64 = q.iter().sum();
    let p: Vec<f64> = p.iter().map(|v| v / sp).collect();
    let q: Vec<f64> = q.iter().map(|v| v / sq).collect();
    CategoricalPair::new(p, q, None)
}

/// Tabulates `F(x) = inf { alpha : B(alpha) <= 1 - x }` at `knots` equispaced points.
pub fn realize_unit_interval<B: Fn(f64) -> f64>(boundary: B, knots: usize) -> Result<CdfTable> {
    if knots < 2 {
        return Err(Error::DegenerateGrid("at least two knots are required"));
    }
    let b0 = boundary(0.0);
    if b0.is_nan() || b0 > 1.0 + SNAP {
        return Err(Error::NonInvertibleBoundary("B(0) exceeds 1"));
    }
    if boundary(1.0).abs() > SNAP {
        return Err(Error::NonInvertibleBoundary("B(1) is not 0"));
    }
    let samples: Vec<(f64, f64)> = unit_grid(FLATNESS_SAMPLES)
        .map(|a| (a, boundary(a)))
        .collect();
    for w in samples.windows(2) {
        let ((_, b0), (a1, b1)) = (w[0], w[1]);
        if b1.is_nan() || b1 > b0 {
            return Err(Error::NonInvertibleBoundary("B is not nonincreasing"));
        }
        if b1 == b0 && b0 > 0.0 {
            return Err(Error::NonInvertibleBoundary(
                "B is flat at a positive level",
            ));
        }
        if b1 <= 0.0 && a1 < 1.0 {
            return Err(Error::NonInvertibleBoundary("B reaches 0 before alpha = 1"));
        }
    }
    let xs: Vec<f64> = unit_grid(knots).collect();
    let mut values: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let level = 1.0 - x;
            if b0 <= level {
                0.0
            } else {
                bisect_threshold(0.0, 1.0, |a| boundary(a) <= level)
            }
        })
        .collect();
    let last = values.len() - 1;
    values[last] = 1.0;
    CdfTable::new(xs, values)
}

/// Largest deviation between the pair's boundary and `target` over `samples`
/// equispaced points of `[0, 1]`.
pub fn verify_realization<B: Fn(f64) -> f64>(
    pair: &CategoricalPair,
    target: B,
    samples: usize,
) -> f64 {
    let b = exact_boundary(pair);
    unit_grid(samples.max(2))
        .map(|a| (b.interpolate(a) - target(a)).abs())
        .fold(0.0, f64::max)
}
