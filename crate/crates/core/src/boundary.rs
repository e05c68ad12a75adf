//! The Neyman-Pearson boundary `B(alpha)` of a categorical pair.
//!
//! Coordinates follow the convention `alpha = Q(E)`, `beta = 1 - P(E)` for a
//! test that rejects on `E`. The boundary is the lower edge of the achievable
//! set; the upper edge is its point reflection through `(1/2, 1/2)`.

use serde::{Deserialize, Serialize};

use crate::distributions::{lr_profile, CategoricalPair};
use crate::error::{Error, Result};
use crate::format::csv_table;
use crate::hull::{lower_hull, prune_collinear};

/// Absolute slack used by containment queries.
pub const CONTAINMENT_TOL: f64 = 1e-12;

/// Largest support the subset-enumeration oracle accepts.
pub const MAX_BRUTE_FORCE_SUPPORT: usize = 16;

const SNAP: f64 = 1e-12;

/// Convex, nonincreasing polyline from `(0, B(0))` to `(1, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLinearBoundary {
    vertices: Vec<(f64, f64)>,
}

#[derive(Deserialize)]
struct VertexList {
    vertices: Vec<(f64, f64)>,
}

impl PiecewiseLinearBoundary {
    /// Validates a vertex list. Endpoints within `1e-12` of `alpha = 0` and
    /// `(1, 0)` are snapped; collinear interior vertices are dropped.
    pub fn new(vertices: Vec<(f64, f64)>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::NonMonotoneInput(0));
        }
        let mut v = vertices;
        for (i, &(a, b)) in v.iter().enumerate() {
            let inside = |x: f64| x.is_finite() && (-SNAP..=1.0 + SNAP).contains(&x);
            if !inside(a) || !inside(b) {
                return Err(Error::NonMonotoneInput(i));
            }
        }
        let last = v.len() - 1;
        if v[0].0.abs() > SNAP {
            return Err(Error::NonMonotoneInput(0));
        }
        if (v[last].0 - 1.0).abs() > SNAP || v[last].1.abs() > SNAP {
            return Err(Error::NonMonotoneInput(last));
        }
        v[0].0 = 0.0;
        v[last] = (1.0, 0.0);
        for p in v.iter_mut() {
            p.0 = p.0.clamp(0.0, 1.0);
            p.1 = p.1.clamp(0.0, 1.0);
        }
        for i in 1..v.len() {
            let (a0, b0) = v[i - 1];
            let (a1, b1) = v[i];
            if a1 <= a0 || b1 > b0 || (b1 == b0 && b0 > 0.0) {
                return Err(Error::NonMonotoneInput(i));
            }
        }
        for i in 1..v.len() - 1 {
            let s0 = slope(v[i - 1], v[i]);
            let s1 = slope(v[i], v[i + 1]);
            if s1 < s0 - 1e-12 * (1.0 + s0.abs()) {
                return Err(Error::NonConvexInput(i));
            }
        }
        Ok(Self {
            vertices: prune_collinear(&v),
        })
    }

    /// Builds from vertices already known to satisfy the invariants.
    pub(crate) fn from_trusted(vertices: Vec<(f64, f64)>) -> Self {
        Self {
            vertices: prune_collinear(&vertices),
        }
    }

    /// The line of ignorance `beta = 1 - alpha`.
    pub fn ignorance() -> Self {
        Self {
            vertices: vec![(0.0, 1.0), (1.0, 0.0)],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let list: VertexList = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "vertex JSON",
            input: e.to_string(),
        })?;
        Self::new(list.vertices)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("boundary serializes")
    }

    /// `alpha,beta` rows with a header line.
    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<f64>> = self.vertices.iter().map(|&(a, b)| vec![a, b]).collect();
        csv_table(&["alpha", "beta"], &rows)
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    /// `B(alpha)` by linear interpolation.
    pub fn eval(&self, alpha: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::DomainError {
                value: alpha,
                domain: "[0, 1]",
            });
        }
        Ok(self.interpolate(alpha))
    }

    /// `B(alpha)` for `alpha` already known to be in `[0, 1]`.
    pub(crate) fn interpolate(&self, alpha: f64) -> f64 {
        let v = &self.vertices;
        let k = v.partition_point(|&(a, _)| a < alpha);
        if k == 0 {
            return v[0].1;
        }
        if k == v.len() {
            return v[v.len() - 1].1;
        }
        let (a0, b0) = v[k - 1];
        let (a1, b1) = v[k];
        if alpha == a1 {
            return b1;
        }
        let w = (alpha - a0) / (a1 - a0);
        (b0 + w * (b1 - b0)).max(0.0)
    }

    /// Whether `(alpha, beta)` lies between the boundary and its reflection.
    pub fn contains(&self, alpha: f64, beta: f64) -> bool {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return false;
        }
        let lower = self.interpolate(alpha);
        let upper = 1.0 - self.interpolate(1.0 - alpha);
        lower - CONTAINMENT_TOL <= beta && beta <= upper + CONTAINMENT_TOL
    }
}

fn slope(a: (f64, f64), b: (f64, f64)) -> f64 {
    (b.1 - a.1) / (b.0 - a.0)
}

/// Boundary from the likelihood-ratio profile: cumulative masses of the
/// segments taken in order of decreasing ratio.
pub fn exact_boundary(pair: &CategoricalPair) -> PiecewiseLinearBoundary {
    let profile = lr_profile(pair);
    let mut vertices = Vec::with_capacity(profile.segments.len() + 1);
    let mut alpha = 0.0;
    let mut p_cum = 0.0;
    for seg in &profile.segments {
        if seg.ratio.is_infinite() {
            p_cum += seg.p_mass;
            continue;
        }
        if vertices.is_empty() {
            vertices.push((0.0, (1.0 - p_cum).max(0.0)));
        }
        alpha += seg.q_mass;
        p_cum += seg.p_mass;
        vertices.push((alpha.min(1.0), (1.0 - p_cum).max(0.0)));
    }
    let last = vertices.len() - 1;
    vertices[last] = (1.0, 0.0);
    PiecewiseLinearBoundary::from_trusted(vertices)
}

pub fn eval_boundary(b: &PiecewiseLinearBoundary, alpha: f64) -> Result<f64> {
    b.eval(alpha)
}

pub fn region_contains(b: &PiecewiseLinearBoundary, alpha: f64, beta: f64) -> bool {
    b.contains(alpha, beta)
}

/// Oracle boundary: enumerate every test set `E`, take the lower hull of the
/// points `(Q(E), P(E^c))`.
pub fn brute_force_boundary(pair: &CategoricalPair) -> Result<PiecewiseLinearBoundary> {
    let n = pair.len();
    if n > MAX_BRUTE_FORCE_SUPPORT {
        return Err(Error::BlowupLimit {
            size: n as f64,
            limit: MAX_BRUTE_FORCE_SUPPORT,
        });
    }
    let full = 1usize << n;
    let mut q_in = vec![0.0; full];
    let mut p_out = vec![0.0; full];
    let complement = full - 1;
    for mask in 1..full {
        let bit = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        q_in[mask] = q_in[rest] + pair.q()[bit];
        p_out[mask] = p_out[rest] + pair.p()[bit];
    }
    let points: Vec<(f64, f64)> = (0..full)
        .map(|mask| {
            let alpha = q_in[mask];
            let beta = p_out[complement & !mask];
            let alpha = if (alpha - 1.0).abs() <= SNAP {
                1.0
            } else {
                alpha
            };
            (alpha.clamp(0.0, 1.0), beta.clamp(0.0, 1.0))
        })
        .collect();
    let mut hull = lower_hull(&points);
    let last = hull.len() - 1;
    hull[last] = (1.0, 0.0);
    Ok(PiecewiseLinearBoundary::from_trusted(hull))
}
