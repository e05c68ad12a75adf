//! Small numeric helpers shared by the bound and realization modules.

/// Absolute bracket width at which bisections stop.
pub const BISECTION_TOL: f64 = 1e-12;

/// Iteration cap for bisections.
pub const BISECTION_MAX_ITER: usize = 200;

/// Smallest `x` in `[lo, hi]` with `accept(x)`, for a predicate that is false
/// below some threshold and true above it.
///
/// `accept(hi)` is assumed true. Returns `lo` when `accept(lo)` holds, otherwise
/// the upper end of the final bracket, so the returned point is always accepted.
pub fn bisect_threshold<F>(lo: f64, hi: f64, mut accept: F) -> f64
where
    F: FnMut(f64) -> bool,
{
    if accept(lo) {
        return lo;
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if accept(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `n` equispaced points covering `[0, 1]` inclusive.
pub fn unit_grid(n: usize) -> impl Iterator<Item = f64> {
    let denom = (n.max(2) - 1) as f64;
    (0..n).map(move |k| if k + 1 == n { 1.0 } else { k as f64 / denom })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_threshold() {
        let x = bisect_threshold(0.0, 1.0, |x| x >= 0.3);
        assert!((x - 0.3).abs() <= 2.0 * BISECTION_TOL);
        assert!(x >= 0.3);
    }

    #[test]
    fn accepted_lower_end_is_returned() {
        assert_eq!(bisect_threshold(0.0, 1.0, |_| true), 0.0);
    }

    #[test]
    fn grid_endpoints_exact() {
        let g: Vec<f64> = unit_grid(201).collect();
        assert_eq!(g.len(), 201);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[200], 1.0);
        assert_eq!(g[100], 0.5);
    }
}
