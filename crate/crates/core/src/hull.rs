//! Lower convex hull by Andrew's monotone chain, plus collinear pruning.

/// Turns with `|sin| <= COLLINEAR_SIN` count as straight.
pub const COLLINEAR_SIN: f64 = 1e-12;

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn is_left_turn(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> bool {
    let la = (a.0 - o.0).hypot(a.1 - o.1);
    let lb = (b.0 - o.0).hypot(b.1 - o.1);
    cross(o, a, b) > COLLINEAR_SIN * la * lb
}

/// Lower hull of a point cloud, left to right, without collinear interior points.
pub fn lower_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    // Keep the lowest point per abscissa.
    pts.dedup_by(|b, a| a.0 == b.0);

    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 && !is_left_turn(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Drops interior vertices that lie on the segment joining their neighbours.
pub fn prune_collinear(vertices: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(vertices.len());
    for &v in vertices {
        if let Some(&last) = out.last() {
            if last == v {
                continue;
            }
        }
        while out.len() >= 2 {
            let (o, a) = (out[out.len() - 2], out[out.len() - 1]);
            let la = (a.0 - o.0).hypot(a.1 - o.1);
            let lb = (v.0 - o.0).hypot(v.1 - o.1);
            if cross(o, a, v).abs() <= COLLINEAR_SIN * la * lb {
                out.pop();
            } else {
                break;
            }
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_square_corners_and_interior() {
        let pts = [(0.0, 1.0), (1.0, 0.0), (0.5, 0.5), (0.5, 0.9), (0.2, 0.3)];
        assert_eq!(lower_hull(&pts), vec![(0.0, 1.0), (0.2, 0.3), (1.0, 0.0)]);
    }

    #[test]
    fn hull_drops_collinear_points() {
        let pts = [(0.0, 1.0), (0.25, 0.75), (0.5, 0.5), (1.0, 0.0)];
        assert_eq!(lower_hull(&pts), vec![(0.0, 1.0), (1.0, 0.0)]);
    }

    #[test]
    fn hull_keeps_lowest_duplicate_abscissa() {
        let pts = [(0.0, 1.0), (0.0, 0.4), (1.0, 0.0)];
        assert_eq!(lower_hull(&pts), vec![(0.0, 0.4), (1.0, 0.0)]);
    }

    #[test]
    fn prune_removes_duplicates_and_straight_runs() {
        let v = [(0.0, 1.0), (0.0, 1.0), (0.1, 0.9), (0.2, 0.8), (1.0, 0.0)];
        assert_eq!(prune_collinear(&v), vec![(0.0, 1.0), (1.0, 0.0)]);
        let v = [(0.0, 1.0), (0.1, 0.4), (0.4, 0.1), (1.0, 0.0)];
        assert_eq!(prune_collinear(&v), v.to_vec());
    }
}
