use std::cmp::Ordering;

use super::predicates::orient2d;
use super::Point2;
use crate::error::{PcdError, Result};

/// Convex hull by Andrew's monotone chain.
///
/// Returns the strictly convex vertex cycle in counterclockwise order, starting
/// from the lexicographically smallest `(x, y)` point. Collinear boundary
/// points are dropped.
pub fn convex_hull(points: &[Point2]) -> Result<Vec<Point2>> {
    if points.len() < 3 {
        return Err(PcdError::TooFewPoints { need: 3, got: points.len() });
    }
    let mut sorted: Vec<Point2> = points.to_vec();
    sorted.sort_by(|a, b| a.x().total_cmp(&b.x()).then(a.y().total_cmp(&b.y())));
    sorted.dedup();

    let mut hull: Vec<Point2> = Vec::with_capacity(2 * sorted.len());
    for p in sorted.iter() {
        while hull.len() >= 2 && orient2d(&hull[hull.len() - 2], &hull[hull.len() - 1], p) != Ordering::Greater {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower_len = hull.len() + 1;
    for p in sorted.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && orient2d(&hull[hull.len() - 2], &hull[hull.len() - 1], p) != Ordering::Greater
        {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    if hull.len() < 3 {
        return Err(PcdError::Collinear);
    }
    Ok(hull)
}

/// Shoelace area of a simple polygon (positive when counterclockwise).
pub fn polygon_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let (p, q) = (&poly[i], &poly[(i + 1) % n]);
        s += p.x() * q.y() - q.x() * p.y();
    }
    0.5 * s
}
