use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::predicates::{incircle, orient2d};
use super::{Point2, Triangle2};
#[cfg(test)]
use super::{convex_hull, polygon_area};
use crate::error::{PcdError, Result};

const INF: usize = usize::MAX;

/// Delaunay triangulation of a set of anchor points.
///
/// Cells are counterclockwise index triples into `points`; `neighbors[c][k]`
/// is the cell sharing the edge opposite `cells[c][k]`, if any.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelaunayTriangulation {
    pub points: Vec<Point2>,
    pub cells: Vec<[usize; 3]>,
    #[serde(skip)]
    pub neighbors: Vec<[Option<usize>; 3]>,
}

impl DelaunayTriangulation {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn triangle(&self, cell: usize) -> Triangle2 {
        let [a, b, c] = self.cells[cell];
        Triangle2::new(self.points[a], self.points[b], self.points[c])
            .expect("Delaunay cells are non-degenerate")
    }

    pub fn triangles(&self) -> Vec<Triangle2> {
        (0..self.cells.len()).map(|c| self.triangle(c)).collect()
    }

    /// Smallest index of a cell containing `p` (closed, up to `tol` in
    /// barycentric units), or `None` outside the hull.
    pub fn locate(&self, p: &Point2, tol: f64) -> Option<usize> {
        (0..self.cells.len()).find(|&c| self.triangle(c).contains(p, tol))
    }

    pub fn total_area(&self) -> f64 {
        self.triangles().iter().map(Triangle2::area).sum()
    }

    /// Cells violating the empty-circumcircle property; empty for a valid
    /// triangulation.
    pub fn violations(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for (ci, cell) in self.cells.iter().enumerate() {
            let [a, b, c] = cell.map(|i| self.points[i]);
            for (pi, p) in self.points.iter().enumerate() {
                if cell.contains(&pi) {
                    continue;
                }
                if incircle(&a, &b, &c, p) == Ordering::Greater {
                    bad.push((ci, pi));
                }
            }
        }
        bad
    }

    fn compute_neighbors(cells: &[[usize; 3]]) -> Vec<[Option<usize>; 3]> {
        let mut edge_owner: HashMap<(usize, usize), usize> = HashMap::new();
        for (ci, t) in cells.iter().enumerate() {
            for k in 0..3 {
                edge_owner.insert((t[(k + 1) % 3], t[(k + 2) % 3]), ci);
            }
        }
        cells
            .iter()
            .map(|t| {
                std::array::from_fn(|k| edge_owner.get(&(t[(k + 2) % 3], t[(k + 1) % 3])).copied())
            })
            .collect()
    }
}

/// Does the circumdisk of `tri` (possibly a ghost triangle `(a, b, INF)`)
/// strictly contain `p`?
fn in_circumdisk(points: &[Point2], tri: &[usize; 3], p: &Point2) -> bool {
    if tri[2] == INF {
        let (a, b) = (&points[tri[0]], &points[tri[1]]);
        return match orient2d(a, b, p) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                // on the hull line: inside only within the open segment
                let t = (p.x() - a.x()) * (b.x() - a.x()) + (p.y() - a.y()) * (b.y() - a.y());
                t > 0.0 && t < a.dist2(b)
            }
        };
    }
    let [a, b, c] = tri.map(|i| points[i]);
    // Cocircular points are treated as outside: no flip.
    incircle(&a, &b, &c, p) == Ordering::Greater
}

/// Incremental Bowyer–Watson triangulation with exact predicates.
///
/// The unbounded face is handled with ghost triangles attached to a vertex at
/// infinity, so no super-triangle vertices leak into the result. Points are
/// inserted in input order; duplicates are skipped. For cocircular inputs the
/// earlier triangle is kept (no flip), so the unit square `0,1,2,3` is split
/// along the diagonal joining points 0 and 2.
pub fn delaunay(points: &[Point2]) -> Result<DelaunayTriangulation> {
    if points.len() < 3 {
        return Err(PcdError::TooFewPoints { need: 3, got: points.len() });
    }
    let first = 0;
    let second = points
        .iter()
        .position(|p| p != &points[first])
        .ok_or(PcdError::Collinear)?;
    let third = (0..points.len())
        .find(|&i| orient2d(&points[first], &points[second], &points[i]) != Ordering::Equal)
        .ok_or(PcdError::Collinear)?;

    let (a, b) = match orient2d(&points[first], &points[second], &points[third]) {
        Ordering::Greater => (first, second),
        _ => (second, first),
    };
    let c = third;
    let mut tris: Vec<[usize; 3]> = vec![[a, b, c], [b, a, INF], [c, b, INF], [a, c, INF]];

    for (pi, p) in points.iter().enumerate() {
        if pi == first || pi == second || pi == third {
            continue;
        }
        let (cavity, keep): (Vec<_>, Vec<_>) =
            tris.into_iter().partition(|t| in_circumdisk(points, t, p));
        tris = keep;
        if cavity.is_empty() {
            // duplicate of an existing vertex
            continue;
        }
        let mut directed = HashMap::with_capacity(cavity.len() * 3);
        for t in &cavity {
            for k in 0..3 {
                directed.insert((t[k], t[(k + 1) % 3]), ());
            }
        }
        for t in &cavity {
            for k in 0..3 {
                let (u, v) = (t[k], t[(k + 1) % 3]);
                if directed.contains_key(&(v, u)) {
                    continue;
                }
                let new = if u == INF {
                    [v, pi, INF]
                } else if v == INF {
                    [pi, u, INF]
                } else {
                    [u, v, pi]
                };
                tris.push(new);
            }
        }
    }

    let cells: Vec<[usize; 3]> = tris.into_iter().filter(|t| t[2] != INF).collect();
    let neighbors = DelaunayTriangulation::compute_neighbors(&cells);
    Ok(DelaunayTriangulation {
        points: points.to_vec(),
        cells,
        neighbors,
    })
}

/// Area of the convex hull of a point set (0 for degenerate input).
#[cfg(test)]
pub(crate) fn hull_area(points: &[Point2]) -> f64 {
    convex_hull(points).map(|h| polygon_area(&h)).unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2::predicates::orient2d;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pts(c: &[(f64, f64)]) -> Vec<Point2> {
        c.iter().map(|&(x, y)| Point2::new(x, y).unwrap()).collect()
    }

    fn random_points(n: usize, seed: u64) -> Vec<Point2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Point2::new(rng.random(), rng.random()).unwrap())
            .collect()
    }

    fn check_valid(dt: &DelaunayTriangulation) {
        assert!(dt.violations().is_empty(), "violations: {:?}", dt.violations());
        for cell in &dt.cells {
            let [a, b, c] = cell.map(|i| dt.points[i]);
            assert_eq!(orient2d(&a, &b, &c), Ordering::Greater);
        }
        let hull = hull_area(&dt.points);
        assert!((dt.total_area() - hull).abs() <= 1e-9 * hull);
    }

    #[test]
    fn three_points_single_cell() {
        let dt = delaunay(&pts(&[(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)])).unwrap();
        assert_eq!(dt.len(), 1);
        check_valid(&dt);
    }

    #[test]
    fn unit_square_tie_break() {
        let dt = delaunay(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])).unwrap();
        assert_eq!(dt.len(), 2);
        assert!((dt.total_area() - 1.0).abs() < 1e-15);
        for cell in &dt.cells {
            assert!(cell.contains(&0) && cell.contains(&2), "diagonal must be 0-2: {:?}", dt.cells);
        }
        assert_eq!(dt.neighbors.iter().flatten().flatten().count(), 2);
    }

    #[test]
    fn euler_identity_on_random_points() {
        for seed in 0..20 {
            let p = random_points(10, seed);
            let dt = delaunay(&p).unwrap();
            check_valid(&dt);
            let h = convex_hull(&p).unwrap().len();
            let interior = p.len() - h;
            assert_eq!(dt.len(), 2 * interior + h - 2);
        }
    }

    #[test]
    fn larger_sets_and_grids() {
        let p = random_points(300, 99);
        let dt = delaunay(&p).unwrap();
        check_valid(&dt);
        // integer grid: heavily cocircular
        let mut g = Vec::new();
        for i in 0..7 {
            for j in 0..5 {
                g.push(Point2::new(i as f64, j as f64).unwrap());
            }
        }
        let dt = delaunay(&g).unwrap();
        check_valid(&dt);
        assert_eq!(dt.len(), 2 * 6 * 4);
    }

    #[test]
    fn collinear_prefix_and_duplicates() {
        let p = pts(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (1.5, 1.0), (1.0, 0.0)]);
        let dt = delaunay(&p).unwrap();
        check_valid(&dt);
        assert_eq!(dt.len(), 3);
    }

    #[test]
    fn errors() {
        assert!(matches!(delaunay(&pts(&[(0.0, 0.0), (1.0, 1.0)])), Err(PcdError::TooFewPoints { .. })));
        assert!(matches!(
            delaunay(&pts(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)])),
            Err(PcdError::Collinear)
        ));
        assert!(matches!(delaunay(&pts(&[(1.0, 1.0); 4])), Err(PcdError::Collinear)));
    }

    #[test]
    fn locate_prefers_smallest_cell() {
        let dt = delaunay(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])).unwrap();
        let on_diag = Point2::new(0.5, 0.5).unwrap();
        assert_eq!(dt.locate(&on_diag, 1e-12), Some(0));
        assert_eq!(dt.locate(&Point2::new(2.0, 0.5).unwrap(), 1e-12), None);
    }
}
