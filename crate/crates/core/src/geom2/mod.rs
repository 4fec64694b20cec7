//! Planar geometric substrate.

mod affine;
mod delaunay;
mod hull;
pub mod predicates;
mod sample;

use serde::{Deserialize, Serialize};

use crate::error::{PcdError, Result};

pub use affine::{phi_e, to_basic_triangle, AffineMap2, BasicReduction, BasicTriangleParams};
pub use delaunay::{delaunay, DelaunayTriangulation};
pub use hull::{convex_hull, polygon_area};
pub use sample::sample_uniform_triangle;

/// Tolerance on `|b1 + b2 + b3 - 1|` accepted by [`Bary3::new`].
pub const BARY_SUM_TOL: f64 = 1e-12;

/// Relative degeneracy threshold: a triangle is rejected when
/// `|signed area| <= DEGENERACY_TOL * diag^2`, `diag` the bounding-box diagonal.
pub const DEGENERACY_TOL: f64 = 1e-14;

/// A point in the plane with finite coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    x: f64,
    y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(PcdError::NonFinite(x, y))
        }
    }

    /// Unchecked constructor for values computed from already finite inputs.
    pub(crate) const fn raw(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn dist2(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

impl TryFrom<[f64; 2]> for Point2 {
    type Error = PcdError;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Point2::new(v[0], v[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

/// Barycentric coordinates relative to a triangle; component `j` is the
/// normalized distance of the point to the edge opposite vertex `j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Bary3([f64; 3]);

impl Bary3 {
    pub fn new(b1: f64, b2: f64, b3: f64) -> Result<Self> {
        if !(b1.is_finite() && b2.is_finite() && b3.is_finite()) {
            return Err(PcdError::invalid("barycentric coordinates must be finite"));
        }
        let s = b1 + b2 + b3;
        if (s - 1.0).abs() > BARY_SUM_TOL {
            return Err(PcdError::invalid(format!(
                "barycentric coordinates sum to {s}, expected 1"
            )));
        }
        Ok(Self([b1, b2, b3]))
    }

    /// Normalizes arbitrary non-negative weights (not all zero) to sum to one.
    pub fn normalized(w1: f64, w2: f64, w3: f64) -> Result<Self> {
        let s = w1 + w2 + w3;
        if !s.is_finite() || s <= 0.0 {
            return Err(PcdError::invalid("barycentric weights must have a positive finite sum"));
        }
        if w1 < 0.0 || w2 < 0.0 || w3 < 0.0 {
            return Err(PcdError::invalid("barycentric weights must be non-negative"));
        }
        Ok(Self([w1 / s, w2 / s, w3 / s]))
    }

    pub const fn centroid() -> Self {
        Self([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])
    }

    /// Barycentric coordinates of vertex `j` (0-based).
    pub fn vertex(j: usize) -> Self {
        let mut b = [0.0; 3];
        b[j] = 1.0;
        Self(b)
    }

    pub(crate) const fn raw(b: [f64; 3]) -> Self {
        Self(b)
    }

    #[inline]
    pub fn get(&self, j: usize) -> f64 {
        self.0[j]
    }

    #[inline]
    pub fn coords(&self) -> [f64; 3] {
        self.0
    }

    /// Inside the closed triangle up to `tol`.
    pub fn is_inside(&self, tol: f64) -> bool {
        self.0.iter().all(|&b| b >= -tol)
    }

    pub fn is_interior(&self) -> bool {
        self.0.iter().all(|&b| b > 0.0)
    }
}

impl TryFrom<[f64; 3]> for Bary3 {
    type Error = PcdError;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Bary3::new(v[0], v[1], v[2])
    }
}

impl From<Bary3> for [f64; 3] {
    fn from(b: Bary3) -> Self {
        b.0
    }
}

/// Twice the signed area of `(a, b, c)`; positive when counterclockwise.
#[inline]
pub(crate) fn cross(a: &Point2, b: &Point2, c: &Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// A non-degenerate triangle with vertices stored counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Triangle2 {
    v: [Point2; 3],
    /// Twice the (positive) area, cached for barycentric evaluation.
    #[serde(skip)]
    area2: f64,
}

impl Triangle2 {
    /// Builds a triangle, swapping `v2` and `v3` if the input is clockwise.
    pub fn new(v1: Point2, v2: Point2, v3: Point2) -> Result<Self> {
        let xs = [v1.x, v2.x, v3.x];
        let ys = [v1.y, v2.y, v3.y];
        let w = xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min);
        let h = ys.iter().cloned().fold(f64::MIN, f64::max) - ys.iter().cloned().fold(f64::MAX, f64::min);
        let tol = DEGENERACY_TOL * (w * w + h * h);
        let a2 = cross(&v1, &v2, &v3);
        if 0.5 * a2.abs() <= tol || !a2.is_finite() {
            return Err(PcdError::DegenerateTriangle { area: 0.5 * a2, tol });
        }
        let v = if a2 > 0.0 { [v1, v2, v3] } else { [v1, v3, v2] };
        let area2 = cross(&v[0], &v[1], &v[2]);
        Ok(Self { v, area2 })
    }

    pub fn from_coords(c: [f64; 6]) -> Result<Self> {
        Self::new(
            Point2::new(c[0], c[1])?,
            Point2::new(c[2], c[3])?,
            Point2::new(c[4], c[5])?,
        )
    }

    /// The standard equilateral triangle `T((0,0),(1,0),(1/2,√3/2))`.
    pub fn equilateral() -> Self {
        Self::new(
            Point2::raw(0.0, 0.0),
            Point2::raw(1.0, 0.0),
            Point2::raw(0.5, 3f64.sqrt() / 2.0),
        )
        .expect("equilateral triangle is non-degenerate")
    }

    #[inline]
    pub fn vertices(&self) -> [Point2; 3] {
        self.v
    }

    #[inline]
    pub fn vertex(&self, j: usize) -> Point2 {
        self.v[j]
    }

    pub fn area(&self) -> f64 {
        0.5 * self.area2
    }

    pub fn centroid(&self) -> Point2 {
        self.point_at(&Bary3::centroid())
    }

    /// Barycentric coordinates of `p`; defined for any `p` in the plane.
    pub fn barycentric(&self, p: &Point2) -> Bary3 {
        let [a, b, c] = &self.v;
        Bary3([
            cross(p, b, c) / self.area2,
            cross(a, p, c) / self.area2,
            cross(a, b, p) / self.area2,
        ])
    }

    /// Cartesian point with barycentric coordinates `b`.
    pub fn point_at(&self, b: &Bary3) -> Point2 {
        let [p, q, r] = &self.v;
        let [b1, b2, b3] = b.0;
        Point2::raw(
            b1 * p.x + b2 * q.x + b3 * r.x,
            b1 * p.y + b2 * q.y + b3 * r.y,
        )
    }

    pub fn contains(&self, p: &Point2, tol: f64) -> bool {
        self.barycentric(p).is_inside(tol)
    }
}

/// Barycentric coordinates of `p` with respect to `tri`.
pub fn barycentric(tri: &Triangle2, p: &Point2) -> Bary3 {
    tri.barycentric(p)
}
