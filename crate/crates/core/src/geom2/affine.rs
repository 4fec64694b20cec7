use serde::{Deserialize, Serialize};

use super::{Point2, Triangle2};
use crate::error::{PcdError, Result};

/// `p ↦ L·p + t` with an invertible linear part `L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap2 {
    linear: [[f64; 2]; 2],
    translation: [f64; 2],
}

impl AffineMap2 {
    pub fn new(linear: [[f64; 2]; 2], translation: [f64; 2]) -> Result<Self> {
        let m = Self { linear, translation };
        let det = m.det();
        if !det.is_finite() || det == 0.0 || !translation.iter().all(|t| t.is_finite()) {
            return Err(PcdError::invalid(format!("affine map is not invertible (det = {det})")));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self {
            linear: [[1.0, 0.0], [0.0, 1.0]],
            translation: [0.0, 0.0],
        }
    }

    pub fn linear(&self) -> [[f64; 2]; 2] {
        self.linear
    }

    pub fn translation(&self) -> [f64; 2] {
        self.translation
    }

    pub fn det(&self) -> f64 {
        let [[a, b], [c, d]] = self.linear;
        a * d - b * c
    }

    pub fn apply(&self, p: &Point2) -> Point2 {
        let [[a, b], [c, d]] = self.linear;
        Point2::raw(
            a * p.x() + b * p.y() + self.translation[0],
            c * p.x() + d * p.y() + self.translation[1],
        )
    }

    pub fn apply_triangle(&self, tri: &Triangle2) -> Result<Triangle2> {
        let [a, b, c] = tri.vertices();
        Triangle2::new(self.apply(&a), self.apply(&b), self.apply(&c))
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.linear;
        let det = self.det();
        let inv = [[d / det, -b / det], [-c / det, a / det]];
        let [tx, ty] = self.translation;
        Self {
            linear: inv,
            translation: [-(inv[0][0] * tx + inv[0][1] * ty), -(inv[1][0] * tx + inv[1][1] * ty)],
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AffineMap2) -> Self {
        let [[a, b], [c, d]] = self.linear;
        let [[e, f], [g, h]] = other.linear;
        let [tx, ty] = other.translation;
        Self {
            linear: [[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]],
            translation: [
                a * tx + b * ty + self.translation[0],
                c * tx + d * ty + self.translation[1],
            ],
        }
    }

    /// The unique affine map sending the vertices of `src` to those of `dst`
    /// (in stored order).
    pub fn between(src: &Triangle2, dst: &Triangle2) -> Self {
        let [p0, p1, p2] = src.vertices();
        let [q0, q1, q2] = dst.vertices();
        // Columns of S = [p1-p0, p2-p0], D = [q1-q0, q2-q0]; L = D·S⁻¹.
        let s = [[p1.x() - p0.x(), p2.x() - p0.x()], [p1.y() - p0.y(), p2.y() - p0.y()]];
        let dm = [[q1.x() - q0.x(), q2.x() - q0.x()], [q1.y() - q0.y(), q2.y() - q0.y()]];
        let sdet = s[0][0] * s[1][1] - s[0][1] * s[1][0];
        let sinv = [[s[1][1] / sdet, -s[0][1] / sdet], [-s[1][0] / sdet, s[0][0] / sdet]];
        let l = [
            [
                dm[0][0] * sinv[0][0] + dm[0][1] * sinv[1][0],
                dm[0][0] * sinv[0][1] + dm[0][1] * sinv[1][1],
            ],
            [
                dm[1][0] * sinv[0][0] + dm[1][1] * sinv[1][0],
                dm[1][0] * sinv[0][1] + dm[1][1] * sinv[1][1],
            ],
        ];
        let t = [
            q0.x() - (l[0][0] * p0.x() + l[0][1] * p0.y()),
            q0.y() - (l[1][0] * p0.x() + l[1][1] * p0.y()),
        ];
        Self { linear: l, translation: t }
    }
}

/// Shape parameters of the basic triangle `T((0,0),(1,0),(c1,c2))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasicTriangleParams {
    c1: f64,
    c2: f64,
}

const BASIC_TOL: f64 = 1e-12;

impl BasicTriangleParams {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        let ok = c1 > 0.0
            && c1 <= 0.5 + BASIC_TOL
            && c2 > 0.0
            && (1.0 - c1).powi(2) + c2 * c2 <= 1.0 + BASIC_TOL;
        if !ok {
            return Err(PcdError::invalid(format!(
                "basic triangle parameters ({c1}, {c2}) violate 0 < c1 <= 1/2, c2 > 0, (1-c1)^2 + c2^2 <= 1"
            )));
        }
        Ok(Self { c1, c2 })
    }

    pub fn equilateral() -> Self {
        Self {
            c1: 0.5,
            c2: 3f64.sqrt() / 2.0,
        }
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn triangle(&self) -> Triangle2 {
        Triangle2::new(
            Point2::raw(0.0, 0.0),
            Point2::raw(1.0, 0.0),
            Point2::raw(self.c1, self.c2),
        )
        .expect("validated basic parameters give a proper triangle")
    }
}

/// Result of reducing a triangle to its basic form.
#[derive(Clone, Copy, Debug)]
pub struct BasicReduction {
    /// Similarity (rigid motion, optional reflection, uniform scaling).
    pub map: AffineMap2,
    pub params: BasicTriangleParams,
    /// `order[k]` is the index of the input vertex sent to basic vertex `k`
    /// (`(0,0)`, `(1,0)`, `(c1,c2)` respectively).
    pub order: [usize; 3],
}

/// Reduces `tri` to `T((0,0),(1,0),(c1,c2))`: the longest edge goes to the
/// unit segment, its endpoint nearer the third vertex to the origin.
pub fn to_basic_triangle(tri: &Triangle2) -> BasicReduction {
    let v = tri.vertices();
    // Longest edge is opposite vertex `k`; ties to the smallest k.
    let mut k = 0;
    let mut best = -1.0;
    for j in 0..3 {
        let len = v[(j + 1) % 3].dist2(&v[(j + 2) % 3]);
        if len > best {
            best = len;
            k = j;
        }
    }
    let (mut ia, mut ib) = ((k + 1) % 3, (k + 2) % 3);
    if v[ia].dist2(&v[k]) > v[ib].dist2(&v[k]) {
        std::mem::swap(&mut ia, &mut ib);
    }
    let (a, b, c) = (v[ia], v[ib], v[k]);
    let len = best.sqrt();
    let e = [(b.x() - a.x()) / len, (b.y() - a.y()) / len];
    let mut n = [-e[1], e[0]];
    let rel = [c.x() - a.x(), c.y() - a.y()];
    if rel[0] * n[0] + rel[1] * n[1] < 0.0 {
        n = [-n[0], -n[1]];
    }
    let linear = [[e[0] / len, e[1] / len], [n[0] / len, n[1] / len]];
    let translation = [
        -(linear[0][0] * a.x() + linear[0][1] * a.y()),
        -(linear[1][0] * a.x() + linear[1][1] * a.y()),
    ];
    let map = AffineMap2 { linear, translation };
    let c_img = map.apply(&c);
    // Clamp rounding excursions so the invariants hold exactly.
    let c1 = c_img.x().clamp(f64::MIN_POSITIVE, 0.5);
    let c2 = c_img.y();
    let c2 = c2.min((1.0 - (1.0 - c1).powi(2)).max(0.0).sqrt());
    BasicReduction {
        map,
        params: BasicTriangleParams { c1, c2 },
        order: [ia, ib, k],
    }
}

/// Shear-and-stretch taking `T_b` onto `T_e`, fixing `(0,0)` and `(1,0)` and
/// sending `(c1,c2)` to `(1/2, √3/2)`.
pub fn phi_e(params: &BasicTriangleParams) -> AffineMap2 {
    let (c1, c2) = (params.c1, params.c2);
    AffineMap2 {
        linear: [[1.0, (0.5 - c1) / c2], [0.0, 3f64.sqrt() / (2.0 * c2)]],
        translation: [0.0, 0.0],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2::{sample_uniform_triangle, Bary3};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(p: Point2, x: f64, y: f64, tol: f64) -> bool {
        (p.x() - x).abs() <= tol && (p.y() - y).abs() <= tol
    }

    #[test]
    fn equilateral_is_already_basic() {
        let red = to_basic_triangle(&Triangle2::equilateral());
        assert!((red.params.c1() - 0.5).abs() < 1e-15);
        assert!((red.params.c2() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let te = Triangle2::equilateral();
        for j in 0..3 {
            let img = red.map.apply(&te.vertex(red.order[j]));
            let want = red.params.triangle().vertex(j);
            assert!(img.dist2(&want).sqrt() < 1e-14);
        }
    }

    #[test]
    fn scaled_equilateral_halves() {
        let tri = Triangle2::from_coords([0.0, 0.0, 2.0, 0.0, 1.0, 3f64.sqrt()]).unwrap();
        let red = to_basic_triangle(&tri);
        assert!((red.params.c1() - 0.5).abs() < 1e-14);
        assert!((red.params.c2() - 3f64.sqrt() / 2.0).abs() < 1e-14);
        assert!((red.map.det() - 0.25).abs() < 1e-14);
        assert!(close(red.map.apply(&Point2::new(2.0, 0.0).unwrap()), 1.0, 0.0, 1e-14));
        assert!(close(red.map.apply(&Point2::new(1.0, 3f64.sqrt()).unwrap()), 0.5, 3f64.sqrt() / 2.0, 1e-14));
    }

    #[test]
    fn right_triangle_maps_hypotenuse_to_unit_segment() {
        let tri = Triangle2::from_coords([0.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let red = to_basic_triangle(&tri);
        let (c1, c2) = (red.params.c1(), red.params.c2());
        assert!(c1 > 0.0 && c1 <= 0.5 && c2 > 0.0);
        assert!((1.0 - c1).powi(2) + c2 * c2 <= 1.0 + 1e-12);
        assert!((c1 - 0.5).abs() < 1e-14 && (c2 - 0.5).abs() < 1e-14);
        // The right-angle vertex is the apex.
        assert_eq!(red.order[2], 0);
        // Brute force over the six labellings: exactly the chosen one (or its
        // mirror when c1 = 1/2) satisfies the constraints.
        let v = tri.vertices();
        let mut feasible = 0;
        for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let (a, b, c) = (v[perm[0]], v[perm[1]], v[perm[2]]);
            let l = a.dist2(&b).sqrt();
            let ex = [(b.x() - a.x()) / l, (b.y() - a.y()) / l];
            let rc = [(c.x() - a.x()) / l, (c.y() - a.y()) / l];
            let u = rc[0] * ex[0] + rc[1] * ex[1];
            let w = (rc[0] * ex[1] - rc[1] * ex[0]).abs();
            if u > 0.0 && u <= 0.5 + 1e-12 && (1.0 - u).powi(2) + w * w <= 1.0 + 1e-12 {
                feasible += 1;
            }
        }
        assert_eq!(feasible, 2);
    }

    #[test]
    fn random_triangles_reduce_validly() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let c: [f64; 6] = std::array::from_fn(|_| rng.random_range(-5.0..5.0));
            let Ok(tri) = Triangle2::from_coords(c) else { continue };
            let red = to_basic_triangle(&tri);
            assert!(BasicTriangleParams::new(red.params.c1(), red.params.c2()).is_ok());
            let basic = red.params.triangle();
            for j in 0..3 {
                let img = red.map.apply(&tri.vertex(red.order[j]));
                let scale = tri.vertex(0).dist2(&tri.vertex(1)).sqrt().max(1.0);
                assert!(img.dist2(&basic.vertex(j)).sqrt() < 1e-9 * scale);
            }
            // similarity: linear part is s·(orthogonal)
            let [[a, b], [c, d]] = red.map.linear();
            assert!((a * a + c * c - (b * b + d * d)).abs() < 1e-9 * (a * a + c * c));
            assert!((a * b + c * d).abs() < 1e-9 * (a * a + c * c));
        }
    }

    #[test]
    fn phi_e_fixes_base_and_sends_apex() {
        let p = BasicTriangleParams::new(0.25, 0.5).unwrap();
        let m = phi_e(&p);
        assert!(close(m.apply(&Point2::raw(0.0, 0.0)), 0.0, 0.0, 0.0));
        assert!(close(m.apply(&Point2::raw(1.0, 0.0)), 1.0, 0.0, 1e-15));
        assert!(close(m.apply(&Point2::raw(0.25, 0.5)), 0.5, 3f64.sqrt() / 2.0, 1e-15));
        let id = phi_e(&BasicTriangleParams::equilateral());
        let q = Point2::raw(0.3, 0.2);
        assert!(close(id.apply(&q), 0.3, 0.2, 1e-15));
    }

    #[test]
    fn phi_e_preserves_barycentric() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = BasicTriangleParams::new(0.3, 0.7).unwrap();
        let tb = p.triangle();
        let te = Triangle2::equilateral();
        let m = phi_e(&p);
        for _ in 0..100 {
            let x = sample_uniform_triangle(&tb, &mut rng);
            let b0 = tb.barycentric(&x);
            let b1 = te.barycentric(&m.apply(&x));
            for j in 0..3 {
                assert!((b0.get(j) - b1.get(j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn inverse_and_compose() {
        let m = AffineMap2::new([[2.0, 1.0], [-0.5, 3.0]], [4.0, -1.0]).unwrap();
        let id = m.compose(&m.inverse());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let p = Point2::raw(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let q = id.apply(&p);
            assert!(p.dist2(&q).sqrt() < 1e-10);
            let r = m.inverse().apply(&m.apply(&p));
            assert!(p.dist2(&r).sqrt() < 1e-10);
        }
        assert!(AffineMap2::new([[1.0, 2.0], [2.0, 4.0]], [0.0, 0.0]).is_err());
    }

    #[test]
    fn between_maps_vertices() {
        let src = Triangle2::from_coords([1.0, 1.0, 3.0, 2.0, 0.0, 4.0]).unwrap();
        let dst = Triangle2::equilateral();
        let m = AffineMap2::between(&src, &dst);
        for j in 0..3 {
            assert!(m.apply(&src.vertex(j)).dist2(&dst.vertex(j)).sqrt() < 1e-14);
        }
        let b = Bary3::new(0.2, 0.5, 0.3).unwrap();
        let img = m.apply(&src.point_at(&b));
        let back = dst.barycentric(&img);
        assert!((back.get(1) - 0.5).abs() < 1e-12);
    }
}
