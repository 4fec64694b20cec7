use rand::Rng;

use super::{Point2, Triangle2};

/// Uniform point in the closed triangle.
///
/// Draws `(u, v)` on the unit square and folds the upper half back with
/// `(u, v) -> (1-u, 1-v)`, then returns `v1 + u (v2 - v1) + v (v3 - v1)`.
pub fn sample_uniform_triangle<R: Rng + ?Sized>(tri: &Triangle2, rng: &mut R) -> Point2 {
    let mut u: f64 = rng.random();
    let mut v: f64 = rng.random();
    if u + v > 1.0 {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    let [a, b, c] = tri.vertices();
    Point2::raw(
        a.x() + u * (b.x() - a.x()) + v * (c.x() - a.x()),
        a.y() + u * (b.y() - a.y()) + v * (c.y() - a.y()),
    )
}
