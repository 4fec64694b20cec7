//! Orientation and in-circle predicates.
//!
//! Each predicate is first evaluated in `f64` with a forward error bound; when
//! the result is too close to zero to trust, it is recomputed exactly with
//! big integers (every `f64` is a dyadic rational, so scaling by a common power
//! of two makes all inputs integral).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Float, Signed, Zero};

use super::Point2;

const EPS: f64 = f64::EPSILON / 2.0;
const CCW_ERRBOUND: f64 = (3.0 + 16.0 * EPS) * EPS;
const ICC_ERRBOUND: f64 = (10.0 + 96.0 * EPS) * EPS;

/// Sign of the orientation of `(a, b, c)`: `Greater` for counterclockwise.
pub fn orient2d(a: &Point2, b: &Point2, c: &Point2) -> Ordering {
    let detleft = (a.x() - c.x()) * (b.y() - c.y());
    let detright = (a.y() - c.y()) * (b.x() - c.x());
    let det = detleft - detright;
    let bound = CCW_ERRBOUND * (detleft.abs() + detright.abs());
    if det > bound {
        Ordering::Greater
    } else if -det > bound {
        Ordering::Less
    } else {
        orient2d_exact(a, b, c)
    }
}

/// `Greater` when `d` lies strictly inside the circle through the
/// counterclockwise triangle `(a, b, c)`, `Equal` when cocircular.
pub fn incircle(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> Ordering {
    let (adx, ady) = (a.x() - d.x(), a.y() - d.y());
    let (bdx, bdy) = (b.x() - d.x(), b.y() - d.y());
    let (cdx, cdy) = (c.x() - d.x(), c.y() - d.y());

    let bdxcdy = bdx * cdy;
    let cdxbdy = cdx * bdy;
    let alift = adx * adx + ady * ady;
    let cdxady = cdx * ady;
    let adxcdy = adx * cdy;
    let blift = bdx * bdx + bdy * bdy;
    let adxbdy = adx * bdy;
    let bdxady = bdx * ady;
    let clift = cdx * cdx + cdy * cdy;

    let det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    let permanent = (bdxcdy.abs() + cdxbdy.abs()) * alift
        + (cdxady.abs() + adxcdy.abs()) * blift
        + (adxbdy.abs() + bdxady.abs()) * clift;
    let bound = ICC_ERRBOUND * permanent;
    if det > bound {
        Ordering::Greater
    } else if -det > bound {
        Ordering::Less
    } else {
        incircle_exact(a, b, c, d)
    }
}

/// Scales every coordinate by a common power of two so they become integers.
fn to_integers<const N: usize>(vals: [f64; N]) -> [BigInt; N] {
    let decoded = vals.map(|v| v.integer_decode());
    let emin = decoded
        .iter()
        .filter(|(m, _, _)| *m != 0)
        .map(|&(_, e, _)| e)
        .min()
        .unwrap_or(0);
    decoded.map(|(m, e, s)| {
        let mut v = BigInt::from(m) << ((e - emin) as usize);
        if s < 0 {
            v = -v;
        }
        v
    })
}

fn sign(v: &BigInt) -> Ordering {
    if v.is_zero() {
        Ordering::Equal
    } else if v.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn orient2d_exact(a: &Point2, b: &Point2, c: &Point2) -> Ordering {
    let [ax, ay, bx, by, cx, cy] = to_integers([a.x(), a.y(), b.x(), b.y(), c.x(), c.y()]);
    let det = (&ax - &cx) * (&by - &cy) - (&ay - &cy) * (&bx - &cx);
    sign(&det)
}

fn incircle_exact(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> Ordering {
    let [ax, ay, bx, by, cx, cy, dx, dy] =
        to_integers([a.x(), a.y(), b.x(), b.y(), c.x(), c.y(), d.x(), d.y()]);
    let (adx, ady) = (&ax - &dx, &ay - &dy);
    let (bdx, bdy) = (&bx - &dx, &by - &dy);
    let (cdx, cdy) = (&cx - &dx, &cy - &dy);
    let alift = &adx * &adx + &ady * &ady;
    let blift = &bdx * &bdx + &bdy * &bdy;
    let clift = &cdx * &cdx + &cdy * &cdy;
    let det = alift * (&bdx * &cdy - &cdx * &bdy)
        + blift * (&cdx * &ady - &adx * &cdy)
        + clift * (&adx * &bdy - &bdx * &ady);
    sign(&det)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y).unwrap()
    }

    #[test]
    fn basic_orientation() {
        assert_eq!(orient2d(&p(0.0, 0.0), &p(1.0, 0.0), &p(0.0, 1.0)), Ordering::Greater);
        assert_eq!(orient2d(&p(0.0, 0.0), &p(0.0, 1.0), &p(1.0, 0.0)), Ordering::Less);
        assert_eq!(orient2d(&p(0.0, 0.0), &p(1.0, 1.0), &p(2.0, 2.0)), Ordering::Equal);
    }

    #[test]
    fn nearly_collinear_resolved_exactly() {
        // Classic failure case for naive evaluation: points on y = x with tiny offsets.
        let a = p(0.5, 0.5);
        let b = p(12.0, 12.0);
        let c = p(24.0, 24.0);
        for i in 0..64 {
            let x = 0.5 + (i as f64) * f64::EPSILON;
            let q = p(x, 0.5);
            let o = orient2d(&q, &b, &c);
            // q lies right of the directed line b -> c iff x > 0.5
            let want = if i == 0 { Ordering::Equal } else { Ordering::Less };
            assert_eq!(o, want, "i = {i}");
        }
        assert_eq!(orient2d(&a, &b, &c), Ordering::Equal);
    }

    #[test]
    fn cocircular_square_is_equal() {
        let (a, b, c, d) = (p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0));
        assert_eq!(incircle(&a, &b, &c, &d), Ordering::Equal);
        assert_eq!(incircle(&a, &b, &c, &p(0.5, 0.5)), Ordering::Greater);
        assert_eq!(incircle(&a, &b, &c, &p(2.0, 2.0)), Ordering::Less);
        // shifted far from the origin: float evaluation is inexact here
        let s = 1e8 + 0.1;
        assert_eq!(
            incircle(&p(s, s), &p(s + 1.0, s), &p(s + 1.0, s + 1.0), &p(s, s + 1.0)),
            Ordering::Equal
        );
    }
}
