//! The centroid-centred construction in a d-simplex.
//!
//! With `M = M_C` the vertex region of `x` is the index of its largest
//! barycentric coordinate, and `z ∈ N(x)` iff `1 − b_j(z) <= r(1 − b_j(x))`.
//! For `d = 2` this is exactly [`crate::proximity::arc_predicate`] with the
//! centroid as center.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domination::{bruteforce_masks, candidate_domination, DominationResult};
use crate::error::{PcdError, Result};
use crate::proximity::Expansion;
use crate::BARY_TOL;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 4;
pub const BRUTEFORCE_MAX_N_D: usize = 15;

/// A non-degenerate d-simplex given by its `d + 1` vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexD {
    vertices: Vec<Vec<f64>>,
}

fn det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c];
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            let (top, rest) = a.split_at_mut(i);
            for (x, y) in rest[0][c..].iter_mut().zip(&top[c][c..]) {
                *x -= f * y;
            }
        }
    }
    d
}

fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        a.swap(p, c);
        b.swap(p, c);
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            let (top, rest) = a.split_at_mut(i);
            for (x, y) in rest[0][c..].iter_mut().zip(&top[c][c..]) {
                *x -= f * y;
            }
            b[i] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

impl SimplexD {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let d = vertices.len().saturating_sub(1);
        if d == 0 || vertices.iter().any(|v| v.len() != d) {
            return Err(PcdError::invalid("a d-simplex needs d + 1 vertices in R^d"));
        }
        if let Some(v) = vertices.iter().flatten().find(|v| !v.is_finite()) {
            return Err(PcdError::invalid(format!("non-finite vertex coordinate {v}")));
        }
        let s = Self { vertices };
        let scale = s
            .vertices
            .iter()
            .flat_map(|a| s.vertices.iter().map(move |b| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>()))
            .fold(0.0, f64::max)
            .sqrt();
        let vol = s.volume();
        if vol.is_nan() || vol <= 1e-14 * scale.powi(d as i32) {
            return Err(PcdError::DegenerateSimplex(vol));
        }
        Ok(s)
    }

    /// The standard simplex `conv{0, e_1, …, e_d}`.
    pub fn standard(d: usize) -> Result<Self> {
        let mut v = vec![vec![0.0; d]];
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            v.push(e);
        }
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    fn edge_matrix(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        let v0 = &self.vertices[0];
        (0..d)
            .map(|row| (1..=d).map(|k| self.vertices[k][row] - v0[row]).collect())
            .collect()
    }

    pub fn volume(&self) -> f64 {
        let d = self.dim();
        let fact: f64 = (1..=d).map(|k| k as f64).product();
        det(self.edge_matrix()).abs() / fact
    }

    pub fn point_at(&self, b: &BaryD) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|i| self.vertices.iter().zip(&b.0).map(|(v, w)| v[i] * w).sum())
            .collect()
    }

    pub fn barycentric(&self, p: &[f64]) -> Result<BaryD> {
        let d = self.dim();
        if p.len() != d {
            return Err(PcdError::invalid(format!("point has {} coordinates, expected {d}", p.len())));
        }
        let rhs: Vec<f64> = (0..d).map(|i| p[i] - self.vertices[0][i]).collect();
        let tail = solve(self.edge_matrix(), rhs);
        let mut b = Vec::with_capacity(d + 1);
        b.push(1.0 - tail.iter().sum::<f64>());
        b.extend(tail);
        Ok(BaryD(b))
    }
}

/// Barycentric coordinates with respect to a d-simplex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BaryD(Vec<f64>);

impl BaryD {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 || coords.iter().any(|c| !c.is_finite()) {
            return Err(PcdError::invalid("barycentric coordinates must be finite, at least two"));
        }
        let s: f64 = coords.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(PcdError::invalid(format!("barycentric coordinates sum to {s}, not 1")));
        }
        Ok(Self(coords))
    }

    pub fn centroid(d: usize) -> Self {
        Self(vec![1.0 / (d + 1) as f64; d + 1])
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn get(&self, j: usize) -> f64 {
        self.0[j]
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_inside(&self, tol: f64) -> bool {
        self.0.iter().all(|&b| b >= -tol)
    }
}

/// Uniform point of the simplex as normalized standard exponentials.
pub fn sample_uniform_simplex<R: Rng + ?Sized>(d: usize, rng: &mut R) -> BaryD {
    let e: Vec<f64> = (0..=d).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    if s == 0.0 {
        return BaryD::centroid(d);
    }
    BaryD(e.into_iter().map(|x| x / s).collect())
}

/// Vertex region of `b` for the centroid center (largest coordinate, ties to
/// the smallest index).
pub fn vertex_region_d(b: &BaryD) -> usize {
    let m = 1.0 / b.0.len() as f64;
    let max = b.0.iter().map(|x| x / m).fold(f64::MIN, f64::max);
    let slack = BARY_TOL * max.abs().max(1.0);
    b.0.iter().position(|x| x / m >= max - slack).unwrap_or(0)
}

pub fn arc_predicate_d(r: Expansion, x: &BaryD, z: &BaryD) -> bool {
    if !z.is_inside(BARY_TOL) {
        return false;
    }
    let j = vertex_region_d(x);
    if x.get(j) >= 1.0 - BARY_TOL {
        return z.get(j) >= 1.0 - BARY_TOL;
    }
    match r {
        Expansion::Infinite => true,
        Expansion::Finite(r) => 1.0 - z.get(j) <= r * (1.0 - x.get(j)) + BARY_TOL,
    }
}

fn check_dims(points: &[BaryD]) -> Result<usize> {
    let d = points.first().ok_or(PcdError::EmptyInput)?.dim();
    if points.iter().any(|p| p.dim() != d) {
        return Err(PcdError::invalid("points of mixed dimension"));
    }
    Ok(d)
}

/// Exact domination number, searching the `d + 1` region candidates.
pub fn domination_exact_d(points: &[BaryD], r: Expansion) -> Result<DominationResult> {
    let d = check_dims(points)?;
    candidate_domination(
        points.len(),
        d + 1,
        |i| {
            let j = vertex_region_d(&points[i]);
            (j, points[i].get(j))
        },
        |c, z| c == z || arc_predicate_d(r, &points[c], &points[z]),
    )
}

/// Exhaustive oracle for `n <= 15`.
pub fn domination_bruteforce_d(points: &[BaryD], r: Expansion) -> Result<DominationResult> {
    check_dims(points)?;
    let n = points.len();
    if n > BRUTEFORCE_MAX_N_D {
        return Err(PcdError::TooLarge { n, max: BRUTEFORCE_MAX_N_D });
    }
    let closed: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&k| k == i || arc_predicate_d(r, &points[i], &points[k]))
                .fold(0u32, |m, k| m | 1 << k)
        })
        .collect();
    bruteforce_masks(&closed)
}
