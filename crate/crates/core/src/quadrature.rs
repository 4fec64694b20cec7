//! Adaptive tensor-product Gauss–Kronrod cubature on `[0, ∞)^d`.
//!
//! Each half-line is folded onto `[0, 1)` with `w = t/(1-t)`,
//! `dw = dt/(1-t)^2`. On every box the 15-point Kronrod tensor rule gives the
//! estimate and the embedded 7-point Gauss tensor rule the error; the box with
//! the largest error is bisected along every axis until the summed error falls
//! below the requested absolute tolerance.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{PcdError, Result};

/// Kronrod abscissae on [-1, 1] (non-negative half, descending; index 7 is 0).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for the abscissae XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// 15 nodes on [-1, 1] with Kronrod weights and Gauss weights (0 off-grid).
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for i in 0..7 {
        let g = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
        out[i] = (-XGK[i], WGK[i], g);
        out[14 - i] = (XGK[i], WGK[i], g);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

#[derive(Clone, Debug)]
struct Region {
    lo: Vec<f64>,
    hi: Vec<f64>,
    value: f64,
    error: f64,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Region {}
impl PartialOrd for Region {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Region {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

struct Cubature<'a, F> {
    f: &'a F,
    dim: usize,
    nodes: [(f64, f64, f64); 15],
    evals: usize,
    point: Vec<f64>,
}

impl<F: Fn(&[f64]) -> f64> Cubature<'_, F> {
    /// Kronrod and Gauss tensor sums over the box `[lo, hi]` in `t`-space.
    fn apply(&mut self, lo: &[f64], hi: &[f64]) -> (f64, f64) {
        let d = self.dim;
        let mut idx = vec![0usize; d];
        let (mut k_sum, mut g_sum) = (0.0, 0.0);
        let half: Vec<f64> = (0..d).map(|i| 0.5 * (hi[i] - lo[i])).collect();
        let mid: Vec<f64> = (0..d).map(|i| 0.5 * (hi[i] + lo[i])).collect();
        loop {
            let mut wk = 1.0;
            let mut wg = 1.0;
            let mut jac = 1.0;
            for i in 0..d {
                let (x, k, g) = self.nodes[idx[i]];
                let t = mid[i] + half[i] * x;
                let s = 1.0 - t;
                self.point[i] = t / s;
                jac *= 1.0 / (s * s);
                wk *= k;
                wg *= g;
            }
            let v = (self.f)(&self.point) * jac;
            self.evals += 1;
            k_sum += wk * v;
            g_sum += wg * v;
            // odometer over the 15^d grid
            let mut i = 0;
            loop {
                if i == d {
                    let vol: f64 = half.iter().product();
                    return (k_sum * vol, g_sum * vol);
                }
                idx[i] += 1;
                if idx[i] < 15 {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    fn region(&mut self, lo: Vec<f64>, hi: Vec<f64>) -> Region {
        let (k, g) = self.apply(&lo, &hi);
        let error = (k - g).abs().max(50.0 * f64::EPSILON * k.abs());
        Region { lo, hi, value: k, error }
    }
}

/// Integrates `f` over `[0, ∞)^dim` to absolute tolerance `abs_tol`.
///
/// `f` must decay fast enough that the folded integrand vanishes at `t → 1`.
pub fn integrate_positive_orthant<F>(f: &F, dim: usize, abs_tol: f64, max_evals: usize) -> Result<Estimate>
where
    F: Fn(&[f64]) -> f64,
{
    assert!(dim >= 1, "dimension must be positive");
    let mut cub = Cubature { f, dim, nodes: rule(), evals: 0, point: vec![0.0; dim] };
    let mut heap = BinaryHeap::new();
    let root = cub.region(vec![0.0; dim], vec![1.0; dim]);
    let mut error = root.error;
    heap.push(root);
    while error > abs_tol {
        if cub.evals >= max_evals {
            return Err(PcdError::Quadrature { tol: abs_tol, err: error });
        }
        let worst = heap.pop().expect("heap never empties");
        error -= worst.error;
        for corner in 0..(1usize << dim) {
            let mut lo = worst.lo.clone();
            let mut hi = worst.hi.clone();
            for i in 0..dim {
                let m = 0.5 * (worst.lo[i] + worst.hi[i]);
                if corner >> i & 1 == 0 {
                    hi[i] = m;
                } else {
                    lo[i] = m;
                }
            }
            let child = cub.region(lo, hi);
            error += child.error;
            heap.push(child);
        }
        // resum to avoid drift from the running updates
        if heap.len() % 64 == 0 {
            error = heap.iter().map(|r| r.error).sum();
        }
    }
    let value: f64 = heap.iter().map(|r| r.value).sum();
    let error: f64 = heap.iter().map(|r| r.error).sum();
    Ok(Estimate { value, error, evals: cub.evals })
}
