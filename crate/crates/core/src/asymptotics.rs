//! Limiting distribution of the domination number for uniform data.
//!
//! With `M` a vertex of `T_r` (`1 < r < 3/2`) the pair of candidate points
//! closest to the two edges adjacent to that vertex dominates with limiting
//! probability
//!
//! ```text
//! p_r = ∫∫ (64/9) (r/(r-1))² w1 w3 exp(-(4r/(3(r-1))) (w1² + w3² + 2r(r-1) w1 w3)) dw3 dw1
//! ```
//!
//! over `[0, ∞)²`. Substituting `u = w·sqrt(4r/(3(r-1)))` gives the
//! equivalent, better conditioned form `4 ∫∫ u v exp(-(u² + v² + 2c u v))` with
//! `c = r(r-1)`, which is what is integrated here.
//!
//! At `r = 3/2` the three vertices of `T_r` collapse into the centroid-analog,
//! so any of the three pairs may dominate. With independent Rayleigh
//! variables `U1, U2, U3` (density `2u e^{-u²}`) the limit becomes
//! `E[1 - Π_{i<j} (1 - exp(-2c U_i U_j))]`, evaluated as the 3-d integral
//! `8 ∫∫∫ u1 u2 u3 e^{-(u1²+u2²+u3²)} [1 - Π (1 - e^{-2c u_i u_j})]`.

use serde::{Deserialize, Serialize};

use crate::error::{PcdError, Result};
use crate::geom2::{Bary3, BasicTriangleParams};
use crate::proximity::{classify_m, Expansion, MClass};
use crate::quadrature::integrate_positive_orthant;

pub const DEFAULT_TOL: f64 = 1e-6;

/// `r` is treated as exactly 3/2 within this distance.
const R_THREE_HALVES_TOL: f64 = 1e-12;

const MAX_EVALS: usize = 200_000_000;

fn pair_integrand(c: f64) -> impl Fn(&[f64]) -> f64 {
    move |w: &[f64]| {
        let (u, v) = (w[0], w[1]);
        4.0 * u * v * (-(u * u + v * v + 2.0 * c * u * v)).exp()
    }
}

fn triple_integrand(c: f64) -> impl Fn(&[f64]) -> f64 {
    move |w: &[f64]| {
        let (a, b, d) = (w[0], w[1], w[2]);
        let gauss = (-(a * a + b * b + d * d)).exp();
        if gauss == 0.0 {
            return 0.0;
        }
        let miss = (1.0 - (-2.0 * c * a * b).exp()) * (1.0 - (-2.0 * c * a * d).exp()) * (1.0 - (-2.0 * c * b * d).exp());
        8.0 * a * b * d * gauss * (1.0 - miss)
    }
}

/// Limiting `P(γ_n = 2)` for `M` at a vertex of `T_r`, to absolute tolerance
/// `abs_tol`. Defined for `r ∈ (1, 3/2]`.
pub fn p_r(r: f64, abs_tol: f64) -> Result<f64> {
    if !(r > 1.0 && r <= 1.5 + R_THREE_HALVES_TOL) {
        return Err(PcdError::invalid(format!("p_r is defined for r in (1, 3/2], got r = {r}")));
    }
    if !(abs_tol > 0.0 && abs_tol.is_finite()) {
        return Err(PcdError::invalid(format!("tolerance must be positive, got {abs_tol}")));
    }
    let c = r * (r - 1.0);
    let est = if (r - 1.5).abs() <= R_THREE_HALVES_TOL {
        integrate_positive_orthant(&triple_integrand(0.75), 3, abs_tol, MAX_EVALS)?
    } else {
        integrate_positive_orthant(&pair_integrand(c), 2, abs_tol, MAX_EVALS)?
    };
    Ok(est.value)
}

/// Single-pair limit `4 ∫∫ u v exp(-(u² + v² + 2 r(r-1) u v))` for any
/// `r ∈ (1, 3/2]`; equals [`p_r`] below 3/2.
pub fn p_pair(r: f64, abs_tol: f64) -> Result<f64> {
    if !(r > 1.0 && r <= 1.5 + R_THREE_HALVES_TOL) {
        return Err(PcdError::invalid(format!("r must lie in (1, 3/2], got {r}")));
    }
    Ok(integrate_positive_orthant(&pair_integrand(r * (r - 1.0)), 2, abs_tol, MAX_EVALS)?.value)
}

/// Asymptotic law of `γ_n(r, M)` in one triangle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum GammaLaw {
    Degenerate { value: u32, note: String },
    /// `2 + Bernoulli(q)` with `q = 1 - p_r`.
    TwoPlusBernoulli { q: f64, p_r: f64, note: String },
}

impl GammaLaw {
    fn degenerate(value: u32, note: &str) -> Self {
        GammaLaw::Degenerate { value, note: note.to_string() }
    }

    pub fn moments(&self) -> (f64, f64) {
        law_moments(self)
    }

    /// Probability of `γ = k` under the law.
    pub fn pmf(&self, k: u32) -> f64 {
        match self {
            GammaLaw::Degenerate { value, .. } => (k == *value) as u32 as f64,
            GammaLaw::TwoPlusBernoulli { q, .. } => match k {
                2 => 1.0 - q,
                3 => *q,
                _ => 0.0,
            },
        }
    }

    pub fn note(&self) -> &str {
        match self {
            GammaLaw::Degenerate { note, .. } | GammaLaw::TwoPlusBernoulli { note, .. } => note,
        }
    }
}

/// `(mean, variance)`: `(k, 0)` for a point mass, `(2 + q, q (1 - q))` for
/// `2 + Bernoulli(q)`.
pub fn law_moments(law: &GammaLaw) -> (f64, f64) {
    match law {
        GammaLaw::Degenerate { value, .. } => (*value as f64, 0.0),
        GammaLaw::TwoPlusBernoulli { q, .. } => (2.0 + q, q * (1.0 - q)),
    }
}

/// Law for a precomputed classification of `M` against `T_r`.
pub fn law_from_class(r: Expansion, class: MClass) -> Result<GammaLaw> {
    let Expansion::Finite(rv) = r else {
        return Ok(GammaLaw::degenerate(1, "r = inf: every proximity region is the whole triangle"));
    };
    if rv > 1.5 + R_THREE_HALVES_TOL {
        return Ok(GammaLaw::degenerate(1, "r > 3/2: T_r is empty, M lies outside it"));
    }
    Ok(match class {
        MClass::OutsideTr => GammaLaw::degenerate(1, "M outside T_r: superset region has positive area"),
        MClass::InteriorTr => GammaLaw::degenerate(3, "M in the interior of T_r"),
        MClass::BoundaryNonVertex => GammaLaw::degenerate(3, "M on the boundary of T_r but not a vertex"),
        MClass::VertexOfTr => {
            if rv <= 1.0 {
                return Err(PcdError::invalid("p_r is not defined at r = 1"));
            }
            let p = p_r(rv, DEFAULT_TOL)?;
            let note = if (rv - 1.5).abs() <= R_THREE_HALVES_TOL {
                "r = 3/2 and M at the degenerate T_r (all three vertices coincide)"
            } else {
                "M at a vertex of T_r"
            };
            GammaLaw::TwoPlusBernoulli { q: 1.0 - p, p_r: p, note: note.to_string() }
        }
    })
}

/// Limiting law of `γ_n(r, M)` for uniform data in one triangle.
pub fn asymptotic_law(r: Expansion, m: &Bary3, basic: &BasicTriangleParams) -> Result<GammaLaw> {
    law_from_class(r, classify_m(r, m, basic))
}

/// Limiting law of the total domination number over `jm` triangles sharing the
/// same barycentric center.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiGammaLaw {
    pub jm: u32,
    #[serde(flatten)]
    pub variant: MultiVariant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum MultiVariant {
    Degenerate { value: u32 },
    /// `shift + Binomial(trials, q)`.
    ShiftedBinomial { shift: u32, trials: u32, q: f64 },
}

impl MultiGammaLaw {
    pub fn moments(&self) -> (f64, f64) {
        match &self.variant {
            MultiVariant::Degenerate { value } => (*value as f64, 0.0),
            MultiVariant::ShiftedBinomial { shift, trials, q } => {
                let n = *trials as f64;
                (*shift as f64 + n * q, n * q * (1.0 - q))
            }
        }
    }

    pub fn support(&self) -> (u32, u32) {
        match &self.variant {
            MultiVariant::Degenerate { value } => (*value, *value),
            MultiVariant::ShiftedBinomial { shift, trials, .. } => (*shift, shift + trials),
        }
    }
}

/// Lifts the single-triangle law to `jm` cells.
pub fn lift_law(law: &GammaLaw, jm: u32) -> Result<MultiGammaLaw> {
    if jm == 0 {
        return Err(PcdError::invalid("number of triangles must be at least 1"));
    }
    let variant = match law {
        GammaLaw::Degenerate { value, .. } => MultiVariant::Degenerate { value: value * jm },
        GammaLaw::TwoPlusBernoulli { q, .. } => MultiVariant::ShiftedBinomial { shift: 2 * jm, trials: jm, q: *q },
    };
    Ok(MultiGammaLaw { jm, variant })
}

/// Limiting law of `γ_n(r, M, J_m)` for fixed `J_m` triangles.
pub fn multi_law(r: Expansion, m: &Bary3, jm: u32) -> Result<MultiGammaLaw> {
    lift_law(&asymptotic_law(r, m, &BasicTriangleParams::equilateral())?, jm)
}
