//! M-vertex regions, the r-factor proportional-edge proximity region, the
//! inner triangle of centers `T_r`, and superset / Γ₁ regions.
//!
//! Everything is phrased in barycentric coordinates `b = (b1, b2, b3)` of the
//! containing triangle. `b_j` is the distance to the edge opposite vertex `j`
//! divided by the height from vertex `j`, so:
//!
//! - the vertex region of `y_j` for a center `M = (m1, m2, m3)` is
//!   `{x : b_j(x)/m_j >= b_k(x)/m_k for all k}`;
//! - for `x` in the region of `y_j`, `N(x)` is the triangle with vertex `y_j`
//!   and opposite side parallel to `e_j` at distance `r (1 - b_j(x))`, clipped
//!   to the triangle, i.e. `z ∈ N(x) ⇔ 1 - b_j(z) <= r (1 - b_j(x))`.
//!
//! Region indices are 0-based: region `j` belongs to vertex `v_{j+1}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{PcdError, Result};
use crate::geom2::{Bary3, BasicTriangleParams, Point2, Triangle2};
use crate::BARY_TOL;

/// Expansion factor `r ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Expansion {
    Finite(f64),
    Infinite,
}

impl Expansion {
    pub fn new(r: f64) -> Result<Self> {
        if r == f64::INFINITY {
            return Ok(Expansion::Infinite);
        }
        if !(r >= 1.0 && r.is_finite()) {
            return Err(PcdError::invalid(format!("expansion factor r = {r} must satisfy r >= 1")));
        }
        Ok(Expansion::Finite(r))
    }

    pub fn value(&self) -> f64 {
        match self {
            Expansion::Finite(r) => *r,
            Expansion::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Expansion::Infinite)
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expansion::Finite(r) => write!(f, "{r}"),
            Expansion::Infinite => f.write_str("inf"),
        }
    }
}

/// Parses `inf`, a fraction `p/q`, or a decimal into an exact rational when
/// possible. `None` for `inf`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() || body.contains(['e', 'E']) {
        return None;
    }
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let v = BigRational::new(digits, den);
    Some(if neg { -v } else { v })
}

/// `r` as given on a command line or in a config: the float value plus its
/// exact rational form when the text was a fraction or terminating decimal.
#[derive(Clone, Debug, PartialEq)]
pub struct RValue {
    pub value: Expansion,
    pub exact: Option<BigRational>,
    text: String,
}

impl RValue {
    pub fn from_f64(r: f64) -> Result<Self> {
        Ok(Self {
            value: Expansion::new(r)?,
            exact: None,
            text: if r.is_infinite() { "inf".into() } else { format!("{r}") },
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

impl FromStr for RValue {
    type Err = PcdError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "+inf" | "∞") {
            return Ok(Self { value: Expansion::Infinite, exact: None, text: "inf".into() });
        }
        let exact = parse_rational(t);
        let v = match &exact {
            Some(q) => q.to_f64().ok_or_else(|| PcdError::invalid(format!("r = {t} not representable")))?,
            None => t
                .parse::<f64>()
                .map_err(|_| PcdError::invalid(format!("cannot parse r = {t:?}")))?,
        };
        Ok(Self { value: Expansion::new(v)?, exact, text: t.to_string() })
    }
}

impl Serialize for RValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match (&self.value, &self.exact) {
            (Expansion::Infinite, _) => s.serialize_str("inf"),
            (Expansion::Finite(_), Some(_)) if self.text.contains('/') => s.serialize_str(&self.text),
            (Expansion::Finite(r), _) => s.serialize_f64(*r),
        }
    }
}

impl<'de> Deserialize<'de> for RValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(v) => RValue::from_str(&format!("{v}")),
            Raw::Text(t) => RValue::from_str(&t),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Parameters of `N_PE^r(·, M)`: expansion factor and an interior center.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProximityParams {
    r: Expansion,
    m: Bary3,
}

impl ProximityParams {
    pub fn new(r: Expansion, m: Bary3) -> Result<Self> {
        if let Expansion::Finite(v) = r {
            Expansion::new(v)?;
        }
        if !m.is_interior() {
            return Err(PcdError::invalid(format!(
                "center M = {:?} must be strictly inside the triangle",
                m.coords()
            )));
        }
        Ok(Self { r, m })
    }

    pub fn centroid(r: Expansion) -> Self {
        Self { r, m: Bary3::centroid() }
    }

    pub fn r(&self) -> Expansion {
        self.r
    }

    pub fn m(&self) -> Bary3 {
        self.m
    }

    pub fn with_r(&self, r: Expansion) -> Self {
        Self { r, m: self.m }
    }
}

/// Index of the M-vertex region containing `b`: the `j` maximizing `b_j/m_j`,
/// ties to the smallest index.
pub fn vertex_region_of(params: &ProximityParams, b: &Bary3) -> usize {
    let m = params.m.coords();
    let ratio: [f64; 3] = std::array::from_fn(|j| b.get(j) / m[j]);
    let max = ratio.iter().cloned().fold(f64::MIN, f64::max);
    let slack = BARY_TOL * max.abs().max(1.0);
    (0..3).find(|&j| ratio[j] >= max - slack).unwrap_or(0)
}

#[inline]
fn is_vertex(b: &Bary3, j: usize) -> bool {
    b.get(j) >= 1.0 - BARY_TOL
}

/// Is there an arc `x → z`, i.e. `z ∈ N_PE^r(x, M)`?
///
/// A point sitting on a vertex `y_j` has `N = {y_j}` for every `r`; `N` never
/// reaches outside the closed triangle.
pub fn arc_predicate(params: &ProximityParams, x: &Bary3, z: &Bary3) -> bool {
    if !z.is_inside(BARY_TOL) {
        return false;
    }
    let j = vertex_region_of(params, x);
    if is_vertex(x, j) {
        return is_vertex(z, j);
    }
    match params.r {
        Expansion::Infinite => true,
        Expansion::Finite(r) => 1.0 - z.get(j) <= r * (1.0 - x.get(j)) + BARY_TOL,
    }
}

/// Is `N_PE^r(x, M)` the whole triangle?
pub fn superset_contains(params: &ProximityParams, x: &Bary3) -> bool {
    let j = vertex_region_of(params, x);
    if is_vertex(x, j) {
        return false;
    }
    match params.r {
        Expansion::Infinite => true,
        Expansion::Finite(r) => x.get(j) <= 1.0 - 1.0 / r + BARY_TOL,
    }
}

/// Inner triangle `T_r = T(t1(r), t2(r), t3(r))` in the basic triangle.
///
/// `vertices` is `None` for `r > 3/2`; at `r = 3/2` the three vertices
/// coincide.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrTriangle {
    pub r: f64,
    pub basic: BasicTriangleParams,
    pub vertices: Option<[Point2; 3]>,
}

impl TrTriangle {
    /// Nonempty with positive area.
    pub fn is_proper(&self) -> bool {
        self.vertices.is_some() && self.r < 1.5
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_none()
    }

    /// Slacks of the three defining half-planes at `p`:
    /// `y >= c2 (r-1)/r`, `y <= c2 (1 - r x)/(r (1 - c1))`,
    /// `y <= c2 (r (x - 1) + 1)/(r c1)`; each scaled by `1/c2`.
    pub fn constraint_slacks(&self, p: &Point2) -> [f64; 3] {
        let (c1, c2, r) = (self.basic.c1(), self.basic.c2(), self.r);
        let (x, y) = (p.x(), p.y());
        [
            (y - c2 * (r - 1.0) / r) / c2,
            (c2 * (1.0 - r * x) / (r * (1.0 - c1)) - y) / c2,
            (c2 * (r * (x - 1.0) + 1.0) / (r * c1) - y) / c2,
        ]
    }
}

/// Vertices of `T_r` for the basic triangle with parameters `basic`.
///
/// `t1 = ((r-1)(1+c1)/r, c2(r-1)/r)`, `t2 = ((2-r+c1(r-1))/r, c2(r-1)/r)`,
/// `t3 = ((c1(2-r)+r-1)/r, c2(2-r)/r)`. The ordinate of `t3` is where the two
/// upper boundary lines meet.
pub fn tr_triangle(r: f64, basic: &BasicTriangleParams) -> Result<TrTriangle> {
    if !r.is_finite() || r < 1.0 {
        return Err(PcdError::invalid(format!("T_r requires finite r >= 1, got {r}")));
    }
    let (c1, c2) = (basic.c1(), basic.c2());
    let vertices = (r <= 1.5).then(|| {
        [
            Point2::raw((r - 1.0) * (1.0 + c1) / r, c2 * (r - 1.0) / r),
            Point2::raw((2.0 - r + c1 * (r - 1.0)) / r, c2 * (r - 1.0) / r),
            Point2::raw((c1 * (2.0 - r) + r - 1.0) / r, c2 * (2.0 - r) / r),
        ]
    });
    Ok(TrTriangle { r, basic: *basic, vertices })
}

/// Barycentric form of the vertices of `T_r`: with `s = (r-1)/r`,
/// `t_j` has `1 - 2s` in slot `j` and `s` elsewhere. Shape independent.
pub fn tr_vertices_bary(r: f64) -> Option<[Bary3; 3]> {
    if !(1.0..=1.5).contains(&r) {
        return None;
    }
    let s = (r - 1.0) / r;
    let big = 1.0 - 2.0 * s;
    Some([
        Bary3::raw([big, s, s]),
        Bary3::raw([s, big, s]),
        Bary3::raw([s, s, big]),
    ])
}

/// Location of the center `M` relative to `T_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MClass {
    OutsideTr,
    InteriorTr,
    BoundaryNonVertex,
    VertexOfTr,
}

/// Tolerance of the floating-point classification of `M`.
pub const CLASSIFY_TOL: f64 = 1e-9;

fn class_from_slacks(slacks: [f64; 3], tol: f64) -> MClass {
    if slacks.iter().any(|&s| s < -tol) {
        return MClass::OutsideTr;
    }
    match slacks.iter().filter(|&&s| s <= tol).count() {
        0 => MClass::InteriorTr,
        1 => MClass::BoundaryNonVertex,
        _ => MClass::VertexOfTr,
    }
}

/// Classifies `M` against `T_r` by the Cartesian half-plane description in
/// the basic triangle.
pub fn classify_m(r: Expansion, m: &Bary3, basic: &BasicTriangleParams) -> MClass {
    let Expansion::Finite(r) = r else {
        return MClass::OutsideTr;
    };
    if r > 1.5 {
        return MClass::OutsideTr;
    }
    let tr = tr_triangle(r, basic).expect("finite r >= 1");
    let p = basic.triangle().point_at(m);
    let [s1, s2, s3] = tr.constraint_slacks(&p);
    // back to barycentric scale so one tolerance fits every shape
    class_from_slacks([s1, s2 * (1.0 - basic.c1()), s3 * basic.c1()], CLASSIFY_TOL)
}

/// Same classification computed directly from `min_j (m_j) - (r-1)/r`.
pub fn classify_m_bary(r: Expansion, m: &Bary3) -> MClass {
    let Expansion::Finite(r) = r else {
        return MClass::OutsideTr;
    };
    let s = (r - 1.0) / r;
    class_from_slacks(m.coords().map(|b| b - s), CLASSIFY_TOL)
}

/// Exact classification for rational `r` and `M`.
pub fn classify_m_exact(r: &BigRational, m: &[BigRational; 3]) -> Result<MClass> {
    if r < &BigRational::one() {
        return Err(PcdError::invalid("r must be >= 1"));
    }
    let total = m.iter().fold(BigRational::zero(), |acc, x| acc + x);
    if total != BigRational::one() || m.iter().any(|x| !x.is_positive()) {
        return Err(PcdError::invalid("M must have positive barycentric coordinates summing to 1"));
    }
    let s = (r - BigRational::one()) / r;
    let diffs: Vec<BigRational> = m.iter().map(|x| x - &s).collect();
    if diffs.iter().any(|d| d.is_negative()) {
        return Ok(MClass::OutsideTr);
    }
    Ok(match diffs.iter().filter(|d| d.is_zero()).count() {
        0 => MClass::InteriorTr,
        1 => MClass::BoundaryNonVertex,
        _ => MClass::VertexOfTr,
    })
}

/// Per-region ceilings of the Γ₁-region of a point set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gamma1Thresholds {
    /// `τ_j = 1 - (1 - β_j)/r`.
    pub tau: [f64; 3],
    /// `β_j`: smallest j-th barycentric coordinate over the set.
    pub beta: [f64; 3],
}

pub fn gamma1_thresholds(params: &ProximityParams, points: &[Bary3]) -> Result<Gamma1Thresholds> {
    if points.is_empty() {
        return Err(PcdError::EmptyInput);
    }
    let mut beta = [f64::INFINITY; 3];
    for b in points {
        for (j, bj) in beta.iter_mut().enumerate() {
            *bj = bj.min(b.get(j));
        }
    }
    let tau = beta.map(|bj| match params.r {
        Expansion::Infinite => 1.0,
        Expansion::Finite(r) => 1.0 - (1.0 - bj) / r,
    });
    Ok(Gamma1Thresholds { tau, beta })
}

/// Does `N(z)` contain the whole generating set?
pub fn gamma1_contains(params: &ProximityParams, th: &Gamma1Thresholds, z: &Bary3) -> bool {
    let j = vertex_region_of(params, z);
    if is_vertex(z, j) {
        return th.beta[j] >= 1.0 - BARY_TOL;
    }
    z.get(j) <= th.tau[j] + BARY_TOL
}

/// Indices of the points closest to each edge (smallest `b_j`), ties to the
/// smallest index.
pub fn edge_extrema(points: &[Bary3]) -> Result<[usize; 3]> {
    if points.is_empty() {
        return Err(PcdError::EmptyInput);
    }
    let mut idx = [0usize; 3];
    for (i, b) in points.iter().enumerate().skip(1) {
        for j in 0..3 {
            if b.get(j) < points[idx[j]].get(j) {
                idx[j] = i;
            }
        }
    }
    Ok(idx)
}

/// How the center `M` is specified on command lines and in configs.
#[derive(Clone, Debug, PartialEq)]
pub enum MSpec {
    Centroid,
    /// Vertex `t_{j+1}(r)` of `T_r`.
    TrVertex(usize),
    Bary { coords: [f64; 3], exact: Option<[BigRational; 3]> },
    /// Cartesian point in the working triangle.
    Point(f64, f64),
}

impl MSpec {
    /// Barycentric center for expansion `r` in `tri`.
    pub fn resolve(&self, r: Expansion, tri: &Triangle2) -> Result<Bary3> {
        let m = match self {
            MSpec::Centroid => Bary3::centroid(),
            MSpec::TrVertex(j) => {
                let Expansion::Finite(rv) = r else {
                    return Err(PcdError::invalid("T_r is empty for r = inf"));
                };
                let v = tr_vertices_bary(rv).ok_or_else(|| {
                    PcdError::invalid(format!("T_r is empty for r = {rv} > 3/2; t{} undefined", j + 1))
                })?;
                v[*j]
            }
            MSpec::Bary { coords: [a, b, c], .. } => Bary3::new(*a, *b, *c)?,
            MSpec::Point(x, y) => tri.barycentric(&Point2::new(*x, *y)?),
        };
        if !m.is_interior() {
            return Err(PcdError::invalid(format!("center {self} is not strictly inside the triangle")));
        }
        Ok(m)
    }

    /// Exact barycentric center when both `r` and the specification are rational.
    pub fn resolve_exact(&self, r: Option<&BigRational>) -> Option<[BigRational; 3]> {
        match self {
            MSpec::Centroid => {
                let third = BigRational::new(1.into(), 3.into());
                Some([third.clone(), third.clone(), third])
            }
            MSpec::TrVertex(j) => {
                let r = r?;
                let one = BigRational::one();
                let s = (r - &one) / r;
                let big = &one - &s - &s;
                let mut m = [s.clone(), s.clone(), s];
                m[*j] = big;
                Some(m)
            }
            MSpec::Bary { exact, .. } => exact.clone(),
            MSpec::Point(..) => None,
        }
    }

    pub fn is_centroid(&self) -> bool {
        matches!(self, MSpec::Centroid)
    }
}

impl fmt::Display for MSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MSpec::Centroid => f.write_str("centroid"),
            MSpec::TrVertex(j) => write!(f, "t{}", j + 1),
            MSpec::Bary { coords: [a, b, c], .. } => write!(f, "bary:{a},{b},{c}"),
            MSpec::Point(x, y) => write!(f, "point:{x},{y}"),
        }
    }
}

impl FromStr for MSpec {
    type Err = PcdError;

    /// `centroid | t1 | t2 | t3 | bary:m1,m2,m3 | point:x,y`
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || PcdError::invalid(format!("cannot parse M specification {t:?}"));
        match t {
            "centroid" | "MC" | "M_C" => return Ok(MSpec::Centroid),
            "t1" => return Ok(MSpec::TrVertex(0)),
            "t2" => return Ok(MSpec::TrVertex(1)),
            "t3" => return Ok(MSpec::TrVertex(2)),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("bary:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let mut coords = [0.0; 3];
            let mut exact = Vec::with_capacity(3);
            for (k, p) in parts.iter().enumerate() {
                let q = parse_rational(p);
                coords[k] = match &q {
                    Some(q) => q.to_f64().ok_or_else(bad)?,
                    None => p.parse().map_err(|_| bad())?,
                };
                exact.push(q);
            }
            let exact = exact.into_iter().collect::<Option<Vec<_>>>().map(|v| {
                let [a, b, c]: [BigRational; 3] = v.try_into().expect("three entries");
                [a, b, c]
            });
            return Ok(MSpec::Bary { coords, exact });
        }
        if let Some(rest) = t.strip_prefix("point:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(bad());
            }
            let x = parts[0].parse().map_err(|_| bad())?;
            let y = parts[1].parse().map_err(|_| bad())?;
            return Ok(MSpec::Point(x, y));
        }
        Err(bad())
    }
}

impl Serialize for MSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Bary([f64; 3]),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
            Raw::Bary(c) => Ok(MSpec::Bary { coords: c, exact: None }),
        }
    }
}

/// On-disk form of proximity parameters:
/// `{"r": <float|"inf"|"p/q">, "M": [m1,m2,m3]}` or
/// `{"r": …, "M_special": "centroid"|"t1"|"t2"|"t3"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsConfig {
    pub r: RValue,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<[f64; 3]>,
    #[serde(rename = "M_special", default, skip_serializing_if = "Option::is_none")]
    pub m_special: Option<String>,
}

impl ParamsConfig {
    pub fn m_spec(&self) -> Result<MSpec> {
        match (&self.m, &self.m_special) {
            (Some(c), None) => Ok(MSpec::Bary { coords: *c, exact: None }),
            (None, Some(s)) => match s.as_str() {
                "centroid" | "t1" | "t2" | "t3" => s.parse(),
                _ => Err(PcdError::invalid(format!("unknown M_special {s:?}"))),
            },
            (None, None) => Err(PcdError::invalid("params need either \"M\" or \"M_special\"")),
            (Some(_), Some(_)) => Err(PcdError::invalid("give only one of \"M\" and \"M_special\"")),
        }
    }

    pub fn to_params(&self) -> Result<ProximityParams> {
        let m = self.m_spec()?.resolve(self.r.value, &Triangle2::equilateral())?;
        ProximityParams::new(self.r.value, m)
    }
}
