//! Proximity catch digraphs and their exact domination numbers.
//!
//! Within a vertex region `R_M(y_j)` the proximity regions are nested: a
//! smaller `b_j(x)` gives a larger `N(x)`, and `x ∈ N(x')` whenever
//! `b_j(x) >= b_j(x')`. So the point `U_j` with the smallest `b_j` in region
//! `j` dominates everything any other point of that region dominates, and
//! replacing each member of a minimum dominating set by the `U_j` of its region
//! keeps it dominating. A minimum dominating set can therefore be found among
//! the at most `κ` candidates `{U_j}` (`κ = 3` in the plane), which is what
//! [`domination_exact`] searches. [`domination_bruteforce`] enumerates all
//! subsets and serves as its oracle.

use serde::{Deserialize, Serialize};

use crate::error::{PcdError, Result};
use crate::geom2::{delaunay, Bary3, DelaunayTriangulation, Point2, Triangle2};
use crate::proximity::{arc_predicate, vertex_region_of, ProximityParams};
use crate::BARY_TOL;

/// Largest instance accepted by the exhaustive oracle.
pub const BRUTEFORCE_MAX_N: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationResult {
    pub gamma: usize,
    /// A minimum dominating set (point indices, ascending).
    pub witness: Vec<usize>,
}

/// A triangle, proximity parameters and data points, with the derived arcs.
#[derive(Clone, Debug)]
pub struct PcdInstance {
    triangle: Triangle2,
    params: ProximityParams,
    points: Vec<Point2>,
    bary: Vec<Bary3>,
    arcs: Vec<Vec<usize>>,
}

impl PcdInstance {
    pub fn new(triangle: Triangle2, params: ProximityParams, points: Vec<Point2>) -> Result<Self> {
        let bary: Vec<Bary3> = points.iter().map(|p| triangle.barycentric(p)).collect();
        if let Some((index, b)) = bary.iter().enumerate().find(|(_, b)| !b.is_inside(BARY_TOL)) {
            return Err(PcdError::PointOutside { index, bary: b.coords() });
        }
        let arcs = build_arcs(&params, &bary);
        Ok(Self { triangle, params, points, bary, arcs })
    }

    pub fn triangle(&self) -> &Triangle2 {
        &self.triangle
    }

    pub fn params(&self) -> &ProximityParams {
        &self.params
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn bary(&self) -> &[Bary3] {
        &self.bary
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Out-neighbors of each point (excluding itself).
    pub fn arcs(&self) -> &[Vec<usize>] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    /// Does the closed out-neighborhood union of `set` cover every point?
    pub fn dominates(&self, set: &[usize]) -> bool {
        let mut covered = vec![false; self.len()];
        for &i in set {
            covered[i] = true;
            for &j in &self.arcs[i] {
                covered[j] = true;
            }
        }
        covered.into_iter().all(|c| c)
    }
}

/// `out[i] = { j != i : x_j ∈ N(x_i) }`.
pub fn build_arcs(params: &ProximityParams, bary: &[Bary3]) -> Vec<Vec<usize>> {
    bary.iter()
        .enumerate()
        .map(|(i, x)| {
            bary.iter()
                .enumerate()
                .filter(|&(j, z)| j != i && arc_predicate(params, x, z))
                .map(|(j, _)| j)
                .collect()
        })
        .collect()
}

/// Calls `visit` on every `size`-subset of `0..n` in lexicographic order
/// until it returns `true`; returns that subset.
pub(crate) fn first_subset(n: usize, size: usize, mut visit: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    if size > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if visit(&idx) {
            return Some(idx);
        }
        // advance to the next combination
        let mut i = size;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] < n - size + i {
                idx[i] += 1;
                for k in i + 1..size {
                    idx[k] = idx[k - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Candidate-set search shared by the planar and d-dimensional solvers.
///
/// `region(i)` gives `(region index, key)` for point `i`, where smaller keys
/// have larger proximity regions; `covers(c, z)` is the arc predicate from
/// point `c` to point `z` (closed: `covers(c, c)` must hold).
pub(crate) fn candidate_domination(
    n: usize,
    regions: usize,
    region: impl Fn(usize) -> (usize, f64),
    covers: impl Fn(usize, usize) -> bool,
) -> Result<DominationResult> {
    if n == 0 {
        return Err(PcdError::EmptyInput);
    }
    let mut best: Vec<Option<(f64, usize)>> = vec![None; regions];
    for i in 0..n {
        let (j, key) = region(i);
        match best[j] {
            Some((k, _)) if k <= key => {}
            _ => best[j] = Some((key, i)),
        }
    }
    let mut cand: Vec<usize> = best.iter().flatten().map(|&(_, i)| i).collect();
    cand.sort_unstable();
    let masks: Vec<u64> = (0..n)
        .map(|z| {
            cand.iter()
                .enumerate()
                .filter(|&(_, &c)| covers(c, z))
                .fold(0u64, |m, (k, _)| m | 1 << k)
        })
        .collect();
    for size in 1..=cand.len() {
        let hit = first_subset(cand.len(), size, |s| {
            let sm = s.iter().fold(0u64, |m, &k| m | 1 << k);
            masks.iter().all(|&m| m & sm != 0)
        });
        if let Some(s) = hit {
            return Ok(DominationResult { gamma: size, witness: s.iter().map(|&k| cand[k]).collect() });
        }
    }
    unreachable!("the full candidate set always dominates")
}

/// Exact domination number on barycentric data.
pub fn domination_exact_bary(params: &ProximityParams, bary: &[Bary3]) -> Result<DominationResult> {
    candidate_domination(
        bary.len(),
        3,
        |i| {
            let j = vertex_region_of(params, &bary[i]);
            (j, bary[i].get(j))
        },
        |c, z| c == z || arc_predicate(params, &bary[c], &bary[z]),
    )
}

/// Exact `γ` and a minimum dominating set via the region candidates.
pub fn domination_exact(instance: &PcdInstance) -> Result<DominationResult> {
    domination_exact_bary(&instance.params, &instance.bary)
}

/// Exhaustive search over subsets of increasing size on closed-neighborhood
/// bitmasks.
pub(crate) fn bruteforce_masks(closed: &[u32]) -> Result<DominationResult> {
    let n = closed.len();
    if n == 0 {
        return Err(PcdError::EmptyInput);
    }
    let all: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for size in 1..=n {
        let hit = first_subset(n, size, |s| s.iter().fold(0u32, |m, &i| m | closed[i]) == all);
        if let Some(witness) = hit {
            return Ok(DominationResult { gamma: size, witness });
        }
    }
    unreachable!("the whole vertex set dominates")
}

/// Minimum dominating set by exhaustive search (`n <= 25`).
pub fn domination_bruteforce(instance: &PcdInstance) -> Result<DominationResult> {
    let n = instance.len();
    if n > BRUTEFORCE_MAX_N {
        return Err(PcdError::TooLarge { n, max: BRUTEFORCE_MAX_N });
    }
    let closed: Vec<u32> = instance
        .arcs
        .iter()
        .enumerate()
        .map(|(i, out)| out.iter().fold(1u32 << i, |m, &j| m | 1 << j))
        .collect();
    bruteforce_masks(&closed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub cell: usize,
    /// Indices (into the data list) of the points assigned to this cell.
    pub points: Vec<usize>,
    pub gamma: usize,
    /// Minimum dominating set, as data indices.
    pub witness: Vec<usize>,
    pub arcs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiTriangleResult {
    pub cells: Vec<CellResult>,
    pub total_gamma: usize,
    pub kept: usize,
    pub discarded: usize,
    #[serde(skip)]
    pub triangulation: Option<DelaunayTriangulation>,
}

/// Domination number of the PCD over the Delaunay triangulation of `anchors`.
///
/// Points outside the convex hull are discarded; points on shared edges go to
/// the cell with the smallest index. In each cell the center has the same
/// barycentric coordinates as `params.m()` relative to the cell's
/// counterclockwise vertex order.
pub fn domination_multi(anchors: &[Point2], data: &[Point2], params: &ProximityParams) -> Result<MultiTriangleResult> {
    let dt = delaunay(anchors)?;
    domination_on_triangulation(dt, data, params)
}

pub fn domination_on_triangulation(
    dt: DelaunayTriangulation,
    data: &[Point2],
    params: &ProximityParams,
) -> Result<MultiTriangleResult> {
    let tris = dt.triangles();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); tris.len()];
    let mut discarded = 0;
    for (i, p) in data.iter().enumerate() {
        match tris.iter().position(|t| t.contains(p, BARY_TOL)) {
            Some(c) => members[c].push(i),
            None => discarded += 1,
        }
    }
    let mut cells = Vec::with_capacity(tris.len());
    for (c, idx) in members.into_iter().enumerate() {
        if idx.is_empty() {
            cells.push(CellResult { cell: c, points: idx, gamma: 0, witness: Vec::new(), arcs: 0 });
            continue;
        }
        let pts: Vec<Point2> = idx.iter().map(|&i| data[i]).collect();
        let inst = PcdInstance::new(tris[c], *params, pts)?;
        let res = domination_exact(&inst)?;
        cells.push(CellResult {
            cell: c,
            witness: res.witness.iter().map(|&k| idx[k]).collect(),
            points: idx,
            gamma: res.gamma,
            arcs: inst.arc_count(),
        });
    }
    let total_gamma = cells.iter().map(|c| c.gamma).sum();
    Ok(MultiTriangleResult {
        total_gamma,
        kept: data.len() - discarded,
        discarded,
        cells,
        triangulation: Some(dt),
    })
}
