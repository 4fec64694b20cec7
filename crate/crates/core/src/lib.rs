//! # pcd-core
//!
//! r-factor proportional-edge proximity catch digraphs (PCDs) on triangles and
//! Delaunay triangulations.
//!
//! The crate is organised bottom-up:
//!
//! - [`geom2`]: points, triangles, barycentric coordinates, affine reductions,
//!   Delaunay triangulation, convex hull and uniform sampling.
//! - [`proximity`]: M-vertex regions, the proximity region `N_PE^r(x, M)` as an
//!   arc predicate, the inner triangle of centers, superset and Γ₁ regions.
//! - [`domination`]: digraph construction and exact domination numbers for one
//!   triangle or a whole triangulation, with a brute-force oracle.
//! - [`asymptotics`]: numerical evaluation of `p_r` and the limiting law of the
//!   domination number.
//! - [`simplexd`]: the centroid-centred construction in a d-simplex.
//! - [`sim`]: seeded, thread-count independent Monte-Carlo tables.
//! - [`io`]: CSV/JSON point sets and triangulation export.
//!
//! All region tests are carried out in barycentric coordinates, which makes the
//! digraph invariant under affine maps of the triangle.

pub mod asymptotics;
pub mod domination;
pub mod error;
pub mod geom2;
pub mod io;
pub mod proximity;
pub mod quadrature;
pub mod rng;
pub mod simplexd;
pub mod sim;

pub use asymptotics::{asymptotic_law, law_moments, multi_law, p_r, GammaLaw, MultiGammaLaw};
pub use domination::{
    domination_bruteforce, domination_exact, domination_multi, DominationResult,
    MultiTriangleResult, PcdInstance,
};

pub use sim::{run_mc, McConfig, McReport};
pub use error::{PcdError, Result};
pub use geom2::{Bary3, BasicTriangleParams, Point2, Triangle2};
pub use proximity::{Expansion, MClass, ProximityParams};


/// Absolute slack, in barycentric units, used by every region-membership test.
pub const BARY_TOL: f64 = 1e-12;
