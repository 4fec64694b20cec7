//! Python module `pcd`.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pcd_core::asymptotics::{asymptotic_law as law_1, multi_law, p_r as p_r_core, DEFAULT_TOL};
use pcd_core::domination::{domination_bruteforce, domination_exact, domination_multi as multi_core, PcdInstance};
use pcd_core::geom2::{convex_hull as hull_core, delaunay as delaunay_core, BasicTriangleParams, Point2, Triangle2};
use pcd_core::proximity::{classify_m_bary, tr_vertices_bary, Expansion, MSpec, ProximityParams, RValue};
use pcd_core::sim::{run_mc_with_threads, McConfig, Mode};
use pcd_core::PcdError;

fn py_err(e: PcdError) -> PyErr {
    match e {
        PcdError::Io { .. } | PcdError::Parse { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for pcd_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// `r` as a number or a string such as "4/3" or "inf".
#[derive(FromPyObject)]
enum RArg {
    Num(f64),
    Text(String),
}

impl RArg {
    fn value(&self) -> PyResult<RValue> {
        match self {
            RArg::Num(v) if v.is_infinite() => "inf".parse().py(),
            RArg::Num(v) => RValue::from_f64(*v).py(),
            RArg::Text(s) => s.parse().py(),
        }
    }
}

/// Center as a specification string or a barycentric triple.
#[derive(FromPyObject)]
enum MArg {
    Spec(String),
    Bary((f64, f64, f64)),
}

impl MArg {
    fn spec(&self) -> PyResult<MSpec> {
        match self {
            MArg::Spec(s) => s.parse().py(),
            MArg::Bary((a, b, c)) => Ok(MSpec::Bary { coords: [*a, *b, *c], exact: None }),
        }
    }
}

fn to_points(raw: Vec<(f64, f64)>) -> PyResult<Vec<Point2>> {
    raw.into_iter().map(|(x, y)| Point2::new(x, y).py()).collect()
}

fn xy(p: &Point2) -> (f64, f64) {
    (p.x(), p.y())
}

fn from_json<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

/// A non-degenerate triangle, stored counterclockwise.
#[pyclass(name = "Triangle", frozen, from_py_object)]
#[derive(Clone)]
struct PyTriangle(Triangle2);

#[pymethods]
impl PyTriangle {
    #[new]
    fn new(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> PyResult<Self> {
        Ok(Self(Triangle2::from_coords([a.0, a.1, b.0, b.1, c.0, c.1]).py()?))
    }

    #[staticmethod]
    fn equilateral() -> Self {
        Self(Triangle2::equilateral())
    }

    fn vertices(&self) -> Vec<(f64, f64)> {
        self.0.vertices().iter().map(xy).collect()
    }

    fn area(&self) -> f64 {
        self.0.area()
    }

    fn barycentric(&self, p: (f64, f64)) -> PyResult<(f64, f64, f64)> {
        let [a, b, c] = self.0.barycentric(&Point2::new(p.0, p.1).py()?).coords();
        Ok((a, b, c))
    }

    #[pyo3(signature = (p, tol=1e-12))]
    fn contains(&self, p: (f64, f64), tol: f64) -> PyResult<bool> {
        Ok(self.0.contains(&Point2::new(p.0, p.1).py()?, tol))
    }

    fn __repr__(&self) -> String {
        format!("Triangle({:?})", self.vertices())
    }
}

/// The proximity catch digraph of points in one triangle.
#[pyclass(name = "Digraph", frozen)]
struct PyDigraph(PcdInstance);

#[pymethods]
impl PyDigraph {
    #[new]
    #[pyo3(signature = (points, r, m=MArg::Spec("centroid".into()), triangle=None))]
    fn new(points: Vec<(f64, f64)>, r: RArg, m: MArg, triangle: Option<PyTriangle>) -> PyResult<Self> {
        let tri = triangle.map_or_else(Triangle2::equilateral, |t| t.0);
        let r = r.value()?;
        let center = m.spec()?.resolve(r.value, &tri).py()?;
        let params = ProximityParams::new(r.value, center).py()?;
        Ok(Self(PcdInstance::new(tri, params, to_points(points)?).py()?))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Out-neighbour lists.
    fn arcs(&self) -> Vec<Vec<usize>> {
        self.0.arcs().to_vec()
    }

    fn arc_count(&self) -> usize {
        self.0.arc_count()
    }

    /// `(gamma, witness)`.
    #[pyo3(signature = (bruteforce=false))]
    fn domination(&self, bruteforce: bool) -> PyResult<(usize, Vec<usize>)> {
        let res = if bruteforce { domination_bruteforce(&self.0) } else { domination_exact(&self.0) }.py()?;
        Ok((res.gamma, res.witness))
    }
}

#[pyfunction]
#[pyo3(signature = (r, tol=DEFAULT_TOL))]
fn p_r(py: Python<'_>, r: RArg, tol: f64) -> PyResult<f64> {
    let Expansion::Finite(v) = r.value()?.value else {
        return Err(PyValueError::new_err("p_r needs a finite r in (1, 3/2]"));
    };
    py.detach(|| p_r_core(v, tol)).py()
}

/// Vertices of `T_r` in `triangle` (default: equilateral), or `None` when empty.
#[pyfunction]
#[pyo3(signature = (r, triangle=None))]
fn tr_triangle(r: RArg, triangle: Option<PyTriangle>) -> PyResult<Option<Vec<(f64, f64)>>> {
    let tri = triangle.map_or_else(Triangle2::equilateral, |t| t.0);
    let Expansion::Finite(v) = r.value()?.value else { return Ok(None) };
    Ok(tr_vertices_bary(v).map(|bs| bs.iter().map(|b| xy(&tri.point_at(b))).collect()))
}

/// Position of `M` relative to `T_r`: "OutsideTr", "InteriorTr",
/// "BoundaryNonVertex" or "VertexOfTr".
#[pyfunction]
#[pyo3(signature = (r, m))]
fn classify_m(r: RArg, m: MArg) -> PyResult<String> {
    let r = r.value()?;
    let b = m.spec()?.resolve(r.value, &Triangle2::equilateral()).py()?;
    Ok(format!("{:?}", classify_m_bary(r.value, &b)))
}

#[pyfunction]
#[pyo3(signature = (r, m=MArg::Spec("centroid".into()), jm=None))]
fn asymptotic_law<'py>(py: Python<'py>, r: RArg, m: MArg, jm: Option<u32>) -> PyResult<Bound<'py, PyAny>> {
    let r = r.value()?;
    let b = m.spec()?.resolve(r.value, &Triangle2::equilateral()).py()?;
    match jm {
        Some(k) => from_json(py, &multi_law(r.value, &b, k).py()?),
        None => from_json(py, &law_1(r.value, &b, &BasicTriangleParams::equilateral()).py()?),
    }
}

/// `(gamma, witness)` for points in one triangle.
#[pyfunction]
#[pyo3(signature = (points, r, m=MArg::Spec("centroid".into()), triangle=None, bruteforce=false))]
fn domination(
    points: Vec<(f64, f64)>,
    r: RArg,
    m: MArg,
    triangle: Option<PyTriangle>,
    bruteforce: bool,
) -> PyResult<(usize, Vec<usize>)> {
    PyDigraph::new(points, r, m, triangle)?.domination(bruteforce)
}

/// Total domination number over the Delaunay cells of `anchors`.
#[pyfunction]
#[pyo3(signature = (anchors, data, r, m=MArg::Spec("centroid".into())))]
fn domination_multi<'py>(
    py: Python<'py>,
    anchors: Vec<(f64, f64)>,
    data: Vec<(f64, f64)>,
    r: RArg,
    m: MArg,
) -> PyResult<Bound<'py, PyDict>> {
    let r = r.value()?;
    let center = m.spec()?.resolve(r.value, &Triangle2::equilateral()).py()?;
    let params = ProximityParams::new(r.value, center).py()?;
    let res = multi_core(&to_points(anchors)?, &to_points(data)?, &params).py()?;
    let d = PyDict::new(py);
    d.set_item("total_gamma", res.total_gamma)?;
    d.set_item("kept", res.kept)?;
    d.set_item("discarded", res.discarded)?;
    d.set_item("cells", from_json(py, &res.cells)?)?;
    Ok(d)
}

/// Delaunay cells (vertex index triples, counterclockwise).
#[pyfunction]
fn delaunay(points: Vec<(f64, f64)>) -> PyResult<Vec<(usize, usize, usize)>> {
    let dt = delaunay_core(&to_points(points)?).py()?;
    Ok(dt.cells.iter().map(|c| (c[0], c[1], c[2])).collect())
}

/// Convex hull vertices, counterclockwise.
#[pyfunction]
fn convex_hull(points: Vec<(f64, f64)>) -> PyResult<Vec<(f64, f64)>> {
    Ok(hull_core(&to_points(points)?).py()?.iter().map(xy).collect())
}

/// Monte-Carlo distribution of the domination number; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (r, n, m="centroid", replicates=1000, seed=0, d=2, anchors=None, threads=None))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    r: RArg,
    n: Vec<usize>,
    m: &str,
    replicates: usize,
    seed: u64,
    d: usize,
    anchors: Option<usize>,
    threads: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = McConfig::new(r.value()?, m.parse().py()?, n, seed);
    cfg.replicates = replicates;
    cfg.d = d;
    if let Some(k) = anchors {
        cfg.mode = Mode::Multi { anchors: k };
    }
    let report = py.detach(|| run_mc_with_threads(&cfg, threads)).py()?;
    from_json(py, &report)
}

#[pymodule]
fn pcd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTriangle>()?;
    m.add_class::<PyDigraph>()?;
    m.add_function(wrap_pyfunction!(p_r, m)?)?;
    m.add_function(wrap_pyfunction!(tr_triangle, m)?)?;
    m.add_function(wrap_pyfunction!(classify_m, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_law, m)?)?;
    m.add_function(wrap_pyfunction!(domination, m)?)?;
    m.add_function(wrap_pyfunction!(domination_multi, m)?)?;
    m.add_function(wrap_pyfunction!(delaunay, m)?)?;
    m.add_function(wrap_pyfunction!(convex_hull, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
