//! Python bindings. Vertex indices are 0-based, as in the Rust API.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use kshg_core::bounds::{self, RealizabilityPolicy, DEFAULT_WHEEL7_DELTA};
use kshg_core::cli::format;
use kshg_core::expansion::{self, Assignment, BruteForceConfig, PropagationOutcome, StepReason};
use kshg_core::hypergraph::{self, Family, FamilySpec, Weights};
use kshg_core::linalg3::{self, Complex64};
use kshg_core::mis::{MisConfig, DEFAULT_MIS_LIMIT};
use kshg_core::Error;

create_exception!(kshg, CapacityError, PyRuntimeError, "Input exceeds a solver capacity limit.");

fn to_py(e: Error) -> PyErr {
    if e.is_capacity() {
        CapacityError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

#[pyclass(name = "Ray", frozen, from_py_object)]
#[derive(Clone)]
struct PyRay(linalg3::Ray);

#[pymethods]
impl PyRay {
    /// Three complex amplitudes with norm 1 within 1e-6, or any non-zero
    /// vector when `normalize` is true.
    #[new]
    #[pyo3(signature = (amplitudes, normalize = false))]
    fn new(amplitudes: [Complex64; 3], normalize: bool) -> PyResult<Self> {
        let ray = if normalize { linalg3::Ray::normalized(amplitudes) } else { linalg3::Ray::new(amplitudes) };
        ray.map(PyRay).map_err(to_py)
    }

    #[staticmethod]
    fn from_real(x: f64, y: f64, z: f64) -> PyResult<Self> {
        linalg3::Ray::from_real(x, y, z).map(PyRay).map_err(to_py)
    }

    #[getter]
    fn amplitudes(&self) -> [Complex64; 3] {
        *self.0.amplitudes()
    }

    fn overlap(&self, other: &PyRay) -> f64 {
        linalg3::overlap(&self.0, &other.0)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "HyperGraph", frozen, from_py_object)]
#[derive(Clone)]
struct PyHyperGraph(hypergraph::HyperGraph);

#[pymethods]
impl PyHyperGraph {
    #[new]
    fn new(vertex_count: usize, edges: Vec<(usize, usize, u32)>) -> PyResult<Self> {
        hypergraph::HyperGraph::new(vertex_count, edges).map(PyHyperGraph).map_err(to_py)
    }

    /// Parses the `vertices k` / `edge i j n` text format (1-based).
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        format::parse_hypergraph(text).map(PyHyperGraph).map_err(to_py)
    }

    fn to_text(&self) -> String {
        format::write_hypergraph(&self.0)
    }

    fn with_rays(&self, rays: Vec<PyRay>) -> PyResult<Self> {
        let rays = rays.into_iter().map(|r| r.0).collect();
        self.0.clone().with_rays(rays).map(PyHyperGraph).map_err(to_py)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize, u32)> {
        self.0.edges().iter().map(|e| (e.i, e.j, e.weight)).collect()
    }

    #[getter]
    fn weight_sum(&self) -> u64 {
        self.0.weight_sum()
    }

    fn __repr__(&self) -> String {
        format!("HyperGraph(vertices={}, edges={})", self.0.vertex_count(), self.0.edges().len())
    }
}

#[pyclass(name = "ExpandedGraph", frozen)]
struct PyExpandedGraph(expansion::ExpandedGraph);

#[pymethods]
impl PyExpandedGraph {
    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.vertices().iter().map(ToString::to_string).collect()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().to_vec()
    }

    #[getter]
    fn bases(&self) -> Vec<[usize; 3]> {
        self.0.bases().to_vec()
    }

    fn evaluate(&self, values: Vec<u8>) -> PyResult<i64> {
        let a = Assignment::from_bits(&values).map_err(to_py)?;
        expansion::evaluate(&self.0, &a).map_err(to_py)
    }

    #[pyo3(signature = (max_bits = None))]
    fn brute_force_max(&self, max_bits: Option<usize>) -> PyResult<i64> {
        let config = max_bits.map_or_else(BruteForceConfig::from_env, |max_bits| BruteForceConfig { max_bits });
        expansion::brute_force_max(&self.0, &config).map_err(to_py)
    }

    #[pyo3(signature = (mis_limit = DEFAULT_MIS_LIMIT))]
    fn mis_oracle(&self, mis_limit: usize) -> PyResult<i64> {
        expansion::mis_oracle(&self.0, &MisConfig::with_limit(mis_limit)).map_err(to_py)
    }

    /// Propagates forced 0/1 values. Returns `(contradiction, trace)` with one
    /// `label = value (reason)` string per step.
    fn propagate(&self, forced: Vec<(usize, u8)>) -> PyResult<(bool, Vec<String>)> {
        let outcome = expansion::ks_propagate(&self.0, &forced).map_err(to_py)?;
        let label = |v: usize| self.0.vertices()[v].to_string();
        let trace = outcome
            .trace()
            .iter()
            .map(|s| {
                let why = match s.reason {
                    StepReason::Given => "given".to_string(),
                    StepReason::Neighbor(u) => format!("orthogonal to {}", label(u)),
                    StepReason::Basis(b) => format!("basis {} {} {}", label(b[0]), label(b[1]), label(b[2])),
                };
                format!("{} = {} ({why})", label(s.vertex), u8::from(s.value))
            })
            .collect();
        Ok((matches!(outcome, PropagationOutcome::Contradiction { .. }), trace))
    }

    fn to_dot(&self) -> String {
        format::write_dot(&self.0)
    }
}

#[pyclass(name = "ViolationReport", frozen, get_all)]
struct PyViolationReport {
    classical_bound: u64,
    independence: u64,
    witness: Vec<usize>,
    lambda_min: f64,
    lambda_max: f64,
    quantum_min: f64,
    quantum_max: f64,
    classification: String,
    margin: f64,
    warnings: Vec<String>,
}

fn family(name: &str, k: Option<usize>, mx: Option<usize>, my: Option<usize>) -> PyResult<Family> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| PyValueError::new_err(format!("family '{name}' needs {flag}")))
    };
    let depth = |v: Option<usize>| -> PyResult<u32> {
        u32::try_from(need(v, "k")?).map_err(|_| PyValueError::new_err("depth too large"))
    };
    Ok(match name {
        "complete" => Family::Complete { k: need(k, "k")? },
        "linear" => Family::Linear { k: need(k, "k")? },
        "cyclic" => Family::Cyclic { k: need(k, "k")? },
        "fractal-tree" => Family::FractalTree { depth: depth(k)? },
        "fractal-cyclic" => Family::FractalCyclic { depth: depth(k)? },
        "square-lattice" => Family::SquareLattice { mx: need(mx, "mx")?, my: need(my, "my")? },
        "torus-lattice" => Family::TorusLattice { mx: need(mx, "mx")?, my: need(my, "my")? },
        "wheel7" => Family::Wheel7,
        other => return Err(PyValueError::new_err(format!("unknown family '{other}'"))),
    })
}

/// Generates a family member. Weights come from `weights` (one per edge),
/// `rays` (minimal weights, optionally capped) or the uniform `weight`.
#[pyfunction]
#[pyo3(signature = (name, k = None, mx = None, my = None, weight = 1, weights = None, rays = None, cap = None))]
#[allow(clippy::too_many_arguments)]
fn generate(
    name: &str,
    k: Option<usize>,
    mx: Option<usize>,
    my: Option<usize>,
    weight: u32,
    weights: Option<Vec<u32>>,
    rays: Option<Vec<PyRay>>,
    cap: Option<u32>,
) -> PyResult<PyHyperGraph> {
    let weights = match (weights, rays) {
        (Some(list), None) => Weights::PerEdge(list),
        (None, Some(rays)) => Weights::FromRays { rays: rays.into_iter().map(|r| r.0).collect(), cap },
        (None, None) => Weights::Uniform(weight),
        (Some(_), Some(_)) => return Err(PyValueError::new_err("give either weights or rays, not both")),
    };
    let spec = FamilySpec { family: family(name, k, mx, my)?, weights };
    hypergraph::generate(&spec).map(PyHyperGraph).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (name, k = None, mx = None, my = None))]
fn closed_form_independence(name: &str, k: Option<usize>, mx: Option<usize>, my: Option<usize>) -> PyResult<usize> {
    let spec = FamilySpec::uniform(family(name, k, mx, my)?, 1);
    hypergraph::closed_form_independence(&spec).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (rays, cap = None))]
fn build_from_rays(rays: Vec<PyRay>, cap: Option<u32>) -> PyResult<PyHyperGraph> {
    let rays: Vec<_> = rays.into_iter().map(|r| r.0).collect();
    hypergraph::build_from_rays(&rays, cap).map(PyHyperGraph).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (overlap, cap = None))]
fn hyper_edge_weight(overlap: f64, cap: Option<u32>) -> PyResult<Option<u32>> {
    hypergraph::hyper_edge_weight(overlap, cap).map_err(to_py)
}

/// Returns `(bound, witness)` with `bound = 2 * sum(n) + |U|`.
#[pyfunction]
#[pyo3(signature = (h, mis_limit = DEFAULT_MIS_LIMIT))]
fn classical_bound(h: &PyHyperGraph, mis_limit: usize) -> PyResult<(u64, Vec<usize>)> {
    let b = bounds::classical_bound(&h.0, &MisConfig::with_limit(mis_limit)).map_err(to_py)?;
    Ok((b.total, b.witness))
}

#[pyfunction]
fn expand(h: &PyHyperGraph) -> PyExpandedGraph {
    PyExpandedGraph(expansion::expand(&h.0))
}

#[pyfunction]
#[pyo3(signature = (h, allow_unrealizable = false, mis_limit = DEFAULT_MIS_LIMIT))]
fn classify(h: &PyHyperGraph, allow_unrealizable: bool, mis_limit: usize) -> PyResult<PyViolationReport> {
    let policy = if allow_unrealizable { RealizabilityPolicy::Warn } else { RealizabilityPolicy::Enforce };
    let v = bounds::classify(&h.0, &MisConfig::with_limit(mis_limit), policy).map_err(to_py)?;
    Ok(PyViolationReport {
        classical_bound: v.classical.total,
        independence: v.classical.independence_term,
        witness: v.classical.witness,
        lambda_min: v.quantum.lambda_min,
        lambda_max: v.quantum.lambda_max,
        quantum_min: v.quantum.lo,
        quantum_max: v.quantum.hi,
        classification: v.classification.as_str().to_string(),
        margin: v.margin,
        warnings: v.quantum.warnings,
    })
}

#[pyfunction]
#[pyo3(signature = (delta = DEFAULT_WHEEL7_DELTA))]
fn wheel7_demo_rays(delta: f64) -> Vec<PyRay> {
    bounds::wheel7_demo_rays(delta).into_iter().map(PyRay).collect()
}

/// Sum of the rank-1 projectors as nested lists of complex numbers.
#[pyfunction]
fn projector_sum(rays: Vec<PyRay>) -> PyResult<[[Complex64; 3]; 3]> {
    let rays: Vec<_> = rays.into_iter().map(|r| r.0).collect();
    linalg3::projector_sum(&rays).map(|m| *m.entries()).map_err(to_py)
}

/// Ascending eigenvalues of a Hermitian 3x3 matrix.
#[pyfunction]
fn eigenvalues(matrix: [[Complex64; 3]; 3]) -> PyResult<[f64; 3]> {
    let m = linalg3::Hermitian3::new(matrix).map_err(to_py)?;
    Ok(linalg3::eigensystem(&m).values)
}

#[pyfunction]
#[pyo3(signature = (text, normalize = false))]
fn parse_rays(text: &str, normalize: bool) -> PyResult<Vec<PyRay>> {
    Ok(format::parse_rays(text, normalize).map_err(to_py)?.into_iter().map(PyRay).collect())
}

/// Runs the command-line interface; returns `(status, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = kshg_core::cli::run(std::iter::once("kshg".to_string()).chain(args));
    (out.status, out.stdout, out.stderr)
}

#[pymodule]
fn kshg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CapacityError", m.py().get_type::<CapacityError>())?;
    m.add_class::<PyRay>()?;
    m.add_class::<PyHyperGraph>()?;
    m.add_class::<PyExpandedGraph>()?;
    m.add_class::<PyViolationReport>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_independence, m)?)?;
    m.add_function(wrap_pyfunction!(build_from_rays, m)?)?;
    m.add_function(wrap_pyfunction!(hyper_edge_weight, m)?)?;
    m.add_function(wrap_pyfunction!(classical_bound, m)?)?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(wheel7_demo_rays, m)?)?;
    m.add_function(wrap_pyfunction!(projector_sum, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(parse_rays, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
