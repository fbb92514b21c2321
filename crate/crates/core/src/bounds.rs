//! Classical bounds, the one-vertex-removal identity, quantum expectation
//! ranges and violation classification.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expansion::{evaluate, evaluate_c, expand, Assignment, ExpandedGraph};
use crate::hypergraph::{
    closed_form_independence, family_witness, generate, hyper_edge_weight, max_independent_set,
    remove_vertex, FamilySpec, HyperGraph,
};
use crate::linalg3::{eigensystem, overlap, projector, projector_sum, EigenDecomposition, Hermitian3, Ray};
use crate::mis::MisConfig;

/// Eigenvalues within this distance of `|U|` do not count as violations.
pub const CLASSIFICATION_TOLERANCE: f64 = 1e-9;

/// Rotation angle of the demo basis in [`wheel7_demo_rays`].
pub const DEFAULT_WHEEL7_DELTA: f64 = 0.005;

/// `total = weight_term + independence_term`, with `weight_term = 2 * sum(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalBound {
    pub total: u64,
    pub weight_term: u64,
    pub independence_term: u64,
    pub witness: Vec<usize>,
}

impl ClassicalBound {
    fn new(weight_sum: u64, witness: Vec<usize>) -> Self {
        let independence_term = witness.len() as u64;
        Self {
            total: 2 * weight_sum + independence_term,
            weight_term: 2 * weight_sum,
            independence_term,
            witness,
        }
    }
}

/// `2 * sum(n) + |U|` with `U` an exact maximum independent set.
pub fn classical_bound(h: &HyperGraph, config: &MisConfig) -> Result<ClassicalBound> {
    let mis = max_independent_set(h, config)?;
    Ok(ClassicalBound::new(h.weight_sum(), mis.witness))
}

/// The same bound from the family's closed-form independence number.
pub fn family_bound(spec: &FamilySpec) -> Result<ClassicalBound> {
    let h = generate(spec)?;
    let witness = family_witness(&spec.family)?;
    debug_assert_eq!(witness.len(), closed_form_independence(spec)?);
    Ok(ClassicalBound::new(h.weight_sum(), witness))
}

/// Both sides of `(|V| - 2) <G> = sum_i <G^i> - sum_i <P_i>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionCheck {
    pub holds: bool,
    pub lhs: i64,
    pub rhs: i64,
}

/// Evaluates both sides exactly. `<G>` is the core sum plus every hyper-edge
/// observable; each `<G^i>` is evaluated on the expansion of the subgraph
/// with vertex `i` removed, under the restricted assignment.
pub fn check_subgraph_decomposition(h: &HyperGraph, a: &Assignment) -> Result<DecompositionCheck> {
    let k = h.vertex_count();
    if k < 3 {
        return Err(Error::TooFewVertices { needed: 3, got: k });
    }
    let g = expand(h);
    if a.len() != g.vertices().len() {
        return Err(Error::AssignmentSize { given: a.len(), expected: g.vertices().len() });
    }
    let core_sum: i64 = (0..k).filter(|&v| a.get(v)).count() as i64;
    let observable = core_sum + fragment_sum(&g, a)?;
    let lhs = (k as i64 - 2) * observable;

    let mut subgraph_sum = 0i64;
    for removed in 0..k {
        let sub = remove_vertex(h, removed)?;
        let sub_expanded = expand(&sub.graph);
        let mut map: Vec<usize> = sub.vertex_map.clone();
        for (new_edge, &old_edge) in sub.edge_map.iter().enumerate() {
            let new_span = &sub_expanded.fragments()[new_edge];
            let old_span = &g.fragments()[old_edge];
            debug_assert_eq!(new_span.aux.len(), old_span.aux.len());
            debug_assert_eq!(new_span.aux.start, map.len());
            map.extend(old_span.aux.clone());
        }
        subgraph_sum += evaluate(&sub_expanded, &a.restrict(&map))?;
    }
    let rhs = subgraph_sum - core_sum;
    Ok(DecompositionCheck { holds: lhs == rhs, lhs, rhs })
}

fn fragment_sum(g: &ExpandedGraph, a: &Assignment) -> Result<i64> {
    (0..g.fragments().len())
        .map(|k| {
            let (fragment, map) = g.fragment(k);
            evaluate_c(&fragment, &a.restrict(&map))
        })
        .sum()
}

/// A random hyper-graph on `min_vertices..=max_vertices` vertices where each
/// pair is joined with probability 1/2 by a weight in `0..=max_weight`.
pub fn random_hypergraph<R: Rng>(
    rng: &mut R,
    min_vertices: usize,
    max_vertices: usize,
    max_weight: u32,
) -> HyperGraph {
    let k = rng.gen_range(min_vertices..=max_vertices);
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if rng.gen_bool(0.5) {
                edges.push((i, j, rng.gen_range(0..=max_weight)));
            }
        }
    }
    HyperGraph::new(k, edges).expect("generated edges are valid")
}

pub fn random_assignment<R: Rng>(rng: &mut R, n: usize) -> Assignment {
    Assignment::from_bools((0..n).map(|_| rng.gen_bool(0.5)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionSummary {
    pub trials: usize,
    pub failures: usize,
}

/// Checks the identity on `trials` seeded random (graph, assignment) pairs
/// with 3 to 6 vertices and weights up to 2.
pub fn random_decomposition_trials(seed: u64, trials: usize) -> Result<DecompositionSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..trials {
        let h = random_hypergraph(&mut rng, 3, 6, 2);
        let a = random_assignment(&mut rng, expand(&h).vertices().len());
        if !check_subgraph_decomposition(&h, &a)?.holds {
            failures += 1;
        }
    }
    Ok(DecompositionSummary { trials, failures })
}

/// What to do when a hyper-edge weight is below the minimum its overlap needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RealizabilityPolicy {
    #[default]
    Enforce,
    Warn,
}

/// Quantum expectation range of the hyper-graph observable. Every hyper-edge
/// observable contributes exactly `2n`, so the range is `2 * sum(n)` plus the
/// spectrum of the summed core projectors.
#[derive(Debug, Clone)]
pub struct QuantumRange {
    pub weight_term: u64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lo: f64,
    pub hi: f64,
    pub eigen: EigenDecomposition,
    pub projector_sum: Hermitian3,
    pub warnings: Vec<String>,
}

pub fn quantum_range(h: &HyperGraph, policy: RealizabilityPolicy) -> Result<QuantumRange> {
    let rays = h.rays().ok_or(Error::UnboundRay { vertex: 0 })?;
    let mut warnings = Vec::new();
    for e in h.edges() {
        let o = overlap(&rays[e.i], &rays[e.j]);
        let required = hyper_edge_weight(o, None)?.unwrap_or(0);
        if e.weight < required {
            let err = Error::Unrealizable { i: e.i + 1, j: e.j + 1, weight: e.weight, required, overlap: o };
            match policy {
                RealizabilityPolicy::Enforce => return Err(err),
                RealizabilityPolicy::Warn => warnings.push(err.to_string()),
            }
        }
    }
    let sum = projector_sum(rays)?;
    let eigen = eigensystem(&sum);
    let weight_term = 2 * h.weight_sum();
    let shift = weight_term as f64;
    Ok(QuantumRange {
        weight_term,
        lambda_min: eigen.min(),
        lambda_max: eigen.max(),
        lo: shift + eigen.min(),
        hi: shift + eigen.max(),
        eigen,
        projector_sum: sum,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    StateIndependent,
    StateDependent,
    NoViolation,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::StateIndependent => "state-independent",
            Classification::StateDependent => "state-dependent",
            Classification::NoViolation => "no-violation",
        }
    }

    /// Strict comparison against `|U|` with a tolerance that favors the
    /// weaker class.
    pub fn from_spectrum(lambda_min: f64, lambda_max: f64, independence: u64) -> Self {
        let threshold = independence as f64 + CLASSIFICATION_TOLERANCE;
        if lambda_min > threshold {
            Classification::StateIndependent
        } else if lambda_max > threshold {
            Classification::StateDependent
        } else {
            Classification::NoViolation
        }
    }
}

#[derive(Debug, Clone)]
pub struct ViolationReport {
    pub classical: ClassicalBound,
    pub quantum: QuantumRange,
    pub classification: Classification,
    /// `lambda_min - |U|` when state-independent, else `lambda_max - |U|`.
    pub margin: f64,
}

pub fn classify(h: &HyperGraph, config: &MisConfig, policy: RealizabilityPolicy) -> Result<ViolationReport> {
    let quantum = quantum_range(h, policy)?;
    let classical = classical_bound(h, config)?;
    let u = classical.independence_term;
    let classification = Classification::from_spectrum(quantum.lambda_min, quantum.lambda_max, u);
    let margin = match classification {
        Classification::StateIndependent => quantum.lambda_min - u as f64,
        _ => quantum.lambda_max - u as f64,
    };
    Ok(ViolationReport { classical, quantum, classification, margin })
}

/// Four tetrahedron rays followed by the computational basis rotated by
/// `delta` radians about the (1, 1, 1) axis.
pub fn wheel7_demo_rays(delta: f64) -> Vec<Ray> {
    let mut rays: Vec<Ray> = [
        (1.0, 1.0, 1.0),
        (1.0, -1.0, -1.0),
        (-1.0, 1.0, -1.0),
        (-1.0, -1.0, 1.0),
    ]
    .into_iter()
    .map(|(x, y, z)| Ray::from_real(x, y, z).expect("non-zero"))
    .collect();
    let axis = [1.0 / 3f64.sqrt(); 3];
    let (s, c) = delta.sin_cos();
    for k in 0..3 {
        let mut e = [0.0; 3];
        e[k] = 1.0;
        // Rodrigues: v cos + (axis x v) sin + axis (axis . v)(1 - cos).
        let cross = [
            axis[1] * e[2] - axis[2] * e[1],
            axis[2] * e[0] - axis[0] * e[2],
            axis[0] * e[1] - axis[1] * e[0],
        ];
        let dot: f64 = axis.iter().zip(e.iter()).map(|(a, b)| a * b).sum();
        let v: Vec<f64> = (0..3).map(|i| e[i] * c + cross[i] * s + axis[i] * dot * (1.0 - c)).collect();
        rays.push(Ray::from_real(v[0], v[1], v[2]).expect("rotation preserves norm"));
    }
    rays
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub worst_deviation: f64,
    /// The entity with the worst deviation among the failing ones.
    pub offender: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationReport {
    pub checks: Vec<CheckResult>,
}

impl RealizationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Tracker {
    name: &'static str,
    tol: f64,
    worst: f64,
    worst_failure: Option<(f64, String)>,
}

impl Tracker {
    fn new(name: &'static str, tol: f64) -> Self {
        Self { name, tol, worst: 0.0, worst_failure: None }
    }

    fn record(&mut self, deviation: f64, entity: impl FnOnce() -> String) {
        self.worst = self.worst.max(deviation);
        if deviation > self.tol && self.worst_failure.as_ref().is_none_or(|(d, _)| deviation > *d) {
            self.worst_failure = Some((deviation, entity()));
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            passed: self.worst_failure.is_none(),
            worst_deviation: self.worst,
            offender: self.worst_failure.map(|(_, e)| e),
        }
    }
}

/// Checks user-supplied coordinates (one ray per expanded vertex) against
/// the orthogonality graph:
/// - `orthogonality`: every edge joins rays with overlap at most `tol`;
/// - `bases`: every basis triple sums to the identity;
/// - `core-overlap`: each gadget's endpoints have overlap at most `n/(n+2)`;
/// - `aux-completeness`: each gadget's `6n` auxiliary projectors sum to `2n I`.
pub fn verify_realization(g: &ExpandedGraph, coords: &[Ray], tol: f64) -> Result<RealizationReport> {
    if coords.len() != g.vertices().len() {
        return Err(Error::MissingCoordinates { given: coords.len(), expected: g.vertices().len() });
    }
    let label = |v: usize| g.vertices()[v].to_string();

    let mut orthogonality = Tracker::new("orthogonality", tol);
    for &(a, b) in g.edges() {
        orthogonality.record(overlap(&coords[a], &coords[b]), || format!("{} -- {}", label(a), label(b)));
    }

    let mut bases = Tracker::new("bases", tol);
    for basis in g.bases() {
        let sum = basis.iter().fold(Hermitian3::zero(), |acc, &v| acc + projector(&coords[v]));
        bases.record(sum.max_abs_diff(&Hermitian3::identity()), || {
            format!("{{{}, {}, {}}}", label(basis[0]), label(basis[1]), label(basis[2]))
        });
    }

    let mut cores = Tracker::new("core-overlap", tol);
    let mut completeness = Tracker::new("aux-completeness", tol);
    for span in g.fragments() {
        let n = f64::from(span.weight);
        let o = overlap(&coords[span.cores.0], &coords[span.cores.1]);
        cores.record((o - n / (n + 2.0)).max(0.0), || format!("hyper-edge {}", span.edge + 1));
        if span.weight > 0 {
            let sum = span.aux.clone().fold(Hermitian3::zero(), |acc, v| acc + projector(&coords[v]));
            let target = Hermitian3::identity().scale(2.0 * n);
            completeness.record(sum.max_abs_diff(&target), || format!("hyper-edge {}", span.edge + 1));
        }
    }

    Ok(RealizationReport {
        checks: vec![orthogonality.finish(), bases.finish(), cores.finish(), completeness.finish()],
    })
}
