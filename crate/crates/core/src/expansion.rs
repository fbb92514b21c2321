//! Expansion of hyper-graphs into plain orthogonality graphs.
//!
//! A hyper-edge of weight `n` between core rays `p_n` and `q_n` expands into
//! `6n` auxiliary rays `p_l, q_l` (`0 <= l < n`) and `a+_l, a-_l, b+_l, b-_l`
//! (`1 <= l <= n`), joined by `10n + 1` orthogonality edges and grouped into
//! `2n` complete bases `{p_{l-1}, a+_l, b+_l}` and `{q_{l-1}, a-_l, b-_l}`.
//! Weight 0 is the single edge `p_0 -- q_0` with `p_0, q_0` the cores.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::hypergraph::HyperGraph;
use crate::mis::{self, MisConfig, SimpleGraph};

/// Default number of vertices enumerated by [`brute_force_max`].
pub const DEFAULT_MAX_BITS: usize = 30;

/// Environment variable overriding [`DEFAULT_MAX_BITS`].
pub const MAX_BITS_ENV: &str = "KSHG_MAX_BITS";

const HARD_MAX_BITS: usize = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AuxKind {
    P,
    Q,
    AlphaPlus,
    AlphaMinus,
    BetaPlus,
    BetaMinus,
}

impl AuxKind {
    pub fn symbol(&self) -> &'static str {
        match self {
            AuxKind::P => "p",
            AuxKind::Q => "q",
            AuxKind::AlphaPlus => "a+",
            AuxKind::AlphaMinus => "a-",
            AuxKind::BetaPlus => "b+",
            AuxKind::BetaMinus => "b-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpandedVertex {
    /// A hyper-graph vertex.
    Core(usize),
    Aux { edge: usize, kind: AuxKind, level: u32 },
}

impl fmt::Display for ExpandedVertex {
    /// `P<i>` for cores and `e<edge>:<kind><level>` for auxiliaries, 1-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpandedVertex::Core(i) => write!(f, "P{}", i + 1),
            ExpandedVertex::Aux { edge, kind, level } => {
                write!(f, "e{}:{}{}", edge + 1, kind.symbol(), level)
            }
        }
    }
}

/// Where one hyper-edge's gadget lives inside an [`ExpandedGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentSpan {
    pub edge: usize,
    /// Vertex indices of `p_n` and `q_n`.
    pub cores: (usize, usize),
    pub weight: u32,
    pub aux: Range<usize>,
    pub edges: Range<usize>,
    pub bases: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedGraph {
    vertices: Vec<ExpandedVertex>,
    edges: Vec<(usize, usize)>,
    bases: Vec<[usize; 3]>,
    fragments: Vec<FragmentSpan>,
}

impl ExpandedGraph {
    pub fn vertices(&self) -> &[ExpandedVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn bases(&self) -> &[[usize; 3]] {
        &self.bases
    }

    pub fn fragments(&self) -> &[FragmentSpan] {
        &self.fragments
    }

    pub fn core_count(&self) -> usize {
        self.vertices.iter().filter(|v| matches!(v, ExpandedVertex::Core(_))).count()
    }

    pub fn to_simple_graph(&self) -> SimpleGraph {
        SimpleGraph::new(self.vertices.len(), self.edges.iter().copied())
    }

    /// The standalone gadget of fragment `k`, with `map[local] = global`.
    pub fn fragment(&self, k: usize) -> (ExpandedGraph, Vec<usize>) {
        let span = &self.fragments[k];
        let (ExpandedVertex::Core(ci), ExpandedVertex::Core(cj)) =
            (self.vertices[span.cores.0], self.vertices[span.cores.1])
        else {
            unreachable!("fragment endpoints are core vertices");
        };
        let local = expand_hyper_edge(span.edge, (ci, cj), span.weight);
        let mut map = vec![span.cores.0, span.cores.1];
        map.extend(span.aux.clone());
        (local, map)
    }

    fn neighbor_lists(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            out[a].push(b);
            out[b].push(a);
        }
        out
    }
}

struct Builder {
    graph: ExpandedGraph,
}

impl Builder {
    fn with_cores(cores: impl IntoIterator<Item = usize>) -> Self {
        Self {
            graph: ExpandedGraph {
                vertices: cores.into_iter().map(ExpandedVertex::Core).collect(),
                edges: Vec::new(),
                bases: Vec::new(),
                fragments: Vec::new(),
            },
        }
    }

    fn add_vertex(&mut self, edge: usize, kind: AuxKind, level: u32) -> usize {
        self.graph.vertices.push(ExpandedVertex::Aux { edge, kind, level });
        self.graph.vertices.len() - 1
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        self.graph.edges.push((a.min(b), a.max(b)));
    }

    fn add_fragment(&mut self, edge: usize, p_top: usize, q_top: usize, n: u32) {
        let aux_start = self.graph.vertices.len();
        let edge_start = self.graph.edges.len();
        let basis_start = self.graph.bases.len();
        if n == 0 {
            self.add_edge(p_top, q_top);
        } else {
            let mut p_prev = self.add_vertex(edge, AuxKind::P, 0);
            let mut q_prev = self.add_vertex(edge, AuxKind::Q, 0);
            self.add_edge(p_prev, q_prev);
            for level in 1..=n {
                let ap = self.add_vertex(edge, AuxKind::AlphaPlus, level);
                let am = self.add_vertex(edge, AuxKind::AlphaMinus, level);
                let bp = self.add_vertex(edge, AuxKind::BetaPlus, level);
                let bm = self.add_vertex(edge, AuxKind::BetaMinus, level);
                let (p, q) = if level == n {
                    (p_top, q_top)
                } else {
                    (self.add_vertex(edge, AuxKind::P, level), self.add_vertex(edge, AuxKind::Q, level))
                };
                for (a, b) in [
                    (p_prev, ap),
                    (p_prev, bp),
                    (ap, bp),
                    (q_prev, am),
                    (q_prev, bm),
                    (am, bm),
                    (p, ap),
                    (p, am),
                    (q, bp),
                    (q, bm),
                ] {
                    self.add_edge(a, b);
                }
                self.graph.bases.push([p_prev, ap, bp]);
                self.graph.bases.push([q_prev, am, bm]);
                p_prev = p;
                q_prev = q;
            }
        }
        self.graph.fragments.push(FragmentSpan {
            edge,
            cores: (p_top, q_top),
            weight: n,
            aux: aux_start..self.graph.vertices.len(),
            edges: edge_start..self.graph.edges.len(),
            bases: basis_start..self.graph.bases.len(),
        });
    }
}

/// The `(6n + 2)`-vertex gadget of one hyper-edge. Vertex 0 is `p_n`
/// (core `endpoints.0`), vertex 1 is `q_n` (core `endpoints.1`).
pub fn expand_hyper_edge(edge: usize, endpoints: (usize, usize), weight: u32) -> ExpandedGraph {
    let mut b = Builder::with_cores([endpoints.0, endpoints.1]);
    b.add_fragment(edge, 0, 1, weight);
    b.graph
}

/// Core vertices first (index = hyper-graph vertex), then each hyper-edge's
/// auxiliary vertices in edge order.
pub fn expand(h: &HyperGraph) -> ExpandedGraph {
    let mut b = Builder::with_cores(0..h.vertex_count());
    for (k, e) in h.edges().iter().enumerate() {
        b.add_fragment(k, e.i, e.j, e.weight);
    }
    b.graph
}

/// A 0/1 valuation of the vertices of an expanded graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn from_bools(values: Vec<bool>) -> Self {
        Self(values)
    }

    pub fn from_bits(values: &[u8]) -> Result<Self> {
        values
            .iter()
            .enumerate()
            .map(|(vertex, &value)| match value {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(Error::NotBoolean { vertex, value }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Bit `v` of `mask` is the value of vertex `v`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self((0..n).map(|v| mask >> v & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> bool {
        self.0[v]
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    /// `out[k] = self[map[k]]`.
    pub fn restrict(&self, map: &[usize]) -> Self {
        Self(map.iter().map(|&v| self.0[v]).collect())
    }
}

fn check_size(g: &ExpandedGraph, a: &Assignment) -> Result<()> {
    if a.len() != g.vertices.len() {
        return Err(Error::AssignmentSize { given: a.len(), expected: g.vertices.len() });
    }
    Ok(())
}

/// `sum v_i - sum_{edges} v_i v_j`.
pub fn evaluate(g: &ExpandedGraph, a: &Assignment) -> Result<i64> {
    check_size(g, a)?;
    let ones = a.0.iter().filter(|v| **v).count() as i64;
    let products = g.edges.iter().filter(|&&(x, y)| a.0[x] && a.0[y]).count() as i64;
    Ok(ones - products)
}

/// The hyper-edge observable: [`evaluate`] minus the two core values.
pub fn evaluate_c(fragment: &ExpandedGraph, a: &Assignment) -> Result<i64> {
    let cores: Vec<usize> = fragment
        .vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| matches!(v, ExpandedVertex::Core(_)))
        .map(|(k, _)| k)
        .collect();
    if cores.len() != 2 {
        return Err(Error::NotAFragment(cores.len()));
    }
    let total = evaluate(fragment, a)?;
    Ok(total - cores.iter().filter(|&&k| a.0[k]).count() as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceConfig {
    pub max_bits: usize,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        Self { max_bits: DEFAULT_MAX_BITS }
    }
}

impl BruteForceConfig {
    /// Default limit, overridden by `KSHG_MAX_BITS` when it parses.
    pub fn from_env() -> Self {
        std::env::var(MAX_BITS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .map(|max_bits| Self { max_bits: max_bits.min(HARD_MAX_BITS) })
            .unwrap_or_default()
    }
}

/// Exact maximum of [`evaluate`] over all `2^|V|` assignments.
pub fn brute_force_max(g: &ExpandedGraph, config: &BruteForceConfig) -> Result<i64> {
    let n = g.vertices.len();
    let limit = config.max_bits.min(HARD_MAX_BITS);
    if n > limit {
        return Err(brute_force_capacity(n, limit));
    }
    brute_force_max_graph(&g.to_simple_graph(), config)
}

fn brute_force_capacity(size: usize, limit: usize) -> Error {
    Error::Capacity {
        what: "brute-force enumeration",
        size,
        limit,
        hint: "use the independent-set oracle or raise KSHG_MAX_BITS",
    }
}

/// Gray-code enumeration of `sum v - sum_{edges} v_i v_j` on a simple graph.
/// Each step flips one vertex and updates the value by its neighbor count.
pub fn brute_force_max_graph(g: &SimpleGraph, config: &BruteForceConfig) -> Result<i64> {
    let n = g.vertex_count();
    let limit = config.max_bits.min(HARD_MAX_BITS);
    if n > limit {
        return Err(brute_force_capacity(n, limit));
    }
    let masks: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).into_iter().fold(0u64, |m, u| m | 1 << u))
        .collect();
    let mut state = 0u64;
    let mut value = 0i64;
    let mut best = 0i64;
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let delta = 1 - i64::from((masks[v] & state).count_ones());
        if state >> v & 1 == 1 {
            value -= delta;
        } else {
            value += delta;
        }
        state ^= 1 << v;
        best = best.max(value);
    }
    Ok(best)
}

/// Maximum of [`evaluate`] via the independence number: on any edge with both
/// ends at 1, clearing one end never lowers the expression, so some optimum is
/// an independent set.
pub fn mis_oracle(g: &ExpandedGraph, config: &MisConfig) -> Result<i64> {
    mis::check_vertex_count(g.vertices.len(), config)?;
    Ok(mis::independence_number(&g.to_simple_graph(), config)? as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepReason {
    Given,
    /// Set to 0 because this neighbor is 1.
    Neighbor(usize),
    /// Set to 1 because the other two rays of this basis are 0.
    Basis([usize; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub vertex: usize,
    pub value: bool,
    pub reason: StepReason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// Two orthogonal rays both forced to 1.
    Edge(usize, usize),
    /// A basis forced to contain no 1.
    EmptyBasis([usize; 3]),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropagationOutcome {
    /// Fixpoint reached. Vertices no rule forced stay `None`.
    Consistent { values: Vec<Option<bool>>, trace: Vec<Step> },
    Contradiction { trace: Vec<Step>, violation: Violation },
}

impl PropagationOutcome {
    pub fn is_contradiction(&self) -> bool {
        matches!(self, PropagationOutcome::Contradiction { .. })
    }

    pub fn trace(&self) -> &[Step] {
        match self {
            PropagationOutcome::Consistent { trace, .. } => trace,
            PropagationOutcome::Contradiction { trace, .. } => trace,
        }
    }
}

/// Applies the value-assignment rules to a fixpoint:
/// a vertex at 1 forces its neighbors to 0, and a basis with two rays at 0
/// forces the third to 1. Stops at the first violated constraint.
pub fn ks_propagate(g: &ExpandedGraph, forced: &[(usize, u8)]) -> Result<PropagationOutcome> {
    if g.bases.is_empty() {
        return Err(Error::NoBases);
    }
    let n = g.vertices.len();
    let mut values: Vec<Option<bool>> = vec![None; n];
    let mut trace = Vec::new();
    let mut queue = VecDeque::new();

    for &(vertex, value) in forced {
        if vertex >= n {
            return Err(Error::VertexOutOfRange { index: vertex, count: n });
        }
        let value = match value {
            0 => false,
            1 => true,
            _ => return Err(Error::NotBoolean { vertex, value }),
        };
        match values[vertex] {
            None => {
                values[vertex] = Some(value);
                trace.push(Step { vertex, value, reason: StepReason::Given });
                queue.push_back(vertex);
            }
            Some(v) if v == value => {}
            Some(_) => return Err(Error::ConflictingForce { vertex }),
        }
    }

    let neighbors = g.neighbor_lists();
    let mut bases_of = vec![Vec::new(); n];
    for basis in &g.bases {
        for &v in basis {
            bases_of[v].push(*basis);
        }
    }

    while let Some(v) = queue.pop_front() {
        if values[v] == Some(true) {
            for &u in &neighbors[v] {
                match values[u] {
                    None => {
                        values[u] = Some(false);
                        trace.push(Step { vertex: u, value: false, reason: StepReason::Neighbor(v) });
                        queue.push_back(u);
                    }
                    Some(false) => {}
                    Some(true) => {
                        return Ok(PropagationOutcome::Contradiction {
                            trace,
                            violation: Violation::Edge(v.min(u), v.max(u)),
                        })
                    }
                }
            }
        } else {
            for basis in &bases_of[v] {
                let open: Vec<usize> = basis.iter().copied().filter(|&x| values[x].is_none()).collect();
                let zeros = basis.iter().filter(|&&x| values[x] == Some(false)).count();
                if zeros == 3 {
                    return Ok(PropagationOutcome::Contradiction {
                        trace,
                        violation: Violation::EmptyBasis(*basis),
                    });
                }
                if zeros == 2 && open.len() == 1 {
                    let u = open[0];
                    values[u] = Some(true);
                    trace.push(Step { vertex: u, value: true, reason: StepReason::Basis(*basis) });
                    queue.push_back(u);
                }
            }
        }
    }
    Ok(PropagationOutcome::Consistent { values, trace })
}
