//! Weighted hyper-graphs over qutrit rays.
//!
//! A hyper-edge of weight `n` joins two rays and stands for the gadget of
//! `2n` auxiliary orthonormal bases that forbids both rays from taking the
//! value 1. Weight 0 is a plain orthogonality edge. Every hyper-edge, whatever
//! its weight, is an adjacency for independent-set purposes.

mod families;

pub use families::{closed_form_independence, family_witness, generate, Family, FamilySpec, Weights};

use crate::error::{Error, Result};
use crate::linalg3::{overlap, Ray};
use crate::mis::{self, IndependentSet, MisConfig, SimpleGraph};

/// Overlaps at or below this count as orthogonal.
pub const ORTHOGONAL_TOLERANCE: f64 = 1e-9;

/// Slack applied at the right end of each weight interval `((n-1)/(n+1), n/(n+2)]`.
pub const WEIGHT_BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Overlaps at or above `1 - PARALLEL_TOLERANCE` are treated as parallel rays.
pub const PARALLEL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperEdge {
    pub i: usize,
    pub j: usize,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperGraph {
    vertex_count: usize,
    rays: Option<Vec<Ray>>,
    edges: Vec<HyperEdge>,
}

impl HyperGraph {
    /// Builds a hyper-graph from `(i, j, weight)` triples with 0-based
    /// endpoints. Endpoint order is normalized to `i < j`; edge order is kept.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize, u32)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (a, b, weight) in edges {
            for index in [a, b] {
                if index >= vertex_count {
                    return Err(Error::VertexOutOfRange { index, count: vertex_count });
                }
            }
            if a == b {
                return Err(Error::SelfLoop { i: a, j: b });
            }
            let (i, j) = (a.min(b), a.max(b));
            if !seen.insert((i, j)) {
                return Err(Error::DuplicateEdge { i, j });
            }
            out.push(HyperEdge { i, j, weight });
        }
        Ok(Self { vertex_count, rays: None, edges: out })
    }

    /// Binds one ray per vertex. Rays joined by a hyper-edge must not be parallel.
    pub fn with_rays(mut self, rays: Vec<Ray>) -> Result<Self> {
        if rays.len() != self.vertex_count {
            return Err(Error::RayCountMismatch { rays: rays.len(), vertices: self.vertex_count });
        }
        for e in &self.edges {
            let o = overlap(&rays[e.i], &rays[e.j]);
            if o >= 1.0 - PARALLEL_TOLERANCE {
                return Err(Error::ParallelRays { i: e.i, j: e.j, overlap: o });
            }
        }
        self.rays = Some(rays);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[HyperEdge] {
        &self.edges
    }

    pub fn rays(&self) -> Option<&[Ray]> {
        self.rays.as_deref()
    }

    pub fn weight_sum(&self) -> u64 {
        self.edges.iter().map(|e| u64::from(e.weight)).sum()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.i == v || e.j == v).count()
    }

    /// The underlying simple graph: one adjacency per hyper-edge. Panics
    /// above [`mis::MAX_SOLVER_VERTICES`] vertices.
    pub fn to_simple_graph(&self) -> SimpleGraph {
        SimpleGraph::new(self.vertex_count, self.edges.iter().map(|e| (e.i, e.j)))
    }
}

/// Minimal hyper-edge weight for two rays with the given overlap:
/// `ceil(2x / (1 - x))`, or 0 for orthogonal rays. With a cap `N`, overlaps
/// above `N / (N + 2)` yield no edge.
pub fn hyper_edge_weight(overlap: f64, cap: Option<u32>) -> Result<Option<u32>> {
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::InvalidOverlap(overlap));
    }
    if overlap <= ORTHOGONAL_TOLERANCE {
        return Ok(Some(0));
    }
    if let Some(n) = cap {
        let n = f64::from(n);
        if overlap > n / (n + 2.0) + WEIGHT_BOUNDARY_TOLERANCE {
            return Ok(None);
        }
    }
    let raw = 2.0 * overlap / (1.0 - overlap) - WEIGHT_BOUNDARY_TOLERANCE;
    if raw >= f64::from(u32::MAX) {
        return Err(Error::InvalidOverlap(overlap));
    }
    Ok(Some(raw.ceil().max(0.0) as u32))
}

/// One hyper-edge per ray pair whose weight is defined under `cap`.
pub fn build_from_rays(rays: &[Ray], cap: Option<u32>) -> Result<HyperGraph> {
    if rays.len() < 2 {
        return Err(Error::InvalidFamily(format!(
            "at least 2 rays are needed, got {}",
            rays.len()
        )));
    }
    let mut edges = Vec::new();
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            let o = overlap(&rays[i], &rays[j]);
            if o >= 1.0 - PARALLEL_TOLERANCE {
                return Err(Error::ParallelRays { i, j, overlap: o });
            }
            if let Some(weight) = hyper_edge_weight(o, cap)? {
                edges.push((i, j, weight));
            }
        }
    }
    HyperGraph::new(rays.len(), edges)?.with_rays(rays.to_vec())
}

/// Exact maximum independent set of the hyper-graph (lexicographically
/// smallest among the maximum ones).
pub fn max_independent_set(h: &HyperGraph, config: &MisConfig) -> Result<IndependentSet> {
    mis::check_vertex_count(h.vertex_count, config)?;
    mis::maximum_independent_set(&h.to_simple_graph(), config)
}

/// A hyper-graph with one vertex removed, plus the maps back to the original.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    pub graph: HyperGraph,
    /// `vertex_map[new] = old`.
    pub vertex_map: Vec<usize>,
    /// `edge_map[new] = old`.
    pub edge_map: Vec<usize>,
}

/// Removes vertex `index` and every hyper-edge touching it. Surviving
/// vertices keep their relative order.
pub fn remove_vertex(h: &HyperGraph, index: usize) -> Result<Subgraph> {
    if index >= h.vertex_count {
        return Err(Error::VertexOutOfRange { index, count: h.vertex_count });
    }
    if h.vertex_count == 1 {
        return Err(Error::EmptyGraph);
    }
    let vertex_map: Vec<usize> = (0..h.vertex_count).filter(|&v| v != index).collect();
    let renumber = |v: usize| if v > index { v - 1 } else { v };
    let (edge_map, edges): (Vec<usize>, Vec<HyperEdge>) = h
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.i != index && e.j != index)
        .map(|(k, e)| (k, HyperEdge { i: renumber(e.i), j: renumber(e.j), weight: e.weight }))
        .unzip();
    let rays = h
        .rays
        .as_ref()
        .map(|rays| vertex_map.iter().map(|&v| rays[v]).collect());
    Ok(Subgraph {
        graph: HyperGraph { vertex_count: h.vertex_count - 1, rays, edges },
        vertex_map,
        edge_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tetrahedron() -> Vec<Ray> {
        vec![
            Ray::from_real(1.0, 1.0, 1.0).unwrap(),
            Ray::from_real(1.0, -1.0, -1.0).unwrap(),
            Ray::from_real(-1.0, 1.0, -1.0).unwrap(),
            Ray::from_real(-1.0, -1.0, 1.0).unwrap(),
        ]
    }

    /// Least n with x <= n/(n+2) + tol, by scanning.
    fn scanned_weight(x: f64) -> u32 {
        (0..=2000u32)
            .find(|&n| x <= f64::from(n) / f64::from(n + 2) + WEIGHT_BOUNDARY_TOLERANCE)
            .unwrap()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(hyper_edge_weight(0.0, None), Ok(Some(0)));
        assert_eq!(hyper_edge_weight(1.0 / 3.0, None), Ok(Some(1)));
        assert_eq!(hyper_edge_weight(0.5, None), Ok(Some(2)));
        assert_eq!(hyper_edge_weight(0.5, Some(1)), Ok(None));
        assert_eq!(hyper_edge_weight(0.5, Some(2)), Ok(Some(2)));
        assert_eq!(hyper_edge_weight(1.0, None), Err(Error::InvalidOverlap(1.0)));
        assert!(hyper_edge_weight(-0.1, None).is_err());
        assert!(hyper_edge_weight(f64::NAN, None).is_err());
    }

    #[test]
    fn boundary_overlaps_use_closed_right_end() {
        for n in 1..50u32 {
            let x = f64::from(n) / f64::from(n + 2);
            assert_eq!(hyper_edge_weight(x, None), Ok(Some(n)), "n = {n}");
        }
    }

    proptest! {
        #[test]
        fn weight_is_least_admissible(x in 0.0f64..0.999) {
            prop_assert_eq!(hyper_edge_weight(x, None).unwrap(), Some(scanned_weight(x)));
        }
    }

    #[test]
    fn build_from_rays_examples() {
        let t = build_from_rays(&tetrahedron(), None).unwrap();
        assert_eq!(t.vertex_count(), 4);
        assert_eq!(t.edges().len(), 6);
        assert!(t.edges().iter().all(|e| e.weight == 1));

        let basis = build_from_rays(&[Ray::basis(0), Ray::basis(1), Ray::basis(2)], None).unwrap();
        assert_eq!(basis.edges().len(), 3);
        assert!(basis.edges().iter().all(|e| e.weight == 0));

        let half = Ray::from_real(0.5, 0.75f64.sqrt(), 0.0).unwrap();
        let capped = build_from_rays(&[Ray::basis(0), half], Some(1)).unwrap();
        assert_eq!(capped.vertex_count(), 2);
        assert!(capped.edges().is_empty());

        let err = build_from_rays(&[Ray::basis(0), Ray::basis(1), Ray::basis(0).with_phase(0.3)], None)
            .unwrap_err();
        assert!(matches!(err, Error::ParallelRays { i: 0, j: 2, .. }));
    }

    #[test]
    fn constructor_validation() {
        assert_eq!(HyperGraph::new(0, []), Err(Error::EmptyGraph));
        assert_eq!(
            HyperGraph::new(2, [(0, 2, 1)]),
            Err(Error::VertexOutOfRange { index: 2, count: 2 })
        );
        assert_eq!(HyperGraph::new(2, [(1, 1, 0)]), Err(Error::SelfLoop { i: 1, j: 1 }));
        assert_eq!(
            HyperGraph::new(2, [(0, 1, 1), (1, 0, 2)]),
            Err(Error::DuplicateEdge { i: 0, j: 1 })
        );
        let h = HyperGraph::new(2, [(1, 0, 3)]).unwrap();
        assert_eq!(h.edges()[0], HyperEdge { i: 0, j: 1, weight: 3 });
        assert!(matches!(
            h.clone().with_rays(vec![Ray::basis(0), Ray::basis(0)]),
            Err(Error::ParallelRays { .. })
        ));
        assert!(matches!(h.with_rays(vec![Ray::basis(0)]), Err(Error::RayCountMismatch { .. })));
    }

    /// Stand-in for a six-vertex hyper-graph with several maximum independent
    /// sets: a 6-cycle with one long chord.
    fn six_vertex() -> HyperGraph {
        HyperGraph::new(6, [(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 4, 0), (4, 5, 1), (5, 0, 2), (1, 4, 1)])
            .unwrap()
    }

    #[test]
    fn six_vertex_maximum_sets() {
        let h = six_vertex();
        let r = max_independent_set(&h, &MisConfig::default()).unwrap();
        let slow = crate::mis::exhaustive_maximum_independent_set(&h.to_simple_graph()).unwrap();
        assert_eq!(r, slow);
        assert_eq!(r.size, 3);
        assert_eq!(r.witness, vec![0, 2, 4]);
        // {0, 2, 4} and {1, 3, 5} are both maximum.
        let g = h.to_simple_graph();
        let count = (0..6usize)
            .flat_map(|a| (a + 1..6).flat_map(move |b| (b + 1..6).map(move |c| [a, b, c])))
            .filter(|set| g.is_independent(set))
            .count();
        assert!(count > 1);
    }

    #[test]
    fn remove_vertex_counts() {
        let h = six_vertex();
        for v in 0..6 {
            let sub = remove_vertex(&h, v).unwrap();
            assert_eq!(sub.graph.vertex_count(), 5);
            assert_eq!(sub.graph.edges().len(), h.edges().len() - h.degree(v));
            for (new, e) in sub.graph.edges().iter().enumerate() {
                let old = h.edges()[sub.edge_map[new]];
                assert_eq!(sub.vertex_map[e.i], old.i);
                assert_eq!(sub.vertex_map[e.j], old.j);
                assert_eq!(e.weight, old.weight);
            }
        }
        let pair = HyperGraph::new(2, [(0, 1, 1)]).unwrap();
        let single = remove_vertex(&pair, 0).unwrap();
        assert_eq!(single.graph.vertex_count(), 1);
        assert!(single.graph.edges().is_empty());

        let isolated = HyperGraph::new(3, [(0, 1, 2)]).unwrap();
        assert_eq!(remove_vertex(&isolated, 2).unwrap().graph.edges(), isolated.edges());
        assert!(remove_vertex(&isolated, 3).is_err());
        assert_eq!(
            remove_vertex(&HyperGraph::new(1, []).unwrap(), 0),
            Err(Error::EmptyGraph)
        );
    }

    #[test]
    fn remove_vertex_keeps_rays() {
        let h = build_from_rays(&tetrahedron(), None).unwrap();
        let sub = remove_vertex(&h, 1).unwrap();
        let rays = sub.graph.rays().unwrap();
        assert_eq!(rays.len(), 3);
        assert_eq!(rays[1], tetrahedron()[2]);
    }
}
