//! Exact maximum independent sets on small simple graphs.
//!
//! The solver is a branch-and-bound over bitset vertex sets:
//! - simplicial vertices (whose remaining neighborhood is a clique) are taken
//!   greedily, which covers isolated and degree-one vertices;
//! - disconnected remainders are solved component by component;
//! - a greedy clique cover bounds the remaining independence number;
//! - otherwise the search branches on a vertex of maximum degree.
//!
//! Witnesses are the lexicographically smallest maximum sets, found by
//! fixing vertices in ascending order against the exact optimum.

use crate::error::{Error, Result};

/// Hard upper bound on vertex count for the bitset representation.
pub const MAX_SOLVER_VERTICES: usize = 256;

/// Default vertex limit for exact searches.
pub const DEFAULT_MIS_LIMIT: usize = 64;

/// Largest graph accepted by the exhaustive cross-check.
pub const EXHAUSTIVE_LIMIT: usize = 25;

const WORDS: usize = MAX_SOLVER_VERTICES / 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MisConfig {
    pub max_vertices: usize,
}

impl Default for MisConfig {
    fn default() -> Self {
        Self { max_vertices: DEFAULT_MIS_LIMIT }
    }
}

impl MisConfig {
    pub fn with_limit(max_vertices: usize) -> Self {
        Self { max_vertices: max_vertices.min(MAX_SOLVER_VERTICES) }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Default)]
pub(crate) struct VertexSet([u64; WORDS]);

impl VertexSet {
    fn full(n: usize) -> Self {
        let mut s = Self::default();
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    fn contains(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn and(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= b;
        }
        out
    }

    fn and_not(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= !b;
        }
        out
    }

    fn or(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a |= b;
        }
        out
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

/// An undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adjacency: Vec<VertexSet>,
}

impl std::fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimpleGraph").field("n", &self.n).field("edges", &self.edges()).finish()
    }
}

impl SimpleGraph {
    /// Builds a graph, ignoring repeated edges. Panics on self-loops or
    /// out-of-range endpoints, and above [`MAX_SOLVER_VERTICES`].
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        assert!(n <= MAX_SOLVER_VERTICES, "graph with {n} vertices exceeds solver capacity");
        let mut adjacency = vec![VertexSet::default(); n];
        for (a, b) in edges {
            assert!(a < n && b < n && a != b, "bad edge ({a}, {b}) for {n} vertices");
            adjacency[a].insert(b);
            adjacency[b].insert(a);
        }
        Self { n, adjacency }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.adjacency[v].iter().collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|a| self.adjacency[a].iter().filter(move |&b| b > a).map(move |b| (a, b)))
            .collect()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &a)| set[k + 1..].iter().all(|&b| a != b && !self.is_adjacent(a, b)))
    }

    /// True if no vertex outside `set` can be added while staying independent.
    pub fn is_maximal_independent(&self, set: &[usize]) -> bool {
        self.is_independent(set)
            && (0..self.n)
                .filter(|v| !set.contains(v))
                .all(|v| set.iter().any(|&s| self.is_adjacent(v, s)))
    }

    fn closed_neighborhood(&self, v: usize) -> VertexSet {
        let mut s = self.adjacency[v];
        s.insert(v);
        s
    }
}

/// A maximum independent set with its size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentSet {
    pub size: usize,
    /// Sorted vertex indices.
    pub witness: Vec<usize>,
}

fn check_capacity(graph: &SimpleGraph, config: &MisConfig) -> Result<()> {
    check_vertex_count(graph.n, config)
}

/// Fails with a capacity error when `n` vertices exceed the configured limit.
pub fn check_vertex_count(n: usize, config: &MisConfig) -> Result<()> {
    let limit = config.max_vertices.min(MAX_SOLVER_VERTICES);
    if n > limit {
        return Err(Error::Capacity {
            what: "exact independent-set search",
            size: n,
            limit,
            hint: "raise the configured vertex limit",
        });
    }
    Ok(())
}

/// Independence number by branch and bound.
pub fn independence_number(graph: &SimpleGraph, config: &MisConfig) -> Result<usize> {
    check_capacity(graph, config)?;
    Ok(Solver { graph }.alpha(VertexSet::full(graph.n)))
}

/// The lexicographically smallest maximum independent set.
pub fn maximum_independent_set(graph: &SimpleGraph, config: &MisConfig) -> Result<IndependentSet> {
    check_capacity(graph, config)?;
    let solver = Solver { graph };
    let mut remaining = VertexSet::full(graph.n);
    let target = solver.alpha(remaining);
    let mut witness = Vec::with_capacity(target);
    for v in 0..graph.n {
        if witness.len() == target {
            break;
        }
        if !remaining.contains(v) {
            continue;
        }
        let rest = remaining.and_not(&graph.closed_neighborhood(v));
        if 1 + solver.alpha(rest) == target - witness.len() {
            witness.push(v);
            remaining = rest;
        } else {
            remaining.remove(v);
        }
    }
    debug_assert_eq!(witness.len(), target);
    Ok(IndependentSet { size: target, witness })
}

/// Exhaustive subset enumeration, used to cross-check the branch and bound.
pub fn exhaustive_maximum_independent_set(graph: &SimpleGraph) -> Result<IndependentSet> {
    if graph.n > EXHAUSTIVE_LIMIT {
        return Err(Error::Capacity {
            what: "exhaustive independent-set enumeration",
            size: graph.n,
            limit: EXHAUSTIVE_LIMIT,
            hint: "use the branch-and-bound solver",
        });
    }
    let n = graph.n;
    let masks: Vec<u32> = (0..n).map(|v| graph.adjacency[v].0[0] as u32).collect();
    let mut best: Vec<usize> = Vec::new();
    for subset in 0u32..(1u32 << n) {
        let size = subset.count_ones() as usize;
        if size < best.len() {
            continue;
        }
        let independent = (0..n).all(|v| subset >> v & 1 == 0 || masks[v] & subset == 0);
        if !independent {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|v| subset >> v & 1 == 1).collect();
        if size > best.len() || members < best {
            best = members;
        }
    }
    Ok(IndependentSet { size: best.len(), witness: best })
}

struct Solver<'a> {
    graph: &'a SimpleGraph,
}

impl Solver<'_> {
    fn alpha(&self, candidates: VertexSet) -> usize {
        let mut best = 0;
        self.search(candidates, 0, &mut best);
        best
    }

    fn search(&self, mut p: VertexSet, mut size: usize, best: &mut usize) {
        // Simplicial reduction to a fixpoint.
        loop {
            let Some(v) = p.iter().find(|&v| self.is_simplicial(v, &p)) else { break };
            size += 1;
            p = p.and_not(&self.graph.closed_neighborhood(v));
        }
        if p.is_empty() {
            *best = (*best).max(size);
            return;
        }
        if size + self.clique_cover_bound(&p) <= *best {
            return;
        }

        let components = self.components(&p);
        if components.len() > 1 {
            let total: usize = components.into_iter().map(|c| self.alpha(c)).sum();
            *best = (*best).max(size + total);
            return;
        }

        let v = p
            .iter()
            .max_by_key(|&v| (self.graph.adjacency[v].and(&p).len(), std::cmp::Reverse(v)))
            .expect("non-empty candidate set");
        self.search(p.and_not(&self.graph.closed_neighborhood(v)), size + 1, best);
        let mut without = p;
        without.remove(v);
        self.search(without, size, best);
    }

    fn is_simplicial(&self, v: usize, p: &VertexSet) -> bool {
        let nbrs = self.graph.adjacency[v].and(p);
        if nbrs.len() > 4 {
            return false;
        }
        let clique = nbrs.iter().all(|u| {
            let mut others = nbrs;
            others.remove(u);
            others.and_not(&self.graph.adjacency[u]).is_empty()
        });
        clique
    }

    fn clique_cover_bound(&self, p: &VertexSet) -> usize {
        let mut rest = *p;
        let mut cliques = 0;
        while let Some(v) = rest.first() {
            let mut clique = VertexSet::default();
            clique.insert(v);
            let mut cand = self.graph.adjacency[v].and(&rest);
            while let Some(u) = cand.first() {
                clique.insert(u);
                cand = cand.and(&self.graph.adjacency[u]);
            }
            rest = rest.and_not(&clique);
            cliques += 1;
        }
        cliques
    }

    fn components(&self, p: &VertexSet) -> Vec<VertexSet> {
        let mut rest = *p;
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let mut comp = VertexSet::default();
            comp.insert(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::default();
                for v in frontier.iter() {
                    next = next.or(&self.graph.adjacency[v]);
                }
                next = next.and(p).and_not(&comp);
                comp = comp.or(&next);
                frontier = next;
            }
            rest = rest.and_not(&comp);
            out.push(comp);
        }
        out
    }
}
