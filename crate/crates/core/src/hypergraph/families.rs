//! Parametric hyper-graph families and their closed-form independence numbers.
//!
//! Vertex numbering is 0-based here. Tree-shaped families follow the 1-based
//! heap numbering `p_1, p_2, ...` shifted down by one. Lattice site `(i, j)`
//! with `0 <= i < mx`, `0 <= j < my` maps to index `j * mx + i`.

use super::{hyper_edge_weight, HyperGraph};
use crate::error::{Error, Result};
use crate::linalg3::{overlap, Ray};

/// Largest depth accepted for the fractal families.
pub const MAX_FRACTAL_DEPTH: u32 = 20;

/// Largest side accepted for lattice families.
pub const MAX_LATTICE_SIDE: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Complete { k: usize },
    Linear { k: usize },
    Cyclic { k: usize },
    FractalTree { depth: u32 },
    FractalCyclic { depth: u32 },
    SquareLattice { mx: usize, my: usize },
    TorusLattice { mx: usize, my: usize },
    Wheel7,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Uniform(u32),
    /// One weight per hyper-edge, in generation order.
    PerEdge(Vec<u32>),
    /// Bind the rays to the vertices and use the minimal weight of each pair.
    FromRays { rays: Vec<Ray>, cap: Option<u32> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub weights: Weights,
}

impl FamilySpec {
    pub fn uniform(family: Family, weight: u32) -> Self {
        Self { family, weights: Weights::Uniform(weight) }
    }
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Complete { .. } => "complete",
            Family::Linear { .. } => "linear",
            Family::Cyclic { .. } => "cyclic",
            Family::FractalTree { .. } => "fractal-tree",
            Family::FractalCyclic { .. } => "fractal-cyclic",
            Family::SquareLattice { .. } => "square-lattice",
            Family::TorusLattice { .. } => "torus-lattice",
            Family::Wheel7 => "wheel7",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidFamily(msg));
        match *self {
            Family::Complete { k } | Family::Linear { k } if k < 2 => {
                fail(format!("{} needs k >= 2, got {k}", self.name()))
            }
            Family::Complete { k } if k > 256 => fail(format!("complete needs k <= 256, got {k}")),
            Family::Cyclic { k } if k < 3 => fail(format!("cyclic needs k >= 3, got {k}")),
            Family::FractalTree { depth } | Family::FractalCyclic { depth }
                if !(1..=MAX_FRACTAL_DEPTH).contains(&depth) =>
            {
                fail(format!("{} needs 1 <= k <= {MAX_FRACTAL_DEPTH}, got {depth}", self.name()))
            }
            Family::SquareLattice { mx, my } if mx < 1 || my < 1 => {
                fail(format!("square-lattice needs mx, my >= 1, got {mx}x{my}"))
            }
            Family::TorusLattice { mx, my } if mx < 3 || my < 3 => {
                fail(format!("torus-lattice needs mx, my >= 3, got {mx}x{my}"))
            }
            Family::SquareLattice { mx, my } | Family::TorusLattice { mx, my }
                if mx > MAX_LATTICE_SIDE || my > MAX_LATTICE_SIDE =>
            {
                fail(format!("{} sides must be <= {MAX_LATTICE_SIDE}", self.name()))
            }
            _ => Ok(()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match *self {
            Family::Complete { k } | Family::Linear { k } | Family::Cyclic { k } => k,
            Family::FractalTree { depth } => (1 << (depth + 1)) - 1,
            Family::FractalCyclic { depth } => 3 * ((1 << depth) - 1),
            Family::SquareLattice { mx, my } | Family::TorusLattice { mx, my } => mx * my,
            Family::Wheel7 => 7,
        }
    }

    /// Hyper-edge endpoints in generation order. Assumes a validated family.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        match *self {
            Family::Complete { k } => (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect(),
            Family::Linear { k } => (0..k - 1).map(|i| (i, i + 1)).collect(),
            Family::Cyclic { k } => (0..k).map(|i| (i, (i + 1) % k)).collect(),
            Family::FractalTree { depth } => {
                // p_i -- p_{2i}, p_i -- p_{2i+1} for 1-based i < 2^depth.
                (1..1usize << depth)
                    .flat_map(|i| [(i - 1, 2 * i - 1), (i - 1, 2 * i)])
                    .collect()
            }
            Family::FractalCyclic { depth } => {
                // Root triangle, then p_i -- p_{2i+2}, p_i -- p_{2i+3},
                // p_{2i+2} -- p_{2i+3} for 1-based i <= 3(2^{depth-1} - 1).
                let inner = 3 * ((1usize << (depth - 1)) - 1);
                let mut edges = vec![(0, 1), (0, 2), (1, 2)];
                for i in 1..=inner {
                    let (a, b) = (2 * i + 1, 2 * i + 2);
                    edges.extend([(i - 1, a), (i - 1, b), (a, b)]);
                }
                edges
            }
            Family::SquareLattice { mx, my } => {
                let site = |i: usize, j: usize| j * mx + i;
                let horizontal = (0..mx - 1).flat_map(|i| (0..my).map(move |j| (site(i, j), site(i + 1, j))));
                let vertical = (0..mx).flat_map(|i| (0..my - 1).map(move |j| (site(i, j), site(i, j + 1))));
                horizontal.chain(vertical).collect()
            }
            Family::TorusLattice { mx, my } => {
                let site = |i: usize, j: usize| j * mx + i;
                let horizontal = (0..mx).flat_map(|i| (0..my).map(move |j| (site(i, j), site((i + 1) % mx, j))));
                let vertical = (0..mx).flat_map(|i| (0..my).map(move |j| (site(i, j), site(i, (j + 1) % my))));
                horizontal.chain(vertical).collect()
            }
            Family::Wheel7 => {
                let ring = (0..7).map(|i| (i, (i + 1) % 7));
                let chords = (0..7).map(|i| (i, (i + 3) % 7));
                ring.chain(chords).collect()
            }
        }
    }
}

/// Builds the family member described by `spec`.
pub fn generate(spec: &FamilySpec) -> Result<HyperGraph> {
    spec.family.validate()?;
    let pairs = spec.family.edge_pairs();
    let k = spec.family.vertex_count();
    match &spec.weights {
        Weights::Uniform(n) => HyperGraph::new(k, pairs.into_iter().map(|(i, j)| (i, j, *n))),
        Weights::PerEdge(list) => {
            if list.len() != pairs.len() {
                return Err(Error::WeightCountMismatch { given: list.len(), expected: pairs.len() });
            }
            HyperGraph::new(k, pairs.into_iter().zip(list).map(|((i, j), n)| (i, j, *n)))
        }
        Weights::FromRays { rays, cap } => {
            if rays.len() != k {
                return Err(Error::RayCountMismatch { rays: rays.len(), vertices: k });
            }
            let mut edges = Vec::with_capacity(pairs.len());
            for (i, j) in pairs {
                let o = overlap(&rays[i], &rays[j]);
                if o >= 1.0 - super::PARALLEL_TOLERANCE {
                    return Err(Error::ParallelRays { i, j, overlap: o });
                }
                match hyper_edge_weight(o, *cap)? {
                    Some(n) => edges.push((i, j, n)),
                    None => {
                        return Err(Error::EdgeAboveCap { i, j, cap: cap.unwrap_or(0), overlap: o })
                    }
                }
            }
            HyperGraph::new(k, edges)?.with_rays(rays.clone())
        }
    }
}

/// Independence number of the family member, by formula.
///
/// The torus uses `min(floor(mx/2) * my, floor(my/2) * mx)`. It coincides with
/// `floor(min/2) * max` except when the shorter side is even and the longer
/// one odd, where the latter overcounts (4x5 has independence number 8, not 10).
pub fn closed_form_independence(spec: &FamilySpec) -> Result<usize> {
    spec.family.validate()?;
    Ok(match spec.family {
        Family::Complete { .. } => 1,
        Family::Linear { k } => k.div_ceil(2),
        Family::Cyclic { k } => k / 2,
        Family::FractalTree { depth } => {
            // (4/3) * (2^k - 2^{(k mod 2) - 2}), kept in integers.
            ((1usize << (depth + 2)) - (1usize << (depth % 2))) / 3
        }
        Family::FractalCyclic { depth } => (1usize << depth) - 1,
        Family::SquareLattice { mx, my } => (mx * my).div_ceil(2),
        Family::TorusLattice { mx, my } => (mx / 2 * my).min(my / 2 * mx),
        Family::Wheel7 => 2,
    })
}

/// An explicit maximum independent set matching [`closed_form_independence`].
pub fn family_witness(family: &Family) -> Result<Vec<usize>> {
    family.validate()?;
    let mut witness = match *family {
        Family::Complete { .. } => vec![0],
        Family::Linear { k } => (0..k).step_by(2).collect(),
        Family::Cyclic { k } => (0..k).filter(|i| i % 2 == 0 && i + 1 < k).collect(),
        Family::FractalTree { depth } => {
            // Every other level, counted up from the leaves.
            let depth = depth as usize;
            (1usize..1 << (depth + 1))
                .filter(|idx| (depth - idx.ilog2() as usize).is_multiple_of(2))
                .map(|idx| idx - 1)
                .collect()
        }
        Family::FractalCyclic { .. } => greedy_from_last(family),
        Family::SquareLattice { mx, my } => {
            (0..mx * my).filter(|v| (v % mx + v / mx) % 2 == 0).collect()
        }
        Family::TorusLattice { mx, my } => torus_witness(mx, my),
        Family::Wheel7 => vec![0, 2],
    };
    witness.sort_unstable();
    Ok(witness)
}

fn greedy_from_last(family: &Family) -> Vec<usize> {
    let k = family.vertex_count();
    let mut neighbors = vec![Vec::new(); k];
    for (a, b) in family.edge_pairs() {
        neighbors[a].push(b);
        neighbors[b].push(a);
    }
    let mut blocked = vec![false; k];
    let mut chosen = Vec::new();
    for v in (0..k).rev() {
        if !blocked[v] {
            chosen.push(v);
            for &u in &neighbors[v] {
                blocked[u] = true;
            }
        }
    }
    chosen
}

/// Picks `floor(a/2)` sites in every fiber of length `a` (the cheaper
/// orientation), shifting the pattern so consecutive fibers are disjoint.
fn torus_witness(mx: usize, my: usize) -> Vec<usize> {
    let along_x = mx / 2 * my <= my / 2 * mx;
    let (a, b) = if along_x { (mx, my) } else { (my, mx) };
    let shifts: Vec<usize> = if b % 2 == 0 {
        (0..b).map(|c| c % 2).collect()
    } else {
        // a and b both odd with b >= a: walk 0, 1, ..., a-1, then alternate.
        debug_assert!(a % 2 == 1 && b >= a);
        (0..b).map(|c| if c < a { c } else { (c - a) % 2 }).collect()
    };
    let mut out = Vec::with_capacity(a / 2 * b);
    for (column, shift) in shifts.into_iter().enumerate() {
        for t in 0..a / 2 {
            let pos = (shift + 2 * t) % a;
            let (i, j) = if along_x { (pos, column) } else { (column, pos) };
            out.push(j * mx + i);
        }
    }
    out
}
