//! Count-matroid layer: the (2,3) pebble game for the generic planar rigidity
//! matroid, colored Maxwell counts, transversal conditions, circuit
//! extraction and the two-color rigidity predicate.

use serde::{Deserialize, Serialize};

use crate::colored_graph::{ColoredGraph, GraphError, SimpleGraph};
use crate::rigidity::{self, RigidityError};
use crate::seeds;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CombinatoricsError {
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("expected {expected} colors, found {found}")]
    ColorCount { expected: usize, found: usize },
    #[error("graph is not Laman")]
    NotLaman,
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    Degree { vertex: usize, degree: usize },
    #[error("no pair of neighbors gives a Laman graph")]
    NoReductionPair,
    #[error("circuit {circuit:?} disagrees with stress support {support:?}")]
    StressMismatch { circuit: Vec<usize>, support: Vec<usize> },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
}

/// Pebble game state for (2,3)-sparsity. Each accepted edge is covered by a
/// pebble of its tail; `out[v]` lists the heads of edges covered by `v`.
#[derive(Debug, Clone)]
pub struct PebbleGame {
    pebbles: Vec<u8>,
    out: Vec<Vec<usize>>,
    accepted: Vec<(usize, usize)>,
}

impl PebbleGame {
    pub fn new(n: usize) -> Self {
        PebbleGame {
            pebbles: vec![2; n],
            out: vec![Vec::new(); n],
            accepted: Vec::new(),
        }
    }

    pub fn accepted(&self) -> &[(usize, usize)] {
        &self.accepted
    }

    /// Moves one pebble to `root` along a reversed path, never touching `keep`.
    fn fetch(&mut self, root: usize, keep: usize) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        parent[root] = root;
        parent[keep] = keep;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for i in 0..self.out[x].len() {
                let y = self.out[x][i];
                if parent[y] != usize::MAX {
                    continue;
                }
                parent[y] = x;
                if self.pebbles[y] > 0 {
                    self.pebbles[y] -= 1;
                    self.pebbles[root] += 1;
                    let mut cur = y;
                    while cur != root {
                        let p = parent[cur];
                        let pos = self.out[p].iter().position(|&t| t == cur).expect("path edge");
                        self.out[p].swap_remove(pos);
                        self.out[cur].push(p);
                        cur = p;
                    }
                    return true;
                }
                stack.push(y);
            }
        }
        false
    }

    /// Tries to add `uv`; returns whether it is independent of the accepted set.
    pub fn try_add(&mut self, u: usize, v: usize) -> bool {
        while self.pebbles[u] < 2 {
            if !self.fetch(u, v) {
                return false;
            }
        }
        while self.pebbles[v] < 2 {
            if !self.fetch(v, u) {
                return false;
            }
        }
        self.pebbles[u] -= 1;
        self.out[u].push(v);
        self.accepted.push((u, v));
        true
    }
}

/// Rank of an edge list in the generic planar rigidity matroid.
pub fn r2_rank_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> usize {
    let mut game = PebbleGame::new(n);
    edges.into_iter().filter(|&(u, v)| game.try_add(u, v)).count()
}

pub fn r2_rank(g: &SimpleGraph) -> usize {
    r2_rank_edges(g.n(), g.edges().iter().copied())
}

/// True if every nonempty subset `E'` has `|E'| ≤ 2|V(E')| − 3`.
pub fn is_sparse(g: &SimpleGraph) -> bool {
    r2_rank(g) == g.edge_count()
}

pub fn is_laman(g: &SimpleGraph) -> bool {
    g.edge_count() + 3 == 2 * g.n() && is_sparse(g)
}

/// True if the edges with the given indices form a basis of the rigidity
/// matroid on all of `V` (that is, a spanning Laman subgraph).
fn is_basis(g: &SimpleGraph, keep: impl Iterator<Item = usize>) -> bool {
    let edges: Vec<(usize, usize)> = keep.map(|e| g.edges()[e]).collect();
    edges.len() + 3 == 2 * g.n() && r2_rank_edges(g.n(), edges.iter().copied()) == edges.len()
}

/// A subgraph violating `|E(H)| ≤ 2|V(H)| + χ(H) − 4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxwellViolation {
    /// Edge indices of `H`.
    pub edges: Vec<usize>,
    pub vertices: usize,
    pub colors: usize,
}

/// Checks the colored Maxwell count on every subgraph.
///
/// For a fixed vertex set, adding an edge raises `|E(H)|` by one and `χ(H)`
/// by at most one, so the induced subgraphs are the worst cases and it is
/// enough to scan vertex subsets.
pub fn maxwell_colored_check(g: &ColoredGraph) -> Result<(), MaxwellViolation> {
    let n = g.n();
    assert!(n < 32, "vertex subset scan limited to n < 32");
    for mask in 1u32..(1 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let edges: Vec<usize> = (0..g.edge_count())
            .filter(|&e| {
                let (u, v) = g.edges()[e];
                mask >> u & 1 == 1 && mask >> v & 1 == 1
            })
            .collect();
        if edges.is_empty() {
            continue;
        }
        let mut spanned = 0u32;
        for &e in &edges {
            let (u, v) = g.edges()[e];
            spanned |= 1 << u | 1 << v;
        }
        if spanned != mask {
            continue;
        }
        let colors = g.chi(&edges).expect("indices are edges");
        let vertices = mask.count_ones() as usize;
        if edges.len() + 4 > 2 * vertices + colors {
            return Err(MaxwellViolation { edges, vertices, colors });
        }
    }
    Ok(())
}

/// Iterates over choices of one edge from each class, lexicographically.
fn transversals(classes: &[Vec<usize>]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = if classes.iter().any(Vec::is_empty) {
        0
    } else {
        classes.iter().map(Vec::len).product()
    };
    (0..total).map(move |mut idx| {
        let mut pick = vec![0; classes.len()];
        for (i, class) in classes.iter().enumerate().rev() {
            pick[i] = class[idx % class.len()];
            idx /= class.len();
        }
        pick
    })
}

/// A transversal `F` (one edge per color, listed by color) such that
/// `(E ∖ F) + e_i` is a basis for every color `i`, if one exists.
pub fn transversal_condition_global(g: &ColoredGraph) -> Option<Vec<usize>> {
    if g.edge_count() + 4 != 2 * g.n() + g.k() {
        return None;
    }
    let classes = g.color_classes();
    let found = transversals(&classes).find(|f| {
        let rest: Vec<usize> = (0..g.edge_count()).filter(|e| !f.contains(e)).collect();
        f.iter()
            .all(|&ei| is_basis(g.graph(), rest.iter().copied().chain([ei])))
    });
    found
}

/// For each color `i`, a transversal `F_i` of the other colors with `E ∖ F_i`
/// a basis, or `None` for that color.
pub fn transversal_condition_per_color(g: &ColoredGraph) -> Vec<Option<Vec<usize>>> {
    let classes = g.color_classes();
    (0..g.k())
        .map(|i| {
            if g.edge_count() + 4 != 2 * g.n() + g.k() {
                return None;
            }
            let others: Vec<Vec<usize>> = classes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, c)| c.clone())
                .collect();
            let found = transversals(&others).find(|f| is_basis(g.graph(), (0..g.edge_count()).filter(|e| !f.contains(e))));
            found
        })
        .collect()
}

/// True if every color has a witness in [`transversal_condition_per_color`].
pub fn transversal_property(g: &ColoredGraph) -> bool {
    transversal_condition_per_color(g).iter().all(Option::is_some)
}

/// The unique rigidity circuit of a spanning graph with corank one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitCertificate {
    /// Edge indices of the circuit.
    pub edges: Vec<usize>,
    /// Support of the equilibrium stress at a random realization.
    pub stress_support: Vec<usize>,
    /// 0-based colors meeting the circuit.
    pub colors: Vec<usize>,
}

/// Edges `e` with `E − e` sparse, when `G` is spanning with exactly one
/// dependency (`|E| = 2n − 2`, rank `2n − 3`).
pub fn circuit_edges(g: &SimpleGraph) -> Option<Vec<usize>> {
    if g.edge_count() + 2 != 2 * g.n() || r2_rank(g) + 3 != 2 * g.n() {
        return None;
    }
    let edges = g.edges();
    Some(
        (0..edges.len())
            .filter(|&e| {
                let rest = edges.iter().enumerate().filter(|&(i, _)| i != e).map(|(_, &x)| x);
                r2_rank_edges(g.n(), rest) + 1 == edges.len()
            })
            .collect(),
    )
}

/// Unique circuit with a stress-support cross-check at a random realization.
pub fn unique_circuit(g: &ColoredGraph) -> Result<Option<CircuitCertificate>, CombinatoricsError> {
    let expected = 2 * g.n() - 2;
    if g.edge_count() != expected {
        return Err(CombinatoricsError::EdgeCount {
            expected,
            found: g.edge_count(),
        });
    }
    let Some(edges) = circuit_edges(g.graph()) else {
        return Ok(None);
    };
    let seed = seeds::derive(seeds::DEFAULT_SEED, g.edge_count() as u64);
    let p = rigidity::random_realization(g.n(), seed, rigidity::DEFAULT_BOUND)?;
    let stresses = rigidity::bar_joint_stresses(g.graph(), &p)?;
    let stress_support = match stresses.as_slice() {
        [w] => rigidity::support(w),
        _ => Vec::new(),
    };
    if stress_support != edges {
        return Err(CombinatoricsError::StressMismatch {
            circuit: edges,
            support: stress_support,
        });
    }
    let mut colors: Vec<usize> = edges.iter().map(|&e| g.color(e)).collect();
    colors.sort_unstable();
    colors.dedup();
    Ok(Some(CircuitCertificate {
        edges,
        stress_support,
        colors,
    }))
}

/// `|E| = 2n − 2` and the unique circuit meets both colors, given the circuit.
pub fn two_color_rigid_with_circuit(g: &ColoredGraph, circuit: Option<&[usize]>) -> bool {
    g.k() == 2
        && g.edge_count() + 2 == 2 * g.n()
        && circuit.is_some_and(|c| c.iter().any(|&e| g.color(e) == 0) && c.iter().any(|&e| g.color(e) == 1))
}

/// The combinatorial characterization of minimally angle-rigid 2-colored graphs.
pub fn two_color_rigid_predicate(g: &ColoredGraph) -> Result<bool, CombinatoricsError> {
    if g.k() != 2 {
        return Err(CombinatoricsError::ColorCount {
            expected: 2,
            found: g.k(),
        });
    }
    if g.edge_count() + 2 != 2 * g.n() {
        return Ok(false);
    }
    let circuit = circuit_edges(g.graph());
    Ok(two_color_rigid_with_circuit(g, circuit.as_deref()))
}

/// A pair `{x, y}` of neighbors of the degree-3 vertex `v` such that
/// `G − v + xy` is Laman. Labels in the result refer to `g`.
pub fn laman_one_reduction_pair(g: &SimpleGraph, v: usize) -> Result<(usize, usize), CombinatoricsError> {
    if !is_laman(g) {
        return Err(CombinatoricsError::NotLaman);
    }
    let nb = g.neighbors(v);
    if nb.len() != 3 {
        return Err(CombinatoricsError::Degree {
            vertex: v + 1,
            degree: nb.len(),
        });
    }
    for (x, y) in [(nb[0], nb[1]), (nb[0], nb[2]), (nb[1], nb[2])] {
        if g.edge_index(x, y).is_some() {
            continue;
        }
        let shift = |a: usize| if a > v { a - 1 } else { a };
        let reduced = g.delete_vertex(v);
        let mut edges = reduced.edges().to_vec();
        edges.push((shift(x), shift(y)));
        let h = SimpleGraph::new(g.n() - 1, edges)?;
        if is_laman(&h) {
            return Ok((x, y));
        }
    }
    Err(CombinatoricsError::NoReductionPair)
}
