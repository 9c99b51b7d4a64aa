//! Canonical labeling of edge-colored graphs up to vertex permutation and
//! color permutation.
//!
//! Individualization-refinement: the vertex partition is refined by an
//! invariant signature (neighbor cells paired with the size of the edge's
//! color class), and every branch of the search tree ends in a discrete
//! ordering. Each leaf is encoded as its upper-triangular adjacency with
//! colors renamed by first appearance, which removes the color labels from
//! the comparison. The least code over all leaves is the canonical form.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use super::{ColoredGraph, SimpleGraph};

/// Canonical code of a colored graph plus the labelings that produced it.
///
/// Equality and hashing look only at the code.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    code: Vec<u8>,
    /// `vertex_order[i]` is the original vertex placed at canonical position `i`.
    pub vertex_order: Vec<usize>,
    /// `color_map[c]` is the canonical color of original color `c`.
    pub color_map: Vec<usize>,
}

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.code
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.code
    }
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}

impl Eq for CanonicalForm {}

impl Hash for CanonicalForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.code.hash(state);
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.code.cmp(&other.code)
    }
}

struct Canonizer {
    n: usize,
    /// `adj[u * n + v]` is 0 for a non-edge, else color + 1.
    adj: Vec<u8>,
    /// Size of the color class of each adjacency value.
    class_size: Vec<usize>,
    best: Option<Vec<u8>>,
    best_orders: Vec<Vec<usize>>,
}

impl Canonizer {
    fn new(g: &ColoredGraph) -> Self {
        let n = g.n();
        assert!(g.k() < 255, "at most 254 colors are supported");
        let mut adj = vec![0u8; n * n];
        let mut class_size = vec![0usize; g.k() + 1];
        for (&(u, v), &c) in g.edges().iter().zip(g.colors()) {
            adj[u * n + v] = (c + 1) as u8;
            adj[v * n + u] = (c + 1) as u8;
            class_size[c + 1] += 1;
        }
        Canonizer {
            n,
            adj,
            class_size,
            best: None,
            best_orders: Vec::new(),
        }
    }

    fn refine(&self, cells: &mut Vec<Vec<usize>>) {
        let n = self.n;
        let mut cell_of = vec![0usize; n];
        loop {
            for (i, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = i;
                }
            }
            let signature = |v: usize| -> Vec<(usize, usize)> {
                let mut sig: Vec<(usize, usize)> = (0..n)
                    .filter(|&w| self.adj[v * n + w] != 0)
                    .map(|w| (cell_of[w], self.class_size[self.adj[v * n + w] as usize]))
                    .collect();
                sig.sort_unstable();
                sig
            };
            let mut next = Vec::with_capacity(n);
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<(usize, usize)>, usize)> =
                    cell.iter().map(|&v| (signature(v), v)).collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|x| x.1).collect());
                        start = i;
                    }
                }
            }
            let done = next.len() == cells.len();
            *cells = next;
            if done {
                return;
            }
        }
    }

    fn code(&self, order: &[usize]) -> (Vec<u8>, Vec<u8>) {
        let n = self.n;
        let mut rename = vec![0u8; 256];
        let mut next = 1u8;
        let mut code = Vec::with_capacity(1 + n * (n - 1) / 2);
        code.push(n as u8);
        for j in 1..n {
            for i in 0..j {
                let c = self.adj[order[i] * n + order[j]] as usize;
                if c == 0 {
                    code.push(0);
                } else {
                    if rename[c] == 0 {
                        rename[c] = next;
                        next += 1;
                    }
                    code.push(rename[c]);
                }
            }
        }
        (code, rename)
    }

    fn search(&mut self, mut cells: Vec<Vec<usize>>) {
        self.refine(&mut cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.into_iter().flatten().collect();
            let (code, _) = self.code(&order);
            match self.best.as_ref().map(|b| code.cmp(b)) {
                None | Some(Ordering::Less) => {
                    self.best = Some(code);
                    self.best_orders.clear();
                    self.best_orders.push(order);
                }
                Some(Ordering::Equal) => self.best_orders.push(order),
                Some(Ordering::Greater) => {}
            }
            return;
        };
        for &v in &cells[target].clone() {
            let mut branch = Vec::with_capacity(cells.len() + 1);
            branch.extend_from_slice(&cells[..target]);
            branch.push(vec![v]);
            branch.push(cells[target].iter().copied().filter(|&w| w != v).collect());
            branch.extend_from_slice(&cells[target + 1..]);
            self.search(branch);
        }
    }

    fn run(g: &ColoredGraph) -> Self {
        let mut c = Canonizer::new(g);
        if c.n == 0 {
            c.best = Some(vec![0]);
            c.best_orders.push(Vec::new());
        } else {
            c.search(vec![(0..c.n).collect()]);
        }
        c
    }
}

pub(super) fn canonical_form(g: &ColoredGraph) -> CanonicalForm {
    let c = Canonizer::run(g);
    let order = c.best_orders[0].clone();
    let (code, rename) = if order.is_empty() {
        (vec![0], vec![0u8; 256])
    } else {
        c.code(&order)
    };
    let color_map = (0..g.k()).map(|col| rename[col + 1] as usize - 1).collect();
    CanonicalForm {
        code,
        vertex_order: order,
        color_map,
    }
}

/// All automorphisms of an uncolored graph, as vertex maps `v ↦ σ[v]`.
/// The identity comes first.
pub fn automorphisms(g: &SimpleGraph) -> Vec<Vec<usize>> {
    let c = Canonizer::run(&g.monochromatic());
    let base = &c.best_orders[0];
    let mut out: Vec<Vec<usize>> = c
        .best_orders
        .iter()
        .map(|order| {
            let mut sigma = vec![0; g.n()];
            for (i, &v) in base.iter().enumerate() {
                sigma[v] = order[i];
            }
            sigma
        })
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_colored(rng: &mut ChaCha8Rng) -> ColoredGraph {
        let n = rng.gen_range(1..=8);
        let k = rng.gen_range(1..=4);
        let mut triples = Vec::new();
        for j in 0..n {
            for i in 0..j {
                if rng.gen_bool(0.5) {
                    triples.push((i, j, rng.gen_range(0..k)));
                }
            }
        }
        let graph = SimpleGraph::new(n, triples.iter().map(|t| (t.0, t.1))).unwrap();
        let colors: Vec<usize> = triples.iter().map(|t| t.2).collect();
        ColoredGraph::with_renumbered_colors(graph, &colors)
    }

    #[test]
    fn invariant_under_random_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let g = random_colored(&mut rng);
            let mut perm: Vec<usize> = (0..g.n()).collect();
            perm.shuffle(&mut rng);
            let mut cperm: Vec<usize> = (0..g.k()).collect();
            cperm.shuffle(&mut rng);
            let h = g.relabel(&perm, &cperm);
            assert_eq!(g.canonical_form(), h.canonical_form(), "{g:?} vs {h:?}");
        }
    }

    #[test]
    fn canonical_labeling_reproduces_the_code() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let g = random_colored(&mut rng);
            let cf = g.canonical_form();
            let mut perm = vec![0; g.n()];
            for (pos, &v) in cf.vertex_order.iter().enumerate() {
                perm[v] = pos;
            }
            let h = g.relabel(&perm, &cf.color_map);
            let again = h.canonical_form();
            assert_eq!(again.vertex_order, (0..g.n()).collect::<Vec<_>>());
            assert_eq!(cf, again);
        }
    }

    #[test]
    fn distinguishes_non_isomorphic_graphs() {
        let path = SimpleGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let star = SimpleGraph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_ne!(path.canonical_form(), star.canonical_form());
        // same graph, colorings differ beyond a color swap
        let a = ColoredGraph::new(3, [(1, 2, 1), (2, 3, 2)]).unwrap();
        let b = ColoredGraph::new(3, [(1, 2, 1), (2, 3, 1)]).unwrap();
        assert_ne!(a.canonical_form(), b.canonical_form());
    }

    #[test]
    fn automorphism_group_orders() {
        assert_eq!(automorphisms(&SimpleGraph::complete(4)).len(), 24);
        let path = SimpleGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(automorphisms(&path), vec![vec![0, 1, 2, 3], vec![3, 2, 1, 0]]);
        let c5 = SimpleGraph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let auts = automorphisms(&c5);
        assert_eq!(auts.len(), 10);
        for s in auts {
            assert_eq!(c5.relabel(&s), c5);
        }
    }
}
