//! Candidate graphs and colorings up to isomorphism.

use std::collections::BTreeMap;

use crate::colored_graph::{automorphisms, ColoredGraph, SimpleGraph};

use super::EnumerationError;

/// Largest `n` handled by the built-in generator.
pub const MAX_GENERATED_N: usize = 7;

/// All graphs on `n` vertices with `2n − 4 + k` edges and minimum degree at
/// least 2, one per isomorphism class, canonically labeled and ordered by
/// canonical code.
pub fn generate_candidate_graphs(n: usize, k: usize) -> Result<Vec<SimpleGraph>, EnumerationError> {
    if !(4..=MAX_GENERATED_N).contains(&n) {
        return Err(EnumerationError::UnsupportedN(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let m = 2 * n + k - 4;
    if m > pairs.len() {
        return Ok(Vec::new());
    }
    let mut classes = BTreeMap::new();
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        let mut deg = [0u8; MAX_GENERATED_N];
        for &i in &idx {
            let (u, v) = pairs[i];
            deg[u] += 1;
            deg[v] += 1;
        }
        if deg[..n].iter().all(|&d| d >= 2) {
            let g = SimpleGraph::new(n, idx.iter().map(|&i| pairs[i])).expect("distinct pairs");
            let cf = g.canonical_form();
            classes.entry(cf).or_insert(g);
        }
        // next combination in lexicographic order
        let Some(pos) = (0..m).rev().find(|&i| idx[i] < pairs.len() - m + i) else {
            break;
        };
        idx[pos] += 1;
        for i in pos + 1..m {
            idx[i] = idx[i - 1] + 1;
        }
    }
    Ok(classes.into_values().map(|g| canonical_relabel(&g)).collect())
}

/// The graph relabeled into its canonical vertex order.
pub fn canonical_relabel(g: &SimpleGraph) -> SimpleGraph {
    let cf = g.canonical_form();
    let mut perm = vec![0; g.n()];
    for (pos, &v) in cf.vertex_order.iter().enumerate() {
        perm[v] = pos;
    }
    g.relabel(&perm)
}

/// Automorphisms of `g` as permutations of its edge indices.
pub fn edge_automorphisms(g: &SimpleGraph) -> Vec<Vec<usize>> {
    automorphisms(g)
        .into_iter()
        .map(|s| {
            g.edges()
                .iter()
                .map(|&(u, v)| g.edge_index(s[u], s[v]).expect("automorphism maps edges to edges"))
                .collect()
        })
        .collect()
}

/// Restricted growth strings of length `m` using exactly `k` values:
/// `c[0] = 0` and each entry is at most one more than every earlier entry.
/// These are the colorings with exactly `k` colors up to color renaming.
pub struct RestrictedGrowth {
    m: usize,
    k: usize,
    current: Vec<u8>,
    started: bool,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(m: usize, k: usize) -> Self {
        assert!(k < 256);
        let done = k == 0 && m > 0 || k > m;
        // first string: 0…0 1 2 … k−1
        let current = (0..m).map(|i| (i + k).saturating_sub(m) as u8).collect();
        RestrictedGrowth {
            m,
            k,
            current,
            started: false,
            done,
        }
    }

    fn advance(&mut self) -> bool {
        let (m, k) = (self.m, self.k);
        let c = &mut self.current;
        let mut prefix_max = vec![0u8; m];
        let mut running = 0u8;
        for i in 0..m {
            prefix_max[i] = running;
            running = running.max(c[i]);
        }
        for i in (1..m).rev() {
            let limit = (prefix_max[i] + 1).min(k as u8 - 1);
            for value in c[i] + 1..=limit {
                c[i] = value;
                // smallest tail that still uses all k values
                let mut mx = prefix_max[i].max(value);
                for j in i + 1..m {
                    let needed = k - 1 - mx as usize;
                    c[j] = if needed >= m - j { mx + 1 } else { 0 };
                    mx = mx.max(c[j]);
                }
                if mx as usize == k - 1 {
                    return true;
                }
            }
        }
        false
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(self.current.clone())
    }
}

/// True if the restricted growth string `c` is the least among its images
/// under the given edge permutations, after renaming colors by first
/// appearance.
pub fn is_orbit_minimum(c: &[u8], edge_perms: &[Vec<usize>]) -> bool {
    let m = c.len();
    let mut image = vec![0u8; m];
    let mut rename = [u8::MAX; 256];
    for perm in edge_perms {
        for (e, &t) in perm.iter().enumerate() {
            image[t] = c[e];
        }
        rename.fill(u8::MAX);
        let mut next = 0u8;
        for j in 0..m {
            let v = &mut rename[image[j] as usize];
            if *v == u8::MAX {
                *v = next;
                next += 1;
            }
            match (*v).cmp(&c[j]) {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    true
}

/// All colorings of `g` with exactly `k` colors up to vertex and color
/// permutation, as restricted growth strings over the edge list.
pub fn coloring_orbits(g: &SimpleGraph, k: usize) -> impl Iterator<Item = Vec<u8>> {
    let perms = edge_automorphisms(g);
    RestrictedGrowth::new(g.edge_count(), k).filter(move |c| is_orbit_minimum(c, &perms))
}

/// [`coloring_orbits`] as colored graphs.
pub fn enumerate_colorings(g: &SimpleGraph, k: usize) -> Vec<ColoredGraph> {
    let g2 = g.clone();
    coloring_orbits(g, k)
        .map(|c| {
            let colors: Vec<usize> = c.iter().map(|&x| x as usize).collect();
            ColoredGraph::with_renumbered_colors(g2.clone(), &colors)
        })
        .collect()
}
