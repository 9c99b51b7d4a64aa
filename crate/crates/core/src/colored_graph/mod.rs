//! Simple graphs, edge-colored graphs and angle sets.
//!
//! Vertices and colors are stored 0-based. Every text or JSON surface (and the
//! [`ColoredGraph::new`] constructor) uses 1-based labels instead.

mod canon;
mod format;
mod graph6;

use std::collections::BTreeMap;

pub use canon::{automorphisms, CanonicalForm};
pub use format::{parse_colored_graph, parse_colored_graphs, write_colored_graph, ColoredGraphJson};
pub use graph6::{decode_graph6, encode_graph6};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("edge {0}{1} appears more than once")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} is out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("colors must be 1..=k; color 0 is not allowed")]
    ZeroColor,
    #[error("color {missing} is unused but color {max} is present")]
    ColorGap { missing: usize, max: usize },
    #[error("unknown color {0}")]
    UnknownColor(usize),
    #[error("edge index {0} is not an edge of the graph")]
    NotAnEdge(usize),
    #[error("an angle must pair two distinct edges")]
    DegenerateAngle,
    #[error("the angle graph contains a cycle")]
    CyclicAngleSet,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An undirected simple graph on vertices `0..n`, edges stored sorted with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Builds a graph from 0-based edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::Loop(u + 1));
            }
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x + 1, n });
                }
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0 + 1, w[0].1 + 1));
        }
        Ok(SimpleGraph { n, edges: list })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|j| (0..j).map(move |i| (i, j)));
        SimpleGraph::new(n, edges).expect("complete graph is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| match () {
                _ if a == v => Some(b),
                _ if b == v => Some(a),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    /// Monochromatic coloring of this graph.
    pub fn monochromatic(&self) -> ColoredGraph {
        ColoredGraph {
            graph: self.clone(),
            colors: vec![0; self.edges.len()],
            k: usize::from(!self.edges.is_empty()),
        }
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        self.monochromatic().canonical_form()
    }

    /// Removes vertex `v` and its edges; higher labels shift down by one.
    pub fn delete_vertex(&self, v: usize) -> SimpleGraph {
        let shift = |x: usize| if x > v { x - 1 } else { x };
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| a != v && b != v)
            .map(|&(a, b)| (shift(a), shift(b)));
        SimpleGraph::new(self.n - 1, edges).expect("subgraph of a simple graph")
    }

    /// Subgraph on the same vertex set keeping the edges with the given indices.
    pub fn edge_subgraph(&self, subset: &[usize]) -> SimpleGraph {
        SimpleGraph::new(self.n, subset.iter().map(|&e| self.edges[e])).expect("subgraph of a simple graph")
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> SimpleGraph {
        SimpleGraph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("relabeling preserves simplicity")
    }
}

/// A simple graph with a surjective edge coloring onto colors `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoredGraph {
    graph: SimpleGraph,
    colors: Vec<usize>,
    k: usize,
}

/// Checks a 1-based labeled edge list `(u, v, color)` on `n` vertices.
pub fn validate(n: usize, edges: &[(usize, usize, usize)]) -> Result<(), GraphError> {
    ColoredGraph::new(n, edges.iter().copied()).map(|_| ())
}

impl ColoredGraph {
    /// Builds a colored graph from 1-based `(u, v, color)` triples.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, usize)>) -> Result<Self, GraphError> {
        let mut triples = Vec::new();
        for (u, v, c) in edges {
            if c == 0 {
                return Err(GraphError::ZeroColor);
            }
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            triples.push((u - 1, v - 1, c - 1));
        }
        Self::from_zero_based(n, triples)
    }

    /// Builds a colored graph from 0-based `(u, v, color)` triples.
    pub fn from_zero_based(
        n: usize,
        triples: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut triples: Vec<_> = triples
            .into_iter()
            .map(|(u, v, c)| (u.min(v), u.max(v), c))
            .collect();
        triples.sort_unstable();
        let graph = SimpleGraph::new(n, triples.iter().map(|&(u, v, _)| (u, v)))?;
        let colors: Vec<usize> = triples.iter().map(|t| t.2).collect();
        let k = colors.iter().max().map_or(0, |m| m + 1);
        let mut used = vec![false; k];
        for &c in &colors {
            used[c] = true;
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(GraphError::ColorGap {
                missing: missing + 1,
                max: k,
            });
        }
        Ok(ColoredGraph { graph, colors, k })
    }

    /// Builds a colored graph from a graph and per-edge colors (0-based),
    /// renumbering colors by first appearance so the coloring is surjective.
    pub fn with_renumbered_colors(graph: SimpleGraph, colors: &[usize]) -> Self {
        assert_eq!(graph.edge_count(), colors.len());
        let mut map = BTreeMap::new();
        let renumbered = colors
            .iter()
            .map(|c| {
                let next = map.len();
                *map.entry(*c).or_insert(next)
            })
            .collect();
        ColoredGraph {
            graph,
            colors: renumbered,
            k: map.len(),
        }
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n
    }

    /// Number of colors, `|c|`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.graph.edges
    }

    /// 0-based color of each edge, parallel to [`Self::edges`].
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, e: usize) -> usize {
        self.colors[e]
    }

    /// Edge indices of each color class.
    pub fn color_classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.k];
        for (e, &c) in self.colors.iter().enumerate() {
            classes[c].push(e);
        }
        classes
    }

    /// 1-based `(u, v, color)` triples, sorted.
    pub fn labeled_edges(&self) -> Vec<(usize, usize, usize)> {
        self.graph
            .edges
            .iter()
            .zip(&self.colors)
            .map(|(&(u, v), &c)| (u + 1, v + 1, c + 1))
            .collect()
    }

    /// Number of distinct colors among the edges with the given indices.
    pub fn chi(&self, subset: &[usize]) -> Result<usize, GraphError> {
        let mut seen = vec![false; self.k];
        for &e in subset {
            let c = *self.colors.get(e).ok_or(GraphError::NotAnEdge(e))?;
            seen[c] = true;
        }
        Ok(seen.into_iter().filter(|&s| s).count())
    }

    /// The subgraph `(V, E_i)` of edges with 0-based color `i`, as a
    /// monochromatic graph on the same vertex set.
    pub fn color_subgraph(&self, i: usize) -> Result<ColoredGraph, GraphError> {
        if i >= self.k {
            return Err(GraphError::UnknownColor(i + 1));
        }
        let edges = self
            .graph
            .edges
            .iter()
            .zip(&self.colors)
            .filter(|(_, &c)| c == i)
            .map(|(&e, _)| e);
        Ok(SimpleGraph::new(self.n(), edges)
            .expect("subgraph of a simple graph")
            .monochromatic())
    }

    /// Relabels vertices (`v ↦ perm[v]`) and colors (`c ↦ color_perm[c]`).
    pub fn relabel(&self, perm: &[usize], color_perm: &[usize]) -> ColoredGraph {
        ColoredGraph::from_zero_based(
            self.n(),
            self.graph
                .edges
                .iter()
                .zip(&self.colors)
                .map(|(&(u, v), &c)| (perm[u], perm[v], color_perm[c])),
        )
        .expect("relabeling preserves validity")
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canon::canonical_form(self)
    }

    /// Star decomposition of each color class: the lexicographically least edge
    /// of a class is the center, every other edge of the class is paired with it.
    pub fn to_angle_set(&self) -> AngleSet {
        let mut angles = Vec::new();
        for class in self.color_classes() {
            let center = self.graph.edges[class[0]];
            for &leaf in &class[1..] {
                angles.push((self.graph.edges[leaf], center));
            }
        }
        AngleSet {
            n: self.n(),
            angles,
            isolated: self.graph.edges.clone(),
        }
    }
}

type VertexPair = (usize, usize);

/// A set of angles, each pairing two distinct edges `(leaf, other)`.
///
/// `isolated` lists extra edges that belong to the direction graph without
/// taking part in any angle, which is how singleton color classes survive
/// the round trip through [`ColoredGraph::to_angle_set`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleSet {
    n: usize,
    angles: Vec<(VertexPair, VertexPair)>,
    isolated: Vec<VertexPair>,
}

impl AngleSet {
    /// Angles given as 0-based vertex pairs on `n` vertices.
    pub fn new(n: usize, angles: impl IntoIterator<Item = (VertexPair, VertexPair)>) -> Result<Self, GraphError> {
        let norm = |(u, v): VertexPair| -> Result<VertexPair, GraphError> {
            if u == v {
                return Err(GraphError::Loop(u + 1));
            }
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x + 1, n });
                }
            }
            Ok((u.min(v), u.max(v)))
        };
        let mut list = Vec::new();
        for (e, f) in angles {
            let (e, f) = (norm(e)?, norm(f)?);
            if e == f {
                return Err(GraphError::DegenerateAngle);
            }
            list.push((e, f));
        }
        Ok(AngleSet {
            n,
            angles: list,
            isolated: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn angles(&self) -> &[(VertexPair, VertexPair)] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// `E(A)` together with the isolated edges, sorted.
    pub fn edge_support(&self) -> Vec<VertexPair> {
        let mut edges: Vec<_> = self
            .angles
            .iter()
            .flat_map(|&(e, f)| [e, f])
            .chain(self.isolated.iter().copied())
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// `V(A)`, sorted.
    pub fn vertex_support(&self) -> Vec<usize> {
        let mut vs: Vec<_> = self.edge_support().into_iter().flat_map(|(u, v)| [u, v]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// The direction graph `G₁(A)` on all `n` vertices.
    pub fn direction_graph(&self) -> SimpleGraph {
        SimpleGraph::new(self.n, self.edge_support()).expect("edge support is simple")
    }

    /// Edges of the angle graph `G₂(A)` as index pairs into [`Self::edge_support`].
    pub fn angle_graph_edges(&self) -> Vec<(usize, usize)> {
        let support = self.edge_support();
        let idx = |e: &VertexPair| support.binary_search(e).expect("edge in support");
        self.angles.iter().map(|(e, f)| (idx(e), idx(f))).collect()
    }

    /// Whether `G₂(A)` contains a cycle (parallel angles count as a 2-cycle).
    pub fn g2_has_cycle(&self) -> bool {
        let support = self.edge_support();
        let mut uf = UnionFind::new(support.len());
        self.angle_graph_edges()
            .into_iter()
            .any(|(a, b)| !uf.union(a, b))
    }

    /// Colors the direction graph by the connected components of `G₂(A)`.
    /// Components are numbered in order of their least edge.
    pub fn to_colored_graph(&self) -> Result<ColoredGraph, GraphError> {
        if self.g2_has_cycle() {
            return Err(GraphError::CyclicAngleSet);
        }
        let support = self.edge_support();
        let mut uf = UnionFind::new(support.len());
        for (a, b) in self.angle_graph_edges() {
            uf.union(a, b);
        }
        let roots: Vec<usize> = (0..support.len()).map(|i| uf.find(i)).collect();
        let graph = SimpleGraph::new(self.n, support).expect("edge support is simple");
        Ok(ColoredGraph::with_renumbered_colors(graph, &roots))
    }
}

/// Inverse of [`ColoredGraph::to_angle_set`].
pub fn from_angle_set(a: &AngleSet) -> Result<ColoredGraph, GraphError> {
    a.to_colored_graph()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}
