//! Colored 0- and 1-extensions, their reductions, the bichromatic K₄ base
//! cases, construction sequences for two-colored rigid graphs, color swaps
//! and the color-swap determinant identity.
//!
//! Extensions add the new vertex `w` with the next free label. Vertex and
//! color numbers inside [`ExtensionStep`] are 1-based.

use std::collections::BTreeSet;

use num::{BigRational, Zero};
use serde::{Deserialize, Serialize};

use crate::colored_graph::{ColoredGraph, GraphError, SimpleGraph};
use crate::combinatorics;
use crate::exactla::{self, LinAlgError, Matrix, RationalMatrix};
use crate::rigidity::{ExactRealization, RigidityError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtensionError {
    #[error("attachment vertices must be distinct")]
    SameVertex,
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("color {0} is not in the color set")]
    UnknownColor(usize),
    #[error("{0}{1} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("{0}{1} is already an edge")]
    AlreadyAnEdge(usize, usize),
    #[error("new edge colors do not preserve the color of the removed edge")]
    NotColorPreserving,
    #[error("vertex {vertex} has degree {degree}")]
    Degree { vertex: usize, degree: usize },
    #[error("edge already has color {0}")]
    SameColor(usize),
    #[error("graph does not satisfy the two-color rigidity characterization")]
    PredicateFalse,
    #[error("no reduction keeps the graph in the class (n = {0})")]
    NoReduction(usize),
    #[error("expected {expected} edges for the determinant identity, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("determinant identity needs at least 3 colors and 4 vertices")]
    TooSmall,
    #[error("edge must have the last color")]
    NotLastColor,
    #[error("pinned vertices must be distinct and off the edge")]
    BadPinnedPair,
    #[error("replayed graph does not match the recorded result")]
    ReplayMismatch,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// One extension move. `w` is always the next vertex label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExtensionStep {
    /// Adds `w` with edges `wx`, `wy`.
    Zero { x: usize, y: usize, color_wx: usize, color_wy: usize },
    /// Removes `xy` and adds `w` with edges `wx`, `wy`, `wz`.
    One {
        x: usize,
        y: usize,
        z: usize,
        color_wx: usize,
        color_wy: usize,
        color_wz: usize,
    },
}

impl ExtensionStep {
    pub fn apply(&self, g: &ColoredGraph) -> Result<ColoredGraph, ExtensionError> {
        let dec = |v: usize| v.checked_sub(1).ok_or(ExtensionError::VertexOutOfRange(v));
        let col = |c: usize| c.checked_sub(1).ok_or(ExtensionError::UnknownColor(c));
        match *self {
            ExtensionStep::Zero { x, y, color_wx, color_wy } => zero_extend(g, dec(x)?, dec(y)?, col(color_wx)?, col(color_wy)?),
            ExtensionStep::One {
                x,
                y,
                z,
                color_wx,
                color_wy,
                color_wz,
            } => one_extend_cp(g, (dec(x)?, dec(y)?), dec(z)?, [col(color_wx)?, col(color_wy)?, col(color_wz)?]),
        }
    }

    fn relabel(&self, map: &[usize]) -> ExtensionStep {
        let m = |v: usize| map[v - 1] + 1;
        match *self {
            ExtensionStep::Zero { x, y, color_wx, color_wy } => ExtensionStep::Zero {
                x: m(x),
                y: m(y),
                color_wx,
                color_wy,
            },
            ExtensionStep::One {
                x,
                y,
                z,
                color_wx,
                color_wy,
                color_wz,
            } => ExtensionStep::One {
                x: m(x),
                y: m(y),
                z: m(z),
                color_wx,
                color_wy,
                color_wz,
            },
        }
    }
}

fn triples(g: &ColoredGraph) -> Vec<(usize, usize, usize)> {
    g.edges().iter().zip(g.colors()).map(|(&(u, v), &c)| (u, v, c)).collect()
}

fn check_vertex(g: &ColoredGraph, v: usize) -> Result<(), ExtensionError> {
    if v >= g.n() {
        return Err(ExtensionError::VertexOutOfRange(v + 1));
    }
    Ok(())
}

fn check_color(g: &ColoredGraph, c: usize) -> Result<(), ExtensionError> {
    if c >= g.k() {
        return Err(ExtensionError::UnknownColor(c + 1));
    }
    Ok(())
}

/// Adds vertex `w = n` joined to `x` and `y` (0-based labels and colors).
pub fn zero_extend(g: &ColoredGraph, x: usize, y: usize, color_wx: usize, color_wy: usize) -> Result<ColoredGraph, ExtensionError> {
    if x == y {
        return Err(ExtensionError::SameVertex);
    }
    check_vertex(g, x)?;
    check_vertex(g, y)?;
    check_color(g, color_wx)?;
    check_color(g, color_wy)?;
    let w = g.n();
    let mut t = triples(g);
    t.extend([(x, w, color_wx), (y, w, color_wy)]);
    Ok(ColoredGraph::from_zero_based(w + 1, t)?)
}

/// Removes `xy` and adds `w = n` joined to `x`, `y`, `z`. Colors are for
/// `wx`, `wy`, `wz`; one of the first two must equal the color of `xy`.
pub fn one_extend_cp(
    g: &ColoredGraph,
    (x, y): (usize, usize),
    z: usize,
    colors: [usize; 3],
) -> Result<ColoredGraph, ExtensionError> {
    for v in [x, y, z] {
        check_vertex(g, v)?;
    }
    if x == y || z == x || z == y {
        return Err(ExtensionError::SameVertex);
    }
    for c in colors {
        check_color(g, c)?;
    }
    let e = g.graph().edge_index(x, y).ok_or(ExtensionError::NotAnEdge(x + 1, y + 1))?;
    let removed = g.color(e);
    if colors[0] != removed && colors[1] != removed {
        return Err(ExtensionError::NotColorPreserving);
    }
    let w = g.n();
    let mut t = triples(g);
    t.remove(e);
    t.extend([(x, w, colors[0]), (y, w, colors[1]), (z, w, colors[2])]);
    Ok(ColoredGraph::from_zero_based(w + 1, t)?)
}

fn shift(v: usize, removed: usize) -> usize {
    if v > removed {
        v - 1
    } else {
        v
    }
}

fn delete_with_colors(g: &ColoredGraph, v: usize, extra: Option<(usize, usize, usize)>) -> Result<ColoredGraph, ExtensionError> {
    let mut t: Vec<_> = triples(g)
        .into_iter()
        .filter(|&(a, b, _)| a != v && b != v)
        .map(|(a, b, c)| (shift(a, v), shift(b, v), c))
        .collect();
    t.extend(extra);
    Ok(ColoredGraph::from_zero_based(g.n() - 1, t)?)
}

fn edge_color(g: &ColoredGraph, a: usize, b: usize) -> usize {
    g.color(g.graph().edge_index(a, b).expect("edge present"))
}

/// Deletes the degree-2 vertex `v`. The returned step, applied to the
/// reduced graph, recreates `g` with `v` relabeled last.
pub fn zero_reduce(g: &ColoredGraph, v: usize) -> Result<(ColoredGraph, ExtensionStep), ExtensionError> {
    check_vertex(g, v)?;
    let nb = g.graph().neighbors(v);
    if nb.len() != 2 {
        return Err(ExtensionError::Degree {
            vertex: v + 1,
            degree: nb.len(),
        });
    }
    let reduced = delete_with_colors(g, v, None)?;
    let step = ExtensionStep::Zero {
        x: shift(nb[0], v) + 1,
        y: shift(nb[1], v) + 1,
        color_wx: edge_color(g, v, nb[0]) + 1,
        color_wy: edge_color(g, v, nb[1]) + 1,
    };
    Ok((reduced, step))
}

/// Deletes the degree-3 vertex `v` and adds the edge `ab` between two of
/// its neighbors, colored like `va` or `vb`.
pub fn one_reduce_cp(
    g: &ColoredGraph,
    v: usize,
    (a, b): (usize, usize),
    color_ab: usize,
) -> Result<(ColoredGraph, ExtensionStep), ExtensionError> {
    check_vertex(g, v)?;
    let nb = g.graph().neighbors(v);
    if nb.len() != 3 {
        return Err(ExtensionError::Degree {
            vertex: v + 1,
            degree: nb.len(),
        });
    }
    if a == b || !nb.contains(&a) || !nb.contains(&b) {
        return Err(ExtensionError::SameVertex);
    }
    if g.graph().edge_index(a, b).is_some() {
        return Err(ExtensionError::AlreadyAnEdge(a + 1, b + 1));
    }
    let (ca, cb) = (edge_color(g, v, a), edge_color(g, v, b));
    if color_ab != ca && color_ab != cb {
        return Err(ExtensionError::NotColorPreserving);
    }
    let z = *nb.iter().find(|&&u| u != a && u != b).expect("third neighbor");
    let reduced = delete_with_colors(g, v, Some((shift(a, v), shift(b, v), color_ab)))?;
    let step = ExtensionStep::One {
        x: shift(a, v) + 1,
        y: shift(b, v) + 1,
        z: shift(z, v) + 1,
        color_wx: ca + 1,
        color_wy: cb + 1,
        color_wz: edge_color(g, v, z) + 1,
    };
    Ok((reduced, step))
}

/// The five bichromatic colorings of K₄ up to vertex and color permutation,
/// ordered by canonical code.
pub fn k4_base_cases() -> Vec<ColoredGraph> {
    let k4 = SimpleGraph::complete(4);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1u32..63 {
        let colors: Vec<usize> = (0..6).map(|e| (mask >> e & 1) as usize).collect();
        let g = ColoredGraph::with_renumbered_colors(k4.clone(), &colors);
        let cf = g.canonical_form();
        if seen.insert(cf.clone()) {
            out.push((cf, g));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, g)| g).collect()
}

/// A bichromatic K₄ and the extension steps that build a target graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionSequence {
    pub base: ColoredGraph,
    pub steps: Vec<ExtensionStep>,
    pub result: ColoredGraph,
}

impl ConstructionSequence {
    /// Applies the steps to the base, returning every intermediate graph
    /// (the base first, the final graph last).
    pub fn replay_all(&self) -> Result<Vec<ColoredGraph>, ExtensionError> {
        let mut out = vec![self.base.clone()];
        for step in &self.steps {
            let next = step.apply(out.last().expect("nonempty"))?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn replay(&self) -> Result<ColoredGraph, ExtensionError> {
        Ok(self.replay_all()?.pop().expect("nonempty"))
    }

    /// Replays and compares canonical forms with the recorded result.
    pub fn verify(&self) -> Result<ColoredGraph, ExtensionError> {
        let g = self.replay()?;
        if g.canonical_form() != self.result.canonical_form() {
            return Err(ExtensionError::ReplayMismatch);
        }
        Ok(g)
    }
}

fn in_class(g: &ColoredGraph) -> bool {
    combinatorics::two_color_rigid_predicate(g).unwrap_or(false)
}

/// One reduction that keeps the graph in the class: degree-2 vertices first,
/// then degree-3 vertices, each in label order, with neighbor pairs and
/// colors tried lexicographically.
fn reduce_once(g: &ColoredGraph) -> Option<(usize, ColoredGraph, ExtensionStep)> {
    let degrees = g.graph().degrees();
    for v in (0..g.n()).filter(|&v| degrees[v] == 2) {
        if let Ok((h, step)) = zero_reduce(g, v) {
            if in_class(&h) {
                return Some((v, h, step));
            }
        }
    }
    for v in (0..g.n()).filter(|&v| degrees[v] == 3) {
        let nb = g.graph().neighbors(v);
        for (a, b) in [(nb[0], nb[1]), (nb[0], nb[2]), (nb[1], nb[2])] {
            if g.graph().edge_index(a, b).is_some() {
                continue;
            }
            let mut colors = vec![edge_color(g, v, a), edge_color(g, v, b)];
            colors.sort_unstable();
            colors.dedup();
            for c in colors {
                if let Ok((h, step)) = one_reduce_cp(g, v, (a, b), c) {
                    if in_class(&h) {
                        return Some((v, h, step));
                    }
                }
            }
        }
    }
    None
}

/// Reduces a two-colored graph satisfying the circuit characterization to a
/// bichromatic K₄ and returns the extensions that rebuild it.
pub fn construct_sequence(g: &ColoredGraph) -> Result<ConstructionSequence, ExtensionError> {
    if !in_class(g) {
        return Err(ExtensionError::PredicateFalse);
    }
    // (removed vertex, step in the labels of the reduced graph)
    let mut chain = Vec::new();
    let mut cur = g.clone();
    while cur.n() > 4 {
        let (v, h, step) = reduce_once(&cur).ok_or(ExtensionError::NoReduction(cur.n()))?;
        chain.push((v, step));
        cur = h;
    }
    let base = cur;
    // Replaying puts each new vertex last; `map` sends labels of the chain
    // graph at this stage to labels of the replayed graph.
    let mut map: Vec<usize> = (0..base.n()).collect();
    let mut steps = Vec::with_capacity(chain.len());
    for (v, step) in chain.into_iter().rev() {
        let step = step.relabel(&map);
        let n_new = map.len() + 1;
        map = (0..n_new)
            .map(|u| match u.cmp(&v) {
                std::cmp::Ordering::Equal => n_new - 1,
                std::cmp::Ordering::Less => map[u],
                std::cmp::Ordering::Greater => map[u - 1],
            })
            .collect();
        steps.push(step);
    }
    let seq = ConstructionSequence {
        base,
        steps,
        result: g.clone(),
    };
    let replayed = seq.replay()?;
    debug_assert_eq!(replayed, g.relabel(&map, &(0..g.k()).collect::<Vec<_>>()));
    if replayed.canonical_form() != g.canonical_form() {
        return Err(ExtensionError::ReplayMismatch);
    }
    Ok(seq)
}

/// Changes the color of edge `e` to `j` (0-based). If the old color class
/// becomes empty, higher colors shift down by one.
pub fn color_swap(g: &ColoredGraph, e: usize, j: usize) -> Result<ColoredGraph, ExtensionError> {
    if e >= g.edge_count() {
        return Err(GraphError::NotAnEdge(e).into());
    }
    check_color(g, j)?;
    let i = g.color(e);
    if i == j {
        return Err(ExtensionError::SameColor(j + 1));
    }
    let mut colors = g.colors().to_vec();
    colors[e] = j;
    if !colors.contains(&i) {
        for c in &mut colors {
            if *c > i {
                *c -= 1;
            }
        }
    }
    let t = g.edges().iter().zip(&colors).map(|(&(u, v), &c)| (u, v, c));
    Ok(ColoredGraph::from_zero_based(g.n(), t)?)
}

/// The three determinants of the color-swap identity and its sign.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapDeterminants {
    /// `det S(G, c, p)`.
    pub original: BigRational,
    /// `det S(G, c*, p)` with the edge moved to the second-to-last color.
    pub swapped: BigRational,
    /// `det S(G − e, c', p)` with the last two colors merged.
    pub deleted: BigRational,
    /// `‖p_x − p_y‖²` for the edge `xy`.
    pub length_sq: BigRational,
    /// `(−1)^k`.
    pub sign: i32,
    pub holds: bool,
}

impl SwapDeterminants {
    /// Checks `original = swapped + sign · length_sq · deleted`.
    pub fn check(&self, sign: i32) -> bool {
        let s = BigRational::from_integer(sign.into());
        self.original == &self.swapped + s * &self.length_sq * &self.deleted
    }
}

/// Rows ordered by `rows`, vertex columns of `a` and `b` dropped, then one
/// column per color in `0..k`.
fn pinned_matrix(
    n: usize,
    rows: &[((usize, usize), usize)],
    k: usize,
    p: &ExactRealization,
    (a, b): (usize, usize),
) -> RationalMatrix {
    let mut cols = vec![usize::MAX; 2 * n];
    let mut next = 0;
    for v in (0..n).filter(|&v| v != a && v != b) {
        cols[2 * v] = next;
        cols[2 * v + 1] = next + 1;
        next += 2;
    }
    let mut m = Matrix::filled(rows.len(), next + k, BigRational::zero());
    let pts = p.points();
    for (r, &((u, v), c)) in rows.iter().enumerate() {
        let d = [&pts[u][0] - &pts[v][0], &pts[u][1] - &pts[v][1]];
        for t in 0..2 {
            if cols[2 * u + t] != usize::MAX {
                m[(r, cols[2 * u + t])] = d[t].clone();
            }
            if cols[2 * v + t] != usize::MAX {
                m[(r, cols[2 * v + t])] = -d[t].clone();
            }
        }
        m[(r, next + c)] = -(&d[0] * &d[0] + &d[1] * &d[1]);
    }
    m
}

/// Evaluates the determinant identity for an edge `e` of the last color,
/// with the columns of the pinned vertices `a`, `b` removed.
pub fn swap_determinant_identity(
    g: &ColoredGraph,
    e: usize,
    p: &ExactRealization,
    (a, b): (usize, usize),
) -> Result<SwapDeterminants, ExtensionError> {
    let (n, k) = (g.n(), g.k());
    if n < 4 || k < 3 {
        return Err(ExtensionError::TooSmall);
    }
    let expected = 2 * n - 4 + k;
    if g.edge_count() != expected {
        return Err(ExtensionError::EdgeCount {
            expected,
            found: g.edge_count(),
        });
    }
    if e >= g.edge_count() {
        return Err(GraphError::NotAnEdge(e).into());
    }
    if g.color(e) != k - 1 {
        return Err(ExtensionError::NotLastColor);
    }
    let (x, y) = g.edges()[e];
    if a == b || a >= n || b >= n || [a, b].iter().any(|&v| v == x || v == y) {
        return Err(ExtensionError::BadPinnedPair);
    }
    if p.len() != n {
        return Err(RigidityError::RealizationSize { expected: n, got: p.len() }.into());
    }
    let others: Vec<((usize, usize), usize)> = (0..g.edge_count())
        .filter(|&f| f != e)
        .map(|f| (g.edges()[f], g.color(f)))
        .collect();
    let with_first = |c: usize| {
        let mut rows = vec![((x, y), c)];
        rows.extend(others.iter().copied());
        rows
    };
    let merged: Vec<_> = others.iter().map(|&(uv, c)| (uv, c.min(k - 2))).collect();
    let original = exactla::determinant(&pinned_matrix(n, &with_first(k - 1), k, p, (a, b)))?;
    let swapped = exactla::determinant(&pinned_matrix(n, &with_first(k - 2), k, p, (a, b)))?;
    let deleted = exactla::determinant(&pinned_matrix(n, &merged, k - 1, p, (a, b)))?;
    let d = [&p.points()[x][0] - &p.points()[y][0], &p.points()[x][1] - &p.points()[y][1]];
    let length_sq = &d[0] * &d[0] + &d[1] * &d[1];
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let mut out = SwapDeterminants {
        original,
        swapped,
        deleted,
        length_sq,
        sign,
        holds: false,
    };
    out.holds = out.check(sign);
    Ok(out)
}
