//! Matrices of the angle matroid: the scaled differential matrix `M(A)` of
//! an angle set, the star-block matrix `T`, the matrix `J`, and rank
//! comparisons against the angle-rigidity matrix.
//!
//! The angle `a_(ij)(kl)` is `X_ij Y_kl / (Y_ij X_kl)` in coordinates
//! `X_ij = x_i − x_j`, `Y_ij = y_i − y_j`. Row `(ij)(kl)` of `M(A)` is its
//! differential scaled by `S_ij S_kl / a`, where `S_ij = X_ij Y_ij`.

use num::{BigRational, Zero};
use serde::{Deserialize, Serialize};

use crate::colored_graph::{AngleSet, ColoredGraph, GraphError, SimpleGraph};
use crate::exactla::{self, LinAlgError, Matrix, RationalMatrix};
use crate::rigidity::{self, ExactRealization, RigidityError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraicError {
    #[error("angle graph has a cycle")]
    Cyclic,
    #[error("angle graph has no cycle")]
    Acyclic,
    #[error("coordinates have {got} vertices, angle set has {expected}")]
    Size { expected: usize, got: usize },
    #[error("edge {0}{1} is not in the graph")]
    MissingEdge(usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Independent rational coordinates `x_i`, `y_i`, all `2n` values distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexifiedRealization {
    x: Vec<BigRational>,
    y: Vec<BigRational>,
}

impl ComplexifiedRealization {
    pub fn new(x: Vec<BigRational>, y: Vec<BigRational>) -> Self {
        assert_eq!(x.len(), y.len());
        ComplexifiedRealization { x, y }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn big_x(&self, i: usize, j: usize) -> BigRational {
        &self.x[i] - &self.x[j]
    }

    pub fn big_y(&self, i: usize, j: usize) -> BigRational {
        &self.y[i] - &self.y[j]
    }

    pub fn s(&self, (i, j): (usize, usize)) -> BigRational {
        self.big_x(i, j) * self.big_y(i, j)
    }

    /// The points `(x_i, y_i)` as a plane realization.
    pub fn as_realization(&self) -> ExactRealization {
        ExactRealization::new(self.x.iter().cloned().zip(self.y.iter().cloned()).map(|(a, b)| [a, b]).collect())
    }
}

/// Random integer coordinates, deterministic in `seed`.
pub fn sample_complexified(n: usize, seed: u64) -> ComplexifiedRealization {
    let p = rigidity::random_integer_points(n, seed, rigidity::DEFAULT_BOUND).to_exact();
    let (x, y) = p.points().iter().cloned().map(|[a, b]| (a, b)).unzip();
    ComplexifiedRealization { x, y }
}

fn differential_rows(a: &AngleSet, q: &ComplexifiedRealization) -> Result<RationalMatrix, AlgebraicError> {
    if q.n() != a.n() {
        return Err(AlgebraicError::Size {
            expected: a.n(),
            got: q.n(),
        });
    }
    let mut m = Matrix::filled(a.len(), 2 * a.n(), BigRational::zero());
    for (r, &((i, j), (k, l))) in a.angles().iter().enumerate() {
        let (s_ij, s_kl) = (q.s((i, j)), q.s((k, l)));
        let entries = [
            (2 * i, &s_kl * q.big_y(i, j)),
            (2 * i + 1, &s_kl * q.big_x(j, i)),
            (2 * j, &s_kl * q.big_y(j, i)),
            (2 * j + 1, &s_kl * q.big_x(i, j)),
            (2 * k, &s_ij * q.big_y(l, k)),
            (2 * k + 1, &s_ij * q.big_x(k, l)),
            (2 * l, &s_ij * q.big_y(k, l)),
            (2 * l + 1, &s_ij * q.big_x(l, k)),
        ];
        for (c, v) in entries {
            m[(r, c)] += v;
        }
    }
    Ok(m)
}

/// `M(A)`, of shape `|A| × 2n`, for an acyclic angle set.
pub fn differential_matrix(a: &AngleSet, q: &ComplexifiedRealization) -> Result<RationalMatrix, AlgebraicError> {
    if a.g2_has_cycle() {
        return Err(AlgebraicError::Cyclic);
    }
    differential_rows(a, q)
}

/// `T`, of shape `|A| × |E|`: row `(ℓ, f)` has `−S_f` in column `ℓ` and
/// `S_ℓ` in column `f`. For the star decomposition of a coloring this is
/// block diagonal over the color classes.
pub fn star_block_matrix(
    g: &SimpleGraph,
    a: &AngleSet,
    q: &ComplexifiedRealization,
) -> Result<RationalMatrix, AlgebraicError> {
    let idx = |(u, v): (usize, usize)| g.edge_index(u, v).ok_or(AlgebraicError::MissingEdge(u + 1, v + 1));
    let mut t = Matrix::filled(a.len(), g.edge_count(), BigRational::zero());
    for (r, &(leaf, center)) in a.angles().iter().enumerate() {
        t[(r, idx(leaf)?)] = -q.s(center);
        t[(r, idx(center)?)] = q.s(leaf);
    }
    Ok(t)
}

/// `R(G, p⊥)` at `p = (x_i, y_i)`.
pub fn rotated_rigidity_matrix(g: &SimpleGraph, q: &ComplexifiedRealization) -> Result<RationalMatrix, AlgebraicError> {
    Ok(rigidity::rigidity_matrix(g, &q.as_realization().perp())?)
}

/// `J`: the angle-rigidity matrix at `p⊥` with each color entry replaced by `S_ij`.
pub fn j_matrix(g: &ColoredGraph, q: &ComplexifiedRealization) -> Result<RationalMatrix, AlgebraicError> {
    let mut j = rigidity::angle_rigidity_matrix(g, &q.as_realization().perp())?;
    let n = g.n();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        j[(e, 2 * n + g.color(e))] = q.s((u, v));
    }
    Ok(j)
}

/// Matrices involved in the factorization `M(A) = T · R(G, p⊥)`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub angles: AngleSet,
    pub m: RationalMatrix,
    pub t: RationalMatrix,
    pub r: RationalMatrix,
}

impl Factorization {
    pub fn new(g: &ColoredGraph, q: &ComplexifiedRealization) -> Result<Self, AlgebraicError> {
        let angles = g.to_angle_set();
        Ok(Factorization {
            m: differential_matrix(&angles, q)?,
            t: star_block_matrix(g.graph(), &angles, q)?,
            r: rotated_rigidity_matrix(g.graph(), q)?,
            angles,
        })
    }

    /// Exact comparison of `M(A)` with `T · R`.
    pub fn holds(&self) -> bool {
        exactla::mat_mul(&self.t, &self.r).is_ok_and(|p| p == self.m)
    }
}

/// Builds `A = to_angle_set(g)` and checks `M(A) = T · R(G, p⊥)` exactly.
pub fn factorization_check(g: &ColoredGraph, seed: u64) -> Result<bool, AlgebraicError> {
    Ok(Factorization::new(g, &sample_complexified(g.n(), seed))?.holds())
}

/// Ranks of `M(A)`, the angle-rigidity matrix and `J` on matched data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidRankComparison {
    pub angles: usize,
    pub rank_m: usize,
    pub edges: usize,
    pub rank_r: usize,
    pub rank_j: usize,
    /// `rank M(A) = |A|` exactly when `rank R(G,c,p) = |E|`.
    pub verdict: bool,
    /// `|A| − rank M(A) = |E| − rank J`.
    pub left_nullities_agree: bool,
}

pub fn matroid_rank_equivalence(g: &ColoredGraph, seed: u64) -> Result<MatroidRankComparison, AlgebraicError> {
    let q = sample_complexified(g.n(), seed);
    let angles = g.to_angle_set();
    let rank_m = exactla::rank(&differential_matrix(&angles, &q)?);
    let rank_r = exactla::rank(&rigidity::angle_rigidity_matrix(g, &q.as_realization())?);
    let rank_j = exactla::rank(&j_matrix(g, &q)?);
    let (a, e) = (angles.len(), g.edge_count());
    Ok(MatroidRankComparison {
        angles: a,
        rank_m,
        edges: e,
        rank_r,
        rank_j,
        verdict: (rank_m == a) == (rank_r == e),
        left_nullities_agree: a - rank_m == e - rank_j,
    })
}

/// For an angle set whose angle graph has a cycle: true if `M(A)` is rank deficient.
pub fn cycle_dependence_check(a: &AngleSet, q: &ComplexifiedRealization) -> Result<bool, AlgebraicError> {
    if !a.g2_has_cycle() {
        return Err(AlgebraicError::Acyclic);
    }
    Ok(exactla::rank(&differential_rows(a, q)?) < a.len())
}
