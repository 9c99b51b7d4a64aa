//! Realizations, the bar-joint rigidity matrix `R(G,p)`, the angle-rigidity
//! matrix `[R(G,p) | M(G,c,p)]`, trivial flexes, equilibrium stresses and
//! rank-based rigidity reports.
//!
//! Column layout of the angle-rigidity matrix: vertex `v` owns columns
//! `2v` and `2v + 1`, color `i` owns column `2n + i`. Row `e` belongs to
//! edge `e` of the (sorted) edge list.

use std::collections::HashSet;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num::{BigInt, BigRational, Num, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::colored_graph::{ColoredGraph, GraphError, SimpleGraph};
use crate::exactla::{self, FieldMode, LinAlgError, Matrix, RationalMatrix};
use crate::seeds;

/// Default half-width of the integer box random coordinates are drawn from.
pub const DEFAULT_BOUND: i64 = 1_000_000;

/// Number of realizations tried before a rank deficiency is reported.
pub const GENERIC_ATTEMPTS: usize = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RigidityError {
    #[error("realization has {got} points, graph has {expected} vertices")]
    RealizationSize { expected: usize, got: usize },
    #[error("edge {0}{1} has coincident endpoints")]
    CoincidentEndpoints(usize, usize),
    #[error("all points coincide")]
    AllPointsCoincide,
    #[error("at least two vertices are required")]
    TooFewVertices,
    #[error("coordinate bound {bound} is below n² = {min}")]
    BoundTooSmall { bound: i64, min: i64 },
    #[error("vector is not an equilibrium stress of the framework")]
    NotAStress,
    #[error("stress has {got} entries, expected {expected}")]
    StressLength { expected: usize, got: usize },
    #[error("realization parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Field elements usable as coordinates.
pub trait Coord: Num + Clone + Neg<Output = Self> + PartialEq {}
impl<T: Num + Clone + Neg<Output = T> + PartialEq> Coord for T {}

/// A map from vertices `0..n` to points in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization<F> {
    points: Vec<[F; 2]>,
}

pub type ExactRealization = Realization<BigRational>;

impl<F> Realization<F> {
    pub fn new(points: Vec<[F; 2]>) -> Self {
        Realization { points }
    }

    pub fn points(&self) -> &[[F; 2]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl<F: Coord> Realization<F> {
    /// The 90° anticlockwise rotation `p ↦ p⊥`, `(x, y) ↦ (−y, x)`.
    pub fn perp(&self) -> Self {
        Realization {
            points: self
                .points
                .iter()
                .map(|[x, y]| [-y.clone(), x.clone()])
                .collect(),
        }
    }

    pub fn map_points(&self, f: impl Fn(&[F; 2]) -> [F; 2]) -> Self {
        Realization {
            points: self.points.iter().map(f).collect(),
        }
    }
}

impl Realization<i64> {
    pub fn to_exact(&self) -> ExactRealization {
        self.map_to(|x| BigRational::from_integer(BigInt::from(x)))
    }

    fn map_to<G>(&self, f: impl Fn(i64) -> G) -> Realization<G> {
        Realization {
            points: self.points.iter().map(|&[x, y]| [f(x), f(y)]).collect(),
        }
    }
}

impl ExactRealization {
    pub fn to_f64(&self) -> Realization<f64> {
        Realization {
            points: self
                .points
                .iter()
                .map(|[x, y]| [x.to_f64().unwrap_or(f64::NAN), y.to_f64().unwrap_or(f64::NAN)])
                .collect(),
        }
    }
}

impl fmt::Display for ExactRealization {
    /// One `v x y` line per vertex, 1-based, coordinates as `num/den`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, [x, y]) in self.points.iter().enumerate() {
            writeln!(f, "{} {} {}", v + 1, x, y)?;
        }
        Ok(())
    }
}

fn parse_points<F>(text: &str, coord: impl Fn(&str) -> Option<F>) -> Result<Realization<F>, RigidityError> {
    let mut rows: Vec<(usize, [F; 2])> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| RigidityError::Parse { line: i + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(format!("expected `v x y`, found {} fields", fields.len())));
        }
        let v: usize = fields[0]
            .parse()
            .map_err(|_| err(format!("bad vertex `{}`", fields[0])))?;
        let x = coord(fields[1]).ok_or_else(|| err(format!("bad coordinate `{}`", fields[1])))?;
        let y = coord(fields[2]).ok_or_else(|| err(format!("bad coordinate `{}`", fields[2])))?;
        rows.push((v, [x, y]));
    }
    rows.sort_by_key(|r| r.0);
    for (i, (v, _)) in rows.iter().enumerate() {
        if *v != i + 1 {
            return Err(RigidityError::Parse {
                line: 0,
                msg: format!("vertices must be 1..={} without gaps or repeats", rows.len()),
            });
        }
    }
    Ok(Realization::new(rows.into_iter().map(|r| r.1).collect()))
}

impl FromStr for ExactRealization {
    type Err = RigidityError;

    fn from_str(text: &str) -> Result<Self, RigidityError> {
        parse_points(text, parse_rational)
    }
}

/// Same `v x y` layout with decimal coordinates.
impl FromStr for Realization<f64> {
    type Err = RigidityError;

    fn from_str(text: &str) -> Result<Self, RigidityError> {
        parse_points(text, |s| s.parse::<f64>().ok().filter(|x| x.is_finite()))
    }
}

/// Parses `a`, `a/b` or `-a/b`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((a, b)) => {
            let den = BigInt::from_str(b).ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(BigInt::from_str(a).ok()?, den))
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

/// `2n` pairwise distinct integer coordinates drawn uniformly from
/// `[-bound, bound]`, deterministic in `seed`.
pub fn random_integer_points(n: usize, seed: u64, bound: i64) -> Realization<i64> {
    assert!(
        (2 * bound + 1) as u128 >= 2 * n as u128,
        "box too small for distinct coordinates"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = HashSet::with_capacity(2 * n);
    let mut next = || loop {
        let x = rng.gen_range(-bound..=bound);
        if used.insert(x) {
            return x;
        }
    };
    let points = (0..n).map(|_| [next(), next()]).collect();
    Realization::new(points)
}

/// Random exact realization of an `n`-vertex graph; `bound` must be at least `n²`.
pub fn random_realization(n: usize, seed: u64, bound: i64) -> Result<ExactRealization, RigidityError> {
    let min = (n * n) as i64;
    if bound < min {
        return Err(RigidityError::BoundTooSmall { bound, min });
    }
    Ok(random_integer_points(n, seed, bound).to_exact())
}

fn check_realization<F: Coord>(g: &SimpleGraph, p: &Realization<F>) -> Result<(), RigidityError> {
    if p.len() != g.n() {
        return Err(RigidityError::RealizationSize {
            expected: g.n(),
            got: p.len(),
        });
    }
    for &(u, v) in g.edges() {
        if p.points[u] == p.points[v] {
            return Err(RigidityError::CoincidentEndpoints(u + 1, v + 1));
        }
    }
    Ok(())
}

fn diff<F: Coord>(a: &[F; 2], b: &[F; 2]) -> [F; 2] {
    [a[0].clone() - b[0].clone(), a[1].clone() - b[1].clone()]
}

fn dot<F: Coord>(a: &[F; 2], b: &[F; 2]) -> F {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone()
}

fn fill_rigidity_rows<F: Coord>(g: &SimpleGraph, p: &Realization<F>, m: &mut Matrix<F>) {
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let d = diff(&p.points[u], &p.points[v]);
        m[(e, 2 * u)] = d[0].clone();
        m[(e, 2 * u + 1)] = d[1].clone();
        m[(e, 2 * v)] = -d[0].clone();
        m[(e, 2 * v + 1)] = -d[1].clone();
    }
}

/// The bar-joint rigidity matrix `R(G,p)`, of shape `|E| × 2|V|`.
pub fn rigidity_matrix<F: Coord>(g: &SimpleGraph, p: &Realization<F>) -> Result<Matrix<F>, RigidityError> {
    check_realization(g, p)?;
    let mut m = Matrix::filled(g.edge_count(), 2 * g.n(), F::zero());
    fill_rigidity_rows(g, p, &mut m);
    Ok(m)
}

/// The angle-rigidity matrix `[R(G,p) | M(G,c,p)]`, of shape
/// `|E| × (2|V| + |c|)`, with `M` holding `−‖p_v − p_w‖²` in the column of
/// the edge's color.
pub fn angle_rigidity_matrix<F: Coord>(g: &ColoredGraph, p: &Realization<F>) -> Result<Matrix<F>, RigidityError> {
    check_realization(g.graph(), p)?;
    let n = g.n();
    let mut m = Matrix::filled(g.edge_count(), 2 * n + g.k(), F::zero());
    fill_rigidity_rows(g.graph(), p, &mut m);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let d = diff(&p.points[u], &p.points[v]);
        m[(e, 2 * n + g.color(e))] = -dot(&d, &d);
    }
    Ok(m)
}

/// `2|V| + |c| − 4`, the rank of an infinitesimally angle-rigid framework.
pub fn target_rank(g: &ColoredGraph) -> usize {
    (2 * g.n() + g.k()).saturating_sub(4)
}

/// The kernel vectors `(u^(1,0), 0)`, `(u^(0,1), 0)`, `(u^{p⊥}, 0)` and
/// `(u^p, 1)`: translations, rotation and scaling.
pub fn trivial_flex_vectors<F: Coord>(g: &ColoredGraph, p: &Realization<F>) -> Result<[Vec<F>; 4], RigidityError> {
    if p.len() != g.n() {
        return Err(RigidityError::RealizationSize {
            expected: g.n(),
            got: p.len(),
        });
    }
    if p.points.windows(2).all(|w| w[0] == w[1]) {
        return Err(RigidityError::AllPointsCoincide);
    }
    let (n, k) = (g.n(), g.k());
    let mut out: [Vec<F>; 4] = std::array::from_fn(|_| vec![F::zero(); 2 * n + k]);
    for (v, [x, y]) in p.points.iter().enumerate() {
        out[0][2 * v] = F::one();
        out[1][2 * v + 1] = F::one();
        out[2][2 * v] = -y.clone();
        out[2][2 * v + 1] = x.clone();
        out[3][2 * v] = x.clone();
        out[3][2 * v + 1] = y.clone();
    }
    for i in 0..k {
        out[3][2 * n + i] = F::one();
    }
    Ok(out)
}

fn rational_string(x: &BigRational) -> String {
    x.to_string()
}

/// Rank-based verdicts for one colored framework.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub vertices: usize,
    pub edges: usize,
    pub colors: usize,
    pub rank: usize,
    /// `2|V| + |c| − 4`.
    pub target_rank: usize,
    pub infinitesimally_rigid: bool,
    /// No nonzero equilibrium stress: `rank = |E|`.
    pub independent: bool,
    /// Rigid and `|E| = 2|V| + |c| − 4`.
    pub minimal: bool,
    /// Dimension of the kernel of the angle-rigidity matrix.
    pub flex_dimension: usize,
    /// Basis of the cokernel as rationals (`num/den`), one vector per stress,
    /// indexed by the sorted edge list. Empty in float mode.
    pub stress_basis: Vec<Vec<String>>,
    /// The realization the verdict was computed at, `[x, y]` per vertex.
    pub realization: Vec<[String; 2]>,
    /// Seed of that realization when it was sampled.
    pub seed: Option<u64>,
    pub field: FieldMode,
    /// True when the verdict is about the colored graph (sampled realizations):
    /// rigid verdicts are certain, flexible ones probabilistic.
    pub generic: bool,
}

impl RigidityReport {
    fn from_rank(g: &ColoredGraph, rank: usize, field: FieldMode) -> Self {
        let target = target_rank(g);
        let rigid = rank == target;
        RigidityReport {
            vertices: g.n(),
            edges: g.edge_count(),
            colors: g.k(),
            rank,
            target_rank: target,
            infinitesimally_rigid: rigid,
            independent: rank == g.edge_count(),
            minimal: rigid && g.edge_count() == target,
            flex_dimension: 2 * g.n() + g.k() - rank,
            stress_basis: Vec::new(),
            realization: Vec::new(),
            seed: None,
            field,
            generic: false,
        }
    }
}

/// Exact report at a fixed rational realization.
pub fn report_at(g: &ColoredGraph, p: &ExactRealization) -> Result<RigidityReport, RigidityError> {
    if g.n() < 2 {
        return Err(RigidityError::TooFewVertices);
    }
    let m = angle_rigidity_matrix(g, p)?;
    let stresses = exactla::cokernel_basis(&m);
    let rank = g.edge_count() - stresses.len();
    let mut report = RigidityReport::from_rank(g, rank, FieldMode::Exact);
    report.stress_basis = stresses
        .iter()
        .map(|w| w.iter().map(rational_string).collect())
        .collect();
    report.realization = p
        .points
        .iter()
        .map(|[x, y]| [rational_string(x), rational_string(y)])
        .collect();
    Ok(report)
}

/// Floating-point report; stresses are not extracted.
pub fn report_float(g: &ColoredGraph, p: &Realization<f64>, tolerance: f64) -> Result<RigidityReport, RigidityError> {
    if g.n() < 2 {
        return Err(RigidityError::TooFewVertices);
    }
    let m = angle_rigidity_matrix(g, p)?;
    let rank = exactla::rank_f64(&m, tolerance);
    let mut report = RigidityReport::from_rank(g, rank, FieldMode::Float { tolerance });
    report.realization = p.points.iter().map(|[x, y]| [x.to_string(), y.to_string()]).collect();
    Ok(report)
}

/// Report for the colored graph itself: exact ranks at up to
/// [`GENERIC_ATTEMPTS`] random realizations, keeping the best.
pub fn report_generic(g: &ColoredGraph, seed: u64, bound: i64) -> Result<RigidityReport, RigidityError> {
    if g.n() < 2 {
        return Err(RigidityError::TooFewVertices);
    }
    let ceiling = target_rank(g).min(g.edge_count());
    let mut best: Option<(usize, u64, ExactRealization)> = None;
    for attempt in 0..GENERIC_ATTEMPTS {
        let s = seeds::derive(seed, attempt as u64);
        let p = random_realization(g.n(), s, bound)?;
        let rank = exactla::rank(&angle_rigidity_matrix(g, &p)?);
        if best.as_ref().is_none_or(|b| rank > b.0) {
            best = Some((rank, s, p));
        }
        if rank >= ceiling {
            break;
        }
    }
    let (_, s, p) = best.expect("at least one attempt");
    let mut report = report_at(g, &p)?;
    report.seed = Some(s);
    report.generic = true;
    Ok(report)
}

/// `Σ_{vw ∈ F} ω_vw ‖p_v − p_w‖²` for an equilibrium stress `ω` of `(G,p)`.
pub fn stress_sum(
    g: &SimpleGraph,
    p: &ExactRealization,
    omega: &[BigRational],
    subset: &[usize],
) -> Result<BigRational, RigidityError> {
    if omega.len() != g.edge_count() {
        return Err(RigidityError::StressLength {
            expected: g.edge_count(),
            got: omega.len(),
        });
    }
    let r = rigidity_matrix(g, p)?;
    if !exactla::vec_mat(omega, &r).iter().all(Zero::is_zero) {
        return Err(RigidityError::NotAStress);
    }
    let mut total = BigRational::zero();
    for &e in subset {
        let (u, v) = *g.edges().get(e).ok_or(GraphError::NotAnEdge(e))?;
        let d = diff(&p.points[u], &p.points[v]);
        total += &omega[e] * dot(&d, &d);
    }
    Ok(total)
}

/// Zero-pads a stress of the color class `(G_i, p)` to a stress of the
/// angle-rigidity matrix. `omega_i` is indexed by the edges of color `i`
/// in edge-list order.
pub fn lift_monochromatic_stress(
    g: &ColoredGraph,
    p: &ExactRealization,
    color: usize,
    omega_i: &[BigRational],
) -> Result<Vec<BigRational>, RigidityError> {
    let class = g
        .color_classes()
        .into_iter()
        .nth(color)
        .ok_or(GraphError::UnknownColor(color + 1))?;
    if omega_i.len() != class.len() {
        return Err(RigidityError::StressLength {
            expected: class.len(),
            got: omega_i.len(),
        });
    }
    let sub = g.color_subgraph(color)?;
    let r = rigidity_matrix(sub.graph(), p)?;
    if !exactla::vec_mat(omega_i, &r).iter().all(Zero::is_zero) {
        return Err(RigidityError::NotAStress);
    }
    let mut lifted = vec![BigRational::zero(); g.edge_count()];
    for (w, &e) in omega_i.iter().zip(&class) {
        lifted[e] = w.clone();
    }
    let full = angle_rigidity_matrix(g, p)?;
    if !exactla::vec_mat(&lifted, &full).iter().all(Zero::is_zero) {
        return Err(RigidityError::NotAStress);
    }
    Ok(lifted)
}

/// Cokernel basis of the bar-joint matrix `R(G,p)`.
pub fn bar_joint_stresses(g: &SimpleGraph, p: &ExactRealization) -> Result<Vec<Vec<BigRational>>, RigidityError> {
    Ok(exactla::cokernel_basis(&rigidity_matrix(g, p)?))
}

/// Exact rank of `R(G,p)`.
pub fn bar_joint_rank(g: &SimpleGraph, p: &ExactRealization) -> Result<usize, RigidityError> {
    Ok(exactla::rank(&rigidity_matrix(g, p)?))
}

/// Exact angle-rigidity matrix over the rationals.
pub fn exact_matrix(g: &ColoredGraph, p: &ExactRealization) -> Result<RationalMatrix, RigidityError> {
    angle_rigidity_matrix(g, p)
}

/// Support of a vector: indices of nonzero entries.
pub fn support(v: &[BigRational]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// True if `x` is an integer of absolute value one.
pub fn is_unit(x: &BigRational) -> bool {
    x.is_integer() && x.abs().is_one()
}
