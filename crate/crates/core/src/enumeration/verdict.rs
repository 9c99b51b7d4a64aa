//! Rigidity verdicts for enumerated colorings.
//!
//! The first test is a rank computation modulo a large prime at a seeded
//! integer realization. The rank modulo a prime never exceeds the rank over
//! the rationals, so reaching the target rank is a certificate. Anything
//! else goes through optional necessary-condition filters, then retries at
//! fresh realizations with a doubled coordinate box, then one exact rank.

use serde::{Deserialize, Serialize};

use crate::colored_graph::ColoredGraph;
use crate::combinatorics;
use crate::exactla::{self, Matrix};
use crate::rigidity::{self, Realization};
use crate::seeds;

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// Full rank modulo the prime at the first realization.
    RigidModular,
    /// Full rank modulo the prime at a retry realization.
    RigidOnRetry,
    /// A color class is dependent in the rigidity matroid.
    DependentColorClass,
    /// Some color has no transversal of the other colors leaving a basis.
    NoTransversal,
    /// Rank deficient at every retry and over the rationals.
    RankDeficient,
    /// Edge count differs from the target rank, so the graph cannot be minimal.
    EdgeCount,
}

impl Decision {
    pub fn is_rigid(self) -> bool {
        matches!(self, Decision::RigidModular | Decision::RigidOnRetry)
    }
}

/// Number of retry realizations after the first one.
pub const RETRIES: u64 = 3;

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Seed for one coloring: depends only on the job seed, the graph and the coloring.
pub fn coloring_seed(job_seed: u64, graph6: &str, coloring: &[u8]) -> u64 {
    seeds::derive(seeds::derive(job_seed, fnv1a(graph6.as_bytes())), fnv1a(coloring))
}

/// Integer angle-rigidity matrix at a seeded realization.
pub fn integer_matrix(g: &ColoredGraph, seed: u64, bound: i64) -> (Realization<i64>, Matrix<i64>) {
    let p = rigidity::random_integer_points(g.n(), seed, bound);
    let m = rigidity::angle_rigidity_matrix(g, &p).expect("distinct coordinates give distinct points");
    (p, m)
}

pub fn modular_rank(g: &ColoredGraph, seed: u64, bound: i64) -> usize {
    exactla::rank_mod_p(&integer_matrix(g, seed, bound).1)
}

fn exact_rank(g: &ColoredGraph, seed: u64, bound: i64) -> usize {
    exactla::rank(&exactla::int_to_rational(&integer_matrix(g, seed, bound).1))
}

/// Settings for [`decide`].
#[derive(Debug, Clone, Copy)]
pub struct VerdictOptions {
    pub bound: i64,
    /// Apply the necessary-condition filters before retrying.
    pub filter: bool,
}

/// Outcome of [`decide`] with the realizations that were tried.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    pub rank: usize,
    pub target: usize,
    pub seeds_tried: Vec<u64>,
    pub exact_checked: bool,
}

/// Decides whether the colored graph is minimally angle-rigid: the edge
/// count and the rank both equal `2n + k − 4`.
pub fn decide(g: &ColoredGraph, seed: u64, opts: VerdictOptions) -> Verdict {
    let target = rigidity::target_rank(g);
    let mut v = Verdict {
        decision: Decision::RankDeficient,
        rank: 0,
        target,
        seeds_tried: vec![seed],
        exact_checked: false,
    };
    if g.edge_count() != target {
        v.decision = Decision::EdgeCount;
        return v;
    }
    v.rank = modular_rank(g, seed, opts.bound);
    if v.rank == target {
        v.decision = Decision::RigidModular;
        return v;
    }
    if opts.filter {
        let classes_sparse = (0..g.k()).all(|i| combinatorics::is_sparse(g.color_subgraph(i).expect("color in range").graph()));
        if !classes_sparse {
            v.decision = Decision::DependentColorClass;
            return v;
        }
        if !combinatorics::transversal_property(g) {
            v.decision = Decision::NoTransversal;
            return v;
        }
    }
    let bound = opts.bound.saturating_mul(2);
    for i in 1..=RETRIES {
        let s = seeds::derive(seed, i);
        v.seeds_tried.push(s);
        let r = modular_rank(g, s, bound);
        v.rank = v.rank.max(r);
        if r == target {
            v.decision = Decision::RigidOnRetry;
            return v;
        }
    }
    let last = *v.seeds_tried.last().expect("nonempty");
    v.exact_checked = true;
    let r = exact_rank(g, last, bound);
    v.rank = v.rank.max(r);
    if r == target {
        v.decision = Decision::RigidOnRetry;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colored_graph::SimpleGraph;

    #[test]
    fn modular_matches_exact_on_small_graphs() {
        let g = ColoredGraph::new(4, [(1, 2, 2), (1, 3, 1), (1, 4, 1), (2, 3, 1), (2, 4, 1), (3, 4, 1)]).unwrap();
        for s in 0..20 {
            assert_eq!(modular_rank(&g, s, 1000), exact_rank(&g, s, 1000));
        }
        let opts = VerdictOptions { bound: 1000, filter: true };
        assert_eq!(decide(&g, 1, opts).decision, Decision::RigidModular);
        let mono = SimpleGraph::complete(4).monochromatic();
        assert_eq!(decide(&mono, 1, opts).decision, Decision::EdgeCount);
        // monochromatic K4 plus a degree-2 vertex in a second color
        let dep = ColoredGraph::new(
            5,
            [(1, 2, 1), (1, 3, 1), (1, 4, 1), (2, 3, 1), (2, 4, 1), (3, 4, 1), (1, 5, 2), (2, 5, 2)],
        )
        .unwrap();
        assert_eq!(decide(&dep, 1, opts).decision, Decision::DependentColorClass);
        let v = decide(&dep, 1, VerdictOptions { bound: 1000, filter: false });
        assert_eq!(v.decision, Decision::RankDeficient);
        assert!(v.exact_checked);
        assert_eq!(v.seeds_tried.len(), 4);
        assert_eq!(v.rank, 7);
    }

    #[test]
    fn seeds_depend_on_all_inputs() {
        let a = coloring_seed(1, "C~", &[0, 1]);
        assert_ne!(a, coloring_seed(2, "C~", &[0, 1]));
        assert_ne!(a, coloring_seed(1, "C^", &[0, 1]));
        assert_ne!(a, coloring_seed(1, "C~", &[1, 0]));
        assert_eq!(a, coloring_seed(1, "C~", &[0, 1]));
    }
}
