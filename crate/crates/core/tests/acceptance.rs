//! Acceptance criteria. Prints one line per criterion and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use angle_rigidity::algebraic::{factorization_check, matroid_rank_equivalence, sample_complexified, Factorization};
use angle_rigidity::colored_graph::{ColoredGraph, SimpleGraph};
use angle_rigidity::combinatorics;
use angle_rigidity::enumeration::verdict::{decide, VerdictOptions};
use angle_rigidity::enumeration::{
    coloring_orbits, count_k_color_rigid, enumerate_colorings, generate_candidate_graphs, per_graph_coloring_stats,
    EnumerationJob, Summary,
};
use angle_rigidity::exactla::{self, DEFAULT_FLOAT_TOLERANCE};
use angle_rigidity::extensions::{construct_sequence, k4_base_cases, swap_determinant_identity, ExtensionError};
use angle_rigidity::rigidity::{self, ExactRealization, Realization};
use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn colored(n: usize, edges: &[(usize, usize, usize)]) -> ColoredGraph {
    ColoredGraph::new(n, edges.iter().copied()).expect("valid graph")
}

/// Random simple graph on `n` vertices with at least one edge and a random
/// surjective coloring.
fn random_colored(rng: &mut ChaCha8Rng, n: usize) -> ColoredGraph {
    loop {
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|j| (0..j).map(move |i| (i, j)))
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        if edges.is_empty() {
            continue;
        }
        let k = rng.gen_range(1..=edges.len());
        let colors: Vec<usize> = (0..edges.len()).map(|_| rng.gen_range(0..k)).collect();
        let g = SimpleGraph::new(n, edges).expect("distinct pairs");
        return ColoredGraph::with_renumbered_colors(g, &colors);
    }
}

fn table_row(n: usize, k: usize) -> Result<Summary, String> {
    count_k_color_rigid(&EnumerationJob::new(n, k)).map(|r| r.summary).map_err(e)
}

fn criterion_1() -> Outcome {
    let colorings = enumerate_colorings(&SimpleGraph::complete(4), 2);
    ensure(colorings.len() == 5, || format!("{} colorings", colorings.len()))?;
    let forms: BTreeSet<_> = colorings.iter().map(|g| g.canonical_form()).collect();
    let bases: BTreeSet<_> = k4_base_cases().iter().map(|g| g.canonical_form()).collect();
    ensure(forms.len() == 5 && forms == bases, || "colorings not pairwise distinct".into())?;
    for g in &colorings {
        let r = rigidity::report_generic(g, 1, rigidity::DEFAULT_BOUND).map_err(e)?;
        ensure(r.minimal && r.rank == 6, || format!("rank {} for {:?}", r.rank, g.labeled_edges()))?;
    }
    Ok("5 canonical colorings, exact rank 6 each".into())
}

fn criterion_2() -> Outcome {
    let expected = [(4, 1, 1, 5), (5, 2, 2, 71), (6, 12, 12, 2227), (7, 97, 91, 99148)];
    for (n, graphs, rigid, total) in expected {
        let s = table_row(n, 2)?;
        let got = (n, s.graphs, s.k_color_rigid, s.rigid_colored_total);
        ensure(got == (n, graphs, rigid, total), || format!("n={n}: got {got:?}"))?;
    }
    Ok("rows n=4..7 = 1/1/5, 2/2/71, 12/12/2227, 97/91/99148".into())
}

fn criterion_3() -> Outcome {
    let expected = [(4, (5, 5)), (5, (26, 45)), (6, (67, 304)), (7, (46, 2047))];
    for (n, mm) in expected {
        let got = per_graph_coloring_stats(n, &EnumerationJob::new(n, 2)).map_err(e)?;
        ensure(got == Some(mm), || format!("n={n}: got {got:?}"))?;
    }
    Ok("(5,5) (26,45) (67,304), and (46,2047) for n=7".into())
}

fn criterion_4() -> Outcome {
    let expected = [(5, 3, 1), (6, 3, 8), (5, 4, 1), (6, 4, 5)];
    for (n, k, count) in expected {
        let s = table_row(n, k)?;
        ensure(s.k_color_rigid == count, || format!("n={n} k={k}: got {}", s.k_color_rigid))?;
    }
    Ok("k=3: 1, 8; k=4: 1, 5".into())
}

fn criterion_5() -> Outcome {
    // 4-cycle in one color, diagonals in the other, at an irrational position
    let g = colored(4, &[(1, 2, 1), (1, 4, 1), (2, 3, 1), (3, 4, 1), (1, 3, 2), (2, 4, 2)]);
    let (s2, s3, s6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
    let p = Realization::new(vec![
        [0.0, 0.0],
        [1.0, 0.0],
        [1.0 + 1.0 / s2, 1.0 / s6],
        [(1.0 + s2) / 2.0, (1.0 + s2) / (2.0 * s3)],
    ]);
    let r = rigidity::report_float(&g, &p, DEFAULT_FLOAT_TOLERANCE).map_err(e)?;
    ensure(r.infinitesimally_rigid && r.rank == 6, || format!("float rank {}", r.rank))?;

    let g = colored(4, &[(1, 2, 1), (1, 3, 1), (1, 4, 1), (2, 3, 1), (2, 4, 2), (3, 4, 2)]);
    let p: ExactRealization = "1 0 0\n2 1 0\n3 2 1\n4 0 1\n".parse().map_err(e)?;
    let r = rigidity::report_at(&g, &p).map_err(e)?;
    ensure(!r.infinitesimally_rigid && r.flex_dimension == 5, || {
        format!("special position: rigid={} kernel {}", r.infinitesimally_rigid, r.flex_dimension)
    })?;
    let generic = rigidity::report_generic(&g, 3, rigidity::DEFAULT_BOUND).map_err(e)?;
    ensure(generic.infinitesimally_rigid, || "same coloring not rigid at a random position".into())?;
    Ok("irrational K4 rank 6 (float); special position kernel dimension 5 (exact)".into())
}

fn criterion_6() -> Outcome {
    let left = colored(
        8,
        &[
            (1, 2, 1), (1, 3, 1), (2, 3, 1), (1, 4, 1), (2, 4, 1), (5, 6, 1), (5, 7, 1),
            (6, 7, 1), (5, 8, 1), (6, 8, 1), (1, 5, 1), (3, 7, 1), (3, 4, 2), (7, 8, 2),
        ],
    );
    let right = colored(
        8,
        &[
            (1, 2, 1), (2, 3, 1), (1, 3, 1), (2, 4, 1), (1, 5, 1), (3, 7, 1), (2, 6, 1), (5, 6, 1),
            (6, 7, 1), (5, 7, 1), (6, 8, 1), (3, 4, 2), (5, 8, 2), (1, 4, 3), (7, 8, 3),
        ],
    );
    ensure(combinatorics::maxwell_colored_check(&left).is_ok(), || "left fails Maxwell".into())?;
    ensure(combinatorics::transversal_condition_global(&left).is_none(), || "left has a global transversal".into())?;
    ensure(!combinatorics::transversal_property(&left), || "left has per-color transversals".into())?;
    let r = rigidity::report_generic(&left, 1, rigidity::DEFAULT_BOUND).map_err(e)?;
    ensure(!r.minimal, || "left is minimally rigid".into())?;
    ensure(combinatorics::transversal_property(&right), || "right lacks per-color transversals".into())?;
    ensure(combinatorics::transversal_condition_global(&right).is_none(), || "right has a global transversal".into())?;
    let r = rigidity::report_generic(&right, 1, rigidity::DEFAULT_BOUND).map_err(e)?;
    ensure(r.minimal, || format!("right rank {} of {}", r.rank, r.target_rank))?;
    Ok("left: Maxwell ok, no global or per-color transversal, flexible; right: per-color transversals only, minimally rigid".into())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..500 {
        let n = rng.gen_range(2..=7);
        let g = random_colored(&mut rng, n);
        let p = rigidity::random_realization(n, rng.gen(), 1000).map_err(e)?;
        let m = rigidity::exact_matrix(&g, &p).map_err(e)?;
        for v in rigidity::trivial_flex_vectors(&g, &p).map_err(e)? {
            ensure(exactla::mat_vec(&m, &v).iter().all(Zero::is_zero), || format!("instance {i}: {:?}", g.labeled_edges()))?;
        }
    }
    Ok("500 random frameworks, all four vectors in the kernel".into())
}

/// Every colored graph on `n` vertices up to isomorphism.
fn all_colored_graphs(n: usize) -> Vec<ColoredGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut graphs = std::collections::BTreeMap::new();
    for mask in 1u32..(1 << pairs.len()) {
        let g = SimpleGraph::new(n, (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i])).unwrap();
        graphs.entry(g.canonical_form()).or_insert(g);
    }
    let mut out = Vec::new();
    for g in graphs.values() {
        for k in 1..=g.edge_count() {
            for c in coloring_orbits(g, k) {
                let colors: Vec<usize> = c.iter().map(|&x| x as usize).collect();
                out.push(ColoredGraph::with_renumbered_colors(g.clone(), &colors));
            }
        }
    }
    out
}

fn check_algebraic(g: &ColoredGraph, seed: u64) -> Result<(), String> {
    ensure(factorization_check(g, seed).map_err(e)?, || format!("factorization fails for {:?}", g.labeled_edges()))?;
    let cmp = matroid_rank_equivalence(g, seed).map_err(e)?;
    ensure(cmp.verdict && cmp.left_nullities_agree, || format!("{cmp:?} for {:?}", g.labeled_edges()))
}

fn criterion_8() -> Outcome {
    let mut count = 0;
    for n in 2..=5 {
        for g in all_colored_graphs(n) {
            check_algebraic(&g, count)?;
            count += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let n = rng.gen_range(2..=7);
        let g = random_colored(&mut rng, n);
        check_algebraic(&g, rng.gen())?;
    }
    // the product really is the differential matrix, not a shape coincidence
    let g = colored(4, &[(1, 2, 1), (1, 3, 1), (1, 4, 1), (2, 3, 2), (2, 4, 2), (3, 4, 1)]);
    let f = Factorization::new(&g, &sample_complexified(4, 1)).map_err(e)?;
    ensure(f.m.rows() == 4 && f.holds(), || "reference factorization".into())?;
    Ok(format!("{count} colored graphs with n <= 5 plus 200 random with n <= 7"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pool = Vec::new();
    for n in 4..=6 {
        for k in 3..=4 {
            pool.extend(generate_candidate_graphs(n, k).map_err(e)?.into_iter().map(|g| (g, k)));
        }
    }
    let (mut held, mut detected, mut skipped) = (0, 0, 0);
    while held < 100 {
        let (g, k) = pool.choose(&mut rng).expect("nonempty pool").clone();
        let colors: Vec<usize> = (0..g.edge_count()).map(|_| rng.gen_range(0..k)).collect();
        let cg = ColoredGraph::with_renumbered_colors(g, &colors);
        if cg.k() != k {
            continue;
        }
        let last: Vec<usize> = (0..cg.edge_count()).filter(|&f| cg.color(f) == k - 1).collect();
        let edge = *last.choose(&mut rng).expect("last color is used");
        let (x, y) = cg.edges()[edge];
        let others: Vec<usize> = (0..cg.n()).filter(|&v| v != x && v != y).collect();
        let pinned: Vec<usize> = others.choose_multiple(&mut rng, 2).copied().collect();
        let p = rigidity::random_realization(cg.n(), rng.gen(), 1000).map_err(e)?;
        let r = swap_determinant_identity(&cg, edge, &p, (pinned[0], pinned[1])).map_err(e)?;
        // the corrupted identity can only be told apart when the correction term is nonzero
        if r.deleted.is_zero() {
            skipped += 1;
            continue;
        }
        ensure(r.holds && r.check(r.sign), || format!("identity fails for {:?}", cg.labeled_edges()))?;
        held += 1;
        if !r.check(-r.sign) {
            detected += 1;
        }
    }
    ensure(detected == held, || format!("sign corruption detected {detected} of {held}"))?;
    Ok(format!("100 instances hold, corruption detected in all ({skipped} with zero correction skipped)"))
}

fn criterion_10() -> Outcome {
    let mut count = 0;
    for n in 4..=7 {
        for k in 2..=3 {
            for g in generate_candidate_graphs(n, k).map_err(e)? {
                let p = rigidity::random_realization(n, count, rigidity::DEFAULT_BOUND).map_err(e)?;
                let exact = rigidity::bar_joint_rank(&g, &p).map_err(e)?;
                let pebble = combinatorics::r2_rank(&g);
                ensure(exact == pebble, || format!("{g:?}: pebble {pebble}, exact {exact}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} candidate graphs with n <= 7"))
}

fn criterion_11() -> Outcome {
    let opts = VerdictOptions {
        bound: rigidity::DEFAULT_BOUND,
        filter: false,
    };
    let (mut total, mut rigid) = (0, 0);
    for n in 4..=6 {
        for g in generate_candidate_graphs(n, 2).map_err(e)? {
            for cg in enumerate_colorings(&g, 2) {
                let matrix = decide(&cg, total, opts).decision.is_rigid();
                let predicate = combinatorics::two_color_rigid_predicate(&cg).map_err(e)?;
                let constructed = match construct_sequence(&cg) {
                    Ok(seq) => seq.verify().is_ok(),
                    Err(ExtensionError::PredicateFalse) => false,
                    Err(err) => return Err(format!("{:?}: {err}", cg.labeled_edges())),
                };
                ensure(matrix == predicate && predicate == constructed, || {
                    format!("{:?}: matrix {matrix}, predicate {predicate}, construction {constructed}", cg.labeled_edges())
                })?;
                total += 1;
                rigid += matrix as usize;
            }
        }
    }
    Ok(format!("{total} two-colored graphs, {rigid} rigid, all three verdicts agree"))
}

fn criterion_12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut circuits = Vec::new();
    for n in 4..=7 {
        for g in generate_candidate_graphs(n, 2).map_err(e)? {
            if let Some(edges) = combinatorics::circuit_edges(&g) {
                circuits.push(g.edge_subgraph(&edges));
            }
        }
    }
    for i in 0..50 {
        let c = circuits.choose(&mut rng).expect("nonempty");
        let p = rigidity::random_realization(c.n(), rng.gen(), 1000).map_err(e)?;
        let stresses = rigidity::bar_joint_stresses(c, &p).map_err(e)?;
        ensure(stresses.len() == 1, || format!("circuit {i}: {} stresses", stresses.len()))?;
        let omega = &stresses[0];
        let m = c.edge_count();
        for mask in 1u32..(1 << m) {
            let subset: Vec<usize> = (0..m).filter(|j| mask >> j & 1 == 1).collect();
            let sum = rigidity::stress_sum(c, &p, omega, &subset).map_err(e)?;
            let full = subset.len() == m;
            ensure(sum.is_zero() == full, || format!("circuit {i} {:?}: subset {subset:?} sums to {sum}", c.edges()))?;
        }
    }
    Ok("50 circuits: zero on the full edge set, nonzero on every proper subset".into())
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 12] = [
        ("bichromatic K4 colorings", criterion_1, Some(Duration::from_secs(1))),
        ("two-color counts per n", criterion_2, Some(Duration::from_secs(300))),
        ("min/max rigid colorings per graph", criterion_3, Some(Duration::from_secs(300))),
        ("k-color-rigid counts, k = 3, 4", criterion_4, Some(Duration::from_secs(600))),
        ("rigid but not globally, globally but not infinitesimally", criterion_5, Some(Duration::from_secs(2))),
        ("transversal counterexample graphs", criterion_6, Some(Duration::from_secs(10))),
        ("trivial flexes in the kernel", criterion_7, None),
        ("differential matrix factorization", criterion_8, None),
        ("color-swap determinant identity", criterion_9, None),
        ("pebble game rank vs exact rank", criterion_10, None),
        ("two-color characterization, three ways", criterion_11, None),
        ("circuit stress sums", criterion_12, None),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| *f == id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, budget) {
            if elapsed > *limit {
                outcome = Err(format!("took {elapsed:.1?}, budget {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} ({elapsed:.2?})"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {detail} ({elapsed:.2?})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
