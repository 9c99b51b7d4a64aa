//! Exhaustive enumeration of colored graphs and their rigidity verdicts.

mod generate;
pub mod verdict;

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colored_graph::{decode_graph6, encode_graph6, ColoredGraph, GraphError, SimpleGraph};
use crate::combinatorics;
use crate::rigidity::DEFAULT_BOUND;
use crate::seeds::{self, DEFAULT_SEED};

pub use generate::*;
use verdict::{coloring_seed, decide, Decision, VerdictOptions};

#[derive(Debug, Error)]
pub enum EnumerationError {
    #[error("built-in generation supports 4 <= n <= {MAX_GENERATED_N}, got n = {0}")]
    UnsupportedN(usize),
    #[error("invalid job: {0}")]
    InvalidJob(String),
    #[error("graph6 line {line}: {source}")]
    Graph6 { line: usize, source: GraphError },
    #[error("record file line {line}: {source}")]
    Record { line: usize, source: serde_json::Error },
    #[error("thread pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Where candidate graphs come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    Generated,
    /// Graphs supplied by the caller, for instance read from a graph6 file.
    Given(Vec<SimpleGraph>),
}

/// One enumeration run.
#[derive(Debug, Clone)]
pub struct EnumerationJob {
    pub n: usize,
    pub k: usize,
    pub source: GraphSource,
    pub seed: u64,
    /// Worker threads; 0 lets rayon choose.
    pub jobs: usize,
    pub bound: i64,
    /// Reject with the combinatorial necessary conditions before retrying.
    pub filter: bool,
    /// NDJSON record stream.
    pub output: Option<PathBuf>,
    /// Reuse finished records already present in `output`.
    pub resume: bool,
}

impl EnumerationJob {
    pub fn new(n: usize, k: usize) -> Self {
        EnumerationJob {
            n,
            k,
            source: GraphSource::Generated,
            seed: DEFAULT_SEED,
            jobs: 0,
            bound: DEFAULT_BOUND,
            filter: true,
            output: None,
            resume: false,
        }
    }

    pub fn validate(&self) -> Result<(), EnumerationError> {
        if self.n < 4 {
            return Err(EnumerationError::InvalidJob(format!("n must be at least 4, got {}", self.n)));
        }
        if self.k < 2 {
            return Err(EnumerationError::InvalidJob(format!("k must be at least 2, got {}", self.k)));
        }
        if self.bound < 1 {
            return Err(EnumerationError::InvalidJob("bound must be positive".into()));
        }
        if self.resume && self.output.is_none() {
            return Err(EnumerationError::InvalidJob("resume needs an output path".into()));
        }
        Ok(())
    }

    pub fn target_edges(&self) -> usize {
        2 * self.n + self.k - 4
    }

    /// Candidate graphs in canonical labeling and canonical order.
    pub fn graphs(&self) -> Result<Vec<SimpleGraph>, EnumerationError> {
        match &self.source {
            GraphSource::Generated => generate_candidate_graphs(self.n, self.k),
            GraphSource::Given(gs) => {
                let mut keyed: Vec<_> = gs
                    .iter()
                    .filter(|g| g.n() == self.n && g.edge_count() == self.target_edges())
                    .map(|g| (g.canonical_form(), canonical_relabel(g)))
                    .collect();
                keyed.sort_by(|a, b| a.0.cmp(&b.0));
                keyed.dedup_by(|a, b| a.0 == b.0);
                Ok(keyed.into_iter().map(|(_, g)| g).collect())
            }
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool, EnumerationError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| EnumerationError::Pool(e.to_string()))
    }
}

/// Reads a graph6 file, one graph per line. Blank lines and `>>graph6<<`
/// headers are skipped.
pub fn read_graph6_file(path: &Path) -> Result<Vec<SimpleGraph>, EnumerationError> {
    let text = std::fs::read_to_string(path)?;
    parse_graph6_lines(&text)
}

pub fn parse_graph6_lines(text: &str) -> Result<Vec<SimpleGraph>, EnumerationError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().trim_start_matches(">>graph6<<")))
        .filter(|(_, l)| !l.is_empty())
        .map(|(line, l)| decode_graph6(l).map_err(|source| EnumerationError::Graph6 { line, source }))
        .collect()
}

/// Coloring as a compact string, one base-36 digit per edge.
pub fn coloring_string(c: &[u8]) -> String {
    c.iter().map(|&x| char::from_digit(x as u32, 36).expect("fewer than 36 colors")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pending,
    Done,
}

/// A coloring whose verdict needed more than the first realization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetriedColoring {
    pub coloring: String,
    pub decision: Decision,
    pub seeds: Vec<u64>,
    pub exact_checked: bool,
}

/// Per-graph result of a counting job.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub graph6: String,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub colorings: usize,
    pub rigid: usize,
    /// Verdicts not settled by the first modular rank.
    pub retried: Vec<RetriedColoring>,
    /// Colorings where the matrix verdict and the two-color predicate
    /// disagree; only checked for k = 2.
    pub oracle_mismatches: Vec<String>,
    pub status: Status,
}

impl GraphRecord {
    fn pending(g: &SimpleGraph, job: &EnumerationJob) -> Self {
        GraphRecord {
            graph6: encode_graph6(g),
            n: job.n,
            k: job.k,
            seed: job.seed,
            colorings: 0,
            rigid: 0,
            retried: Vec::new(),
            oracle_mismatches: Vec::new(),
            status: Status::Pending,
        }
    }
}

/// Aggregate of one counting job. `min_maps`/`max_maps` range over graphs
/// with at least one rigid coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub k: usize,
    pub graphs: usize,
    pub k_color_rigid: usize,
    pub rigid_colored_total: usize,
    pub min_maps: Option<usize>,
    pub max_maps: Option<usize>,
}

impl Summary {
    pub const CSV_HEADER: &'static str = "n,k,graphs,k_color_rigid,rigid_colored_total,min_maps,max_maps";

    pub fn from_records(n: usize, k: usize, records: &[GraphRecord]) -> Self {
        let rigid: Vec<usize> = records.iter().map(|r| r.rigid).filter(|&r| r > 0).collect();
        Summary {
            n,
            k,
            graphs: records.len(),
            k_color_rigid: rigid.len(),
            rigid_colored_total: rigid.iter().sum(),
            min_maps: rigid.iter().copied().min(),
            max_maps: rigid.iter().copied().max(),
        }
    }

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.graphs,
            self.k_color_rigid,
            self.rigid_colored_total,
            opt(self.min_maps),
            opt(self.max_maps)
        )
    }
}

/// Result of [`count_k_color_rigid`].
#[derive(Debug, Clone)]
pub struct CountResult {
    pub summary: Summary,
    pub records: Vec<GraphRecord>,
    /// Records taken from a previous run.
    pub reused: usize,
}

impl CountResult {
    pub fn oracle_mismatches(&self) -> usize {
        self.records.iter().map(|r| r.oracle_mismatches.len()).sum()
    }
}

/// Append-only NDJSON sink shared by the workers.
struct Sink(Option<Mutex<BufWriter<File>>>);

impl Sink {
    fn open(path: Option<&Path>, append: bool) -> Result<Self, EnumerationError> {
        let Some(path) = path else { return Ok(Sink(None)) };
        let file = OpenOptions::new().create(true).write(true).append(append).truncate(!append).open(path)?;
        Ok(Sink(Some(Mutex::new(BufWriter::new(file)))))
    }

    fn write(&self, record: &GraphRecord) -> Result<(), EnumerationError> {
        if let Some(w) = &self.0 {
            let line = serde_json::to_string(record).expect("records serialize");
            let mut w = w.lock().expect("sink lock");
            writeln!(w, "{line}")?;
            w.flush()?;
        }
        Ok(())
    }
}

/// Finished records in an NDJSON file, keyed by graph6. Later lines win, so a
/// trailing pending line marks the graph for recomputation. A truncated last
/// line, as left by a killed run, is ignored.
pub fn load_records(path: &Path) -> Result<HashMap<String, GraphRecord>, EnumerationError> {
    let mut latest = HashMap::new();
    if !path.exists() {
        return Ok(latest);
    }
    let lines: Vec<String> = BufReader::new(File::open(path)?).lines().collect::<Result<_, _>>()?;
    let last = lines.len();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<GraphRecord>(line) {
            Ok(r) => {
                latest.insert(r.graph6.clone(), r);
            }
            Err(_) if i + 1 == last => {}
            Err(source) => return Err(EnumerationError::Record { line: i + 1, source }),
        }
    }
    latest.retain(|_, r| r.status == Status::Done);
    Ok(latest)
}

fn count_graph(g: &SimpleGraph, job: &EnumerationJob) -> GraphRecord {
    let mut record = GraphRecord::pending(g, job);
    let opts = VerdictOptions {
        bound: job.bound,
        filter: job.filter,
    };
    for c in coloring_orbits(g, job.k) {
        let colors: Vec<usize> = c.iter().map(|&x| x as usize).collect();
        let cg = ColoredGraph::with_renumbered_colors(g.clone(), &colors);
        let v = decide(&cg, coloring_seed(job.seed, &record.graph6, &c), opts);
        record.colorings += 1;
        let rigid = v.decision.is_rigid();
        if rigid {
            record.rigid += 1;
        }
        if v.decision != Decision::RigidModular {
            if v.seeds_tried.len() > 1 {
                record.retried.push(RetriedColoring {
                    coloring: coloring_string(&c),
                    decision: v.decision,
                    seeds: v.seeds_tried,
                    exact_checked: v.exact_checked,
                });
            }
        }
        if job.k == 2 {
            let predicate = combinatorics::two_color_rigid_predicate(&cg).expect("edge count is 2n - 2");
            if predicate != rigid {
                record.oracle_mismatches.push(coloring_string(&c));
            }
        }
    }
    record.status = Status::Done;
    record
}

/// Counts minimally angle-rigid colorings of every candidate graph.
pub fn count_k_color_rigid(job: &EnumerationJob) -> Result<CountResult, EnumerationError> {
    job.validate()?;
    let graphs = job.graphs()?;
    let previous = match (&job.output, job.resume) {
        (Some(path), true) => load_records(path)?,
        _ => HashMap::new(),
    };
    let sink = Sink::open(job.output.as_deref(), job.resume)?;
    let reusable = |g6: &str| previous.get(g6).filter(|r| r.n == job.n && r.k == job.k && r.seed == job.seed);
    let results: Vec<Result<(GraphRecord, bool), EnumerationError>> = job.pool()?.install(|| {
        graphs
            .par_iter()
            .map(|g| {
                let g6 = encode_graph6(g);
                if let Some(r) = reusable(&g6) {
                    return Ok((r.clone(), true));
                }
                sink.write(&GraphRecord::pending(g, job))?;
                let r = count_graph(g, job);
                sink.write(&r)?;
                Ok((r, false))
            })
            .collect()
    });
    let mut records = Vec::with_capacity(results.len());
    let mut reused = 0;
    for r in results {
        let (record, was_reused) = r?;
        reused += was_reused as usize;
        records.push(record);
    }
    Ok(CountResult {
        summary: Summary::from_records(job.n, job.k, &records),
        records,
        reused,
    })
}

/// Minimum and maximum number of rigid 2-colorings over the 2-color-rigid
/// candidate graphs on `n` vertices.
pub fn per_graph_coloring_stats(n: usize, job: &EnumerationJob) -> Result<Option<(usize, usize)>, EnumerationError> {
    let job = EnumerationJob { n, k: 2, ..job.clone() };
    let s = count_k_color_rigid(&job)?.summary;
    Ok(s.min_maps.zip(s.max_maps))
}

/// A colored graph where the transversal property and the rank verdict disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub graph6: String,
    pub coloring: String,
    pub transversal_property: bool,
    pub rigid: bool,
    pub rank: usize,
    pub target_rank: usize,
    pub seeds: Vec<u64>,
}

/// Options for [`transversal_scan`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ScanOptions {
    /// Extra seeds tried, at four times the bound, before a transversal-holds
    /// but rank-deficient coloring is reported.
    pub escalation_seeds: u64,
    /// Negates the transversal oracle. Used to exercise the reporting path.
    pub corrupt_oracle: bool,
}

pub const DEFAULT_ESCALATION_SEEDS: u64 = 8;

/// Compares the rank verdict with the per-color transversal property on
/// every coloring of every candidate graph.
pub fn transversal_scan(job: &EnumerationJob, opts: ScanOptions) -> Result<Vec<Discrepancy>, EnumerationError> {
    job.validate()?;
    let graphs = job.graphs()?;
    let vopts = VerdictOptions {
        bound: job.bound,
        filter: false,
    };
    let found: Vec<Vec<Discrepancy>> = job.pool()?.install(|| {
        graphs
            .par_iter()
            .map(|g| {
                let g6 = encode_graph6(g);
                let mut out = Vec::new();
                for c in coloring_orbits(g, job.k) {
                    let colors: Vec<usize> = c.iter().map(|&x| x as usize).collect();
                    let cg = ColoredGraph::with_renumbered_colors(g.clone(), &colors);
                    let mut v = decide(&cg, coloring_seed(job.seed, &g6, &c), vopts);
                    let tp = combinatorics::transversal_property(&cg) != opts.corrupt_oracle;
                    let mut rigid = v.decision.is_rigid();
                    if tp && !rigid {
                        let base = *v.seeds_tried.last().expect("nonempty");
                        let bound = job.bound.saturating_mul(4);
                        for i in 1..=opts.escalation_seeds {
                            let s = seeds::derive(base, 1000 + i);
                            v.seeds_tried.push(s);
                            let r = verdict::modular_rank(&cg, s, bound);
                            v.rank = v.rank.max(r);
                            if r == v.target {
                                rigid = true;
                                break;
                            }
                        }
                    }
                    if tp != rigid {
                        out.push(Discrepancy {
                            graph6: g6.clone(),
                            coloring: coloring_string(&c),
                            transversal_property: tp,
                            rigid,
                            rank: v.rank,
                            target_rank: v.target,
                            seeds: v.seeds_tried,
                        });
                    }
                }
                out
            })
            .collect()
    });
    Ok(found.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("anglerig-enum-{}-{name}", std::process::id()));
        let _ = std::fs::remove_file(&dir);
        dir
    }

    #[test]
    fn small_tables() {
        let s = count_k_color_rigid(&EnumerationJob::new(4, 2)).unwrap();
        assert_eq!(s.summary.csv_row(), "4,2,1,1,5,5,5");
        assert_eq!(s.oracle_mismatches(), 0);
        let s = count_k_color_rigid(&EnumerationJob::new(5, 2)).unwrap();
        assert_eq!(s.summary.csv_row(), "5,2,2,2,71,26,45");
        assert_eq!(s.oracle_mismatches(), 0);
    }

    #[test]
    fn unfiltered_matches_filtered() {
        let a = count_k_color_rigid(&EnumerationJob::new(5, 3)).unwrap().summary;
        let b = count_k_color_rigid(&EnumerationJob {
            filter: false,
            ..EnumerationJob::new(5, 3)
        })
        .unwrap()
        .summary;
        assert_eq!(a, b);
        assert_eq!(a.k_color_rigid, 1);
    }

    #[test]
    fn resume_reuses_done_records() {
        let path = tmp("resume.ndjson");
        let job = EnumerationJob {
            output: Some(path.clone()),
            jobs: 2,
            ..EnumerationJob::new(5, 2)
        };
        let first = count_k_color_rigid(&job).unwrap();
        // simulate a killed run: drop the last done line, leave a dangling pending one
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines: Vec<&str> = text.lines().collect();
        let last_done = lines.iter().rposition(|l| l.contains("\"done\"")).unwrap();
        lines.remove(last_done);
        lines.push("{\"graph6\":\"Dh");
        std::fs::write(&path, lines.join("\n") + "\n").unwrap();
        let second = count_k_color_rigid(&EnumerationJob { resume: true, ..job }).unwrap();
        assert_eq!(second.reused, 1);
        assert_eq!(first.summary, second.summary);
        assert_eq!(first.records, second.records);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn given_graphs_are_deduplicated() {
        let k4 = SimpleGraph::complete(4);
        let relabeled = k4.relabel(&[3, 1, 0, 2]);
        let job = EnumerationJob {
            source: GraphSource::Given(vec![k4, relabeled, SimpleGraph::complete(5)]),
            ..EnumerationJob::new(4, 2)
        };
        assert_eq!(job.graphs().unwrap().len(), 1);
        let text = "C~\n\n>>graph6<<C~\n";
        assert_eq!(parse_graph6_lines(text).unwrap().len(), 2);
        assert!(matches!(parse_graph6_lines("C~\n!!"), Err(EnumerationError::Graph6 { line: 2, .. })));
    }

    #[test]
    fn scan_is_clean_for_two_colors_and_flags_corruption() {
        let job = EnumerationJob::new(4, 2);
        assert!(transversal_scan(&job, ScanOptions::default()).unwrap().is_empty());
        let bad = transversal_scan(
            &job,
            ScanOptions {
                corrupt_oracle: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!bad.is_empty());
    }

    #[test]
    fn invalid_jobs() {
        assert!(EnumerationJob::new(3, 2).validate().is_err());
        assert!(EnumerationJob::new(4, 1).validate().is_err());
        assert!(EnumerationJob {
            resume: true,
            ..EnumerationJob::new(4, 2)
        }
        .validate()
        .is_err());
        assert!(matches!(
            count_k_color_rigid(&EnumerationJob::new(8, 2)),
            Err(EnumerationError::UnsupportedN(8))
        ));
    }
}
