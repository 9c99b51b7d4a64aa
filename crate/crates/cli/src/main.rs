use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use angle_rigidity::colored_graph::{parse_colored_graph, write_colored_graph, ColoredGraph};
use angle_rigidity::combinatorics::{self, MaxwellViolation};
use angle_rigidity::enumeration::{self, EnumerationJob, GraphSource, ScanOptions, Summary};
use angle_rigidity::exactla::DEFAULT_FLOAT_TOLERANCE;
use angle_rigidity::extensions::{construct_sequence, ConstructionSequence};
use angle_rigidity::rigidity::{self, ExactRealization, Realization, RigidityReport, DEFAULT_BOUND};
use angle_rigidity::seeds::DEFAULT_SEED;
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

/// Angle rigidity of edge-colored graphs.
#[derive(Parser)]
#[command(name = "anglerig", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rigidity report and combinatorial conditions for one colored graph.
    /// Exit 0 if minimally angle-rigid, 1 if not, 2 on error.
    Check(CheckArgs),
    /// Extension sequence from a bichromatic K4, or replay of a saved sequence.
    Construct(ConstructArgs),
    /// Count rigid colorings of candidate graphs; prints the summary CSV.
    Enumerate(EnumerateArgs),
    /// Count tables over ranges of n and k as CSV.
    Tables(TablesArgs),
    /// Compare rank verdicts with the transversal property. Exit 3 on any discrepancy.
    Scan(ScanArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long, env = "ANGLERIG_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Half-width of the box random coordinates are drawn from.
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: i64,
}

#[derive(Args)]
struct CheckArgs {
    file: PathBuf,
    /// `v x y` lines; without it a random realization is used.
    #[arg(long)]
    realization: Option<PathBuf>,
    /// Floating-point rank instead of exact rational rank.
    #[arg(long)]
    float: bool,
    #[arg(long, requires = "float")]
    tolerance: Option<f64>,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ConstructArgs {
    /// Colored graph, or a sequence JSON file with --replay.
    file: PathBuf,
    #[arg(long)]
    replay: bool,
}

#[derive(Args)]
struct JobArgs {
    #[arg(long)]
    jobs: Option<usize>,
    /// Graph6 file of candidate graphs instead of the built-in generator.
    #[arg(long)]
    graphs: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Write per-graph NDJSON records here.
    #[arg(long, conflicts_with = "resume")]
    output: Option<PathBuf>,
    /// Continue the NDJSON record file, reusing finished graphs.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Decide every coloring by rank alone.
    #[arg(long)]
    no_filter: bool,
    #[command(flatten)]
    job: JobArgs,
}

#[derive(Args)]
struct TablesArgs {
    /// 1: graphs and rigid totals, 2: min/max rigid colorings per graph,
    /// 3: k-color-rigid graphs. All summary columns when omitted.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    table: Option<u8>,
    /// `4..6`, `4..=6` or `5`; ranges are inclusive.
    #[arg(long, value_parser = parse_range)]
    n: RangeInclusive<usize>,
    #[arg(long, value_parser = parse_range, default_value = "2")]
    k: RangeInclusive<usize>,
    #[command(flatten)]
    job: JobArgs,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = enumeration::DEFAULT_ESCALATION_SEEDS)]
    escalation_seeds: u64,
    #[arg(long, hide = true)]
    corrupt_oracle: bool,
    #[command(flatten)]
    job: JobArgs,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad number `{t}`"));
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            Ok(v..=v)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> Result<ColoredGraph> {
    parse_colored_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn edge_label(g: &ColoredGraph, e: usize) -> [usize; 2] {
    let (u, v) = g.edges()[e];
    [u + 1, v + 1]
}

#[derive(Serialize)]
struct MaxwellOutput {
    ok: bool,
    /// Edges of a violating subgraph, 1-based.
    violation: Option<Vec<[usize; 2]>>,
}

#[derive(Serialize)]
struct CheckOutput {
    report: RigidityReport,
    maxwell: MaxwellOutput,
    /// One edge per color whose removal leaves a basis.
    transversal_global: Option<Vec<[usize; 2]>>,
    /// For each color, one edge per other color whose removal leaves a basis.
    transversal_per_color: Vec<Option<Vec<[usize; 2]>>>,
    /// Unique-circuit characterization; only for two colors and `2n − 2` edges.
    two_color_predicate: Option<bool>,
}

fn check_output(g: &ColoredGraph, args: &CheckArgs) -> Result<CheckOutput> {
    let tolerance = args.tolerance.unwrap_or(DEFAULT_FLOAT_TOLERANCE);
    let report = match (&args.realization, args.float) {
        (Some(path), false) => {
            let p: ExactRealization = read(path)?.parse()?;
            rigidity::report_at(g, &p)?
        }
        (Some(path), true) => {
            let p: Realization<f64> = read(path)?.parse()?;
            rigidity::report_float(g, &p, tolerance)?
        }
        (None, false) => rigidity::report_generic(g, args.common.seed, args.common.bound)?,
        (None, true) => {
            let p = rigidity::random_realization(g.n(), args.common.seed, args.common.bound)?;
            let mut r = rigidity::report_float(g, &p.to_f64(), tolerance)?;
            r.seed = Some(args.common.seed);
            r.generic = true;
            r
        }
    };
    let labels = |es: Vec<usize>| es.into_iter().map(|e| edge_label(g, e)).collect::<Vec<_>>();
    let maxwell = match combinatorics::maxwell_colored_check(g) {
        Ok(()) => MaxwellOutput {
            ok: true,
            violation: None,
        },
        Err(MaxwellViolation { edges, .. }) => MaxwellOutput {
            ok: false,
            violation: Some(labels(edges)),
        },
    };
    let two_color_predicate = (g.k() == 2 && g.edge_count() + 2 == 2 * g.n())
        .then(|| combinatorics::two_color_rigid_predicate(g))
        .transpose()?;
    Ok(CheckOutput {
        report,
        maxwell,
        transversal_global: combinatorics::transversal_condition_global(g).map(labels),
        transversal_per_color: combinatorics::transversal_condition_per_color(g)
            .into_iter()
            .map(|w| w.map(labels))
            .collect(),
        two_color_predicate,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn edge_list(es: &[[usize; 2]]) -> String {
    let items: Vec<String> = es.iter().map(|[u, v]| format!("{u}-{v}")).collect();
    format!("{{{}}}", items.join(", "))
}

fn print_check(out: &CheckOutput, w: &mut impl Write) -> io::Result<()> {
    let r = &out.report;
    let verdict = if r.minimal {
        "minimally angle-rigid"
    } else if r.infinitesimally_rigid {
        "angle-rigid, not independent"
    } else {
        "not infinitesimally angle-rigid"
    };
    let field = match r.field {
        angle_rigidity::exactla::FieldMode::Exact => "exact".to_string(),
        angle_rigidity::exactla::FieldMode::Float { tolerance } => format!("float (tolerance {tolerance:e})"),
    };
    let realization = match (r.generic, r.seed) {
        (true, Some(s)) => format!("random, seed {s}"),
        _ => "given".to_string(),
    };
    let row = |w: &mut dyn Write, k: &str, v: &str| writeln!(w, "{k:<22}{v}");
    row(w, "vertices", &r.vertices.to_string())?;
    row(w, "edges", &r.edges.to_string())?;
    row(w, "colors", &r.colors.to_string())?;
    row(w, "field", &field)?;
    row(w, "realization", &realization)?;
    row(w, "rank", &format!("{} (target {})", r.rank, r.target_rank))?;
    row(w, "flex dimension", &r.flex_dimension.to_string())?;
    row(w, "infinitesimally rigid", yes_no(r.infinitesimally_rigid))?;
    row(w, "independent", yes_no(r.independent))?;
    row(w, "verdict", verdict)?;
    if !matches!(r.field, angle_rigidity::exactla::FieldMode::Float { .. }) {
        row(w, "stresses", &r.stress_basis.len().to_string())?;
        for s in &r.stress_basis {
            row(w, "", &s.join(" "))?;
        }
    }
    let maxwell = match &out.maxwell.violation {
        None => "ok".to_string(),
        Some(es) => format!("violated by {}", edge_list(es)),
    };
    row(w, "maxwell count", &maxwell)?;
    let global = match &out.transversal_global {
        Some(es) => format!("holds, remove {}", edge_list(es)),
        None => "fails".to_string(),
    };
    row(w, "transversal, global", &global)?;
    for (i, wit) in out.transversal_per_color.iter().enumerate() {
        let v = match wit {
            Some(es) => format!("holds, remove {}", edge_list(es)),
            None => "fails".to_string(),
        };
        row(w, &format!("transversal, color {}", i + 1), &v)?;
    }
    let pred = match out.two_color_predicate {
        Some(b) => yes_no(b),
        None => "n/a",
    };
    row(w, "two-color predicate", pred)
}

fn cmd_check(args: &CheckArgs) -> Result<ExitCode> {
    let g = read_graph(&args.file)?;
    let out = check_output(&g, args)?;
    let mut stdout = io::stdout().lock();
    if args.json {
        serde_json::to_writer_pretty(&mut stdout, &out)?;
        writeln!(stdout)?;
    } else {
        print_check(&out, &mut stdout)?;
    }
    Ok(if out.report.minimal {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_construct(args: &ConstructArgs) -> Result<ExitCode> {
    if args.replay {
        let seq: ConstructionSequence =
            serde_json::from_str(&read(&args.file)?).with_context(|| format!("parsing {}", args.file.display()))?;
        let g = seq.verify()?;
        print!("{}", write_colored_graph(&g));
    } else {
        let g = read_graph(&args.file)?;
        let seq = construct_sequence(&g)?;
        println!("{}", serde_json::to_string_pretty(&seq)?);
    }
    Ok(ExitCode::SUCCESS)
}

fn base_job(n: usize, k: usize, args: &JobArgs) -> Result<EnumerationJob> {
    let mut job = EnumerationJob::new(n, k);
    job.seed = args.common.seed;
    job.bound = args.common.bound;
    job.jobs = args.jobs.unwrap_or(0);
    if let Some(path) = &args.graphs {
        job.source = GraphSource::Given(enumeration::read_graph6_file(path)?);
    }
    Ok(job)
}

fn summary_writer() -> csv::Writer<io::Stdout> {
    csv::WriterBuilder::new().has_headers(false).from_writer(io::stdout())
}

fn cmd_enumerate(args: &EnumerateArgs) -> Result<ExitCode> {
    let mut job = base_job(args.n, args.k, &args.job)?;
    job.filter = !args.no_filter;
    job.output = args.output.clone().or_else(|| args.resume.clone());
    job.resume = args.resume.is_some();
    let result = enumeration::count_k_color_rigid(&job)?;
    let mismatches = result.oracle_mismatches();
    if mismatches > 0 {
        eprintln!("warning: {mismatches} colorings disagree with the two-color predicate");
    }
    let mut w = summary_writer();
    w.write_record(Summary::CSV_HEADER.split(','))?;
    w.write_record(result.summary.csv_row().split(','))?;
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_tables(args: &TablesArgs) -> Result<ExitCode> {
    let ks: Vec<usize> = match args.table {
        Some(1) | Some(2) => vec![2],
        _ => args.k.clone().collect(),
    };
    let header: &[&str] = match args.table {
        Some(1) => &["n", "graphs", "two_color_rigid", "rigid_colored_total"],
        Some(2) => &["n", "min_maps", "max_maps"],
        Some(3) => &["n", "k", "k_color_rigid"],
        _ => &["n", "k", "graphs", "k_color_rigid", "rigid_colored_total", "min_maps", "max_maps"],
    };
    let mut w = summary_writer();
    w.write_record(header)?;
    for n in args.n.clone() {
        for &k in &ks {
            let s = enumeration::count_k_color_rigid(&base_job(n, k, &args.job)?)?.summary;
            let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
            let row: Vec<String> = match args.table {
                Some(1) => vec![n.to_string(), s.graphs.to_string(), s.k_color_rigid.to_string(), s.rigid_colored_total.to_string()],
                Some(2) => vec![n.to_string(), opt(s.min_maps), opt(s.max_maps)],
                Some(3) => vec![n.to_string(), k.to_string(), s.k_color_rigid.to_string()],
                _ => s.csv_row().split(',').map(str::to_string).collect(),
            };
            w.write_record(&row)?;
            w.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(args: &ScanArgs) -> Result<ExitCode> {
    let job = base_job(args.n, args.k, &args.job)?;
    let opts = ScanOptions {
        escalation_seeds: args.escalation_seeds,
        corrupt_oracle: args.corrupt_oracle,
    };
    let found = enumeration::transversal_scan(&job, opts)?;
    let mut stdout = io::stdout().lock();
    for d in &found {
        serde_json::to_writer(&mut stdout, d)?;
        writeln!(stdout)?;
    }
    Ok(if found.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Tables(a) => cmd_tables(a),
        Command::Scan(a) => cmd_scan(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
