use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use angle_rigidity::colored_graph::parse_colored_graph;
use angle_rigidity::extensions::ConstructionSequence;
use angle_rigidity::rigidity::RigidityReport;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn figure(name: &str) -> PathBuf {
    root().join("figures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anglerig"))
        .args(args)
        .env_remove("ANGLERIG_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// (figure, exit code of `check`).
const CHECK_EXITS: &[(&str, i32)] = &[
    ("five_vertex_k4_ear", 0),
    ("five_vertex_wheel", 0),
    ("k4_cycle_diagonals", 0),
    ("k4_one_color", 1),
    ("k4_single_edge", 0),
    ("k4_star_triangle", 0),
    ("k4_triangle_star", 0),
    ("k4_two_paths", 0),
    ("triangle_one_color", 0),
    ("triangle_two_colors", 1),
    ("two_k4_one_bridge_color", 1),
    ("two_k4_three_colors", 0),
];

/// Set UPDATE_FIXTURES=1 to rewrite the expected outputs.
fn compare_fixture(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    if std::env::var_os("UPDATE_FIXTURES").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing fixture {}", path.display()));
    assert_eq!(actual, expected, "fixture {name}");
}

#[test]
fn every_figure_is_covered() {
    let mut stems: Vec<String> = fs::read_dir(root().join("figures"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "cg"))
        .map(|p| p.file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    stems.sort();
    let listed: Vec<&str> = CHECK_EXITS.iter().map(|x| x.0).collect();
    assert_eq!(stems, listed);
}

#[test]
fn check_matches_fixtures() {
    for &(name, exit) in CHECK_EXITS {
        let file = figure(&format!("{name}.cg"));
        let o = run(&["check", "--json", file.to_str().unwrap()]);
        assert_eq!(code(&o), exit, "{name}");
        compare_fixture(&format!("{name}.json"), &stdout(&o));
        let o = run(&["check", file.to_str().unwrap()]);
        assert_eq!(code(&o), exit, "{name}");
        compare_fixture(&format!("{name}.txt"), &stdout(&o));
    }
}

#[test]
fn check_at_given_realizations() {
    let g = figure("k4_star_triangle.cg");
    let p = figure("k4_star_triangle.pts");
    let o = run(&["check", "--json", g.to_str().unwrap(), "--realization", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    compare_fixture("k4_star_triangle.at.json", &stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let report: RigidityReport = serde_json::from_value(v["report"].clone()).unwrap();
    assert_eq!(report.flex_dimension, 5);
    assert!(!report.infinitesimally_rigid);

    let g = figure("k4_cycle_diagonals.cg");
    let p = figure("k4_cycle_diagonals.pts");
    let args = ["check", "--json", g.to_str().unwrap(), "--realization", p.to_str().unwrap(), "--float", "--tolerance", "1e-9"];
    let o = run(&args);
    assert_eq!(code(&o), 0);
    compare_fixture("k4_cycle_diagonals.at.json", &stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["rank"], 6);
}

#[test]
fn check_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cg");
    fs::write(&bad, "4 2\n1 2 x\n").unwrap();
    assert_eq!(code(&run(&["check", bad.to_str().unwrap()])), 2);
    let loop_edge = dir.path().join("loop.cg");
    fs::write(&loop_edge, "3 1\n1 1 1\n").unwrap();
    assert_eq!(code(&run(&["check", loop_edge.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["check", "/nonexistent.cg"])), 2);
    let g = figure("k4_two_paths.cg");
    // tolerance without float mode
    assert_eq!(code(&run(&["check", g.to_str().unwrap(), "--tolerance", "1e-3"])), 2);
    // realization with the wrong vertex count
    let p = figure("k4_star_triangle.pts");
    let tri = figure("triangle_one_color.cg");
    assert_eq!(code(&run(&["check", tri.to_str().unwrap(), "--realization", p.to_str().unwrap()])), 2);
}

#[test]
fn seed_comes_from_flag_or_environment() {
    let g = figure("k4_two_paths.cg");
    let seed_of = |o: &Output| {
        let v: serde_json::Value = serde_json::from_str(&stdout(o)).unwrap();
        v["report"]["seed"].as_u64().unwrap()
    };
    let a = run(&["check", "--json", "--seed", "7", g.to_str().unwrap()]);
    let b = Command::new(env!("CARGO_BIN_EXE_anglerig"))
        .args(["check", "--json", g.to_str().unwrap()])
        .env("ANGLERIG_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(seed_of(&a), seed_of(&b));
    assert_ne!(seed_of(&a), seed_of(&run(&["check", "--json", g.to_str().unwrap()])));
}

#[test]
fn construct_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let ear = figure("five_vertex_k4_ear.cg");
    let o = run(&["construct", ear.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let seq: ConstructionSequence = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(seq.steps.len(), 1);
    let path = dir.path().join("seq.json");
    fs::write(&path, stdout(&o)).unwrap();
    let o = run(&["construct", "--replay", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let replayed = parse_colored_graph(&stdout(&o)).unwrap();
    let original = parse_colored_graph(&fs::read_to_string(&ear).unwrap()).unwrap();
    assert_eq!(replayed.canonical_form(), original.canonical_form());

    let wheel = figure("five_vertex_wheel.cg");
    let seq: ConstructionSequence = serde_json::from_str(&stdout(&run(&["construct", wheel.to_str().unwrap()]))).unwrap();
    assert_eq!(seq.steps.len(), 1);

    let k4 = figure("k4_two_paths.cg");
    let seq: ConstructionSequence = serde_json::from_str(&stdout(&run(&["construct", k4.to_str().unwrap()]))).unwrap();
    assert!(seq.steps.is_empty());

    let flexible = figure("two_k4_one_bridge_color.cg");
    assert_eq!(code(&run(&["construct", flexible.to_str().unwrap()])), 2);
}

#[test]
fn tables_reproduce_counts() {
    let o = run(&["tables", "--table", "1", "--n", "4..6", "--k", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "n,graphs,two_color_rigid,rigid_colored_total\n4,1,1,5\n5,2,2,71\n6,12,12,2227\n"
    );
    let o = run(&["tables", "--table", "2", "--n", "4..=6"]);
    assert_eq!(stdout(&o), "n,min_maps,max_maps\n4,5,5\n5,26,45\n6,67,304\n");
    let o = run(&["tables", "--table", "3", "--n", "5", "--k", "3..4"]);
    assert_eq!(stdout(&o), "n,k,k_color_rigid\n5,3,1\n5,4,1\n");
    let o = run(&["tables", "--n", "5..4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "n,k,graphs,k_color_rigid,rigid_colored_total,min_maps,max_maps\n");
    assert_eq!(code(&run(&["tables", "--n", "9"])), 2);
}

#[test]
fn enumerate_writes_and_resumes_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("records.ndjson");
    let o = run(&["enumerate", "--n", "5", "--output", out.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(code(&o), 0);
    let summary = stdout(&o);
    assert_eq!(summary, "n,k,graphs,k_color_rigid,rigid_colored_total,min_maps,max_maps\n5,2,2,2,71,26,45\n");
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains("\"done\"")).count(), 2);
    // keep only the first finished record and resume
    let first_done = text.lines().find(|l| l.contains("\"done\"")).unwrap();
    fs::write(&out, format!("{first_done}\n")).unwrap();
    let o = run(&["enumerate", "--n", "5", "--resume", out.to_str().unwrap()]);
    assert_eq!(stdout(&o), summary);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains("\"done\"")).count(), 2);

    let g6 = dir.path().join("graphs.g6");
    fs::write(&g6, "C~\n").unwrap();
    let o = run(&["enumerate", "--n", "4", "--graphs", g6.to_str().unwrap()]);
    assert_eq!(stdout(&o).lines().nth(1), Some("4,2,1,1,5,5,5"));
}

#[test]
fn scan_exit_codes() {
    let o = run(&["scan", "--n", "5", "--k", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let o = run(&["scan", "--n", "4", "--k", "2"]);
    assert_eq!(code(&o), 0);
    let o = run(&["scan", "--n", "4", "--k", "2", "--corrupt-oracle"]);
    assert_eq!(code(&o), 3);
    assert!(!stdout(&o).is_empty());
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["graph6"], "C~");
    }
}
