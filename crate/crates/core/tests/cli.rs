use std::path::Path;
use std::process::{Command, Output};

use navgraph::dataset::{load_graph, load_points};
use navgraph::verify::verify_navigable;
use navgraph::{DistanceOracle, Metric};
use tempfile::TempDir;

fn navgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_navgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn gen_uniform(dir: &TempDir, n: usize) -> String {
    let points = path(dir, "points.csv");
    let out = navgraph(&["gen", "--kind", "uniform", "--n", &n.to_string(), "--dim", "3", "--seed", "4", "--out", &points]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    points
}

#[test]
fn build_verify_route() {
    let dir = TempDir::new().unwrap();
    let points = gen_uniform(&dir, 120);
    let graph = path(&dir, "graph.txt");
    let report = path(&dir, "report.json");
    for algo in ["full", "simple", "clique", "greedy"] {
        let out = navgraph(&["build", "--input", &points, "--algo", algo, "--out", &graph, "--report", &report]);
        assert_eq!(code(&out), 0, "{algo}: {}", String::from_utf8_lossy(&out.stderr));

        let oracle = DistanceOracle::vector(load_points(&points, false).unwrap(), Metric::Euclidean).unwrap();
        let g = load_graph(&graph, 120).unwrap();
        assert!(verify_navigable(&oracle, &g).unwrap().is_empty(), "{algo}");
        let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
        assert_eq!(json["edges"].as_u64().unwrap() as usize, g.edge_count());

        let out = navgraph(&["verify", "--input", &points, "--graph", &graph]);
        assert_eq!(code(&out), 0, "{algo}");
    }

    let out = navgraph(&["route", "--input", &points, "--graph", &graph, "--start", "5", "--query", "77"]);
    assert_eq!(code(&out), 0);
    let path: Vec<usize> = String::from_utf8(out.stdout)
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(path.first(), Some(&5));
    assert_eq!(path.last(), Some(&77));
}

#[test]
fn strengthened_builds_pass_their_own_check() {
    let dir = TempDir::new().unwrap();
    let points = gen_uniform(&dir, 60);
    let graph = path(&dir, "graph.txt");
    for (algo, prop, flag, value) in [("alpha", "alpha", "--alpha", "1.5"), ("tau", "tau", "--tau", "0.05")] {
        let out = navgraph(&["build", "--input", &points, "--algo", algo, flag, value, "--out", &graph]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let out = navgraph(&["verify", "--input", &points, "--graph", &graph, "--property", prop, flag, value]);
        assert_eq!(code(&out), 0, "{algo}");
    }
}

#[test]
fn violations_exit_one() {
    let dir = TempDir::new().unwrap();
    let points = gen_uniform(&dir, 10);
    let graph = path(&dir, "empty.txt");
    std::fs::write(&graph, "").unwrap();
    let out = navgraph(&["verify", "--input", &points, "--graph", &graph, "--max-violations", "3"]);
    assert_eq!(code(&out), 1);
    let lines: Vec<String> = String::from_utf8(out.stdout).unwrap().lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l.split_whitespace().count() == 2));
}

#[test]
fn bad_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.csv");
    std::fs::write(&bad, "0,0\n1,x\n").unwrap();
    let out = navgraph(&["build", "--input", &bad, "--out", &path(&dir, "g.txt")]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.csv:2:"));

    let missing = path(&dir, "missing.csv");
    assert_eq!(code(&navgraph(&["build", "--input", &missing, "--out", &path(&dir, "g.txt")])), 2);
    assert_eq!(code(&navgraph(&["build", "--algo", "nope"])), 2);
    assert_eq!(code(&navgraph(&["bench", "--algos", "alpha:0.5"])), 2);
}

#[test]
fn set_cover_subcommand() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "inst.txt");
    let out = navgraph(&[
        "gen", "--kind", "planted-cover", "--elements", "40", "--sets", "30", "--k", "5", "--seed", "2", "--out", &inst,
    ]);
    assert_eq!(code(&out), 0);
    for algo in ["greedy", "vote", "limited", "lazy"] {
        let out = navgraph(&["setcover", "--input", &inst, "--algo", algo, "--vote-factor", "1"]);
        assert_eq!(code(&out), 0, "{algo}: {}", String::from_utf8_lossy(&out.stderr));
        let chosen = String::from_utf8(out.stdout).unwrap().split_whitespace().count();
        assert!(chosen >= 5, "{algo} beat the planted optimum");
    }
    // Half the optimum is out of reach.
    let out = navgraph(&["setcover", "--input", &inst, "--algo", "vote", "--budget", "2"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn covering_generator_writes_a_matrix() {
    let dir = TempDir::new().unwrap();
    let matrix = path(&dir, "cover.bin");
    let inst = path(&dir, "inst.txt");
    let out = navgraph(&[
        "gen", "--kind", "covering-general", "--elements", "5", "--sets", "4", "--k", "2", "--solutions", "2", "--out",
        &matrix, "--instance-out", &inst,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(Path::new(&inst).exists());
    let graph = path(&dir, "g.txt");
    let out = navgraph(&["build", "--input", &matrix, "--metric", "matrix", "--algo", "greedy", "--out", &graph]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&navgraph(&["verify", "--input", &matrix, "--metric", "matrix", "--graph", &graph])), 0);
}

#[test]
fn bench_csv_is_deterministic_apart_from_timing() {
    let run = || {
        let out = navgraph(&[
            "--threads", "1", "bench", "--algos", "full,clique,alpha:2", "--sizes", "32,64", "--seeds", "0,1", "--dim", "2",
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    };
    let strip = |csv: String| -> Vec<String> {
        let mut rows = csv::Reader::from_reader(csv.as_bytes());
        let header = rows.headers().unwrap().clone();
        let keep: Vec<usize> = (0..header.len()).filter(|&i| !header[i].ends_with("_ms")).collect();
        rows.records()
            .map(|r| {
                let r = r.unwrap();
                keep.iter().map(|&i| &r[i]).collect::<Vec<_>>().join(",")
            })
            .collect()
    };
    let first = strip(run());
    assert_eq!(first.len(), 3 * 2 * 2);
    assert!(first.iter().all(|r| r.ends_with("true,")), "{first:?}");
    assert_eq!(first, strip(run()));
}
