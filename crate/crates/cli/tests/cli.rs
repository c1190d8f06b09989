use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use stpaths::{load_edge_list, prune, LoadOptions};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn stpaths(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stpaths")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn graph_arg(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn count_example_pruned() {
    let g = graph_arg("example.txt");
    let v = json(&stpaths(&["count", "--graph", &g, "-s", "s", "-t", "t"]));
    assert_eq!(v["count"], "1");
    assert_eq!(v["intersection_size"], 3);
    assert_eq!(v["complete"], true);
}

#[test]
fn pruned_and_raw_agree_on_fixtures() {
    for (file, pairs) in [
        ("example.txt", vec![("s", "t"), ("s", "v6"), ("v5", "v6"), ("t", "s")]),
        ("k4.txt", vec![("a", "b"), ("b", "d"), ("d", "a"), ("c", "a")]),
    ] {
        let g = graph_arg(file);
        for (s, t) in pairs {
            let pruned = json(&stpaths(&["count", "--graph", &g, "-s", s, "-t", t]));
            let raw = json(&stpaths(&["count", "--graph", &g, "-s", s, "-t", t, "--raw"]));
            assert_eq!(pruned["count"], raw["count"], "{file} {s}->{t}");
            if file == "k4.txt" {
                assert_eq!(raw["count"], "5");
            }
        }
    }
}

#[test]
fn count_errors_exit_two() {
    let g = graph_arg("example.txt");
    let same = stpaths(&["count", "--graph", &g, "-s", "s", "-t", "s"]);
    assert_eq!(same.status.code(), Some(2));
    let unknown = stpaths(&["count", "--graph", &g, "-s", "s", "-t", "nope"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("nope"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "a b\nc\n").unwrap();
    let parse = stpaths(&["count", "--graph", bad.to_str().unwrap(), "-s", "a", "-t", "b"]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 2"));
}

#[test]
fn limit_hit_is_success_with_incomplete_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k9.txt");
    let gen = stpaths(&["generate", "complete", "--vertices", "9"]);
    std::fs::write(&path, &gen.stdout).unwrap();
    let p = path.to_str().unwrap();
    let v = json(&stpaths(&["count", "--graph", p, "-s", "s", "-t", "t", "--max-paths", "100"]));
    assert_eq!(v["complete"], false);
    assert_eq!(v["count"], "100");
}

#[test]
fn weighted_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    std::fs::write(&path, "s a 2.5\na t 1\ns t 7\n").unwrap();
    let p = path.to_str().unwrap();
    let unweighted = stpaths(&["count", "--graph", p, "-s", "s", "-t", "t"]);
    assert_eq!(unweighted.status.code(), Some(2));
    let v = json(&stpaths(&["count", "--graph", p, "--weighted", "-s", "s", "-t", "t"]));
    assert_eq!(v["count"], "2");
}

#[test]
fn estimate_example_graph() {
    let g = graph_arg("example.txt");
    let v = json(&stpaths(&["estimate", "--graph", &g, "-s", "s", "-t", "t", "-n", "100"]));
    assert_eq!(v["estimate"], "1");
    assert_eq!(v["sample_variance"], "0");
    assert_eq!(v["dead_end_samples"], 0);

    let v = json(&stpaths(&[
        "estimate", "--graph", &g, "-s", "s", "-t", "t", "-n", "100000", "--variant", "baseline",
        "--seed", "12",
    ]));
    let est: f64 = v["estimate"].as_str().unwrap().parse().unwrap();
    assert!((est - 1.0).abs() <= 5.0 * 2.0 / 100_000f64.sqrt());

    let zero = stpaths(&["estimate", "--graph", &g, "-s", "s", "-t", "t", "-n", "0"]);
    assert_eq!(zero.status.code(), Some(2));
}

#[test]
fn estimate_is_reproducible() {
    let g = graph_arg("snap_sample.txt");
    let run = || {
        let mut v = json(&stpaths(&[
            "estimate", "--graph", &g, "-s", "1523456", "-t", "1616713", "-n", "2000",
            "--variant", "baseline", "--seed", "5",
        ]));
        v.as_object_mut().unwrap().remove("elapsed");
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn prune_stats_example_graph() {
    let g = graph_arg("example.txt");
    let v = json(&stpaths(&["prune-stats", "--graph", &g, "-s", "s", "-t", "t"]));
    assert_eq!(v["intersection_size"], 3);
    assert_eq!(v["ratio"], 0.375);
}

#[test]
fn bench_fixed_pair_on_example_graph() {
    let g = graph_arg("example.txt");
    let v = json(&stpaths(&[
        "bench", "--graph", &g, "--source", "s", "--target", "t", "--algorithms",
        "prune-stats,espe,pruned-espe",
    ]));
    assert_eq!(v["pairs"], 1);
    assert_eq!(v["max_sz"], 0.375);
    assert!(v["max_tm"].as_f64().unwrap() > 0.0);
    assert_eq!(v["algorithms"][0]["max_paths"], "1");
    assert_eq!(v["algorithms"][1]["max_paths"], "1");
}

fn strip_timing(csv: &str) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let header = rdr.headers().unwrap().clone();
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            header
                .iter()
                .zip(r.iter())
                .filter(|(h, _)| !h.ends_with("_seconds"))
                .map(|(_, v)| v.to_string())
                .collect()
        })
        .collect()
}

#[test]
fn bench_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.txt");
    let gen = stpaths(&["generate", "random", "--vertices", "100", "--edges", "160", "--seed", "3"]);
    std::fs::write(&path, &gen.stdout).unwrap();
    let p = path.to_str().unwrap();
    let args = [
        "bench", "--graph", p, "--pairs", "500", "--seed", "17", "--algorithms",
        "prune-stats,pruned-espe,estimate-pruned", "--samples", "50",
        "--format", "csv",
    ];
    let a = stpaths(&args);
    let b = stpaths(&args);
    assert!(a.status.success());
    let (a, b) = (String::from_utf8(a.stdout).unwrap(), String::from_utf8(b.stdout).unwrap());
    let rows = strip_timing(&a);
    assert_eq!(rows.len(), 500);
    assert_eq!(rows, strip_timing(&b));
}

#[test]
fn bench_writes_csv_and_summary_files() {
    let dir = tempfile::tempdir().unwrap();
    let (csv_path, summary_path) = (dir.path().join("rows.csv"), dir.path().join("summary.json"));
    let g = graph_arg("k4.txt");
    let out = stpaths(&[
        "bench", "--graph", &g, "--pairs", "20", "--algorithms", "prune-stats,espe",
        "--csv", csv_path.to_str().unwrap(), "--summary", summary_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary: Value = serde_json::from_slice(&std::fs::read(&summary_path).unwrap()).unwrap();
    assert_eq!(summary["max_sz"], 1.0);
    assert_eq!(summary["algorithms"][0]["max_paths"], "5");
    let rows = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(rows.lines().count(), 21);
}

#[test]
fn bench_attempt_cap_reports_pairs_found() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("line.txt");
    std::fs::write(&path, "a b\nc d\n").unwrap();
    let out = stpaths(&[
        "bench", "--graph", path.to_str().unwrap(), "--pairs", "50", "--require-reachable",
        "--max-attempts", "200",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("found only"));
}

#[test]
fn generate_broom_matches_example_shape() {
    let out = stpaths(&["generate", "broom", "--branches", "4", "--length", "1", "--core", "1"]);
    assert!(out.status.success());
    let g = load_edge_list(out.stdout.as_slice(), LoadOptions::default()).unwrap().graph;
    assert_eq!(g.vertex_count(), 7);
    assert_eq!(g.edge_count(), 6);
    let s = g.vertex_by_label("s").unwrap();
    let t = g.vertex_by_label("t").unwrap();
    // s has out-degree 5, exactly one successor continues to t, t is a sink
    assert_eq!(g.out_degree(s), 5);
    let onward: Vec<_> = g.out_neighbors(s).iter().filter(|&&v| g.out_degree(v) > 0).collect();
    assert_eq!(onward.len(), 1);
    assert_eq!(g.out_neighbors(*onward[0]), &[t]);
    assert_eq!(g.out_degree(t), 0);
    assert_eq!(g.in_degree(s), 0);
}

#[test]
fn generate_complete_and_invalid() {
    let out = stpaths(&["generate", "complete", "--vertices", "4"]);
    let g = load_edge_list(out.stdout.as_slice(), LoadOptions::default()).unwrap().graph;
    assert_eq!(g.edge_count(), 12);
    let bad = stpaths(&["generate", "broom", "--core", "0"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn generate_fixed_core_prunes_to_core() {
    let out = stpaths(&["generate", "fixed-core", "--core", "4", "--appendage", "100000"]);
    let g = load_edge_list(out.stdout.as_slice(), LoadOptions::default()).unwrap().graph;
    let s = g.vertex_by_label("s").unwrap();
    let t = g.vertex_by_label("t").unwrap();
    assert_eq!(prune(&g, s, t).unwrap().vertex_count(), 6);
    assert_eq!(g.edge_count(), 20 + 100_000);
}
