use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn epictrl(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epictrl"))
        .current_dir(dir)
        .env_remove("EPICTRL_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = epictrl(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn setup() -> TempDir {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "--n", "9", "--m", "14", "--connected", "--p", "0.5", "--seed", "4", "-o", "unit.tsv"]);
    ok(
        dir.path(),
        &["generate", "--n", "9", "--m", "14", "--connected", "--p-range", "0.2,0.8", "--cost-max", "3", "--seed", "4", "-o", "mixed.tsv"],
    );
    std::fs::write(dir.path().join("model.json"), r#"{"n": 10, "beta": 3.5, "w_min": 1, "w_max": 3}"#).unwrap();
    dir
}

#[test]
fn reports_are_reproducible_and_versioned() {
    let dir = setup();
    let args = ["solve-saa", "--graph", "mixed.tsv", "--budget", "3", "--num-samples", "80", "--eval-samples", "500", "--seed", "7"];
    let a = ok(dir.path(), &args);
    let b = ok(dir.path(), &args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "solve-saa");
    assert!(v.get("runtime_ms").is_none());
    assert!(v["result"]["cost"].as_f64().unwrap() <= v["result"]["budget"].as_f64().unwrap() * 100.0);

    let mut timed = args.to_vec();
    timed.push("--timing");
    let t: Value = serde_json::from_str(&ok(dir.path(), &timed)).unwrap();
    assert!(t["runtime_ms"].is_u64());
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = setup();
    let args = ["percolate", "--graph", "mixed.tsv", "--remove-edges", "0,2", "--samples", "4000", "--seed", "1"];
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_epictrl"))
            .current_dir(dir.path())
            .env("EPICTRL_THREADS", threads)
            .args(args)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn exit_codes_and_error_lines() {
    let dir = setup();
    let missing = epictrl(dir.path(), &["solve-saa", "--graph", "nope.tsv", "--budget", "1"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("error_code=input"));

    let bad = epictrl(dir.path(), &["solve-saa", "--graph", "mixed.tsv", "--budget=-1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("error_code=invalid_parameter"));

    let usage = epictrl(dir.path(), &["solve-saa", "--bogus"]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&usage.stderr).contains("error_code=usage"));

    let mixed = epictrl(dir.path(), &["solve-karger", "--graph", "mixed.tsv", "--budget", "1"]);
    assert_eq!(mixed.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&mixed.stderr).contains("error_code=non_unit_cost"));

    // A sparse graph at p = 0.5 is far outside the sparsification regime.
    let args = ["solve-karger", "--graph", "unit.tsv", "--budget", "1", "--eval-samples", "100", "-o", "k.json"];
    assert_eq!(epictrl(dir.path(), &args).status.code(), Some(0));
    let mut strict = args.to_vec();
    strict.push("--strict-regime");
    let out = epictrl(dir.path(), &strict);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error_code=out_of_regime"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("k.json")).unwrap()).unwrap();
    assert_eq!(v["result"]["note"], "out-of-regime: guarantees void");
}

#[test]
fn config_file_with_flag_override() {
    let dir = setup();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"graph": "mixed.tsv", "budget": 2, "num_samples": 60, "eval_samples": 300, "seed": 3, "rounding": "deterministic"}"#,
    )
    .unwrap();
    let v: Value = serde_json::from_str(&ok(dir.path(), &["solve-saa", "--config", "cfg.json", "--budget", "4"])).unwrap();
    assert_eq!(v["params"]["saa"]["budget"], 4.0);
    assert_eq!(v["params"]["saa"]["seed"], 3);
    assert_eq!(v["params"]["saa"]["rounding"], "deterministic");

    std::fs::write(dir.path().join("bad.json"), r#"{"graph": "mixed.tsv", "bugdet": 2}"#).unwrap();
    let out = epictrl(dir.path(), &["solve-saa", "--config", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error_code=config"));

    let both = epictrl(dir.path(), &["solve-saa", "--graph", "mixed.tsv", "--model", "model.json", "--budget", "1"]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn compare_writes_one_row_per_algorithm() {
    let dir = setup();
    let csv = ok(
        dir.path(),
        &[
            "compare", "--graph", "unit.tsv", "--budget", "2", "--algos", "saa-det,saa-rand,karger,brute",
            "--num-samples", "60", "--eval-samples", "400", "--repetitions", "3", "--seed", "7",
        ],
    );
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "algorithm");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let names: Vec<&str> = rows.iter().map(|r| r.get(0).unwrap()).collect();
    assert_eq!(names, ["saa-det", "saa-rand", "karger", "brute"]);
    let brute = &rows[3];
    assert!(brute.get(1).unwrap().parse::<f64>().unwrap() <= 2.0);
}

#[test]
fn census_and_bound_tables() {
    let dir = setup();
    let csv = ok(dir.path(), &["count-paths", "--model", "model.json", "--kmax", "4", "--trials", "200", "--p", "0.25", "--seed", "7"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,count_or_mean,half_width");
    assert_eq!(lines.len(), 6);
    assert!(lines[5].starts_with("total,"));

    std::fs::write(dir.path().join("tri.tsv"), "@source a\na b 1 1\nb c 1 1\nc a 1 1\n").unwrap();
    let tri = ok(dir.path(), &["count-paths", "--graph", "tri.tsv", "--kmax", "3"]);
    assert_eq!(tri.lines().nth(1), Some("1,3,0"));
    assert_eq!(tri.lines().nth(2), Some("2,3,0"));
    assert_eq!(tri.lines().nth(3), Some("3,0,0"));

    let table = ok(dir.path(), &["bounds", "--d-max", "2", "--kmax", "1", "--c1", "2", "--w-min", "1"]);
    assert!(table.lines().any(|l| l == "2,1,2,1,1.25,1.25,1.25"));
    let path_bound = ok(dir.path(), &["bounds", "--table", "path-bound", "--model", "model.json", "--kmax", "3"]);
    assert_eq!(path_bound.lines().count(), 4);
}

#[test]
fn oracles_run_on_small_graphs() {
    let dir = setup();
    let v: Value = serde_json::from_str(&ok(dir.path(), &["oracle", "exact", "--graph", "mixed.tsv", "--vaccinate", "3"])).unwrap();
    assert!(v["result"]["exact"]["mean"].as_f64().unwrap() >= 1.0);
    let s: Value = serde_json::from_str(&ok(dir.path(), &["oracle", "sbcc", "--graph", "unit.tsv", "--budget", "2"])).unwrap();
    for sweep in s["result"]["sweeps"].as_array().unwrap() {
        assert_eq!(sweep["cut_within"], true);
        assert_eq!(sweep["size_within"], true);
    }
    let b: Value = serde_json::from_str(&ok(
        dir.path(),
        &["oracle", "brute", "--graph", "mixed.tsv", "--budget", "2", "--num-samples", "50", "--mode", "node"],
    ))
    .unwrap();
    assert_eq!(b["result"]["intervention"]["kind"], "node_removal");
}

#[test]
fn generated_model_graph_round_trips() {
    let dir = setup();
    let text = ok(dir.path(), &["generate", "--model", "model.json", "--p", "0.3", "--seed", "2"]);
    let g = epictrl_core::netcore::parse_edge_list(&text).unwrap();
    assert_eq!(g.n(), 10);
    assert!(g.edges().iter().all(|e| e.prob == 0.3 && e.cost == 1.0));
}
