use std::fs;
use std::path::Path;

use positroidal::cli::run_with;
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(cache: &Path, args: &[&str]) -> Run {
    let mut argv = vec!["positroidal".to_string(), "--cache-dir".into(), cache.display().to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.out).unwrap_or_else(|e| panic!("{e}: {}", r.out))
}

#[test]
fn wt_prints_printed_vector() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), &["wt", "--k", "2", "--n", "5", "--tableau", "1;4"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.out.trim(), "[0,0,0,0,1,1,0,1,0,0]");
}

#[test]
fn subdivide_from_tableau_and_weight_agree() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(dir.path(), &["subdivide", "--k", "2", "--n", "5", "--tableau", "1;3"]);
    let b = run(dir.path(), &["subdivide", "--k", "2", "--n", "5", "--weight", "[0,0,0,0,1,0,0,0,0,0]"]);
    assert_eq!((a.code, b.code), (0, 0));
    assert_eq!(a.out, b.out);
    let v = json(&a);
    assert_eq!(v["cells"].as_array().unwrap().len(), 2);
    assert_eq!(v["classification"]["isSplit"], Value::Bool(true));
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|s| s.as_str()).collect();
    assert_eq!(keys, ["k", "n", "weight", "cells", "classification"]);

    let file = dir.path().join("w.json");
    fs::write(&file, "[0, 0, 0, 0, 1, 0, 0, 0, 0, 0]").unwrap();
    let c = run(dir.path(), &["subdivide", "--k", "2", "--n", "5", "--weight", file.to_str().unwrap()]);
    assert_eq!(c.out, a.out);

    let d = run(dir.path(), &["subdivide", "--k", "2", "--n", "5", "--tableau", "1;3", "--detailed"]);
    assert!(json(&d)["cells"][0].get("facets").is_some() || d.out.contains("facets"));
}

#[test]
fn classify_reports_coarsest_split() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), &["classify", "--k", "3", "--n", "7", "--tableau", "3;4;7"]);
    assert_eq!(r.code, 0);
    let c = &json(&r)["classification"];
    assert_eq!(c["isPositroidal"], Value::Bool(true));
    assert!(c["affineDim"].as_u64().unwrap() >= 8);
}

#[test]
fn usage_and_input_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), &["wt", "--k", "2", "--n", "4", "--tableau", "2;1"]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("error"));
    assert_eq!(run(dir.path(), &["frobnicate"]).code, 1);
    assert_eq!(run(dir.path(), &["tree", "--n", "4", "--pair", "1,2"]).code, 1);
    assert_eq!(run(dir.path(), &["tree", "--n", "4", "--pair", "1"]).code, 1);
    assert_eq!(run(dir.path(), &["subdivide", "--k", "2", "--n", "5"]).code, 1);
    assert_eq!(run(dir.path(), &["subdivide", "--k", "2", "--n", "5", "--weight", "[1,2]"]).code, 1);
    assert_eq!(run(dir.path(), &["wt", "--k", "2", "--n", "5", "--tableau", "1;3", "--format", "csv"]).code, 1);
    assert_eq!(run(dir.path(), &["verify", "--suite", "nope"]).code, 1);
    let help = run(dir.path(), &["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.out.contains("census"));
}

#[test]
fn census_budget_writes_partial_report_and_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), &["census", "--k", "3", "--n", "9", "--max-sources", "5", "--no-certify"]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("--max-sources"));
    let v = json(&r);
    assert_eq!(v["processed"], 5);
    assert_eq!(v["tableauCount"], 84);
}

#[test]
fn census_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), &["census", "--k", "2", "--n", "5"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v = json(&r);
    assert_eq!(v["splitCount"], 5);
    assert_eq!(v["formula"], 5);
    let csv = run(dir.path(), &["census", "--k", "2", "--n", "5", "--format", "csv"]);
    assert_eq!(csv.code, 0);
    assert_eq!(csv.out.trim().lines().count(), 11);
    assert!(csv.out.starts_with("column,class,"));
}

#[test]
fn verify_fixtures_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let r = run(dir.path(), &["verify", "--suite", "fixtures", "--output", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.out.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["verdict"], "pass");
    let csv = run(dir.path(), &["verify", "--suite", "splits-2n", "--n", "4,5", "--format", "csv"]);
    assert_eq!(csv.code, 0);
    assert!(csv.out.lines().skip(1).all(|l| l.starts_with("splits-2n,")));
}

#[test]
fn tree_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("t.dot");
    let r = run(dir.path(), &["tree", "--n", "7", "--pair", "2,5", "--dot", dot.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let v = json(&r);
    assert_eq!(v["left"], serde_json::json!([3, 4, 5]));
    assert_eq!(v["right"], serde_json::json!([6, 7, 1, 2]));
    let text = fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph") && text.contains("u -- v;"));
}

#[test]
fn cache_is_transparent_and_versioned() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["subdivide", "--k", "3", "--n", "6", "--tableau", "1,2;3,4;5,6"];
    let cold = run(dir.path(), &args);
    let warm = run(dir.path(), &args);
    let mut no_cache = vec!["--no-cache"];
    no_cache.extend(args);
    let uncached = run(dir.path(), &no_cache);
    assert_eq!(cold.out, warm.out);
    assert_eq!(cold.out, uncached.out);

    let status = json(&run(dir.path(), &["cache", "status"]));
    assert_eq!(status["count"], 1);
    // stale format version is rebuilt with a notice
    let file = dir.path().join("web-k3-n6.json");
    let text = fs::read_to_string(&file).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["version"] = Value::from(0);
    fs::write(&file, v.to_string()).unwrap();
    let stale = run(dir.path(), &args);
    assert_eq!(stale.out, cold.out);
    assert!(stale.err.contains("notice"), "{}", stale.err);

    let warmed = json(&run(dir.path(), &["cache", "warm", "--k", "2", "--n", "6"]));
    assert_eq!(warmed["k"], 2);
    let cleared = json(&run(dir.path(), &["cache", "clear"]));
    assert_eq!(cleared["removed"], 2);
    assert_eq!(json(&run(dir.path(), &["cache", "status"]))["count"], 0);
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# batch defaults\nmax_sources = 3\nno-certify = true\nformat = csv\n").unwrap();
    let r = run(dir.path(), &["--config", cfg.to_str().unwrap(), "census", "--k", "2", "--n", "6"]);
    assert_eq!(r.code, 1, "budget of 3 from the config applies");
    let r = run(
        dir.path(),
        &["--config", cfg.to_str().unwrap(), "census", "--k", "2", "--n", "6", "--max-sources", "50"],
    );
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("column,"));
    fs::write(&cfg, "not a pair\n").unwrap();
    assert_eq!(run(dir.path(), &["--config", cfg.to_str().unwrap(), "census", "--k", "2", "--n", "6"]).code, 1);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(dir.path(), &["verify", "--suite", "gr38-noncoarsest"]);
    let b = run(dir.path(), &["verify", "--suite", "gr38-noncoarsest"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.out, b.out);
}
