use std::process::{Command, Output};

use serde_json::Value;

fn revcf(args: &[&str]) -> (Output, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_revcf")).args(args).output().expect("spawn revcf");
    let text = String::from_utf8(out.stdout.clone()).expect("utf-8");
    let line = text.lines().next().unwrap_or_else(|| panic!("no output for {args:?}"));
    let v = serde_json::from_str(line).expect("json record");
    (out, v)
}

#[test]
fn orbit_from_barycenter_is_constant() {
    let (out, v) = revcf(&["orbit", "--steps", "30"]);
    assert!(out.status.success());
    assert_eq!(v["result"]["word"], "4".repeat(30));
    for c in v["result"]["end"].as_array().unwrap() {
        assert!((c.as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }
}

#[test]
fn mass_is_one() {
    let (out, v) = revcf(&["mass"]);
    assert!(out.status.success());
    assert!((v["result"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn records_embed_config_and_version() {
    let (_, v) = revcf(&["--seed", "7", "orbit", "--x", "0.2,0.3,0.5", "--steps", "3"]);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["config"]["command"]["orbit"]["steps"], 3);
    assert_eq!(v["config"]["norm"], "rowsum");
}

#[test]
fn bound_two_matches_frozen_oracle() {
    let (out, v) = revcf(&["bound", "--n", "2"]);
    assert!(out.status.success());
    let r = &v["result"];
    assert!((r["l2"].as_f64().unwrap() - 0.071445).abs() < 1e-6);
    let (l1, l2, total) = (r["l1"].as_f64().unwrap(), r["l2"].as_f64().unwrap(), r["total"].as_f64().unwrap());
    assert!(l1 < 0.0);
    assert_eq!(total, l1 + l2);
    assert_eq!(r["word_count"], 13);
    let (_, c) = revcf(&["--norm", "induced", "bound", "--n", "2"]);
    assert!((c["result"]["l2"].as_f64().unwrap() - 0.076637).abs() < 1e-6);
}

#[test]
fn bound_is_thread_independent() {
    let (_, a) = revcf(&["--threads", "1", "bound", "--n", "8"]);
    let (_, b) = revcf(&["--threads", "8", "bound", "--n", "8"]);
    assert_eq!(a["result"]["total"], b["result"]["total"]);
    assert_eq!(a["result"]["l2"], b["result"]["l2"]);
}

#[test]
fn sorted_bound_ten_is_nonnegative() {
    let (out, v) = revcf(&["bound-sorted", "--n", "10"]);
    assert!(out.status.success());
    assert!(v["result"]["total"].as_f64().unwrap() >= 0.0);
}

#[test]
fn csv_has_header_and_prefix_rows() {
    let dir = std::env::temp_dir().join(format!("revcf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("sums.csv");
    let json = dir.join("bound.json");
    let out = Command::new(env!("CARGO_BIN_EXE_revcf"))
        .args(["bound", "--n", "5", "--csv", csv.to_str().unwrap(), "--out", json.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("prefix,count,positive,negative"));
    let total: f64 = lines.map(|l| l.split(',').nth(4).unwrap().parse::<f64>().unwrap()).sum();
    let v: Value = serde_json::from_str(std::fs::read_to_string(&json).unwrap().trim()).unwrap();
    assert!((total - v["result"]["l2"].as_f64().unwrap()).abs() < 1e-12);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn mc_is_reproducible_and_sorted() {
    let args = ["--seed", "5", "mc", "--iterations", "20000", "--batches", "20"];
    let (out, a) = revcf(&args);
    let (_, b) = revcf(&args);
    assert!(out.status.success());
    assert_eq!(a["result"], b["result"]);
    let l = |k: &str| a["result"][k].as_f64().unwrap();
    assert!(l("lambda1") >= l("lambda2") && l("lambda2") >= l("lambda3"));
}

#[test]
fn language_and_balance() {
    let (out, v) = revcf(&["language", "--pattern", "123", "--depth", "3"]);
    assert!(out.status.success());
    assert_eq!(v["result"]["directive"], serde_json::json!([1, 2, 3]));
    // σ1σ2σ3 applied to 1
    assert_eq!(v["result"]["images"][0]["word"], "1213121");
    let (out, v) = revcf(&["balance", "--depth", "10", "--cap", "150"]);
    assert!(out.status.success());
    assert_eq!(v["result"]["two_c_holds"], true);
}

#[test]
fn verify_lemmas_passes() {
    let (out, v) = revcf(&["verify-lemmas", "--samples", "2000"]);
    assert!(out.status.success(), "{v}");
    assert!(v["result"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn errors_exit_nonzero() {
    let (out, v) = revcf(&["bound", "--n", "30"]);
    assert!(!out.status.success());
    assert_eq!(v["passed"], false);
    assert!(v["error"].as_str().unwrap().contains("30"));
    let (out, _) = revcf(&["orbit", "--x", "0.5,0.6,0.1"]);
    assert!(!out.status.success());
    let (out, _) = revcf(&["language", "--pattern", "125"]);
    assert!(!out.status.success());
}
