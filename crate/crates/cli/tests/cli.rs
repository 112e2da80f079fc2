use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use stratakit_core::canon::is_isomorphic;
use stratakit_core::formats::{parse_graph, parse_poset};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stratakit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stratakit")).args(args).env_remove("STRATAKIT_BUDGET").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn enum_lists_four_classes_with_relation() {
    let v = json_of(&stratakit(&["enum", "--genus", "0", "--legs", "a,b,c,d", "--format", "json", "--hasse"]));
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 4);
    for c in classes {
        let g = parse_graph(&c["graph"].to_string()).expect("class graphs round-trip");
        assert_eq!(g.edge_count() as u64, c["edge_count"].as_u64().unwrap());
    }
    // Three boundary divisors, each specialising to the smooth stratum.
    assert_eq!(v["relation"].as_array().unwrap().len(), 3);
    assert_eq!(v["hasse"], v["relation"]);
}

#[test]
fn dot_output_is_sorted() {
    let out = stratakit(&["enum", "--genus", "1", "--legs", "a", "--format", "dot"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph strata {"));
    // The nodal class has the lower id (classes sort by canonical bytes) and covers the smooth one.
    assert!(text.contains("0 [label=\"0 (1 edges)\"];"));
    assert!(text.contains("0 -> 1;"));
}

#[test]
fn contracting_the_loop_gives_the_smooth_graph() {
    let v = json_of(&stratakit(&["contract", "--in", &data("chain_iii.json"), "--edges", "loop"]));
    let got = parse_graph(&v.to_string()).unwrap();
    let want = parse_graph(&std::fs::read_to_string(data("chain_iv.json")).unwrap()).unwrap();
    assert!(is_isomorphic(&got, &want).unwrap().is_some());
}

#[test]
fn automorphism_orders() {
    assert_eq!(json_of(&stratakit(&["aut", "--in", &data("theta.json")]))["order"], 12);
    assert_eq!(json_of(&stratakit(&["aut", "--in", &data("dumbbell.json")]))["order"], 8);
}

#[test]
fn clutching_builds_the_dumbbell() {
    let parts = format!("{},{}", data("clutch_part0.json"), data("clutch_part1.json"));
    let v = json_of(&stratakit(&["clutch", "--in", &data("clutch_template.json"), "--parts", &parts]));
    let got = parse_graph(&v.to_string()).unwrap();
    let want = parse_graph(&std::fs::read_to_string(data("dumbbell.json")).unwrap()).unwrap();
    assert!(is_isomorphic(&got, &want).unwrap().is_some());
}

#[test]
fn iso_between_sample_graphs() {
    let v = json_of(&stratakit(&["iso", &data("chain_ii.json"), &data("chain_ii.json")]));
    assert_eq!(v["isomorphic"], true);
    let v = json_of(&stratakit(&["iso", &data("chain_ii.json"), &data("chain_iii.json")]));
    assert_eq!(v["isomorphic"], false);
}

#[test]
fn poset_round_trips_and_homology() {
    let v = json_of(&stratakit(&["poset", "--genus", "0", "--legs", "a,b,c,d,e"]));
    assert_eq!(parse_poset(&v.to_string()).unwrap().len(), 26);
    let v = json_of(&stratakit(&["poset", "--genus", "1", "--legs", "a", "--homology", "--max-dim", "2"]));
    assert_eq!(v["homology"]["reduced_betti"], serde_json::json!([0, 0, 0]));
    let v = json_of(&stratakit(&["homology", "--in", &data("hollow_triangle.json"), "--max-dim", "1"]));
    assert_eq!(v["reduced_betti"], serde_json::json!([0, 1]));
}

#[test]
fn malformed_input_points_at_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"vertices":[{"weight":0}],"half_edges":[{"vertex":"zero"}],"involution":[0],"legs":{}}"#).unwrap();
    let out = stratakit(&["aut", "--in", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("half_edges[0].vertex"));
    let out = stratakit(&["enum", "--genus", "0", "--legs", "a,b"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn budget_exceeded_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_stratakit")).args(["enum", "--genus", "2"]).env("STRATAKIT_BUDGET", "3").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = stratakit(&["--budget", "2", "clcat", "build", &data("subsets12.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out =
        Command::new(env!("CARGO_BIN_EXE_stratakit")).args(["enum", "--genus", "2"]).env("STRATAKIT_BUDGET", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn clcat_report_passes() {
    let v = json_of(&stratakit(&["clcat", "build", &data("subsets12.json"), "--report"]));
    assert_eq!(v["objects"].as_array().unwrap().len(), 4);
    assert!(v["report"].as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn tw_report_certifies_subsets() {
    let v = json_of(&stratakit(&["tw", "report", &data("subsets12.json"), "--theta", "{}", "--certificates", "--limits", "0"]));
    assert!(v["checks"].as_array().unwrap().iter().all(|r| r["passed"] == true));
    let certs = v["certificates"].as_array().unwrap();
    assert!(!certs.is_empty() && certs.iter().all(|c| c["status"] == "certified"));
    assert!(v["limits"].as_array().unwrap().iter().all(|l| l["checks"].as_array().unwrap().iter().all(|r| r["passed"] == true)));
}

#[test]
fn tw_report_diagnoses_missing_join() {
    let out = stratakit(&["tw", "report", &data("joinfree.json"), "--theta", "{}", "--certificates"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<&Value> = v["certificates"].as_array().unwrap().iter().filter(|c| c["status"] == "failed").collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| c["obstruction"].as_str().unwrap().contains("missing join") && c["heuristic"]["label"] == "heuristic"));
}

#[test]
fn outputs_are_byte_identical_across_runs_and_threads() {
    let args = ["tw", "report", &data("subsets12.json"), "--theta", "{}", "--certificates", "--limits", "3"];
    let mut outputs = Vec::new();
    for threads in ["1", "4", "4"] {
        let out = Command::new(env!("CARGO_BIN_EXE_stratakit")).args(args).env("RAYON_NUM_THREADS", threads).output().unwrap();
        outputs.push(out.stdout);
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let enums: Vec<Vec<u8>> = ["1", "8"]
        .iter()
        .map(|t| {
            let out = Command::new(env!("CARGO_BIN_EXE_stratakit"))
                .args(["enum", "--genus", "2", "--hasse"])
                .env("RAYON_NUM_THREADS", t)
                .output()
                .unwrap();
            out.stdout
        })
        .collect();
    assert_eq!(enums[0], enums[1]);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("theta_aut.json");
    let out = stratakit(&["aut", "--in", &data("theta.json"), "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["order"], 12);
}
