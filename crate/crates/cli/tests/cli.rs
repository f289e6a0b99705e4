use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spincalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spincalc")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spincalc-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn modrule_exterior_square() {
    let out = spincalc(&["modrule", "--partition", "1,1", "--rank-N", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"{"tau":"1","j":1}"#);
}

#[test]
fn modrule_vanishing() {
    let out = spincalc(&["modrule", "--partition", "2,2", "--rank-N", "2"]);
    assert_eq!(json(&out), serde_json::json!({"vanishes": true}));
}

#[test]
fn modrule_algorithms_agree() {
    for alg in ["border", "weyl"] {
        let out = spincalc(&["modrule", "--partition", "3,2,1,1", "--rank-N", "3", "--algorithm", alg]);
        assert_eq!(out.status.code(), Some(0), "{alg}");
    }
    let a = spincalc(&["modrule", "--partition", "3,2,1,1", "--rank-N", "3", "--algorithm", "border"]);
    let b = spincalc(&["modrule", "--partition", "3,2,1,1", "--rank-N", "3", "--algorithm", "weyl"]);
    assert_eq!(json(&a), json(&b));
}

#[test]
fn ext_of_trivial_into_vector() {
    let out = spincalc(&["ext", "--mu", "", "--lam", "1", "--i", "1"]);
    assert_eq!(json(&out), serde_json::json!({"dim": 1}));
}

#[test]
fn hom_dim_counts_matchings() {
    let out = spincalc(&["hom-dim", "--source", "2", "--target", "0"]);
    assert_eq!(json(&out)["dim"], 2);
}

#[test]
fn euler_check_passes() {
    let out = spincalc(&["euler-check", "--lam", "2,1", "--N", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn verify_rep_small() {
    let out = spincalc(&["verify-rep", "--flavor", "spin", "--rank", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = spincalc(&["verify-rep", "--flavor", "osc", "--rank", "1", "--trunc", "4"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bad_partition_is_a_usage_error() {
    let out = spincalc(&["modrule", "--partition", "1,3", "--rank-N", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = spincalc(&["modrule", "--partition", "a", "--rank-N", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(spincalc(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_all_single_suite() {
    let out = spincalc(&["verify-all", "--quick", "--only", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 1);
}

#[test]
fn golden_round_trip() {
    let dir = scratch("golden");
    let d = dir.to_str().unwrap();
    let args = ["--golden", d, "modrule", "--partition", "3,1", "--rank-N", "2"];
    assert_eq!(spincalc(&args).status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(files.len(), 1);
    let path = files[0].as_ref().unwrap().path();
    assert!(!path.file_name().unwrap().to_str().unwrap().contains("spincalc-cli"));
    assert_eq!(spincalc(&args).status.code(), Some(0));

    std::fs::write(&path, "{\"tau\":\"2\",\"j\":1}\n").unwrap();
    assert_eq!(spincalc(&args).status.code(), Some(1));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn compose_from_files() {
    let dir = scratch("compose");
    std::fs::create_dir_all(&dir).unwrap();
    let f = serde_json::json!({"source": [1, 2, 3], "target": [1], "circled": [], "edges": [[2, 3]], "through": [[1, 1]], "flavor": "spin"});
    let g = serde_json::json!({"source": [1], "target": [], "circled": [1], "edges": [], "through": [], "flavor": "spin"});
    std::fs::write(dir.join("f.json"), f.to_string()).unwrap();
    std::fs::write(dir.join("g.json"), g.to_string()).unwrap();
    let first = format!("@{}", dir.join("f.json").display());
    let second = format!("@{}", dir.join("g.json").display());
    let out = spincalc(&["compose-diagrams", "--first", &first, "--second", &second]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["source"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["terms"].as_array().unwrap().len(), 1);
    let _ = std::fs::remove_dir_all(&dir);
}
