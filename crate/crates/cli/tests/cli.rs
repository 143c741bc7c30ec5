use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betagraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn edges(v: &Value) -> Vec<(u64, u64)> {
    let mut e: Vec<(u64, u64)> = v["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| {
            let (a, b) = (p[0].as_u64().unwrap(), p[1].as_u64().unwrap());
            (a.min(b), a.max(b))
        })
        .collect();
    e.sort();
    e
}

#[test]
fn seven_strings_give_the_anti_heptagon() {
    let g = json(&["frustration", data("c7bar.txt").to_str().unwrap()]);
    assert_eq!(g["n"], 7);
    let e = edges(&g);
    assert_eq!(e.len(), 14);
    for i in 0..7u64 {
        let j = (i + 1) % 7;
        assert!(!e.contains(&(i.min(j), i.max(j))), "consecutive pair {i},{j} must commute");
    }
}

#[test]
fn standard_saur_round_trips_through_frustration() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["c5.json", "c7bar.json"] {
        let input = data(name);
        let out = run(&["standard-saur", input.to_str().unwrap()]);
        assert!(out.status.success());
        let list = dir.path().join("saur.txt");
        std::fs::write(&list, &out.stdout).unwrap();
        let back = json(&["frustration", list.to_str().unwrap()]);
        let original: Value = serde_json::from_str(&std::fs::read_to_string(&input).unwrap()).unwrap();
        assert_eq!(back["n"], original["n"]);
        assert_eq!(edges(&back), edges(&original), "{name}");
    }
}

#[test]
fn identical_seeds_give_identical_json() {
    let path = data("c7bar.json");
    let args = ["--format", "json", "--seed", "11", "--restarts", "4", "beta", path.to_str().unwrap()];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn beta_reports_the_certified_interval() {
    let v = json(&["beta", data("c5.json").to_str().unwrap()]);
    assert!((v["lower"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    assert_eq!(v["upper"].as_f64().unwrap(), 2.0);
    assert_eq!(v["upper_provenance"], "cycle-rule");
}

#[test]
fn declared_lexicographic_factorization_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    let k2 = dir.path().join("k2.json");
    std::fs::write(&k2, r#"{"n": 2, "edges": [[0, 1]]}"#).unwrap();
    let c5 = data("c5.json");
    let out = run(&["beta", c5.to_str().unwrap(), "--declare-lex", c5.to_str().unwrap(), k2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frustration", "/nonexistent/file.txt"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "XQ\n").unwrap();
    assert_eq!(run(&["frustration", bad.to_str().unwrap()]).status.code(), Some(2));
    let xz = dir.path().join("xz.txt");
    std::fs::write(&xz, "X\nZ\n").unwrap();
    assert_eq!(run(&["q-upper", xz.to_str().unwrap(), "--level", "3half"]).status.code(), Some(2));
    let ok = run(&["q-upper", xz.to_str().unwrap(), "--level", "3half", "--experimental"]);
    assert_eq!(ok.status.code(), Some(0));
    let starved = run(&["--restarts", "1", "--max-iters", "1", "verify", "c7bar"]);
    assert_eq!(starved.status.code(), Some(3));
}

#[test]
fn q_upper_on_the_bloch_disc() {
    let dir = tempfile::tempdir().unwrap();
    let xz = dir.path().join("xz.txt");
    std::fs::write(&xz, "X\nZ\n").unwrap();
    let v = json(&["q-upper", xz.to_str().unwrap()]);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn fourteen_qubit_extremal_energy() {
    let v = json(&["extremal-energy", data("h14.txt").to_str().unwrap()]);
    let target = 1.0 + 2.0 * 2f64.sqrt();
    assert!((v["max"].as_f64().unwrap() - target).abs() < 1e-5);
    assert!((v["min"].as_f64().unwrap() + target).abs() < 1e-5);
}

#[test]
fn stored_cases_verify() {
    for case in ["c7bar", "c5", "pentagon", "ladder", "h14", "c9bar"] {
        let out = run(&["verify", case]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{case}:\n{}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(String::from_utf8_lossy(&out.stdout).trim_end().ends_with("PASS"));
    }
}

#[test]
fn gse_table_has_all_rows() {
    let v = json(&["gse-bound", "--refine", "20", data("h14.txt").to_str().unwrap()]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let bound = v["bound"].as_f64().unwrap();
    assert!(bound >= 1.0 + 2.0 * 2f64.sqrt() - 1e-8);
    assert!((bound - (7.0 * 2.109916f64).sqrt()).abs() < 1e-4);
}
