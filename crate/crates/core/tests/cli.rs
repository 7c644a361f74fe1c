use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_sbm-distance");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SMALL: &str = r#"{"params":{"w":[[5,1],[1,5]],"pi":[0.5,0.5],"n":400},"ell":2,"seeds":[1,2,3,4,5,6,7,8,9,10],"perturbation":"clique"}"#;

#[test]
fn generate_is_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", SMALL);
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert!(run(&["generate", "--config", &cfg, "--seed", "7", "--out", s(&a)]).status.success());
    assert!(run(&["generate", "--config", &cfg, "--seed", "7", "--out", s(&b)]).status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn zero_matrix_generates_no_edges() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"params":{"w":[[0,0],[0,0]],"pi":[0.5,0.5],"n":10},"seeds":[1]}"#);
    let out = dir.path().join("g.json");
    assert!(run(&["generate", "--config", &cfg, "--seed", "1", "--out", s(&out)]).status.success());
    assert!(fs::read_to_string(&out).unwrap().contains(r#""edges":[]"#));
}

#[test]
fn default_profile_edge_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"params":{"w":[[5,1],[1,5]],"pi":[0.5,0.5],"n":2000},"seeds":[1]}"#);
    let out = dir.path().join("g.json");
    assert!(run(&["generate", "--config", &cfg, "--seed", "3", "--out", s(&out)]).status.success());
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let m = doc["edges"].as_array().unwrap().len() as f64;
    // n α / 2 = 3000 expected edges
    assert!((m - 3000.0).abs() <= 150.0, "{m} edges");
}

#[test]
fn detect_appends_identical_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", SMALL);
    let g = dir.path().join("g.json");
    let csv = dir.path().join("rows.csv");
    let assign = dir.path().join("a.json");
    assert!(run(&["generate", "--config", &cfg, "--seed", "2", "--out", s(&g)]).status.success());
    for _ in 0..2 {
        let out = run(&["detect", "--config", &cfg, "--graph", s(&g), "--seed", "2", "--out", s(&assign), "--csv", s(&csv)]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with('#'));
    assert_eq!(lines[1], sbm_distance::experiment::CSV_HEADER);
    assert_eq!(lines.len(), 4);
    let strip = |l: &str| l.rsplitn(4, ',').last().unwrap().to_string();
    assert_eq!(strip(lines[2]), strip(lines[3]));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&assign).unwrap()).unwrap();
    assert_eq!(doc["labels"].as_array().unwrap().len(), 400);
    assert!(doc["overlap"].is_number());
}

#[test]
fn perturb_then_detect() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", SMALL);
    let g = dir.path().join("g.json");
    let p = dir.path().join("p.json");
    let csv = dir.path().join("rows.csv");
    assert!(run(&["generate", "--config", &cfg, "--seed", "4", "--out", s(&g)]).status.success());
    assert!(run(&["perturb", "--config", &cfg, "--graph", s(&g), "--gamma", "5", "--seed", "4", "--out", s(&p)]).status.success());
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(doc["gamma"], 5);
    assert!(doc["add"].as_array().unwrap().len() <= 10);
    let out = run(&[
        "detect", "--config", &cfg, "--graph", s(&g), "--perturbation", s(&p), "--seed", "4", "--out",
        s(&dir.path().join("a.json")), "--csv", s(&csv), "--matrix", "path",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let row = fs::read_to_string(&csv).unwrap().lines().nth(2).unwrap().to_string();
    assert_eq!(row.split(',').nth(4), Some("5"));
}

#[test]
fn sweep_rows_are_seed_major() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", SMALL);
    let out = dir.path().join("sweep.csv");
    let res = run(&["sweep", "--config", &cfg, "--gamma", "0,1,2,4,8,16", "--out", s(&out)]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(2).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 60);
    let keys: Vec<(u64, usize)> = rows.iter().map(|r| (r[0].parse().unwrap(), r[4].parse().unwrap())).collect();
    let want: Vec<(u64, usize)> = (1..=10).flat_map(|s| [0, 1, 2, 4, 8, 16].map(|g| (s, g))).collect();
    assert_eq!(keys, want);
    for r in &rows {
        let overlap: f64 = r[5].parse().unwrap();
        assert!((-0.5..=0.5).contains(&overlap));
        assert_eq!(r.len(), 15);
    }
}

#[test]
fn sweep_without_gammas_gives_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", SMALL);
    let out = dir.path().join("sweep.csv");
    assert!(run(&["sweep", "--config", &cfg, "--out", s(&out)]).status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().skip(2).count(), 10);
    assert!(text.lines().skip(2).all(|l| l.split(',').nth(4) == Some("0")));
}

#[test]
fn verify_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("v.json");
    let out = run(&["verify", "--suite", "oracles,bounds", "--out", s(&report)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[PASS]"));
    assert!(fs::read_to_string(&report).unwrap().contains("\"pass\":true"));
}

#[test]
fn gw_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"params":{"w":[[5,1],[1,5]],"pi":[0.5,0.5],"n":100},"seeds":[1],"gw_runs":20000}"#,
    );
    let out = dir.path().join("gw.json");
    assert!(run(&["gw", "--config", &cfg, "--seed", "1", "--out", s(&out)]).status.success());
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let est = doc["var_sum"]["estimate"].as_f64().unwrap();
    assert!((est - 3.0).abs() < 0.3, "{est}");
}

#[test]
fn bad_inputs_exit_with_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"params":{"w":[[5,1],[1,5]],"pi":[0.5,0.5],"n":100},"seeds":[]}"#);
    let out = run(&["generate", "--config", &cfg, "--out", s(&dir.path().join("g.json"))]);
    assert_eq!(out.status.code(), Some(2));
    let missing = run(&["detect", "--config", &cfg, "--graph", "/nonexistent.json", "--out", "/tmp/x.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(run(&["sweep", "--matrix", "bogus"]).status.code(), Some(2));
}
