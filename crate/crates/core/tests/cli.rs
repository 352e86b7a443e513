use std::path::PathBuf;
use std::process::{Command, Output};

fn fintop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fintop"))
        .args(args)
        .env_remove("FINTOP_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fintop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exact_tc_of_a_circle() {
    let o = fintop(&["tc", "--circle", "3", "--exact"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("tc(S1_3) = 2"));
}

#[test]
fn json_reports_are_versioned() {
    let o = fintop(&["--format", "json", "cat", "--circle", "2", "--exact"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["lower"], 1);
    assert_eq!(v["result"]["upper"], 1);
}

#[test]
fn witness_exit_codes() {
    assert_eq!(fintop(&["verify-witness", "--k", "5"]).status.code(), Some(0));
    assert_eq!(fintop(&["verify-witness", "--k", "7"]).status.code(), Some(3));
    assert_eq!(fintop(&["verify-witness", "--k", "3"]).status.code(), Some(1));
}

#[test]
fn homotopic_and_degree_from_files() {
    let id = scratch("id.map");
    let wrap = scratch("wrap.map");
    let small = scratch("small.map");
    std::fs::write(&id, "circlemap 3 3 0 1 2 3 4 5\n").unwrap();
    std::fs::write(&wrap, "circlemap 3 3 0 0 0 0 0 0\n").unwrap();
    std::fs::write(&small, "circlemap 2 2 0 1 2 3\n").unwrap();
    let o = fintop(&["degree", id.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1"));
    let o = fintop(&["homotopic", id.to_str().unwrap(), wrap.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).to_lowercase().contains("not"));
    let o = fintop(&["homotopic", id.to_str().unwrap(), small.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors() {
    assert_eq!(fintop(&["tc"]).status.code(), Some(1));
    assert_eq!(fintop(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(fintop(&["--help"]).status.code(), Some(0));
}

#[test]
fn complex_export() {
    let out = scratch("c4.asc");
    let o = fintop(&["export-complex", "--circle", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("asc 8 8\n"));
    let o = fintop(&["export-complex", "--circle", "2", "--dot"]);
    assert_eq!(stdout(&o).matches("->").count(), 4);
}

#[test]
fn reproduction_is_stable_across_threads() {
    let a = fintop(&["--threads", "1", "reproduce-paper"]);
    let b = fintop(&["--threads", "4", "reproduce-paper"]);
    let c = fintop(&["reproduce-paper"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(a.status.code(), b.status.code());
    assert!(stdout(&a).contains("tc(S1_2)"));
}
