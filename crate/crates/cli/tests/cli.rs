use std::path::Path;
use std::process::{Command, Output};

fn tatecoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tatecoh"))
        .args(args)
        .env_remove("TATE_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let run = |p: &Path| tatecoh(&["--window", "-6..6", "--report", p.to_str().unwrap(), "ideal-scan", "periodic"]);
    let (x, y) = (run(&a), run(&b));
    assert!(x.status.success(), "{}", stderr(&x));
    assert_eq!(x.stdout, y.stdout);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn free_module_has_no_complete_cohomology() {
    let dir = tempfile::tempdir().unwrap();
    let pres = dir.path().join("free.pres");
    std::fs::write(&pres, "algebra p=2 gens=X,Y\ngenerators u\n").unwrap();
    let o = tatecoh(&["--window", "-3..3", "ext-table", pres.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows: Vec<String> = stdout(&o).lines().skip(2).map(str::to_owned).collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let cols: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(&cols[1..], ["0", "0"], "{row}");
    }
}

#[test]
fn engines_agree_on_the_periodic_module() {
    let o = tatecoh(&["--window", "-4..4", "ext-table", "periodic"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("   -1        9        9"));
    assert!(!stdout(&o).contains("MISMATCH"));
}

#[test]
fn periodic_example_reproduces() {
    let o = tatecoh(&["--window", "-6..6", "reproduce", "periodic"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn growth_example_fails_verification() {
    let o = tatecoh(&["--window", "-4..4", "reproduce", "growth"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("verification failed"));
}

#[test]
fn products_are_cross_checked() {
    let o = tatecoh(&["multiply", "periodic", "1:e9", "2:e0"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("recomputed from cocycles: agrees"));
}

#[test]
fn bad_class_is_an_error() {
    let o = tatecoh(&["multiply", "periodic", "1:e99", "2:e0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no basis vector 99"));
}

#[test]
fn out_of_window_degree_names_the_window_needed() {
    let o = tatecoh(&["multiply", "periodic", "30:e0", "1:e0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("extend the window to at least [-8, 31]"), "{}", stderr(&o));
}

#[test]
fn unknown_module_is_an_error() {
    let o = tatecoh(&["resolve", "no-such-module"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cache_directory_is_populated_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--cache-dir", dir.path().to_str().unwrap(), "--window", "-3..3", "resolve", "growth"];
    let first = tatecoh(&args);
    assert!(first.status.success());
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 1);
    let second = tatecoh(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn periodic_trivial_module_skips_the_nilpotency_theorem() {
    let dir = tempfile::tempdir().unwrap();
    let pres = dir.path().join("k.pres");
    std::fs::write(&pres, "algebra p=2 gens=X\ngenerators u\nrelations\nX*u\n").unwrap();
    let o = tatecoh(&["nilpotency", pres.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("inapplicable") || stdout(&o).contains("not applicable"), "{}", stdout(&o));
}
