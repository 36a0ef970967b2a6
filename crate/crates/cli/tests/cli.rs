use std::path::Path;
use std::process::{Command, Output};

use voganlab::report::OrbitReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voganlab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(args: &[&str]) -> OrbitReport {
    let o = run(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    OrbitReport::from_json(&stdout(&o)).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn analyze_orbit_counts() {
    assert_eq!(report(&["analyze", "--family", "gl", "--steinberg", "4", "--json"]).orbits.len(), 8);
    assert_eq!(report(&["analyze", "--family", "gl", "--two-eig", "3", "--json"]).orbits.len(), 4);
    let dir = tempfile::tempdir().unwrap();
    let point = write(dir.path(), "point.json", r#"{"family":"gl","chains":[{"offset":0,"dims":[3]}]}"#);
    let r = report(&["analyze", "--spec", &point, "--json"]);
    assert_eq!(r.orbits.len(), 1);
    assert!(r.hasse.is_empty());
    assert_eq!(r.multiplicity.entries, vec![vec![Some(1)]]);
}

#[test]
fn two_eigenvalue_multiplicity_entry() {
    let r = report(&["analyze", "--two-eig", "2", "--json"]);
    // orbit ids are sorted by dimension: rank 0, rank 1, rank 2
    assert_eq!(r.multiplicity.get(0, 1), Some(2));
    assert_eq!(r.multiplicity.get(1, 0), Some(0));
    assert!(!r.orbits[1].smooth_closure);
    assert_eq!(r.orbits[1].rationally_smooth, Some(false));
    assert!(r.orbits[1].abv_singleton.is_none());
    assert!(r.orbits[0].abv_singleton.is_some());
}

#[test]
fn classical_reports() {
    let r = report(&["analyze", "--family", "sp-dual", "--steinberg", "2", "--json"]);
    assert_eq!(r.orbits.len(), 4);
    let groups: Vec<Vec<u64>> =
        r.orbits.iter().map(|o| o.component_group.as_ref().unwrap().group.elementary_divisors.clone()).collect();
    // S contains 2e_2 exactly for the orbits labelled with a2
    for (o, g) in r.orbits.iter().zip(&groups) {
        assert_eq!(g.is_empty(), !o.label.contains("a2"), "{}", o.label);
    }
    let r = report(&["analyze", "--family", "so-even", "--two-eig", "4", "--json"]);
    assert_eq!(r.orbits.len(), 3);
    assert!(r.orbits.iter().all(|o| o.component_group.is_none() && o.rationally_smooth.is_none()));
}

#[test]
fn hasse_shapes() {
    let dot = stdout(&run(&["hasse", "--two-eig", "2", "--dot"]));
    assert_eq!(dot.matches("[label=").count(), 3);
    assert_eq!(dot.matches("->").count(), 2);
    assert!(dot.contains("n0 -> n1;") && dot.contains("n1 -> n2;"));

    let dot = stdout(&run(&["hasse", "--steinberg", "3", "--dot"]));
    assert_eq!(dot.matches("[label=").count(), 4);
    assert_eq!(dot.matches("->").count(), 4);

    let dir = tempfile::tempdir().unwrap();
    let point = write(dir.path(), "point.json", r#"{"family":"gl","chains":[{"offset":"1/2","dims":[1]}]}"#);
    let dot = stdout(&run(&["hasse", "--spec", &point, "--dot"]));
    assert_eq!(dot.matches("[label=").count(), 1);
    assert!(!dot.contains("->"));
}

#[test]
fn dataset_commands() {
    let text = stdout(&run(&["dataset", "so7-cfmmx16"]));
    assert!(text.contains("φ_2, φ_4, φ_5, φ_6"));
    let json = run(&["dataset", "so7-cfmmx16", "--json"]);
    let parsed: voganlab::dataset::CuratedDataset = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(parsed, voganlab::dataset::load("so7-cfmmx16").unwrap());
    assert!(run(&["dataset", "so7-cfmmx16", "--check"]).status.success());
    assert_eq!(run(&["dataset", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_commands() {
    let o = run(&["verify", "--steinberg", "4"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    assert!(run(&["verify", "--two-eig", "2"]).status.success());
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.json", r#"{"family":"gl","chains":[]}"#);
    assert!(run(&["verify", "--spec", &empty]).status.success());
    // order reversal fails here; the exit code reports it
    let spec = write(dir.path(), "121.json", r#"{"family":"gl","chains":[{"offset":-1,"dims":[1,2,1]}]}"#);
    let o = run(&["verify", "--spec", &spec]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("dual-order-reversal    FAIL"));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(run(&["analyze", "--family", "so-odd-dual", "--two-eig", "2"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--family", "sp-dual", "--spec", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--family", "sp-dual", "--steinberg", "2"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"family":"gl","chains":[{"offset":"x","dims":[1]}]}"#);
    assert_eq!(run(&["analyze", "--spec", &bad]).status.code(), Some(2));
}

#[test]
fn kl_cache_spill() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let go = || {
        Command::new(env!("CARGO_BIN_EXE_voganlab"))
            .args(["analyze", "--two-eig", "2", "--json"])
            .env("VOGANLAB_CACHE_DIR", &cache)
            .output()
            .unwrap()
    };
    let first = go();
    assert!(cache.join("kl-cache.json").exists());
    let second = go();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, run(&["analyze", "--two-eig", "2", "--json"]).stdout);
}
