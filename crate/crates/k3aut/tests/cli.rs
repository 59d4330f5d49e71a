//! End-to-end tests of the `k3aut` binary: exit codes, output files and cache placement.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use k3aut::fixtures::Reference;

fn k3aut(args: &[&str], cache_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_k3aut"));
    cmd.args(args).env_remove("K3AUT_CACHE_DIR");
    if let Some(dir) = cache_env {
        cmd.env("K3AUT_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn short_vectors_of_a2_are_the_six_roots() {
    let o = k3aut(
        &[
            "lattice",
            "short-vectors",
            "--gram",
            r#"[["2","-1"],["-1","2"]]"#,
            "--norm",
            "2",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let mut lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    lines.sort();
    assert_eq!(lines, ["-1 -1", "-1 0", "0 -1", "0 1", "1 0", "1 1"]);
}

#[test]
fn short_vectors_accepts_negative_definite_input() {
    let o = k3aut(
        &["lattice", "short-vectors", "--gram", "[[-2,1],[1,-2]]", "--norm", "-2"],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["run", "--surface", "9"][..],
        &["run"],
        &["frobnicate"],
        &["--threads", "0", "run", "--surface", "0"],
        &["lattice", "short-vectors", "--gram", "[[1,0],[0,-1]]", "--norm", "1"],
        &["lattice", "short-vectors", "--gram", "not json", "--norm", "2"],
        &["verify", "--fixtures", "/nonexistent/reference.json"],
    ] {
        let o = k3aut(args, None);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn help_exits_successfully() {
    let o = k3aut(&["--help"], None);
    assert_eq!(o.status.code(), Some(0));
    for word in ["run", "enriques", "verify", "lattice", "--threads", "--cache-dir"] {
        assert!(stdout(&o).contains(word), "help mentions {word}");
    }
}

#[test]
fn corrupted_reference_data_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = Reference::bundled_json().to_owned();
    // an Enriques involution that is not one: flip the sign of its first entry
    let mut reference: serde_json::Value = serde_json::from_str(&text).unwrap();
    let entry = &mut reference["enriques_involution_x0"][0][0];
    let flipped = -entry.as_str().unwrap().parse::<i64>().unwrap() + 1;
    *entry = serde_json::Value::String(flipped.to_string());
    text = serde_json::to_string(&reference).unwrap();
    let path = dir.path().join("reference.json");
    fs::write(&path, text).unwrap();
    let o = k3aut(&["verify", "--fixtures", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("FAIL] enriques_involution_x0"));
}

#[test]
fn run_writes_reports_and_fills_the_cache_named_by_the_environment() {
    let out = tempfile::tempdir().unwrap();
    let cache = tempfile::tempdir().unwrap();
    let out_dir = out.path().to_str().unwrap();
    let first = k3aut(&["run", "--surface", "2", "--out", out_dir], Some(cache.path()));
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let json = fs::read_to_string(out.path().join("surface2.json")).unwrap();
    let table = fs::read_to_string(out.path().join("surface2.txt")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["automorphisms"]["order"], 720);
    assert!(v["gram"][0][0].is_string(), "lattice entries are decimal strings");
    assert_eq!(stdout(&first), table);
    let cached = fs::read_dir(cache.path().join("congruence")).unwrap().count();
    assert!(cached > 0, "congruences cached under $K3AUT_CACHE_DIR");

    // the flag wins over the environment, and a warm cache changes nothing
    let flag_cache = tempfile::tempdir().unwrap();
    let second = k3aut(
        &[
            "--threads",
            "1",
            "--cache-dir",
            flag_cache.path().to_str().unwrap(),
            "run",
            "--surface",
            "2",
            "--out",
            out_dir,
        ],
        Some(cache.path()),
    );
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(fs::read_to_string(out.path().join("surface2.json")).unwrap(), json);
    assert_eq!(fs::read_dir(cache.path().join("congruence")).unwrap().count(), cached);
    assert_eq!(
        fs::read_dir(flag_cache.path().join("congruence")).unwrap().count(),
        cached
    );

    let third = k3aut(&["run", "--surface", "2", "--out", out_dir], Some(cache.path()));
    assert_eq!(third.status.code(), Some(0));
    assert_eq!(fs::read_to_string(out.path().join("surface2.json")).unwrap(), json);
}
