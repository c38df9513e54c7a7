//! End-to-end runs of the binary against the shipped fixture files.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_famtop"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

#[test]
fn space_check_counts() {
    let out = bin()
        .args(["space-check"])
        .arg(fixture("example_a.famtop"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("points: 3"));
    assert!(text.contains("opens: 5"));
    assert!(text.contains("chains: 4"));
    assert!(text.contains("topologies: 4"));
}

#[test]
fn family_open_machine_output_is_stable() {
    let run = || {
        let out = bin()
            .args(["family-open", "--chain", "f1p", "--level", "1", "--format", "machine"])
            .arg(fixture("example_a.famtop"))
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let first = run();
    assert_eq!(first, run(), "identical runs must be byte-identical");
    let text = String::from_utf8(first).unwrap();
    let expected = "\
command=family-open
level=1
maps=5
map=0:X{}
map=1:X{b}
map=2:X{a}
map=3:X{a,b}
map=4:X{a,b,c}
open=
open=2,3
open=0,1,2,3,4
";
    assert_eq!(text, expected);
}

#[test]
fn isbell_matches_scott_level_zero() {
    let out = bin()
        .args(["isbell", "--space", "Y", "--format", "machine"])
        .arg(fixture("example_b.famtop"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("open=\nopen=2\nopen=1,2\nopen=0,1,2\n"), "{text}");
}

#[test]
fn exit_codes() {
    // missing full set in the space definition
    let dir = std::env::temp_dir().join("famtop-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.famtop");
    std::fs::write(&bad, "space Y\npoints a b\nopen -\nopen a\n").unwrap();
    let out = bin().arg("space-check").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("full point set"), "{err}");

    // false verdict: the discrete topology on C(Y,S) is not splitting
    let out = bin()
        .args([
            "verify-splitting",
            "--chain",
            "powerset",
            "--level",
            "1",
            "--scott-tau",
            "--catalog-points",
            "2",
        ])
        .arg(fixture("example_b.famtop"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // guard exceeded
    let out = bin()
        .args(["isbell", "--space", "Y", "--max-points", "1"])
        .arg(fixture("example_a.famtop"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // usage error from clap
    let out = bin().arg("no-such-command").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join("famtop-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let out = bin()
        .args(["scott", "--space", "Y", "--format", "machine", "--output"])
        .arg(&path)
        .arg(fixture("example_b.famtop"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("command=scott\n"));
}

#[test]
fn tower_and_stabilize() {
    let out = bin()
        .args(["tower", "--chain", "f2", "--level", "1", "--format", "machine"])
        .arg(fixture("example_a.famtop"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("contained=true"));

    let out = bin()
        .args(["stabilize", "--chain", "f1", "--rule", "tau-itself", "--depth", "3"])
        .arg(fixture("example_a.famtop"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("depth: 1"));
}

#[test]
fn greatest_splitting_fixture() {
    let out = bin()
        .args(["greatest-splitting", "--space", "Y", "--format", "machine"])
        .arg(fixture("example_b.famtop"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("splitting=4"));
    assert!(text.contains("join_is_greatest=true"));
    assert!(text.contains("open=\nopen=2\nopen=1,2\nopen=0,1,2\n"));
}
