//! End-to-end command-line behavior: pipeline composition, the oracle and
//! stats commands, and the exit-code table.

use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_almost-steiner");

fn run(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn pack_then_augment_equals_construct() {
    let dir = tempfile::tempdir().unwrap();
    let packed = dir.path().join("packed.txt");
    let staged = dir.path().join("staged.txt");
    let direct = dir.path().join("direct.txt");

    let out = run(&[
        "pack", "--n", "31", "--k", "3", "--t", "2", "--strategy", "greedy", "--seed", "1",
        "--out", packed.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "augment", "--in", packed.to_str().unwrap(), "--seed", "1", "--p-override", "0.5",
        "--out", staged.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "construct", "--n", "31", "--k", "3", "--t", "2", "--seed", "1", "--p-override", "0.5",
        "--out", direct.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read(&staged), read(&direct));
}

#[test]
fn oracle_finds_a_seven_point_plane() {
    let dir = tempfile::tempdir().unwrap();
    let design = dir.path().join("fano.txt");
    let out = run(&[
        "oracle", "--n", "7", "--k", "3", "--t", "2", "--lambda", "1",
        "--out", design.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = read(&design);
    // Header + parameter line + 7 blocks.
    assert_eq!(text.lines().count(), 9);

    let out = run(&["stats", "--in", design.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("overhead_ratio=1.000000"), "stats output:\n{stdout}");
    assert!(stdout.contains("edge_count=7"));
}

#[test]
fn verify_distinguishes_lambda_sets() {
    let dir = tempfile::tempdir().unwrap();
    let design = dir.path().join("d.txt");
    let out = run(&[
        "construct", "--n", "19", "--k", "3", "--t", "2", "--seed", "1", "--p-override", "0.88",
        "--out", design.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let ok = run(&["verify", "--in", design.to_str().unwrap(), "--lambda", "1,2"]);
    assert_eq!(ok.status.code(), Some(0));

    // The construction keeps some pairs at multiplicity 2, so lambda={1} fails
    // with exit 1 and a colex-first witness.
    let strict = run(&["verify", "--in", design.to_str().unwrap(), "--lambda", "1"]);
    assert_eq!(strict.status.code(), Some(1));
    let stdout = String::from_utf8(strict.stdout).unwrap();
    assert!(stdout.contains("witness="), "stdout:\n{stdout}");
}

#[test]
fn exit_codes_for_bad_input() {
    // Usage error: unknown subcommand.
    assert_eq!(run(&["bogus"]).status.code(), Some(64));
    // Usage error: k <= t.
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("x.txt");
    let out = run(&[
        "construct", "--n", "10", "--k", "2", "--t", "2", "--seed", "1",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(64));
    // Malformed input file.
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "not a design\n").unwrap();
    let out = run(&["verify", "--in", bad.to_str().unwrap(), "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(65));
    // Missing input file.
    let out = run(&["verify", "--in", "/definitely/missing", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(65));
    // Construction failure is exit 2 with a blocked-edge report.
    let out = run(&[
        "construct", "--n", "15", "--k", "3", "--t", "2", "--seed", "1",
        "--epsilon", "0.95", "--max-retries", "2",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("blocked_count="), "stdout:\n{stdout}");
}

#[test]
fn augment_rejects_infeasible_input() {
    // A design that already covers a pair twice is not a valid Phase I
    // partial; augment must refuse it rather than produce a bad output.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("double.txt");
    std::fs::write(&bad, "# almost-steiner design v1\n9 3 2\n0 1 2\n0 1 3\n").unwrap();
    let out_path = dir.path().join("y.txt");
    let out = run(&[
        "augment", "--in", bad.to_str().unwrap(), "--seed", "1", "--p-override", "0.5",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}
