use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn locc(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_locc"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const H1: &str = "n=6\n1 2 3\n1 5 6\n2 4 5\n3 4 6\n";
const H2: &str = "n=6\n4 5 6\n2 3 4\n1 3 6\n1 2 5\n";

#[test]
fn compare_isentropic_pair_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (write(&dir, "h1.txt", H1), write(&dir, "h2.txt", H2));
    let run = locc(&["compare", s(&a), s(&b), "--json", "--no-timing"]);
    assert_eq!(run.code, 2, "{}", run.stderr);
    let v: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(v["result"]["relation"], "Inconclusive");
    assert_eq!(v["result"]["isentropic"], true);
    assert_eq!(v["result"]["witness_fwd"], Value::Null);
    assert_eq!(v["inputs"]["a"]["n"], 6);

    let text = locc(&["compare", s(&a), s(&b), "--no-timing"]);
    assert_eq!(text.code, 2);
    assert!(text.stdout.starts_with("relation: Inconclusive\n"));
}

#[test]
fn compare_incomparable_graphs_reports_witnesses() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", "n=4\n1 2\n3 4\n");
    let b = write(&dir, "b.txt", "n=4\n1 3\n2 4\n");
    let run = locc(&["--json", "--no-timing", "compare", s(&a), s(&b)]);
    assert_eq!(run.code, 0);
    let v: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(v["result"]["relation"], "Incomparable");
    assert_eq!(v["result"]["witness_fwd"], serde_json::json!([1, 2]));
    assert_eq!(v["result"]["witness_bwd"], serde_json::json!([1, 3]));
}

#[test]
fn compare_subset_adds_destruction_note() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", "n=3\n1 2\n2 3\n");
    let b = write(&dir, "b.txt", "n=3\n1 2\n");
    let run = locc(&["--json", "--no-timing", "compare", s(&a), s(&b)]);
    let v: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(v["result"]["relation"], "BlockedBackward");
    assert!(v["result"]["note"]
        .as_str()
        .unwrap()
        .contains("A reaches B"));
    assert_eq!(run.code, 0);
}

#[test]
fn witness_command() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", "n=3\n1 2\n");
    let b = write(&dir, "b.txt", "n=3\n1 2\n2 3\n");
    let run = locc(&["witness", s(&a), s(&b), "--no-timing"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("witness: {1,2}|{3}"), "{}", run.stdout);
    let none = locc(&["witness", s(&b), s(&a), "--no-timing"]);
    assert_eq!(none.code, 2);
}

#[test]
fn width_prints_value() {
    let run = locc(&["width", "4", "2"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout.lines().next(), Some("20"));
    let run = locc(&["width", "6", "4", "--verify", "--json", "--no-timing"]);
    let v: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(v["result"]["width"], "6435");
    assert_eq!(v["result"]["antichain"]["matches"], true);
    let odd = locc(&["width", "5", "3", "--json", "--no-timing"]);
    let v: Value = serde_json::from_str(&odd.stdout).unwrap();
    assert_eq!(v["result"]["conjectural"], true);
    assert_eq!(v["result"]["width"], "252");
}

#[test]
fn plan_star_to_triangle_is_exact_negative() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "n=4\n1 4\n2 4\n3 4\n");
    let h = write(&dir, "h.txt", "n=4\n1 2\n2 3\n1 3\n");
    let run = locc(&["plan", s(&g), s(&h), "--no-timing"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout, "not reachable under restricted LOCC\n");
    let run = locc(&["plan", s(&g), s(&h), "--no-timing", "--json"]);
    let v: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(
        v["result"]["message"],
        "not reachable under restricted LOCC"
    );
    assert_eq!(v["result"]["reachable"], false);
}

#[test]
fn emitted_script_replays() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "n=4\n1 2\n2 3\n3 4\n");
    let h = write(&dir, "h.txt", "n=4\n1 3\n");
    let script = dir.path().join("script.json");
    let run = locc(&[
        "plan",
        s(&g),
        s(&h),
        "--emit-script",
        s(&script),
        "--no-timing",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.starts_with("reachable in 2 ops\n"));
    let json = std::fs::read_to_string(&script).unwrap();
    assert_eq!(
        json,
        "{\"ops\":[{\"teleport\":[1,2,3]},{\"destroy\":[3,4]}]}\n"
    );

    let ok = locc(&[
        "replay",
        s(&g),
        s(&script),
        "--expect",
        s(&h),
        "--no-timing",
    ]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    assert_eq!(ok.stdout, "n=4\n1 3\nmatches expected: true\n");

    let wrong = write(&dir, "wrong.txt", "n=4\n1 4\n");
    let bad = locc(&[
        "replay",
        s(&g),
        s(&script),
        "--expect",
        s(&wrong),
        "--no-timing",
    ]);
    assert_eq!(bad.code, 1);

    let broken = write(&dir, "broken.json", "{\"ops\":[{\"destroy\":[1,4]}]}");
    let err = locc(&["replay", s(&g), s(&broken)]);
    assert_eq!(err.code, 1);
    assert!(err.stderr.contains("op 0"), "{}", err.stderr);
}

#[test]
fn atlas_writes_dot() {
    let dir = TempDir::new().unwrap();
    let dot = dir.path().join("atlas.dot");
    let run = locc(&["atlas", "3", "2", "--dot", s(&dot), "--no-timing"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.starts_with("nodes: 8\n"));
    assert!(run.stdout.contains("certified fragment only"));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph locc {"));
    assert!(text.contains("style=dashed"));

    let inline = locc(&["atlas", "3", "2", "--no-timing"]);
    assert_eq!(inline.stdout, text);

    let over = locc(&["atlas", "5", "2", "--budget", "100"]);
    assert_eq!(over.code, 1);
    assert!(over.stderr.contains("exceeds budget"), "{}", over.stderr);
}

#[test]
fn validate_reports_line_numbers() {
    let dir = TempDir::new().unwrap();
    let good = write(
        &dir,
        "good.txt",
        "# GHZ plus a pair\nn=3\nparties=A B C\nA B C\nA B\n",
    );
    let run = locc(&["validate", s(&good), "--no-timing"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.contains("n=3\n1 2\n1 2 3\n"), "{}", run.stdout);

    let bad = write(&dir, "bad.txt", "n=3\n1 2\n1 4\n");
    let run = locc(&["validate", s(&bad)]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("line 3"), "{}", run.stderr);

    let rep = write(&dir, "rep.txt", "n=3\n1 1\n");
    assert_eq!(locc(&["validate", s(&rep)]).code, 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(locc(&["transmogrify"]).code, 1);
    assert_eq!(locc(&[]).code, 1);
    assert_eq!(
        locc(&["compare", "/no/such/file", "/no/such/other"]).code,
        1
    );
    assert_eq!(locc(&["width", "x", "2"]).code, 1);
    assert_eq!(locc(&["--help"]).code, 0);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (write(&dir, "h1.txt", H1), write(&dir, "h2.txt", H2));
    for args in [
        vec!["compare", s(&a), s(&b), "--json", "--no-timing"],
        vec!["atlas", "4", "2", "--max-m", "2", "--json", "--no-timing"],
        vec!["validate", s(&a), s(&b), "--json", "--no-timing"],
    ] {
        let first = locc(&args);
        let second = locc(&args);
        assert_eq!(first.stdout, second.stdout);
        assert_eq!(first.code, second.code);
    }
    let timed = locc(&["compare", s(&a), s(&b), "--json"]);
    let v: Value = serde_json::from_str(&timed.stdout).unwrap();
    assert!(v["wall_time_ms"].is_u64());
}
