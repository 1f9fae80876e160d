use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const DIAMOND: &str = "lattice v1\n4 4\n0 1\n0 2\n1 3\n2 3\n";
// x=0 y=1 c1=2 c2=3 c3=4 h=5 d=6, with d inserted above c1, c2.
const DUMMY: &str = "lattice v1\n7 8\n0 2\n1 3\n0 4\n1 4\n4 5\n2 6\n3 6\n6 5\n";

fn lattice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lattice")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_reports_and_sets_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = lattice(&["validate", s(&write(&dir, "d.txt", DIAMOND))]);
    assert_eq!((ok.status.code(), stdout(&ok).as_str()), (Some(0), "ok\n"));

    let bad = lattice(&["validate", s(&write(&dir, "dummy.txt", DUMMY))]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(
        stdout(&bad),
        "lattice property fails: 0, 1 < 4, 6 with no element in between\n"
    );

    let transitive = lattice(&[
        "validate",
        s(&write(&dir, "t.txt", "lattice v1\n4 5\n0 1\n0 2\n1 3\n2 3\n0 3\n")),
    ]);
    assert_eq!(transitive.status.code(), Some(1));
    assert!(stdout(&transitive).contains("edge (0, 3) is transitive"));

    let truncated = lattice(&["validate", s(&write(&dir, "cut.txt", "lattice v1\n4 4\n0 1\n"))]);
    assert_eq!(truncated.status.code(), Some(2));
    assert_eq!(lattice(&["validate", "/nonexistent/graph.txt"]).status.code(), Some(2));
}

#[test]
fn queries_agree_across_structures() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("d60.txt");
    let g = lattice(&["gen", "--family", "divisor", "--size", "60", "--out", s(&file)]);
    assert_eq!(g.status.code(), Some(0));
    // Divisors of 60 by ascending value: 12 has id 7, 10 has id 6, 2 has id 1.
    for structure in ["blocked", "simple", "recursive"] {
        let meet = lattice(&["query", s(&file), "meet", "7", "6", "--structure", structure]);
        assert_eq!(stdout(&meet), "1\n", "{structure}");
        // lcm(4, 6) = 12: ids 3, 5 -> 7
        let join = lattice(&["query", s(&file), "join", "3", "5", "--structure", structure]);
        assert_eq!(stdout(&join), "7\n", "{structure}");
    }
    let d = write(&dir, "d.txt", DIAMOND);
    assert_eq!(stdout(&lattice(&["query", s(&d), "leq", "1", "2"])), "false\n");
    assert_eq!(
        stdout(&lattice(&["query", s(&d), "leq", "0", "3", "--structure", "simple"])),
        "true\n"
    );
    let with_stats = lattice(&["query", s(&d), "meet", "1", "2", "--stats", "--c", "1"]);
    let text = stdout(&with_stats);
    assert!(text.starts_with("0\nstats order_tests="), "{text}");
    assert_eq!(lattice(&["query", s(&d), "meet", "1", "4"]).status.code(), Some(2));
    assert_eq!(
        lattice(&["query", s(&d), "meet", "1", "2", "--c", "0.3"]).status.code(),
        Some(2)
    );
}

#[test]
fn join_of_maximal_elements_is_null() {
    let dir = TempDir::new().unwrap();
    let v = write(&dir, "v.txt", "lattice v1\n3 2\n0 1\n0 2\n");
    for structure in ["blocked", "simple", "recursive"] {
        let o = lattice(&["query", s(&v), "join", "1", "2", "--structure", structure]);
        assert_eq!(stdout(&o), "null\n", "{structure}");
    }
}

#[test]
fn gen_is_deterministic_and_validates() {
    let dir = TempDir::new().unwrap();
    let a = lattice(&["gen", "--family", "random_distributive", "--n", "200", "--seed", "4"]);
    let b = lattice(&["gen", "--family", "random_distributive", "--n", "200", "--seed", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let file = write(&dir, "r.txt", &stdout(&a));
    assert_eq!(stdout(&lattice(&["validate", s(&file)])), "ok\n");
    let cube = lattice(&["gen", "--family", "boolean", "--size", "3"]);
    assert!(stdout(&cube).starts_with("lattice v1\n8 12\n"));
    assert!(stdout(&lattice(&[
        "gen", "--family", "chain", "--size", "3", "--format", "dot"
    ]))
    .starts_with("digraph"));
    assert_eq!(
        lattice(&["gen", "--family", "boolean", "--size", "40"]).status.code(),
        Some(2)
    );
    assert_eq!(
        lattice(&["gen", "--family", "nope", "--size", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(lattice(&["gen", "--family", "chain"]).status.code(), Some(2));
}

#[test]
fn build_info_lists_sizes() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.txt", DIAMOND);
    let o = lattice(&["build-info", s(&d), "--dump"]);
    let text = stdout(&o);
    assert!(text.contains("n 4\n") && text.contains("block_size 2\n"), "{text}");
    assert!(text.contains("space.total "));
    assert!(text.contains("residual:"));
    let r = stdout(&lattice(&["build-info", s(&d), "--structure", "recursive", "--dump"]));
    assert!(r.contains("tree_nodes ") && r.contains("root ["), "{r}");
}

#[test]
fn bench_emits_rows_in_order() {
    let args = [
        "bench",
        "--family",
        "boolean",
        "--sizes",
        "64,128,256,512,1024",
        "--queries",
        "50",
        "--c",
        "0.5,1",
    ];
    let one = lattice(&args);
    assert_eq!(one.status.code(), Some(0));
    let text = stdout(&one);
    let lines: Vec<&str> = text.lines().collect();
    let width = lines[0].split(',').count();
    assert!(lines.iter().all(|l| l.split(',').count() == width));
    for structure in ["blocked", "simple", "recursive"] {
        let rows = lines.iter().filter(|l| l.split(',').nth(3) == Some(structure)).count();
        assert!(rows >= 5, "{structure}: {rows}");
    }
    let mut parallel = args.to_vec();
    parallel.extend(["--jobs", "3"]);
    assert_eq!(lattice(&parallel).stdout, one.stdout);
}

#[test]
fn bench_reports_generation_failures() {
    let o = lattice(&[
        "bench",
        "--family",
        "random_poset_completion",
        "--sizes",
        "60,4000",
        "--queries",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    let width = lines[0].split(',').count();
    assert!(lines.iter().all(|l| l.split(',').count() == width));
    assert!(lines
        .iter()
        .any(|l| l.starts_with("random_poset_completion,4000,") && l.ends_with("target 4000")));
}

#[test]
fn demo_dummy_is_stable() {
    let a = lattice(&["demo-dummy"]);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    assert!(text.contains("original: ok"));
    assert!(text.contains("with dummy: lattice property fails: x, y < c3, d"));
    assert!(text.contains("meet(c3, d): undefined"));
    assert_eq!(lattice(&["demo-dummy"]).stdout, a.stdout);
}
