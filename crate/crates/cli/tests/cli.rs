use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const PUZZLE_7X7: &str = ".1.....\n2..2..1\n.......\n.5.6.1.\n....2.3\n.2.....\n3..4..2\n";
const PUZZLE_7X7_SOLUTION: &str = "7 1 7 4 1\n7 4 7 7 1\n5 5 5 7 2\n4 2 4 4 2\n4 4 4 6 1\n2 4 2 7 1\n2 1 7 1 2\n4 2 6 2 2\n1 2 4 2 1\n4 4 7 4 2\n2 4 4 4 1\n5 7 7 7 1\n";

/// A scratch directory per test.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cardzkp-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn file(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn cardzkp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cardzkp")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn card_budget() {
    let d = scratch("budget");
    let p3 = file(&d, "p3.txt", "3 2\n1 2\n2 3\n");
    let k2 = file(&d, "k2.txt", "2 1\n1 2\n");
    let single = file(&d, "n1.txt", "1 0\n");
    assert_eq!(stdout(&cardzkp(&["card-budget", &p3])).trim(), "encoding=88 marking=9");
    assert_eq!(stdout(&cardzkp(&["card-budget", &k2])).trim(), "encoding=52 marking=7");
    assert_eq!(stdout(&cardzkp(&["card-budget", &single])).trim(), "encoding=24 marking=5");
}

#[test]
fn verify_spanning_exit_codes() {
    let d = scratch("spanning");
    let p3 = file(&d, "p3.txt", "3 2\n1 2\n2 3\n");
    let full = file(&d, "full.txt", "1 2\n2 3\n");
    let empty = file(&d, "empty.txt", "");
    assert_eq!(code(&cardzkp(&["verify-spanning", &p3, &full])), 0);
    assert_eq!(code(&cardzkp(&["verify-spanning", &p3, &empty])), 1);
    assert_eq!(code(&cardzkp(&["verify-spanning", &p3, &full, "--mode", "enumerated"])), 0);
    assert_eq!(code(&cardzkp(&["verify-spanning", &p3, "/nonexistent/h.txt"])), 2);
    assert_eq!(code(&cardzkp(&["verify-spanning", &p3])), 2);
    let bad = file(&d, "bad.txt", "3 2\n1 2\n");
    assert_eq!(code(&cardzkp(&["verify-spanning", &bad, &full])), 2);
}

#[test]
fn transcripts_are_reproducible() {
    let d = scratch("transcript");
    let c4 = file(&d, "c4.txt", "4 4\n1 2\n2 3\n3 4\n1 4\n");
    let h = file(&d, "h.txt", "1 2\n2 3\n3 4\n");
    let t1 = d.join("t1.txt");
    let t2 = d.join("t2.txt");
    for t in [&t1, &t2] {
        let out = cardzkp(&["verify-spanning", &c4, &h, "--seed", "7", "--transcript", t.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    let a = std::fs::read_to_string(&t1).unwrap();
    assert_eq!(a, std::fs::read_to_string(&t2).unwrap());
    assert!(a.lines().all(|l| l.starts_with("REVEAL ") || l.starts_with("ACTION ")));
}

#[test]
fn applications() {
    let d = scratch("apps");
    let c5 = file(&d, "c5.txt", "5 5\n1 2\n2 3\n3 4\n4 5\n1 5\n");
    let cycle = file(&d, "cycle.txt", "1 2\n2 3\n3 4\n4 5\n1 5\n");
    assert_eq!(code(&cardzkp(&["verify-hamiltonian", &c5, &cycle])), 0);
    let star = file(&d, "star.txt", "4 3\n1 2\n1 3\n1 4\n");
    let all = file(&d, "all.txt", "1 2\n1 3\n1 4\n");
    assert_eq!(code(&cardzkp(&["verify-maxleaf", &star, &all, "--k", "3"])), 0);
    assert_eq!(code(&cardzkp(&["verify-maxleaf", &star, &all, "--k", "4"])), 1);
    let grid = file(&d, "puzzle7x7.txt", PUZZLE_7X7);
    let sol = file(&d, "puzzle7x7-solution.txt", PUZZLE_7X7_SOLUTION);
    let empty = file(&d, "empty.txt", "");
    let out = cardzkp(&["verify-bridges", &grid, &sol]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(code(&cardzkp(&["verify-bridges", &grid, &empty])), 1);
    let broken = file(&d, "broken.txt", ".1.\n.0.\n");
    assert_eq!(code(&cardzkp(&["verify-bridges", &broken, &empty])), 2);
}

#[test]
fn audit_zk() {
    let d = scratch("audit");
    let k2 = file(&d, "k2.txt", "2 1\n1 2\n");
    let out = cardzkp(&["audit-zk", "spanning", &k2]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("result: indistinguishable"));
    let p3 = file(&d, "p3.txt", "3 2\n1 2\n2 3\n");
    let out = cardzkp(&["audit-zk", "spanning", &p3, "--mode", "statistical", "--samples", "10000", "--seed", "3"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let big = file(&d, "c10.txt", &format!("10 10\n{}1 10\n", (1..10).map(|i| format!("{i} {}\n", i + 1)).collect::<String>()));
    assert_eq!(code(&cardzkp(&["audit-zk", "spanning", &big])), 2);
    let star = file(&d, "star.txt", "3 2\n1 2\n1 3\n");
    let all = file(&d, "all.txt", "1 2\n1 3\n");
    assert_eq!(code(&cardzkp(&["audit-zk", "maxleaf", &star, &all, "--k", "2"])), 2);
}
