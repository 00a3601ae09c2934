use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tutte_theta::poly::{Poly, QSeries, Vars};
use tutte_theta::statepoly::state_vars;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tutte-theta"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const E8: &str = "11110000\n00111100\n00001111\n01010101\n";

#[test]
fn pseudo_k2_two_states() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k2.graph", "V 2\nE 0 1\n");
    let o = run(&["pseudo", "--graph", s(&g), "--matrix", "paper", "--n", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "311x^311 + 106x^53 + 7x^7\n");
}

#[test]
fn tutte_k3_both_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.graph", "V 3\nE 0 1\nE 1 2\nE 0 2\n");
    for alg in ["auto", "subsets", "deletion-contraction"] {
        let o = run(&["tutte", "--graph", s(&g), "--algorithm", alg]);
        assert_eq!(stdout(&o), "x^2 + x + y\n");
    }
}

#[test]
fn theta_e8() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "e8.gen", E8);
    let o = run(&["theta", "--matrix", s(&c), "--prec", "20"]);
    assert!(stdout(&o).starts_with("1 + 240q^2 + 2160q^4"));
    let o = run(&["theta", "--matrix", s(&c), "--prec", "24", "--format", "json"]);
    let series = QSeries::from_json(&stdout(&o)).unwrap();
    assert_eq!(series.coeff(16), 2160.into());
}

#[test]
fn wenum_and_replicate() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "e8.gen", E8);
    let a = run(&["wenum", "--matrix", s(&c)]);
    let b = run(&["wenum", "--matrix", s(&c), "--algorithm", "greene"]);
    assert_eq!(stdout(&a), "x^8 + 14x^4y^4 + y^8\n");
    assert_eq!(stdout(&a), stdout(&b));
    let g = write(dir.path(), "tri.graph", "V 3\nE 0 1\nE 1 2\nE 0 2\n");
    assert_eq!(stdout(&run(&["wenum", "--graph", s(&g)])), "x^3 + 3xy^2\n");
    let r = run(&["replicate4", "--matrix", s(&c)]);
    let text = stdout(&r);
    let lines: Vec<&str> = text.lines().filter(|l| !l.is_empty()).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l.len() == 32));
}

#[test]
fn pseudo_then_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.graph", "V 4\nE 0 1\nE 0 1\nE 1 2\n");
    let w = dir.path().join("w.json");
    let z = dir.path().join("z.json");
    let o = run(&[
        "pseudo", "--graph", s(&g), "--matrix", "admissible", "--m", "3", "--n", "9",
        "--matrix-out", s(&w), "--format", "json", "--out", s(&z),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    Poly::from_json(&fs::read_to_string(&z).unwrap(), Vars::univariate()).unwrap();
    let o = run(&["reconstruct", "--poly", s(&z), "--matrix-file", s(&w)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("V 4\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with('E')).count(), 3);
}

#[test]
fn symbolic_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.graph", "V 3\nE 0 1\nE 0 1\n");
    let o = run(&["nstate", "--graph", s(&g), "--n", "3", "--symbolic", "--format", "json"]);
    let z = write(dir.path(), "z.json", &stdout(&o));
    Poly::from_json(&stdout(&o), state_vars(3)).unwrap();
    let o = run(&["reconstruct", "--poly", s(&z), "--symbolic-n", "3"]);
    let text = stdout(&o);
    assert!(text.starts_with("V 3\n"));
    assert_eq!(text.lines().filter(|l| *l == "E 0 1").count(), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.graph", "V 2\nE 0 x\n");
    let o = run(&["tutte", "--graph", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 5"));

    let k3 = write(dir.path(), "k3.graph", "V 3\nE 0 1\nE 1 2\nE 0 2\n");
    let o = run(&["pseudo", "--graph", s(&k3), "--matrix", "paper", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["tutte", "--graph", "/nonexistent.graph"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn deterministic_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.graph", "V 4\nE 0 1\nE 1 2\nE 2 3\nE 3 0\nE 0 2\n");
    let a = run(&["--workers", "1", "nstate", "--graph", s(&g), "--n", "3", "--symbolic"]);
    let b = run(&["--workers", "3", "nstate", "--graph", s(&g), "--n", "3", "--symbolic"]);
    let c = run(&["nstate", "--graph", s(&g), "--n", "3", "--symbolic"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn pipeline_report_json() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "path.graph", "V 4\nE 0 1\nE 1 2\nE 2 3\n");
    let st = write(dir.path(), "star.graph", "V 4\nE 0 1\nE 0 2\nE 0 3\n");
    let out = dir.path().join("report.json");
    let o = run(&[
        "pipeline", "--g1", s(&p), "--g2", s(&st), "--prec", "40", "--format", "json", "--out", s(&out),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["tutte_equal"], true);
    assert_eq!(v["graphs_nonisomorphic"], true);
    assert_eq!(v["theta_equal_to_precision"], serde_json::json!([true, 40]));
    assert_eq!(v["lattice_rank"], 12);
    assert_eq!(v["lattice_isomorphism"], "not certified");
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
}

#[test]
fn search_writes_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("pairs");
    let o = run(&["search", "--max-v", "5", "--max-e", "4", "--out", s(&pairs)]);
    assert!(o.status.success());
    let first = stdout(&o).lines().next().unwrap().to_string();
    let count: usize = first.split(' ').next().unwrap().parse().unwrap();
    assert_eq!(fs::read_dir(&pairs).unwrap().count(), 2 * count);
}

#[test]
fn primes_lookup() {
    assert_eq!(stdout(&run(&["primes", "--nth", "729"])), "5519\n");
    let o = run(&["primes", "--table", "3", "--format", "json"]);
    assert!(stdout(&o).contains("8448283757"));
}
