//! Runs the `dycknf` binary on the fixture grammars.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../grammars").join(format!("{name}.cfg"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dycknf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dycknf")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn convert_output_reparses_to_itself() {
    for form in ["cnf", "dnf"] {
        for name in ["expr", "lin", "cf"] {
            let first = run(&["convert", "--to", form, path(&fixture(name))]);
            assert_eq!(first.status.code(), Some(0));
            let file = scratch(&format!("{name}.{form}"));
            std::fs::write(&file, &first.stdout).unwrap();
            let second = run(&["convert", "--to", form, path(&file)]);
            assert_eq!(stdout(&first), stdout(&second), "{name} {form}");
        }
    }
}

#[test]
fn expression_grammar_has_seven_pairs() {
    let o = run(&["convert", "--to", "dnf", path(&fixture("expr"))]);
    let text = stdout(&o);
    assert!(text.contains("[7 ->") && !text.contains("[8"));
}

#[test]
fn trace_prints_bracket_words() {
    let o = run(&["trace", "--word", "abbaadcb", path(&fixture("lin"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[1 ]1 [2 [3 [4 ]4 [5 [6 ]6 [7 ]7 ]5 ]3 ]2");
    let none = run(&["trace", "--word", "ab", path(&fixture("lin"))]);
    assert_eq!(stdout(&none), "");
}

#[test]
fn verify_reports_hold() {
    for (claim, name) in [("cs", "lin"), ("cs", "cf"), ("superset", "expr"), ("dycknf", "expr")] {
        let o = run(&["verify", claim, "--max-len", "8", "--seed", "7", path(&fixture(name))]);
        let text = stdout(&o);
        assert_eq!(o.status.code(), Some(0), "{claim} {name}: {text}");
        assert!(text.contains(&format!("claim={claim} bound=8 status=holds |diff|=")), "{text}");
    }
}

#[test]
fn refined_graph_dot() {
    let out = scratch("refined.dot");
    let o = run(&["graph", "--kind", "refined", "--dot", path(&out), path(&fixture("cf"))]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(out).unwrap();
    assert!(dot.starts_with("digraph refined"));
    assert!(dot.contains("purple") && dot.contains("color=green"));
}

#[test]
fn dependency_graph_to_stdout() {
    let o = run(&["graph", "--kind", "dep", "--root", "S", path(&fixture("lin"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("[label=").count(), 8);
}

#[test]
fn approx_writes_files() {
    let (rg, dot) = (scratch("lin.rg"), scratch("lin.dot"));
    let o = run(&["approx", path(&fixture("lin")), "-o", path(&rg), "--dot", path(&dot)]);
    assert_eq!(o.status.code(), Some(0));
    let g = dycknf::parse_grammar(&std::fs::read_to_string(rg).unwrap()).unwrap();
    assert_eq!(g.terminals, vec!["a", "b", "c", "d"]);
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("digraph ae"));
}

#[test]
fn iteration_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_dycknf"))
        .args(["approx", path(&fixture("cf"))])
        .env("DYCKNF_MAX_ITER", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap 2"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["convert", "--to", "dnf", "/nonexistent/g.cfg"]).status.code(), Some(2));
    assert_eq!(run(&["convert", "--to", "xnf", path(&fixture("lin"))]).status.code(), Some(2));
    assert_eq!(run(&["graph", "--kind", "dep", "--root", "[1", path(&fixture("lin"))]).status.code(), Some(2));
    let bad = scratch("bad.cfg");
    std::fs::write(&bad, "start: S\nS -> 'a' |\n").unwrap();
    let o = run(&["convert", "--to", "cnf", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}
