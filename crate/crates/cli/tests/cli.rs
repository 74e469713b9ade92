use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn morse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morse"))
        .args(args)
        .env_remove("MORSE_BUDGET_SECONDS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path: PathBuf = self.0.path().join(name);
        std::fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_string()
    }
}

#[test]
fn build_edge() {
    let f = Files::new();
    let edge = f.write("edge.txt", "a b\n");
    let o = morse(&["build", &edge]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "p0\np1\n# p0 0 a -> a,b\n# p1 0 b -> a,b\n");
}

#[test]
fn stats_of_built_triangle() {
    let f = Files::new();
    let tri = f.write("tri.txt", "a b c\n");
    let built = morse(&["build", &tri]);
    let m = f.write("m.txt", &stdout(&built));
    let o = morse(&["stats", &m]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "euler=-3"), "{out}");
    assert!(out.lines().any(|l| l == "betti_mod2=1,4,0"), "{out}");
    assert_eq!(stdout(&morse(&["stats", "--morse", &tri])), out);
}

#[test]
fn reconstruct_star_relabeling() {
    let f = Files::new();
    let a = f.write("a.txt", "c a\nc b\nc d\n");
    let b = f.write("b.txt", "x y\nx z\nw x\n");
    let o = morse(&["reconstruct", &a, &b]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "c -> x"), "{out}");
    assert_eq!(out.lines().count(), 4);
    assert_eq!(stdout(&morse(&["reconstruct", &a, &b])), out);
}

#[test]
fn iso_verdicts() {
    let f = Files::new();
    let p = f.write("p.txt", "u v\nu w\n");
    let q = f.write("q.txt", "b a\nc a\n");
    let t = f.write("t.txt", "a b\nb c\na c\na d\n");
    let o = morse(&["iso", &p, &q]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "u -> a\nv -> b\nw -> c\n");
    let o = morse(&["iso", &p, &t]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn morse_complexes_of_the_counterexample_differ() {
    let f = Files::new();
    let p = f.write("p.txt", "u v\nu w\n");
    let t = f.write("t.txt", "a b\nb c\na c\na d\n");
    assert_eq!(morse(&["reconstruct", &p, &t]).status.code(), Some(1));
}

#[test]
fn multigraph_reconstruction() {
    let f = Files::new();
    let g = f.write("g.txt", "edge e1 u v\nedge e2 u v\nedge e3 v w\n");
    let h = f.write("h.txt", "edge a 1 2\nedge b 2 3\nedge c 2 3\n");
    let o = morse(&["reconstruct", &g, &h]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("u -> 3\nv -> 2\nw -> 1\n"), "{out}");
    assert!(out.contains("edge e3 -> a"), "{out}");
}

#[test]
fn kozlov_and_hypothesis_exit_code() {
    let f = Files::new();
    let star = f.write("star.txt", "c a\nc b\nc d\n");
    let o = morse(&["kozlov", &star]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "identity=holds facets=4\n");
    let tri = f.write("tri.txt", "a b c\n");
    let o = morse(&["kozlov", &tri]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hypothesis"));
}

#[test]
fn budget_exit_code() {
    let f = Files::new();
    let tri = f.write("tri.txt", "a b c\n");
    assert_eq!(morse(&["--budget-facets", "3", "build", &tri]).status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_line() {
    let f = Files::new();
    let bad = f.write("bad.txt", "a b\na a b\n");
    let o = morse(&["build", &bad]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let loop_edge = f.write("loop.txt", "edge e u u\n");
    assert_eq!(morse(&["build", &loop_edge]).status.code(), Some(4));
}

#[test]
fn sequential_output_matches() {
    let f = Files::new();
    let k = f.write("k.txt", "a b c\nc d\n");
    assert_eq!(stdout(&morse(&["build", &k])), stdout(&morse(&["--sequential", "build", &k])));
}
