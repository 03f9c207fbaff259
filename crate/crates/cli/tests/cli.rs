use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const K4: &str = "0: 1 2 3\n1: 3 2 0\n2: 0 1 3\n3: 0 2 1\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acyclic")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn color_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.rot", K4);
    let out = run(&["color", "--graph", s(&g), "--k", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let c = write(dir.path(), "k4.col", &stdout(&out));
    let v = run(&["verify", "--graph", s(&g), "--coloring", s(&c)]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("acyclic: yes"));
}

#[test]
fn verify_rejects_bicolored_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.rot", K4);
    // Colors 1 and 2 alternate around 0-1-2-3.
    let c = write(dir.path(), "bad.col", "0 1 1\n1 2 2\n2 3 1\n0 3 2\n0 2 3\n1 3 3\n");
    let v = run(&["verify", "--graph", s(&g), "--coloring", s(&c), "--json"]);
    assert_eq!(v.status.code(), Some(1));
    let body: serde_json::Value = serde_json::from_str(&stdout(&v)).unwrap();
    assert_eq!(body["schema_version"], 1);
    assert_eq!(body["acyclic"], false);
}

#[test]
fn malformed_inputs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.rot", K4);
    let bad_graph = write(dir.path(), "bad.rot", "0: 1\n1 0\n");
    let non_edge = write(dir.path(), "ne.col", "0 9 1\n");
    assert_eq!(run(&["scan", "--graph", s(&bad_graph)]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--graph", s(&g), "--coloring", s(&non_edge)]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--graph", "/nonexistent.rot"]).status.code(), Some(2));
    assert_eq!(run(&["color", "--graph", s(&g), "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["generate", "--kind", "random", "--n", "9"]).status.code(), Some(2));
}

#[test]
fn scan_reports_rc1_on_k4() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.rot", K4);
    let out = run(&["scan", "--graph", s(&g)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("RC1 at vertex 0"));
}

#[test]
fn oracle_on_k4_is_five() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.rot", K4);
    let out = run(&["oracle", "--graph", s(&g), "--json"]);
    let body: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(body["index"], 5);
}

#[test]
fn color_failure_is_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.rot", K4);
    let out = run(&["color", "--graph", s(&g), "--k", "4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn discharge_reports_unhappy_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.rot", K4);
    let out = run(&["discharge", "--graph", s(&g), "--big", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("initial total: -24"));
}

#[test]
fn constants_lines() {
    let out = stdout(&run(&["constants"]));
    assert!(out.contains("big threshold: 8680"));
    assert!(out.contains("(4.190e14)"));
    let json: serde_json::Value = serde_json::from_str(&stdout(&run(&["constants", "--json"]))).unwrap();
    assert_eq!(json["report"]["rc4"]["exact"]["ns"], 47134);
}

#[test]
fn generate_and_rethread_are_deterministic() {
    for args in [
        &["generate", "--kind", "random", "--n", "30", "--seed", "5"][..],
        &["generate", "--kind", "bunch", "--t", "12", "--seed", "3"],
        &["generate", "--kind", "borodin", "--t", "1"],
        &["rethread-demo", "--json"],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let dodec = stdout(&run(&["generate", "--kind", "trunc-dodec"]));
    assert_eq!(dodec.lines().count(), 60);
}

#[test]
fn rethread_demo_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let ex = acyclic_core::generators::twelve_thread_example().unwrap();
    let g = write(dir.path(), "g.rot", &ex.graph.to_text());
    let c = write(dir.path(), "g.col", &ex.coloring.to_text());
    let (v, w) = ex.bunch.parents;
    let parents = format!("{v},{w}");
    let out = run(&[
        "rethread-demo", "--graph", s(&g), "--coloring", s(&c), "--parents", &parents, "--k", "15", "--big", "14",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("odd set: 1 7 8 9 10 11 12"));
    let colored = write(dir.path(), "out.col", text.split("coloring:\n").nth(1).unwrap());
    let v = run(&["verify", "--graph", s(&g), "--coloring", s(&colored), "--k", "15"]);
    assert_eq!(v.status.code(), Some(0));
}
