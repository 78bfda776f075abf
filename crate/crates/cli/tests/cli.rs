use std::process::{Command, Output};

use cyforge_core::document::QpDocument;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str], input: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyforge"))
        .args(args)
        .arg("--input")
        .arg(fixture(input))
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn check_d2_on_the_three_loop_ginzburg_document() {
    let out = run(&["check-d2"], "three_loops_ginzburg.json");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "d^2 = 0 on 7 generators\n");
}

#[test]
fn ginzburg_fixture_is_current() {
    let out = run(&["ginzburg", "--n", "3"], "three_loops.json");
    let stored = std::fs::read_to_string(fixture("three_loops_ginzburg.json")).unwrap();
    assert_eq!(stdout(&out), stored);
}

#[test]
fn jacobian_table() {
    let out = run(&["jacobian", "--max-len", "4"], "three_loops.json");
    let text = stdout(&out);
    let dims: Vec<&str> = text
        .lines()
        .skip(1)
        .take(5)
        .map(|l| l.split('\t').nth(1).unwrap())
        .collect();
    assert_eq!(dims, ["1", "3", "6", "10", "15"]);
}

#[test]
fn unknown_vertex_exits_with_one() {
    let out = run(&["mutate", "--vertex", "9"], "three_cycle.json");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown vertex `9`"));
}

#[test]
fn failing_d2_exits_with_two() {
    let out = run(&["check-d2"], "bad_d2.json");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mutate_output_is_a_canonical_document() {
    let out = run(&["mutate", "--vertex", "2"], "a3.json");
    let doc = QpDocument::parse(&stdout(&out)).unwrap();
    assert_eq!(doc.canonical().unwrap(), doc);
    assert_eq!(doc.arrows.len(), 3);
}

#[test]
fn delete_vertex_of_the_three_cycle() {
    let out = run(&["delete-vertex", "--vertex", "3"], "three_cycle.json");
    let doc = QpDocument::parse(&stdout(&out)).unwrap();
    assert_eq!(doc.vertices, ["1", "2"]);
    assert!(doc.potential.is_empty());
}

#[test]
fn one_loop_homology_tables() {
    let hh = stdout(&run(&["hh", "--max-len", "3"], "one_loop.json"));
    assert_eq!(hh, "length\tHH0\tHH1\n0\t1\t0\n1\t1\t1\n2\t1\t1\n3\t1\t1\n");
    let hc = stdout(&run(&["hc", "--max-len", "3"], "one_loop.json"));
    assert_eq!(hc, "length\tHC0\tHC1\n0\t1\t0\n1\t1\t0\n2\t1\t0\n3\t1\t0\n");
}

#[test]
fn cy_check_reports_all_cases() {
    let out = run(&["cy-check"], "three_loops.json");
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for case in 1..=6 {
        assert!(text.contains(&format!("case {case}: pass")), "{text}");
    }
    assert!(text.contains("nondegenerate: pass"));
}

#[test]
fn ainfty_prints_the_quadratic_part() {
    let text = stdout(&run(&["ainfty"], "three_loops.json"));
    assert!(text.contains("b_2 -> x*: 1·(y ⊗ z) + -1·(z ⊗ y)"), "{text}");
}

#[test]
fn deformation_file_is_added() {
    let plain = stdout(&run(&["ginzburg", "--n", "3"], "three_loops.json"));
    let out = Command::new(env!("CARGO_BIN_EXE_cyforge"))
        .args(["ginzburg", "--n", "3", "--deform", &fixture("three_loops.json"), "--input", &fixture("one_loop.json")])
        .output()
        .unwrap();
    // The deformation lives over a different quiver.
    assert_eq!(out.status.code(), Some(1));
    let doubled = Command::new(env!("CARGO_BIN_EXE_cyforge"))
        .args(["ginzburg", "--n", "3", "--deform", &fixture("three_loops.json"), "--input", &fixture("three_loops.json")])
        .output()
        .unwrap();
    let doubled = QpDocument::parse(&String::from_utf8(doubled.stdout).unwrap()).unwrap();
    let plain = QpDocument::parse(&plain).unwrap();
    assert_eq!(doubled.potential.len(), plain.potential.len());
    assert!(doubled.potential.iter().all(|t| t.coef == "2" || t.coef == "-2"));
}
