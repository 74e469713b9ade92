//! One test per acceptance criterion. Each prints a single PASS/FAIL line.

use std::io::Write;

use morse_core::verify::{self, CorpusConfig, CriterionReport};

fn check(run: fn(&CorpusConfig) -> CriterionReport) {
    let report = run(&CorpusConfig::default());
    // Written past the test harness's capture so it shows in every run.
    let _ = writeln!(std::io::stdout(), "{report}");
    assert!(report.passed, "{report}");
}

#[test]
fn criterion_01_graph_lemma() {
    check(verify::graph_lemma);
}

#[test]
fn criterion_02_directed_forest_identity() {
    check(verify::forest_identity);
}

#[test]
fn criterion_03_leaf_characterization() {
    check(verify::leaf_characterization);
}

#[test]
fn criterion_04_wedge_of_circles() {
    check(verify::wedge_of_circles);
}

#[test]
fn criterion_05_counterexample() {
    check(verify::counterexample);
}

#[test]
fn criterion_06_complex_reconstruction() {
    check(verify::complex_reconstruction);
}

#[test]
fn criterion_07_multigraph_reconstruction() {
    check(verify::multigraph_reconstruction);
}

#[test]
fn criterion_08_functoriality() {
    check(verify::functoriality);
}

#[test]
fn criterion_09_oracle_equivalence() {
    check(verify::oracle_equivalence);
}

#[test]
fn criterion_10_minimal_f_cycle() {
    check(verify::minimal_f_cycle_law);
}
