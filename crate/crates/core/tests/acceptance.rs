//! One test per acceptance criterion; each prints its pass/fail line.

use kt_core::acceptance::run;

fn check(id: u32) {
    let outcome = run(id);
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn criterion_01_koszul_exactness() {
    check(1);
}

#[test]
fn criterion_02_differential_validator() {
    check(2);
}

#[test]
fn criterion_03_tate_of_x_xy() {
    check(3);
}

#[test]
fn criterion_04_tate_to_koszul_lift() {
    check(4);
}

#[test]
fn criterion_05_local_cohomology_agreement() {
    check(5);
}

#[test]
fn criterion_06_radical_invariance() {
    check(6);
}

#[test]
fn criterion_07_grade_and_perfection() {
    check(7);
}

#[test]
fn criterion_08_frobenius_pd_invariance() {
    check(8);
}

#[test]
fn criterion_09_strong_reducer_corpus() {
    check(9);
}

#[test]
fn criterion_10_resolution_of_complexes() {
    check(10);
}

#[test]
fn criterion_11_dimension_inequalities() {
    check(11);
}

#[test]
fn criterion_12_dense_oracle_equivalence() {
    check(12);
}
