//! Acceptance suite: one test per verification criterion, each printing a
//! pass/fail line (visible under `cargo test -- --nocapture`). The same
//! criteria back the `gitratio accept` subcommand.

use gitratio_core::acceptance::{run_criterion, CriterionOutcome, DEFAULT_SEED};

fn check(id: u32) -> CriterionOutcome {
    let outcome = run_criterion(id, DEFAULT_SEED);
    println!(
        "ACCEPTANCE {:2} {:32} {} ({} ms) - {}",
        outcome.id,
        outcome.name,
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.millis,
        outcome.detail
    );
    outcome
}

#[test]
fn criterion_01_ratio_pgl_equals_factorial() {
    let o = check(1);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn criterion_02_ctop_closed_form_in_quotient_ring() {
    let o = check(2);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn criterion_03_vandermonde_identity_untruncated() {
    let o = check(3);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn criterion_04_longest_element_pairing_rule() {
    let o = check(4);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn criterion_05_stability_census_of_matrix_model() {
    let o = check(5);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn criterion_06_product_group_multiplicativity() {
    let o = check(6);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn criterion_07_localization_identity_all_parabolics() {
    let o = check(7);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn criterion_08_strict_semistable_elimination_library() {
    let o = check(8);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn criterion_09_classifier_agrees_with_bruteforce_oracle() {
    let o = check(9);
    assert!(o.passed, "{}", o.detail);
}

#[test]
fn criterion_10_property_suites() {
    let o = check(10);
    assert!(o.passed, "{}", o.detail);
}
