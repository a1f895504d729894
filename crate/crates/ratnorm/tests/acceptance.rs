//! One test per acceptance criterion; each prints a single PASS/FAIL line
//! followed by its measured values.

use ratnorm::checks::{self, Profile};
use ratnorm::report::CheckRecord;

fn report(record: CheckRecord) {
    println!(
        "criterion {:>2}: {} ({:.2} s) {}",
        record.id,
        if record.passed { "PASS" } else { "FAIL" },
        record.wall_time_seconds,
        record.name
    );
    println!("    {}", record.detail);
    assert!(record.passed, "criterion {} failed: {}", record.id, record.detail);
}

#[test]
fn criterion_01_kernel_identity() {
    report(checks::lemma1_identity(&Profile::default()));
}

#[test]
fn criterion_02_psi_vanishes() {
    report(checks::psi_vanishes(&Profile::default()));
}

#[test]
fn criterion_03_monotonicity() {
    report(checks::monotonicity(&Profile::default()));
}

#[test]
fn criterion_04_closed_forms() {
    report(checks::closed_forms(&Profile::default()));
}

#[test]
fn criterion_05_parseval() {
    report(checks::parseval(&Profile::default()));
}

#[test]
fn criterion_06_extremal_lower_bound() {
    report(checks::extremal_lower(&Profile::default()));
}

#[test]
fn criterion_07_sampled_upper_scaling() {
    report(checks::sampled_upper_scaling(&Profile::default()));
}

#[test]
fn criterion_08_limit() {
    report(checks::limit(&Profile::default()));
}

#[test]
fn criterion_09_tail_comparability() {
    report(checks::lemma2(&Profile::default()));
}

#[test]
fn criterion_10_eigen_oracle() {
    report(checks::eigen_oracle(&Profile::default()));
}
