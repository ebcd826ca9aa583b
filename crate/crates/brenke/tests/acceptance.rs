//! Acceptance suite: each headline identity of the library runs at its
//! full pinned grid and reports one PASS/FAIL line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use brenke::verify::{self, Caps, CheckResult};

fn report(check: CheckResult) {
    let status = if check.passed { "PASS" } else { "FAIL" };
    println!("acceptance {}: {status} - {}", check.name, check.detail);
    assert!(check.passed, "{}: {}", check.name, check.detail);
}

#[test]
fn connection_dual_path() {
    report(verify::criterion_connection_dual_path(Caps::default()));
}

#[test]
fn linearization_dual_path() {
    report(verify::criterion_linearization_dual_path(Caps::default()));
}

#[test]
fn feldheim_hermite_linearization() {
    report(verify::criterion_feldheim(Caps::default()));
}

#[test]
fn gghps_connection_closed_form() {
    report(verify::criterion_gghps_connection(Caps::default()));
}

#[test]
fn generalized_hermite_connection() {
    report(verify::criterion_genhermite_connection(Caps::default()));
}

#[test]
fn xd_reconstruction_and_phi_closed_form() {
    report(verify::criterion_xd_reconstruction(Caps::default()));
}

#[test]
fn lowering_operators() {
    report(verify::criterion_lowering(Caps::default()));
}

#[test]
fn addition_and_convolution() {
    report(verify::criterion_addition_convolution(Caps::default()));
}

#[test]
fn duplication_tables() {
    report(verify::criterion_duplication(Caps::default()));
}

#[test]
fn quadrature_representations() {
    report(verify::criterion_quadrature(Caps::default()));
}

#[test]
fn multi_product_linearization() {
    report(verify::criterion_multiproduct(Caps::default()));
}
