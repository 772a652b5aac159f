#![allow(dead_code)]

use std::sync::Arc;

use tau2::algebra::Algebra;
use tau2::arknit::{knit_indecomposables, IndecIndex, KnitLimits};

pub fn fixture_text(name: &str) -> String {
    let path = format!("{}/fixtures/{name}.quiver", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn fixture(name: &str) -> Arc<Algebra> {
    Algebra::from_text(&fixture_text(name)).unwrap()
}

pub fn index(name: &str) -> IndecIndex {
    knit_indecomposables(&fixture(name), KnitLimits::default()).unwrap()
}

/// Representation-finite fixtures used for exhaustive property checks.
pub const REP_FINITE: &[&str] = &[
    "lambda3_p2",
    "lambda3_p101",
    "ss3",
    "a2",
    "a3",
    "dual_numbers",
    "comm_square",
    "nakayama4",
];
