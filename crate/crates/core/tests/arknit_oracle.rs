mod common;

use common::{fixture, REP_FINITE};
use tau2::arknit::{ar_quiver_dot, brute_force_indecomposables, knit_indecomposables, KnitLimits};
use tau2::error::Error;

#[test]
fn knitting_matches_brute_force_over_f2() {
    for name in REP_FINITE {
        let alg = fixture(name).with_field(2).unwrap();
        let idx = knit_indecomposables(&alg, KnitLimits::default()).unwrap();
        let bounds: Vec<usize> = (0..alg.num_vertices())
            .map(|v| idx.modules.iter().map(|m| m.dim_at(v)).max().unwrap_or(0))
            .collect();
        let bf = brute_force_indecomposables(&alg, &bounds, 1 << 22).unwrap();
        assert_eq!(bf.len(), idx.len(), "{name}");
        for m in &bf {
            assert!(idx.find(m).is_some(), "{name}: {:?} missing from knitting", m.dims());
        }
    }
}

#[test]
fn known_counts() {
    let counts = [
        ("lambda3_p101", 5),
        ("ss3", 3),
        ("a2", 3),
        ("a3", 6),
        ("dual_numbers", 2),
        ("comm_square", 11),
        ("nakayama4", 9),
    ];
    for (name, n) in counts {
        let idx = knit_indecomposables(&fixture(name), KnitLimits::default()).unwrap();
        assert_eq!(idx.len(), n, "{name}");
        assert!(idx.complete);
    }
}

#[test]
fn dot_and_json_outputs() {
    let idx = knit_indecomposables(&fixture("lambda3_p101"), KnitLimits::default()).unwrap();
    let dot = ar_quiver_dot(&idx);
    assert_eq!(dot.matches("[label=").count(), 5);
    assert_eq!(dot.matches("style=dashed").count(), 2);
    let json = idx.to_json();
    assert_eq!(json["modules"].as_array().unwrap().len(), 5);
    assert_eq!(json["tau"].as_array().unwrap().len(), 2);
    let zero = tau2::algebra::Algebra::from_text("field 2\nvertices 1\n")
        .unwrap()
        .quotient_by_idempotent(&[0])
        .unwrap()
        .algebra;
    let empty = knit_indecomposables(&zero, KnitLimits::default()).unwrap();
    assert!(empty.is_empty());
    assert_eq!(ar_quiver_dot(&empty), "digraph AR {\n  rankdir=LR;\n}\n");
}

#[test]
fn kronecker_hits_the_limit() {
    let alg = fixture("kronecker");
    match knit_indecomposables(&alg, KnitLimits::default()) {
        Err(Error::LimitExceeded { partial, .. }) => assert!(!partial.complete),
        other => panic!("{other:?}"),
    }
}
