//! Convention-independence checks: the structural results do not depend on
//! the symplectic form being in standard shape.

use sympcoh::filtered::filtered_cohomology;
use sympcoh::model::Model;
use sympcoh::resolution::{dimension_formula_check, verify_filtered_triangle, verify_les};
use sympcoh::suites;

fn kt_scaled() -> Model {
    // The same structure constants with omega halved.
    Model::parse(
        r#"{
        "name": "kt-scaled",
        "dimension": 4,
        "generators": ["e1", "e2", "e3", "e4"],
        "d": {"e4": [[1, ["e2", "e3"]]]},
        "omega": [["1/2", ["e1", "e2"]], ["1/2", ["e3", "e4"]]]
    }"#,
    )
    .unwrap()
}

fn t4_skew() -> Model {
    // A nondegenerate closed form away from the standard shape.
    Model::parse(
        r#"{
        "name": "t4-skew",
        "dimension": 4,
        "generators": ["e1", "e2", "e3", "e4"],
        "d": {},
        "omega": [[1, ["e1", "e2"]], [1, ["e3", "e4"]], [1, ["e1", "e3"]], ["2/3", ["e2", "e4"]]]
    }"#,
    )
    .unwrap()
}

#[test]
fn scaling_omega_preserves_all_dimensions() {
    let kt = Model::parse(
        r#"{
        "name": "kt",
        "dimension": 4,
        "generators": ["e1", "e2", "e3", "e4"],
        "d": {"e4": [[1, ["e2", "e3"]]]},
        "omega": [[1, ["e1", "e2"]], [1, ["e3", "e4"]]]
    }"#,
    )
    .unwrap();
    let scaled = kt_scaled();
    for p in 0..=2usize {
        let a = filtered_cohomology(&kt, p).unwrap();
        let b = filtered_cohomology(&scaled, p).unwrap();
        assert_eq!(a.plus_dims, b.plus_dims, "p={p}");
        assert_eq!(a.minus_dims, b.minus_dims, "p={p}");
    }
}

#[test]
fn rational_structure_constants_load_and_resolve() {
    // Rescaling a generator puts a fraction into the structure constants;
    // the cohomology is unchanged.
    let m = Model::parse(
        r#"{
        "name": "kt-rescaled",
        "dimension": 4,
        "generators": ["e1", "e2", "e3", "e4"],
        "d": {"e4": [["1/2", ["e2", "e3"]]]},
        "omega": [[1, ["e1", "e2"]], [1, ["e3", "e4"]]]
    }"#,
    )
    .unwrap();
    assert_eq!(m.betti_numbers(), vec![1, 3, 4, 3, 1]);
    let f = filtered_cohomology(&m, 0).unwrap();
    assert_eq!(f.plus_dims, vec![1, 3, 4]);
    let rep = verify_les(&m, 1).unwrap();
    assert!(rep.passed());
}

#[test]
fn skewed_omega_satisfies_all_structure_theorems() {
    let m = t4_skew();
    assert!(m.omega().pow(2).unwrap() != sympcoh::exterior::Form::zero(4));
    for r in 1..=2usize {
        let rep = verify_les(&m, r).unwrap();
        assert!(rep.passed(), "les r={r}: {:?}", rep.failing_nodes());
    }
    for (l, r) in [(0usize, 1usize), (0, 2), (1, 1)] {
        let rep = verify_filtered_triangle(&m, l, r).unwrap();
        assert!(rep.passed(), "triangle ({l},{r}): {:?}", rep.failing_nodes());
    }
    let dims = dimension_formula_check(&m).unwrap();
    assert!(dims.passed(), "{:?}", dims.failing());
    for rep in [
        suites::suite_sl2(&m, 3, 30).unwrap(),
        suites::suite_leibniz(&m, 3, 30).unwrap(),
        suites::suite_ainfty(&m, 3, 30).unwrap(),
        suites::suite_compat(&m, 3, 30).unwrap(),
    ] {
        assert!(rep.passed(), "suite {}: {:?}", rep.name, rep.failures);
    }
}
