//! Algebraic identities of the ideal operations.

use proptest::prelude::*;
use starcore::ideals::{IdealHandle, QuotientRing};
use starcore::selftest::identity_suite;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn seeded_identity_batches(seed in any::<u64>()) {
        let s = identity_suite(seed, 3).unwrap();
        prop_assert_eq!(s.identities_checked, 24);
        prop_assert!(s.failures.is_empty(), "{:?}", s.failures);
    }
}

#[test]
fn unit_and_zero_ideals() {
    let ring = QuotientRing::parse(5, &["x", "y"], &["x*y"]).unwrap();
    let a = IdealHandle::from_strs(&ring, &["x^2", "y"]).unwrap();
    let unit = IdealHandle::unit(&ring);
    let zero = IdealHandle::zero(&ring);
    assert!(a.colon(&unit).unwrap().equals(&a).unwrap());
    assert!(a.colon(&zero).unwrap().is_unit().unwrap());
    assert!(a.intersect(&unit).unwrap().equals(&a).unwrap());
    assert!(a.product(&unit).unwrap().equals(&a).unwrap());
    assert!(a.sum(&zero).unwrap().equals(&a).unwrap());
    assert!(a.colon(&a).unwrap().is_unit().unwrap());
}

#[test]
fn colon_and_intersection_in_a_quotient_ring() {
    let ring = QuotientRing::parse(7, &["x", "y", "z"], &["x*y*z"]).unwrap();
    let j = IdealHandle::from_strs(&ring, &["x + y*z"]).unwrap();
    let i = IdealHandle::from_strs(&ring, &["x", "y*z"]).unwrap();
    let c = j.colon(&i).unwrap();
    assert!(c.equals(&i).unwrap());
    assert!(j.contains_ideal(&i.product(&c).unwrap()).unwrap());
    let a = IdealHandle::from_strs(&ring, &["x"]).unwrap();
    let b = IdealHandle::from_strs(&ring, &["y"]).unwrap();
    let ab = a.intersect(&b).unwrap();
    assert!(ab
        .equals(&IdealHandle::from_strs(&ring, &["x*y"]).unwrap())
        .unwrap());
}

#[test]
fn frobenius_flatness_fixed_instance() {
    let ring = QuotientRing::parse(3, &["x", "y", "z"], &[]).unwrap();
    let a = IdealHandle::from_strs(&ring, &["x^2 + y*z", "y^2"]).unwrap();
    let b = IdealHandle::from_strs(&ring, &["x*y", "z^2"]).unwrap();
    let f = ring.parse_poly("x + z").unwrap();
    let lhs = a.intersect(&b).unwrap().bracket_power(3).unwrap();
    let rhs = a
        .bracket_power(3)
        .unwrap()
        .intersect(&b.bracket_power(3).unwrap())
        .unwrap();
    assert!(lhs.equals(&rhs).unwrap());
    let lhs = a.colon_poly(&f).unwrap().bracket_power(9).unwrap();
    let rhs = a.bracket_power(9).unwrap().colon_poly(&f.pow(9)).unwrap();
    assert!(lhs.equals(&rhs).unwrap());
}
