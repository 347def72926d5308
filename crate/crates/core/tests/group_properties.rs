use std::collections::HashSet;

use meandim::group::{growth_table, Element, GroupSpec};
use proptest::prelude::*;

fn catalog() -> Vec<GroupSpec> {
    vec![
        GroupSpec::lattice(1),
        GroupSpec::lattice(2),
        GroupSpec::lattice(3),
        GroupSpec::cyclic(5),
        GroupSpec::infinite_dihedral(),
        GroupSpec::heisenberg(),
        GroupSpec::integers_times_z2(),
        GroupSpec::product(GroupSpec::lattice(1), GroupSpec::infinite_dihedral()),
    ]
}

#[test]
fn balls_grow_by_generators() {
    for spec in catalog() {
        let n_max = if matches!(spec.name().as_str(), "Z^3") { 4 } else { 5 };
        for n in 0..n_max {
            let small: HashSet<Element> = spec.ball(n).unwrap().into_iter().collect();
            let big: HashSet<Element> = spec.ball(n + 1).unwrap().into_iter().collect();
            assert!(small.is_subset(&big), "{}", spec.name());
            let mut grown = small.clone();
            for g in &small {
                for s in spec.generators() {
                    grown.insert(spec.multiply(g, s).unwrap());
                }
            }
            assert_eq!(grown, big, "{} radius {n}", spec.name());
        }
    }
}

#[test]
fn example_growth_functions_hold_to_fifty() {
    let d = growth_table(&GroupSpec::infinite_dihedral(), 50).unwrap();
    for (n, &g) in d.ball_sizes.iter().enumerate() {
        assert_eq!(g, 2 * n as u64 + 1);
    }
    let z2 = growth_table(&GroupSpec::integers_times_z2(), 50).unwrap();
    for (n, &g) in z2.ball_sizes.iter().enumerate().skip(1) {
        assert_eq!(g, 4 * n as u64);
    }
}

#[test]
fn polynomial_sandwich_on_catalog() {
    for (spec, n_max) in [
        (GroupSpec::lattice(2), 20),
        (GroupSpec::lattice(3), 10),
        (GroupSpec::infinite_dihedral(), 30),
        (GroupSpec::heisenberg(), 10),
    ] {
        let t = growth_table(&spec, n_max).unwrap();
        let d = t.degree().unwrap().round();
        let (a, b) = t.sandwich_constants(d);
        assert!(a > 0.0 && b.is_finite(), "{}", spec.name());
        for (n, &g) in t.ball_sizes.iter().enumerate().skip(1) {
            let p = (n as f64).powf(d);
            assert!(a * p <= g as f64 * (1.0 + 1e-12) && g as f64 <= b * p * (1.0 + 1e-12));
        }
    }
}

fn element_in_ball(spec: GroupSpec, radius: u32) -> impl Strategy<Value = Element> {
    let ball = spec.ball(radius).unwrap();
    (0..ball.len()).prop_map(move |i| ball[i].clone())
}

fn group_strategy() -> impl Strategy<Value = GroupSpec> {
    prop::sample::select(catalog())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn word_length_is_subadditive(
        (spec, g, h) in group_strategy().prop_flat_map(|s| (Just(s.clone()), element_in_ball(s.clone(), 3), element_in_ball(s, 3)))
    ) {
        let gi = spec.inverse(&g).unwrap();
        let prod = spec.multiply(&gi, &h).unwrap();
        let l = spec.word_length(&prod, 16).unwrap();
        prop_assert!(l <= spec.word_length(&gi, 16).unwrap() + spec.word_length(&h, 16).unwrap());
        prop_assert_eq!(spec.word_length(&gi, 16).unwrap(), spec.word_length(&g, 16).unwrap());
    }

    #[test]
    fn distance_is_left_invariant(
        (spec, g, h, k) in group_strategy().prop_flat_map(|s| (
            Just(s.clone()),
            element_in_ball(s.clone(), 2),
            element_in_ball(s.clone(), 2),
            element_in_ball(s, 2),
        ))
    ) {
        let kg = spec.multiply(&k, &g).unwrap();
        let kh = spec.multiply(&k, &h).unwrap();
        prop_assert_eq!(spec.distance(&kg, &kh, 16).unwrap(), spec.distance(&g, &h, 16).unwrap());
        prop_assert_eq!(spec.distance(&g, &h, 16).unwrap() == 0, g == h);
    }

    #[test]
    fn multiplication_is_associative(
        (spec, a, b, c) in group_strategy().prop_flat_map(|s| (
            Just(s.clone()),
            element_in_ball(s.clone(), 3),
            element_in_ball(s.clone(), 3),
            element_in_ball(s, 3),
        ))
    ) {
        let ab_c = spec.multiply(&spec.multiply(&a, &b).unwrap(), &c).unwrap();
        let a_bc = spec.multiply(&a, &spec.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let id = spec.identity();
        prop_assert_eq!(spec.multiply(&a, &id).unwrap(), a.clone());
        prop_assert_eq!(spec.multiply(&spec.inverse(&a).unwrap(), &a).unwrap(), id);
    }
}
