use std::time::Instant;

use meandim::covering::{
    check_hypotheses, epsilon_disjoint_check, exhaustive_best_coverage, generate_instance, sample_params,
    select_subfamily, select_subfamily_with, verify_selection, InstanceParams, SelectionOptions, SetDescriptor,
    TranslateArray,
};
use meandim::group::{Element, GroupSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn interval(lo: i64, hi: i64) -> Vec<Element> {
    SetDescriptor::Interval { lo, hi }.resolve(&GroupSpec::lattice(1)).unwrap()
}

/// Exact union size by a plain set, independent of the library's bitmaps.
fn union_size(t: &TranslateArray, chosen: &[(usize, usize, i64)]) -> usize {
    let mut all = std::collections::BTreeSet::new();
    for &(i, j, a) in chosen {
        for f in &t.shapes()[i - 1][j - 1] {
            all.insert(f.as_integer().unwrap() + a);
        }
    }
    all.len()
}

#[test]
fn interval_instance_on_ten_thousand_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 10_000i64;
    let lengths = [10i64, 100, 1000];
    let shapes: Vec<Vec<Element>> = lengths.iter().map(|&l| interval(0, l - 1)).collect();
    let bases: Vec<Vec<Element>> = lengths
        .iter()
        .map(|&l| (0..=n - l).filter(|_| rng.random_bool(0.2)).map(Element::integer).collect())
        .collect();
    let t = TranslateArray::new(GroupSpec::lattice(1), vec![shapes], vec![bases], interval(0, n - 1), 0.005, 2.0, vec![])
        .unwrap();
    let r = select_subfamily(&t).unwrap();
    assert!(r.meets_target, "{} < {}", r.covered, r.target);
    let chosen: Vec<(usize, usize, i64)> = r.chosen.iter().map(|c| (c.level, c.shape, c.base.as_integer().unwrap())).collect();
    assert_eq!(union_size(&t, &chosen), r.covered);
    assert!(verify_selection(&t, &r).unwrap().passed);
}

#[test]
fn tight_interval_instance_keeps_epsilon_disjointness() {
    // δ = 10⁻⁸ gives ε = 0.1, so overlapping translates compete for cells.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 5000i64;
    let lengths = [10i64, 40, 100];
    let shapes: Vec<Vec<Element>> = lengths.iter().map(|&l| interval(0, l - 1)).collect();
    let bases: Vec<Vec<Element>> = lengths
        .iter()
        .map(|&l| (0..=n - l).filter(|_| rng.random_bool(0.1)).map(Element::integer).collect())
        .collect();
    let t = TranslateArray::new(GroupSpec::lattice(1), vec![shapes], vec![bases], interval(0, n - 1), 1e-8, 2.0, vec![])
        .unwrap();
    let r = select_subfamily(&t).unwrap();
    assert!(!r.vacuous);
    assert!(r.meets_target);
    let audit = verify_selection(&t, &r).unwrap();
    assert!(audit.passed && audit.size_bound_holds == Some(true));
    // The public checker agrees on the chosen family.
    let family: Vec<Vec<Element>> = r
        .chosen
        .iter()
        .map(|c| t.shapes()[c.level - 1][c.shape - 1].iter().map(|f| Element::integer(f.as_integer().unwrap() + c.base.as_integer().unwrap())).collect())
        .collect();
    assert!(epsilon_disjoint_check(&family, r.epsilon).unwrap().disjoint);
}

/// Heavy-overlap instances on at most 30 points with `ε ≈ 0.32`.
fn adversarial(rng: &mut ChaCha8Rng) -> TranslateArray {
    let n = rng.random_range(12..=30i64);
    let shapes: Vec<Vec<Element>> = {
        let mut ls: Vec<i64> = (0..rng.random_range(1..=3)).map(|_| rng.random_range(3..=8)).collect();
        ls.sort_unstable();
        ls.iter().map(|&l| interval(0, l - 1)).collect()
    };
    let mut bases = vec![Vec::new(); shapes.len()];
    for _ in 0..rng.random_range(4..=14) {
        let j = rng.random_range(0..shapes.len());
        let l = shapes[j].len() as i64;
        bases[j].push(Element::integer(rng.random_range(0..=n - l)));
    }
    TranslateArray::new(GroupSpec::lattice(1), vec![shapes], vec![bases], interval(0, n - 1), 1e-6, 2.0, vec![]).unwrap()
}

#[test]
fn adversarial_tiny_instances_against_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut feasible = 0;
    for _ in 0..200 {
        let t = adversarial(&mut rng);
        let target = check_hypotheses(&t).unwrap().coverage_target;
        let best = exhaustive_best_coverage(&t, 20).unwrap();
        let r = select_subfamily_with(&t, &SelectionOptions { restarts: 64, ..SelectionOptions::default() }).unwrap();
        assert!(r.covered <= best);
        assert!(verify_selection(&t, &r).unwrap().certificate_holds);
        if best as f64 >= target {
            feasible += 1;
            assert!(r.meets_target, "optimum {best}, target {target}, greedy {}", r.covered);
        }
    }
    assert!(feasible > 150);
}

#[test]
fn a_thousand_seeded_instances() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut tight = 0;
    for k in 0..1000 {
        let p = sample_params(&mut rng);
        let t = generate_instance(&p, &mut rng).unwrap();
        let r = select_subfamily(&t).unwrap_or_else(|e| panic!("instance {k} {p:?}: {e}"));
        let audit = verify_selection(&t, &r).unwrap();
        assert!(audit.passed, "instance {k} {p:?}: {audit:?} target {}", r.target);
        tight += usize::from(!r.vacuous);
    }
    assert!(tight > 200);
    eprintln!("1000 instances in {:?}", start.elapsed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn selections_verify(seed in any::<u64>(), delta in prop::sample::select(vec![0.009, 1e-5, 1e-7]), levels in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = InstanceParams { ambient_size: 600, delta, levels, max_cells: 40_000, ..InstanceParams::default() };
        let t = generate_instance(&p, &mut rng).unwrap();
        prop_assert!(check_hypotheses(&t).unwrap().all_hold);
        let r = select_subfamily(&t).unwrap();
        let audit = verify_selection(&t, &r).unwrap();
        prop_assert!(audit.certificate_holds && audit.coverage_matches);
        prop_assert!(audit.size_bound_holds != Some(false));
    }

    #[test]
    fn same_seed_same_selection(seed in any::<u64>()) {
        let p = InstanceParams { ambient_size: 400, delta: 1e-6, max_cells: 20_000, ..InstanceParams::default() };
        let t = generate_instance(&p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let opts = SelectionOptions { seed, ..SelectionOptions::default() };
        prop_assert_eq!(select_subfamily_with(&t, &opts).unwrap(), select_subfamily_with(&t, &opts).unwrap());
    }
}
