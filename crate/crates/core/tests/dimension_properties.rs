use meandim::dimension::{
    covering_number, covering_number_ball, default_measure, hdim_scale_exhaustive, hdim_scale_lower_mass,
    hdim_scale_lower_mass_ball, hdim_scale_upper, hdim_scale_upper_ball, mdim_m_estimate, verify_theorem1,
    Theorem1Budget,
};
use meandim::group::{Element, GroupSpec};
use meandim::info::MeasureSpec;
use meandim::subshift::{Alphabet, Cell, Pattern, PatternCounter, ProductGroup, SubshiftSpec, Window};
use proptest::prelude::*;

fn cell(x: i64, y: i64) -> Cell {
    Cell::new(Element::integer(x), Element::integer(y))
}

fn hard_square() -> SubshiftSpec {
    let f = vec![
        Pattern::from_cells([(cell(0, 0), 1), (cell(1, 0), 1)]).unwrap(),
        Pattern::from_cells([(cell(0, 0), 1), (cell(0, 1), 1)]).unwrap(),
    ];
    SubshiftSpec::general_sft(Alphabet::numbered(2), f).unwrap()
}

fn golden() -> SubshiftSpec {
    SubshiftSpec::fiber_sft(Alphabet::numbered(2), vec![vec![1, 1]]).unwrap()
}

fn groups() -> Vec<ProductGroup> {
    vec![
        ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::lattice(1)),
        ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::infinite_dihedral()),
        ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::integers_times_z2()),
        ProductGroup::from_factors(GroupSpec::infinite_dihedral(), GroupSpec::lattice(1)),
    ]
}

/// Examples with their measures of maximal entropy.
fn examples() -> Vec<(ProductGroup, SubshiftSpec)> {
    let mut out: Vec<(ProductGroup, SubshiftSpec)> =
        groups().into_iter().map(|g| (g, SubshiftSpec::full(Alphabet::numbered(2)))).collect();
    out.push((ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::lattice(1)), golden()));
    out.push((ProductGroup::from_factors(GroupSpec::infinite_dihedral(), GroupSpec::lattice(1)), golden()));
    out
}

#[test]
fn theorem_tables_have_no_sandwich_violations() {
    let budget = Theorem1Budget { n_list: vec![0, 1, 3, 8, 32], m_list: vec![1, 2, 3, 5, 8], growth_radius: 60, r_max: None };
    for (g, s) in examples() {
        let c = PatternCounter::new(&g, &s).unwrap();
        let r = verify_theorem1(&c, None, &budget).unwrap();
        assert!(r.violations.is_empty(), "{}: {:?}", r.group, r.violations);
        let target = r.target.unwrap();
        for (up, lo) in r.mdim.extrapolated.iter().zip(&r.hdim_lower.extrapolated) {
            assert!(lo.value <= target + 1e-9 && target <= up.value + 1e-9, "{} M={}: {} {} {}", r.group, up.m, lo.value, target, up.value);
        }
    }
}

#[test]
fn exhaustive_covers_sit_between_the_bounds() {
    let small = [
        ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::cyclic(2)),
        ProductGroup::from_factors(GroupSpec::cyclic(3), GroupSpec::lattice(1)),
        ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::lattice(1)),
    ];
    for g in &small {
        for spec in [SubshiftSpec::full(Alphabet::numbered(2)), golden()] {
            if spec.check_compatible(g).is_err() {
                continue;
            }
            let c = PatternCounter::new(g, &spec).unwrap();
            let mu = default_measure(&c).unwrap();
            for m in 0..2 {
                let Ok(exhaustive) = hdim_scale_exhaustive(&c, &[], m, 12) else { continue };
                let lower = hdim_scale_lower_mass(&c, &mu, &[], m).unwrap();
                assert!(lower.value <= exhaustive + 1e-9, "{} M={m}: {} > {exhaustive}", g.spec().name(), lower.value);
                if m > 0 {
                    let upper = hdim_scale_upper(&c, &[], m).unwrap();
                    assert!(exhaustive <= upper + 1e-9);
                }
            }
        }
    }
}

#[test]
fn dihedral_closed_form_rows() {
    let g = ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::infinite_dihedral());
    let full = SubshiftSpec::full(Alphabet::numbered(2));
    let c = PatternCounter::new(&g, &full).unwrap();
    let t = mdim_m_estimate(&c, &[1, 8, 64], &[16, 2048], Some(2.0)).unwrap();
    for r in &t.rows {
        let (n, m) = (f64::from(r.n), f64::from(r.m));
        // (2(N+M)+1)(2M+1) cells over (2N+1)·M.
        let oracle = (2.0 * (n + m) + 1.0) * (2.0 * m + 1.0) / ((2.0 * n + 1.0) * m);
        assert!((r.value - oracle).abs() < 1e-9);
        assert!(r.exact);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn covering_numbers_grow_as_epsilon_shrinks(gi in 0usize..4, hard in any::<bool>(), n in 0u32..3, m in 0u32..3) {
        let g = &groups()[gi];
        let spec = if hard && gi == 0 { hard_square() } else { SubshiftSpec::full(Alphabet::numbered(2)) };
        let c = PatternCounter::new(g, &spec).unwrap();
        let a = covering_number_ball(&c, n, m).unwrap();
        let b = covering_number_ball(&c, n, m + 1).unwrap();
        prop_assert!(a.value() <= b.value());
        let wider = covering_number_ball(&c, n + 1, m).unwrap();
        prop_assert!(a.value() <= wider.value());
    }

    #[test]
    fn counts_are_submultiplicative(x0 in -3i64..3, y0 in -3i64..3, w in 1i64..4, h in 1i64..4, dx in -2i64..3, dy in -2i64..3) {
        let g = &groups()[0];
        let spec = hard_square();
        let c = PatternCounter::new(g, &spec).unwrap();
        let rect = |x: i64, y: i64| -> Vec<Cell> { (x..x + w).flat_map(|a| (y..y + h).map(move |b| cell(a, b))).collect() };
        let a = rect(x0, y0);
        let b = rect(x0 + dx, y0 + dy);
        let union: Vec<Cell> = a.iter().chain(&b).cloned().collect();
        let ca = c.count(&Window::new(a, "a")).unwrap().value();
        let cb = c.count(&Window::new(b, "b")).unwrap().value();
        let cu = c.count(&Window::new(union, "a+b")).unwrap().value();
        prop_assert!(cu <= ca * cb);
    }

    #[test]
    fn mass_lower_never_exceeds_covering_upper(
        gi in 0usize..4,
        n in 0u32..6,
        m in 1u32..6,
        w in prop::collection::vec(0.05f64..1.0, 2..4),
    ) {
        let g = &groups()[gi];
        let k = w.len();
        let spec = SubshiftSpec::full(Alphabet::numbered(k));
        let c = PatternCounter::new(g, &spec).unwrap();
        let total: f64 = w.iter().sum();
        let mu = MeasureSpec::bernoulli(w.iter().map(|x| x / total).collect()).unwrap();
        let lower = hdim_scale_lower_mass_ball(&c, &mu, n, m).unwrap().value;
        let upper = hdim_scale_upper_ball(&c, n, m).unwrap();
        prop_assert!(lower <= upper + 1e-9, "{lower} > {upper}");
    }

    #[test]
    fn explicit_f_bounds_are_ordered(fs in prop::collection::btree_set(-6i64..6, 1..4), m in 1u32..4) {
        let g = ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::lattice(1));
        let spec = golden();
        let c = PatternCounter::new(&g, &spec).unwrap();
        let f: Vec<Element> = fs.into_iter().map(Element::integer).collect();
        let mu = default_measure(&c).unwrap();
        let lower = hdim_scale_lower_mass(&c, &mu, &f, m).unwrap().value;
        let upper = hdim_scale_upper(&c, &f, m).unwrap();
        prop_assert!(lower <= upper + 1e-9);
        prop_assert!(covering_number(&c, &f, m).unwrap().is_exact());
    }
}
