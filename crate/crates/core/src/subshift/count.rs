use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;

use super::backtrack::count_locally_admissible;
use super::{
    box_window, dynamical_ball_window, FiberCounter, ProductGroup, ShiftKind, SubshiftError, SubshiftSpec, Window,
};
use crate::group::Element;
use crate::numeric::log2_biguint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    UpperBound,
}

/// A pattern count kept as `∏ base^exponent`, so that counts with
/// astronomically many digits still have exact logarithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternCount {
    factors: Vec<(BigUint, u64)>,
    exactness: Exactness,
}

impl PatternCount {
    pub fn new(factors: Vec<(BigUint, u64)>, exactness: Exactness) -> PatternCount {
        let factors = factors.into_iter().filter(|(b, e)| *e > 0 && !b.is_one()).collect();
        PatternCount { factors, exactness }
    }

    pub fn one() -> PatternCount {
        PatternCount::new(Vec::new(), Exactness::Exact)
    }

    pub fn factors(&self) -> &[(BigUint, u64)] {
        &self.factors
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }

    pub fn is_zero(&self) -> bool {
        self.factors.iter().any(|(b, _)| b.bits() == 0)
    }

    /// `log₂` of the count; `-∞` when no pattern survives.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.factors.iter().map(|(b, e)| log2_biguint(b) * *e as f64).sum()
    }

    /// The count as an integer, or `None` when it would exceed `max_bits`.
    pub fn value_capped(&self, max_bits: f64) -> Option<BigUint> {
        if self.log2() > max_bits {
            return None;
        }
        Some(self.value())
    }

    pub fn value(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (b, e)| acc * Pow::pow(b, *e))
    }

    /// Product of two counts over disjoint, independent windows.
    pub fn times(self, other: PatternCount) -> PatternCount {
        let exactness = if self.is_exact() && other.is_exact() { Exactness::Exact } else { Exactness::UpperBound };
        let mut f = self.factors;
        f.extend(other.factors);
        PatternCount::new(f, exactness)
    }
}

/// Size limits for counting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountLimits {
    /// Largest window materialised cell by cell.
    pub max_window_cells: usize,
    /// Largest frontier map in the general SFT search.
    pub max_search_states: usize,
}

impl Default for CountLimits {
    fn default() -> Self {
        CountLimits { max_window_cells: 5_000_000, max_search_states: 1 << 22 }
    }
}

/// Counts `|π_W(X)|` for one subshift on one product group.
#[derive(Debug)]
pub struct PatternCounter<'a> {
    group: &'a ProductGroup,
    spec: &'a SubshiftSpec,
    fiber: Option<FiberCounter>,
    limits: CountLimits,
}

impl<'a> PatternCounter<'a> {
    pub fn new(group: &'a ProductGroup, spec: &'a SubshiftSpec) -> Result<PatternCounter<'a>, SubshiftError> {
        spec.check_compatible(group)?;
        let fiber = match spec.kind() {
            ShiftKind::FiberSft { forbidden } => Some(FiberCounter::new(spec.alphabet().len(), forbidden)?),
            _ => None,
        };
        Ok(PatternCounter { group, spec, fiber, limits: CountLimits::default() })
    }

    pub fn with_limits(mut self, limits: CountLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn group(&self) -> &ProductGroup {
        self.group
    }

    pub fn spec(&self) -> &SubshiftSpec {
        self.spec
    }

    pub fn fiber(&self) -> Option<&FiberCounter> {
        self.fiber.as_ref()
    }

    fn check_size(&self, what: &str, cells: u64) -> Result<(), SubshiftError> {
        let cap = self.limits.max_window_cells;
        if cells > cap as u64 {
            return Err(SubshiftError::ResourceCap { what: what.into(), needed: cells as usize, cap });
        }
        Ok(())
    }

    fn general_exactness(&self) -> Exactness {
        if self.spec.is_exactly_countable() {
            Exactness::Exact
        } else {
            Exactness::UpperBound
        }
    }

    /// `|π_W(X)|` for an explicit window.
    pub fn count(&self, window: &Window) -> Result<PatternCount, SubshiftError> {
        self.check_size(window.label(), window.len() as u64)?;
        for c in window.cells() {
            if !self.group.contains(c) {
                return Err(SubshiftError::Incompatible(format!("window cell {c:?} is not in the group")));
            }
        }
        let k = BigUint::from(self.spec.alphabet().len());
        match self.spec.kind() {
            ShiftKind::FullShift => Ok(PatternCount::new(vec![(k, window.len() as u64)], Exactness::Exact)),
            ShiftKind::FiberSft { .. } => self.count_fibers(window),
            ShiftKind::GeneralSft { forbidden } => {
                let (c, free) = count_locally_admissible(
                    self.group,
                    self.spec.alphabet().len(),
                    forbidden,
                    window,
                    self.limits.max_search_states,
                )?;
                Ok(PatternCount::new(vec![(c, 1), (k, free)], self.general_exactness()))
            }
        }
    }

    fn count_fibers(&self, window: &Window) -> Result<PatternCount, SubshiftError> {
        let fiber = self.fiber.as_ref().expect("built for fiber SFTs");
        let mut slices: BTreeMap<&Element, Vec<i64>> = BTreeMap::new();
        for c in window.cells() {
            let y = c.right.as_integer().expect("compatible fiber SFTs live over Z");
            slices.entry(&c.left).or_default().push(y);
        }
        // Fibers are independent, so the count is a product over G₁-slices.
        let mut lengths: BTreeMap<usize, u64> = BTreeMap::new();
        let mut exactness = Exactness::Exact;
        for ys in slices.values_mut() {
            ys.sort_unstable();
            let span = (ys[ys.len() - 1] - ys[0] + 1) as usize;
            if span != ys.len() {
                // A gapped slice is bounded by its interval hull.
                exactness = Exactness::UpperBound;
            }
            *lengths.entry(span).or_default() += 1;
        }
        let factors = lengths.into_iter().map(|(len, mult)| (fiber.count(len), mult)).collect();
        Ok(PatternCount::new(factors, exactness))
    }

    /// Count on the window `B₁(M)·F × B₂(M)`; an empty `F` is read as `{1}`.
    pub fn count_dynamical(&self, f: &[Element], depth: u32) -> Result<PatternCount, SubshiftError> {
        let ident = [self.group.left_spec().identity()];
        let f = if f.is_empty() { &ident[..] } else { f };
        let window = dynamical_ball_window(self.group, f, depth)?;
        self.count(&window)
    }

    /// Count on the window for `F = B₁(N)`, which is `B₁(M + N) × B₂(M)`.
    ///
    /// Full shifts and fiber SFTs never materialise the window.
    pub fn count_ball_window(&self, n: u32, depth: u32) -> Result<PatternCount, SubshiftError> {
        self.count_product_of_balls(n + depth, depth)
    }

    /// Count on the box `B₁(n) × B₂(n)`.
    pub fn count_box(&self, n: u32) -> Result<PatternCount, SubshiftError> {
        self.count_product_of_balls(n, n)
    }

    fn count_product_of_balls(&self, left: u32, right: u32) -> Result<PatternCount, SubshiftError> {
        let slices = self.group.left().ball_size(left)?;
        let k = BigUint::from(self.spec.alphabet().len());
        match self.spec.kind() {
            ShiftKind::FullShift => {
                let fiber = self.group.right().ball_size(right)?;
                Ok(PatternCount::new(vec![(k, slices * fiber)], Exactness::Exact))
            }
            ShiftKind::FiberSft { .. } => {
                let fiber = self.fiber.as_ref().expect("built for fiber SFTs");
                Ok(PatternCount::new(vec![(fiber.count(2 * right as usize + 1), slices)], Exactness::Exact))
            }
            ShiftKind::GeneralSft { .. } => {
                let fiber = self.group.right().ball_size(right)?;
                self.check_size("product window", slices * fiber)?;
                self.count(&box_window(self.group, left, right)?)
            }
        }
    }
}

/// One-shot `|π_W(X)|`.
pub fn count_patterns(group: &ProductGroup, spec: &SubshiftSpec, window: &Window) -> Result<PatternCount, SubshiftError> {
    PatternCounter::new(group, spec)?.count(window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::subshift::{Alphabet, Cell, Pattern};

    fn zz() -> ProductGroup {
        ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::lattice(1))
    }

    fn cell(x: i64, y: i64) -> Cell {
        Cell::new(Element::integer(x), Element::integer(y))
    }

    fn golden() -> SubshiftSpec {
        SubshiftSpec::fiber_sft(Alphabet::numbered(2), vec![vec![1, 1]]).unwrap()
    }

    #[test]
    fn full_shift_power() {
        let g = zz();
        let s = SubshiftSpec::full(Alphabet::numbered(2));
        let w = box_window(&g, 2, 1).unwrap();
        assert_eq!(w.len(), 15);
        assert_eq!(count_patterns(&g, &s, &w).unwrap().value(), BigUint::from(32768u32));
    }

    #[test]
    fn golden_mean_fibers() {
        let g = zz();
        let s = golden();
        let col = Window::new((0..5).map(|y| cell(0, y)), "column");
        assert_eq!(count_patterns(&g, &s, &col).unwrap().value(), BigUint::from(13u32));
        let two = Window::new((0..2).flat_map(|x| (0..5).map(move |y| cell(x, y))), "two columns");
        assert_eq!(count_patterns(&g, &s, &two).unwrap().value(), BigUint::from(169u32));
    }

    #[test]
    fn gapped_fiber_is_flagged() {
        let g = zz();
        let w = Window::new([cell(0, 0), cell(0, 2)], "gap");
        let c = count_patterns(&g, &golden(), &w).unwrap();
        assert_eq!(c.exactness(), Exactness::UpperBound);
    }

    #[test]
    fn ball_window_fast_path_matches_materialised_window() {
        let dihedral = ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::infinite_dihedral());
        let s = SubshiftSpec::full(Alphabet::numbered(3));
        let counter = PatternCounter::new(&dihedral, &s).unwrap();
        let f = dihedral.left().ball(1).unwrap();
        for m in 0..4 {
            let fast = counter.count_ball_window(1, m).unwrap();
            let slow = counter.count_dynamical(&f, m).unwrap();
            assert_eq!(fast.value(), slow.value());
        }
        let g = zz();
        let s = golden();
        let counter = PatternCounter::new(&g, &s).unwrap();
        let f = g.left().ball(2).unwrap();
        for m in 0..4 {
            assert_eq!(
                counter.count_ball_window(2, m).unwrap().value(),
                counter.count_dynamical(&f, m).unwrap().value()
            );
        }
    }

    #[test]
    fn general_sft_without_safe_symbol_is_an_upper_bound() {
        let g = zz();
        let forbid = vec![
            Pattern::from_cells([(cell(0, 0), 0), (cell(1, 0), 0)]).unwrap(),
            Pattern::from_cells([(cell(0, 0), 1), (cell(1, 0), 1)]).unwrap(),
        ];
        let s = SubshiftSpec::general_sft(Alphabet::numbered(2), forbid).unwrap();
        let c = PatternCounter::new(&g, &s).unwrap().count_box(1).unwrap();
        assert_eq!(c.exactness(), Exactness::UpperBound);
        // Rows alternate independently: 2 choices per row.
        assert_eq!(c.value(), BigUint::from(8u32));
    }

    #[test]
    fn window_cap() {
        let g = zz();
        let s = SubshiftSpec::full(Alphabet::numbered(2));
        let c = PatternCounter::new(&g, &s)
            .unwrap()
            .with_limits(CountLimits { max_window_cells: 4, max_search_states: 10 });
        assert!(matches!(c.count(&box_window(&g, 1, 1).unwrap()), Err(SubshiftError::ResourceCap { .. })));
    }

    #[test]
    fn log2_of_factored_count() {
        let c = PatternCount::new(vec![(BigUint::from(3u32), 1000), (BigUint::from(2u32), 5)], Exactness::Exact);
        assert!((c.log2() - (1000.0 * 3f64.log2() + 5.0)).abs() < 1e-9);
        assert!(c.value_capped(100.0).is_none());
    }
}
