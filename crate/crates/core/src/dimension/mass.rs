use std::collections::HashSet;

use serde::Serialize;

use super::DimensionError;
use crate::group::Element;
use crate::info::MeasureSpec;
use crate::subshift::PatternCounter;

/// A mass-distribution certificate `dim_H(X, d_F, 2^{-M}) ≥ value`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassBound {
    pub value: f64,
    /// Depth whose cylinders attain the minimum, `None` when the tail bound binds.
    pub binding_depth: Option<u32>,
    /// Lower bound on the per-depth exponent for every depth above `r_max`.
    pub tail_bound: f64,
    pub r_max: u32,
}

/// Depths `M..=4M+64` are checked one by one; deeper cylinders use the tail bound.
pub fn default_r_max(depth: u32) -> u32 {
    4 * depth + 64
}

/// Largest `s` with `μ(C) ≤ diam(C)^s` for every cylinder `C` of diameter below `2^{-M}`.
///
/// A set of diameter `2^{-(r+1)}` pins the letters on `W(r) = B₁(r)F × B₂(r)`, so the
/// exponent at depth `r ≥ M` is `−log₂ max μ(π_{W(r)}^{-1}(p)) / (r+1)`.
pub fn hdim_scale_lower_mass(
    counter: &PatternCounter,
    measure: &MeasureSpec,
    f: &[Element],
    depth: u32,
) -> Result<MassBound, DimensionError> {
    hdim_scale_lower_mass_with(counter, measure, f, depth, default_r_max(depth))
}

pub fn hdim_scale_lower_mass_with(
    counter: &PatternCounter,
    measure: &MeasureSpec,
    f: &[Element],
    depth: u32,
    r_max: u32,
) -> Result<MassBound, DimensionError> {
    let group = counter.group();
    let left = group.left_spec();
    let ident = [left.identity()];
    let f = if f.is_empty() { &ident[..] } else { f };
    for g in f {
        if !left.contains(g) {
            return Err(DimensionError::Precondition(format!("{g} is not in {}", left.name())));
        }
    }
    let slices = |r: u32| -> Result<u64, DimensionError> {
        let ball = group.left().ball(r)?;
        let set: HashSet<Element> = ball.iter().flat_map(|h| f.iter().map(move |g| left.multiply_unchecked(h, g))).collect();
        Ok(set.len() as u64)
    };
    let r_max = r_max.max(depth);
    // B₁(r)F grows by at least one point per radius and contains the ball B₁(r)·g.
    let tails = if left.is_finite() {
        vec![(slices(r_max)? as f64, 0.0)]
    } else {
        vec![(slices(r_max)? as f64, 1.0), (group.left().ball_size(r_max)? as f64, 2.0)]
    };
    certify(counter, measure, depth, r_max, &slices, &tails)
}

/// [`hdim_scale_lower_mass`] for `F = B₁(N)`, where `B₁(r)F = B₁(N + r)`.
pub fn hdim_scale_lower_mass_ball(
    counter: &PatternCounter,
    measure: &MeasureSpec,
    n: u32,
    depth: u32,
) -> Result<MassBound, DimensionError> {
    hdim_scale_lower_mass_ball_with(counter, measure, n, depth, default_r_max(depth))
}

/// [`hdim_scale_lower_mass_ball`] checking depths only up to `r_max`, for groups whose balls grow fast.
pub fn hdim_scale_lower_mass_ball_with(
    counter: &PatternCounter,
    measure: &MeasureSpec,
    n: u32,
    depth: u32,
    r_max: u32,
) -> Result<MassBound, DimensionError> {
    let left = counter.group().left();
    let slices = |r: u32| -> Result<u64, DimensionError> { Ok(left.ball_size(n + r)?) };
    let r_max = r_max.max(depth);
    let slope = if counter.group().left_spec().is_finite() { 0.0 } else { 2.0 };
    certify(counter, measure, depth, r_max, &slices, &[(slices(r_max)? as f64, slope)])
}

/// The `N → ∞` limit of `hdim_scale_lower_mass_ball(N, M) / |B₁(N)|` is at least this value,
/// since `|B₁(N + r)| / |B₁(N)| ≥ 1`.
pub fn hdim_scale_lower_mass_limit(
    counter: &PatternCounter,
    measure: &MeasureSpec,
    depth: u32,
) -> Result<MassBound, DimensionError> {
    certify(counter, measure, depth, default_r_max(depth), &|_| Ok(1), &[(1.0, 0.0)])
}

fn certify(
    counter: &PatternCounter,
    measure: &MeasureSpec,
    depth: u32,
    r_max: u32,
    slices: &dyn Fn(u32) -> Result<u64, DimensionError>,
    slice_tails: &[(f64, f64)],
) -> Result<MassBound, DimensionError> {
    let group = counter.group();
    measure.check_supported(counter.spec(), group)?;
    let right = group.right();
    let mut best = f64::INFINITY;
    let mut binding = None;
    for r in depth..=r_max {
        let cells = right.ball_size(r)?;
        let exponent = slices(r)? as f64 * measure.slice_neg_log2_max_cylinder(cells) / f64::from(r + 1);
        if exponent < best {
            best = exponent;
            binding = Some(r);
        }
    }
    let c = f64::from(r_max) + 1.0;
    let floor = measure.per_cell_surprise_floor();
    // Beyond r_max, with t = r − r_max ≥ 1 and slices(r) ≥ a + αt for each
    // (a, α) in slice_tails, the exponent is at least floor · (a + αt)(β₀ + βt) / (c + t).
    let (beta0, beta) = match measure {
        MeasureSpec::Bernoulli { .. } => {
            let grows = !group.right_spec().is_finite();
            // An infinite Cayley graph has a bi-infinite geodesic through 1, so spheres
            // have at least two points.
            (right.ball_size(r_max)? as f64, if grows { 2.0 } else { 0.0 })
        }
        // A slice interval of 2r + 1 cells carries at least 2r transitions.
        MeasureSpec::FiberMarkov { .. } => (2.0 * f64::from(r_max), 2.0),
    };
    let tail = slice_tails
        .iter()
        .map(|&(a, alpha)| floor * rational_infimum(a, alpha, beta0, beta, c))
        .fold(0.0, f64::max);
    if tail < best {
        best = tail;
        binding = None;
    }
    Ok(MassBound { value: best.max(0.0), binding_depth: binding, tail_bound: tail, r_max })
}

/// `inf_{t ≥ 1} (a + αt)(β₀ + βt) / (c + t)` for nonnegative coefficients and `c > 0`.
fn rational_infimum(a: f64, alpha: f64, beta0: f64, beta: f64, c: f64) -> f64 {
    let g = |t: f64| (a + alpha * t) * (beta0 + beta * t) / (c + t);
    let mut candidates = vec![g(1.0)];
    let ab = alpha * beta;
    if ab > 0.0 {
        // Stationary points solve αβ t² + 2αβ c t + (αβ₀c + aβc − aβ₀) = 0.
        let k = alpha * beta0 * c + a * beta * c - a * beta0;
        let disc = c * c - k / ab;
        if disc >= 0.0 {
            let t = -c + disc.sqrt();
            if t > 1.0 {
                candidates.push(g(t));
            }
        }
    } else {
        // The limit as t → ∞.
        candidates.push(alpha * beta0 + a * beta);
    }
    candidates.into_iter().fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::subshift::{Alphabet, ProductGroup, SubshiftSpec};

    #[test]
    fn rational_infimum_matches_a_scan() {
        for &(a, alpha, b0, b, c) in &[
            (5.0, 1.0, 9.0, 2.0, 20.0),
            (30.0, 1.0, 3.0, 2.0, 20.0),
            (1.0, 0.0, 9.0, 2.0, 5.0),
            (4.0, 1.0, 6.0, 0.0, 3.0),
            (4.0, 0.0, 6.0, 0.0, 3.0),
        ] {
            let got = rational_infimum(a, alpha, b0, b, c);
            let scan = (0..200_000)
                .map(|i| 1.0 + f64::from(i) * 0.01)
                .map(|t| (a + alpha * t) * (b0 + b * t) / (c + t))
                .fold(f64::INFINITY, f64::min);
            assert!(got <= scan + 1e-9, "{got} > {scan}");
            assert!(scan - got < 1e-3 || alpha * b == 0.0, "{got} vs {scan}");
        }
    }

    #[test]
    fn uniform_full_shift_over_dihedral() {
        let g = ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::infinite_dihedral());
        let full = SubshiftSpec::full(Alphabet::numbered(2));
        let c = PatternCounter::new(&g, &full).unwrap();
        let mu = MeasureSpec::uniform(2);
        for m in [1, 4, 16] {
            let lim = hdim_scale_lower_mass_limit(&c, &mu, m).unwrap();
            let mf = f64::from(m);
            assert!((lim.value - (2.0 * mf + 1.0) / (mf + 1.0)).abs() < 1e-12);
            assert_eq!(lim.binding_depth, Some(m));
            let b = hdim_scale_lower_mass_ball(&c, &mu, 3, m).unwrap();
            assert!(b.value / 7.0 >= lim.value - 1e-12);
        }
    }

    #[test]
    fn explicit_window_matches_ball_path() {
        let g = ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::lattice(1));
        let golden = SubshiftSpec::fiber_sft(Alphabet::numbered(2), vec![vec![1, 1]]).unwrap();
        let c = PatternCounter::new(&g, &golden).unwrap();
        let mu = MeasureSpec::parry(c.fiber().unwrap(), 2).unwrap();
        let f = g.left().ball(2).unwrap();
        let a = hdim_scale_lower_mass(&c, &mu, &f, 3).unwrap();
        let b = hdim_scale_lower_mass_ball(&c, &mu, 2, 3).unwrap();
        assert!((a.value - b.value).abs() < 1e-9);
    }

    #[test]
    fn point_mass_certifies_nothing() {
        let g = ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::lattice(1));
        let full = SubshiftSpec::full(Alphabet::numbered(2));
        let c = PatternCounter::new(&g, &full).unwrap();
        let mu = MeasureSpec::bernoulli(vec![1.0, 0.0]).unwrap();
        assert_eq!(hdim_scale_lower_mass(&c, &mu, &[], 2).unwrap().value, 0.0);
    }

    #[test]
    fn finite_groups_have_zero_tail() {
        let g = ProductGroup::from_factors(GroupSpec::cyclic(3), GroupSpec::cyclic(2));
        let full = SubshiftSpec::full(Alphabet::numbered(2));
        let c = PatternCounter::new(&g, &full).unwrap();
        let b = hdim_scale_lower_mass(&c, &MeasureSpec::uniform(2), &[], 1).unwrap();
        assert_eq!(b.value, 0.0);
        assert_eq!(b.binding_depth, None);
    }
}
