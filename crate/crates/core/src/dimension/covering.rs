use rayon::prelude::*;

use super::DimensionError;
use crate::group::Element;
use crate::subshift::{PatternCount, PatternCounter, ShiftKind};
use crate::table::{ConvergenceTable, ExtrapolatedRow, TableRow};

/// `#(X, d_F, 2^{-M})`, the number of cylinders over the `F`-dynamical window of depth `M`.
///
/// Metric balls are cylinders, so the minimal cover is the cylinder partition and
/// the count is exact whenever the pattern count is. An empty `F` is read as `{1}`.
pub fn covering_number(counter: &PatternCounter, f: &[Element], depth: u32) -> Result<PatternCount, DimensionError> {
    Ok(counter.count_dynamical(f, depth)?)
}

/// [`covering_number`] for `F = B₁(N)`.
pub fn covering_number_ball(counter: &PatternCounter, n: u32, depth: u32) -> Result<PatternCount, DimensionError> {
    let c = counter.count_ball_window(n, depth)?;
    if c.is_zero() {
        return Err(DimensionError::EmptySubshift);
    }
    Ok(c)
}

/// `log₂` of the single-slice count on `{1} × B₂(M)`, which is the `N → ∞` limit of
/// `log₂ #(X, d_{B₁(N)}, 2^{-M}) / |B₁(N)|` when slices are independent.
pub(crate) fn slice_log_count(counter: &PatternCounter, depth: u32) -> Result<Option<f64>, DimensionError> {
    let group = counter.group();
    let k = counter.spec().alphabet().len() as f64;
    Ok(match counter.spec().kind() {
        ShiftKind::FullShift => Some(group.right().ball_size(depth)? as f64 * k.log2()),
        ShiftKind::FiberSft { .. } => {
            let fiber = counter.fiber().expect("fiber SFT counters carry a fiber counter");
            Some(crate::log2_biguint(&fiber.count(2 * depth as usize + 1)))
        }
        ShiftKind::GeneralSft { .. } => None,
    })
}

fn grid(m_list: &[u32], n_list: &[u32]) -> Vec<(u32, u32)> {
    m_list.iter().flat_map(|&m| n_list.iter().map(move |&n| (n, m))).collect()
}

/// Rows `(N, M, log₂ #(X, d_{B₁(N)}, 2^{-M}) / |B₁(N)|)`.
pub fn s_rate(counter: &PatternCounter, depth: u32, n_list: &[u32]) -> Result<ConvergenceTable, DimensionError> {
    let rows = n_list
        .par_iter()
        .map(|&n| {
            let c = covering_number_ball(counter, n, depth)?;
            let size = counter.group().left().ball_size(n)? as f64;
            Ok(TableRow { n, m: depth, value: c.log2() / size, exact: c.is_exact() })
        })
        .collect::<Result<Vec<_>, DimensionError>>()?;
    let extrapolated = slice_log_count(counter, depth)?
        .map(|v| vec![ExtrapolatedRow { m: depth, value: v }])
        .unwrap_or_default();
    Ok(ConvergenceTable::new("s_rate", rows, None).with_extrapolated(extrapolated))
}

/// Rows `(N, M, log₂ #(X, d_{B₁(N)}, 2^{-M}) / (|B₁(N)|·M))` for `M ≥ 1`.
pub fn mdim_m_estimate(
    counter: &PatternCounter,
    m_list: &[u32],
    n_list: &[u32],
    target: Option<f64>,
) -> Result<ConvergenceTable, DimensionError> {
    if m_list.contains(&0) {
        return Err(DimensionError::Precondition("depth M = 0 has log(1/ε) = 0".into()));
    }
    let rows = grid(m_list, n_list)
        .into_par_iter()
        .map(|(n, m)| {
            let c = covering_number_ball(counter, n, m)?;
            let size = counter.group().left().ball_size(n)? as f64;
            Ok(TableRow { n, m, value: c.log2() / (size * f64::from(m)), exact: c.is_exact() })
        })
        .collect::<Result<Vec<_>, DimensionError>>()?;
    let mut extrapolated = Vec::new();
    for &m in m_list {
        if let Some(v) = slice_log_count(counter, m)? {
            extrapolated.push(ExtrapolatedRow { m, value: v / f64::from(m) });
        }
    }
    Ok(ConvergenceTable::new("mdim_M", rows, target).with_extrapolated(extrapolated))
}

/// `log₂ #(X, d_F, 2^{-M}) / M`, the covering bound on `dim_H(X, d_F, 2^{-M})`.
pub fn hdim_scale_upper(counter: &PatternCounter, f: &[Element], depth: u32) -> Result<f64, DimensionError> {
    if depth == 0 {
        return Err(DimensionError::Precondition("depth M = 0 has log(1/ε) = 0".into()));
    }
    let c = covering_number(counter, f, depth)?;
    if c.is_zero() {
        return Err(DimensionError::EmptySubshift);
    }
    Ok(c.log2() / f64::from(depth))
}

/// [`hdim_scale_upper`] for `F = B₁(N)` without materialising the window.
pub fn hdim_scale_upper_ball(counter: &PatternCounter, n: u32, depth: u32) -> Result<f64, DimensionError> {
    if depth == 0 {
        return Err(DimensionError::Precondition("depth M = 0 has log(1/ε) = 0".into()));
    }
    Ok(covering_number_ball(counter, n, depth)?.log2() / f64::from(depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::subshift::{Alphabet, ProductGroup, SubshiftSpec};
    use num_bigint::BigUint;

    fn plane() -> ProductGroup {
        ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::lattice(1))
    }

    #[test]
    fn covering_examples() {
        let g = plane();
        let full = SubshiftSpec::full(Alphabet::numbered(2));
        let c = PatternCounter::new(&g, &full).unwrap();
        assert_eq!(covering_number_ball(&c, 1, 1).unwrap().value(), BigUint::from(32768u32));
        assert_eq!(covering_number(&c, &[], 0).unwrap().value(), BigUint::from(2u32));
        let golden = SubshiftSpec::fiber_sft(Alphabet::numbered(2), vec![vec![1, 1]]).unwrap();
        let c = PatternCounter::new(&g, &golden).unwrap();
        assert_eq!(covering_number_ball(&c, 0, 2).unwrap().value(), BigUint::from(371_293u32));
        assert_eq!(hdim_scale_upper(&PatternCounter::new(&g, &full).unwrap(), &g.left().ball(1).unwrap(), 1).unwrap(), 15.0);
    }

    #[test]
    fn full_shift_closed_form() {
        let g = plane();
        let full = SubshiftSpec::full(Alphabet::numbered(2));
        let c = PatternCounter::new(&g, &full).unwrap();
        let t = mdim_m_estimate(&c, &[1, 2, 4], &[0, 3, 10], Some(2.0)).unwrap();
        for r in &t.rows {
            let (n, m) = (f64::from(r.n), f64::from(r.m));
            let want = (2.0 * (m + n) + 1.0) * (2.0 * m + 1.0) / ((2.0 * n + 1.0) * m);
            assert!((r.value - want).abs() < 1e-12);
        }
        assert_eq!(t.extrapolated_approaches_target(), Some(true));
        let s0 = s_rate(&c, 0, &[5, 50, 500]).unwrap();
        assert!(s0.rows.iter().all(|r| (r.value - 1.0).abs() < 1e-12));
        assert!(mdim_m_estimate(&c, &[0], &[1], None).is_err());
    }

    #[test]
    fn golden_mean_rows_match_fiber_closed_form() {
        let g = plane();
        let golden = SubshiftSpec::fiber_sft(Alphabet::numbered(2), vec![vec![1, 1]]).unwrap();
        let c = PatternCounter::new(&g, &golden).unwrap();
        let t = s_rate(&c, 2, &[4]).unwrap();
        // 2·(2+4)+1 = 13 fibers of length 5, each with F(7) = 13 words.
        assert!((t.rows[0].value - 13.0 * 13f64.log2() / 9.0).abs() < 1e-12);
        assert!((t.extrapolated[0].value - 13f64.log2()).abs() < 1e-12);
    }
}
