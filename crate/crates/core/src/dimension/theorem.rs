use rayon::prelude::*;
use serde::Serialize;

use super::{
    covering_number_ball, default_r_max, growth_constants, hdim_scale_lower_mass_ball_with, hdim_scale_lower_mass_limit,
    slice_log_count,
    DimensionError, GrowthConstants,
};
use crate::info::MeasureSpec;
use crate::subshift::{PatternCounter, ShiftKind};
use crate::table::{ConvergenceTable, ExtrapolatedRow, TableRow};

/// Lower bounds above the upper bound by less than this are rounding, not violations.
pub const SANDWICH_SLACK: f64 = 1e-9;

/// Exact topological entropy per site where a closed form exists.
pub fn topological_entropy(counter: &PatternCounter) -> Option<f64> {
    match counter.spec().kind() {
        ShiftKind::FullShift => Some((counter.spec().alphabet().len() as f64).log2()),
        ShiftKind::FiberSft { .. } => counter.fiber().map(|f| f.entropy_rate()),
        ShiftKind::GeneralSft { .. } => None,
    }
}

/// Rows `(n, n, log₂ |π_{B₁(n)×B₂(n)}(X)| / (|B₁(n)|·|B₂(n)|))`.
pub fn h_top_estimate(counter: &PatternCounter, radii: &[u32]) -> Result<ConvergenceTable, DimensionError> {
    let group = counter.group();
    let rows = radii
        .par_iter()
        .map(|&n| {
            let c = counter.count_box(n)?;
            let cells = group.left().ball_size(n)? * group.right().ball_size(n)?;
            Ok(TableRow { n, m: n, value: c.log2() / cells as f64, exact: c.is_exact() })
        })
        .collect::<Result<Vec<_>, DimensionError>>()?;
    Ok(ConvergenceTable::new("h_top", rows, topological_entropy(counter)))
}

/// The measure of maximal entropy when one is available in closed form.
pub fn default_measure(counter: &PatternCounter) -> Option<MeasureSpec> {
    let k = counter.spec().alphabet().len();
    match counter.spec().kind() {
        ShiftKind::FullShift => Some(MeasureSpec::uniform(k)),
        ShiftKind::FiberSft { .. } if counter.group().right_spec().is_standard_integers() => {
            MeasureSpec::parry(counter.fiber()?, k).ok()
        }
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem1Budget {
    pub n_list: Vec<u32>,
    pub m_list: Vec<u32>,
    pub growth_radius: u32,
    /// Deepest cylinder depth checked one by one by the mass bound; `None` uses [`default_r_max`].
    pub r_max: Option<u32>,
}

impl Default for Theorem1Budget {
    fn default() -> Self {
        Theorem1Budget { n_list: vec![1, 4, 16, 64], m_list: vec![1, 2, 4, 8], growth_radius: 100, r_max: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub group: String,
    pub growth: GrowthConstants,
    pub h_top: Option<f64>,
    /// `c · h_top` with `c` the extrapolated growth constant of `G₂`.
    pub target: Option<f64>,
    pub measure: Option<MeasureSpec>,
    pub mdim: ConvergenceTable,
    pub hdim_upper: ConvergenceTable,
    pub hdim_lower: ConvergenceTable,
    /// Budget cells `(N, M)` where the certified lower bound exceeds the upper bound.
    pub violations: Vec<(u32, u32)>,
    /// `|mdim − target|` at the largest budgeted `(N, M)`.
    pub max_deviation: Option<f64>,
    pub warnings: Vec<String>,
}

/// Tables for the dimension–entropy identity over a budget grid.
///
/// `measure` defaults to the measure of maximal entropy; without one the lower table is empty.
pub fn verify_theorem1(
    counter: &PatternCounter,
    measure: Option<&MeasureSpec>,
    budget: &Theorem1Budget,
) -> Result<Theorem1Report, DimensionError> {
    if budget.m_list.is_empty() || budget.n_list.is_empty() {
        return Err(DimensionError::Precondition("the budget grid is empty".into()));
    }
    if budget.m_list.contains(&0) {
        return Err(DimensionError::Precondition("depth M = 0 has log(1/ε) = 0".into()));
    }
    let group = counter.group();
    let growth = growth_constants(group.right_spec(), budget.growth_radius)?;
    let mut warnings: Vec<String> = growth.warning.iter().cloned().collect();
    let h_top = topological_entropy(counter);
    let target = h_top.map(|h| growth.c_extrapolated * h);
    let measure = match measure {
        Some(m) => Some(m.clone()),
        None => {
            let m = default_measure(counter);
            if m.is_none() {
                warnings.push("no closed-form measure of maximal entropy; the mass lower table is empty".into());
            }
            m
        }
    };

    let cells: Vec<(u32, u32)> =
        budget.m_list.iter().flat_map(|&m| budget.n_list.iter().map(move |&n| (n, m))).collect();
    let computed = cells
        .par_iter()
        .map(|&(n, m)| {
            let cov = covering_number_ball(counter, n, m)?;
            let size = group.left().ball_size(n)? as f64;
            let upper = cov.log2() / (size * f64::from(m));
            let lower = match &measure {
                Some(mu) => Some(hdim_scale_lower_mass_ball_with(counter, mu, n, m, budget.r_max.unwrap_or(default_r_max(m)))?.value / size),
                None => None,
            };
            Ok((n, m, upper, cov.is_exact(), lower))
        })
        .collect::<Result<Vec<_>, DimensionError>>()?;

    let mut mdim_ext = Vec::new();
    let mut lower_ext = Vec::new();
    for &m in &budget.m_list {
        if let Some(v) = slice_log_count(counter, m)? {
            mdim_ext.push(ExtrapolatedRow { m, value: v / f64::from(m) });
        }
        if let Some(mu) = &measure {
            lower_ext.push(ExtrapolatedRow { m, value: hdim_scale_lower_mass_limit(counter, mu, m)?.value });
        }
    }

    let upper_rows: Vec<TableRow> =
        computed.iter().map(|&(n, m, v, exact, _)| TableRow { n, m, value: v, exact }).collect();
    let lower_rows: Vec<TableRow> = computed
        .iter()
        .filter_map(|&(n, m, _, _, l)| l.map(|value| TableRow { n, m, value, exact: true }))
        .collect();
    let violations: Vec<(u32, u32)> = computed
        .iter()
        .filter(|(_, _, u, _, l)| l.is_some_and(|l| l > u + SANDWICH_SLACK))
        .map(|&(n, m, ..)| (n, m))
        .collect();
    if computed.iter().any(|c| !c.3) {
        warnings.push("some counts are upper bounds; the upper tables are bounds, not exact values".into());
    }

    let mdim = ConvergenceTable::new("mdim_M", upper_rows.clone(), target).with_extrapolated(mdim_ext.clone());
    let hdim_upper = ConvergenceTable::new("hdim_upper", upper_rows, target).with_extrapolated(mdim_ext);
    let hdim_lower = ConvergenceTable::new("hdim_lower_mass", lower_rows, target).with_extrapolated(lower_ext);
    let max_deviation = mdim.final_deviation();
    Ok(Theorem1Report {
        group: group.spec().name(),
        growth,
        h_top,
        target,
        measure,
        mdim,
        hdim_upper,
        hdim_lower,
        violations,
        max_deviation,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::subshift::{Alphabet, ProductGroup, SubshiftSpec};

    #[test]
    fn golden_mean_entropy() {
        let g = ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::lattice(1));
        let golden = SubshiftSpec::fiber_sft(Alphabet::numbered(2), vec![vec![1, 1]]).unwrap();
        let c = PatternCounter::new(&g, &golden).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((topological_entropy(&c).unwrap() - phi.log2()).abs() < 1e-12);
        let t = h_top_estimate(&c, &[15]).unwrap();
        assert!(t.final_deviation().unwrap() < 0.01);
    }

    #[test]
    fn dihedral_report_brackets_target() {
        let g = ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::infinite_dihedral());
        let full = SubshiftSpec::full(Alphabet::numbered(2));
        let c = PatternCounter::new(&g, &full).unwrap();
        let r = verify_theorem1(&c, None, &Theorem1Budget::default()).unwrap();
        assert_eq!(r.target, Some(2.0));
        assert!(r.violations.is_empty());
        for (up, lo) in r.mdim.extrapolated.iter().zip(&r.hdim_lower.extrapolated) {
            assert!(lo.value <= 2.0 && 2.0 <= up.value);
        }
    }

    #[test]
    fn general_sft_without_measure_warns() {
        use crate::subshift::{Cell, Pattern};
        let g = ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::lattice(1));
        let hard = Pattern::from_cells(vec![
            (Cell::new(Element::integer(0), Element::integer(0)), 1),
            (Cell::new(Element::integer(1), Element::integer(0)), 1),
        ])
        .unwrap();
        let spec = SubshiftSpec::general_sft(Alphabet::numbered(2), vec![hard]).unwrap();
        let c = PatternCounter::new(&g, &spec).unwrap();
        let budget = Theorem1Budget { n_list: vec![0, 1], m_list: vec![1], growth_radius: 10, r_max: None };
        let r = verify_theorem1(&c, None, &budget).unwrap();
        assert!(r.target.is_none());
        assert!(r.hdim_lower.rows.is_empty());
        assert!(!r.warnings.is_empty());
    }

    use crate::group::Element;
}
