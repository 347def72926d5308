use serde::Serialize;

use crate::group::{growth_table, GroupError, GroupSpec};

/// Finite-range proxies for `c₁ = limsup γ(n)/n` and `c₂ = liminf γ(n)/n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthConstants {
    /// `γ(n)/n` for `n = 1..=n_max`.
    pub estimates: Vec<f64>,
    /// Largest estimate over the tail.
    pub c1: f64,
    /// Smallest estimate over the tail.
    pub c2: f64,
    /// Slope of `γ` across the tail, exact for eventually linear growth.
    pub c_extrapolated: f64,
    pub tail_start: u32,
    pub degree: Option<f64>,
    pub warning: Option<String>,
}

impl GrowthConstants {
    /// `γ(n)/n` at radius `n ≥ 1`.
    pub fn estimate_at(&self, n: u32) -> Option<f64> {
        self.estimates.get(n.checked_sub(1)? as usize).copied()
    }
}

/// Growth constants over the last half of `1..=n_max` (at least radius 2 is used).
pub fn growth_constants(spec: &GroupSpec, n_max: u32) -> Result<GrowthConstants, GroupError> {
    growth_constants_with_tail(spec, n_max, 0.5)
}

/// As [`growth_constants`] with the tail made of the last `tail_fraction` of the radii.
pub fn growth_constants_with_tail(spec: &GroupSpec, n_max: u32, tail_fraction: f64) -> Result<GrowthConstants, GroupError> {
    let n_max = n_max.max(2);
    let table = growth_table(spec, n_max)?;
    let sizes = &table.ball_sizes;
    let estimates: Vec<f64> = (1..=n_max).map(|n| sizes[n as usize] as f64 / f64::from(n)).collect();
    let frac = tail_fraction.clamp(0.0, 1.0);
    let tail_start = ((f64::from(n_max) * (1.0 - frac)).ceil() as u32).clamp(1, n_max - 1);
    let tail = &estimates[(tail_start - 1) as usize..];
    let c1 = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let c2 = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let c_extrapolated =
        (sizes[n_max as usize] as f64 - sizes[tail_start as usize] as f64) / f64::from(n_max - tail_start);
    let degree = table.degree();
    let warning = match degree {
        Some(d) if (d - 1.0).abs() <= 0.25 => None,
        Some(d) => Some(format!("G2 growth degree is about {d:.2}; the constants need degree 1")),
        None => Some("G2 growth degree could not be estimated".into()),
    };
    Ok(GrowthConstants { estimates, c1, c2, c_extrapolated, tail_start, degree, warning })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_constants() {
        let g = growth_constants(&GroupSpec::infinite_dihedral(), 100).unwrap();
        assert!((g.estimate_at(100).unwrap() - 2.01).abs() < 1e-12);
        assert!(g.c2 <= g.c1);
        assert_eq!(g.c_extrapolated, 2.0);
        assert!(g.warning.is_none());
    }

    #[test]
    fn integers_times_two_is_exactly_four() {
        let g = growth_constants(&GroupSpec::integers_times_z2(), 50).unwrap();
        assert!(g.estimates.iter().all(|&e| e == 4.0));
        assert_eq!((g.c1, g.c2, g.c_extrapolated), (4.0, 4.0, 4.0));
    }

    #[test]
    fn integers_approach_two() {
        let g = growth_constants(&GroupSpec::lattice(1), 40).unwrap();
        for (i, e) in g.estimates.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((e - (2.0 + 1.0 / n)).abs() < 1e-12);
        }
    }

    #[test]
    fn plane_is_flagged() {
        let g = growth_constants(&GroupSpec::lattice(2), 10).unwrap();
        assert!(g.warning.is_some());
    }
}
