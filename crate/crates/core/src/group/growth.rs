use serde::Serialize;

use super::{BallExplorer, Element, GroupError, GroupSpec, DEFAULT_ELEMENT_CAP};
use crate::numeric::least_squares;

/// Polynomial degree estimates from ball sizes over the upper half of the radii.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeFit {
    /// Slope of `log γ(n)` against `log n`.
    pub loglog_slope: Option<f64>,
    /// `d` in the fit `log γ(n) ≈ d·log n + a + b/n`, which absorbs the
    /// first-order finite-size bias of the plain slope.
    pub corrected: Option<f64>,
    /// Radii used by the fit.
    pub radii: (u32, u32),
}

impl DegreeFit {
    fn from_sizes(sizes: &[u64]) -> DegreeFit {
        let n_max = sizes.len().saturating_sub(1) as u32;
        let lo = n_max.div_ceil(2).max(1);
        let radii: Vec<u32> = (lo..=n_max).collect();
        let log_n: Vec<f64> = radii.iter().map(|&n| f64::from(n).ln()).collect();
        let log_g: Vec<f64> = radii.iter().map(|&n| (sizes[n as usize] as f64).ln()).collect();
        let ones = vec![1.0; radii.len()];
        let inv_n: Vec<f64> = radii.iter().map(|&n| 1.0 / f64::from(n)).collect();
        let loglog_slope = if radii.len() >= 2 {
            least_squares(&[log_n.clone(), ones.clone()], &log_g).map(|c| c[0])
        } else {
            None
        };
        let corrected = if radii.len() >= 3 {
            least_squares(&[log_n, ones, inv_n], &log_g).map(|c| c[0])
        } else {
            loglog_slope
        };
        DegreeFit { loglog_slope, corrected, radii: (lo, n_max) }
    }
}

/// Ball sizes `γ_S(0..=n_max)` and the enumeration `g₀, g₁, …` of `B_S(n_max)`.
#[derive(Clone, Debug)]
pub struct GrowthTable {
    pub ball_sizes: Vec<u64>,
    pub enumeration: Vec<Element>,
    pub word_lengths: Vec<u32>,
    pub fit: DegreeFit,
}

impl GrowthTable {
    pub fn n_max(&self) -> u32 {
        (self.ball_sizes.len() - 1) as u32
    }

    /// Estimated polynomial growth degree.
    pub fn degree(&self) -> Option<f64> {
        self.fit.corrected
    }

    /// Tightest `(A, B)` with `A·n^d ≤ γ(n) ≤ B·n^d` for `1 ≤ n ≤ n_max`.
    pub fn sandwich_constants(&self, degree: f64) -> (f64, f64) {
        let ratios = self.ball_sizes.iter().enumerate().skip(1).map(|(n, &g)| g as f64 / (n as f64).powf(degree));
        ratios.fold((f64::INFINITY, 0.0), |(lo, hi), r| (lo.min(r), hi.max(r)))
    }
}

/// Builds the growth table of `spec` up to radius `n_max`.
pub fn growth_table(spec: &GroupSpec, n_max: u32) -> Result<GrowthTable, GroupError> {
    growth_table_capped(spec, n_max, DEFAULT_ELEMENT_CAP)
}

pub fn growth_table_capped(spec: &GroupSpec, n_max: u32, cap: usize) -> Result<GrowthTable, GroupError> {
    let mut explorer = BallExplorer::with_cap(spec, cap);
    explorer.expand_to(n_max)?;
    let ball_sizes: Vec<u64> = (0..=n_max)
        .map(|r| explorer.ball_size(r).map(|s| s as u64))
        .collect::<Result<_, _>>()?;
    let enumeration = explorer.ball(n_max)?;
    let word_lengths = enumeration
        .iter()
        .map(|g| explorer.known_length(g).expect("enumerated elements are known"))
        .collect();
    let fit = DegreeFit::from_sizes(&ball_sizes);
    Ok(GrowthTable { ball_sizes, enumeration, word_lengths, fit })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_growth_is_two_n_plus_one() {
        let t = growth_table(&GroupSpec::infinite_dihedral(), 10).unwrap();
        let expected: Vec<u64> = (0..=10).map(|n| 2 * n + 1).collect();
        assert_eq!(t.ball_sizes, expected);
        assert!((t.degree().unwrap() - 1.0).abs() < 0.05);
    }

    #[test]
    fn lattice_degrees() {
        for d in 1..=3usize {
            let t = growth_table(&GroupSpec::lattice(d), 8).unwrap();
            assert!((t.degree().unwrap() - d as f64).abs() < 0.15, "Z^{d}: {:?}", t.fit);
        }
    }

    #[test]
    fn lattice_square_sizes_closed_form() {
        let t = growth_table(&GroupSpec::lattice(2), 6).unwrap();
        for (n, &g) in t.ball_sizes.iter().enumerate() {
            let n = n as u64;
            assert_eq!(g, 2 * n * n + 2 * n + 1);
        }
    }

    #[test]
    fn word_lengths_are_sorted() {
        let t = growth_table(&GroupSpec::heisenberg(), 4).unwrap();
        assert!(t.word_lengths.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(t.enumeration.len() as u64, t.ball_sizes[4]);
        assert_eq!(t.word_lengths[0], 0);
    }

    #[test]
    fn finite_group_has_flat_growth() {
        let t = growth_table(&GroupSpec::cyclic(4), 6).unwrap();
        assert_eq!(t.ball_sizes, vec![1, 3, 4, 4, 4, 4, 4]);
    }

    #[test]
    fn sandwich_constants_bracket_growth() {
        let t = growth_table(&GroupSpec::lattice(2), 10).unwrap();
        let (a, b) = t.sandwich_constants(2.0);
        assert!(a > 0.0 && a <= b);
        for (n, &g) in t.ball_sizes.iter().enumerate().skip(1) {
            let p = (n as f64).powi(2);
            assert!(a * p <= g as f64 + 1e-9 && g as f64 <= b * p + 1e-9);
        }
    }
}
