use serde::Serialize;

use super::{entropy_of, InfoError};
use crate::numeric::{kahan_sum, perron_pair};
use crate::subshift::{FiberCounter, PatternCounter, ProductGroup, ShiftKind, SubshiftSpec};
use crate::table::{ConvergenceTable, TableRow};

const STOCHASTIC_TOLERANCE: f64 = 1e-9;

/// A shift-invariant measure on `A^{G₁×G₂}` with a finite description.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpec {
    /// Independent letters with law `probs`.
    Bernoulli { probs: Vec<f64> },
    /// A stationary Markov chain along each `G₂ ≅ ℤ` fiber, independent across `G₁`.
    FiberMarkov { transition: Vec<Vec<f64>>, stationary: Vec<f64> },
}

impl MeasureSpec {
    pub fn bernoulli(probs: Vec<f64>) -> Result<MeasureSpec, InfoError> {
        super::FiniteDistribution::new(probs.clone())?;
        Ok(MeasureSpec::Bernoulli { probs })
    }

    pub fn uniform(alphabet: usize) -> MeasureSpec {
        MeasureSpec::Bernoulli { probs: vec![1.0 / alphabet as f64; alphabet] }
    }

    pub fn fiber_markov(transition: Vec<Vec<f64>>, stationary: Vec<f64>) -> Result<MeasureSpec, InfoError> {
        let k = transition.len();
        if k == 0 || stationary.len() != k || transition.iter().any(|r| r.len() != k) {
            return Err(InfoError::InvalidDistribution("transition matrix shape".into()));
        }
        super::FiniteDistribution::new(stationary.clone())?;
        for (i, row) in transition.iter().enumerate() {
            if row.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(InfoError::InvalidDistribution(format!("row {i} has a negative entry")));
            }
            let s = kahan_sum(row.iter().copied());
            // Rows of states the chain never visits may be left empty.
            let empty_unvisited = s == 0.0 && stationary[i] == 0.0;
            if !empty_unvisited && (s - 1.0).abs() > STOCHASTIC_TOLERANCE {
                return Err(InfoError::InvalidDistribution(format!("row {i} sums to {s}")));
            }
        }
        for j in 0..k {
            let back = kahan_sum((0..k).map(|i| stationary[i] * transition[i][j]));
            if (back - stationary[j]).abs() > STOCHASTIC_TOLERANCE {
                return Err(InfoError::InvalidDistribution("stationary vector is not fixed by the chain".into()));
            }
        }
        Ok(MeasureSpec::FiberMarkov { transition, stationary })
    }

    /// The measure of maximal entropy of a one-step fiber SFT.
    pub fn parry(fiber: &FiberCounter, alphabet: usize) -> Result<MeasureSpec, InfoError> {
        if fiber.state_len() != 1 || fiber.states().len() > alphabet {
            return Err(InfoError::UnsupportedMeasure("Parry measures need forbidden words of length at most 2".into()));
        }
        if fiber.is_empty() {
            return Err(InfoError::UnsupportedMeasure("the subshift is empty".into()));
        }
        let t = fiber.transfer_matrix();
        let n = t.len();
        let (lambda, right) = perron_pair(&t);
        let transpose: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| t[j][i]).collect()).collect();
        let (_, left) = perron_pair(&transpose);
        if right.iter().chain(&left).any(|&x| x <= 1e-300) {
            return Err(InfoError::UnsupportedMeasure("transfer graph is not irreducible".into()));
        }
        let letter = |s: usize| usize::from(fiber.states()[s][0]);
        let mut transition = vec![vec![0.0; alphabet]; alphabet];
        let mut stationary = vec![0.0; alphabet];
        let norm = kahan_sum((0..n).map(|i| left[i] * right[i]));
        for i in 0..n {
            stationary[letter(i)] = left[i] * right[i] / norm;
            for j in 0..n {
                transition[letter(i)][letter(j)] = t[i][j] * right[j] / (lambda * right[i]);
            }
        }
        MeasureSpec::fiber_markov(transition, stationary)
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            MeasureSpec::Bernoulli { probs } => probs.len(),
            MeasureSpec::FiberMarkov { stationary, .. } => stationary.len(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            MeasureSpec::Bernoulli { .. } => "bernoulli",
            MeasureSpec::FiberMarkov { .. } => "fiber_markov",
        }
    }

    /// Entropy per site, `h_μ`.
    pub fn entropy_rate(&self) -> f64 {
        match self {
            MeasureSpec::Bernoulli { probs } => entropy_of(probs),
            MeasureSpec::FiberMarkov { transition, stationary } => {
                kahan_sum(stationary.iter().zip(transition).map(|(p, row)| p * entropy_of(row)))
            }
        }
    }

    /// Checks that the measure lives on the subshift.
    pub fn check_supported(&self, spec: &SubshiftSpec, group: &ProductGroup) -> Result<(), InfoError> {
        if self.alphabet_size() != spec.alphabet().len() {
            return Err(InfoError::UnsupportedMeasure(format!(
                "measure has {} letters, the alphabet {}",
                self.alphabet_size(),
                spec.alphabet().len()
            )));
        }
        match (self, spec.kind()) {
            (MeasureSpec::Bernoulli { .. }, ShiftKind::FullShift) => Ok(()),
            (MeasureSpec::Bernoulli { .. }, _) => {
                Err(InfoError::UnsupportedMeasure("Bernoulli measures need a full shift".into()))
            }
            (MeasureSpec::FiberMarkov { .. }, _) if !group.right_spec().is_standard_integers() => Err(
                InfoError::UnsupportedMeasure("fiber Markov measures need G2 = Z with generators ±1".into()),
            ),
            (MeasureSpec::FiberMarkov { .. }, ShiftKind::FullShift) => Ok(()),
            (MeasureSpec::FiberMarkov { transition, stationary }, ShiftKind::FiberSft { forbidden }) => {
                if forbidden.iter().any(|w| w.len() > 2) {
                    return Err(InfoError::UnsupportedMeasure(
                        "fiber Markov measures need forbidden words of length at most 2".into(),
                    ));
                }
                let allowed = |w: &[u8]| !forbidden.iter().any(|f| w.windows(f.len()).any(|s| s == f.as_slice()));
                for (i, row) in transition.iter().enumerate() {
                    if stationary[i] == 0.0 {
                        continue;
                    }
                    for (j, &p) in row.iter().enumerate() {
                        if p > 0.0 && !allowed(&[i as u8, j as u8]) {
                            return Err(InfoError::UnsupportedMeasure(format!(
                                "transition {i}->{j} leaves the subshift"
                            )));
                        }
                    }
                }
                Ok(())
            }
            (MeasureSpec::FiberMarkov { .. }, ShiftKind::GeneralSft { .. }) => {
                Err(InfoError::UnsupportedMeasure("fiber Markov measures need a full shift or fiber SFT".into()))
            }
        }
    }

    /// Entropy of the law on one `G₂`-slice with `cells` cells (an interval for Markov measures).
    pub fn slice_entropy(&self, cells: u64) -> f64 {
        match self {
            MeasureSpec::Bernoulli { probs } => cells as f64 * entropy_of(probs),
            MeasureSpec::FiberMarkov { stationary, .. } => {
                if cells == 0 {
                    0.0
                } else {
                    entropy_of(stationary) + (cells - 1) as f64 * self.entropy_rate()
                }
            }
        }
    }

    /// `H` of the law on `slices` independent slices of `cells` cells each.
    pub fn window_entropy(&self, slices: u64, cells: u64) -> f64 {
        slices as f64 * self.slice_entropy(cells)
    }

    /// `−log₂` of the largest cylinder mass on one slice of `cells` cells.
    pub fn slice_neg_log2_max_cylinder(&self, cells: u64) -> f64 {
        match self {
            MeasureSpec::Bernoulli { probs } => {
                let pmax = probs.iter().copied().fold(0.0, f64::max);
                -(cells as f64) * pmax.log2()
            }
            MeasureSpec::FiberMarkov { transition, stationary } => {
                if cells == 0 {
                    return 0.0;
                }
                // Viterbi recursion over log-probabilities.
                let log = |x: f64| if x > 0.0 { x.log2() } else { f64::NEG_INFINITY };
                let mut best: Vec<f64> = stationary.iter().map(|&p| log(p)).collect();
                for _ in 1..cells {
                    best = (0..best.len())
                        .map(|j| {
                            best.iter()
                                .zip(transition)
                                .map(|(b, row)| b + log(row[j]))
                                .fold(f64::NEG_INFINITY, f64::max)
                        })
                        .collect();
                }
                -best.into_iter().fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }

    /// A lower bound on `−log₂ (largest cylinder mass) / (cells)` per additional slice cell,
    /// used to bound cylinder masses beyond a computed range.
    pub fn per_cell_surprise_floor(&self) -> f64 {
        match self {
            MeasureSpec::Bernoulli { probs } => -probs.iter().copied().fold(0.0, f64::max).log2(),
            MeasureSpec::FiberMarkov { transition, stationary } => {
                let pmax = transition
                    .iter()
                    .zip(stationary)
                    .filter(|(_, &s)| s > 0.0)
                    .flat_map(|(row, _)| row.iter().copied())
                    .fold(0.0, f64::max);
                -pmax.log2()
            }
        }
    }
}

/// Normalised window entropies on boxes `B₁(n) × B₂(n)`.
pub fn measure_entropy(measure: &MeasureSpec, counter: &PatternCounter, radii: &[u32]) -> Result<ConvergenceTable, InfoError> {
    let group = counter.group();
    measure.check_supported(counter.spec(), group)?;
    let rows = radii
        .iter()
        .map(|&n| {
            let slices = group.left().ball_size(n)?;
            let cells = group.right().ball_size(n)?;
            let value = measure.window_entropy(slices, cells) / (slices * cells) as f64;
            Ok(TableRow { n, m: n, value, exact: true })
        })
        .collect::<Result<Vec<_>, InfoError>>()?;
    Ok(ConvergenceTable::new("measure_entropy", rows, Some(measure.entropy_rate())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::info::binary_entropy;
    use crate::subshift::Alphabet;

    fn golden_counter_parts() -> (ProductGroup, SubshiftSpec) {
        let g = ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::lattice(1));
        let s = SubshiftSpec::fiber_sft(Alphabet::numbered(2), vec![vec![1, 1]]).unwrap();
        (g, s)
    }

    #[test]
    fn bernoulli_rows() {
        let g = ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::infinite_dihedral());
        let s = SubshiftSpec::full(Alphabet::numbered(2));
        let c = PatternCounter::new(&g, &s).unwrap();
        let t = measure_entropy(&MeasureSpec::uniform(2), &c, &[1, 2, 5]).unwrap();
        assert!(t.rows.iter().all(|r| (r.value - 1.0).abs() < 1e-12));
        let biased = MeasureSpec::bernoulli(vec![0.25, 0.75]).unwrap();
        let t = measure_entropy(&biased, &c, &[1, 3]).unwrap();
        assert!(t.rows.iter().all(|r| (r.value - binary_entropy(0.25)).abs() < 1e-12));
        assert!((binary_entropy(0.25) - 0.8113).abs() < 1e-4);
    }

    #[test]
    fn parry_measure_of_golden_mean() {
        let (g, s) = golden_counter_parts();
        let c = PatternCounter::new(&g, &s).unwrap();
        let parry = MeasureSpec::parry(c.fiber().unwrap(), 2).unwrap();
        let phi: f64 = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((parry.entropy_rate() - phi.log2()).abs() < 1e-10);
        if let MeasureSpec::FiberMarkov { transition, stationary } = &parry {
            assert!((transition[0][0] - 1.0 / phi).abs() < 1e-10);
            assert!((transition[1][0] - 1.0).abs() < 1e-12 && transition[1][1] == 0.0);
            assert!((stationary[1] - 1.0 / (phi * phi + 1.0)).abs() < 1e-10);
        } else {
            panic!("Parry measure is Markov");
        }
        parry.check_supported(&s, &g).unwrap();
        let t = measure_entropy(&parry, &c, &[16]).unwrap();
        // Box radius 16 is a fiber of length 33.
        assert!((t.rows[0].value - phi.log2()).abs() < 0.01);
        let rows = measure_entropy(&parry, &c, &[1, 2, 4, 8, 16]).unwrap();
        assert!(rows.rows.windows(2).all(|w| w[1].value <= w[0].value + 1e-12));
    }

    #[test]
    fn viterbi_matches_enumeration() {
        let m = MeasureSpec::fiber_markov(vec![vec![0.7, 0.3], vec![0.4, 0.6]], vec![4.0 / 7.0, 3.0 / 7.0]).unwrap();
        let MeasureSpec::FiberMarkov { transition, stationary } = &m else { unreachable!() };
        for len in 1..8u32 {
            let mut best: f64 = 0.0;
            for code in 0..1u32 << len {
                let w: Vec<usize> = (0..len).map(|i| ((code >> i) & 1) as usize).collect();
                let mut p = stationary[w[0]];
                for k in 1..w.len() {
                    p *= transition[w[k - 1]][w[k]];
                }
                best = best.max(p);
            }
            assert!((m.slice_neg_log2_max_cylinder(u64::from(len)) + best.log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn unsupported_pairs() {
        let (g, s) = golden_counter_parts();
        assert!(MeasureSpec::uniform(2).check_supported(&s, &g).is_err());
        let leaky = MeasureSpec::fiber_markov(vec![vec![0.5, 0.5], vec![0.5, 0.5]], vec![0.5, 0.5]).unwrap();
        assert!(matches!(leaky.check_supported(&s, &g), Err(InfoError::UnsupportedMeasure(_))));
        assert!(MeasureSpec::fiber_markov(vec![vec![0.5, 0.5], vec![1.0, 0.0]], vec![0.5, 0.5]).is_err());
    }
}
