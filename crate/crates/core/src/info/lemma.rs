use std::collections::HashMap;

use serde::Serialize;

use super::{binary_entropy, entropy_of, InfoError};
use crate::numeric::kahan_sum;

/// A sparse joint law of two blocks `X, Y ∈ B^n`, listed as weighted outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockPairDistribution {
    block_len: usize,
    alphabet: usize,
    outcomes: Vec<(Vec<u8>, Vec<u8>, f64)>,
}

impl BlockPairDistribution {
    /// Outcomes with equal `(x, y)` are merged; weights are normalised.
    pub fn new(
        block_len: usize,
        alphabet: usize,
        outcomes: Vec<(Vec<u8>, Vec<u8>, f64)>,
    ) -> Result<BlockPairDistribution, InfoError> {
        if block_len == 0 || alphabet == 0 {
            return Err(InfoError::InvalidDistribution("empty block or alphabet".into()));
        }
        let mut merged: HashMap<(Vec<u8>, Vec<u8>), f64> = HashMap::new();
        for (x, y, w) in outcomes {
            if x.len() != block_len || y.len() != block_len {
                return Err(InfoError::InvalidDistribution("block of the wrong length".into()));
            }
            if x.iter().chain(&y).any(|&a| usize::from(a) >= alphabet) {
                return Err(InfoError::InvalidDistribution("letter outside the alphabet".into()));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(InfoError::InvalidDistribution(format!("weight {w}")));
            }
            *merged.entry((x, y)).or_default() += w;
        }
        let total = kahan_sum(merged.values().copied());
        if total <= 0.0 {
            return Err(InfoError::InvalidDistribution("weights sum to zero".into()));
        }
        let mut outcomes: Vec<_> = merged.into_iter().filter(|(_, w)| *w > 0.0).map(|((x, y), w)| (x, y, w / total)).collect();
        outcomes.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        Ok(BlockPairDistribution { block_len, alphabet, outcomes })
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn outcomes(&self) -> &[(Vec<u8>, Vec<u8>, f64)] {
        &self.outcomes
    }

    /// `E #{g : X_g ≠ Y_g}`.
    pub fn expected_mismatches(&self) -> f64 {
        kahan_sum(self.outcomes.iter().map(|(x, y, p)| p * x.iter().zip(y).filter(|(a, b)| a != b).count() as f64))
    }

    fn marginal<'a>(&'a self, pick: impl Fn(&'a (Vec<u8>, Vec<u8>, f64)) -> &'a Vec<u8>) -> HashMap<&'a [u8], f64> {
        let mut m: HashMap<&[u8], f64> = HashMap::new();
        for o in &self.outcomes {
            *m.entry(pick(o).as_slice()).or_default() += o.2;
        }
        m
    }

    pub fn entropy_x(&self) -> f64 {
        let mut p: Vec<f64> = self.marginal(|o| &o.0).into_values().collect();
        p.sort_by(f64::total_cmp);
        entropy_of(&p)
    }

    pub fn mutual_information(&self) -> f64 {
        let px = self.marginal(|o| &o.0);
        let py = self.marginal(|o| &o.1);
        kahan_sum(self.outcomes.iter().map(|(x, y, p)| p * (p / (px[x.as_slice()] * py[y.as_slice()])).log2())).max(0.0)
    }
}

/// Both sides of `I(X;Y) > H(X) − n·H(δ) − δ·n·log₂|B|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KeyBound {
    pub lhs: f64,
    pub rhs: f64,
    pub expected_mismatches: f64,
    pub holds: bool,
}

/// Evaluates the block mutual-information bound. The hypothesis
/// `E #{g : X_g ≠ Y_g} < δ·n` with `0 < δ < 1/2` is checked first.
pub fn lemma_key_bound(pair: &BlockPairDistribution, delta: f64) -> Result<KeyBound, InfoError> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(InfoError::HypothesisViolated(format!("δ = {delta} is not in (0, 1/2)")));
    }
    let n = pair.block_len() as f64;
    let expected = pair.expected_mismatches();
    if expected >= delta * n {
        return Err(InfoError::HypothesisViolated(format!(
            "expected mismatches {expected} are not below δ·n = {}",
            delta * n
        )));
    }
    let lhs = pair.mutual_information();
    let rhs = pair.entropy_x() - n * binary_entropy(delta) - delta * n * (pair.alphabet() as f64).log2();
    Ok(KeyBound { lhs, rhs, expected_mismatches: expected, holds: lhs > rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_words(n: usize, k: u8) -> Vec<Vec<u8>> {
        (0..(k as usize).pow(n as u32))
            .map(|mut c| {
                (0..n)
                    .map(|_| {
                        let a = (c % k as usize) as u8;
                        c /= k as usize;
                        a
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn identical_blocks() {
        let words = all_words(3, 2);
        let pair = BlockPairDistribution::new(3, 2, words.iter().map(|w| (w.clone(), w.clone(), 1.0)).collect()).unwrap();
        let b = lemma_key_bound(&pair, 0.1).unwrap();
        assert!((b.lhs - 3.0).abs() < 1e-12);
        assert!(b.holds);
        // As δ shrinks the bound approaches H(X) from below.
        let tight = lemma_key_bound(&pair, 1e-9).unwrap();
        assert!(tight.lhs - tight.rhs > 0.0 && tight.lhs - tight.rhs < 1e-6);
    }

    #[test]
    fn independent_flips() {
        // Each coordinate flipped with probability 0.1: expected mismatch 0.1·n.
        let n = 3;
        let words = all_words(n, 2);
        let mut outcomes = Vec::new();
        for x in &words {
            for y in &words {
                let flips = x.iter().zip(y).filter(|(a, b)| a != b).count() as i32;
                outcomes.push((x.clone(), y.clone(), 0.1f64.powi(flips) * 0.9f64.powi(n as i32 - flips)));
            }
        }
        let pair = BlockPairDistribution::new(n, 2, outcomes).unwrap();
        assert!((pair.expected_mismatches() - 0.3).abs() < 1e-12);
        let b = lemma_key_bound(&pair, 0.2).unwrap();
        assert!(b.holds);
        assert!(matches!(lemma_key_bound(&pair, 0.1), Err(InfoError::HypothesisViolated(_))));
    }
}
