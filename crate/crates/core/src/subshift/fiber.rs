use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{SubshiftError, Symbol};
use crate::numeric::perron_pair;

/// Largest number of transfer states built before giving up.
pub const MAX_TRANSFER_STATES: usize = 1 << 16;

/// Exact word counts for a one-dimensional SFT given by forbidden words.
///
/// States are allowed words of length `m = max(ℓ − 1, 1)` where `ℓ` is the
/// longest forbidden word, restricted to the essential part of the transfer
/// graph (states lying on some bi-infinite path). Counts are therefore counts
/// of globally admissible words, not merely locally admissible ones.
#[derive(Debug)]
pub struct FiberCounter {
    state_len: usize,
    states: Vec<Vec<Symbol>>,
    successors: Vec<Vec<usize>>,
    /// `powers[k][i]` is the number of paths with `k` edges starting at state `i`.
    powers: Mutex<Vec<Vec<BigUint>>>,
    prefix_counts: Vec<BigUint>,
}

impl FiberCounter {
    pub fn new(alphabet_size: usize, forbidden: &[Vec<Symbol>]) -> Result<FiberCounter, SubshiftError> {
        let longest = forbidden.iter().map(Vec::len).max().unwrap_or(1);
        let state_len = longest.saturating_sub(1).max(1);
        let total = (alphabet_size as f64).powi(state_len as i32);
        if total > MAX_TRANSFER_STATES as f64 {
            return Err(SubshiftError::ResourceCap {
                what: "fiber transfer graph".into(),
                needed: total.min(usize::MAX as f64) as usize,
                cap: MAX_TRANSFER_STATES,
            });
        }
        let avoids = |w: &[Symbol]| !forbidden.iter().any(|f| w.windows(f.len()).any(|s| s == f.as_slice()));

        let mut all = vec![Vec::new()];
        for _ in 0..state_len {
            all = all
                .into_iter()
                .flat_map(|w: Vec<Symbol>| {
                    (0..alphabet_size as Symbol).map(move |a| {
                        let mut v = w.clone();
                        v.push(a);
                        v
                    })
                })
                .filter(|w| avoids(w))
                .collect();
        }
        let index: HashMap<&[Symbol], usize> = all.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); all.len()];
        for (i, w) in all.iter().enumerate() {
            for a in 0..alphabet_size as Symbol {
                let mut ext = w.clone();
                ext.push(a);
                if !avoids(&ext) {
                    continue;
                }
                if let Some(&j) = index.get(&ext[1..]) {
                    succ[i].push(j);
                }
            }
        }

        // Trim to the essential graph.
        let mut alive = vec![true; all.len()];
        loop {
            let mut indeg = vec![0usize; all.len()];
            let mut outdeg = vec![0usize; all.len()];
            for (i, js) in succ.iter().enumerate() {
                if !alive[i] {
                    continue;
                }
                for &j in js {
                    if alive[j] {
                        outdeg[i] += 1;
                        indeg[j] += 1;
                    }
                }
            }
            let mut changed = false;
            for i in 0..all.len() {
                if alive[i] && (indeg[i] == 0 || outdeg[i] == 0) {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut renumber = vec![usize::MAX; all.len()];
        let mut states = Vec::new();
        for (i, w) in all.iter().enumerate() {
            if alive[i] {
                renumber[i] = states.len();
                states.push(w.clone());
            }
        }
        let successors: Vec<Vec<usize>> = (0..all.len())
            .filter(|&i| alive[i])
            .map(|i| succ[i].iter().filter(|&&j| alive[j]).map(|&j| renumber[j]).collect())
            .collect();

        let prefix_counts = (0..state_len)
            .map(|len| {
                let mut prefixes: Vec<&[Symbol]> = states.iter().map(|s| &s[..len]).collect();
                prefixes.sort_unstable();
                prefixes.dedup();
                BigUint::from(prefixes.len())
            })
            .collect();
        let ones = vec![BigUint::one(); states.len()];
        Ok(FiberCounter { state_len, states, successors, powers: Mutex::new(vec![ones]), prefix_counts })
    }

    /// Length of the words used as transfer states.
    pub fn state_len(&self) -> usize {
        self.state_len
    }

    /// Essential states.
    pub fn states(&self) -> &[Vec<Symbol>] {
        &self.states
    }

    /// Successor lists of the essential transfer graph.
    pub fn successors(&self) -> &[Vec<usize>] {
        &self.successors
    }

    /// Whether the SFT has no points at all.
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Number of globally admissible words of length `len`.
    pub fn count(&self, len: usize) -> BigUint {
        if self.states.is_empty() {
            return BigUint::zero();
        }
        if len < self.state_len {
            return self.prefix_counts[len].clone();
        }
        let steps = len - self.state_len;
        let mut powers = self.powers.lock().expect("fiber cache poisoned");
        while powers.len() <= steps {
            let last = powers.last().expect("seeded with the all-ones vector");
            let next = self
                .successors
                .iter()
                .map(|js| js.iter().fold(BigUint::zero(), |acc, &j| acc + &last[j]))
                .collect();
            powers.push(next);
        }
        powers[steps].iter().fold(BigUint::zero(), |acc, x| acc + x)
    }

    /// Essential transfer matrix as floats.
    pub fn transfer_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.states.len();
        let mut t = vec![vec![0.0; n]; n];
        for (i, js) in self.successors.iter().enumerate() {
            for &j in js {
                t[i][j] += 1.0;
            }
        }
        t
    }

    /// `log₂` of the Perron root, the entropy of the one-dimensional SFT.
    /// Returns 0 for an empty SFT.
    pub fn entropy_rate(&self) -> f64 {
        let (lambda, _) = perron_pair(&self.transfer_matrix());
        if lambda <= 0.0 {
            0.0
        } else {
            lambda.log2().max(0.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts words of length `len` avoiding `forbidden` that extend to the left and
    /// right by `pad` letters; for large enough `pad` this is the admissible count.
    fn padded_oracle(k: usize, forbidden: &[Vec<Symbol>], len: usize, pad: usize) -> usize {
        let total = len + 2 * pad;
        let avoids = |w: &[Symbol]| !forbidden.iter().any(|f| w.windows(f.len()).any(|s| s == f.as_slice()));
        let mut seen = std::collections::HashSet::new();
        let mut word = vec![0 as Symbol; total];
        let count = k.pow(total as u32);
        for mut code in 0..count {
            for c in word.iter_mut() {
                *c = (code % k) as Symbol;
                code /= k;
            }
            if avoids(&word) {
                seen.insert(word[pad..pad + len].to_vec());
            }
        }
        seen.len()
    }

    #[test]
    fn golden_mean_counts_are_fibonacci() {
        let f = FiberCounter::new(2, &[vec![1, 1]]).unwrap();
        let fib = [1u32, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144];
        for len in 0..10 {
            assert_eq!(f.count(len), BigUint::from(fib[len + 1]), "len {len}");
        }
        assert_eq!(f.count(5), BigUint::from(13u32));
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((f.entropy_rate() - phi.log2()).abs() < 1e-12);
    }

    #[test]
    fn dead_ends_are_trimmed() {
        // Only 0^∞ survives "10" and "11".
        let f = FiberCounter::new(2, &[vec![1, 0], vec![1, 1]]).unwrap();
        for len in 0..6 {
            assert_eq!(f.count(len), BigUint::one());
        }
        assert_eq!(f.entropy_rate(), 0.0);
    }

    #[test]
    fn empty_shift() {
        let f = FiberCounter::new(2, &[vec![0], vec![1]]).unwrap();
        assert!(f.is_empty());
        assert_eq!(f.count(3), BigUint::zero());
    }

    #[test]
    fn matches_padded_oracle() {
        let cases: Vec<(usize, Vec<Vec<Symbol>>)> = vec![
            (2, vec![vec![1, 1]]),
            (2, vec![vec![0, 1, 0]]),
            (3, vec![vec![0, 1], vec![2, 2, 2]]),
            (2, vec![vec![1, 0], vec![0, 0, 1]]),
            (3, vec![vec![0, 0], vec![1, 1], vec![2, 2]]),
        ];
        for (k, forbidden) in cases {
            let f = FiberCounter::new(k, &forbidden).unwrap();
            for len in 0..6 {
                let want = padded_oracle(k, &forbidden, len, 4);
                assert_eq!(f.count(len), BigUint::from(want), "{forbidden:?} len {len}");
            }
        }
    }
}
