use std::collections::{BTreeSet, HashSet};

use num_rational::Ratio;
use serde::Serialize;

use super::{BallExplorer, Element, GroupError, GroupSpec};

/// The `K`-boundary `{g : Kg ∩ A ≠ ∅ and Kg ∩ (G∖A) ≠ ∅}`, sorted.
pub fn boundary(spec: &GroupSpec, a: &[Element], k: &[Element]) -> Result<Vec<Element>, GroupError> {
    for g in a.iter().chain(k) {
        if !spec.contains(g) {
            return Err(GroupError::NotAMember { element: g.to_string(), group: spec.name() });
        }
    }
    let a_set: HashSet<&Element> = a.iter().collect();
    // Kg meets A only if g ∈ K⁻¹A.
    let mut candidates = BTreeSet::new();
    for kk in k {
        let inv = spec.inverse_unchecked(kk);
        for x in a {
            candidates.insert(spec.multiply_unchecked(&inv, x));
        }
    }
    Ok(candidates
        .into_iter()
        .filter(|g| {
            let mut inside = false;
            let mut outside = false;
            for kk in k {
                if a_set.contains(&spec.multiply_unchecked(kk, g)) {
                    inside = true;
                } else {
                    outside = true;
                }
            }
            inside && outside
        })
        .collect())
}

/// `|B(A, K)| / |A|`; `A` is `(K, δ)`-invariant when this is below `δ`.
pub fn invariance_ratio(spec: &GroupSpec, a: &[Element], k: &[Element]) -> Result<Ratio<u64>, GroupError> {
    let distinct: HashSet<&Element> = a.iter().collect();
    if distinct.is_empty() {
        return Err(GroupError::NotAMember { element: "∅".into(), group: spec.name() });
    }
    let b = boundary(spec, a, k)?;
    Ok(Ratio::new(b.len() as u64, distinct.len() as u64))
}

/// Largest observed `|⋃_{k<n} B(k)⁻¹B(n)| / |B(n)|` over `2 ≤ n ≤ n_max`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TemperedWitness {
    pub constant: f64,
    pub numerator: u64,
    pub denominator: u64,
    pub radius: u32,
}

/// Tempered constant witnessed by the ball Følner sequence up to `n_max`.
///
/// With `n_max < 2` the maximum is vacuous and the witness is 1.
pub fn tempered_witness(spec: &GroupSpec, n_max: u32) -> Result<TemperedWitness, GroupError> {
    let mut best = TemperedWitness { constant: 1.0, numerator: 1, denominator: 1, radius: 0 };
    if n_max < 2 {
        return Ok(best);
    }
    let mut explorer = BallExplorer::new(spec);
    explorer.expand_to(n_max)?;
    for n in 2..=n_max {
        let big = explorer.ball_slice(n)?.to_vec();
        // Balls are nested, so the union over k < n is the k = n − 1 term.
        let small = explorer.ball_slice(n - 1)?.to_vec();
        let mut union = HashSet::with_capacity(big.len() * 2);
        for x in &small {
            let inv = spec.inverse_unchecked(x);
            for y in &big {
                union.insert(spec.multiply_unchecked(&inv, y));
            }
        }
        let ratio = union.len() as f64 / big.len() as f64;
        if ratio > best.constant {
            best = TemperedWitness {
                constant: ratio,
                numerator: union.len() as u64,
                denominator: big.len() as u64,
                radius: n,
            };
        }
    }
    Ok(best)
}
