//! Locally admissible pattern counting for SFTs given by forbidden patterns.
//!
//! Cells are processed in window order while a frontier of still-needed cells
//! is carried as the state, so the work scales with the frontier width rather
//! than with the number of patterns.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use super::{Pattern, ProductGroup, SubshiftError, Symbol, Window};

/// An occurrence site of a forbidden pattern inside a window: `(cell index, letter)`.
type Placement = Vec<(usize, Symbol)>;

/// Frontier maps larger than this are expanded in parallel.
const PARALLEL_THRESHOLD: usize = 2048;

fn placements(group: &ProductGroup, forbidden: &[Pattern], window: &Window) -> Vec<Placement> {
    let mut out = Vec::new();
    for p in forbidden {
        let cells: Vec<_> = p.iter().collect();
        let (first, _) = cells[0];
        let first_inv = group.inv(first);
        for w in window.cells() {
            // Occurrence at h means x_{c·h} = P_c; anchor the first cell at w.
            let h = group.mul(&first_inv, w);
            let placed: Option<Placement> = cells
                .iter()
                .map(|(c, a)| window.position(&group.mul(c, &h)).map(|i| (i, *a)))
                .collect();
            if let Some(pl) = placed {
                out.push(pl);
            }
        }
    }
    out
}

/// Number of letter assignments on `window` containing no occurrence of a
/// forbidden pattern, returned as `(count over constrained cells, free cells)`.
pub(crate) fn count_locally_admissible(
    group: &ProductGroup,
    alphabet_size: usize,
    forbidden: &[Pattern],
    window: &Window,
    max_states: usize,
) -> Result<(BigUint, u64), SubshiftError> {
    let placements = placements(group, forbidden, window);
    let n = window.len();
    let mut last_use = vec![None::<usize>; n];
    let mut constrained = vec![false; n];
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, pl) in placements.iter().enumerate() {
        let top = pl.iter().map(|&(i, _)| i).max().expect("patterns are nonempty");
        checks[top].push(k);
        for &(i, _) in pl {
            constrained[i] = true;
            last_use[i] = Some(last_use[i].map_or(top, |t: usize| t.max(top)));
        }
    }
    let free = constrained.iter().filter(|&&c| !c).count() as u64;

    // Frontier: constrained cells seen so far whose last check is still ahead.
    let mut frontier: Vec<usize> = Vec::new();
    let mut states: HashMap<Vec<Symbol>, BigUint> = HashMap::from([(Vec::new(), BigUint::from(1u32))]);
    for cell in 0..n {
        if !constrained[cell] {
            continue;
        }
        let mut extended = frontier.clone();
        extended.push(cell);
        let slot: HashMap<usize, usize> = extended.iter().enumerate().map(|(s, &c)| (c, s)).collect();
        let local: Vec<Vec<(usize, Symbol)>> = checks[cell]
            .iter()
            .map(|&k| placements[k].iter().map(|&(i, a)| (slot[&i], a)).collect())
            .collect();
        let keep: Vec<usize> = (0..extended.len()).filter(|&s| last_use[extended[s]] != Some(cell)).collect();

        let expand = |(state, count): (&Vec<Symbol>, &BigUint)| {
            let mut out = Vec::with_capacity(alphabet_size);
            let mut full = state.clone();
            full.push(0);
            for a in 0..alphabet_size as Symbol {
                *full.last_mut().expect("pushed above") = a;
                let hit = local.iter().any(|pl| pl.iter().all(|&(s, b)| full[s] == b));
                if !hit {
                    let key: Vec<Symbol> = keep.iter().map(|&s| full[s]).collect();
                    out.push((key, count.clone()));
                }
            }
            out
        };
        let merge = |mut acc: HashMap<Vec<Symbol>, BigUint>, (k, v): (Vec<Symbol>, BigUint)| {
            *acc.entry(k).or_insert_with(BigUint::zero) += v;
            acc
        };
        states = if states.len() >= PARALLEL_THRESHOLD {
            // Merging by key is order independent, so the result is schedule independent.
            states
                .par_iter()
                .flat_map_iter(expand)
                .fold(HashMap::new, merge)
                .reduce(HashMap::new, |mut a, b| {
                    for (k, v) in b {
                        *a.entry(k).or_insert_with(BigUint::zero) += v;
                    }
                    a
                })
        } else {
            states.iter().flat_map(expand).fold(HashMap::new(), merge)
        };
        if states.len() > max_states {
            return Err(SubshiftError::ResourceCap {
                what: "admissibility search frontier".into(),
                needed: states.len(),
                cap: max_states,
            });
        }
        frontier = keep.iter().map(|&s| extended[s]).collect();
    }
    let total = states.into_values().fold(BigUint::zero(), |acc, v| acc + v);
    Ok((total, free))
}
