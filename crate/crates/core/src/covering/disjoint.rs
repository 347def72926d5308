use std::collections::HashMap;

use serde::Serialize;

use super::flow::{demand, shrink_by_flow, shrink_first_fit, Admission, IncrementalShrinker};
use super::CoveringError;
use crate::group::Element;

/// Families with at most this many cells in total are decided by max-flow.
pub const EXACT_FLOW_CELLS: usize = 1000;

/// Path-search budget for large families before falling back to first-fit.
pub(crate) const AUGMENTING_WORK_CAP: u64 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DisjointnessMethod {
    MaxFlow,
    Augmenting,
    /// Sound when it answers yes; a no is inconclusive.
    FirstFit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisjointnessWitness {
    pub disjoint: bool,
    pub method: DisjointnessMethod,
    pub heuristic: bool,
    /// Mutually disjoint `Aᵢ' ⊂ Aᵢ` with `|Aᵢ'| ≥ (1−ε)|Aᵢ|` when found.
    pub shrinkings: Option<Vec<Vec<Element>>>,
}

/// Decides whether the family is `ε`-disjoint, returning witness shrinkings.
///
/// Exact by max-flow up to [`EXACT_FLOW_CELLS`] cells and by augmenting paths above;
/// if the path search exceeds its budget the first-fit answer is returned, flagged.
pub fn epsilon_disjoint_check(family: &[Vec<Element>], epsilon: f64) -> Result<DisjointnessWitness, CoveringError> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(CoveringError::InvalidInstance(format!("ε = {epsilon} is not in [0, 1)")));
    }
    let mut index: HashMap<&Element, u32> = HashMap::new();
    let mut cells: Vec<&Element> = Vec::new();
    let indexed: Vec<Vec<u32>> = family
        .iter()
        .map(|set| {
            let mut v: Vec<u32> = set
                .iter()
                .map(|g| {
                    *index.entry(g).or_insert_with(|| {
                        cells.push(g);
                        (cells.len() - 1) as u32
                    })
                })
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let (shrinkings, method) = check_indexed(cells.len(), &indexed, epsilon, AUGMENTING_WORK_CAP);
    Ok(DisjointnessWitness {
        disjoint: shrinkings.is_some(),
        method,
        heuristic: method == DisjointnessMethod::FirstFit,
        shrinkings: shrinkings.map(|sh| sh.into_iter().map(|s| s.into_iter().map(|c| cells[c as usize].clone()).collect()).collect()),
    })
}

pub(crate) fn check_indexed(
    universe: usize,
    family: &[Vec<u32>],
    epsilon: f64,
    work_cap: u64,
) -> (Option<Vec<Vec<u32>>>, DisjointnessMethod) {
    let demands: Vec<usize> = family.iter().map(|s| demand(s.len(), epsilon)).collect();
    let total: usize = family.iter().map(Vec::len).sum();
    if total <= EXACT_FLOW_CELLS {
        return (shrink_by_flow(universe, family, &demands), DisjointnessMethod::MaxFlow);
    }
    let mut inc = IncrementalShrinker::new(universe, epsilon, work_cap);
    for set in family {
        match inc.try_admit(set) {
            Admission::Admitted => {}
            Admission::Rejected => return (None, DisjointnessMethod::Augmenting),
            Admission::WorkCapExceeded => {
                return (shrink_first_fit(universe, family, &demands), DisjointnessMethod::FirstFit);
            }
        }
    }
    (Some(inc.shrinkings()), DisjointnessMethod::Augmenting)
}

/// Checks that `shrinkings` certify `ε`-disjointness of `family`.
pub(crate) fn certificate_holds(universe: usize, family: &[Vec<u32>], shrinkings: &[Vec<u32>], epsilon: f64) -> bool {
    if family.len() != shrinkings.len() {
        return false;
    }
    let mut used = vec![false; universe];
    for (set, kept) in family.iter().zip(shrinkings) {
        if (kept.len() as f64) < (1.0 - epsilon) * set.len() as f64 - 1e-9 {
            return false;
        }
        for &c in kept {
            if used[c as usize] || set.binary_search(&c).is_err() {
                return false;
            }
            used[c as usize] = true;
        }
    }
    true
}
