use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::disjoint::{certificate_holds, check_indexed, AUGMENTING_WORK_CAP};
use super::flow::{demand, shrink_by_flow, Admission, IncrementalShrinker};
use super::{check_hypotheses, compile, CompiledArray, CoveringError, TranslateArray, EXACT_FLOW_CELLS};
use crate::group::Element;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelectionOptions {
    /// Shuffled greedy passes tried after a first pass misses the coverage target.
    pub restarts: u32,
    pub seed: u64,
    /// Path-search budget per admission; exceeding it refuses the translate.
    pub work_cap: u64,
}

impl Default for SelectionOptions {
    fn default() -> Self {
        SelectionOptions { restarts: 16, seed: 0, work_cap: AUGMENTING_WORK_CAP }
    }
}

/// `F_{level,shape}·base`, counted from 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChosenTranslate {
    pub level: usize,
    pub shape: usize,
    pub base: Element,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelectionResult {
    pub chosen: Vec<ChosenTranslate>,
    pub epsilon: f64,
    /// `ε ≥ 1`: every family is `ε`-disjoint with empty shrinkings.
    pub vacuous: bool,
    pub covered: usize,
    pub ambient: usize,
    pub covered_fraction: f64,
    pub alpha: f64,
    /// `(α − δ^{1/4})·|F|`.
    pub target: f64,
    pub meets_target: bool,
    /// Greedy passes run, the first included.
    pub attempts: u32,
    /// Some admission ran out of path-search budget and was refused.
    pub work_cap_hit: bool,
    /// `Σ |F_{i,j}a|` over the chosen translates.
    pub sum_of_sizes: usize,
    /// Kept cells of each chosen translate, as indices into the sorted ambient set.
    #[serde(skip)]
    pub witness: Vec<Vec<u32>>,
    #[serde(skip)]
    picked: Vec<usize>,
}

struct Pass {
    picked: Vec<usize>,
    witness: Vec<Vec<u32>>,
    covered: usize,
    work_cap_hit: bool,
}

fn greedy_pass(c: &CompiledArray, order: &[usize], epsilon: f64, work_cap: u64) -> Pass {
    let vacuous = epsilon >= 1.0;
    let mut shrinker = IncrementalShrinker::new(c.universe, epsilon, work_cap);
    let mut covered = vec![false; c.universe];
    let mut picked = Vec::new();
    let mut work_cap_hit = false;
    for &idx in order {
        let cells = &c.translates[idx].cells;
        let admitted = vacuous
            || match shrinker.try_admit(cells) {
                Admission::Admitted => true,
                Admission::Rejected => false,
                Admission::WorkCapExceeded => {
                    work_cap_hit = true;
                    false
                }
            };
        if admitted {
            picked.push(idx);
            for &x in cells {
                covered[x as usize] = true;
            }
        }
    }
    let witness = if vacuous { vec![Vec::new(); picked.len()] } else { shrinker.shrinkings() };
    Pass { picked, witness, covered: covered.iter().filter(|&&b| b).count(), work_cap_hit }
}

/// Translate indices level by level from the top, larger shapes first.
fn level_blocks(t: &TranslateArray, c: &CompiledArray) -> Vec<Vec<usize>> {
    let mut blocks = vec![Vec::new(); t.levels()];
    for (idx, tr) in c.translates.iter().enumerate() {
        blocks[tr.level].push(idx);
    }
    for block in &mut blocks {
        block.sort_by_key(|&idx| {
            let tr = &c.translates[idx];
            (std::cmp::Reverse(t.shapes()[tr.level][tr.shape].len()), tr.shape, tr.base)
        });
    }
    blocks.reverse();
    blocks
}

pub fn select_subfamily(t: &TranslateArray) -> Result<SelectionResult, CoveringError> {
    select_subfamily_with(t, &SelectionOptions::default())
}

/// Greedy selection of a `10·δ^{1/4}`-disjoint subfamily, with seeded restarts
/// when the coverage target is missed. A miss after all restarts is reported, not hidden.
pub fn select_subfamily_with(t: &TranslateArray, options: &SelectionOptions) -> Result<SelectionResult, CoveringError> {
    let report = check_hypotheses(t)?;
    if !report.all_hold {
        return Err(CoveringError::HypothesisViolated(report.first_failure().unwrap_or_default()));
    }
    let compiled = compile(t)?.expect("containment was checked");
    let epsilon = t.epsilon();
    let target = report.coverage_target;
    let blocks = level_blocks(t, &compiled);
    let order: Vec<usize> = blocks.concat();
    let mut best = greedy_pass(&compiled, &order, epsilon, options.work_cap);
    let mut attempts = 1;
    let mut work_cap_hit = best.work_cap_hit;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    while (best.covered as f64) < target && attempts <= options.restarts {
        let mut shuffled = blocks.clone();
        for block in &mut shuffled {
            block.shuffle(&mut rng);
        }
        let pass = greedy_pass(&compiled, &shuffled.concat(), epsilon, options.work_cap);
        attempts += 1;
        work_cap_hit |= pass.work_cap_hit;
        if pass.covered > best.covered {
            best = pass;
        }
    }
    let chosen: Vec<ChosenTranslate> = best
        .picked
        .iter()
        .map(|&idx| {
            let tr = &compiled.translates[idx];
            ChosenTranslate { level: tr.level + 1, shape: tr.shape + 1, base: t.bases()[tr.level][tr.shape][tr.base].clone() }
        })
        .collect();
    let ambient = t.ambient().len();
    Ok(SelectionResult {
        chosen,
        epsilon,
        vacuous: epsilon >= 1.0,
        covered: best.covered,
        ambient,
        covered_fraction: best.covered as f64 / ambient.max(1) as f64,
        alpha: report.alpha,
        target,
        meets_target: best.covered as f64 >= target,
        attempts,
        work_cap_hit,
        sum_of_sizes: best.picked.iter().map(|&i| compiled.translates[i].cells.len()).sum(),
        witness: best.witness,
        picked: best.picked,
    })
}

/// An independent re-check of a selection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelectionAudit {
    /// The witness shrinkings are disjoint and large enough.
    pub certificate_holds: bool,
    /// Max-flow re-decision on small families.
    pub flow_recheck: Option<bool>,
    /// `|∪𝓕|` recomputed by set union.
    pub covered: usize,
    pub coverage_matches: bool,
    pub meets_target: bool,
    /// `Σ|F_{i,j}a| ≤ |∪𝓕| / (1 − ε)`, when `ε < 1`.
    pub size_bound_holds: Option<bool>,
    pub passed: bool,
}

pub fn verify_selection(t: &TranslateArray, result: &SelectionResult) -> Result<SelectionAudit, CoveringError> {
    let compiled = compile(t)?.map_err(|_| CoveringError::HypothesisViolated("a translate leaves F".into()))?;
    let family: Vec<Vec<u32>> = result
        .picked
        .iter()
        .map(|&i| {
            let mut v = compiled.translates[i].cells.clone();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let eps = result.epsilon;
    let certificate = eps >= 1.0 || certificate_holds(compiled.universe, &family, &result.witness, eps);
    let total: usize = family.iter().map(Vec::len).sum();
    let flow_recheck = (eps < 1.0 && total <= EXACT_FLOW_CELLS).then(|| {
        let demands: Vec<usize> = family.iter().map(|s| demand(s.len(), eps)).collect();
        shrink_by_flow(compiled.universe, &family, &demands).is_some()
    });
    let mut hit = vec![false; compiled.universe];
    for s in &family {
        for &c in s {
            hit[c as usize] = true;
        }
    }
    let covered = hit.iter().filter(|&&b| b).count();
    let size_bound_holds = (eps < 1.0).then(|| result.sum_of_sizes as f64 <= covered as f64 / (1.0 - eps) + 1e-9);
    let meets_target = covered as f64 >= result.target;
    let coverage_matches = covered == result.covered;
    let passed = certificate
        && flow_recheck != Some(false)
        && coverage_matches
        && meets_target
        && size_bound_holds != Some(false);
    Ok(SelectionAudit { certificate_holds: certificate, flow_recheck, covered, coverage_matches, meets_target, size_bound_holds, passed })
}

/// Largest `|∪𝓕|` over all `ε`-disjoint subfamilies, by exhaustive search.
pub fn exhaustive_best_coverage(t: &TranslateArray, max_translates: usize) -> Result<usize, CoveringError> {
    let compiled = compile(t)?.map_err(|_| CoveringError::HypothesisViolated("a translate leaves F".into()))?;
    let n = compiled.translates.len();
    if n > max_translates.min(24) || compiled.universe > 64 {
        return Err(CoveringError::ResourceCap { what: "exhaustive subfamilies".into(), needed: n, cap: max_translates.min(24) });
    }
    let masks: Vec<u64> = compiled.translates.iter().map(|tr| tr.cells.iter().fold(0u64, |m, &c| m | (1 << c))).collect();
    let eps = t.epsilon();
    let mut best = 0usize;
    for subset in 1u32..(1u32 << n) {
        let union = (0..n).filter(|&i| subset >> i & 1 == 1).fold(0u64, |m, i| m | masks[i]);
        let cover = union.count_ones() as usize;
        if cover <= best {
            continue;
        }
        let family: Vec<Vec<u32>> =
            (0..n).filter(|&i| subset >> i & 1 == 1).map(|i| compiled.translates[i].cells.clone()).collect();
        if eps >= 1.0 || check_indexed(compiled.universe, &family, eps, u64::MAX).0.is_some() {
            best = cover;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::SetDescriptor;
    use crate::group::GroupSpec;

    fn interval(lo: i64, hi: i64) -> Vec<Element> {
        SetDescriptor::Interval { lo, hi }.resolve(&GroupSpec::lattice(1)).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Element> {
        v.iter().copied().map(Element::integer).collect()
    }

    #[test]
    fn disjoint_translates_cover_trivially() {
        // Nine disjoint translates of [0, 9] cover 90% of [0, 99].
        let bases = ints(&(0..9).map(|k| 10 * k).collect::<Vec<_>>());
        let t = TranslateArray::new(GroupSpec::lattice(1), vec![vec![interval(0, 9)]], vec![vec![bases]], interval(0, 99), 0.005, 2.0, vec![])
            .unwrap();
        let r = select_subfamily(&t).unwrap();
        assert_eq!(r.covered, 90);
        assert!(r.meets_target);
        assert!(verify_selection(&t, &r).unwrap().passed);
    }

    #[test]
    fn tight_epsilon_refuses_heavy_overlap() {
        let bases = ints(&[0, 1, 2, 10]);
        let t = TranslateArray::new(GroupSpec::lattice(1), vec![vec![interval(0, 9)]], vec![vec![bases]], interval(0, 19), 1e-8, 2.0, vec![])
            .unwrap();
        let r = select_subfamily(&t).unwrap();
        assert!(!r.vacuous);
        let bases: Vec<i64> = r.chosen.iter().map(|c| c.base.as_integer().unwrap()).collect();
        assert_eq!(bases, vec![0, 10]);
        let audit = verify_selection(&t, &r).unwrap();
        assert!(audit.passed && audit.flow_recheck == Some(true));
        assert_eq!(exhaustive_best_coverage(&t, 20).unwrap(), 20);
    }

    #[test]
    fn hypothesis_violation_is_an_error() {
        let t = TranslateArray::new(GroupSpec::lattice(1), vec![vec![interval(0, 9)]], vec![vec![ints(&[15])]], interval(0, 19), 0.005, 2.0, vec![])
            .unwrap();
        assert!(matches!(select_subfamily(&t), Err(CoveringError::HypothesisViolated(_))));
    }
}
