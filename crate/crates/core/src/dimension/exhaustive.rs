use std::collections::HashMap;

use super::DimensionError;
use crate::group::Element;
use crate::subshift::{dynamical_ball_window, PatternCounter, ShiftKind, Symbol, Window};

/// Default cell budget for the exhaustive cover search.
pub const EXHAUSTIVE_CELL_CAP: usize = 12;

/// Scale-`2^{-M}` Hausdorff dimension from an optimal search over cylinder covers.
///
/// Covers may mix cylinders of every depth `r` with `M ≤ r ≤ R`, where `R` is the
/// deepest window `W(R)` with at most `max_cells` cells, and a depth-`r` cylinder is
/// charged `2^{-(r+1)s}`. Restricting covers and using the diameter upper bound can
/// only raise the content, so the result is an upper bound on `dim_H(X, d_F, 2^{-M})`
/// that is exact whenever the optimum is attained above depth `R`.
pub fn hdim_scale_exhaustive(
    counter: &PatternCounter,
    f: &[Element],
    depth: u32,
    max_cells: usize,
) -> Result<f64, DimensionError> {
    let group = counter.group();
    let ident = [group.left_spec().identity()];
    let f = if f.is_empty() { &ident[..] } else { f };
    let mut windows: Vec<Window> = Vec::new();
    let mut r = depth;
    loop {
        let w = dynamical_ball_window(group, f, r)?;
        if w.len() > max_cells {
            break;
        }
        let saturated = windows.last().is_some_and(|prev: &Window| prev.len() == w.len());
        windows.push(w);
        if saturated {
            // A finite group has reached its final window; deeper cylinders are the same sets.
            break;
        }
        r += 1;
    }
    if windows.is_empty() {
        return Err(DimensionError::Precondition(format!("W({depth}) has more than {max_cells} cells")));
    }
    let deepest = windows.last().expect("nonempty");
    let patterns = admissible_patterns(counter, deepest)?;
    if patterns.is_empty() {
        return Err(DimensionError::EmptySubshift);
    }
    // Positions of each shallower window inside the deepest one.
    let projections: Vec<Vec<usize>> = windows
        .iter()
        .map(|w| w.cells().map(|c| deepest.position(c).expect("windows are nested")).collect())
        .collect();
    let depths: Vec<u32> = (0..windows.len() as u32).map(|i| depth + i).collect();
    let finite_tower = windows.len() >= 2 && windows[windows.len() - 1].len() == windows[windows.len() - 2].len();
    let content = |s: f64| -> f64 {
        let last = windows.len() - 1;
        let leaf_cost = if finite_tower { 0.0 } else { (-(f64::from(depths[last]) + 1.0) * s).exp2() };
        let mut values: HashMap<Vec<Symbol>, f64> = HashMap::new();
        for p in &patterns {
            values.insert(p.clone(), leaf_cost);
        }
        for level in (0..last).rev() {
            let cost = (-(f64::from(depths[level]) + 1.0) * s).exp2();
            let mut parents: HashMap<Vec<Symbol>, f64> = HashMap::new();
            for (child, v) in &values {
                let key: Vec<Symbol> = restrict(child, &projections[level], &projections[level + 1]);
                *parents.entry(key).or_default() += v;
            }
            values = parents.into_iter().map(|(k, v)| (k, v.min(cost))).collect();
        }
        values.values().sum()
    };
    // The content is nonincreasing in s.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while content(hi) >= 1.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Ok(f64::INFINITY);
        }
    }
    if content(lo) < 1.0 {
        return Ok(0.0);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if content(mid) >= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Restricts a pattern given on the positions `child_pos` (of the deepest window) to `parent_pos`.
fn restrict(child: &[Symbol], parent_pos: &[usize], child_pos: &[usize]) -> Vec<Symbol> {
    let index: HashMap<usize, usize> = child_pos.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    parent_pos.iter().map(|p| child[index[p]]).collect()
}

/// Globally admissible patterns on `window`, for full shifts and fiber SFTs.
fn admissible_patterns(counter: &PatternCounter, window: &Window) -> Result<Vec<Vec<Symbol>>, DimensionError> {
    let k = counter.spec().alphabet().len() as Symbol;
    let words_by_slice: Vec<Vec<Vec<Symbol>>> = match counter.spec().kind() {
        ShiftKind::FullShift => vec![all_words(k, window.len())],
        ShiftKind::FiberSft { .. } => {
            let fiber = counter.fiber().expect("fiber counter");
            // Slices are intervals in window order, so the pattern is a concatenation of words.
            let mut lengths: Vec<usize> = Vec::new();
            let mut prev: Option<&Element> = None;
            for c in window.cells() {
                if prev == Some(&c.left) {
                    *lengths.last_mut().expect("started") += 1;
                } else {
                    lengths.push(1);
                }
                prev = Some(&c.left);
            }
            lengths.iter().map(|&len| fiber_language(fiber, len)).collect()
        }
        ShiftKind::GeneralSft { .. } => {
            return Err(DimensionError::Precondition("exhaustive covers need a full shift or fiber SFT".into()))
        }
    };
    let mut out: Vec<Vec<Symbol>> = vec![Vec::new()];
    for words in &words_by_slice {
        out = out
            .iter()
            .flat_map(|p| {
                words.iter().map(move |w| {
                    let mut q = p.clone();
                    q.extend_from_slice(w);
                    q
                })
            })
            .collect();
    }
    Ok(out)
}

fn all_words(k: Symbol, len: usize) -> Vec<Vec<Symbol>> {
    let mut out: Vec<Vec<Symbol>> = vec![Vec::new()];
    for _ in 0..len {
        out = out.iter().flat_map(|w| (0..k).map(move |a| [w.as_slice(), &[a]].concat())).collect();
    }
    out
}

/// Words of length `len` that occur in some bi-infinite point of the fiber SFT.
fn fiber_language(fiber: &crate::subshift::FiberCounter, len: usize) -> Vec<Vec<Symbol>> {
    let states = fiber.states();
    let succ = fiber.successors();
    let mut frontier: Vec<(Vec<Symbol>, usize)> = states.iter().cloned().zip(0..).collect();
    while frontier.iter().any(|(w, _)| w.len() < len) {
        frontier = frontier
            .into_iter()
            .flat_map(|(w, s)| {
                if w.len() >= len {
                    vec![(w, s)]
                } else {
                    succ[s]
                        .iter()
                        .map(|&t| {
                            let mut v = w.clone();
                            v.push(*states[t].last().expect("states are nonempty"));
                            (v, t)
                        })
                        .collect()
                }
            })
            .collect();
    }
    let mut words: Vec<Vec<Symbol>> = frontier.into_iter().map(|(w, _)| w[..len].to_vec()).collect();
    words.sort();
    words.dedup();
    words
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::hdim_scale_lower_mass;
    use crate::group::GroupSpec;
    use crate::info::MeasureSpec;
    use crate::subshift::{Alphabet, ProductGroup, SubshiftSpec};

    #[test]
    fn uniform_full_shift_over_integers_times_two() {
        let g = ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::cyclic(2));
        let full = SubshiftSpec::full(Alphabet::numbered(2));
        let c = PatternCounter::new(&g, &full).unwrap();
        // |W(r)| = 1, 6, 10 for r = 0, 1, 2; the minimum of |W(r)|/(r+1) sits at r = M.
        assert!((hdim_scale_exhaustive(&c, &[], 0, 12).unwrap() - 1.0).abs() < 1e-9);
        assert!((hdim_scale_exhaustive(&c, &[], 1, 12).unwrap() - 3.0).abs() < 1e-9);
        let mass = hdim_scale_lower_mass(&c, &MeasureSpec::uniform(2), &[], 1).unwrap();
        assert!((mass.value - 3.0).abs() < 1e-9);
    }

    #[test]
    fn golden_mean_language() {
        let fiber = crate::subshift::FiberCounter::new(2, &[vec![1, 1]]).unwrap();
        for len in 1..8 {
            assert_eq!(fiber_language(&fiber, len).len() as u64, fib(len + 2));
        }
    }

    fn fib(n: usize) -> u64 {
        let (mut a, mut b) = (0u64, 1u64);
        for _ in 0..n {
            (a, b) = (b, a + b);
        }
        a
    }

    #[test]
    fn cell_cap_is_reported() {
        let g = ProductGroup::from_factors(GroupSpec::lattice(1), GroupSpec::lattice(1));
        let full = SubshiftSpec::full(Alphabet::numbered(2));
        let c = PatternCounter::new(&g, &full).unwrap();
        assert!(hdim_scale_exhaustive(&c, &[], 2, 12).is_err());
    }
}
