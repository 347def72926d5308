use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{compile, is_integers, CoveringError, TranslateArray};
use crate::group::{Element, GroupSpec};

/// One inequality `lhs ≤ rhs`; `level` and `shape` count from 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub level: usize,
    pub shape: usize,
    pub lhs: usize,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub delta_in_range: bool,
    /// First translate `(level, shape, base)` leaving the ambient set, counted from 1.
    pub containment_failure: Option<(usize, usize, Element)>,
    /// `|⋃_{k'<k} F_{i,k'}⁻¹ F_{i,k}| ≤ C·|F_{i,k}|` for `k ≥ 2`.
    pub per_level: Vec<InequalityCheck>,
    /// `|⋃_{i'<i} D·F_{i',*}⁻¹ F_{i,k}| ≤ (1+δ)·|F_{i,k}|`.
    pub cross_level: Vec<InequalityCheck>,
    /// `min_i |D·A_{i,*}| / |F|`.
    pub alpha: f64,
    /// Level attaining `alpha`, counted from 1.
    pub alpha_level: usize,
    pub epsilon: f64,
    /// `(α − δ^{1/4})·|F|`.
    pub coverage_target: f64,
    pub all_hold: bool,
}

impl HypothesisReport {
    /// A one-line description of the first failure.
    pub fn first_failure(&self) -> Option<String> {
        if !self.delta_in_range {
            return Some("δ is not in (0, 1/100)".into());
        }
        if let Some((i, j, a)) = &self.containment_failure {
            return Some(format!("F_{{{i},{j}}}·{a} leaves F"));
        }
        let fail = |name: &str, c: &InequalityCheck| format!("{name} at ({}, {}): {} > {}", c.level, c.shape, c.lhs, c.rhs);
        if let Some(c) = self.per_level.iter().find(|c| !c.holds) {
            return Some(fail("per-level bound", c));
        }
        self.cross_level.iter().find(|c| !c.holds).map(|c| fail("cross-level bound", c))
    }
}

/// `|{x·y : x ∈ xs, y ∈ ys}|`.
pub(crate) fn product_size(group: &GroupSpec, xs: &[Element], ys: &[Element]) -> usize {
    if xs.is_empty() || ys.is_empty() {
        return 0;
    }
    if is_integers(group) {
        let a: Vec<i64> = xs.iter().map(|e| e.as_integer().expect("elements of Z")).collect();
        let b: Vec<i64> = ys.iter().map(|e| e.as_integer().expect("elements of Z")).collect();
        let (amin, amax) = (a.iter().min().unwrap(), a.iter().max().unwrap());
        let (bmin, bmax) = (b.iter().min().unwrap(), b.iter().max().unwrap());
        let span = (amax + bmax - amin - bmin + 1) as usize;
        if span <= 1 << 26 {
            let mut hit = vec![false; span];
            let base = amin + bmin;
            for &x in &a {
                for &y in &b {
                    hit[(x + y - base) as usize] = true;
                }
            }
            return hit.iter().filter(|&&h| h).count();
        }
        return a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect::<HashSet<i64>>().len();
    }
    xs.iter().flat_map(|x| ys.iter().map(move |y| group.multiply_unchecked(x, y))).collect::<HashSet<Element>>().len()
}

fn union_of_inverses<'a>(group: &GroupSpec, sets: impl Iterator<Item = &'a Vec<Element>>) -> Vec<Element> {
    let mut out: Vec<Element> = sets.flatten().map(|g| group.inverse_unchecked(g)).collect();
    out.sort();
    out.dedup();
    out
}

/// Evaluates every hypothesis inequality exactly and computes `α`.
pub fn check_hypotheses(t: &TranslateArray) -> Result<HypothesisReport, CoveringError> {
    let group = t.group();
    let delta_in_range = t.delta() > 0.0 && t.delta() < 0.01;
    let containment_failure = match compile(t)? {
        Ok(_) => None,
        Err((i, j, b)) => Some((i + 1, j + 1, t.bases()[i][j][b].clone())),
    };

    // Jobs (level, shape, left factor, bound) for both families of inequalities.
    let mut jobs: Vec<(bool, usize, usize, Vec<Element>, f64)> = Vec::new();
    for (i, shapes) in t.shapes().iter().enumerate() {
        for k in 1..shapes.len() {
            let u = union_of_inverses(group, shapes[..k].iter());
            jobs.push((true, i, k, u, t.c() * shapes[k].len() as f64));
        }
        let lower = union_of_inverses(group, t.shapes()[..i].iter().flatten());
        let mut v: Vec<Element> =
            t.d().iter().flat_map(|d| lower.iter().map(move |x| group.multiply_unchecked(d, x))).collect();
        v.sort();
        v.dedup();
        for (k, shape) in shapes.iter().enumerate() {
            jobs.push((false, i, k, v.clone(), (1.0 + t.delta()) * shape.len() as f64));
        }
    }
    let checks: Vec<(bool, InequalityCheck)> = jobs
        .into_par_iter()
        .map(|(per_level, i, k, left, rhs)| {
            let lhs = product_size(group, &left, &t.shapes()[i][k]);
            let holds = lhs as f64 <= rhs * (1.0 + 1e-12);
            (per_level, InequalityCheck { level: i + 1, shape: k + 1, lhs, rhs, holds })
        })
        .collect();
    let (per, cross): (Vec<_>, Vec<_>) = checks.into_iter().partition(|(p, _)| *p);
    let per_level: Vec<InequalityCheck> = per.into_iter().map(|(_, c)| c).collect();
    let cross_level: Vec<InequalityCheck> = cross.into_iter().map(|(_, c)| c).collect();

    let size = t.ambient().len().max(1) as f64;
    let (alpha_level, alpha) = t
        .bases()
        .par_iter()
        .map(|level| {
            let mut a: Vec<Element> = level.iter().flatten().cloned().collect();
            a.sort();
            a.dedup();
            product_size(group, t.d(), &a) as f64 / size
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, a)| if a < best.1 { (i, a) } else { best });
    let all_hold = delta_in_range
        && containment_failure.is_none()
        && per_level.iter().all(|c| c.holds)
        && cross_level.iter().all(|c| c.holds);
    Ok(HypothesisReport {
        delta_in_range,
        containment_failure,
        per_level,
        cross_level,
        alpha,
        alpha_level: alpha_level + 1,
        epsilon: t.epsilon(),
        coverage_target: (alpha - t.delta().powf(0.25)) * t.ambient().len() as f64,
        all_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::SetDescriptor;

    fn interval(lo: i64, hi: i64) -> Vec<Element> {
        SetDescriptor::Interval { lo, hi }.resolve(&GroupSpec::lattice(1)).unwrap()
    }

    #[test]
    fn single_disjoint_level() {
        let t = TranslateArray::new(
            GroupSpec::lattice(1),
            vec![vec![interval(0, 4)]],
            vec![vec![vec![Element::integer(0), Element::integer(10)]]],
            interval(0, 19),
            0.005,
            2.0,
            vec![],
        )
        .unwrap();
        let r = check_hypotheses(&t).unwrap();
        assert!(r.all_hold);
        assert_eq!(r.alpha, 2.0 / 20.0);
        assert!(r.per_level.is_empty());
        assert_eq!(r.cross_level[0].lhs, 0);
    }

    #[test]
    fn nested_balls_satisfy_the_per_level_bound_with_two() {
        let z = GroupSpec::lattice(1);
        let radii = [1u32, 3, 7, 20];
        let shapes: Vec<Vec<Element>> = radii.iter().map(|&r| SetDescriptor::Ball { radius: r }.resolve(&z).unwrap()).collect();
        let t = TranslateArray::new(z, vec![shapes], vec![vec![vec![]; 4]], interval(-100, 100), 0.005, 2.0, vec![]).unwrap();
        let r = check_hypotheses(&t).unwrap();
        for (c, k) in r.per_level.iter().zip(1..) {
            // B(r_{k-1})⁻¹B(r_k) = B(r_{k-1} + r_k), an interval of 2(r_{k-1} + r_k) + 1 points.
            let (a, b) = (i64::from(radii[k - 1]), i64::from(radii[k]));
            assert_eq!(c.lhs as i64, 2 * (a + b) + 1);
            assert!(c.holds);
        }
    }

    #[test]
    fn containment_and_cross_level_failures() {
        let t = TranslateArray::new(
            GroupSpec::lattice(1),
            vec![vec![interval(0, 4)], vec![interval(0, 9)]],
            vec![vec![vec![Element::integer(17)]], vec![vec![Element::integer(0)]]],
            interval(0, 19),
            0.005,
            2.0,
            vec![],
        )
        .unwrap();
        let r = check_hypotheses(&t).unwrap();
        assert!(!r.all_hold);
        assert_eq!(r.containment_failure, Some((1, 1, Element::integer(17))));
        // [-4, 0] + [0, 9] has 14 points against (1 + δ)·10.
        assert_eq!(r.cross_level[1].lhs, 14);
        assert!(!r.cross_level[1].holds);
        assert!(r.first_failure().unwrap().contains("leaves"));
    }

    #[test]
    fn product_sizes_agree_across_paths() {
        let z = GroupSpec::lattice(1);
        let a = interval(-3, 2);
        let b = vec![Element::integer(0), Element::integer(7)];
        assert_eq!(product_size(&z, &a, &b), 12);
        let d = GroupSpec::infinite_dihedral();
        let ball = d.ball(2).unwrap();
        assert_eq!(product_size(&d, &ball, &ball), d.ball(4).unwrap().len());
    }
}
