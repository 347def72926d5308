//! An executable form of the disjoint-subfamily covering lemma for translate arrays.

mod disjoint;
mod flow;
mod generate;
mod hypotheses;
mod select;

pub use disjoint::{epsilon_disjoint_check, DisjointnessMethod, DisjointnessWitness, EXACT_FLOW_CELLS};
pub use generate::{generate_instance, sample_params, InstanceParams, DELTA_MIX};
pub use hypotheses::{check_hypotheses, HypothesisReport, InequalityCheck};
pub use select::{
    exhaustive_best_coverage, select_subfamily, select_subfamily_with, verify_selection, ChosenTranslate,
    SelectionAudit, SelectionOptions, SelectionResult,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{Element, GroupError, GroupKind, GroupSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoveringError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("hypotheses fail: {0}")]
    HypothesisViolated(String),
    #[error("{what} needs {needed}, above the cap {cap}")]
    ResourceCap { what: String, needed: usize, cap: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A finite subset of a group given by a descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetDescriptor {
    /// The integers `lo..=hi`; only for ℤ.
    Interval { lo: i64, hi: i64 },
    /// The word ball of the given radius.
    Ball { radius: u32 },
    /// Listed integers; only for ℤ.
    Integers(Vec<i64>),
    Elements(Vec<Element>),
}

impl SetDescriptor {
    pub fn resolve(&self, group: &GroupSpec) -> Result<Vec<Element>, CoveringError> {
        let mut out = match self {
            SetDescriptor::Interval { lo, hi } => {
                if !is_integers(group) {
                    return Err(CoveringError::InvalidInstance(format!("intervals need Z, not {}", group.name())));
                }
                (*lo..=*hi).map(Element::integer).collect()
            }
            SetDescriptor::Ball { radius } => group.ball(*radius)?,
            SetDescriptor::Integers(v) => {
                if !is_integers(group) {
                    return Err(CoveringError::InvalidInstance(format!("integer lists need Z, not {}", group.name())));
                }
                v.iter().copied().map(Element::integer).collect()
            }
            SetDescriptor::Elements(v) => v.clone(),
        };
        out.sort();
        out.dedup();
        Ok(out)
    }
}

fn normalize(group: &GroupSpec, mut v: Vec<Element>) -> Result<Vec<Element>, CoveringError> {
    if let Some(g) = v.iter().find(|g| !group.contains(g)) {
        return Err(CoveringError::InvalidInstance(format!("{g} is not in {}", group.name())));
    }
    v.sort();
    v.dedup();
    Ok(v)
}

pub(crate) fn is_integers(group: &GroupSpec) -> bool {
    matches!(group.kind(), GroupKind::IntegerLattice(1))
}

/// Shapes `F_{i,j}` and base sets `A_{i,j}` inside an ambient set `F`.
///
/// Levels and shapes are stored 0-based; reports number them from 1.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslateArray {
    group: GroupSpec,
    shapes: Vec<Vec<Vec<Element>>>,
    bases: Vec<Vec<Vec<Element>>>,
    ambient: Vec<Element>,
    delta: f64,
    c: f64,
    d: Vec<Element>,
}

impl TranslateArray {
    /// Sets are sorted and deduplicated; `d` defaults to the identity when empty.
    pub fn new(
        group: GroupSpec,
        shapes: Vec<Vec<Vec<Element>>>,
        bases: Vec<Vec<Vec<Element>>>,
        ambient: Vec<Element>,
        delta: f64,
        c: f64,
        d: Vec<Element>,
    ) -> Result<TranslateArray, CoveringError> {
        if shapes.is_empty() {
            return Err(CoveringError::InvalidInstance("no levels".into()));
        }
        if shapes.len() != bases.len() || shapes.iter().zip(&bases).any(|(s, b)| s.len() != b.len() || s.is_empty()) {
            return Err(CoveringError::InvalidInstance("shape and base arrays differ in layout".into()));
        }
        if !(delta.is_finite() && delta > 0.0) || !(c.is_finite() && c > 0.0) {
            return Err(CoveringError::InvalidInstance("δ and C must be positive".into()));
        }
        let norm = |v: Vec<Element>| normalize(&group, v);
        let norm_array = |a: Vec<Vec<Vec<Element>>>| -> Result<Vec<Vec<Vec<Element>>>, CoveringError> {
            a.into_iter().map(|lvl| lvl.into_iter().map(norm).collect()).collect()
        };
        let shapes = norm_array(shapes)?;
        if shapes.iter().flatten().any(|s| s.is_empty()) {
            return Err(CoveringError::InvalidInstance("empty shape".into()));
        }
        let bases = norm_array(bases)?;
        let ambient = norm(ambient)?;
        let d = if d.is_empty() { vec![group.identity()] } else { norm(d)? };
        Ok(TranslateArray { group, shapes, bases, ambient, delta, c, d })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn levels(&self) -> usize {
        self.shapes.len()
    }

    pub fn shapes(&self) -> &[Vec<Vec<Element>>] {
        &self.shapes
    }

    pub fn bases(&self) -> &[Vec<Vec<Element>>] {
        &self.bases
    }

    pub fn ambient(&self) -> &[Element] {
        &self.ambient
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> &[Element] {
        &self.d
    }

    /// The disjointness parameter `10·δ^{1/4}` of the conclusion.
    pub fn epsilon(&self) -> f64 {
        10.0 * self.delta.powf(0.25)
    }

    /// Number of translates `F_{i,j}a`.
    pub fn translate_count(&self) -> usize {
        self.bases.iter().flatten().map(Vec::len).sum()
    }
}

/// Every translate `F_{i,j}a` as cell indices into the ambient set.
#[derive(Debug)]
pub(crate) struct CompiledArray {
    pub universe: usize,
    pub translates: Vec<CompiledTranslate>,
}

#[derive(Debug)]
pub(crate) struct CompiledTranslate {
    pub level: usize,
    pub shape: usize,
    pub base: usize,
    pub cells: Vec<u32>,
}

/// Cap on the total number of translate cells materialised at once.
pub const MAX_TRANSLATE_CELLS: usize = 50_000_000;

/// The inner error names the first translate `(level, shape, base)` leaving the ambient set.
pub(crate) fn compile(t: &TranslateArray) -> Result<Result<CompiledArray, (usize, usize, usize)>, CoveringError> {
    let total: usize = t.shapes.iter().zip(&t.bases).flat_map(|(s, b)| s.iter().zip(b)).map(|(s, b)| s.len() * b.len()).sum();
    if total > MAX_TRANSLATE_CELLS {
        return Err(CoveringError::ResourceCap { what: "translate cells".into(), needed: total, cap: MAX_TRANSLATE_CELLS });
    }
    let universe = t.ambient.len();
    let lookup = Lookup::new(t);
    let mut translates = Vec::with_capacity(t.translate_count());
    for (i, (shapes, bases)) in t.shapes.iter().zip(&t.bases).enumerate() {
        for (j, (shape, base)) in shapes.iter().zip(bases).enumerate() {
            for (b, a) in base.iter().enumerate() {
                match lookup.translate(shape, a) {
                    Some(cells) => translates.push(CompiledTranslate { level: i, shape: j, base: b, cells }),
                    None => return Ok(Err((i, j, b))),
                }
            }
        }
    }
    Ok(Ok(CompiledArray { universe, translates }))
}

/// Maps `f·a` to its index in the ambient set.
enum Lookup<'a> {
    Integers { lo: i64, index: Vec<u32> },
    Generic { group: &'a GroupSpec, index: std::collections::HashMap<&'a Element, u32> },
}

impl<'a> Lookup<'a> {
    fn new(t: &'a TranslateArray) -> Lookup<'a> {
        if is_integers(&t.group) && !t.ambient.is_empty() {
            let ints: Vec<i64> = t.ambient.iter().map(|e| e.as_integer().expect("elements of Z")).collect();
            let lo = ints[0];
            let hi = ints[ints.len() - 1];
            let mut index = vec![u32::MAX; (hi - lo + 1) as usize];
            for (k, x) in ints.iter().enumerate() {
                index[(x - lo) as usize] = k as u32;
            }
            Lookup::Integers { lo, index }
        } else {
            Lookup::Generic { group: &t.group, index: t.ambient.iter().zip(0u32..).collect() }
        }
    }

    fn translate(&self, shape: &[Element], a: &Element) -> Option<Vec<u32>> {
        match self {
            Lookup::Integers { lo, index } => {
                let a = a.as_integer().expect("elements of Z");
                shape
                    .iter()
                    .map(|f| {
                        let x = f.as_integer().expect("elements of Z") + a - lo;
                        if x < 0 || x as usize >= index.len() {
                            return None;
                        }
                        let k = index[x as usize];
                        (k != u32::MAX).then_some(k)
                    })
                    .collect()
            }
            Lookup::Generic { group, index } => {
                shape.iter().map(|f| index.get(&group.multiply_unchecked(f, a)).copied()).collect()
            }
        }
    }
}
