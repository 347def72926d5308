use serde::Serialize;

use super::{Cell, Pattern, ProductGroup, SubshiftError, Window};
use crate::group::{Element, GroupError, GrowthOracle};

/// Outcome of comparing two patterns on a finite box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distance {
    /// `d = 2^{-exponent}`.
    Dyadic { exponent: u32 },
    /// The patterns agree on every cell with `|g|_∞ ≤ depth`, so `d < 2^{-depth}`.
    Indistinguishable { depth: u32 },
}

impl Distance {
    /// The distance when it is determined, otherwise `None`.
    pub fn value(&self) -> Option<f64> {
        match *self {
            Distance::Dyadic { exponent } => Some((-f64::from(exponent)).exp2()),
            Distance::Indistinguishable { .. } => None,
        }
    }

    /// An upper bound valid in both cases.
    pub fn upper_bound(&self) -> f64 {
        match *self {
            Distance::Dyadic { exponent } => (-f64::from(exponent)).exp2(),
            Distance::Indistinguishable { depth } => (-f64::from(depth)).exp2(),
        }
    }
}

/// Which factor a shift acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Left,
    Right,
}

/// `σ_{1,g}` or `σ_{2,g}`: `(σ_{1,g}x)_{(g₁,g₂)} = x_{(g₁g, g₂)}`, and likewise on the right factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftAction {
    pub axis: Axis,
    pub element: Element,
}

impl ShiftAction {
    pub fn new(axis: Axis, element: Element) -> ShiftAction {
        ShiftAction { axis, element }
    }

    fn as_cell(&self, group: &ProductGroup) -> Result<Cell, SubshiftError> {
        let (factor, other) = match self.axis {
            Axis::Left => (group.left_spec(), group.right_spec()),
            Axis::Right => (group.right_spec(), group.left_spec()),
        };
        if !factor.contains(&self.element) {
            return Err(GroupError::NotAMember { element: self.element.to_string(), group: factor.name() }.into());
        }
        Ok(match self.axis {
            Axis::Left => Cell::new(self.element.clone(), other.identity()),
            Axis::Right => Cell::new(other.identity(), self.element.clone()),
        })
    }
}

/// Elements of a ball paired with their word lengths, in enumeration order.
pub(crate) fn ball_with_lengths(oracle: &GrowthOracle, radius: u32) -> Result<Vec<(Element, u32)>, GroupError> {
    let ball = oracle.ball(radius)?;
    let mut out = Vec::with_capacity(ball.len());
    let mut r = 0;
    let mut end = oracle.ball_size(0)? as usize;
    for (i, g) in ball.into_iter().enumerate() {
        while i >= end {
            r += 1;
            end = oracle.ball_size(r)? as usize;
        }
        out.push((g, r));
    }
    Ok(out)
}

fn sorted_ball(oracle: &GrowthOracle, radius: u32) -> Result<Vec<Element>, GroupError> {
    let mut b = oracle.ball(radius)?;
    b.sort();
    Ok(b)
}

/// `B₁(left) × B₂(right)`, ordered slice by slice.
pub fn box_window(group: &ProductGroup, left: u32, right: u32) -> Result<Window, SubshiftError> {
    let ls = sorted_ball(group.left(), left)?;
    let rs = sorted_ball(group.right(), right)?;
    let cells = ls.iter().flat_map(|l| rs.iter().map(move |r| Cell::new(l.clone(), r.clone())));
    Ok(Window::new(cells, format!("B1({left}) x B2({right})")))
}

/// `{(g₁g, g₂) : ℓ₁(g₁) ≤ depth, ℓ₂(g₂) ≤ depth, g ∈ F}`.
///
/// Two points agree on this window exactly when their `F`-dynamical distance is below `2^{-depth}`.
pub fn dynamical_ball_window(group: &ProductGroup, f: &[Element], depth: u32) -> Result<Window, SubshiftError> {
    let left = group.left_spec();
    for g in f {
        if !left.contains(g) {
            return Err(GroupError::NotAMember { element: g.to_string(), group: left.name() }.into());
        }
    }
    let b1 = group.left().ball(depth)?;
    let mut slices: Vec<Element> = b1.iter().flat_map(|h| f.iter().map(move |g| left.multiply_unchecked(h, g))).collect();
    slices.sort();
    slices.dedup();
    let rs = sorted_ball(group.right(), depth)?;
    let cells = slices.iter().flat_map(|l| rs.iter().map(move |r| Cell::new(l.clone(), r.clone())));
    Ok(Window::new(cells, format!("B1({depth})F x B2({depth}), |F|={}", f.len())))
}

/// `2^{-min{|g|_∞ : x_g ≠ y_g}}` over cells with `|g|_∞ ≤ depth_cap`.
pub fn metric_distance(group: &ProductGroup, x: &Pattern, y: &Pattern, depth_cap: u32) -> Result<Distance, SubshiftError> {
    let ls = ball_with_lengths(group.left(), depth_cap)?;
    let rs = ball_with_lengths(group.right(), depth_cap)?;
    let mut best: Option<u32> = None;
    for (l, a) in &ls {
        for (r, b) in &rs {
            let depth = (*a).max(*b);
            if best.is_some_and(|d| d <= depth) {
                continue;
            }
            let c = Cell::new(l.clone(), r.clone());
            let (Some(p), Some(q)) = (x.letter_at(&c), y.letter_at(&c)) else {
                return Err(SubshiftError::Precondition(format!(
                    "patterns must cover the box of radius {depth_cap}; missing {c:?}"
                )));
            };
            if p != q {
                best = Some(depth);
            }
        }
    }
    Ok(match best {
        Some(exponent) => Distance::Dyadic { exponent },
        None => Distance::Indistinguishable { depth: depth_cap },
    })
}

/// The restriction `x|_W`, which represents the cylinder of `x` over `W`.
pub fn cylinder_of(x: &Pattern, window: &Window) -> Result<Pattern, SubshiftError> {
    let letters = window
        .cells()
        .map(|c| {
            x.letter_at(c)
                .ok_or_else(|| SubshiftError::Precondition(format!("pattern is undefined at {c:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Pattern::new(window.clone(), letters)
}

/// Whether `x` and `y` lie in the same cylinder over `W`.
pub fn same_cylinder(x: &Pattern, y: &Pattern, window: &Window) -> Result<bool, SubshiftError> {
    Ok(cylinder_of(x, window)? == cylinder_of(y, window)?)
}

/// The shifted pattern on the pulled-back window `W·ĝ⁻¹`.
pub fn apply_shift(group: &ProductGroup, p: &Pattern, action: &ShiftAction) -> Result<Pattern, SubshiftError> {
    let g = action.as_cell(group)?;
    let g_inv = group.inv(&g);
    Pattern::from_cells(p.iter().map(|(c, a)| (group.mul(c, &g_inv), a)))
}

/// The shifted pattern restricted to `target`; every needed source cell must be present.
pub fn shifted_restriction(
    group: &ProductGroup,
    p: &Pattern,
    action: &ShiftAction,
    target: &Window,
) -> Result<Pattern, SubshiftError> {
    let g = action.as_cell(group)?;
    let letters = target
        .cells()
        .map(|c| {
            let src = group.mul(c, &g);
            p.letter_at(&src)
                .ok_or_else(|| SubshiftError::Precondition(format!("shift needs cell {src:?}, outside the pattern")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Pattern::new(target.clone(), letters)
}
