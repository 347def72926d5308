//! Subshifts of `A^G` for product groups `G = G₁ × G₂`.
//!
//! Configurations are only ever handled through finite [`Pattern`]s. The
//! ultrametric `d(x, y) = 2^{-min{|g|_∞ : x_g ≠ y_g}}` makes every metric ball
//! a cylinder, which is what turns covering numbers into pattern counts.

mod backtrack;
mod count;
mod fiber;
mod metric;

pub use count::{count_patterns, CountLimits, Exactness, PatternCount, PatternCounter};
pub use fiber::FiberCounter;
pub use metric::{
    apply_shift, box_window, Axis, ShiftAction, cylinder_of, dynamical_ball_window, metric_distance, same_cylinder,
    shifted_restriction, Distance,
};

use indexmap::IndexSet;
use thiserror::Error;

use crate::group::{Element, GroupError, GroupKind, GroupSpec, GrowthOracle};

/// Alphabet letters are small integers; labels live in [`Alphabet`].
pub type Symbol = u8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubshiftError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid subshift: {0}")]
    InvalidSpec(String),
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
    #[error("{what} needs {needed} cells, above the cap of {cap}")]
    ResourceCap { what: String, needed: usize, cap: usize },
}

/// A point `(g₁, g₂)` of `G₁ × G₂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub left: Element,
    pub right: Element,
}

impl Cell {
    pub fn new(left: Element, right: Element) -> Cell {
        Cell { left, right }
    }

    pub fn to_element(&self) -> Element {
        Element::pair(self.left.clone(), self.right.clone())
    }

    pub fn from_element(e: &Element) -> Option<Cell> {
        e.components().map(|(l, r)| Cell::new(l.clone(), r.clone()))
    }
}

/// A finite set of cells, kept in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    cells: IndexSet<Cell>,
    label: String,
}

impl Window {
    pub fn new(cells: impl IntoIterator<Item = Cell>, label: impl Into<String>) -> Window {
        Window { cells: cells.into_iter().collect(), label: label.into() }
    }

    pub fn empty() -> Window {
        Window::new(std::iter::empty(), "empty")
    }

    pub fn cells(&self) -> impl ExactSizeIterator<Item = &Cell> {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.cells.contains(cell)
    }

    pub fn position(&self, cell: &Cell) -> Option<usize> {
        self.cells.get_index_of(cell)
    }

    pub fn cell(&self, i: usize) -> &Cell {
        &self.cells[i]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_subset(&self, other: &Window) -> bool {
        self.cells.iter().all(|c| other.contains(c))
    }
}

/// An assignment of letters to the cells of a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    window: Window,
    letters: Vec<Symbol>,
}

impl Pattern {
    pub fn new(window: Window, letters: Vec<Symbol>) -> Result<Pattern, SubshiftError> {
        if letters.len() != window.len() {
            return Err(SubshiftError::Precondition(format!(
                "{} letters for a window of {} cells",
                letters.len(),
                window.len()
            )));
        }
        Ok(Pattern { window, letters })
    }

    /// Builds a pattern from `(cell, letter)` pairs; later duplicates are rejected.
    pub fn from_cells(cells: impl IntoIterator<Item = (Cell, Symbol)>) -> Result<Pattern, SubshiftError> {
        let mut set = IndexSet::new();
        let mut letters = Vec::new();
        for (c, a) in cells {
            if !set.insert(c.clone()) {
                return Err(SubshiftError::Precondition(format!("cell {c:?} assigned twice")));
            }
            letters.push(a);
        }
        Ok(Pattern { window: Window { cells: set, label: "pattern".into() }, letters })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.letters
    }

    pub fn letter_at(&self, cell: &Cell) -> Option<Symbol> {
        self.window.position(cell).map(|i| self.letters[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cell, Symbol)> {
        self.window.cells().zip(self.letters.iter().copied())
    }
}

/// Letter labels; letter `i` has label `labels[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new(labels: Vec<String>) -> Result<Alphabet, SubshiftError> {
        if labels.is_empty() || labels.len() > usize::from(Symbol::MAX) + 1 {
            return Err(SubshiftError::InvalidSpec(format!("alphabet of size {}", labels.len())));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(SubshiftError::InvalidSpec(format!("duplicate letter {l:?}")));
            }
        }
        Ok(Alphabet { labels })
    }

    /// Letters labelled `0, 1, …, size−1`.
    pub fn numbered(size: usize) -> Alphabet {
        Alphabet::new((0..size).map(|i| i.to_string()).collect()).expect("valid alphabet size")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn symbol(&self, label: &str) -> Option<Symbol> {
        self.labels.iter().position(|l| l == label).map(|i| i as Symbol)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftKind {
    FullShift,
    /// Forbidden words read along the `G₂ ≅ ℤ` coordinate, independently in every fiber.
    FiberSft { forbidden: Vec<Vec<Symbol>> },
    /// Forbidden patterns; a pattern `P` occurs at `h` when `x_{c·h} = P_c` for all its cells `c`.
    GeneralSft { forbidden: Vec<Pattern> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubshiftSpec {
    alphabet: Alphabet,
    kind: ShiftKind,
}

impl SubshiftSpec {
    pub fn full(alphabet: Alphabet) -> SubshiftSpec {
        SubshiftSpec { alphabet, kind: ShiftKind::FullShift }
    }

    pub fn fiber_sft(alphabet: Alphabet, forbidden: Vec<Vec<Symbol>>) -> Result<SubshiftSpec, SubshiftError> {
        if forbidden.is_empty() {
            return Err(SubshiftError::InvalidSpec("fiber SFT without forbidden words".into()));
        }
        for w in &forbidden {
            if w.is_empty() {
                return Err(SubshiftError::InvalidSpec("empty forbidden word".into()));
            }
            if w.iter().any(|&a| usize::from(a) >= alphabet.len()) {
                return Err(SubshiftError::InvalidSpec(format!("forbidden word {w:?} leaves the alphabet")));
            }
        }
        Ok(SubshiftSpec { alphabet, kind: ShiftKind::FiberSft { forbidden } })
    }

    pub fn general_sft(alphabet: Alphabet, forbidden: Vec<Pattern>) -> Result<SubshiftSpec, SubshiftError> {
        for p in &forbidden {
            if p.window().is_empty() {
                return Err(SubshiftError::InvalidSpec("empty forbidden pattern".into()));
            }
            if p.letters().iter().any(|&a| usize::from(a) >= alphabet.len()) {
                return Err(SubshiftError::InvalidSpec("forbidden pattern leaves the alphabet".into()));
            }
        }
        Ok(SubshiftSpec { alphabet, kind: ShiftKind::GeneralSft { forbidden } })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> &ShiftKind {
        &self.kind
    }

    /// Whether pattern counts for this subshift are exact projection counts.
    pub fn is_exactly_countable(&self) -> bool {
        match &self.kind {
            ShiftKind::FullShift | ShiftKind::FiberSft { .. } => true,
            ShiftKind::GeneralSft { forbidden } => forbidden.is_empty() || self.safe_symbol().is_some(),
        }
    }

    /// A letter occurring in no forbidden pattern. Filling the outside of a
    /// locally admissible pattern with it never creates an occurrence, so
    /// local admissibility implies global admissibility.
    pub fn safe_symbol(&self) -> Option<Symbol> {
        let ShiftKind::GeneralSft { forbidden } = &self.kind else {
            return None;
        };
        (0..self.alphabet.len() as Symbol).find(|a| forbidden.iter().all(|p| !p.letters().contains(a)))
    }

    /// Checks that the subshift can live on `group`.
    pub fn check_compatible(&self, group: &ProductGroup) -> Result<(), SubshiftError> {
        match &self.kind {
            ShiftKind::FullShift => Ok(()),
            ShiftKind::FiberSft { .. } => {
                if group.right_spec().is_standard_integers() {
                    Ok(())
                } else {
                    Err(SubshiftError::Incompatible(format!(
                        "a fiber SFT needs G2 = Z with generators ±1, got {}",
                        group.right_spec().name()
                    )))
                }
            }
            ShiftKind::GeneralSft { forbidden } => {
                for p in forbidden {
                    for c in p.window().cells() {
                        if !group.left_spec().contains(&c.left) || !group.right_spec().contains(&c.right) {
                            return Err(SubshiftError::Incompatible(format!(
                                "pattern cell {c:?} is not in {}",
                                group.spec().name()
                            )));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// A direct product `G₁ × G₂` with cached factor ball data.
#[derive(Debug, Clone)]
pub struct ProductGroup {
    spec: GroupSpec,
    left: GrowthOracle,
    right: GrowthOracle,
}

impl ProductGroup {
    pub fn new(spec: GroupSpec) -> Result<ProductGroup, GroupError> {
        let (l, r) = spec.factors()?;
        let (left, right) = (GrowthOracle::new(l), GrowthOracle::new(r));
        Ok(ProductGroup { spec, left, right })
    }

    pub fn from_factors(left: GroupSpec, right: GroupSpec) -> ProductGroup {
        ProductGroup::new(GroupSpec::product(left, right)).expect("a product by construction")
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn left_spec(&self) -> &GroupSpec {
        match self.spec.kind() {
            GroupKind::DirectProduct(l, _) => l,
            _ => unreachable!(),
        }
    }

    pub fn right_spec(&self) -> &GroupSpec {
        match self.spec.kind() {
            GroupKind::DirectProduct(_, r) => r,
            _ => unreachable!(),
        }
    }

    /// Ball data for `G₁`.
    pub fn left(&self) -> &GrowthOracle {
        &self.left
    }

    /// Ball data for `G₂`.
    pub fn right(&self) -> &GrowthOracle {
        &self.right
    }

    /// The group product of two cells.
    pub fn mul(&self, a: &Cell, b: &Cell) -> Cell {
        Cell::new(
            self.left_spec().multiply_unchecked(&a.left, &b.left),
            self.right_spec().multiply_unchecked(&a.right, &b.right),
        )
    }

    pub fn inv(&self, a: &Cell) -> Cell {
        Cell::new(self.left_spec().inverse_unchecked(&a.left), self.right_spec().inverse_unchecked(&a.right))
    }

    pub fn contains(&self, c: &Cell) -> bool {
        self.left_spec().contains(&c.left) && self.right_spec().contains(&c.right)
    }
}
