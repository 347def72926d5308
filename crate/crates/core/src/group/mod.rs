//! Word geometry of a closed catalog of polynomial-growth groups.
//!
//! Every group in the catalog has an explicit normal form for its elements, so
//! the word problem is trivial and balls of the Cayley graph can be enumerated
//! by breadth-first search. Direct products carry the generating set
//! `(S₁ × {1}) ∪ ({1} × S₂)`.

mod element;
mod explorer;
mod folner;
mod growth;

pub use element::Element;
pub use explorer::{BallExplorer, GrowthOracle, DEFAULT_ELEMENT_CAP};
pub use folner::{boundary, invariance_ratio, tempered_witness, TemperedWitness};
pub use growth::{growth_table, growth_table_capped, DegreeFit, GrowthTable};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element {element} does not belong to {group}")]
    NotAMember { element: String, group: String },
    #[error("cannot combine a {left} element with a {right} element")]
    KindMismatch { left: String, right: String },
    #[error("invalid generating set: {0}")]
    InvalidGenerators(String),
    #[error("word length search exceeded radius cap {cap}")]
    RadiusCapExceeded { cap: u32 },
    #[error("ball of radius {radius} exceeds the element cap {cap}")]
    ElementCapExceeded { radius: u32, cap: usize },
    #[error("{0} is not a direct product")]
    NotAProduct(String),
}

/// The kinds of groups this crate can compute in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    IntegerLattice(usize),
    CyclicFinite(u64),
    InfiniteDihedral,
    Heisenberg3,
    DirectProduct(Box<GroupSpec>, Box<GroupSpec>),
}

/// A catalog group together with an ordered symmetric generating set.
///
/// Generator order is significant: it fixes the enumeration order of the
/// group used by [`GrowthTable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    kind: GroupKind,
    generators: Vec<Element>,
}

impl GroupSpec {
    /// ℤ^d with generators `+e₁, −e₁, +e₂, −e₂, …`.
    pub fn lattice(dim: usize) -> GroupSpec {
        let mut generators = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for sign in [1, -1] {
                let mut v = vec![0; dim];
                v[i] = sign;
                generators.push(Element::Lattice(v));
            }
        }
        GroupSpec { kind: GroupKind::IntegerLattice(dim), generators }
    }

    /// ℤ/mℤ generated by `{1, −1}` (a single generator when `m = 2`).
    pub fn cyclic(modulus: u64) -> GroupSpec {
        assert!(modulus >= 1, "cyclic group needs a positive modulus");
        let mut generators = Vec::new();
        if modulus > 1 {
            generators.push(Element::Cyclic(1));
            if modulus > 2 {
                generators.push(Element::Cyclic(modulus - 1));
            }
        }
        GroupSpec { kind: GroupKind::CyclicFinite(modulus), generators }
    }

    /// The infinite dihedral group generated by the reflections
    /// `r(x) = −x` and `s(x) = 1 − x`.
    pub fn infinite_dihedral() -> GroupSpec {
        GroupSpec {
            kind: GroupKind::InfiniteDihedral,
            generators: vec![
                Element::Dihedral { shift: 0, flip: true },
                Element::Dihedral { shift: 1, flip: true },
            ],
        }
    }

    /// The discrete Heisenberg group with generators `a, a⁻¹, b, b⁻¹`.
    pub fn heisenberg() -> GroupSpec {
        GroupSpec {
            kind: GroupKind::Heisenberg3,
            generators: vec![
                Element::Heisenberg([1, 0, 0]),
                Element::Heisenberg([-1, 0, 0]),
                Element::Heisenberg([0, 1, 0]),
                Element::Heisenberg([0, -1, 0]),
            ],
        }
    }

    /// `left × right` with generators `(S₁ × {1}) ∪ ({1} × S₂)`, left factor first.
    pub fn product(left: GroupSpec, right: GroupSpec) -> GroupSpec {
        let left_id = left.identity();
        let right_id = right.identity();
        let mut generators = Vec::with_capacity(left.generators.len() + right.generators.len());
        for s in &left.generators {
            generators.push(Element::pair(s.clone(), right_id.clone()));
        }
        for s in &right.generators {
            generators.push(Element::pair(left_id.clone(), s.clone()));
        }
        GroupSpec {
            kind: GroupKind::DirectProduct(Box::new(left), Box::new(right)),
            generators,
        }
    }

    /// ℤ × ℤ/2ℤ with generators `(±1, 0̄), (0, 1̄)`.
    pub fn integers_times_z2() -> GroupSpec {
        GroupSpec::product(GroupSpec::lattice(1), GroupSpec::cyclic(2))
    }

    /// Replaces the default generators of a non-product group.
    ///
    /// The list must be symmetric, exclude the identity, and generate the
    /// group; generation is checked by reaching every element of the default
    /// radius-2 ball (or the whole group, when finite).
    pub fn with_generators(self, generators: Vec<Element>) -> Result<GroupSpec, GroupError> {
        if matches!(self.kind, GroupKind::DirectProduct(..)) {
            return Err(GroupError::InvalidGenerators(
                "product generators are derived from the factors".into(),
            ));
        }
        let default_ball = BallExplorer::new(&self).ball(2)?;
        let spec = GroupSpec { kind: self.kind, generators };
        spec.validate_generators()?;
        let mut explorer = BallExplorer::new(&spec);
        // Any element of the default radius-2 ball has word length at most
        // 2·max_generator_length in the new generators; search generously.
        let cap = 64;
        for g in &default_ball {
            if explorer.length_within(g, cap)?.is_none() {
                return Err(GroupError::InvalidGenerators(format!(
                    "{g} is not reached within radius {cap}"
                )));
            }
        }
        Ok(spec)
    }

    fn validate_generators(&self) -> Result<(), GroupError> {
        let id = self.identity();
        for s in &self.generators {
            if !self.contains(s) {
                return Err(GroupError::InvalidGenerators(format!(
                    "{s} is not an element of {}",
                    self.name()
                )));
            }
            if *s == id {
                return Err(GroupError::InvalidGenerators("the identity is not allowed".into()));
            }
            let inv = self.inverse_unchecked(s);
            if !self.generators.contains(&inv) {
                return Err(GroupError::InvalidGenerators(format!(
                    "inverse {inv} of {s} is missing"
                )));
            }
        }
        for (i, s) in self.generators.iter().enumerate() {
            if self.generators[..i].contains(s) {
                return Err(GroupError::InvalidGenerators(format!("{s} is listed twice")));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// Left and right factors of a direct product.
    pub fn factors(&self) -> Result<(&GroupSpec, &GroupSpec), GroupError> {
        match &self.kind {
            GroupKind::DirectProduct(l, r) => Ok((l, r)),
            _ => Err(GroupError::NotAProduct(self.name())),
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.kind {
            GroupKind::IntegerLattice(d) => *d == 0,
            GroupKind::CyclicFinite(_) => true,
            GroupKind::InfiniteDihedral | GroupKind::Heisenberg3 => false,
            GroupKind::DirectProduct(l, r) => l.is_finite() && r.is_finite(),
        }
    }

    /// True for ℤ with generators `{+1, −1}`, whose balls are intervals.
    pub fn is_standard_integers(&self) -> bool {
        self.kind == GroupKind::IntegerLattice(1)
            && self.generators.len() == 2
            && self.generators.contains(&Element::integer(1))
            && self.generators.contains(&Element::integer(-1))
    }

    pub fn name(&self) -> String {
        match &self.kind {
            GroupKind::IntegerLattice(1) => "Z".into(),
            GroupKind::IntegerLattice(d) => format!("Z^{d}"),
            GroupKind::CyclicFinite(m) => format!("Z/{m}Z"),
            GroupKind::InfiniteDihedral => "D_inf".into(),
            GroupKind::Heisenberg3 => "H3".into(),
            GroupKind::DirectProduct(l, r) => format!("{}x{}", l.name_atom(), r.name_atom()),
        }
    }

    fn name_atom(&self) -> String {
        match self.kind {
            GroupKind::DirectProduct(..) => format!("({})", self.name()),
            _ => self.name(),
        }
    }

    pub fn identity(&self) -> Element {
        match &self.kind {
            GroupKind::IntegerLattice(d) => Element::Lattice(vec![0; *d]),
            GroupKind::CyclicFinite(_) => Element::Cyclic(0),
            GroupKind::InfiniteDihedral => Element::Dihedral { shift: 0, flip: false },
            GroupKind::Heisenberg3 => Element::Heisenberg([0; 3]),
            GroupKind::DirectProduct(l, r) => Element::pair(l.identity(), r.identity()),
        }
    }

    /// Whether `g` is a well-formed normal form for this group.
    pub fn contains(&self, g: &Element) -> bool {
        match (&self.kind, g) {
            (GroupKind::IntegerLattice(d), Element::Lattice(v)) => v.len() == *d,
            (GroupKind::CyclicFinite(m), Element::Cyclic(r)) => r < m,
            (GroupKind::InfiniteDihedral, Element::Dihedral { .. }) => true,
            (GroupKind::Heisenberg3, Element::Heisenberg(_)) => true,
            (GroupKind::DirectProduct(l, r), Element::Product(a, b)) => l.contains(a) && r.contains(b),
            _ => false,
        }
    }

    fn check(&self, g: &Element) -> Result<(), GroupError> {
        if self.contains(g) {
            Ok(())
        } else if g.kind_name() != self.identity().kind_name() {
            Err(GroupError::KindMismatch {
                left: self.identity().kind_name().into(),
                right: g.kind_name().into(),
            })
        } else {
            Err(GroupError::NotAMember { element: g.to_string(), group: self.name() })
        }
    }

    /// The product `gh` in normal form.
    pub fn multiply(&self, g: &Element, h: &Element) -> Result<Element, GroupError> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.multiply_unchecked(g, h))
    }

    pub fn inverse(&self, g: &Element) -> Result<Element, GroupError> {
        self.check(g)?;
        Ok(self.inverse_unchecked(g))
    }

    pub(crate) fn multiply_unchecked(&self, g: &Element, h: &Element) -> Element {
        match (&self.kind, g, h) {
            (GroupKind::IntegerLattice(_), Element::Lattice(a), Element::Lattice(b)) => {
                Element::Lattice(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupKind::CyclicFinite(m), Element::Cyclic(a), Element::Cyclic(b)) => {
                Element::Cyclic((a + b) % m)
            }
            (
                GroupKind::InfiniteDihedral,
                Element::Dihedral { shift: n, flip: e },
                Element::Dihedral { shift: k, flip: d },
            ) => Element::Dihedral { shift: if *e { n - k } else { n + k }, flip: e ^ d },
            (GroupKind::Heisenberg3, Element::Heisenberg(a), Element::Heisenberg(b)) => {
                Element::Heisenberg([a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]])
            }
            (GroupKind::DirectProduct(l, r), Element::Product(a1, a2), Element::Product(b1, b2)) => {
                Element::pair(l.multiply_unchecked(a1, b1), r.multiply_unchecked(a2, b2))
            }
            _ => unreachable!("elements were checked against the group kind"),
        }
    }

    pub(crate) fn inverse_unchecked(&self, g: &Element) -> Element {
        match (&self.kind, g) {
            (GroupKind::IntegerLattice(_), Element::Lattice(a)) => {
                Element::Lattice(a.iter().map(|x| -x).collect())
            }
            (GroupKind::CyclicFinite(m), Element::Cyclic(a)) => Element::Cyclic((m - a) % m),
            (GroupKind::InfiniteDihedral, Element::Dihedral { shift, flip }) => {
                // (n,1) is an involution; (n,0)⁻¹ = (−n,0).
                if *flip {
                    g.clone()
                } else {
                    Element::Dihedral { shift: -shift, flip: false }
                }
            }
            (GroupKind::Heisenberg3, Element::Heisenberg([a, b, c])) => {
                Element::Heisenberg([-a, -b, a * b - c])
            }
            (GroupKind::DirectProduct(l, r), Element::Product(a, b)) => {
                Element::pair(l.inverse_unchecked(a), r.inverse_unchecked(b))
            }
            _ => unreachable!("element was checked against the group kind"),
        }
    }

    /// Word length `ℓ_S(g)` by breadth-first search from the identity.
    ///
    /// Fails with [`GroupError::RadiusCapExceeded`] when `g` is not found
    /// within `radius_cap`.
    pub fn word_length(&self, g: &Element, radius_cap: u32) -> Result<u32, GroupError> {
        self.check(g)?;
        BallExplorer::new(self)
            .length_within(g, radius_cap)?
            .ok_or(GroupError::RadiusCapExceeded { cap: radius_cap })
    }

    /// Word distance `d_S(g, h) = ℓ_S(g⁻¹h)`.
    pub fn distance(&self, g: &Element, h: &Element, radius_cap: u32) -> Result<u32, GroupError> {
        let gh = self.multiply(&self.inverse(g)?, h)?;
        self.word_length(&gh, radius_cap)
    }

    /// `B_S(n)` in enumeration order (word length, then BFS-first word).
    pub fn ball(&self, radius: u32) -> Result<Vec<Element>, GroupError> {
        BallExplorer::new(self).ball(radius)
    }

    /// `B_{S₁}(m) × B_{S₂}(m)`, the ball of radius `m` for `|g|_∞ = max(ℓ_{S₁}, ℓ_{S₂})`.
    pub fn box_ball(&self, radius: u32) -> Result<Vec<Element>, GroupError> {
        let (left, right) = self.factors()?;
        let lb = left.ball(radius)?;
        let rb = right.ball(radius)?;
        let mut out = Vec::with_capacity(lb.len() * rb.len());
        for a in &lb {
            for b in &rb {
                out.push(Element::pair(a.clone(), b.clone()));
            }
        }
        Ok(out)
    }
}
