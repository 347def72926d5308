use std::fmt;

use serde::{Deserialize, Serialize};

/// Canonical normal form of a group element.
///
/// Two elements are equal exactly when their normal forms are equal, so the
/// derived `Eq`/`Hash` impls are the group's equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Element {
    /// Integer vector in ℤ^d.
    Lattice(Vec<i64>),
    /// Residue in ℤ/mℤ, always reduced to `0..m`.
    Cyclic(u64),
    /// The isometry `x ↦ (-1)^flip · x + shift` of the real line.
    Dihedral { shift: i64, flip: bool },
    /// Upper unitriangular matrix `[[1, a, c], [0, 1, b], [0, 0, 1]]` stored as `[a, b, c]`.
    Heisenberg([i64; 3]),
    /// Pair of factor elements.
    Product(Box<Element>, Box<Element>),
}

impl Element {
    pub fn pair(left: Element, right: Element) -> Element {
        Element::Product(Box::new(left), Box::new(right))
    }

    pub fn integer(n: i64) -> Element {
        Element::Lattice(vec![n])
    }

    /// Returns the two components of a product element.
    pub fn components(&self) -> Option<(&Element, &Element)> {
        match self {
            Element::Product(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// The single coordinate of an element of ℤ.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Element::Lattice(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        }
    }

    pub(crate) fn kind_name(&self) -> &'static str {
        match self {
            Element::Lattice(_) => "lattice",
            Element::Cyclic(_) => "cyclic",
            Element::Dihedral { .. } => "dihedral",
            Element::Heisenberg(_) => "heisenberg",
            Element::Product(..) => "product",
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Lattice(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Element::Cyclic(r) => write!(f, "{r}̄"),
            Element::Dihedral { shift, flip } => write!(f, "({shift},{})", u8::from(*flip)),
            Element::Heisenberg([a, b, c]) => write!(f, "[{a},{b},{c}]"),
            Element::Product(l, r) => write!(f, "<{l};{r}>"),
        }
    }
}
