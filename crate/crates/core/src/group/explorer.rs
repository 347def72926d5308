use std::collections::HashMap;
use std::sync::Mutex;

use super::{Element, GroupError, GroupSpec};

/// Default bound on the number of elements a breadth-first search may hold.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000_000;

/// Incremental breadth-first search of the Cayley graph from the identity.
///
/// Elements are stored in discovery order. Within a sphere, discovery order is
/// lexicographic order of the BFS-first shortest words (parents are scanned in
/// order, generators in list order), which is the enumeration order of the
/// group.
#[derive(Debug, Clone)]
pub struct BallExplorer {
    spec: GroupSpec,
    order: Vec<Element>,
    index: HashMap<Element, u32>,
    /// `layer_ends[r]` is `|B(r)|`.
    layer_ends: Vec<usize>,
    cap: usize,
}

impl BallExplorer {
    pub fn new(spec: &GroupSpec) -> BallExplorer {
        BallExplorer::with_cap(spec, DEFAULT_ELEMENT_CAP)
    }

    pub fn with_cap(spec: &GroupSpec, cap: usize) -> BallExplorer {
        let id = spec.identity();
        let mut index = HashMap::new();
        index.insert(id.clone(), 0);
        BallExplorer { spec: spec.clone(), order: vec![id], index, layer_ends: vec![1], cap }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Largest radius explored so far.
    pub fn radius(&self) -> u32 {
        (self.layer_ends.len() - 1) as u32
    }

    /// Grows the search until `B(radius)` is complete.
    pub fn expand_to(&mut self, radius: u32) -> Result<(), GroupError> {
        while self.radius() < radius {
            let r = self.layer_ends.len();
            let start = if r >= 2 { self.layer_ends[r - 2] } else { 0 };
            let end = self.layer_ends[r - 1];
            for i in start..end {
                for s in self.spec.generators() {
                    let h = self.spec.multiply_unchecked(&self.order[i], s);
                    if !self.index.contains_key(&h) {
                        if self.order.len() >= self.cap {
                            return Err(GroupError::ElementCapExceeded { radius: r as u32, cap: self.cap });
                        }
                        self.index.insert(h.clone(), self.order.len() as u32);
                        self.order.push(h);
                    }
                }
            }
            self.layer_ends.push(self.order.len());
        }
        Ok(())
    }

    /// `|B(radius)|`.
    pub fn ball_size(&mut self, radius: u32) -> Result<usize, GroupError> {
        self.expand_to(radius)?;
        Ok(self.layer_ends[radius as usize])
    }

    pub fn ball(&mut self, radius: u32) -> Result<Vec<Element>, GroupError> {
        let n = self.ball_size(radius)?;
        Ok(self.order[..n].to_vec())
    }

    /// Elements of `B(radius)` in enumeration order, without copying.
    pub fn ball_slice(&mut self, radius: u32) -> Result<&[Element], GroupError> {
        let n = self.ball_size(radius)?;
        Ok(&self.order[..n])
    }

    /// Word length of an element already discovered.
    pub fn known_length(&self, g: &Element) -> Option<u32> {
        let pos = *self.index.get(g)? as usize;
        Some(self.layer_ends.partition_point(|&end| end <= pos) as u32)
    }

    /// Word length of `g` if it is at most `radius_cap`.
    pub fn length_within(&mut self, g: &Element, radius_cap: u32) -> Result<Option<u32>, GroupError> {
        loop {
            if let Some(l) = self.known_length(g) {
                return Ok(Some(l));
            }
            if self.radius() >= radius_cap {
                return Ok(None);
            }
            let before = self.order.len();
            let next = self.radius() + 1;
            self.expand_to(next)?;
            if self.order.len() == before {
                // Finite group fully explored.
                return Ok(None);
            }
        }
    }

    /// Position of `g` in the enumeration, if discovered.
    pub fn position(&self, g: &Element) -> Option<usize> {
        self.index.get(g).map(|&p| p as usize)
    }
}

/// Thread-safe cached ball sizes and word lengths for one group.
#[derive(Debug)]
pub struct GrowthOracle {
    explorer: Mutex<BallExplorer>,
}

impl Clone for GrowthOracle {
    fn clone(&self) -> Self {
        GrowthOracle { explorer: Mutex::new(self.lock().clone()) }
    }
}

impl GrowthOracle {
    pub fn new(spec: &GroupSpec) -> GrowthOracle {
        GrowthOracle { explorer: Mutex::new(BallExplorer::new(spec)) }
    }

    pub fn with_cap(spec: &GroupSpec, cap: usize) -> GrowthOracle {
        GrowthOracle { explorer: Mutex::new(BallExplorer::with_cap(spec, cap)) }
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, BallExplorer> {
        self.explorer.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn spec(&self) -> GroupSpec {
        self.lock().spec().clone()
    }

    /// `γ_S(radius)`.
    pub fn ball_size(&self, radius: u32) -> Result<u64, GroupError> {
        Ok(self.lock().ball_size(radius)? as u64)
    }

    pub fn ball(&self, radius: u32) -> Result<Vec<Element>, GroupError> {
        self.lock().ball(radius)
    }

    pub fn word_length(&self, g: &Element, radius_cap: u32) -> Result<u32, GroupError> {
        self.lock()
            .length_within(g, radius_cap)?
            .ok_or(GroupError::RadiusCapExceeded { cap: radius_cap })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_length_then_lexicographic() {
        // D∞ with S = {r, s}: spheres of size 2 past the identity.
        let d = GroupSpec::infinite_dihedral();
        let mut ex = BallExplorer::new(&d);
        let ball = ex.ball(2).unwrap();
        let r = Element::Dihedral { shift: 0, flip: true };
        let s = Element::Dihedral { shift: 1, flip: true };
        let rs = d.multiply(&r, &s).unwrap();
        let sr = d.multiply(&s, &r).unwrap();
        assert_eq!(ball, vec![d.identity(), r, s, rs, sr]);
    }

    #[test]
    fn finite_groups_saturate() {
        let c = GroupSpec::cyclic(5);
        let mut ex = BallExplorer::new(&c);
        assert_eq!(ex.ball_size(10).unwrap(), 5);
        assert_eq!(ex.length_within(&Element::Cyclic(3), 100).unwrap(), Some(2));
        let trivial = GroupSpec::cyclic(1);
        assert_eq!(BallExplorer::new(&trivial).ball_size(3).unwrap(), 1);
    }

    #[test]
    fn element_cap_is_an_error() {
        let mut ex = BallExplorer::with_cap(&GroupSpec::lattice(2), 100);
        assert!(matches!(ex.ball_size(20), Err(GroupError::ElementCapExceeded { .. })));
    }
}
