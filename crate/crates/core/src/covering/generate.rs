use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{CoveringError, TranslateArray};
use crate::group::{Element, GroupSpec};

/// Knobs for random interval instances over ℤ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceParams {
    /// `|F|`; the ambient set is `0..ambient_size`.
    pub ambient_size: usize,
    pub delta: f64,
    /// Tower height `M`, recorded as given.
    pub levels: usize,
    pub shapes_per_level: usize,
    /// Fraction of positions used as base points on each level.
    pub density: f64,
    /// Rough budget for `Σ |A_{i,j}|·|F_{i,j}|`.
    pub max_cells: usize,
    pub c: f64,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams { ambient_size: 2000, delta: 0.005, levels: 2, shapes_per_level: 3, density: 0.3, max_cells: 400_000, c: 2.0 }
    }
}

/// Scales mixed by [`sample_params`]; only the last two give `10·δ^{1/4} < 1`.
pub const DELTA_MIX: [f64; 5] = [0.009, 0.005, 0.001, 5e-5, 1e-6];

/// Seeded parameters spanning sizes up to `|F| = 10⁴`, one to three levels and the [`DELTA_MIX`] scales.
pub fn sample_params<R: Rng>(rng: &mut R) -> InstanceParams {
    InstanceParams {
        ambient_size: rng.random_range(50..=10_000),
        delta: DELTA_MIX[rng.random_range(0..DELTA_MIX.len())],
        levels: rng.random_range(1..=3),
        shapes_per_level: rng.random_range(1..=4),
        density: rng.random_range(0.05..0.6),
        max_cells: 200_000,
        c: 2.0,
    }
}

/// A random instance meeting every hypothesis.
///
/// Shapes are nested intervals containing 0, sorted by length within a level, so the
/// per-level bound holds with `C = 2`. Lengths on level `i+1` are at least
/// `(P − 1)/δ` for the longest shape `P` below, which is the cross-level bound with `D = {0}`.
pub fn generate_instance<R: Rng>(p: &InstanceParams, rng: &mut R) -> Result<TranslateArray, CoveringError> {
    let n = p.ambient_size;
    if !(2..=10_000).contains(&n) || p.levels == 0 || p.shapes_per_level == 0 || !(p.density > 0.0 && p.density <= 1.0) {
        return Err(CoveringError::InvalidInstance("instance parameters out of range".into()));
    }
    if p.c < 2.0 {
        return Err(CoveringError::InvalidInstance("interval towers need C ≥ 2".into()));
    }
    let top_max = ((p.max_cells as f64 / (p.density * n as f64)) as usize).clamp(1, n / 2);
    // Lengths per level, built from the top down.
    let mut lengths: Vec<Vec<usize>> = Vec::with_capacity(p.levels);
    let mut cap = top_max;
    for _ in 0..p.levels {
        let lo = (cap / 2).max(1);
        let mut level: Vec<usize> = (0..p.shapes_per_level).map(|_| rng.random_range(lo..=cap)).collect();
        level.sort_unstable();
        let shortest = level[0];
        lengths.push(level);
        cap = (1.0 + p.delta * shortest as f64).floor() as usize;
    }
    lengths.reverse();

    let mut shapes = Vec::with_capacity(p.levels);
    let mut bases = Vec::with_capacity(p.levels);
    for (i, level) in lengths.iter().enumerate() {
        // A shift shared by the top level; lower levels start at 0 so their
        // inverses nest and the cross-level unions stay intervals of length `P`.
        let shift = if i + 1 == lengths.len() { -rng.random_range(0..level[0] as i64) } else { 0 };
        let offsets = vec![shift; level.len()];
        let shape_sets: Vec<Vec<Element>> =
            level.iter().zip(&offsets).map(|(&len, &s)| (s..s + len as i64).map(Element::integer).collect()).collect();
        let mut base_sets: Vec<Vec<Element>> = vec![Vec::new(); level.len()];
        for x in 0..n as i64 {
            if !rng.random_bool(p.density) {
                continue;
            }
            // Shapes whose translate by x stays inside 0..n.
            let fits: Vec<usize> = (0..level.len())
                .filter(|&j| x + offsets[j] >= 0 && x + offsets[j] + level[j] as i64 <= n as i64)
                .collect();
            if !fits.is_empty() {
                base_sets[fits[rng.random_range(0..fits.len())]].push(Element::integer(x));
            }
        }
        shapes.push(shape_sets);
        bases.push(base_sets);
    }
    let ambient: Vec<Element> = (0..n as i64).map(Element::integer).collect();
    TranslateArray::new(GroupSpec::lattice(1), shapes, bases, ambient, p.delta, p.c, vec![])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::check_hypotheses;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_instances_meet_the_hypotheses() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for delta in [0.009, 0.001, 1e-5, 1e-7] {
            for levels in 1..=3 {
                let p = InstanceParams { delta, levels, ..InstanceParams::default() };
                let t = generate_instance(&p, &mut rng).unwrap();
                let r = check_hypotheses(&t).unwrap();
                assert!(r.all_hold, "{:?}", r.first_failure());
                assert_eq!(t.levels(), levels);
            }
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let p = InstanceParams::default();
        let a = generate_instance(&p, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = generate_instance(&p, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }
}
