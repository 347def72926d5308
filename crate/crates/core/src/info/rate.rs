use serde::Serialize;

use super::{binary_entropy, FiniteDistribution, InfoError, MeasureSpec};
use crate::dimension::{growth_constants, GrowthConstants};
use crate::numeric::kahan_sum;
use crate::subshift::{box_window, PatternCounter};

/// Smallest `M ≥ 0` with `2^{-M} < ε`, so that `2^{-M} < ε ≤ 2^{-M+1}` whenever `ε ≤ 2`.
pub fn upper_depth(epsilon: f64) -> Result<u32, InfoError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(InfoError::Precondition(format!("ε = {epsilon} must be positive")));
    }
    let mut m = (-epsilon.log2()).floor().max(-1.0) as i64 + 1;
    while m > 0 && (-(m - 1) as f64).exp2() < epsilon {
        m -= 1;
    }
    while (-m as f64).exp2() >= epsilon {
        m += 1;
    }
    Ok(m.max(0) as u32)
}

/// Largest `M ≥ 0` with `ε ≤ δ·2^{-M}`; then `δ2^{-M-1} < ε ≤ δ2^{-M}`.
pub fn lower_depth(epsilon: f64, delta: f64) -> Result<u32, InfoError> {
    if !(epsilon > 0.0 && epsilon < delta && delta < 0.5) {
        return Err(InfoError::Precondition(format!("need 0 < ε < δ < 1/2, got ε = {epsilon}, δ = {delta}")));
    }
    let mut m = (delta / epsilon).log2().floor() as i64;
    while epsilon > delta * (-m as f64).exp2() {
        m -= 1;
    }
    while epsilon <= delta * (-(m + 1) as f64).exp2() {
        m += 1;
    }
    Ok(m.max(0) as u32)
}

/// A scale strictly inside the lower-bound bracket of depth `M`.
pub fn epsilon_for_depth(delta: f64, depth: u32) -> f64 {
    0.75 * delta * (-f64::from(depth)).exp2()
}

/// A certified bound on the rate-distortion function at scale `ε`, in bits per `G₁`-site.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RdBound {
    pub epsilon: f64,
    pub depth: u32,
    pub value: f64,
}

/// `H(π_{B₁(M)B₁(N)×B₂(M)}) / |B₁(N)|` with `2^{-M} < ε ≤ 2^{-M+1}`.
pub fn rd_upper(measure: &MeasureSpec, counter: &PatternCounter, n: u32, epsilon: f64) -> Result<RdBound, InfoError> {
    let group = counter.group();
    measure.check_supported(counter.spec(), group)?;
    let depth = upper_depth(epsilon)?;
    let slices = group.left().ball_size(depth + n)?;
    let cells = group.right().ball_size(depth)?;
    let value = measure.window_entropy(slices, cells) / group.left().ball_size(n)? as f64;
    Ok(RdBound { epsilon, depth, value })
}

/// The `N → ∞` value of [`rd_upper`] for a polynomial-growth `G₁`.
pub fn rd_upper_limit(measure: &MeasureSpec, counter: &PatternCounter, epsilon: f64) -> Result<RdBound, InfoError> {
    measure.check_supported(counter.spec(), counter.group())?;
    let depth = upper_depth(epsilon)?;
    let cells = counter.group().right().ball_size(depth)?;
    Ok(RdBound { epsilon, depth, value: measure.slice_entropy(cells) })
}

/// `H(π_{B₁(N)×B₂(M)}) / |B₁(N)| − H(δ) − δ·|B₂(M)|·log₂|A|` with `δ2^{-M-1} < ε ≤ δ2^{-M}`.
pub fn rd_lower(
    measure: &MeasureSpec,
    counter: &PatternCounter,
    n: u32,
    epsilon: f64,
    delta: f64,
) -> Result<RdBound, InfoError> {
    let group = counter.group();
    measure.check_supported(counter.spec(), group)?;
    let depth = lower_depth(epsilon, delta)?;
    let slices = group.left().ball_size(n)?;
    let cells = group.right().ball_size(depth)?;
    let k = counter.spec().alphabet().len() as f64;
    let value = measure.window_entropy(slices, cells) / slices as f64
        - binary_entropy(delta)
        - delta * cells as f64 * k.log2();
    Ok(RdBound { epsilon, depth, value })
}

/// Scale grid for the rate-distortion sandwich.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem2Budget {
    pub n_list: Vec<u32>,
    /// Lower-bound depths; each gives `ε = 0.75·δ·2^{-M}`.
    pub depths: Vec<u32>,
    pub delta: f64,
    /// Radius used to estimate the growth constant of `G₂`.
    pub growth_radius: u32,
}

/// `N = None` marks the `N → ∞` column.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem2Row {
    #[serde(rename = "N")]
    pub n: Option<u32>,
    pub epsilon: f64,
    pub log_inv_epsilon: f64,
    pub upper_depth: u32,
    pub lower_depth: u32,
    pub upper: f64,
    pub lower: f64,
    pub upper_rate: f64,
    pub lower_rate: f64,
}

impl Theorem2Row {
    pub fn width(&self) -> f64 {
        self.upper_rate - self.lower_rate
    }

    pub fn brackets(&self, target: f64) -> bool {
        self.lower_rate <= target && target <= self.upper_rate
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem2Report {
    pub delta: f64,
    pub entropy_rate: f64,
    pub growth: GrowthConstants,
    pub target: f64,
    pub rows: Vec<Theorem2Row>,
    pub limit_rows: Vec<Theorem2Row>,
}

impl Theorem2Report {
    /// The `N → ∞` row at the deepest budgeted scale.
    pub fn deepest_limit(&self) -> Option<&Theorem2Row> {
        self.limit_rows.iter().max_by_key(|r| r.lower_depth)
    }
}

/// Tables of `rd_upper/log₂(1/ε)` and `rd_lower/log₂(1/ε)` against `c·h_μ`.
pub fn verify_theorem2(
    measure: &MeasureSpec,
    counter: &PatternCounter,
    budget: &Theorem2Budget,
) -> Result<Theorem2Report, InfoError> {
    let growth = growth_constants(counter.group().right_spec(), budget.growth_radius)?;
    let entropy_rate = measure.entropy_rate();
    let target = growth.c_extrapolated * entropy_rate;
    let row = |n: Option<u32>, depth: u32| -> Result<Theorem2Row, InfoError> {
        let eps = epsilon_for_depth(budget.delta, depth);
        let (up, low) = match n {
            Some(n) => (rd_upper(measure, counter, n, eps)?, rd_lower(measure, counter, n, eps, budget.delta)?),
            None => {
                // The lower bound does not depend on N for measures independent across slices.
                (rd_upper_limit(measure, counter, eps)?, rd_lower(measure, counter, 0, eps, budget.delta)?)
            }
        };
        let log_inv = -eps.log2();
        Ok(Theorem2Row {
            n,
            epsilon: eps,
            log_inv_epsilon: log_inv,
            upper_depth: up.depth,
            lower_depth: low.depth,
            upper: up.value,
            lower: low.value,
            upper_rate: up.value / log_inv,
            lower_rate: low.value / log_inv,
        })
    };
    let mut rows = Vec::new();
    for &depth in &budget.depths {
        for &n in &budget.n_list {
            rows.push(row(Some(n), depth)?);
        }
    }
    let limit_rows = budget.depths.iter().map(|&d| row(None, d)).collect::<Result<_, _>>()?;
    Ok(Theorem2Report { delta: budget.delta, entropy_rate, growth, target, rows, limit_rows })
}

/// Supports larger than this are refused by [`blahut_arimoto`].
pub const BLAHUT_ARIMOTO_SUPPORT_CAP: usize = 4096;
const GAP_TOLERANCE_BITS: f64 = 1e-8;
const MAX_ITERATIONS: usize = 100_000;
const LOSSLESS_SLOPE: f64 = 200.0;

/// A point on the rate-distortion curve of a finite problem, rate in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RdPoint {
    pub rate: f64,
    pub distortion: f64,
    pub slope: f64,
    pub gap: f64,
    pub iterations: usize,
}

struct Problem<'a> {
    p: Vec<f64>,
    d: Vec<&'a [f64]>,
    ny: usize,
}

impl Problem<'_> {
    /// Alternating minimisation at slope `s`, warm-started from `q`.
    fn solve(&self, s: f64, q: &mut [f64]) -> RdPoint {
        let nx = self.p.len();
        // Shifting each row by its minimum leaves the channel unchanged and avoids underflow.
        let e: Vec<Vec<f64>> = self
            .d
            .iter()
            .map(|row| {
                let lo = row.iter().copied().fold(f64::INFINITY, f64::min);
                row.iter().map(|&v| (-s * (v - lo)).exp()).collect()
            })
            .collect();
        let mut iterations = 0;
        let mut gap;
        loop {
            iterations += 1;
            let z: Vec<f64> = e.iter().map(|row| kahan_sum(row.iter().zip(q.iter()).map(|(a, b)| a * b))).collect();
            let c: Vec<f64> = (0..self.ny).map(|y| kahan_sum((0..nx).map(|x| self.p[x] * e[x][y] / z[x]))).collect();
            let max_log = c.iter().zip(q.iter()).filter(|(_, &qy)| qy > 0.0).map(|(cy, _)| cy.ln()).fold(f64::NEG_INFINITY, f64::max);
            let avg_log = kahan_sum(c.iter().zip(q.iter()).filter(|(&cy, &qy)| qy > 0.0 && cy > 0.0).map(|(cy, qy)| qy * cy * cy.ln()));
            gap = (max_log - avg_log).max(0.0) / std::f64::consts::LN_2;
            for (qy, cy) in q.iter_mut().zip(&c) {
                *qy *= cy;
            }
            let total = kahan_sum(q.iter().copied());
            for qy in q.iter_mut() {
                *qy /= total;
            }
            if gap < GAP_TOLERANCE_BITS || iterations >= MAX_ITERATIONS {
                break;
            }
        }
        let z: Vec<f64> = e.iter().map(|row| kahan_sum(row.iter().zip(q.iter()).map(|(a, b)| a * b))).collect();
        let mut out = vec![0.0; self.ny];
        let mut distortion = Vec::with_capacity(nx * self.ny);
        for x in 0..nx {
            for y in 0..self.ny {
                let qyx = q[y] * e[x][y] / z[x];
                out[y] += self.p[x] * qyx;
                distortion.push(self.p[x] * qyx * self.d[x][y]);
            }
        }
        let mut terms = Vec::with_capacity(nx * self.ny);
        for x in 0..nx {
            for y in 0..self.ny {
                let qyx = q[y] * e[x][y] / z[x];
                if qyx > 0.0 && out[y] > 0.0 {
                    terms.push(self.p[x] * qyx * (qyx / out[y]).log2());
                }
            }
        }
        RdPoint { rate: kahan_sum(terms).max(0.0), distortion: kahan_sum(distortion), slope: s, gap, iterations }
    }
}

/// `min I(X;Y)` subject to `E d(X,Y) ≤ target`, by Blahut–Arimoto with a bisection on the slope.
///
/// The returned point has distortion at most `target` (up to 1e-9) and its rate is
/// within the duality gap of the finite problem's rate-distortion curve there.
pub fn blahut_arimoto(p: &FiniteDistribution, distortion: &[Vec<f64>], target: f64) -> Result<RdPoint, InfoError> {
    let nx = p.len();
    let ny = distortion.first().map_or(0, Vec::len);
    if distortion.len() != nx || ny == 0 || distortion.iter().any(|r| r.len() != ny) {
        return Err(InfoError::InvalidDistribution("distortion matrix shape".into()));
    }
    if nx > BLAHUT_ARIMOTO_SUPPORT_CAP || ny > BLAHUT_ARIMOTO_SUPPORT_CAP {
        return Err(InfoError::SupportCap { size: nx.max(ny), cap: BLAHUT_ARIMOTO_SUPPORT_CAP });
    }
    if distortion.iter().flatten().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(InfoError::InvalidDistribution("distortions must be finite and nonnegative".into()));
    }
    let (px, d): (Vec<f64>, Vec<&[f64]>) =
        p.probs().iter().zip(distortion).filter(|(&w, _)| w > 0.0).map(|(&w, r)| (w, r.as_slice())).unzip();
    let d_min = kahan_sum(px.iter().zip(&d).map(|(w, r)| w * r.iter().copied().fold(f64::INFINITY, f64::min)));
    let (best_y, d_max) = (0..ny)
        .map(|y| (y, kahan_sum(px.iter().zip(&d).map(|(w, r)| w * r[y]))))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty output alphabet");
    if target < d_min - 1e-12 {
        return Err(InfoError::Infeasible { target, minimum: d_min });
    }
    if target >= d_max {
        let _ = best_y;
        return Ok(RdPoint { rate: 0.0, distortion: d_max, slope: 0.0, gap: 0.0, iterations: 0 });
    }
    let problem = Problem { p: px, d, ny };
    let mut q = vec![1.0 / ny as f64; ny];
    if target <= d_min + 1e-12 {
        return Ok(problem.solve(LOSSLESS_SLOPE, &mut q));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut hi_point = problem.solve(hi, &mut q);
    while hi_point.distortion > target && hi < LOSSLESS_SLOPE {
        lo = hi;
        hi *= 2.0;
        hi_point = problem.solve(hi, &mut q);
    }
    for _ in 0..80 {
        if hi - lo < 1e-12 * hi || (target - hi_point.distortion).abs() < 1e-11 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let point = problem.solve(mid, &mut q);
        if point.distortion > target {
            lo = mid;
        } else {
            hi = mid;
            hi_point = point;
        }
    }
    Ok(hi_point)
}

/// The window problem behind the rate-distortion sandwich at small size: the source is
/// the pattern on `B₁(N) × B₂(M)` and the distortion is the fraction of `G₁`-sites
/// whose `G₂`-blocks differ.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowSource {
    pub source: FiniteDistribution,
    pub distortion: Vec<Vec<f64>>,
    pub sites: u64,
}

pub fn window_source(measure: &MeasureSpec, counter: &PatternCounter, n: u32, m: u32) -> Result<WindowSource, InfoError> {
    let group = counter.group();
    measure.check_supported(counter.spec(), group)?;
    let window = box_window(group, n, m)?;
    let k = counter.spec().alphabet().len();
    let sites = group.left().ball_size(n)? as usize;
    let cells = group.right().ball_size(m)? as usize;
    let total = (k as f64).powi(window.len() as i32);
    if total > BLAHUT_ARIMOTO_SUPPORT_CAP as f64 {
        return Err(InfoError::SupportCap { size: total as usize, cap: BLAHUT_ARIMOTO_SUPPORT_CAP });
    }
    let total = total as usize;
    // Window cells come slice by slice, each slice sorted along G₂.
    let decode = |mut code: usize| -> Vec<usize> {
        (0..window.len())
            .map(|_| {
                let a = code % k;
                code /= k;
                a
            })
            .collect()
    };
    let slice_prob = |letters: &[usize]| -> f64 {
        match measure {
            MeasureSpec::Bernoulli { probs } => letters.iter().map(|&a| probs[a]).product(),
            MeasureSpec::FiberMarkov { transition, stationary } => {
                let mut p = stationary[letters[0]];
                for w in letters.windows(2) {
                    p *= transition[w[0]][w[1]];
                }
                p
            }
        }
    };
    let patterns: Vec<Vec<usize>> = (0..total).map(decode).collect();
    let probs: Vec<f64> = patterns.iter().map(|w| w.chunks(cells).map(slice_prob).product()).collect();
    let source = FiniteDistribution::from_weights(&probs)?;
    let distortion = patterns
        .iter()
        .map(|x| {
            patterns
                .iter()
                .map(|y| {
                    let differing = x.chunks(cells).zip(y.chunks(cells)).filter(|(a, b)| a != b).count();
                    differing as f64 / sites as f64
                })
                .collect()
        })
        .collect();
    Ok(WindowSource { source, distortion, sites: sites as u64 })
}

/// A Blahut–Arimoto rate on the window problem compared with the certified sandwich.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub n: u32,
    pub m: u32,
    pub delta: f64,
    pub epsilon: f64,
    pub rate_per_site: f64,
    pub lower: f64,
    pub upper: f64,
    pub point: RdPoint,
}

impl CrossCheck {
    pub fn inside(&self, slack: f64) -> bool {
        self.lower - slack <= self.rate_per_site && self.rate_per_site <= self.upper + slack
    }
}

/// Runs Blahut–Arimoto on the window problem at block distortion `δ` and compares with
/// the sandwich at `ε = 0.75·δ·2^{-M}`.
pub fn rd_cross_check(
    measure: &MeasureSpec,
    counter: &PatternCounter,
    n: u32,
    m: u32,
    delta: f64,
) -> Result<CrossCheck, InfoError> {
    let problem = window_source(measure, counter, n, m)?;
    let point = blahut_arimoto(&problem.source, &problem.distortion, delta)?;
    let epsilon = epsilon_for_depth(delta, m);
    let lower = rd_lower(measure, counter, n, epsilon, delta)?;
    let upper = rd_upper(measure, counter, n, epsilon)?;
    Ok(CrossCheck {
        n,
        m,
        delta,
        epsilon,
        rate_per_site: point.rate / problem.sites as f64,
        lower: lower.value,
        upper: upper.value,
        point,
    })
}
