use serde::Serialize;

use super::InfoError;
use crate::numeric::kahan_sum;

const NORMALIZATION_TOLERANCE: f64 = 1e-12;

fn check_probabilities(p: &[f64]) -> Result<(), InfoError> {
    if p.is_empty() {
        return Err(InfoError::InvalidDistribution("empty support".into()));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(InfoError::InvalidDistribution(format!("entry {x} is not a probability")));
    }
    let total = kahan_sum(p.iter().copied());
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(InfoError::InvalidDistribution(format!("entries sum to {total}")));
    }
    Ok(())
}

fn normalized(weights: &[f64]) -> Result<Vec<f64>, InfoError> {
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(InfoError::InvalidDistribution("negative or non-finite weight".into()));
    }
    let total = kahan_sum(weights.iter().copied());
    if total <= 0.0 {
        return Err(InfoError::InvalidDistribution("weights sum to zero".into()));
    }
    Ok(weights.iter().map(|w| w / total).collect())
}

/// `−Σ p log₂ p` with `0 log 0 = 0`.
pub fn entropy_of(p: &[f64]) -> f64 {
    -kahan_sum(p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()))
}

/// `H(δ) = −δ log₂ δ − (1−δ) log₂(1−δ)`; NaN outside `[0, 1]`.
pub fn binary_entropy(delta: f64) -> f64 {
    if !(0.0..=1.0).contains(&delta) {
        return f64::NAN;
    }
    entropy_of(&[delta, 1.0 - delta])
}

/// A probability vector over a labelled finite set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiniteDistribution {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<FiniteDistribution, InfoError> {
        check_probabilities(&probs)?;
        let labels = (0..probs.len()).map(|i| i.to_string()).collect();
        Ok(FiniteDistribution { labels, probs })
    }

    pub fn with_labels(labels: Vec<String>, probs: Vec<f64>) -> Result<FiniteDistribution, InfoError> {
        if labels.len() != probs.len() {
            return Err(InfoError::InvalidDistribution("labels and probabilities differ in length".into()));
        }
        check_probabilities(&probs)?;
        Ok(FiniteDistribution { labels, probs })
    }

    pub fn from_weights(weights: &[f64]) -> Result<FiniteDistribution, InfoError> {
        FiniteDistribution::new(normalized(weights)?)
    }

    pub fn uniform(size: usize) -> FiniteDistribution {
        FiniteDistribution::new(vec![1.0 / size as f64; size]).expect("uniform is normalised")
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

pub fn entropy(p: &FiniteDistribution) -> f64 {
    entropy_of(p.probs())
}

/// `p(x, y)` stored row-major with `x` indexing rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    p: Vec<f64>,
}

impl JointDistribution {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<JointDistribution, InfoError> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        if matrix.iter().any(|r| r.len() != cols) {
            return Err(InfoError::InvalidDistribution("ragged joint matrix".into()));
        }
        let p: Vec<f64> = matrix.into_iter().flatten().collect();
        check_probabilities(&p)?;
        Ok(JointDistribution { rows, cols, p })
    }

    pub fn from_weights(matrix: &[Vec<f64>]) -> Result<JointDistribution, InfoError> {
        let cols = matrix.first().map_or(0, Vec::len);
        if matrix.iter().any(|r| r.len() != cols) {
            return Err(InfoError::InvalidDistribution("ragged joint matrix".into()));
        }
        let flat: Vec<f64> = matrix.iter().flatten().copied().collect();
        Ok(JointDistribution { rows: matrix.len(), cols, p: normalized(&flat)? })
    }

    /// The product of two marginals.
    pub fn independent(px: &FiniteDistribution, py: &FiniteDistribution) -> JointDistribution {
        let p = px.probs().iter().flat_map(|a| py.probs().iter().map(move |b| a * b)).collect();
        JointDistribution { rows: px.len(), cols: py.len(), p }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.p[x * self.cols + y]
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        (0..self.rows).map(|x| kahan_sum((0..self.cols).map(|y| self.get(x, y)))).collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        (0..self.cols).map(|y| kahan_sum((0..self.rows).map(|x| self.get(x, y)))).collect()
    }

    /// The joint of `(f(X), g(Y))`.
    pub fn push_forward(&self, f: &[usize], g: &[usize]) -> Result<JointDistribution, InfoError> {
        if f.len() != self.rows || g.len() != self.cols {
            return Err(InfoError::InvalidDistribution("quantizer does not cover the support".into()));
        }
        let rows = f.iter().max().map_or(0, |m| m + 1);
        let cols = g.iter().max().map_or(0, |m| m + 1);
        let mut cells = vec![Vec::new(); rows * cols];
        for x in 0..self.rows {
            for y in 0..self.cols {
                cells[f[x] * cols + g[y]].push(self.get(x, y));
            }
        }
        Ok(JointDistribution { rows, cols, p: cells.into_iter().map(kahan_sum).collect() })
    }
}

/// `Σ p(x,y) log₂ p(x,y)/(p(x)p(y))`.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    let (px, py) = (j.marginal_x(), j.marginal_y());
    let terms = (0..j.rows).flat_map(|x| {
        let py = &py;
        let pxx = px[x];
        (0..j.cols).filter_map(move |y| {
            let p = j.get(x, y);
            (p > 0.0).then(|| p * (p / (pxx * py[y])).log2())
        })
    });
    kahan_sum(terms).max(0.0)
}

/// `H(X) + H(Y) − H(X,Y)`.
pub fn mutual_information_by_entropies(j: &JointDistribution) -> f64 {
    entropy_of(&j.marginal_x()) + entropy_of(&j.marginal_y()) - entropy_of(j.probs())
}

/// `H(X) − H(X|Y)` with the conditional entropy averaged over `y` directly.
pub fn mutual_information_by_conditional(j: &JointDistribution) -> f64 {
    let py = j.marginal_y();
    let conditional = kahan_sum((0..j.cols).filter(|&y| py[y] > 0.0).map(|y| {
        let column: Vec<f64> = (0..j.rows).map(|x| j.get(x, y) / py[y]).collect();
        py[y] * entropy_of(&column)
    }));
    entropy_of(&j.marginal_x()) - conditional
}

/// `I(f∘X; g∘Y)`, a lower bound on the mutual information of the unquantized pair.
pub fn quantized_mutual_information(j: &JointDistribution, f: &[usize], g: &[usize]) -> Result<f64, InfoError> {
    Ok(mutual_information(&j.push_forward(f, g)?))
}

/// Both sides of `I(X; f(Y)) ≤ I(X; Y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DataProcessingWitness {
    pub original: f64,
    pub processed: f64,
    pub holds: bool,
}

pub const DATA_PROCESSING_SLACK: f64 = 1e-9;

pub fn check_data_processing(j: &JointDistribution, f: &[usize]) -> Result<DataProcessingWitness, InfoError> {
    let identity: Vec<usize> = (0..j.rows).collect();
    let processed = quantized_mutual_information(j, &identity, f)?;
    let original = mutual_information(j);
    Ok(DataProcessingWitness { original, processed, holds: original - processed >= -DATA_PROCESSING_SLACK })
}
