use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::PairSample;
use crate::error::{Error, Result};
use crate::metrics::{MetricVector, METRIC_COUNT};
use crate::stats::compensated_sum;

pub const DEFAULT_L2: f64 = 0.01;
pub const TOLERANCE: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 10_000;

/// Linear pairwise model: P(a beats b) = sigmoid(w . z + bias) where z is the
/// metric difference a - b divided by per-metric scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankerModel {
    pub weights: [f64; METRIC_COUNT],
    pub bias: f64,
    /// Mean of the training deltas; zero because every pair is also seen
    /// with its sides swapped.
    pub delta_mean: [f64; METRIC_COUNT],
    /// Root mean square of the training deltas (1 for an all-zero metric).
    pub delta_scale: [f64; METRIC_COUNT],
    pub iterations: usize,
    pub converged: bool,
}

impl RankerModel {
    pub fn standardize(&self, delta: &MetricVector) -> [f64; METRIC_COUNT] {
        let d = delta.to_array();
        std::array::from_fn(|j| (d[j] - self.delta_mean[j]) / self.delta_scale[j])
    }

    /// Logit of "a beats b" for a metric difference a - b.
    pub fn score(&self, delta: &MetricVector) -> f64 {
        let z = self.standardize(delta);
        compensated_sum(self.weights.iter().zip(&z).map(|(w, v)| w * v)) + self.bias
    }

    pub fn probability(&self, delta: &MetricVector) -> f64 {
        sigmoid(self.score(delta))
    }

    /// w . (m / scale) for one configuration's metrics. Pairwise logits are
    /// differences of these plus the bias.
    pub fn linear_score(&self, metrics: &MetricVector) -> f64 {
        let m = metrics.to_array();
        compensated_sum((0..METRIC_COUNT).map(|j| self.weights[j] * m[j] / self.delta_scale[j]))
    }
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Per-metric contribution w_i * z_i to the pair's logit; the entries sum
/// to score - bias.
pub fn attribution(model: &RankerModel, pair: &PairSample) -> [f64; METRIC_COUNT] {
    let z = model.standardize(&pair.metric_delta);
    std::array::from_fn(|j| model.weights[j] * z[j])
}

/// Fits the logistic ranker by full-batch gradient descent on the pairs and
/// their mirror images (delta negated, label flipped), minimizing mean log
/// loss + l2/2 |w|^2. The mirrored set is symmetric, so the optimal bias is
/// exactly zero and is not fitted. Starts from zero weights; `_seed` is
/// accepted for interface stability and does not change the result.
pub fn train_ranker(pairs: &[PairSample], l2: f64, _seed: u64) -> Result<RankerModel> {
    if pairs.len() < 10 {
        return Err(Error::Degenerate(format!(
            "ranker needs at least 10 pairs, got {}",
            pairs.len()
        )));
    }
    if l2.is_nan() || l2 <= 0.0 {
        return Err(Error::InvalidArgument(format!("l2 must be positive, got {l2}")));
    }

    let raw: Vec<[f64; METRIC_COUNT]> = pairs.iter().map(|p| p.metric_delta.to_array()).collect();
    let scale: [f64; METRIC_COUNT] = std::array::from_fn(|j| {
        let ms = compensated_sum(raw.iter().map(|d| d[j] * d[j])) / raw.len() as f64;
        if ms > 0.0 {
            ms.sqrt()
        } else {
            1.0
        }
    });
    // only the original orientation is stored; mirrored terms are folded in
    let z: Vec<[f64; METRIC_COUNT]> = raw.iter().map(|d| std::array::from_fn(|j| d[j] / scale[j])).collect();
    let y: Vec<f64> = pairs.iter().map(|p| f64::from(p.label)).collect();
    let n = z.len() as f64;

    // step 1/L with L = lambda_max(Z'Z / n) / 4 + l2 (identical for the
    // mirrored set)
    let gram = DMatrix::from_fn(METRIC_COUNT, METRIC_COUNT, |a, b| {
        compensated_sum(z.iter().map(|r| r[a] * r[b])) / n
    });
    let lmax = SymmetricEigen::new(gram).eigenvalues.max().max(0.0);
    let step = 1.0 / (0.25 * lmax + l2);

    let mut w = [0.0; METRIC_COUNT];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        // gradient of the mirrored mean loss: for a sample (z, y) and its
        // mirror (-z, 1 - y) the two terms coincide, so the average over
        // both equals the average over the originals
        let mut grad = [0.0; METRIC_COUNT];
        for (zi, yi) in z.iter().zip(&y) {
            let t: f64 = w.iter().zip(zi).map(|(a, b)| a * b).sum();
            let r = sigmoid(t) - yi;
            for j in 0..METRIC_COUNT {
                grad[j] += r * zi[j];
            }
        }
        for j in 0..METRIC_COUNT {
            grad[j] = grad[j] / n + l2 * w[j];
        }
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if norm < TOLERANCE {
            converged = true;
            break;
        }
        for j in 0..METRIC_COUNT {
            w[j] -= step * grad[j];
        }
        iterations += 1;
    }
    Ok(RankerModel {
        weights: w,
        bias: 0.0,
        delta_mean: [0.0; METRIC_COUNT],
        delta_scale: scale,
        iterations,
        converged,
    })
}
