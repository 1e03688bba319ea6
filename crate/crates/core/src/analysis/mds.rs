use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{pearson, spearman};

pub const SMACOF_MAX_ITER: usize = 300;
pub const SMACOF_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MdsStart {
    Classical,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MdsResult {
    pub embedding: Vec<Vec<f64>>,
    pub pearson_fidelity: f64,
    pub spearman_fidelity: f64,
    /// sqrt(raw stress / sum of squared dissimilarities).
    pub stress: f64,
    /// Raw stress before the first and after every Guttman update.
    pub stress_history: Vec<f64>,
    pub start: MdsStart,
}

pub fn distance_matrix(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

fn raw_stress(delta: &[Vec<f64>], x: &[Vec<f64>]) -> f64 {
    let d = distance_matrix(x);
    let mut s = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            s += (d[i][j] - delta[i][j]).powi(2);
        }
    }
    s
}

/// Classical (Torgerson) scaling: top eigenvectors of the double-centred
/// squared-distance matrix.
pub fn classical_mds(delta: &[Vec<f64>], dims: usize) -> Vec<Vec<f64>> {
    let n = delta.len();
    let sq = DMatrix::from_fn(n, n, |i, j| delta[i][j] * delta[i][j]);
    let row_means: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |i, j| -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand));
    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &c| eig.eigenvalues[c].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&c)));
    (0..n)
        .map(|i| {
            order[..dims]
                .iter()
                .map(|&k| eig.eigenvectors[(i, k)] * eig.eigenvalues[k].max(0.0).sqrt())
                .collect()
        })
        .collect()
}

/// SMACOF with unit weights from `start`. Stops when the relative stress
/// decrease drops below the tolerance.
pub fn smacof(delta: &[Vec<f64>], start: Vec<Vec<f64>>) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = delta.len();
    let dims = start[0].len();
    let mut x = start;
    let mut history = vec![raw_stress(delta, &x)];
    for _ in 0..SMACOF_MAX_ITER {
        let d = distance_matrix(&x);
        // Guttman transform: X <- B(X) X / n
        let mut next = vec![vec![0.0; dims]; n];
        for i in 0..n {
            let mut diag = 0.0;
            for j in 0..n {
                if i == j || d[i][j] <= 0.0 {
                    continue;
                }
                let bij = -delta[i][j] / d[i][j];
                diag -= bij;
                for k in 0..dims {
                    next[i][k] += bij * x[j][k];
                }
            }
            for k in 0..dims {
                next[i][k] = (next[i][k] + diag * x[i][k]) / n as f64;
            }
        }
        x = next;
        let s = raw_stress(delta, &x);
        let prev = *history.last().unwrap();
        history.push(s);
        if prev <= 0.0 || (prev - s) / prev < SMACOF_TOLERANCE {
            break;
        }
    }
    (x, history)
}

fn upper(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| m[i][j])
        .collect()
}

/// Metric MDS of `vectors` into `dims` dimensions. SMACOF runs from the
/// classical solution and from a seeded random configuration; the lower
/// final stress is kept (ties: classical).
pub fn mds_embed(vectors: &[Vec<f64>], dims: usize, seed: u64) -> Result<MdsResult> {
    if !(2..=3).contains(&dims) {
        return Err(Error::InvalidArgument(format!("dims must be 2 or 3, got {dims}")));
    }
    if vectors.len() < dims + 2 {
        return Err(Error::InvalidArgument(format!(
            "{} vectors are too few for a {dims}-d embedding",
            vectors.len()
        )));
    }
    let delta = distance_matrix(vectors);
    let target = upper(&delta);
    let total: f64 = target.iter().map(|v| v * v).sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("all vectors are identical".into()));
    }

    let classical = smacof(&delta, classical_mds(&delta, dims));
    let scale = (total / target.len() as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_start = (0..vectors.len())
        .map(|_| (0..dims).map(|_| rng.random_range(-1.0..1.0) * scale).collect())
        .collect();
    let random = smacof(&delta, random_start);

    let c_final = *classical.1.last().unwrap();
    let r_final = *random.1.last().unwrap();
    let ((embedding, history), start) = if r_final < c_final {
        (random, MdsStart::Random)
    } else {
        (classical, MdsStart::Classical)
    };
    let embedded = upper(&distance_matrix(&embedding));
    Ok(MdsResult {
        pearson_fidelity: pearson(&target, &embedded).unwrap_or(0.0),
        spearman_fidelity: spearman(&target, &embedded).unwrap_or(0.0),
        stress: (history.last().unwrap() / total).sqrt(),
        stress_history: history,
        embedding,
        start,
    })
}
