use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::derive_seed;

pub const KMEANS_RESTARTS: usize = 10;
const MAX_LLOYD: usize = 300;

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansResult {
    pub assignment: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    /// Objective after each Lloyd iteration of the kept restart.
    pub inertia_history: Vec<f64>,
}

fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids = vec![points[rng.random_range(0..points.len())].clone()];
    let mut d: Vec<f64> = points.iter().map(|p| dist2(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = points.len() - 1;
            for (i, w) in d.iter().enumerate() {
                if target < *w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        } else {
            rng.random_range(0..points.len())
        };
        centroids.push(points[next].clone());
        for (di, p) in d.iter_mut().zip(points) {
            *di = di.min(dist2(p, centroids.last().unwrap()));
        }
    }
    centroids
}

fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, m) in centroids.iter().enumerate() {
        let d = dist2(p, m);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn lloyd(points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>) -> KMeansResult {
    let k = centroids.len();
    let dim = points[0].len();
    let mut assignment = vec![usize::MAX; points.len()];
    let mut history = Vec::new();
    for _ in 0..MAX_LLOYD {
        let mut changed = false;
        let mut inertia = 0.0;
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, &centroids);
            inertia += d;
            if assignment[i] != c {
                assignment[i] = c;
                changed = true;
            }
        }
        history.push(inertia);
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assignment) {
            counts[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(p) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
    }
    let inertia = *history.last().unwrap();
    KMeansResult {
        assignment,
        centroids,
        inertia,
        inertia_history: history,
    }
}

/// k-means with k-means++ seeding and `restarts` independent starts; the
/// lowest objective wins, ties going to the earliest restart.
pub fn kmeans(points: &[Vec<f64>], k: usize, restarts: usize, seed: u64) -> Result<KMeansResult> {
    if k == 0 || points.len() < k {
        return Err(Error::InvalidArgument(format!(
            "cannot form {k} clusters from {} points",
            points.len()
        )));
    }
    let mut best: Option<KMeansResult> = None;
    for r in 0..restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, r as u64));
        let res = lloyd(points, plus_plus_init(points, k, &mut rng));
        if best.as_ref().is_none_or(|b| res.inertia < b.inertia) {
            best = Some(res);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Silhouette of every point. Points in singleton clusters score 0.
/// Undefined (an error) when all points coincide.
pub fn silhouette(points: &[Vec<f64>], assignment: &[usize], k: usize) -> Result<Vec<f64>> {
    let n = points.len();
    let mut dist = vec![vec![0.0; n]; n];
    let mut any = false;
    for i in 0..n {
        for j in i + 1..n {
            let d = dist2(&points[i], &points[j]).sqrt();
            dist[i][j] = d;
            dist[j][i] = d;
            any |= d > 0.0;
        }
    }
    if !any {
        return Err(Error::Degenerate("all points coincide; silhouette is undefined".into()));
    }
    let mut sizes = vec![0usize; k];
    for &c in assignment {
        sizes[c] += 1;
    }
    Ok((0..n)
        .map(|i| {
            let own = assignment[i];
            if sizes[own] <= 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; k];
            for j in 0..n {
                sums[assignment[j]] += dist[i][j];
            }
            let a = sums[own] / (sizes[own] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own && sizes[c] > 0)
                .map(|c| sums[c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            if !b.is_finite() {
                return 0.0;
            }
            let m = a.max(b);
            if m > 0.0 {
                (b - a) / m
            } else {
                0.0
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub chosen_k: usize,
    pub assignment: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// (k, mean silhouette) for every k tried.
    pub silhouettes: Vec<(usize, f64)>,
}

/// Runs k-means for each k in `k_range` and keeps the k with the highest
/// mean silhouette (ties: smaller k).
pub fn cluster_importances(
    vectors: &[Vec<f64>],
    k_range: std::ops::RangeInclusive<usize>,
    seed: u64,
) -> Result<Clustering> {
    let (lo, hi) = (*k_range.start(), *k_range.end());
    if lo < 2 || hi < lo {
        return Err(Error::InvalidArgument(format!("invalid k range {lo}..={hi}")));
    }
    if vectors.len() < hi + 1 {
        return Err(Error::InvalidArgument(format!(
            "{} vectors are too few for k up to {hi}",
            vectors.len()
        )));
    }
    let mut best: Option<(f64, usize, KMeansResult)> = None;
    let mut silhouettes = Vec::new();
    for k in k_range {
        let res = kmeans(vectors, k, KMEANS_RESTARTS, derive_seed(seed, k as u64))?;
        let s = silhouette(vectors, &res.assignment, k)?;
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        silhouettes.push((k, mean));
        if best.as_ref().is_none_or(|(m, _, _)| mean > *m) {
            best = Some((mean, k, res));
        }
    }
    let (_, chosen_k, res) = best.expect("non-empty range");
    Ok(Clustering {
        chosen_k,
        assignment: res.assignment,
        centroids: res.centroids,
        silhouettes,
    })
}
