use crate::stats::{mean, std_dev};

/// Neighbours consulted per prediction.
pub const KNN_K: usize = 5;

/// Per-column z-scoring with statistics taken from training rows only.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    /// Columns with zero spread keep unit scale.
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        let d = rows.first().map_or(0, Vec::len);
        let (mut mu, mut sd) = (Vec::with_capacity(d), Vec::with_capacity(d));
        for j in 0..d {
            let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            mu.push(mean(&col));
            let s = std_dev(&col);
            sd.push(if s > 0.0 { s } else { 1.0 });
        }
        Standardizer { mean: mu, std: sd }
    }

    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }
}

/// Distance-weighted k-nearest-neighbour vote with Euclidean distance.
/// Neighbours are ordered by (distance, training index). Exact matches
/// outvote everything else; a tie in total weight goes to the lower class.
pub fn knn_predict(train: &[Vec<f64>], labels: &[usize], query: &[f64], k: usize, n_classes: usize) -> usize {
    let mut dist: Vec<(f64, usize)> = train
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let d2: f64 = r.iter().zip(query).map(|(a, b)| (a - b) * (a - b)).sum();
            (d2.sqrt(), i)
        })
        .collect();
    let k = k.min(dist.len());
    dist.select_nth_unstable_by(k.saturating_sub(1), |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut nearest = dist[..k].to_vec();
    nearest.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut votes = vec![0.0; n_classes];
    let exact: Vec<&(f64, usize)> = nearest.iter().filter(|(d, _)| *d == 0.0).collect();
    if exact.is_empty() {
        for (d, i) in &nearest {
            votes[labels[*i]] += 1.0 / d;
        }
    } else {
        for (_, i) in exact {
            votes[labels[*i]] += 1.0;
        }
    }
    let mut best = 0;
    for c in 1..n_classes {
        if votes[c] > votes[best] {
            best = c;
        }
    }
    best
}
