use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::Treatment;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParetoPoint {
    pub treatment: Treatment,
    pub extraction_time_s: f64,
    pub mean_accuracy: f64,
    pub dominated: bool,
}

impl ParetoPoint {
    pub fn new(treatment: Treatment, extraction_time_s: f64, mean_accuracy: f64) -> Self {
        ParetoPoint {
            treatment,
            extraction_time_s,
            mean_accuracy,
            dominated: false,
        }
    }
}

/// Returns every point with its `dominated` flag set, sorted by time
/// ascending (ties: higher accuracy first, then input order). A point is
/// dominated when another is no slower and no less accurate and strictly
/// better in one of the two. Identical points do not dominate each other.
pub fn mark_dominated(points: &[ParetoPoint]) -> Vec<ParetoPoint> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (p, q) = (&points[a], &points[b]);
        p.extraction_time_s
            .total_cmp(&q.extraction_time_s)
            .then(q.mean_accuracy.total_cmp(&p.mean_accuracy))
            .then(a.cmp(&b))
    });
    let mut out = Vec::with_capacity(points.len());
    let mut best_before = f64::NEG_INFINITY;
    let mut i = 0;
    while i < order.len() {
        let t = points[order[i]].extraction_time_s;
        let mut j = i;
        while j < order.len() && points[order[j]].extraction_time_s == t {
            j += 1;
        }
        let group_best = points[order[i]].mean_accuracy;
        for &idx in &order[i..j] {
            let mut p = points[idx];
            p.dominated = best_before >= p.mean_accuracy || p.mean_accuracy < group_best;
            out.push(p);
        }
        best_before = best_before.max(group_best);
        i = j;
    }
    out
}

/// Non-dominated points sorted by time ascending. Accuracy is
/// non-decreasing along the result.
pub fn pareto_front(points: &[ParetoPoint]) -> Result<Vec<ParetoPoint>> {
    if points.is_empty() {
        return Err(Error::EmptyResult("no points for a Pareto front".into()));
    }
    if points
        .iter()
        .any(|p| p.extraction_time_s.is_nan() || p.extraction_time_s <= 0.0 || !p.mean_accuracy.is_finite())
    {
        return Err(Error::InvalidArgument(
            "extraction times must be positive and accuracies finite".into(),
        ));
    }
    Ok(mark_dominated(points).into_iter().filter(|p| !p.dominated).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedupRecord {
    pub t_orig: f64,
    pub t_ds: f64,
    #[serde(rename = "S")]
    pub s: f64,
}

/// S = t_orig / t_ds.
pub fn speedup(t_orig: f64, t_ds: f64) -> Result<SpeedupRecord> {
    if !(t_orig > 0.0 && t_ds > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "times must be positive, got {t_orig} and {t_ds}"
        )));
    }
    Ok(SpeedupRecord {
        t_orig,
        t_ds,
        s: t_orig / t_ds,
    })
}

/// Mean Jaccard index over all pairs of sets. Two empty sets count as 1.
pub fn jaccard_stability<T: Ord>(sets: &[BTreeSet<T>]) -> Result<f64> {
    if sets.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 sets, got {}",
            sets.len()
        )));
    }
    let mut total = 0.0;
    let mut pairs = 0usize;
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            let inter = a.intersection(b).count();
            let union = a.len() + b.len() - inter;
            total += if union == 0 { 1.0 } else { inter as f64 / union as f64 };
            pairs += 1;
        }
    }
    Ok(total / pairs as f64)
}
