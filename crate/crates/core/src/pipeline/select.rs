use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::stats::compensated_sum;

/// Fewest features a selection may keep.
pub const MIN_SELECTED: usize = 4;

/// One-way ANOVA F statistic of a single feature. A feature that is constant
/// within every class but differs between classes scores +inf; a feature
/// with no variance at all scores 0.
pub fn anova_f(values: &[f64], labels: &[usize], n_classes: usize) -> f64 {
    let n = values.len();
    let grand = compensated_sum(values.iter().copied()) / n as f64;
    let mut sums = vec![0.0; n_classes];
    let mut counts = vec![0usize; n_classes];
    for (&v, &l) in values.iter().zip(labels) {
        sums[l] += v;
        counts[l] += 1;
    }
    let means: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| if c > 0 { s / c as f64 } else { 0.0 })
        .collect();
    let present = counts.iter().filter(|&&c| c > 0).count();
    let between = compensated_sum(
        means
            .iter()
            .zip(&counts)
            .map(|(m, &c)| c as f64 * (m - grand) * (m - grand)),
    );
    let within = compensated_sum(values.iter().zip(labels).map(|(v, &l)| (v - means[l]) * (v - means[l])));
    let df_between = (present - 1) as f64;
    let df_within = (n - present) as f64;
    if between <= 0.0 {
        return 0.0;
    }
    if within <= 0.0 || df_within <= 0.0 {
        return f64::INFINITY;
    }
    (between / df_between) / (within / df_within)
}

/// Keeps the features whose F score is above the median score, and at least
/// [`MIN_SELECTED`] of them. Returns column indices in ascending order.
/// Ranking ties are broken by feature name.
pub fn select_features(rows: &[Vec<f64>], labels: &[usize], names: &[&str]) -> Result<Vec<usize>> {
    let present: std::collections::BTreeSet<usize> = labels.iter().copied().collect();
    if present.len() < 2 {
        return Err(Error::Degenerate("feature selection needs at least two classes".into()));
    }
    let n_classes = present.iter().max().map_or(0, |m| m + 1);
    let n_features = names.len();
    let scores: Vec<f64> = (0..n_features)
        .map(|j| {
            let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            anova_f(&col, labels, n_classes)
        })
        .collect();
    let median = {
        let mut s = scores.clone();
        s.sort_by(f64::total_cmp);
        let m = s.len() / 2;
        if s.len() % 2 == 1 {
            s[m]
        } else {
            0.5 * s[m - 1] + 0.5 * s[m]
        }
    };
    let mut order: Vec<usize> = (0..n_features).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(Ordering::Equal)
            .then_with(|| names[a].cmp(names[b]))
    });
    let above = order.iter().filter(|&&j| scores[j] > median).count();
    let keep = above.max(MIN_SELECTED.min(n_features));
    let mut chosen: Vec<usize> = order[..keep].to_vec();
    chosen.sort_unstable();
    Ok(chosen)
}
