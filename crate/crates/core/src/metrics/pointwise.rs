use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{average_ranks, compensated_sum, pearson, variance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pointwise {
    pub rmse: f64,
    pub nmse: f64,
    pub pcc_dist: f64,
    pub scc_dist: f64,
}

pub(crate) fn check_pair(x: &[f64], y: &[f64], min_len: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Length(format!(
            "inputs differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < min_len {
        return Err(Error::Length(format!(
            "need at least {min_len} samples, got {}",
            x.len()
        )));
    }
    Ok(())
}

/// 1 - r. A constant `y` has no linear relation with `x`, so r = 0 there;
/// a constant `x` is reported as degenerate.
pub(crate) fn correlation_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if variance(x) <= 0.0 {
        return Err(Error::Degenerate("reference has zero variance".into()));
    }
    Ok(1.0 - pearson(x, y).unwrap_or(0.0))
}

/// RMSE, NMSE and the inverted Pearson and Spearman correlations of two
/// aligned sequences.
pub fn pointwise_metrics(x: &[f64], y: &[f64]) -> Result<Pointwise> {
    pointwise_with_ranks(x, &average_ranks(x), y)
}

/// As [`pointwise_metrics`] with the ranks of `x` precomputed.
pub(crate) fn pointwise_with_ranks(x: &[f64], x_ranks: &[f64], y: &[f64]) -> Result<Pointwise> {
    check_pair(x, y, 2)?;
    let n = x.len() as f64;
    let sse = compensated_sum(x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)));
    let var_x = variance(x);
    if var_x <= 0.0 {
        return Err(Error::Degenerate("reference has zero variance".into()));
    }
    Ok(Pointwise {
        rmse: (sse / n).sqrt(),
        nmse: sse / (var_x * n),
        pcc_dist: correlation_distance(x, y)?,
        scc_dist: correlation_distance(x_ranks, &average_ranks(y))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_zero() {
        let x = [1.0, 4.0, 2.0, 8.0, 5.0];
        let p = pointwise_metrics(&x, &x).unwrap();
        assert_eq!(p.rmse, 0.0);
        assert_eq!(p.nmse, 0.0);
        assert!(p.pcc_dist.abs() < 1e-15 && p.scc_dist.abs() < 1e-15);
    }

    #[test]
    fn mean_prediction_has_unit_nmse() {
        let x = [1.0, 4.0, 2.0, 8.0, 5.0];
        let y = [4.0; 5];
        let p = pointwise_metrics(&x, &y).unwrap();
        assert!((p.nmse - 1.0).abs() < 1e-12);
        assert_eq!(p.pcc_dist, 1.0);
    }

    #[test]
    fn negation_gives_distance_two() {
        let x = [-1.5, 0.5, 2.0, -1.0];
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        let p = pointwise_metrics(&x, &y).unwrap();
        assert!((p.pcc_dist - 2.0).abs() < 1e-12);
        assert!((p.scc_dist - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_reference_is_degenerate() {
        assert!(matches!(
            pointwise_metrics(&[1.0; 4], &[1.0, 2.0, 3.0, 4.0]),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(pointwise_metrics(&[1.0], &[1.0]), Err(Error::Length(_))));
    }
}
