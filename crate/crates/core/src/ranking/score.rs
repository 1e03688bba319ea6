use std::cmp::Ordering;
use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::stats::compensated_sum;

fn sign(o: Option<Ordering>) -> i64 {
    match o {
        Some(Ordering::Less) => -1,
        Some(Ordering::Greater) => 1,
        _ => 0,
    }
}

/// Kendall's tau-b between two paired samples. Zero when either side is
/// entirely tied.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Mismatch(format!("{} vs {} values", x.len(), y.len())));
    }
    let n = x.len();
    let (mut s, mut tx, mut ty, mut n0) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let a = sign(x[i].partial_cmp(&x[j]));
            let b = sign(y[i].partial_cmp(&y[j]));
            n0 += 1;
            s += a * b;
            if a == 0 {
                tx += 1;
            }
            if b == 0 {
                ty += 1;
            }
        }
    }
    let denom = (((n0 - tx) * (n0 - ty)) as f64).sqrt();
    Ok(if denom > 0.0 { s as f64 / denom } else { 0.0 })
}

/// Tau between two orderings of the same items.
pub fn kendall_tau<T: Eq + Hash>(order_a: &[T], order_b: &[T]) -> Result<f64> {
    let pos: HashMap<&T, usize> = order_b.iter().enumerate().map(|(i, t)| (t, i)).collect();
    if order_a.len() != order_b.len() || pos.len() != order_b.len() {
        return Err(Error::Mismatch("orderings hold different items".into()));
    }
    let mut y = Vec::with_capacity(order_a.len());
    for t in order_a {
        y.push(
            *pos.get(t)
                .ok_or_else(|| Error::Mismatch("orderings hold different items".into()))? as f64,
        );
    }
    let x: Vec<f64> = (0..order_a.len()).map(|i| i as f64).collect();
    kendall_tau_b(&x, &y)
}

/// sum(w_k C_k) / sum(w_k) with w_k = exp(-lambda * delta_k), over
/// (correct, delta) pairs.
pub fn weighted_accuracy(predictions: &[(bool, f64)], lambda: f64) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::EmptyResult("no predictions to score".into()));
    }
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::InvalidArgument(format!("lambda must be >= 0, got {lambda}")));
    }
    let w: Vec<f64> = predictions.iter().map(|(_, d)| (-lambda * d).exp()).collect();
    let hit = compensated_sum(predictions.iter().zip(&w).filter(|((c, _), _)| *c).map(|(_, w)| *w));
    Ok(hit / compensated_sum(w.iter().copied()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_extremes() {
        let a = ["a", "b", "c", "d"];
        let r = ["d", "c", "b", "a"];
        assert_eq!(kendall_tau(&a, &a).unwrap(), 1.0);
        assert_eq!(kendall_tau(&a, &r).unwrap(), -1.0);
        assert!(kendall_tau(&a, &["a", "b", "c", "e"]).is_err());
    }

    #[test]
    fn tau_b_with_ties() {
        // scipy.stats.kendalltau([1,2,2,3],[1,2,3,3]) = 0.8
        let t = kendall_tau_b(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 3.0]).unwrap();
        assert!((t - 0.8).abs() < 1e-12);
    }

    #[test]
    fn weighted_accuracy_hand_value() {
        let l = 5.0;
        let preds = [(true, 0.0), (false, 2f64.ln() / l)];
        assert!((weighted_accuracy(&preds, l).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(weighted_accuracy(&preds, 0.0).unwrap(), 0.5);
        assert!(weighted_accuracy(&[], 1.0).is_err());
    }
}
