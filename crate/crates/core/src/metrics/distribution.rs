use crate::stats::compensated_sum;

pub const JSD_BINS: usize = 64;
pub const JSD_EPSILON: f64 = 1e-12;

/// Smoothed bin probabilities of `values` over `bins` equal-width bins on
/// [lo, hi]. The top edge belongs to the last bin.
pub fn histogram_probabilities(values: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let mut counts = vec![0.0; bins];
    let width = (hi - lo) / bins as f64;
    for &v in values {
        let b = if width > 0.0 {
            (((v - lo) / width) as usize).min(bins - 1)
        } else {
            0
        };
        counts[b] += 1.0;
    }
    let n = values.len() as f64;
    let p: Vec<f64> = counts.iter().map(|c| c / n + JSD_EPSILON).collect();
    let total = compensated_sum(p.iter().copied());
    p.iter().map(|v| v / total).collect()
}

fn kl(p: &[f64], q: &[f64]) -> f64 {
    compensated_sum(p.iter().zip(q).map(|(a, b)| a * (a / b).log2()))
}

/// Jensen-Shannon divergence (base 2) of the histograms of `x` and `y`
/// over their joint range. Zero when every value is identical.
pub fn jsd(x: &[f64], y: &[f64]) -> f64 {
    let (lo, hi) = x
        .iter()
        .chain(y)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if hi <= lo {
        return 0.0;
    }
    let p = histogram_probabilities(x, lo, hi, JSD_BINS);
    let q = histogram_probabilities(y, lo, hi, JSD_BINS);
    let m: Vec<f64> = p.iter().zip(&q).map(|(a, b)| 0.5 * (a + b)).collect();
    (0.5 * kl(&p, &m) + 0.5 * kl(&q, &m)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_supports_give_one() {
        let x: Vec<f64> = (0..1000).map(|i| i as f64 / 999.0).collect();
        let y: Vec<f64> = x.iter().map(|v| v + 2.0).collect();
        assert!((jsd(&x, &y) - 1.0).abs() < 1e-6);
        assert!(jsd(&x, &x).abs() < 1e-12);
        assert_eq!(jsd(&[3.0; 5], &[3.0; 2]), 0.0);
    }
}
