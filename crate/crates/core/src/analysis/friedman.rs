use serde::{Deserialize, Serialize};

use super::special::chi_square_sf;
use crate::error::{Error, Result};
use crate::stats::average_ranks;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedmanResult {
    pub statistic: f64,
    pub p_value: f64,
    /// Mean within-row rank of each column, rank 1 = smallest value.
    pub mean_ranks: Vec<f64>,
}

fn check_matrix(matrix: &[Vec<f64>]) -> Result<usize> {
    if matrix.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 rows, got {}",
            matrix.len()
        )));
    }
    let k = matrix[0].len();
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 columns, got {k}")));
    }
    if matrix.iter().any(|r| r.len() != k) {
        return Err(Error::Length("rows differ in length".into()));
    }
    if matrix.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Data("non-finite entry".into()));
    }
    Ok(k)
}

/// Friedman rank test over the columns (treatments) of a rows (blocks) by
/// columns matrix, with midranks for ties and the usual tie correction.
/// The p-value comes from the chi-square distribution with K - 1 degrees
/// of freedom.
pub fn friedman_test(matrix: &[Vec<f64>]) -> Result<FriedmanResult> {
    let k = check_matrix(matrix)?;
    let n = matrix.len() as f64;
    let kf = k as f64;
    let mut rank_sums = vec![0.0; k];
    let mut tie_term = 0.0;
    for row in matrix {
        let ranks = average_ranks(row);
        for (s, r) in rank_sums.iter_mut().zip(&ranks) {
            *s += r;
        }
        let mut sorted = row.clone();
        sorted.sort_by(f64::total_cmp);
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i + 1;
            while j < sorted.len() && sorted[j] == sorted[i] {
                j += 1;
            }
            let t = (j - i) as f64;
            tie_term += t * t * t - t;
            i = j;
        }
    }
    let mean_ranks = rank_sums.iter().map(|s| s / n).collect();
    let correction = 1.0 - tie_term / (n * kf * (kf * kf - 1.0));
    if correction <= 1e-12 {
        return Ok(FriedmanResult {
            statistic: 0.0,
            p_value: 1.0,
            mean_ranks,
        });
    }
    let ss: f64 = rank_sums.iter().map(|r| r * r).sum();
    let raw = 12.0 / (n * kf * (kf + 1.0)) * ss - 3.0 * n * (kf + 1.0);
    let statistic = (raw / correction).max(0.0);
    Ok(FriedmanResult {
        statistic,
        p_value: chi_square_sf(statistic, kf - 1.0),
        mean_ranks,
    })
}

/// Upper 5% points of the studentized range with infinite degrees of
/// freedom divided by sqrt(2), for K = 2..=30 groups (index K - 2).
/// Computed with scipy.stats.studentized_range.ppf(0.95, K, inf) / sqrt(2).
const NEMENYI_Q_05: [f64; 29] = [
    1.95996, 2.34370, 2.56903, 2.72777, 2.84971, 2.94832, 3.03088, 3.10173, 3.16368, 3.21865, 3.26800, 3.31274,
    3.35362, 3.39123, 3.42604, 3.45842, 3.48868, 3.51707, 3.54380, 3.56904, 3.59295, 3.61565, 3.63725, 3.65786,
    3.67756, 3.69641, 3.71450, 3.73187, 3.74858,
];

pub const NEMENYI_ALPHA: f64 = 0.05;

/// Nemenyi critical difference q(K) * sqrt(K (K + 1) / (6 n)) at alpha 0.05.
pub fn nemenyi_critical_difference(k: usize, n: usize) -> Result<f64> {
    if !(2..=30).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "K = {k} outside the table range 2..=30"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let kf = k as f64;
    Ok(NEMENYI_Q_05[k - 2] * (kf * (kf + 1.0) / (6.0 * n as f64)).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalFactor {
    pub factor: Option<usize>,
    pub friedman: FriedmanResult,
    pub critical_difference: f64,
    /// |mean rank(factor) - mean rank(original)| for each factor, ascending.
    pub rank_gaps: Vec<(usize, f64)>,
}

/// First factor whose accuracy differs from the original's: the Friedman
/// test over {original} and all factors must reject at `alpha`, and the
/// factor's mean-rank gap to the original must exceed the Nemenyi critical
/// difference. Fold accuracies are paired by fold index.
pub fn critical_factor(per_factor: &[(usize, Vec<f64>)], original: &[f64], alpha: f64) -> Result<CriticalFactor> {
    if (alpha - NEMENYI_ALPHA).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "only alpha = {NEMENYI_ALPHA} is tabulated, got {alpha}"
        )));
    }
    let mut factors: Vec<&(usize, Vec<f64>)> = per_factor.iter().collect();
    factors.sort_by_key(|(f, _)| *f);
    let n = original.len();
    if let Some((f, v)) = factors.iter().find(|(_, v)| v.len() != n) {
        return Err(Error::Length(format!(
            "factor {f} has {} fold accuracies, original has {n}",
            v.len()
        )));
    }
    let matrix: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            std::iter::once(original[i])
                .chain(factors.iter().map(|(_, v)| v[i]))
                .collect()
        })
        .collect();
    let friedman = friedman_test(&matrix)?;
    let cd = nemenyi_critical_difference(factors.len() + 1, n)?;
    let gaps: Vec<(usize, f64)> = factors
        .iter()
        .enumerate()
        .map(|(j, (f, _))| (*f, (friedman.mean_ranks[j + 1] - friedman.mean_ranks[0]).abs()))
        .collect();
    let factor = if friedman.p_value < alpha {
        gaps.iter().find(|(_, g)| *g > cd).map(|(f, _)| *f)
    } else {
        None
    };
    Ok(CriticalFactor {
        factor,
        friedman,
        critical_difference: cd,
        rank_gaps: gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_ranked_fixture() {
        // ranks 3,2,1 / 2.5,2.5,1 / 1,3,2 / 3,1.5,1.5; rank sums 9.5, 9, 5.5
        // raw = 0.25 * 201.5 - 48 = 2.375, correction 1 - 12/96 = 0.875
        let m = vec![
            vec![0.9, 0.8, 0.7],
            vec![0.85, 0.85, 0.6],
            vec![0.7, 0.9, 0.8],
            vec![0.95, 0.9, 0.9],
        ];
        let r = friedman_test(&m).unwrap();
        assert!((r.statistic - 2.375 / 0.875).abs() < 1e-12);
        assert!((r.p_value - 0.257_395_142_052_568).abs() < 1e-12);
        assert_eq!(r.mean_ranks, vec![9.5 / 4.0, 9.0 / 4.0, 5.5 / 4.0]);
    }

    #[test]
    fn constant_rows_give_no_evidence() {
        let r = friedman_test(&vec![vec![0.5; 4]; 6]).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
    }

    #[test]
    fn critical_difference_table() {
        let cd = nemenyi_critical_difference(2, 10).unwrap();
        assert!((cd - 1.960 * (0.1f64).sqrt()).abs() < 1e-3);
        for k in 2..30 {
            assert!(NEMENYI_Q_05[k - 1] > NEMENYI_Q_05[k - 2]);
            assert!(nemenyi_critical_difference(k + 1, 10).unwrap() > nemenyi_critical_difference(k, 10).unwrap());
        }
        assert!(nemenyi_critical_difference(31, 10).is_err());
        assert!(nemenyi_critical_difference(1, 10).is_err());
    }

    #[test]
    fn unchanged_factors_have_no_critical_point() {
        let orig = vec![0.9, 0.8, 0.85, 0.95];
        let per: Vec<(usize, Vec<f64>)> = [2, 5, 10].iter().map(|&f| (f, orig.clone())).collect();
        assert_eq!(critical_factor(&per, &orig, 0.05).unwrap().factor, None);
    }
}
