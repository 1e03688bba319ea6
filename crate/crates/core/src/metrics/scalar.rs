use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{find_peaks, kurtosis, skewness, zero_crossing_rate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarDeltas {
    pub zcr_delta: f64,
    pub peak_count_delta: f64,
    pub skew_delta: f64,
    pub kurt_delta: f64,
}

/// Absolute differences of per-signal statistics. `x` and `y` may differ
/// in length; `y` should be the raw downsampled samples.
pub fn scalar_deltas(x: &[f64], y: &[f64]) -> Result<ScalarDeltas> {
    if x.len() < 4 || y.len() < 4 {
        return Err(Error::Length(format!(
            "need at least 4 samples each, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    Ok(ScalarDeltas {
        zcr_delta: (zero_crossing_rate(x) - zero_crossing_rate(y)).abs(),
        peak_count_delta: (find_peaks(x).len() as f64 - find_peaks(y).len() as f64).abs(),
        skew_delta: (skewness(x) - skewness(y)).abs(),
        kurt_delta: (kurtosis(x) - kurtosis(y)).abs(),
    })
}
