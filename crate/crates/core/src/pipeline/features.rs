use std::time::Instant;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{LabeledDataset, Signal};
use crate::stats::{
    compensated_sum, find_peaks, kurtosis, mean, quantile_sorted, skewness, std_dev, zero_crossing_rate,
};

pub const FEATURE_COUNT: usize = 16;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "mean",
    "std",
    "skewness",
    "kurtosis",
    "rms",
    "peak_to_peak",
    "zcr",
    "peak_count",
    "smoothed_peak_count_w1",
    "smoothed_peak_count_w5",
    "quantile_change_0_20",
    "quantile_change_40_60",
    "quantile_change_80_100",
    "spectral_centroid",
    "spectral_rolloff_85",
    "mean_abs_change",
];

/// Shortest signal features can be extracted from.
pub const MIN_FEATURE_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: [f64; FEATURE_COUNT],
    /// Number of entries that came out non-finite and were replaced by 0.
    pub non_finite: usize,
}

/// Centred moving average of width `w`, truncated at the ends.
fn moving_average(x: &[f64], w: usize) -> Vec<f64> {
    if w <= 1 {
        return x.to_vec();
    }
    let n = x.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in x {
        prefix.push(prefix.last().unwrap() + v);
    }
    let (before, after) = ((w - 1) / 2, w / 2);
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(before);
            let hi = (i + after + 1).min(n);
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// Peaks that survive smoothing at scale `w`: after a width-`w` moving
/// average, the number of runs lying above mean + 1 std of the smoothed
/// signal. Smoothing widens a peak of raw width r to about r + w - 1
/// samples, so runs must span 2w - 1 samples, i.e. the peak itself must be
/// at least `w` samples wide.
pub fn smoothed_peak_count(x: &[f64], w: usize) -> usize {
    let s = moving_average(x, w);
    let threshold = mean(&s) + std_dev(&s);
    let min_run = 2 * w.max(1) - 1;
    let mut count = 0;
    let mut run = 0;
    for v in s.iter().chain(std::iter::once(&f64::NEG_INFINITY)) {
        if *v > threshold {
            run += 1;
        } else {
            if run >= min_run {
                count += 1;
            }
            run = 0;
        }
    }
    count
}

/// Mean absolute successive difference over the steps whose both ends lie
/// inside the [q_lo, q_hi] quantile corridor; 0 when there are none.
pub fn quantile_change(x: &[f64], sorted: &[f64], q_lo: f64, q_hi: f64) -> f64 {
    let lo = quantile_sorted(sorted, q_lo);
    let hi = quantile_sorted(sorted, q_hi);
    let inside = |v: f64| v >= lo && v <= hi;
    let (sum, n) = x
        .windows(2)
        .filter(|p| inside(p[0]) && inside(p[1]))
        .fold((0.0, 0usize), |(s, n), p| (s + (p[1] - p[0]).abs(), n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Spectral centroid and 85% rolloff frequency of the mean-removed signal's
/// power spectrum. Both are 0 for a signal without power.
pub fn spectral_shape(x: &[f64], sample_rate_hz: f64) -> (f64, f64) {
    let n = x.len();
    let m = mean(x);
    let mut buf: Vec<Complex<f64>> = x.iter().map(|v| Complex::new(v - m, 0.0)).collect();
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    let power: Vec<f64> = buf[..n / 2 + 1].iter().map(|c| c.norm_sqr()).collect();
    let total = compensated_sum(power.iter().copied());
    if total <= 0.0 {
        return (0.0, 0.0);
    }
    let df = sample_rate_hz / n as f64;
    let centroid = compensated_sum(power.iter().enumerate().map(|(i, p)| i as f64 * df * p)) / total;
    let mut cum = 0.0;
    let mut rolloff = (power.len() - 1) as f64 * df;
    for (i, p) in power.iter().enumerate() {
        cum += p;
        if cum >= 0.85 * total {
            rolloff = i as f64 * df;
            break;
        }
    }
    (centroid, rolloff)
}

fn compute(signal: &Signal) -> [f64; FEATURE_COUNT] {
    let x = signal.values();
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (centroid, rolloff) = spectral_shape(x, signal.sample_rate_hz());
    let mac = compensated_sum(x.windows(2).map(|p| (p[1] - p[0]).abs())) / (x.len() - 1) as f64;
    [
        mean(x),
        std_dev(x),
        skewness(x),
        kurtosis(x),
        (compensated_sum(x.iter().map(|v| v * v)) / x.len() as f64).sqrt(),
        sorted[sorted.len() - 1] - sorted[0],
        zero_crossing_rate(x),
        find_peaks(x).len() as f64,
        smoothed_peak_count(x, 1) as f64,
        smoothed_peak_count(x, 5) as f64,
        quantile_change(x, &sorted, 0.0, 0.2),
        quantile_change(x, &sorted, 0.4, 0.6),
        quantile_change(x, &sorted, 0.8, 1.0),
        centroid,
        rolloff,
        mac,
    ]
}

/// Computes the feature set of one signal and the wall time it took.
pub fn extract_features(signal: &Signal) -> Result<(FeatureVector, f64)> {
    if signal.len() < MIN_FEATURE_LEN {
        return Err(Error::Length(format!(
            "feature extraction needs {MIN_FEATURE_LEN} samples, got {}",
            signal.len()
        )));
    }
    let start = Instant::now();
    let mut values = compute(signal);
    let elapsed = start.elapsed().as_secs_f64();
    let mut non_finite = 0;
    for v in &mut values {
        if !v.is_finite() {
            *v = 0.0;
            non_finite += 1;
        }
    }
    Ok((FeatureVector { values, non_finite }, elapsed))
}

/// Features of every signal in a dataset, with the labels as class indices.
#[derive(Debug, Clone)]
pub struct FeatureTable {
    pub rows: Vec<[f64; FEATURE_COUNT]>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
    pub groups: Option<Vec<String>>,
    pub extraction_times_s: Vec<f64>,
    pub non_finite: usize,
}

impl FeatureTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn total_extraction_time_s(&self) -> f64 {
        self.extraction_times_s.iter().sum()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

/// Extracts features for the whole dataset. With `parallel` false the
/// signals are processed one after another on the calling thread, which is
/// what timing comparisons need.
pub fn extract_dataset(dataset: &LabeledDataset, parallel: bool) -> Result<FeatureTable> {
    let run =
        |(i, s): (usize, &Signal)| extract_features(s).map_err(|e| Error::InvalidArgument(format!("signal {i}: {e}")));
    let results: Vec<Result<(FeatureVector, f64)>> = if parallel {
        dataset.signals().par_iter().enumerate().map(run).collect()
    } else {
        dataset.signals().iter().enumerate().map(run).collect()
    };
    let mut rows = Vec::with_capacity(results.len());
    let mut times = Vec::with_capacity(results.len());
    let mut non_finite = 0;
    for r in results {
        let (fv, t) = r?;
        rows.push(fv.values);
        times.push(t);
        non_finite += fv.non_finite;
    }
    Ok(FeatureTable {
        rows,
        labels: dataset.label_indices(),
        class_names: dataset.class_names().to_vec(),
        groups: dataset.groups().map(<[String]>::to_vec),
        extraction_times_s: times,
        non_finite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feature(name: &str) -> usize {
        FEATURE_NAMES.iter().position(|n| *n == name).unwrap()
    }

    #[test]
    fn constant_signal_features() {
        let s = Signal::new(vec![2.5; 64], 100.0).unwrap();
        let (f, _) = extract_features(&s).unwrap();
        assert_eq!(f.non_finite, 0);
        for name in [
            "std",
            "zcr",
            "peak_count",
            "smoothed_peak_count_w1",
            "smoothed_peak_count_w5",
        ] {
            assert_eq!(f.values[feature(name)], 0.0, "{name}");
        }
        assert_eq!(f.values[feature("mean")], 2.5);
    }

    #[test]
    fn short_signal_is_rejected() {
        let s = Signal::new(vec![1.0; 8], 1.0).unwrap();
        assert!(matches!(extract_features(&s), Err(Error::Length(_))));
    }

    #[test]
    fn moving_average_keeps_constants() {
        let m = moving_average(&[3.0; 10], 5);
        assert!(m.iter().all(|v| (v - 3.0).abs() < 1e-12));
        assert_eq!(moving_average(&[1.0, 2.0, 3.0], 2), vec![1.5, 2.5, 3.0]);
    }

    #[test]
    fn narrow_spikes_vanish_at_width_five() {
        let mut x = vec![0.0; 200];
        for c in [20, 70, 120, 170] {
            x[c] = 1.0;
        }
        assert_eq!(smoothed_peak_count(&x, 1), 4);
        assert_eq!(smoothed_peak_count(&x, 5), 0);
        let mut wide = vec![0.0; 200];
        for c in [20, 70, 120, 170] {
            for v in &mut wide[c..c + 12] {
                *v = 1.0;
            }
        }
        assert_eq!(smoothed_peak_count(&wide, 5), 4);
    }

    #[test]
    fn quantile_change_counts_inner_steps_only() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let mut sorted = x.to_vec();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(quantile_change(&x, &sorted, 0.0, 1.0), 1.0);
        assert_eq!(quantile_change(&x, &sorted, 0.4, 0.6), 0.0);
    }

    #[test]
    fn spectral_shape_of_a_pure_tone() {
        let x: Vec<f64> = (0..1000)
            .map(|i| (2.0 * std::f64::consts::PI * 50.0 * i as f64 / 1000.0).sin())
            .collect();
        let (c, r) = spectral_shape(&x, 1000.0);
        assert!((c - 50.0).abs() < 1e-6);
        assert_eq!(r, 50.0);
    }
}
