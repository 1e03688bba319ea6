//! Decimate, MinMax, M4, LTTB and MinMaxLTTB with a shared factor
//! convention: factor k targets about N / k output points, so MinMax uses
//! groups of 2k samples, M4 groups of 4k and LTTB buckets of about k.
//!
//! Group methods never low-pass filter their input; every output value is
//! an input value and carries its parent index.

pub mod fir;
mod grid;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Signal;
use crate::stats::{argmax_first, argmin_first};

pub use grid::{apply_grid, full_factor_grid, write_grid_result, GridResult};

pub const DEFAULT_PRESELECT_RATIO: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    Decimate,
    MinMax,
    M4,
    #[serde(rename = "LTTB")]
    Lttb,
    #[serde(rename = "MinMaxLTTB")]
    MinMaxLttb,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Decimate,
        Algorithm::M4,
        Algorithm::MinMax,
        Algorithm::Lttb,
        Algorithm::MinMaxLttb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Decimate => "Decimate",
            Algorithm::MinMax => "MinMax",
            Algorithm::M4 => "M4",
            Algorithm::Lttb => "LTTB",
            Algorithm::MinMaxLttb => "MinMaxLTTB",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm '{s}'")))
    }
}

/// One grid cell: an algorithm and a factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DownsampleConfig {
    pub algorithm: Algorithm,
    pub factor: usize,
    #[serde(default = "default_ratio")]
    pub preselect_ratio: usize,
}

fn default_ratio() -> usize {
    DEFAULT_PRESELECT_RATIO
}

impl DownsampleConfig {
    pub fn new(algorithm: Algorithm, factor: usize) -> Self {
        DownsampleConfig {
            algorithm,
            factor,
            preselect_ratio: DEFAULT_PRESELECT_RATIO,
        }
    }

    pub fn with_ratio(mut self, ratio: usize) -> Self {
        self.preselect_ratio = ratio;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.factor < 1 {
            return Err(Error::InvalidArgument("factor must be >= 1".into()));
        }
        if self.algorithm == Algorithm::MinMaxLttb && self.preselect_ratio < 2 {
            return Err(Error::InvalidArgument(format!(
                "MinMaxLTTB pre-selection ratio must be >= 2, got {}",
                self.preselect_ratio
            )));
        }
        Ok(())
    }

    /// Deterministic order: algorithm name, then factor.
    pub fn sort_key_cmp(&self, other: &Self) -> Ordering {
        self.algorithm
            .name()
            .cmp(other.algorithm.name())
            .then(self.factor.cmp(&other.factor))
            .then(self.preselect_ratio.cmp(&other.preselect_ratio))
    }
}

impl fmt::Display for DownsampleConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.algorithm, self.factor)
    }
}

/// Applies one configuration to one signal.
pub fn downsample(signal: &Signal, config: &DownsampleConfig) -> Result<Signal> {
    config.validate()?;
    let k = config.factor;
    match config.algorithm {
        Algorithm::Decimate => decimate(signal, k),
        Algorithm::MinMax => minmax(signal, k),
        Algorithm::M4 => m4(signal, k),
        Algorithm::Lttb => lttb(signal, k),
        Algorithm::MinMaxLttb => minmaxlttb(signal, k, config.preselect_ratio),
    }
}

/// Anti-aliased decimation: zero-phase Hamming FIR (order 20 * stage,
/// cutoff 1/stage of Nyquist) then every stage-th sample, cascaded for
/// factors above 13. Output length is ceil(N / k).
pub fn decimate(signal: &Signal, k: usize) -> Result<Signal> {
    if k < 1 {
        return Err(Error::InvalidArgument("factor must be >= 1".into()));
    }
    if k == 1 {
        return Signal::strided(signal.values().to_vec(), signal.sample_rate_hz(), 1);
    }
    let mut values = signal.values().to_vec();
    for q in fir::decimation_stages(k) {
        let order = fir::stage_order(q);
        if values.len() < order + 1 {
            return Err(Error::Length(format!(
                "decimation stage {q} needs at least {} samples, have {}",
                order + 1,
                values.len()
            )));
        }
        let taps = fir::lowpass_hamming(order, 1.0 / q as f64);
        values = fir::filtfilt_subsample(&values, &taps, q);
    }
    Signal::strided(values, signal.sample_rate_hz() / k as f64, k)
}

/// Group boundaries of fixed `size`; a remainder shorter than one group is
/// absorbed by the last group. Requires `n >= size`.
pub fn group_bounds(n: usize, size: usize) -> impl Iterator<Item = (usize, usize)> {
    let groups = (n / size).max(1);
    (0..groups).map(move |g| {
        let start = g * size;
        let end = if g + 1 == groups { n } else { start + size };
        (start, end)
    })
}

/// Indices of the first minimum and first maximum of each group of
/// `group_size`, in time order, duplicates removed.
pub fn minmax_indices(values: &[f64], group_size: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(2 * values.len() / group_size.max(1) + 2);
    for (start, end) in group_bounds(values.len(), group_size) {
        let group = &values[start..end];
        let lo = start + argmin_first(group);
        let hi = start + argmax_first(group);
        out.push(lo.min(hi));
        if lo != hi {
            out.push(lo.max(hi));
        }
    }
    out
}

/// Indices of {first, argmin, argmax, last} of each group of `group_size`,
/// in time order, duplicates removed.
pub fn m4_indices(values: &[f64], group_size: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(4 * values.len() / group_size.max(1) + 4);
    for (start, end) in group_bounds(values.len(), group_size) {
        let group = &values[start..end];
        let mut picks = [start, start + argmin_first(group), start + argmax_first(group), end - 1];
        picks.sort_unstable();
        let mut last = None;
        for p in picks {
            if last != Some(p) {
                out.push(p);
                last = Some(p);
            }
        }
    }
    out
}

fn select(signal: &Signal, indices: Vec<usize>) -> Result<Signal> {
    let values: Vec<f64> = indices.iter().map(|&i| signal.values()[i]).collect();
    // keep the duration: effective rate scales with the retained fraction
    let rate = signal.sample_rate_hz() * values.len() as f64 / signal.len() as f64;
    Signal::selected(values, rate, indices, signal.len())
}

pub fn minmax(signal: &Signal, k: usize) -> Result<Signal> {
    if k < 1 {
        return Err(Error::InvalidArgument("factor must be >= 1".into()));
    }
    let size = 2 * k;
    if signal.len() < size {
        return Err(Error::Length(format!(
            "MinMax factor {k} needs at least {size} samples, have {}",
            signal.len()
        )));
    }
    select(signal, minmax_indices(signal.values(), size))
}

pub fn m4(signal: &Signal, k: usize) -> Result<Signal> {
    if k < 1 {
        return Err(Error::InvalidArgument("factor must be >= 1".into()));
    }
    let size = 4 * k;
    if signal.len() < size {
        return Err(Error::Length(format!(
            "M4 factor {k} needs at least {size} samples, have {}",
            signal.len()
        )));
    }
    select(signal, m4_indices(signal.values(), size))
}

fn lttb_target(signal: &Signal, k: usize) -> Result<usize> {
    if k < 1 {
        return Err(Error::InvalidArgument("factor must be >= 1".into()));
    }
    let n_out = signal.len() / k;
    if n_out < 2 {
        return Err(Error::Length(format!(
            "factor {k} too large for {} samples: LTTB needs at least 2 output points",
            signal.len()
        )));
    }
    Ok(n_out)
}

/// Largest-Triangle-Three-Buckets over points (`xs[i]`, `ys[i]`). Returns
/// positions into the inputs. First and last points are always kept; the
/// interior 1..n-1 is split into `n_out - 2` integer buckets
/// [1 + i(n-2)/(n_out-2), 1 + (i+1)(n-2)/(n_out-2)); each bucket keeps the
/// point forming the largest triangle with the previously kept point and
/// the mean point of the next bucket (the final point for the last bucket).
/// Area ties keep the earliest point.
pub fn lttb_select(xs: &[f64], ys: &[f64], n_out: usize) -> Vec<usize> {
    let n = xs.len();
    debug_assert_eq!(n, ys.len());
    if n_out >= n || n <= 2 {
        return (0..n).collect();
    }
    if n_out <= 2 {
        return vec![0, n - 1];
    }
    let buckets = n_out - 2;
    let bound = |i: usize| (1 + i * (n - 2) / buckets).min(n);
    let mut out = Vec::with_capacity(n_out);
    out.push(0);
    let mut a = 0usize;
    for i in 0..buckets {
        let (start, end) = (bound(i), bound(i + 1));
        let (next_start, next_end) = if i + 1 == buckets {
            (n - 1, n)
        } else {
            (bound(i + 1), bound(i + 2))
        };
        let span = (next_end - next_start) as f64;
        let avg_x = xs[next_start..next_end].iter().sum::<f64>() / span;
        let avg_y = ys[next_start..next_end].iter().sum::<f64>() / span;
        let (ax, ay) = (xs[a], ys[a]);
        let mut best = start;
        let mut best_area = -1.0;
        for j in start..end {
            let area = ((ax - avg_x) * (ys[j] - ay) - (ax - xs[j]) * (avg_y - ay)).abs() * 0.5;
            if area > best_area {
                best_area = area;
                best = j;
            }
        }
        out.push(best);
        a = best;
    }
    out.push(n - 1);
    out
}

pub fn lttb(signal: &Signal, k: usize) -> Result<Signal> {
    let n_out = lttb_target(signal, k)?;
    let xs: Vec<f64> = (0..signal.len()).map(|i| i as f64).collect();
    select(signal, lttb_select(&xs, signal.values(), n_out))
}

/// Parent indices MinMaxLTTB hands to LTTB: min/max of sub-groups sized so
/// that about `ratio * n_out` points survive, plus the first and last
/// sample. `None` when the pre-selection would keep everything.
pub fn minmaxlttb_preselect(values: &[f64], n_out: usize, ratio: usize) -> Option<Vec<usize>> {
    let n = values.len();
    if ratio * n_out >= n {
        return None;
    }
    let size = (2 * n / (ratio * n_out)).max(2);
    let mut idx = minmax_indices(values, size);
    if idx.first() != Some(&0) {
        idx.insert(0, 0);
    }
    if idx.last() != Some(&(n - 1)) {
        idx.push(n - 1);
    }
    Some(idx)
}

pub fn minmaxlttb(signal: &Signal, k: usize, ratio: usize) -> Result<Signal> {
    if ratio < 2 {
        return Err(Error::InvalidArgument(format!(
            "pre-selection ratio must be >= 2, got {ratio}"
        )));
    }
    let n_out = lttb_target(signal, k)?;
    let Some(pre) = minmaxlttb_preselect(signal.values(), n_out, ratio) else {
        return lttb(signal, k);
    };
    let xs: Vec<f64> = pre.iter().map(|&i| i as f64).collect();
    let ys: Vec<f64> = pre.iter().map(|&i| signal.values()[i]).collect();
    let picked = lttb_select(&xs, &ys, n_out);
    select(signal, picked.into_iter().map(|p| pre[p]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(values: Vec<f64>) -> Signal {
        Signal::new(values, 100.0).unwrap()
    }

    #[test]
    fn minmax_single_group_example() {
        let s = minmax(&sig(vec![0.0, 5.0, 1.0, 4.0, 2.0, 3.0]), 3).unwrap();
        assert_eq!(s.source_indices().unwrap(), &[0, 1]);
        assert_eq!(s.values(), &[0.0, 5.0]);
    }

    #[test]
    fn m4_keeps_all_four_distinct_picks() {
        let s = m4(&sig(vec![1.0, 9.0, -3.0, 4.0]), 1).unwrap();
        assert_eq!(s.source_indices().unwrap(), &[0, 1, 2, 3]);
    }

    #[test]
    fn m4_ramp_and_constant_keep_two_per_group() {
        let ramp: Vec<f64> = (0..16).map(f64::from).collect();
        assert_eq!(m4(&sig(ramp), 2).unwrap().source_indices().unwrap(), &[0, 7, 8, 15]);
        let flat = m4(&sig(vec![2.0; 8]), 2).unwrap();
        assert_eq!(flat.source_indices().unwrap(), &[0, 7]);
    }

    #[test]
    fn minmax_ramp_picks_group_ends() {
        let ramp: Vec<f64> = (0..20).map(f64::from).collect();
        let s = minmax(&sig(ramp), 5).unwrap();
        assert_eq!(s.source_indices().unwrap(), &[0, 9, 10, 19]);
    }

    #[test]
    fn remainder_is_absorbed_by_last_group() {
        let bounds: Vec<_> = group_bounds(13, 4).collect();
        assert_eq!(bounds, vec![(0, 4), (4, 8), (8, 13)]);
    }

    #[test]
    fn lttb_factor_one_is_identity() {
        let v: Vec<f64> = (0..50).map(|i| (i as f64 * 0.7).sin()).collect();
        let s = lttb(&sig(v.clone()), 1).unwrap();
        assert_eq!(s.values(), v.as_slice());
        assert_eq!(s.source_indices().unwrap(), (0..50).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn lttb_rejects_too_large_factor() {
        assert!(matches!(lttb(&sig(vec![1.0; 10]), 6), Err(Error::Length(_))));
    }

    #[test]
    fn lttb_keeps_endpoints_and_length() {
        let v: Vec<f64> = (0..1000).map(|i| ((i * 37 % 101) as f64).sin()).collect();
        let s = lttb(&sig(v), 7).unwrap();
        assert_eq!(s.len(), 1000 / 7);
        let idx = s.source_indices().unwrap();
        assert_eq!(idx[0], 0);
        assert_eq!(*idx.last().unwrap(), 999);
    }

    #[test]
    fn minmaxlttb_degenerates_to_lttb() {
        let v: Vec<f64> = (0..40).map(|i| ((i * 13 % 7) as f64).cos()).collect();
        // ratio * n_out = 4 * 20 >= 40
        let a = minmaxlttb(&sig(v.clone()), 2, 4).unwrap();
        let b = lttb(&sig(v), 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn decimate_identity_and_length() {
        let v: Vec<f64> = (0..500).map(|i| (i as f64 * 0.01).sin()).collect();
        let s = decimate(&sig(v.clone()), 1).unwrap();
        assert_eq!(s.values(), v.as_slice());
        let d = decimate(&sig(v), 7).unwrap();
        assert_eq!(d.len(), 500usize.div_ceil(7));
        assert!((d.sample_rate_hz() - 100.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn decimate_too_short_is_length_error() {
        assert!(matches!(decimate(&sig(vec![0.0; 100]), 10), Err(Error::Length(_))));
    }

    #[test]
    fn config_parsing_and_order() {
        assert_eq!("lttb".parse::<Algorithm>().unwrap(), Algorithm::Lttb);
        assert_eq!("MinMaxLTTB".parse::<Algorithm>().unwrap(), Algorithm::MinMaxLttb);
        assert!("foo".parse::<Algorithm>().is_err());
        let a = DownsampleConfig::new(Algorithm::Lttb, 5);
        let b = DownsampleConfig::new(Algorithm::Decimate, 50);
        assert_eq!(b.sort_key_cmp(&a), Ordering::Less);
        assert!(DownsampleConfig::new(Algorithm::MinMaxLttb, 2)
            .with_ratio(1)
            .validate()
            .is_err());
    }
}
