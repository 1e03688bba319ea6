use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::envelope::envelope_with_reference;
use super::pointwise::pointwise_with_ranks;
use super::{
    align, gzip_len, hilbert_envelope, jsd, ncd_with_len, psd_distance, samples_to_bytes, scalar_deltas, MetricVector,
    METRIC_COUNT,
};
use crate::downsample::DownsampleConfig;
use crate::error::{Error, Result};
use crate::signal::{LabeledDataset, Signal};
use crate::stats::{average_ranks, compensated_sum};

/// An original signal with everything the metrics derive from it alone
/// (ranks, envelope, serialized bytes and compressed size), computed once
/// per signal rather than once per configuration.
#[derive(Debug, Clone)]
pub struct Reference<'a> {
    signal: &'a Signal,
    ranks: Vec<f64>,
    envelope: Vec<f64>,
    envelope_ranks: Vec<f64>,
    bytes: Vec<u8>,
    gzip_len: usize,
}

impl<'a> Reference<'a> {
    pub fn new(signal: &'a Signal) -> Self {
        let bytes = samples_to_bytes(signal.values());
        let gzip_len = gzip_len(&bytes);
        let envelope = hilbert_envelope(signal.values());
        Reference {
            signal,
            ranks: average_ranks(signal.values()),
            envelope_ranks: average_ranks(&envelope),
            envelope,
            bytes,
            gzip_len,
        }
    }

    pub fn signal(&self) -> &Signal {
        self.signal
    }
}

/// All 13 distortion metrics between an original signal and a downsampled
/// copy of it.
pub fn metric_profile(original: &Signal, downsampled: &Signal) -> Result<MetricVector> {
    metric_profile_with(&Reference::new(original), downsampled)
}

pub fn metric_profile_with(reference: &Reference<'_>, downsampled: &Signal) -> Result<MetricVector> {
    let original = reference.signal;
    let (x, rec) = align(original, downsampled).map_err(|e| e.in_metric("align"))?;
    let pw = pointwise_with_ranks(&x, &reference.ranks, &rec).map_err(|e| e.in_metric("pointwise"))?;
    let (env_pcc, env_scc) = envelope_with_reference(&reference.envelope, &reference.envelope_ranks, &rec)
        .map_err(|e| e.in_metric("envelope"))?;
    let y = downsampled.values();
    let sc = scalar_deltas(&x, y).map_err(|e| e.in_metric("scalar"))?;
    let psd = psd_distance(original, downsampled).map_err(|e| e.in_metric("psd_euclidean"))?;
    Ok(MetricVector {
        rmse: pw.rmse,
        nmse: pw.nmse,
        pcc_dist: pw.pcc_dist,
        scc_dist: pw.scc_dist,
        env_pcc_dist: env_pcc,
        env_scc_dist: env_scc,
        zcr_delta: sc.zcr_delta,
        peak_count_delta: sc.peak_count_delta,
        skew_delta: sc.skew_delta,
        kurt_delta: sc.kurt_delta,
        psd_euclidean: psd,
        ncd: ncd_with_len(&reference.bytes, reference.gzip_len, y),
        jsd: jsd(&x, y),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigMetricSummary {
    pub config: DownsampleConfig,
    pub mean_metrics: MetricVector,
    pub std_metrics: MetricVector,
    pub n_pairs: usize,
    /// Pairs left out because a metric was undefined for them.
    pub n_excluded: usize,
}

/// Elementwise mean and population standard deviation of `profiles`.
pub fn summarize_config(
    profiles: &[MetricVector],
    n_excluded: usize,
    config: DownsampleConfig,
) -> Result<ConfigMetricSummary> {
    if profiles.is_empty() {
        return Err(Error::EmptyResult(format!("no metric profiles for {config}")));
    }
    let n = profiles.len() as f64;
    let arrays: Vec<[f64; METRIC_COUNT]> = profiles.iter().map(MetricVector::to_array).collect();
    let mean: [f64; METRIC_COUNT] = std::array::from_fn(|j| compensated_sum(arrays.iter().map(|a| a[j])) / n);
    let std: [f64; METRIC_COUNT] =
        std::array::from_fn(|j| (compensated_sum(arrays.iter().map(|a| (a[j] - mean[j]).powi(2))) / n).sqrt());
    Ok(ConfigMetricSummary {
        config,
        mean_metrics: MetricVector::from_array(mean),
        std_metrics: MetricVector::from_array(std),
        n_pairs: profiles.len(),
        n_excluded,
    })
}

/// Profiles every (original, downsampled) pair of two parallel datasets and
/// summarizes them. Pairs with an undefined metric (a constant original,
/// say) are excluded and counted; any other failure is returned.
pub fn profile_dataset(
    references: &[Reference<'_>],
    downsampled: &LabeledDataset,
    config: DownsampleConfig,
) -> Result<ConfigMetricSummary> {
    if references.len() != downsampled.len() {
        return Err(Error::Mismatch(format!(
            "{} originals but {} downsampled signals",
            references.len(),
            downsampled.len()
        )));
    }
    let results: Vec<Result<MetricVector>> = references
        .par_iter()
        .zip(downsampled.signals().par_iter())
        .map(|(r, d)| metric_profile_with(r, d))
        .collect();
    let mut profiles = Vec::with_capacity(results.len());
    let mut excluded = 0;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(p) => profiles.push(p),
            Err(e) if matches!(e.root(), Error::Degenerate(_)) => excluded += 1,
            Err(e) => return Err(Error::InvalidArgument(format!("signal {i}: {e}")).in_cell(config)),
        }
    }
    summarize_config(&profiles, excluded, config).map_err(|e| e.in_cell(config))
}
