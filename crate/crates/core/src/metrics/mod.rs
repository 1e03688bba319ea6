//! Distortion metrics between an original signal and its downsampled
//! counterpart. Every entry is a distance: lower means more similar, and
//! correlations are reported as 1 - r.

mod align;
mod compression;
mod distribution;
mod envelope;
mod pointwise;
mod profile;
mod scalar;
mod spectral;

use serde::{Deserialize, Serialize};

pub use align::align;
pub use compression::{gzip_len, ncd, ncd_with_len, samples_to_bytes, GZIP_LEVEL};
pub use distribution::{histogram_probabilities, jsd, JSD_BINS, JSD_EPSILON};
pub use envelope::{envelope_metrics, hilbert_envelope};
pub use pointwise::{pointwise_metrics, Pointwise};
pub use profile::{
    metric_profile, metric_profile_with, profile_dataset, summarize_config, ConfigMetricSummary, Reference,
};
pub use scalar::{scalar_deltas, ScalarDeltas};
pub use spectral::{default_segment_len, psd_distance, welch_psd, Psd};

pub const METRIC_COUNT: usize = 13;

pub const METRIC_NAMES: [&str; METRIC_COUNT] = [
    "rmse",
    "nmse",
    "pcc_dist",
    "scc_dist",
    "env_pcc_dist",
    "env_scc_dist",
    "zcr_delta",
    "peak_count_delta",
    "skew_delta",
    "kurt_delta",
    "psd_euclidean",
    "ncd",
    "jsd",
];

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricVector {
    pub rmse: f64,
    pub nmse: f64,
    pub pcc_dist: f64,
    pub scc_dist: f64,
    pub env_pcc_dist: f64,
    pub env_scc_dist: f64,
    pub zcr_delta: f64,
    pub peak_count_delta: f64,
    pub skew_delta: f64,
    pub kurt_delta: f64,
    pub psd_euclidean: f64,
    pub ncd: f64,
    pub jsd: f64,
}

impl MetricVector {
    /// Entries in `METRIC_NAMES` order.
    pub fn to_array(&self) -> [f64; METRIC_COUNT] {
        [
            self.rmse,
            self.nmse,
            self.pcc_dist,
            self.scc_dist,
            self.env_pcc_dist,
            self.env_scc_dist,
            self.zcr_delta,
            self.peak_count_delta,
            self.skew_delta,
            self.kurt_delta,
            self.psd_euclidean,
            self.ncd,
            self.jsd,
        ]
    }

    pub fn from_array(a: [f64; METRIC_COUNT]) -> Self {
        MetricVector {
            rmse: a[0],
            nmse: a[1],
            pcc_dist: a[2],
            scc_dist: a[3],
            env_pcc_dist: a[4],
            env_scc_dist: a[5],
            zcr_delta: a[6],
            peak_count_delta: a[7],
            skew_delta: a[8],
            kurt_delta: a[9],
            psd_euclidean: a[10],
            ncd: a[11],
            jsd: a[12],
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        METRIC_NAMES.iter().position(|n| *n == name).map(|i| self.to_array()[i])
    }

    /// Elementwise `self - other`.
    pub fn sub(&self, other: &MetricVector) -> MetricVector {
        let (a, b) = (self.to_array(), other.to_array());
        MetricVector::from_array(std::array::from_fn(|i| a[i] - b[i]))
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
