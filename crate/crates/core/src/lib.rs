//! Tools for measuring how much information a time series loses when it is
//! downsampled: a grid of downsampling algorithms and factors, shape
//! distortion metrics between each original and downsampled signal, a timed
//! feature-based classification harness, a pairwise ranker that orders
//! configurations from the metrics alone, and post-hoc analyses of the
//! speedup/accuracy trade-off and of the feature space.

pub mod analysis;
pub mod downsample;
pub mod error;
pub mod metrics;
pub mod pipeline;
pub mod ranking;
pub mod signal;
pub mod stats;
pub mod workflow;

pub use error::{Error, Result};
