//! Timed feature extraction, ANOVA feature filtering and cross-validated
//! k-nearest-neighbour classification with per-class diagnostics.

mod cv;
mod features;
mod knn;
mod select;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use cv::{
    assign_folds, classification_scores, cross_validate, evaluate_fold, per_class_rates, ClassRates,
    ClassificationScores, CvOutcome, FoldModel, FoldResults, FoldStrategy, PERMUTATION_REPEATS,
};
pub use features::{
    extract_dataset, extract_features, quantile_change, smoothed_peak_count, spectral_shape, FeatureTable,
    FeatureVector, FEATURE_COUNT, FEATURE_NAMES, MIN_FEATURE_LEN,
};
pub use knn::{knn_predict, Standardizer, KNN_K};
pub use select::{anova_f, select_features, MIN_SELECTED};

use crate::downsample::DownsampleConfig;
use crate::error::Result;

/// The data a classifier was evaluated on: the untouched signals or one
/// downsampling configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Treatment {
    Original,
    Downsampled(DownsampleConfig),
}

impl Treatment {
    pub fn config(&self) -> Option<&DownsampleConfig> {
        match self {
            Treatment::Original => None,
            Treatment::Downsampled(c) => Some(c),
        }
    }

    /// Original sorts first, then configurations by algorithm and factor.
    pub fn sort_key_cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Treatment::Original, Treatment::Original) => std::cmp::Ordering::Equal,
            (Treatment::Original, _) => std::cmp::Ordering::Less,
            (_, Treatment::Original) => std::cmp::Ordering::Greater,
            (Treatment::Downsampled(a), Treatment::Downsampled(b)) => a.sort_key_cmp(b),
        }
    }

    pub fn algorithm_name(&self) -> &'static str {
        match self {
            Treatment::Original => "Original",
            Treatment::Downsampled(c) => c.algorithm.name(),
        }
    }

    /// Factor 1 for the original.
    pub fn factor(&self) -> usize {
        self.config().map_or(1, |c| c.factor)
    }
}

impl fmt::Display for Treatment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Treatment::Original => f.write_str("Original"),
            Treatment::Downsampled(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEvaluation {
    pub treatment: Treatment,
    pub folds: Vec<FoldResults>,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub fold_strategy: FoldStrategy,
    /// Features replaced by 0 because they were not finite.
    pub non_finite_features: usize,
    #[serde(skip)]
    pub extraction_time_s: f64,
}

impl ConfigEvaluation {
    pub fn fold_accuracies(&self) -> Vec<f64> {
        self.folds.iter().map(|f| f.accuracy).collect()
    }

    /// Per-feature importance averaged over folds, in `FEATURE_NAMES` order.
    pub fn mean_importances(&self) -> Vec<f64> {
        FEATURE_NAMES
            .iter()
            .map(|n| self.folds.iter().map(|f| f.feature_importances[*n]).sum::<f64>() / self.folds.len() as f64)
            .collect()
    }

    pub fn fold_importances(&self, fold: usize) -> Vec<f64> {
        FEATURE_NAMES
            .iter()
            .map(|n| self.folds[fold].feature_importances[*n])
            .collect()
    }
}

/// Cross-validates a feature table and labels the outcome with `treatment`.
pub fn evaluate(table: &FeatureTable, treatment: Treatment, folds: usize, seed: u64) -> Result<ConfigEvaluation> {
    let cv = cross_validate(table, folds, seed)?;
    Ok(ConfigEvaluation {
        treatment,
        mean_accuracy: cv.mean_accuracy,
        std_accuracy: cv.std_accuracy,
        fold_strategy: cv.strategy,
        non_finite_features: table.non_finite,
        extraction_time_s: table.total_extraction_time_s(),
        folds: cv.folds,
    })
}
