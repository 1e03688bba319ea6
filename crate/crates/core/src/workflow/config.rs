use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::downsample::{full_factor_grid, Algorithm, DownsampleConfig, DEFAULT_PRESELECT_RATIO};
use crate::error::{Error, Result};
use crate::ranking::{DEFAULT_L2, DEFAULT_LAMBDAS};
use crate::signal::{load_dataset, synth_dataset, DataFormat, LabeledDataset, MuapSpec};

/// The shipped synthetic configuration, used when no config file is given.
pub const BUILTIN_CONFIG: &str = include_str!("../../configs/synthetic.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetSource {
    /// Files described by a dataset manifest in `path` (or one CSV file).
    Files {
        path: PathBuf,
        format: DataFormat,
    },
    Synth(SynthSource),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSource {
    pub classes: BTreeMap<String, MuapSpec>,
    pub n_per_class: usize,
    pub sample_rate_hz: f64,
    pub seed: u64,
}

/// Everything a workflow run needs. Precedence, lowest first: built-in
/// defaults, the config file, command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkflowConfig {
    pub dataset: DatasetSource,
    #[serde(default = "all_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "full_factor_grid")]
    pub factors: Vec<usize>,
    #[serde(default = "default_ratio")]
    pub preselect_ratio: usize,
    /// Cut every recording into segments of this length; none keeps them whole.
    #[serde(default)]
    pub segment_seconds: Option<f64>,
    #[serde(default = "default_folds")]
    pub folds: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<f64>,
    #[serde(default = "default_l2")]
    pub l2: f64,
    /// Largest k tried when clustering feature importances (from 2).
    #[serde(default = "default_k_max")]
    pub cluster_k_max: usize,
    #[serde(default = "default_dims")]
    pub mds_dims: usize,
    /// Not echoed into the artifacts so runs in different directories match.
    #[serde(default = "default_out", skip_serializing)]
    pub out: PathBuf,
}

fn all_algorithms() -> Vec<Algorithm> {
    Algorithm::ALL.to_vec()
}
fn default_ratio() -> usize {
    DEFAULT_PRESELECT_RATIO
}
fn default_folds() -> usize {
    10
}
fn default_lambdas() -> Vec<f64> {
    DEFAULT_LAMBDAS.to_vec()
}
fn default_l2() -> f64 {
    DEFAULT_L2
}
fn default_k_max() -> usize {
    10
}
fn default_dims() -> usize {
    2
}
fn default_out() -> PathBuf {
    PathBuf::from("dsinfo-out")
}

impl WorkflowConfig {
    pub fn builtin() -> WorkflowConfig {
        serde_json::from_str(BUILTIN_CONFIG).expect("shipped config parses")
    }

    pub fn from_json(text: &str) -> Result<WorkflowConfig> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a config file. A relative dataset path is taken relative to
    /// the file's directory.
    pub fn read(path: &Path) -> Result<WorkflowConfig> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut config =
            WorkflowConfig::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if let DatasetSource::Files { path: data, .. } = &mut config.dataset {
            if data.is_relative() {
                if let Some(parent) = path.parent() {
                    *data = parent.join(&*data);
                }
            }
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.algorithms.is_empty() {
            return bad("algorithms must not be empty".into());
        }
        if self.factors.is_empty() {
            return bad("factors must not be empty".into());
        }
        if self.factors[0] < 1 || self.factors.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!(
                "factors must be >= 1, sorted and unique, got {:?}",
                self.factors
            ));
        }
        let mut seen = self.algorithms.clone();
        seen.sort_by_key(|a| a.name());
        seen.dedup();
        if seen.len() != self.algorithms.len() {
            return bad("algorithms must be unique".into());
        }
        if self.folds < 2 {
            return bad(format!("folds must be >= 2, got {}", self.folds));
        }
        if let Some(s) = self.segment_seconds {
            if !(s.is_finite() && s > 0.0) {
                return bad(format!("segment_seconds must be positive, got {s}"));
            }
        }
        if self.lambdas.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return bad("lambdas must be finite and >= 0".into());
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return bad(format!("l2 must be >= 0, got {}", self.l2));
        }
        if self.cluster_k_max < 2 {
            return bad("cluster_k_max must be >= 2".into());
        }
        if !(2..=3).contains(&self.mds_dims) {
            return bad(format!("mds_dims must be 2 or 3, got {}", self.mds_dims));
        }
        for c in self.grid() {
            c.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        if let DatasetSource::Synth(s) = &self.dataset {
            if s.classes.is_empty() || s.n_per_class == 0 {
                return bad("synthetic dataset needs classes and n_per_class >= 1".into());
            }
        }
        Ok(())
    }

    /// Grid cells in (algorithm name, factor) order.
    pub fn grid(&self) -> Vec<DownsampleConfig> {
        let mut cells: Vec<DownsampleConfig> = self
            .algorithms
            .iter()
            .flat_map(|a| {
                self.factors
                    .iter()
                    .map(move |&k| DownsampleConfig::new(*a, k).with_ratio(self.preselect_ratio))
            })
            .collect();
        cells.sort_by(|a, b| a.sort_key_cmp(b));
        cells
    }

    /// Loads or generates the dataset, then segments it if asked to.
    pub fn load_dataset(&self) -> Result<LabeledDataset> {
        let ds = match &self.dataset {
            DatasetSource::Files { path, format } => load_dataset(path, *format)?,
            DatasetSource::Synth(s) => synth_dataset(&s.classes, s.n_per_class, s.sample_rate_hz, s.seed)?,
        };
        match self.segment_seconds {
            Some(seconds) => ds.segment(seconds),
            None => Ok(ds),
        }
    }
}
