use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use super::{downsample, DownsampleConfig};
use crate::error::{Error, Result};
use crate::signal::{write_dataset, DataFormat, LabeledDataset, Provenance};

/// One downsampled copy of a dataset.
#[derive(Debug, Clone)]
pub struct GridResult {
    pub config: DownsampleConfig,
    pub dataset: LabeledDataset,
    pub wall_time_s: f64,
}

/// The 26 factors {2, 5, 10, ..., 95, 100, 200, 300, 400, 500, 1000}.
pub fn full_factor_grid() -> Vec<usize> {
    let mut k = vec![2];
    k.extend((1..=20).map(|i| 5 * i));
    k.extend([200, 300, 400, 500, 1000]);
    k
}

/// Applies every configuration to every signal. Cells run one after another
/// on the calling thread so their wall times are comparable. A failing
/// signal aborts only its own cell.
pub fn apply_grid(dataset: &LabeledDataset, configs: &[DownsampleConfig]) -> Vec<Result<GridResult>> {
    configs
        .iter()
        .map(|config| {
            let start = Instant::now();
            let mut index = 0usize;
            let ds = dataset
                .map_signals(|s| {
                    let r = downsample(s, config).map_err(|e| Error::InvalidArgument(format!("signal {index}: {e}")));
                    index += 1;
                    r
                })
                .map_err(|e| e.in_cell(config))?;
            Ok(GridResult {
                config: *config,
                dataset: ds,
                wall_time_s: start.elapsed().as_secs_f64(),
            })
        })
        .collect()
}

#[derive(Serialize)]
struct Sidecar<'a> {
    config: &'a DownsampleConfig,
    provenance: Vec<&'a Provenance>,
}

/// Persists a downsampled dataset in `format` plus `downsample.json`
/// recording the configuration and each signal's provenance.
pub fn write_grid_result(dir: &Path, result: &GridResult, format: DataFormat) -> Result<()> {
    write_dataset(dir, &result.dataset, format)?;
    let sidecar = Sidecar {
        config: &result.config,
        provenance: result.dataset.signals().iter().map(|s| s.provenance()).collect(),
    };
    let path = dir.join("downsample.json");
    fs::write(&path, serde_json::to_string(&sidecar)?).map_err(|e| Error::io(&path, e))
}
