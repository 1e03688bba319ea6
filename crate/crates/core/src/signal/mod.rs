//! Signals, labeled datasets, segmentation, ingestion and synthetic MUAP
//! generation.

mod io;
mod synth;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{load_dataset, read_csv_dataset, write_dataset, DataFormat, Manifest, ManifestEntry};
pub use synth::{muap_wavelet, synth_dataset, synth_muap_signal, MuapSpec};

/// Where the samples of a signal came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// Acquired or segmented data, not derived by downsampling.
    Original,
    /// Points selected from a parent signal; strictly increasing parent
    /// indices, one per sample.
    Selected(Vec<usize>),
    /// Uniform resampling keeping parent sample `i * factor` as sample `i`.
    Strided { factor: usize },
}

/// A uniformly sampled series. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: Vec<f64>,
    sample_rate_hz: f64,
    provenance: Provenance,
}

impl Signal {
    pub fn new(values: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        Self::with_provenance(values, sample_rate_hz, Provenance::Original, None)
    }

    /// A downsampled product holding the parent indices of its samples.
    pub fn selected(
        values: Vec<f64>,
        sample_rate_hz: f64,
        source_indices: Vec<usize>,
        parent_len: usize,
    ) -> Result<Self> {
        Self::with_provenance(
            values,
            sample_rate_hz,
            Provenance::Selected(source_indices),
            Some(parent_len),
        )
    }

    pub fn strided(values: Vec<f64>, sample_rate_hz: f64, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidArgument("stride factor must be >= 1".into()));
        }
        Self::with_provenance(values, sample_rate_hz, Provenance::Strided { factor }, None)
    }

    fn with_provenance(
        values: Vec<f64>,
        sample_rate_hz: f64,
        provenance: Provenance,
        parent_len: Option<usize>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Data("signal has no samples".into()));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("non-finite sample at index {i}")));
        }
        if let Provenance::Selected(idx) = &provenance {
            if idx.len() != values.len() {
                return Err(Error::InvalidArgument(format!(
                    "{} source indices for {} samples",
                    idx.len(),
                    values.len()
                )));
            }
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(
                    "source indices must be strictly increasing".into(),
                ));
            }
            if let (Some(limit), Some(&last)) = (parent_len, idx.last()) {
                if last >= limit {
                    return Err(Error::InvalidArgument(format!(
                        "source index {last} outside parent of length {limit}"
                    )));
                }
            }
        }
        Ok(Signal {
            values,
            sample_rate_hz,
            provenance,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn duration_s(&self) -> f64 {
        self.values.len() as f64 / self.sample_rate_hz
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn source_indices(&self) -> Option<&[usize]> {
        match &self.provenance {
            Provenance::Selected(idx) => Some(idx),
            _ => None,
        }
    }
}

/// A set of signals with one class label each, sharing a sample rate.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    signals: Vec<Signal>,
    labels: Vec<String>,
    class_names: Vec<String>,
    /// Parent recording of each signal, when known (e.g. after segmentation).
    groups: Option<Vec<String>>,
}

impl LabeledDataset {
    pub fn new(signals: Vec<Signal>, labels: Vec<String>) -> Result<Self> {
        Self::with_groups(signals, labels, None)
    }

    pub fn with_groups(signals: Vec<Signal>, labels: Vec<String>, groups: Option<Vec<String>>) -> Result<Self> {
        if signals.is_empty() {
            return Err(Error::Data("dataset has no signals".into()));
        }
        if signals.len() != labels.len() {
            return Err(Error::Ingestion(format!(
                "{} signals but {} labels",
                signals.len(),
                labels.len()
            )));
        }
        if let Some(g) = &groups {
            if g.len() != signals.len() {
                return Err(Error::Ingestion(format!(
                    "{} signals but {} group ids",
                    signals.len(),
                    g.len()
                )));
            }
        }
        let rate = signals[0].sample_rate_hz();
        if let Some(i) = signals.iter().position(|s| s.sample_rate_hz() != rate) {
            return Err(Error::Data(format!(
                "signal {i} has sample rate {} but dataset rate is {rate}",
                signals[i].sample_rate_hz()
            )));
        }
        let class_names: Vec<String> = labels.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        Ok(LabeledDataset {
            signals,
            labels,
            class_names,
            groups,
        })
    }

    pub fn signals(&self) -> &[Signal] {
        &self.signals
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Sorted distinct labels.
    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn groups(&self) -> Option<&[String]> {
        self.groups.as_deref()
    }

    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.signals[0].sample_rate_hz()
    }

    /// Label of each signal as an index into `class_names`.
    pub fn label_indices(&self) -> Vec<usize> {
        self.labels
            .iter()
            .map(|l| self.class_names.binary_search(l).expect("label in class set"))
            .collect()
    }

    /// Same labels and groups, new signals. Sample rates of the new signals
    /// may differ from the original but must agree with each other.
    pub fn map_signals<F>(&self, f: F) -> Result<LabeledDataset>
    where
        F: FnMut(&Signal) -> Result<Signal>,
    {
        let signals = self.signals.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(LabeledDataset {
            signals,
            labels: self.labels.clone(),
            class_names: self.class_names.clone(),
            groups: self.groups.clone(),
        })
    }

    /// Segments every signal; segments keep their parent's label and record
    /// the parent (or the parent's own group) as their group.
    pub fn segment(&self, segment_seconds: f64) -> Result<LabeledDataset> {
        let mut signals = Vec::new();
        let mut labels = Vec::new();
        let mut groups = Vec::new();
        for (i, (sig, label)) in self.signals.iter().zip(&self.labels).enumerate() {
            let parent = match &self.groups {
                Some(g) => g[i].clone(),
                None => format!("rec{i:04}"),
            };
            for seg in segment(sig, segment_seconds)? {
                signals.push(seg);
                labels.push(label.clone());
                groups.push(parent.clone());
            }
        }
        LabeledDataset::with_groups(signals, labels, Some(groups))
    }
}

/// Number of samples covered by `seconds` at `rate`, floored, tolerant of
/// representation error in products like 0.3 * 10.
fn samples_for(seconds: f64, rate: f64) -> usize {
    let exact = seconds * rate;
    (exact + 1e-9 * exact.abs().max(1.0)).floor().max(0.0) as usize
}

/// Splits a signal into consecutive non-overlapping segments of
/// floor(segment_seconds * rate) samples; the trailing remainder is dropped.
pub fn segment(signal: &Signal, segment_seconds: f64) -> Result<Vec<Signal>> {
    if !(segment_seconds.is_finite() && segment_seconds > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "segment length must be positive, got {segment_seconds}"
        )));
    }
    let seg_len = samples_for(segment_seconds, signal.sample_rate_hz());
    if seg_len < 2 {
        return Err(Error::InvalidArgument(format!(
            "segment of {segment_seconds} s holds {seg_len} samples, need at least 2"
        )));
    }
    if seg_len > signal.len() {
        return Err(Error::EmptyResult(format!(
            "segment of {seg_len} samples is longer than the {}-sample signal",
            signal.len()
        )));
    }
    signal
        .values()
        .chunks_exact(seg_len)
        .map(|chunk| Signal::new(chunk.to_vec(), signal.sample_rate_hz()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emglab_shaped_recording_gives_five_two_second_segments() {
        let sig = Signal::new(vec![0.0; 262_124], 23_437.5).unwrap();
        let segs = segment(&sig, 2.0).unwrap();
        assert_eq!(segs.len(), 5);
        assert!(segs.iter().all(|s| s.len() == 46_875));
        assert!(segs.iter().all(|s| s.sample_rate_hz() == 23_437.5));
    }

    #[test]
    fn four_samples_at_two_hz() {
        let sig = Signal::new(vec![1.0, 2.0, 3.0, 4.0], 2.0).unwrap();
        let segs = segment(&sig, 1.0).unwrap();
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[1].values(), &[3.0, 4.0]);
    }

    #[test]
    fn segment_longer_than_signal_fails() {
        let sig = Signal::new(vec![1.0, 2.0, 3.0], 1.0).unwrap();
        assert!(matches!(segment(&sig, 5.0), Err(Error::EmptyResult(_))));
    }

    #[test]
    fn segment_shorter_than_two_samples_fails() {
        let sig = Signal::new(vec![1.0; 10], 1.0).unwrap();
        assert!(matches!(segment(&sig, 1.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn signal_rejects_bad_inputs() {
        assert!(Signal::new(vec![], 1.0).is_err());
        assert!(Signal::new(vec![1.0], 0.0).is_err());
        assert!(matches!(
            Signal::new(vec![1.0, f64::NAN], 1.0),
            Err(Error::Data(msg)) if msg.contains("index 1")
        ));
        assert!(Signal::selected(vec![1.0, 2.0], 1.0, vec![3, 2], 5).is_err());
        assert!(Signal::selected(vec![1.0, 2.0], 1.0, vec![1, 5], 5).is_err());
        assert!(Signal::selected(vec![1.0, 2.0], 1.0, vec![1], 5).is_err());
    }

    #[test]
    fn dataset_checks_rates_and_sorts_classes() {
        let a = Signal::new(vec![1.0; 4], 10.0).unwrap();
        let b = Signal::new(vec![1.0; 4], 20.0).unwrap();
        assert!(LabeledDataset::new(vec![a.clone(), b], vec!["x".into(), "y".into()]).is_err());
        let ds = LabeledDataset::new(vec![a.clone(), a.clone(), a], vec!["B".into(), "A".into(), "B".into()]).unwrap();
        assert_eq!(ds.class_names(), &["A".to_string(), "B".to_string()]);
        assert_eq!(ds.label_indices(), vec![1, 0, 1]);
    }

    #[test]
    fn dataset_segmentation_records_parent_groups() {
        let a = Signal::new((0..10).map(f64::from).collect(), 1.0).unwrap();
        let ds = LabeledDataset::new(vec![a.clone(), a], vec!["x".into(), "y".into()]).unwrap();
        let seg = ds.segment(4.0).unwrap();
        assert_eq!(seg.len(), 4);
        assert_eq!(
            seg.groups().unwrap(),
            &["rec0000", "rec0000", "rec0001", "rec0001"].map(String::from)
        );
        assert_eq!(seg.labels()[3], "y");
    }
}
