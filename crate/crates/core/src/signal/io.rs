use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{LabeledDataset, Signal};
use crate::error::{Error, Result};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DataFormat {
    /// One signal per row: label, then samples.
    #[serde(rename = "csv")]
    Csv,
    /// One file per signal, little-endian IEEE-754 doubles.
    #[serde(rename = "raw-f64le")]
    RawF64Le,
    /// One mono 16-bit PCM WAV per signal, normalised to [-1, 1).
    #[serde(rename = "wav-pcm16")]
    WavPcm16,
}

impl DataFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            DataFormat::Csv => "csv",
            DataFormat::RawF64Le => "raw-f64le",
            DataFormat::WavPcm16 => "wav-pcm16",
        }
    }
}

impl FromStr for DataFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(DataFormat::Csv),
            "raw-f64le" | "raw" | "f64le" => Ok(DataFormat::RawF64Le),
            "wav-pcm16" | "wav" => Ok(DataFormat::WavPcm16),
            other => Err(Error::Format(format!("unknown data format '{other}'"))),
        }
    }
}

/// Sidecar `manifest.json` describing the data files of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub files: Vec<ManifestEntry>,
    pub sample_rate_hz: f64,
    pub format: DataFormat,
    /// Per-row parent recordings for CSV files (rows in file order).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    /// Required for raw and WAV files; CSV rows carry their own labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Manifest> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let manifest: Manifest =
            serde_json::from_str(&text).map_err(|e| Error::Format(format!("manifest {}: {e}", path.display())))?;
        if !(manifest.sample_rate_hz.is_finite() && manifest.sample_rate_hz > 0.0) {
            return Err(Error::Format(format!(
                "manifest {}: sample_rate_hz must be positive",
                path.display()
            )));
        }
        Ok(manifest)
    }
}

/// Loads a dataset. `path` may be a directory holding `manifest.json`, the
/// manifest itself, or (for CSV) a data file with a sibling manifest that
/// supplies the sample rate.
pub fn load_dataset(path: &Path, format: DataFormat) -> Result<LabeledDataset> {
    let (manifest_path, only_file) = if path.is_dir() {
        (path.join(MANIFEST_NAME), None)
    } else if path.extension().is_some_and(|e| e == "json") {
        (path.to_path_buf(), None)
    } else {
        let dir = path.parent().unwrap_or(Path::new("."));
        (dir.join(MANIFEST_NAME), Some(path.to_path_buf()))
    };
    if !manifest_path.exists() {
        return Err(Error::Format(format!(
            "no manifest at {} (needed for sample rate and labels)",
            manifest_path.display()
        )));
    }
    let manifest = Manifest::read(&manifest_path)?;
    if manifest.format != format {
        return Err(Error::Format(format!(
            "manifest declares format {} but {} was requested",
            manifest.format.as_str(),
            format.as_str()
        )));
    }
    let base = manifest_path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let rate = manifest.sample_rate_hz;

    match format {
        DataFormat::Csv => {
            let files: Vec<PathBuf> = match only_file {
                Some(f) => vec![f],
                None => manifest.files.iter().map(|e| base.join(&e.path)).collect(),
            };
            if files.is_empty() {
                return Err(Error::Ingestion("manifest lists no files".into()));
            }
            let mut signals = Vec::new();
            let mut labels = Vec::new();
            for f in &files {
                let file = fs::File::open(f).map_err(|e| Error::io(f, e))?;
                let (s, l) = read_csv_rows(BufReader::new(file), rate).map_err(|e| prefix_path(e, f))?;
                signals.extend(s);
                labels.extend(l);
            }
            let groups = match manifest.groups {
                Some(g) if g.len() == signals.len() => Some(g),
                Some(g) => {
                    return Err(Error::Ingestion(format!(
                        "manifest has {} group ids for {} CSV rows",
                        g.len(),
                        signals.len()
                    )))
                }
                None => None,
            };
            LabeledDataset::with_groups(signals, labels, groups)
        }
        DataFormat::RawF64Le | DataFormat::WavPcm16 => {
            if manifest.files.is_empty() {
                return Err(Error::Ingestion("manifest lists no files".into()));
            }
            let mut signals = Vec::with_capacity(manifest.files.len());
            let mut labels = Vec::with_capacity(manifest.files.len());
            let any_group = manifest.files.iter().any(|e| e.group.is_some());
            let mut groups = Vec::new();
            for entry in &manifest.files {
                let label = match &entry.label {
                    Some(l) if !l.is_empty() => l.clone(),
                    _ => return Err(Error::Ingestion(format!("no label for file {}", entry.path))),
                };
                let file = base.join(&entry.path);
                let values = if format == DataFormat::RawF64Le {
                    read_raw_f64le(&file)?
                } else {
                    read_wav_pcm16(&file, rate)?
                };
                let signal = Signal::new(values, rate).map_err(|e| prefix_path(e, &file))?;
                signals.push(signal);
                labels.push(label);
                groups.push(entry.group.clone().unwrap_or_else(|| entry.path.clone()));
            }
            LabeledDataset::with_groups(signals, labels, any_group.then_some(groups))
        }
    }
}

fn prefix_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Data(m) => Error::Data(format!("{}: {m}", path.display())),
        Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
        other => other,
    }
}

/// Parses CSV text: one signal per row, first column the label.
pub fn read_csv_dataset<R: Read>(reader: R, sample_rate_hz: f64) -> Result<LabeledDataset> {
    let (signals, labels) = read_csv_rows(reader, sample_rate_hz)?;
    LabeledDataset::new(signals, labels)
}

fn read_csv_rows<R: Read>(reader: R, rate: f64) -> Result<(Vec<Signal>, Vec<String>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut signals = Vec::new();
    let mut labels = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record?;
        let row = r + 1;
        let mut fields = record.iter();
        let label = fields
            .next()
            .filter(|l| !l.is_empty())
            .ok_or_else(|| Error::Ingestion(format!("row {row}: missing label")))?;
        let mut values = Vec::with_capacity(record.len().saturating_sub(1));
        for (c, field) in fields.enumerate() {
            let col = c + 2;
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Format(format!("row {row}, column {col}: '{field}' is not a number")))?;
            if !v.is_finite() {
                return Err(Error::Data(format!(
                    "row {row}, column {col}: non-finite sample '{field}'"
                )));
            }
            values.push(v);
        }
        if values.is_empty() {
            return Err(Error::Data(format!("row {row}: no samples")));
        }
        signals.push(Signal::new(values, rate)?);
        labels.push(label.to_string());
    }
    if signals.is_empty() {
        return Err(Error::Data("CSV holds no rows".into()));
    }
    Ok((signals, labels))
}

fn read_raw_f64le(path: &Path) -> Result<Vec<f64>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() % 8 != 0 {
        return Err(Error::Format(format!(
            "{}: {} bytes is not a whole number of f64 samples",
            path.display(),
            bytes.len()
        )));
    }
    let values: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Data(format!(
            "{}: non-finite sample at index {i}",
            path.display()
        )));
    }
    Ok(values)
}

fn read_wav_pcm16(path: &Path, manifest_rate: f64) -> Result<Vec<f64>> {
    let reader = hound::WavReader::open(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    let spec = reader.spec();
    if spec.channels != 1 || spec.bits_per_sample != 16 || spec.sample_format != hound::SampleFormat::Int {
        return Err(Error::Format(format!(
            "{}: expected mono 16-bit PCM, found {} channel(s), {} bits",
            path.display(),
            spec.channels,
            spec.bits_per_sample
        )));
    }
    // WAV headers store integer rates; 23437.5 Hz recordings are written as 23437
    if (f64::from(spec.sample_rate) - manifest_rate.floor()).abs() > 0.5 {
        return Err(Error::Format(format!(
            "{}: WAV rate {} Hz disagrees with manifest rate {manifest_rate} Hz",
            path.display(),
            spec.sample_rate
        )));
    }
    reader
        .into_samples::<i16>()
        .map(|s| {
            s.map(|v| f64::from(v) / 32768.0)
                .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
        })
        .collect()
}

/// Writes a dataset plus `manifest.json` into `dir` (created if needed).
pub fn write_dataset(dir: &Path, dataset: &LabeledDataset, format: DataFormat) -> Result<Manifest> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let rate = dataset.sample_rate_hz();
    let groups = dataset.groups();
    let manifest = match format {
        DataFormat::Csv => {
            let path = dir.join("signals.csv");
            let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
            let mut w = csv::WriterBuilder::new()
                .flexible(true)
                .from_writer(BufWriter::new(file));
            for (sig, label) in dataset.signals().iter().zip(dataset.labels()) {
                let mut row = Vec::with_capacity(sig.len() + 1);
                row.push(label.clone());
                row.extend(sig.values().iter().map(|v| v.to_string()));
                w.write_record(&row)?;
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
            Manifest {
                files: vec![ManifestEntry {
                    path: "signals.csv".into(),
                    label: None,
                    group: None,
                }],
                sample_rate_hz: rate,
                format,
                groups: groups.map(<[String]>::to_vec),
            }
        }
        DataFormat::RawF64Le | DataFormat::WavPcm16 => {
            let ext = if format == DataFormat::RawF64Le { "f64" } else { "wav" };
            let mut files = Vec::with_capacity(dataset.len());
            for (i, (sig, label)) in dataset.signals().iter().zip(dataset.labels()).enumerate() {
                let name = format!("signal_{i:05}.{ext}");
                let path = dir.join(&name);
                if format == DataFormat::RawF64Le {
                    let mut bytes = Vec::with_capacity(sig.len() * 8);
                    for v in sig.values() {
                        bytes.extend_from_slice(&v.to_le_bytes());
                    }
                    fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
                } else {
                    write_wav_pcm16(&path, sig)?;
                }
                files.push(ManifestEntry {
                    path: name,
                    label: Some(label.clone()),
                    group: groups.map(|g| g[i].clone()),
                });
            }
            Manifest {
                files,
                sample_rate_hz: rate,
                format,
                groups: None,
            }
        }
    };
    let path = dir.join(MANIFEST_NAME);
    let text = serde_json::to_string_pretty(&manifest)?;
    let mut f = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

fn write_wav_pcm16(path: &Path, sig: &Signal) -> Result<()> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: sig.sample_rate_hz().floor() as u32,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let wrap = |e: hound::Error| Error::Format(format!("{}: {e}", path.display()));
    let mut w = hound::WavWriter::create(path, spec).map_err(wrap)?;
    for v in sig.values() {
        let q = (v * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        w.write_sample(q).map_err(wrap)?;
    }
    w.finalize().map_err(wrap)
}
