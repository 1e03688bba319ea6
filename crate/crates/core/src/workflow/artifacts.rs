use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const ARTIFACT_MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
    /// Content depends on measured wall times and is not reproducible.
    pub timing: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactManifest {
    pub files: Vec<ArtifactEntry>,
}

impl ArtifactManifest {
    pub fn read(dir: &Path) -> Result<ArtifactManifest> {
        let path = dir.join(ARTIFACT_MANIFEST);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }

    pub fn entry(&self, path: &str) -> Option<&ArtifactEntry> {
        self.files.iter().find(|f| f.path == path)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes files below an artifact directory and keeps `manifest.json` in
/// step with them.
pub struct ArtifactWriter {
    root: PathBuf,
    entries: BTreeMap<String, ArtifactEntry>,
}

impl ArtifactWriter {
    /// Starts from an empty manifest. Files listed by a previous manifest in
    /// `root` are removed first so nothing stale is left behind.
    pub fn fresh(root: &Path) -> Result<ArtifactWriter> {
        if root.join(ARTIFACT_MANIFEST).is_file() {
            let old = ArtifactManifest::read(root)?;
            for f in old.files {
                let p = root.join(&f.path);
                if p.is_file() {
                    fs::remove_file(&p).map_err(|e| Error::io(&p, e))?;
                }
            }
        }
        fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
        Ok(ArtifactWriter {
            root: root.to_path_buf(),
            entries: BTreeMap::new(),
        })
    }

    /// Continues an existing manifest, or starts one if there is none.
    pub fn resume(root: &Path) -> Result<ArtifactWriter> {
        fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
        let entries = if root.join(ARTIFACT_MANIFEST).is_file() {
            ArtifactManifest::read(root)?
                .files
                .into_iter()
                .map(|f| (f.path.clone(), f))
                .collect()
        } else {
            BTreeMap::new()
        };
        Ok(ArtifactWriter {
            root: root.to_path_buf(),
            entries,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write_bytes(&mut self, rel: &str, bytes: &[u8], timing: bool) -> Result<PathBuf> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        self.entries.insert(
            rel.to_string(),
            ArtifactEntry {
                path: rel.to_string(),
                sha256: sha256_hex(bytes),
                bytes: bytes.len() as u64,
                timing,
            },
        );
        Ok(path)
    }

    pub fn write_json<T: Serialize + ?Sized>(&mut self, rel: &str, value: &T, timing: bool) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_bytes(rel, text.as_bytes(), timing)
    }

    /// Writes a CSV with `header` and stringified `rows`.
    pub fn write_csv(&mut self, rel: &str, header: &[&str], rows: &[Vec<String>], timing: bool) -> Result<PathBuf> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(format!("{rel}: {e}")))?;
        self.write_bytes(rel, &bytes, timing)
    }

    pub fn finish(self) -> Result<ArtifactManifest> {
        let manifest = ArtifactManifest {
            files: self.entries.into_values().collect(),
        };
        let path = self.root.join(ARTIFACT_MANIFEST);
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(manifest)
    }
}

/// Reads an artifact file, treating absence and emptiness as a missing
/// artifact named by its path.
pub fn read_artifact(dir: &Path, rel: &str) -> Result<String> {
    let path = dir.join(rel);
    match fs::read_to_string(&path) {
        Ok(text) if text.trim().is_empty() => Err(Error::MissingArtifact(path)),
        Ok(text) => Ok(text),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(Error::MissingArtifact(path)),
        Err(e) => Err(Error::io(&path, e)),
    }
}

pub fn read_json_artifact<T: for<'de> Deserialize<'de>>(dir: &Path, rel: &str) -> Result<T> {
    let text = read_artifact(dir, rel)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", dir.join(rel).display())))
}

/// Records of a CSV artifact as header-keyed maps.
pub fn read_csv_artifact(dir: &Path, rel: &str) -> Result<Vec<BTreeMap<String, String>>> {
    let text = read_artifact(dir, rel)?;
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers()?.clone();
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        out.push(
            header
                .iter()
                .map(str::to_string)
                .zip(rec.iter().map(str::to_string))
                .collect(),
        );
    }
    if out.is_empty() {
        return Err(Error::MissingArtifact(dir.join(rel)));
    }
    Ok(out)
}
