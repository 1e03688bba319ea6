use std::io::Write;

use flate2::write::GzEncoder;
use flate2::{Compression, GzBuilder};

/// gzip compression level used for every Z(.) evaluation.
pub const GZIP_LEVEL: u32 = 6;

pub fn samples_to_bytes(values: &[f64]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

/// Compressed size of `bytes` in a gzip stream with a zero timestamp and
/// no file name, so the output depends on the input alone.
pub fn gzip_len(bytes: &[u8]) -> usize {
    let mut enc: GzEncoder<Vec<u8>> = GzBuilder::new()
        .mtime(0)
        .write(Vec::with_capacity(bytes.len() / 2), Compression::new(GZIP_LEVEL));
    enc.write_all(bytes).expect("writing to a Vec cannot fail");
    enc.finish().expect("writing to a Vec cannot fail").len()
}

/// Normalized compression distance, clamped to [0, 1.1].
pub fn ncd(x: &[f64], y: &[f64]) -> f64 {
    let bx = samples_to_bytes(x);
    ncd_with_len(&bx, gzip_len(&bx), y)
}

/// As [`ncd`] with `x` already serialized and its compressed length known.
pub fn ncd_with_len(x_bytes: &[u8], zx: usize, y: &[f64]) -> f64 {
    let by = samples_to_bytes(y);
    let zy = gzip_len(&by);
    let mut xy = Vec::with_capacity(x_bytes.len() + by.len());
    xy.extend_from_slice(x_bytes);
    xy.extend_from_slice(&by);
    let zxy = gzip_len(&xy);
    let (lo, hi) = (zx.min(zy) as f64, zx.max(zy) as f64);
    ((zxy as f64 - lo) / hi).clamp(0.0, 1.1)
}
