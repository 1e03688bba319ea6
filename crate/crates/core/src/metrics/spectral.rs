use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::signal::Signal;
use crate::stats::{euclidean, mean};

/// One-sided power spectral density.
#[derive(Debug, Clone, PartialEq)]
pub struct Psd {
    pub freqs: Vec<f64>,
    pub density: Vec<f64>,
}

impl Psd {
    /// Density scaled to sum 1; all zeros for a signal with no power.
    pub fn normalized(&self) -> Vec<f64> {
        let total: f64 = self.density.iter().sum();
        if total > 0.0 {
            self.density.iter().map(|p| p / total).collect()
        } else {
            vec![0.0; self.density.len()]
        }
    }
}

/// Default segment length: min(256, len / 2).
pub fn default_segment_len(len: usize) -> usize {
    256.min(len / 2)
}

/// Welch estimate with a periodic Hann window, 50% overlap, per-segment
/// mean removal and density scaling.
pub fn welch_psd(values: &[f64], sample_rate_hz: f64, nperseg: usize) -> Result<Psd> {
    if nperseg < 2 || nperseg > values.len() {
        return Err(Error::Length(format!(
            "segment length {nperseg} invalid for {} samples",
            values.len()
        )));
    }
    let window: Vec<f64> = (0..nperseg)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / nperseg as f64).cos())
        .collect();
    let win_power: f64 = window.iter().map(|w| w * w).sum();
    let step = nperseg - nperseg / 2;
    let n_bins = nperseg / 2 + 1;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(nperseg);

    let mut acc = vec![0.0; n_bins];
    let mut n_seg = 0usize;
    let mut buf = vec![Complex::new(0.0, 0.0); nperseg];
    let mut start = 0;
    while start + nperseg <= values.len() {
        let seg = &values[start..start + nperseg];
        let m = mean(seg);
        for ((b, v), w) in buf.iter_mut().zip(seg).zip(&window) {
            *b = Complex::new((v - m) * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, c) in acc.iter_mut().zip(&buf) {
            *a += c.norm_sqr();
        }
        n_seg += 1;
        start += step;
    }

    let scale = 1.0 / (sample_rate_hz * win_power * n_seg as f64);
    let density = acc
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let one_sided = i != 0 && !(nperseg.is_multiple_of(2) && i == nperseg / 2);
            p * scale * if one_sided { 2.0 } else { 1.0 }
        })
        .collect();
    let freqs = (0..n_bins)
        .map(|i| i as f64 * sample_rate_hz / nperseg as f64)
        .collect();
    Ok(Psd { freqs, density })
}

fn interpolate(xs: &[f64], ys: &[f64], at: f64) -> f64 {
    match xs.iter().position(|&x| x >= at) {
        Some(0) => ys[0],
        Some(j) => {
            let t = (at - xs[j - 1]) / (xs[j] - xs[j - 1]);
            ys[j - 1] + (ys[j] - ys[j - 1]) * t
        }
        None => ys[ys.len() - 1],
    }
}

/// Euclidean distance between normalized Welch spectra, each estimated at
/// its own sample rate. The reference `x` uses the default segment length;
/// `y` uses a segment of the same duration so both spectra share a bin
/// width. `y` is interpolated onto `x`'s bins up to the lower Nyquist and
/// taken as zero above it.
pub fn psd_distance(x: &Signal, y: &Signal) -> Result<f64> {
    if x.len() < 32 || y.len() < 32 {
        return Err(Error::Length(format!(
            "need at least 32 samples each, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let (fx, fy) = (x.sample_rate_hz(), y.sample_rate_hz());
    let seg_x = default_segment_len(x.len());
    let seg_y = ((seg_x as f64 * fy / fx).round() as usize).clamp(4, y.len());
    let px = welch_psd(x.values(), fx, seg_x)?;
    let py = welch_psd(y.values(), fy, seg_y)?;
    let nx = px.normalized();
    let ny = py.normalized();
    let nyquist = 0.5 * fx.min(fy);
    let y_on_x: Vec<f64> = px
        .freqs
        .iter()
        .map(|&f| {
            if f <= nyquist * (1.0 + 1e-12) {
                interpolate(&py.freqs, &ny, f)
            } else {
                0.0
            }
        })
        .collect();
    Ok(euclidean(&nx, &y_on_x))
}
