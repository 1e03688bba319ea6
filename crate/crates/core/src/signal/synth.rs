use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{LabeledDataset, Signal};
use crate::error::{Error, Result};
use crate::stats::derive_seed;

/// Parameters of a synthetic motor-unit action potential train.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuapSpec {
    pub n_phases: u32,
    pub peak_amplitude: f64,
    pub phase_width_s: f64,
    pub firing_rate_hz: f64,
    pub noise_std: f64,
    pub duration_s: f64,
    #[serde(default)]
    pub seed: u64,
    /// Per-signal gain drawn uniformly from [1 - j, 1 + j]; 0 disables it.
    #[serde(default)]
    pub gain_jitter: f64,
}

impl MuapSpec {
    fn validate(&self, sample_rate_hz: f64) -> Result<()> {
        let positive = [
            ("peak_amplitude", self.peak_amplitude),
            ("phase_width_s", self.phase_width_s),
            ("firing_rate_hz", self.firing_rate_hz),
            ("duration_s", self.duration_s),
            ("sample_rate_hz", sample_rate_hz),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if self.n_phases < 1 {
            return Err(Error::InvalidArgument("n_phases must be >= 1".into()));
        }
        if !(self.noise_std.is_finite() && self.noise_std >= 0.0) {
            return Err(Error::InvalidArgument("noise_std must be >= 0".into()));
        }
        if !(0.0..1.0).contains(&self.gain_jitter) {
            return Err(Error::InvalidArgument("gain_jitter must be in [0, 1)".into()));
        }
        if ((self.duration_s * sample_rate_hz).floor() as usize) < 64 {
            return Err(Error::InvalidArgument(format!(
                "{} s at {sample_rate_hz} Hz gives fewer than 64 samples",
                self.duration_s
            )));
        }
        Ok(())
    }
}

/// Probabilists' Hermite polynomial He_m(u).
fn hermite(m: u32, u: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, u);
    if m == 0 {
        return prev;
    }
    for n in 1..m {
        let next = u * cur - f64::from(n) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Unit-peak MUAP wavelet evaluated at `t` seconds from its centre.
///
/// The wavelet is the (n_phases - 1)-th derivative of a Gaussian with
/// sigma = phase_width / 2, i.e. He_m(t/sigma) * exp(-(t/sigma)^2 / 2) with
/// m = n_phases - 1. It has exactly n_phases lobes of alternating sign
/// (1 phase: Gaussian, 2: biphasic, 3: triphasic, ...). The result is scaled
/// so that its largest absolute value over the continuous support is 1, and
/// is truncated to zero beyond |t/sigma| > m + 5.
pub fn muap_wavelet(n_phases: u32, phase_width_s: f64, t: f64) -> f64 {
    let m = n_phases.saturating_sub(1);
    let sigma = phase_width_s / 2.0;
    let u = t / sigma;
    let support = f64::from(m) + 5.0;
    if u.abs() > support {
        return 0.0;
    }
    let shape = |u: f64| hermite(m, u) * (-0.5 * u * u).exp();
    shape(u) / wavelet_peak(m)
}

fn wavelet_peak(m: u32) -> f64 {
    // dense scan; the extremum lies well inside |u| <= m + 2
    let half = f64::from(m) + 3.0;
    let steps = 20_000;
    (0..=steps)
        .map(|i| {
            let u = -half + 2.0 * half * f64::from(i) / f64::from(steps);
            (hermite(m, u) * (-0.5 * u * u).exp()).abs()
        })
        .fold(0.0, f64::max)
}

/// Generates a MUAP train: one wavelet per firing at times
/// (i + 0.5 + U(-0.2, 0.2)) / firing_rate for every firing inside the
/// duration, plus white Gaussian noise. Deterministic in `spec.seed`.
pub fn synth_muap_signal(spec: &MuapSpec, sample_rate_hz: f64) -> Result<Signal> {
    spec.validate(sample_rate_hz)?;
    let n = (spec.duration_s * sample_rate_hz).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let gain = if spec.gain_jitter > 0.0 {
        rng.random_range(1.0 - spec.gain_jitter..=1.0 + spec.gain_jitter)
    } else {
        1.0
    };
    let amplitude = spec.peak_amplitude * gain;
    let interval = 1.0 / spec.firing_rate_hz;
    let mut firings = Vec::new();
    let mut i = 0u64;
    loop {
        let t = (i as f64 + 0.5 + rng.random_range(-0.2..0.2)) * interval;
        if t >= spec.duration_s {
            break;
        }
        firings.push(t);
        i += 1;
    }

    let mut values = vec![0.0; n];
    let m = spec.n_phases - 1;
    let half_width = (f64::from(m) + 5.0) * spec.phase_width_s / 2.0;
    let peak = wavelet_peak(m);
    let sigma = spec.phase_width_s / 2.0;
    for &t0 in &firings {
        let first = ((t0 - half_width) * sample_rate_hz).floor().max(0.0) as usize;
        let last = (((t0 + half_width) * sample_rate_hz).ceil() as usize).min(n.saturating_sub(1));
        for (j, v) in values.iter_mut().enumerate().take(last + 1).skip(first) {
            let u = (j as f64 / sample_rate_hz - t0) / sigma;
            *v += amplitude * hermite(m, u) * (-0.5 * u * u).exp() / peak;
        }
    }
    if spec.noise_std > 0.0 {
        let normal = Normal::new(0.0, spec.noise_std).map_err(|e| Error::InvalidArgument(format!("noise_std: {e}")))?;
        for v in &mut values {
            *v += normal.sample(&mut rng);
        }
    }
    Signal::new(values, sample_rate_hz)
}

/// Generates `n_per_class` signals per class from per-class templates. The
/// template's own seed is ignored; signal seeds derive from `seed`, the
/// class position and the signal index.
pub fn synth_dataset(
    class_specs: &BTreeMap<String, MuapSpec>,
    n_per_class: usize,
    sample_rate_hz: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    if n_per_class < 1 {
        return Err(Error::InvalidArgument("n_per_class must be >= 1".into()));
    }
    if class_specs.is_empty() {
        return Err(Error::InvalidArgument("no class templates".into()));
    }
    let mut signals = Vec::with_capacity(class_specs.len() * n_per_class);
    let mut labels = Vec::with_capacity(signals.capacity());
    let mut groups = Vec::with_capacity(signals.capacity());
    for (c, (class, template)) in class_specs.iter().enumerate() {
        let class_seed = derive_seed(seed, c as u64);
        for i in 0..n_per_class {
            let spec = MuapSpec {
                seed: derive_seed(class_seed, i as u64),
                ..template.clone()
            };
            signals.push(synth_muap_signal(&spec, sample_rate_hz)?);
            labels.push(class.clone());
            groups.push(format!("{class}-{i:04}"));
        }
    }
    LabeledDataset::with_groups(signals, labels, Some(groups))
}
