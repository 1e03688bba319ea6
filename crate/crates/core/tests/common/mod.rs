//! Independent, deliberately naive reference implementations shared by the
//! integration tests and the acceptance target. Nothing in this file calls
//! into the library's numeric code; `fixtures` builds library inputs.

#![allow(dead_code)]

pub mod fixtures;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use dsinfo::signal::{MuapSpec, Provenance, Signal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// Random walk plus a sine and a few spikes: varied enough to exercise
/// every selection rule without exact ties.
pub fn wiggly(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let f = rng.random_range(0.005..0.05);
    let mut level = 0.0;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let step: f64 = StandardNormal.sample(rng);
        level += 0.2 * step;
        let mut v = level + (2.0 * PI * f * i as f64).sin();
        if rng.random_bool(0.02) {
            v += rng.random_range(-4.0..4.0);
        }
        out.push(v);
    }
    out
}

pub fn muap(firing_rate_hz: f64, noise_std: f64, duration_s: f64, seed: u64) -> MuapSpec {
    MuapSpec {
        n_phases: 3,
        peak_amplitude: 1.0,
        phase_width_s: 0.0005,
        firing_rate_hz,
        noise_std,
        duration_s,
        seed,
        gain_jitter: 0.0,
    }
}

pub fn rate_classes(rates: &[(&str, f64)], noise_std: f64, duration_s: f64, jitter: f64) -> BTreeMap<String, MuapSpec> {
    rates
        .iter()
        .map(|(name, r)| {
            let mut s = muap(*r, noise_std, duration_s, 0);
            s.gain_jitter = jitter;
            (name.to_string(), s)
        })
        .collect()
}

// ---- downsampler selection rules -------------------------------------

/// Groups of `size`; the last group also takes a remainder shorter than
/// `size`.
pub fn groups(n: usize, size: usize) -> Vec<(usize, usize)> {
    let count = std::cmp::max(n / size, 1);
    let mut out = Vec::new();
    for g in 0..count {
        let start = g * size;
        out.push((start, if g == count - 1 { n } else { start + size }));
    }
    out
}

fn first_extreme(values: &[f64], lo: usize, hi: usize, want_max: bool) -> usize {
    let mut best_value = values[lo];
    for &v in &values[lo..hi] {
        if (want_max && v > best_value) || (!want_max && v < best_value) {
            best_value = v;
        }
    }
    (lo..hi).find(|&i| values[i] == best_value).unwrap()
}

pub fn brute_minmax(values: &[f64], k: usize) -> Vec<usize> {
    let mut keep = std::collections::BTreeSet::new();
    for (lo, hi) in groups(values.len(), 2 * k) {
        keep.insert(first_extreme(values, lo, hi, false));
        keep.insert(first_extreme(values, lo, hi, true));
    }
    keep.into_iter().collect()
}

pub fn brute_m4(values: &[f64], k: usize) -> Vec<usize> {
    let mut keep = std::collections::BTreeSet::new();
    for (lo, hi) in groups(values.len(), 4 * k) {
        keep.insert(lo);
        keep.insert(hi - 1);
        keep.insert(first_extreme(values, lo, hi, false));
        keep.insert(first_extreme(values, lo, hi, true));
    }
    keep.into_iter().collect()
}

fn triangle_area(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    // shoelace
    0.5 * (a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1)).abs()
}

/// LTTB by exhaustive search of each bucket: `n_out - 2` interior buckets
/// with integer bounds 1 + floor(i (n - 2) / (n_out - 2)), triangle against
/// the last kept point and the mean of the next bucket (the final point
/// after the last bucket), earliest point on ties.
pub fn brute_lttb(values: &[f64], n_out: usize) -> Vec<usize> {
    let n = values.len();
    if n_out >= n {
        return (0..n).collect();
    }
    let b = n_out - 2;
    let edge = |i: usize| 1 + (i * (n - 2)) / b;
    let mut kept = vec![0usize];
    for i in 0..b {
        let (lo, hi) = (edge(i), edge(i + 1));
        let next: Vec<usize> = if i == b - 1 {
            vec![n - 1]
        } else {
            (edge(i + 1)..edge(i + 2)).collect()
        };
        let cx = next.iter().map(|&j| j as f64).sum::<f64>() / next.len() as f64;
        let cy = next.iter().map(|&j| values[j]).sum::<f64>() / next.len() as f64;
        let a = *kept.last().unwrap();
        let areas: Vec<f64> = (lo..hi)
            .map(|j| triangle_area((a as f64, values[a]), (j as f64, values[j]), (cx, cy)))
            .collect();
        let top = areas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        kept.push(lo + areas.iter().position(|&v| v == top).unwrap());
    }
    kept.push(n - 1);
    kept
}

/// Amplitude of the `freq` component of `x` (sampled at `rate`) from one
/// DFT bin.
pub fn dft_amplitude(x: &[f64], freq: f64, rate: f64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (i, v) in x.iter().enumerate() {
        let ph = 2.0 * PI * freq * i as f64 / rate;
        re += v * ph.cos();
        im -= v * ph.sin();
    }
    2.0 * (re * re + im * im).sqrt() / x.len() as f64
}

// ---- statistics ---------------------------------------------------------

pub fn mean(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for v in x {
        s += v;
    }
    s / x.len() as f64
}

pub fn central_moment(x: &[f64], p: i32) -> f64 {
    let m = mean(x);
    let mut s = 0.0;
    for v in x {
        s += (v - m).powi(p);
    }
    s / x.len() as f64
}

pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..x.len() {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some(sxy / (sxx * syy).sqrt())
    }
}

/// Midranks by counting: rank = #smaller + (#equal + 1) / 2.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let less = x.iter().filter(|&&u| u < v).count() as f64;
            let equal = x.iter().filter(|&&u| u == v).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn skewness(x: &[f64]) -> f64 {
    let m2 = central_moment(x, 2);
    if m2 == 0.0 {
        0.0
    } else {
        central_moment(x, 3) / m2.powf(1.5)
    }
}

pub fn kurtosis(x: &[f64]) -> f64 {
    let m2 = central_moment(x, 2);
    if m2 == 0.0 {
        0.0
    } else {
        central_moment(x, 4) / (m2 * m2)
    }
}

pub fn zcr(x: &[f64]) -> f64 {
    let mut flips = 0;
    for i in 1..x.len() {
        if (x[i - 1] >= 0.0) != (x[i] >= 0.0) {
            flips += 1;
        }
    }
    flips as f64 / (x.len() - 1) as f64
}

/// Strict local maxima, each maximal run of equal values counted once when
/// both outside neighbours are lower. Runs touching either end never count.
pub fn peak_count(x: &[f64]) -> usize {
    let mut count = 0;
    let mut l = 0;
    while l < x.len() {
        let mut r = l;
        while r + 1 < x.len() && x[r + 1] == x[l] {
            r += 1;
        }
        if l > 0 && r + 1 < x.len() && x[l - 1] < x[l] && x[r + 1] < x[l] {
            count += 1;
        }
        l = r + 1;
    }
    count
}

// ---- metrics ------------------------------------------------------------

/// Parent positions of a downsampled signal's samples.
pub fn positions(ds: &Signal, parent_len: usize) -> Vec<usize> {
    match ds.provenance() {
        Provenance::Selected(idx) => idx.clone(),
        Provenance::Strided { factor } => (0..ds.len()).map(|i| i * factor).collect(),
        Provenance::Original => (0..parent_len).collect(),
    }
}

/// Piecewise-linear reconstruction on 0..n with constant ends.
pub fn reconstruct(pos: &[usize], ys: &[f64], n: usize) -> Vec<f64> {
    (0..n)
        .map(|t| {
            if t <= pos[0] {
                return ys[0];
            }
            if t >= pos[pos.len() - 1] {
                return ys[ys.len() - 1];
            }
            let j = pos.iter().position(|&p| p >= t).unwrap();
            if pos[j] == t {
                return ys[j];
            }
            let (p0, p1) = (pos[j - 1] as f64, pos[j] as f64);
            ys[j - 1] + (ys[j] - ys[j - 1]) * (t as f64 - p0) / (p1 - p0)
        })
        .collect()
}

/// Envelope from an O(n^2) DFT: keep DC (and Nyquist for even n), double
/// positive frequencies, drop negative ones, invert and take magnitudes.
pub fn hilbert_envelope(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let tw = |k: usize, t: usize| 2.0 * PI * ((k * t) % n) as f64 / n as f64;
    let spectrum: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, v) in x.iter().enumerate() {
                re += v * tw(k, t).cos();
                im -= v * tw(k, t).sin();
            }
            let h = if k == 0 || 2 * k == n {
                1.0
            } else if 2 * k < n {
                2.0
            } else {
                0.0
            };
            (re * h, im * h)
        })
        .collect();
    (0..n)
        .map(|t| {
            let (mut re, mut im) = (0.0, 0.0);
            for (k, (a, b)) in spectrum.iter().enumerate() {
                let (c, s) = (tw(k, t).cos(), tw(k, t).sin());
                re += a * c - b * s;
                im += a * s + b * c;
            }
            (re * re + im * im).sqrt() / n as f64
        })
        .collect()
}

/// Welch density: periodic Hann, half overlap, per-segment mean removal,
/// direct DFT per segment.
pub fn welch(x: &[f64], rate: f64, seg: usize) -> (Vec<f64>, Vec<f64>) {
    let w: Vec<f64> = (0..seg).map(|i| (PI * i as f64 / seg as f64).sin().powi(2)).collect();
    let u: f64 = w.iter().map(|v| v * v).sum();
    let hop = seg - seg / 2;
    let bins = seg / 2 + 1;
    let mut acc = vec![0.0; bins];
    let mut count = 0;
    let mut start = 0;
    while start + seg <= x.len() {
        let chunk = &x[start..start + seg];
        let m = mean(chunk);
        for (k, a) in acc.iter_mut().enumerate() {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, v) in chunk.iter().enumerate() {
                let ph = 2.0 * PI * ((k * t) % seg) as f64 / seg as f64;
                re += (v - m) * w[t] * ph.cos();
                im -= (v - m) * w[t] * ph.sin();
            }
            *a += re * re + im * im;
        }
        count += 1;
        start += hop;
    }
    let density = acc
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let edge = k == 0 || (seg.is_multiple_of(2) && k == seg / 2);
            a / (rate * u * count as f64) * if edge { 1.0 } else { 2.0 }
        })
        .collect();
    let freqs = (0..bins).map(|k| k as f64 * rate / seg as f64).collect();
    (freqs, density)
}

fn lerp_at(xs: &[f64], ys: &[f64], f: f64) -> f64 {
    if f <= xs[0] {
        return ys[0];
    }
    for j in 1..xs.len() {
        if xs[j] >= f {
            return ys[j - 1] + (ys[j] - ys[j - 1]) * (f - xs[j - 1]) / (xs[j] - xs[j - 1]);
        }
    }
    ys[ys.len() - 1]
}

fn normalize(p: &[f64]) -> Vec<f64> {
    let s: f64 = p.iter().sum();
    p.iter().map(|v| if s > 0.0 { v / s } else { 0.0 }).collect()
}

/// Spectral distance: reference segment min(256, n/2), the other signal a
/// segment of equal duration, compared on the reference bins up to the
/// lower Nyquist frequency.
pub fn psd_distance(x: &[f64], fx: f64, y: &[f64], fy: f64) -> f64 {
    let sx = std::cmp::min(256, x.len() / 2);
    let sy = ((sx as f64 * fy / fx).round() as usize).clamp(4, y.len());
    let (freq_x, px) = welch(x, fx, sx);
    let (freq_y, py) = welch(y, fy, sy);
    let (px, py) = (normalize(&px), normalize(&py));
    let nyq = fx.min(fy) / 2.0;
    let mut s = 0.0;
    for (i, f) in freq_x.iter().enumerate() {
        let q = if *f <= nyq * (1.0 + 1e-12) {
            lerp_at(&freq_y, &py, *f)
        } else {
            0.0
        };
        s += (px[i] - q).powi(2);
    }
    s.sqrt()
}

/// Jensen-Shannon divergence in bits over 64 equal-width bins of the joint
/// range, each probability smoothed by 1e-12 and renormalized.
pub fn jsd(x: &[f64], y: &[f64]) -> f64 {
    let lo = x.iter().chain(y).cloned().fold(f64::INFINITY, f64::min);
    let hi = x.iter().chain(y).cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return 0.0;
    }
    let hist = |v: &[f64]| {
        let mut c = vec![0.0; 64];
        let width = (hi - lo) / 64.0;
        for &s in v {
            let b = ((s - lo) / width).floor() as usize;
            c[b.min(63)] += 1.0;
        }
        let p: Vec<f64> = c.iter().map(|k| k / v.len() as f64 + 1e-12).collect();
        normalize(&p)
    };
    let (p, q) = (hist(x), hist(y));
    let mut d = 0.0;
    for i in 0..64 {
        let m = (p[i] + q[i]) / 2.0;
        d += 0.5 * p[i] * (p[i] / m).ln() + 0.5 * q[i] * (q[i] / m).ln();
    }
    (d / 2f64.ln()).clamp(0.0, 1.0)
}

/// The twelve non-compression metrics in the library's order, NCD slot
/// left as NaN.
pub fn metric_profile(original: &Signal, ds: &Signal) -> [f64; 13] {
    let x = original.values();
    let n = x.len();
    let y = ds.values();
    let rec = reconstruct(&positions(ds, n), y, n);
    let sse: f64 = x.iter().zip(&rec).map(|(a, b)| (a - b) * (a - b)).sum();
    let dist = |a: &[f64], b: &[f64]| 1.0 - pearson(a, b).unwrap_or(0.0);
    let (ex, er) = (hilbert_envelope(x), hilbert_envelope(&rec));
    [
        (sse / n as f64).sqrt(),
        sse / (n as f64 * central_moment(x, 2)),
        dist(x, &rec),
        dist(&ranks(x), &ranks(&rec)),
        dist(&ex, &er),
        dist(&ranks(&ex), &ranks(&er)),
        (zcr(x) - zcr(y)).abs(),
        (peak_count(x) as f64 - peak_count(y) as f64).abs(),
        (skewness(x) - skewness(y)).abs(),
        (kurtosis(x) - kurtosis(y)).abs(),
        psd_distance(x, original.sample_rate_hz(), y, ds.sample_rate_hz()),
        f64::NAN,
        jsd(x, y),
    ]
}

// ---- ranking and statistics --------------------------------------------

/// Kendall tau-b by enumerating every pair.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> f64 {
    let (mut c, mut d, mut tx, mut ty) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let a = (x[i] - x[j]).signum() * if x[i] == x[j] { 0.0 } else { 1.0 };
            let b = (y[i] - y[j]).signum() * if y[i] == y[j] { 0.0 } else { 1.0 };
            if a == 0.0 && b == 0.0 {
                continue;
            } else if a == 0.0 {
                tx += 1.0;
            } else if b == 0.0 {
                ty += 1.0;
            } else if a == b {
                c += 1.0;
            } else {
                d += 1.0;
            }
        }
    }
    (c - d) / ((c + d + tx) * (c + d + ty)).sqrt()
}

/// Friedman chi-square from within-row midranks (rows are blocks).
pub fn friedman_chi2(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len() as f64;
    let k = rows[0].len();
    let mut sums = vec![0.0; k];
    for r in rows {
        for (s, v) in sums.iter_mut().zip(ranks(r)) {
            *s += v;
        }
    }
    let kf = k as f64;
    12.0 / (n * kf * (kf + 1.0)) * sums.iter().map(|s| s * s).sum::<f64>() - 3.0 * n * (kf + 1.0)
}

/// Permutation p-value of the Friedman statistic: treatments are shuffled
/// independently inside each block.
pub fn friedman_permutation_p(rows: &[Vec<f64>], permutations: usize, seed: u64) -> f64 {
    use rand::seq::SliceRandom;
    let observed = friedman_chi2(rows);
    let mut r = rng(seed);
    let mut hits = 0usize;
    let mut shuffled = rows.to_vec();
    for _ in 0..permutations {
        for row in shuffled.iter_mut() {
            row.shuffle(&mut r);
        }
        if friedman_chi2(&shuffled) >= observed - 1e-12 {
            hits += 1;
        }
    }
    (hits + 1) as f64 / (permutations + 1) as f64
}

/// Indices of points not dominated under (lower time, higher accuracy).
pub fn non_dominated(points: &[(f64, f64)]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !points.iter().any(|q| {
                let p = points[i];
                q.0 <= p.0 && q.1 >= p.1 && (q.0 < p.0 || q.1 > p.1)
            })
        })
        .collect()
}
