//! Windowed-sinc FIR design and zero-phase (forward-backward) filtering
//! fused with subsampling.

use std::f64::consts::PI;

/// Largest single decimation stage.
pub const MAX_STAGE: usize = 13;

/// Linear-phase low-pass with `order + 1` Hamming-windowed sinc taps.
/// `cutoff` is relative to Nyquist (1.0 = Nyquist). Taps sum to 1 so the
/// DC gain is exactly one.
pub fn lowpass_hamming(order: usize, cutoff: f64) -> Vec<f64> {
    let len = order + 1;
    let centre = order as f64 / 2.0;
    let mut taps: Vec<f64> = (0..len)
        .map(|n| {
            let m = n as f64 - centre;
            let sinc = if m == 0.0 {
                1.0
            } else {
                (PI * cutoff * m).sin() / (PI * cutoff * m)
            };
            let window = if order == 0 {
                1.0
            } else {
                0.54 - 0.46 * (2.0 * PI * n as f64 / order as f64).cos()
            };
            cutoff * sinc * window
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    taps
}

/// Filter order used for a stage of factor `q`.
pub fn stage_order(q: usize) -> usize {
    20 * q.min(MAX_STAGE)
}

/// Splits `k` into stages no larger than 13, dividing out the largest
/// admissible divisor first. A cofactor larger than 13 without such a
/// divisor (a prime such as 17 or 19) becomes one stage of its own.
pub fn decimation_stages(k: usize) -> Vec<usize> {
    let mut stages = Vec::new();
    let mut rest = k;
    while rest > 1 {
        if rest <= MAX_STAGE {
            stages.push(rest);
            break;
        }
        match (2..=MAX_STAGE).rev().find(|d| rest.is_multiple_of(*d)) {
            Some(d) => {
                stages.push(d);
                rest /= d;
            }
            None => {
                stages.push(rest);
                break;
            }
        }
    }
    stages
}

/// Zero-phase filters `x` with symmetric `taps` (forward then backward pass,
/// odd-reflection padding of `taps.len() - 1` samples at both ends) and
/// returns every `q`-th output sample starting at index 0.
///
/// Requires `x.len() > taps.len() - 1`. The backward pass is evaluated only
/// at the retained positions.
pub fn filtfilt_subsample(x: &[f64], taps: &[f64], q: usize) -> Vec<f64> {
    let n = x.len();
    let order = taps.len() - 1;
    let pad = order;
    debug_assert!(n > pad);
    let total = n + 2 * pad;

    let mut padded = Vec::with_capacity(total);
    for i in (1..=pad).rev() {
        padded.push(2.0 * x[0] - x[i]);
    }
    padded.extend_from_slice(x);
    for i in 1..=pad {
        padded.push(2.0 * x[n - 1] - x[n - 1 - i]);
    }

    // forward pass; outputs before `pad` are never read by the backward pass
    let mut fwd = vec![0.0; total];
    for (m, out) in fwd.iter_mut().enumerate().skip(pad) {
        let window = &padded[m - order..=m];
        *out = taps.iter().zip(window.iter().rev()).map(|(h, v)| h * v).sum();
    }

    // backward pass: z[m] = sum_j h[j] * fwd[m + j]
    let n_out = n.div_ceil(q);
    (0..n_out)
        .map(|i| {
            let m = pad + i * q;
            taps.iter().zip(&fwd[m..=m + order]).map(|(h, v)| h * v).sum()
        })
        .collect()
}
