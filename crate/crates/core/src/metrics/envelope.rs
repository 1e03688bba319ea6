use std::cell::RefCell;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::pointwise::{check_pair, correlation_distance};
use crate::error::Result;
use crate::stats::average_ranks;

thread_local! {
    // plans are cached per length, which matters for long odd-sized inputs
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Magnitude of the analytic signal, built in the frequency domain by
/// zeroing negative frequencies and doubling positive ones.
pub fn hilbert_envelope(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let (forward, inverse) = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(n), p.plan_fft_inverse(n))
    });
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    forward.process(&mut buf);
    let half = n / 2;
    for (i, c) in buf.iter_mut().enumerate() {
        let h = if i == 0 || (n.is_multiple_of(2) && i == half) {
            1.0
        } else if i <= (n - 1) / 2 {
            2.0
        } else {
            0.0
        };
        *c *= h;
    }
    inverse.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter().map(|c| c.norm() * scale).collect()
}

/// Inverted Pearson and Spearman correlations between the envelopes of two
/// aligned sequences.
pub fn envelope_metrics(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    check_pair(x, y, 8)?;
    let ex = hilbert_envelope(x);
    envelope_with_reference(&ex, &average_ranks(&ex), y)
}

/// As [`envelope_metrics`] with the envelope of `x` and its ranks
/// precomputed.
pub(crate) fn envelope_with_reference(ex: &[f64], ex_ranks: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    check_pair(ex, y, 8)?;
    let ey = hilbert_envelope(y);
    let pcc = correlation_distance(ex, &ey)?;
    let scc = correlation_distance(ex_ranks, &average_ranks(&ey))?;
    Ok((pcc, scc))
}
