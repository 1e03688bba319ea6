//! C ABI for the dsinfo downsamplers and distortion metrics.
//!
//! Signals cross the boundary as opaque `DsinfoSignal` handles created by
//! `dsinfo_signal_new` or `dsinfo_downsample` and released with
//! `dsinfo_signal_free`. Every fallible function returns a `DsinfoStatus`;
//! on failure `dsinfo_last_error_message` describes the error for the
//! calling thread. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dsinfo::downsample::{downsample, Algorithm, DownsampleConfig};
use dsinfo::metrics::{metric_profile, MetricVector};
use dsinfo::ranking::{kendall_tau_b, weighted_accuracy};
use dsinfo::signal::{Provenance, Signal};
use dsinfo::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsinfoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DataError = 3,
    LengthError = 4,
    Degenerate = 5,
    AlignmentError = 6,
    BufferTooSmall = 7,
    Internal = 8,
    Panic = 9,
}

/// Values accepted by the `algorithm_code` argument of `dsinfo_downsample`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsinfoAlgorithm {
    Decimate = 0,
    M4 = 1,
    MinMax = 2,
    Lttb = 3,
    MinMaxLttb = 4,
}

/// Opaque signal handle.
pub struct DsinfoSignal {
    inner: Signal,
}

/// The 13 distortion metrics; every entry is a distance (lower is closer).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DsinfoMetricVector {
    pub rmse: f64,
    pub nmse: f64,
    pub pcc_dist: f64,
    pub scc_dist: f64,
    pub env_pcc_dist: f64,
    pub env_scc_dist: f64,
    pub zcr_delta: f64,
    pub peak_count_delta: f64,
    pub skew_delta: f64,
    pub kurt_delta: f64,
    pub psd_euclidean: f64,
    pub ncd: f64,
    pub jsd: f64,
}

impl From<MetricVector> for DsinfoMetricVector {
    fn from(m: MetricVector) -> Self {
        DsinfoMetricVector {
            rmse: m.rmse,
            nmse: m.nmse,
            pcc_dist: m.pcc_dist,
            scc_dist: m.scc_dist,
            env_pcc_dist: m.env_pcc_dist,
            env_scc_dist: m.env_scc_dist,
            zcr_delta: m.zcr_delta,
            peak_count_delta: m.peak_count_delta,
            skew_delta: m.skew_delta,
            kurt_delta: m.kurt_delta,
            psd_euclidean: m.psd_euclidean,
            ncd: m.ncd,
            jsd: m.jsd,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> DsinfoStatus {
    match err.root() {
        Error::InvalidArgument(_) | Error::Config(_) => DsinfoStatus::InvalidArgument,
        Error::Length(_) | Error::Mismatch(_) => DsinfoStatus::LengthError,
        Error::Degenerate(_) => DsinfoStatus::Degenerate,
        Error::Alignment(_) => DsinfoStatus::AlignmentError,
        Error::Data(_) | Error::EmptyResult(_) | Error::Ingestion(_) | Error::Format(_) => DsinfoStatus::DataError,
        _ => DsinfoStatus::Internal,
    }
}

/// Runs `f`, recording any error or panic for `dsinfo_last_error_message`.
fn guard(f: impl FnOnce() -> Result<(), (DsinfoStatus, String)>) -> DsinfoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DsinfoStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            DsinfoStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (DsinfoStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (DsinfoStatus, String) {
    (DsinfoStatus::NullPointer, format!("{what} is null"))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], (DsinfoStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn algorithm(code: u32) -> Option<Algorithm> {
    Some(match code {
        0 => Algorithm::Decimate,
        1 => Algorithm::M4,
        2 => Algorithm::MinMax,
        3 => Algorithm::Lttb,
        4 => Algorithm::MinMaxLttb,
        _ => return None,
    })
}

/// Message of the calling thread's last failure, or "" after a success.
/// The pointer stays valid until the next dsinfo call on this thread.
#[no_mangle]
pub extern "C" fn dsinfo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dsinfo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies `len` samples into a new signal sampled at `sample_rate_hz`.
///
/// # Safety
/// `values` must point to `len` readable doubles and `out` to writable
/// storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn dsinfo_signal_new(
    values: *const f64,
    len: usize,
    sample_rate_hz: f64,
    out: *mut *mut DsinfoSignal,
) -> DsinfoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let v = slice(values, len, "values")?.to_vec();
        let inner = Signal::new(v, sample_rate_hz).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(DsinfoSignal { inner }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `signal` must be null or a handle from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn dsinfo_signal_free(signal: *mut DsinfoSignal) {
    if !signal.is_null() {
        drop(Box::from_raw(signal));
    }
}

/// Number of samples; 0 for a null handle.
///
/// # Safety
/// `signal` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dsinfo_signal_len(signal: *const DsinfoSignal) -> usize {
    signal.as_ref().map_or(0, |s| s.inner.len())
}

/// Sample rate in Hz; 0 for a null handle.
///
/// # Safety
/// `signal` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dsinfo_signal_sample_rate(signal: *const DsinfoSignal) -> f64 {
    signal.as_ref().map_or(0.0, |s| s.inner.sample_rate_hz())
}

/// Copies the samples into `buf`. `written` receives the sample count even
/// when `capacity` is too small (status BufferTooSmall).
///
/// # Safety
/// `signal` must be a live handle, `buf` must have room for `capacity`
/// doubles and `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dsinfo_signal_values(
    signal: *const DsinfoSignal,
    buf: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> DsinfoStatus {
    guard(|| {
        let s = signal.as_ref().ok_or_else(|| null("signal"))?;
        let w = written.as_mut().ok_or_else(|| null("written"))?;
        let v = s.inner.values();
        *w = v.len();
        if capacity < v.len() {
            return Err((
                DsinfoStatus::BufferTooSmall,
                format!("need {} doubles, got {capacity}", v.len()),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
        Ok(())
    })
}

/// Parent-signal positions of the samples of a downsampled signal (i for
/// an original one). Same buffer contract as `dsinfo_signal_values`.
///
/// # Safety
/// As for `dsinfo_signal_values`, with `buf` holding `capacity` size_t.
#[no_mangle]
pub unsafe extern "C" fn dsinfo_signal_positions(
    signal: *const DsinfoSignal,
    buf: *mut usize,
    capacity: usize,
    written: *mut usize,
) -> DsinfoStatus {
    guard(|| {
        let s = signal.as_ref().ok_or_else(|| null("signal"))?;
        let w = written.as_mut().ok_or_else(|| null("written"))?;
        let n = s.inner.len();
        let positions: Vec<usize> = match s.inner.provenance() {
            Provenance::Selected(idx) => idx.clone(),
            Provenance::Strided { factor } => (0..n).map(|i| i * factor).collect(),
            Provenance::Original => (0..n).collect(),
        };
        *w = n;
        if capacity < n {
            return Err((
                DsinfoStatus::BufferTooSmall,
                format!("need {n} positions, got {capacity}"),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(positions.as_ptr(), buf, n);
        Ok(())
    })
}

/// Downsamples `signal` by `factor` with `algorithm_code` (a DsinfoAlgorithm
/// value). MinMaxLTTB uses a pre-selection ratio of 4.
///
/// # Safety
/// `signal` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dsinfo_downsample(
    signal: *const DsinfoSignal,
    algorithm_code: u32,
    factor: usize,
    out: *mut *mut DsinfoSignal,
) -> DsinfoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = signal.as_ref().ok_or_else(|| null("signal"))?;
        let alg = algorithm(algorithm_code).ok_or_else(|| {
            (
                DsinfoStatus::InvalidArgument,
                format!("unknown algorithm code {algorithm_code}"),
            )
        })?;
        let config = DownsampleConfig::new(alg, factor);
        let inner = downsample(&s.inner, &config).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(DsinfoSignal { inner }));
        Ok(())
    })
}

/// All 13 metrics between an original and a signal downsampled from it.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dsinfo_metric_profile(
    original: *const DsinfoSignal,
    downsampled: *const DsinfoSignal,
    out: *mut DsinfoMetricVector,
) -> DsinfoStatus {
    guard(|| {
        let x = original.as_ref().ok_or_else(|| null("original"))?;
        let y = downsampled.as_ref().ok_or_else(|| null("downsampled"))?;
        let o = out.as_mut().ok_or_else(|| null("out"))?;
        *o = metric_profile(&x.inner, &y.inner).map_err(lib_err)?.into();
        Ok(())
    })
}

/// Pairwise accuracy weighting pair i by exp(-lambda * accuracy_delta[i]);
/// `correct[i]` is nonzero when pair i was ordered correctly.
///
/// # Safety
/// `correct` and `accuracy_delta` must hold `n` elements, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dsinfo_weighted_accuracy(
    correct: *const u8,
    accuracy_delta: *const f64,
    n: usize,
    lambda: f64,
    out: *mut f64,
) -> DsinfoStatus {
    guard(|| {
        let o = out.as_mut().ok_or_else(|| null("out"))?;
        let c = slice(correct, n, "correct")?;
        let d = slice(accuracy_delta, n, "accuracy_delta")?;
        let pairs: Vec<(bool, f64)> = c.iter().zip(d).map(|(c, d)| (*c != 0, *d)).collect();
        *o = weighted_accuracy(&pairs, lambda).map_err(lib_err)?;
        Ok(())
    })
}

/// Kendall's tau-b between two score sequences of length `n`.
///
/// # Safety
/// `x` and `y` must hold `n` doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dsinfo_kendall_tau_b(x: *const f64, y: *const f64, n: usize, out: *mut f64) -> DsinfoStatus {
    guard(|| {
        let o = out.as_mut().ok_or_else(|| null("out"))?;
        let a = slice(x, n, "x")?;
        let b = slice(y, n, "y")?;
        *o = kendall_tau_b(a, b).map_err(lib_err)?;
        Ok(())
    })
}
