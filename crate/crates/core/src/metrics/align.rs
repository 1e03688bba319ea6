use crate::error::{Error, Result};
use crate::signal::{Provenance, Signal};

/// Maps a downsampled signal back onto the original index grid by linear
/// interpolation between retained positions, holding the end values
/// constant outside them. Returns (original samples, reconstruction), both
/// of the original's length.
pub fn align(original: &Signal, downsampled: &Signal) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = original.len();
    let positions: Vec<usize> = match downsampled.provenance() {
        Provenance::Selected(idx) => idx.clone(),
        Provenance::Strided { factor } => (0..downsampled.len()).map(|i| i * factor).collect(),
        Provenance::Original if downsampled.len() == n => (0..n).collect(),
        Provenance::Original => {
            return Err(Error::Alignment(
                "downsampled signal carries no source positions".into(),
            ))
        }
    };
    if let Some(&last) = positions.last() {
        if last >= n {
            return Err(Error::Alignment(format!(
                "source position {last} outside original of length {n}"
            )));
        }
    }
    let ys = downsampled.values();
    let mut out = vec![0.0; n];
    let first = positions[0];
    out[..=first].fill(ys[0]);
    for (w, pair) in positions.windows(2).enumerate() {
        let (p0, p1) = (pair[0], pair[1]);
        let (y0, y1) = (ys[w], ys[w + 1]);
        let span = (p1 - p0) as f64;
        for (off, slot) in out[p0..=p1].iter_mut().enumerate() {
            *slot = y0 + (y1 - y0) * off as f64 / span;
        }
    }
    let last = *positions.last().expect("non-empty signal");
    out[last..].fill(ys[ys.len() - 1]);
    Ok((original.values().to_vec(), out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_alignment() {
        let x = Signal::new(vec![1.0, -2.0, 3.0, 0.5], 4.0).unwrap();
        let (a, b) = align(&x, &x).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn two_point_ramp_reconstructs_exactly() {
        let ramp: Vec<f64> = (0..11).map(|i| 2.0 * i as f64 + 1.0).collect();
        let x = Signal::new(ramp.clone(), 10.0).unwrap();
        let d = Signal::selected(vec![1.0, 21.0], 2.0, vec![0, 10], 11).unwrap();
        let (_, rec) = align(&x, &d).unwrap();
        for (a, b) in ramp.iter().zip(&rec) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn strided_and_extrapolation() {
        let x = Signal::new(vec![0.0; 7], 7.0).unwrap();
        let d = Signal::strided(vec![1.0, 3.0, 5.0], 7.0 / 3.0, 3).unwrap();
        let (_, rec) = align(&x, &d).unwrap();
        let want = [1.0, 5.0 / 3.0, 7.0 / 3.0, 3.0, 11.0 / 3.0, 13.0 / 3.0, 5.0];
        for (a, b) in rec.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let d = Signal::selected(vec![4.0, 6.0], 1.0, vec![2, 4], 7).unwrap();
        let (_, rec) = align(&x, &d).unwrap();
        assert_eq!(rec, vec![4.0, 4.0, 4.0, 5.0, 6.0, 6.0, 6.0]);
    }

    #[test]
    fn missing_provenance_is_an_error() {
        let x = Signal::new(vec![0.0; 7], 7.0).unwrap();
        let d = Signal::new(vec![0.0; 3], 3.0).unwrap();
        assert!(matches!(align(&x, &d), Err(Error::Alignment(_))));
    }
}
