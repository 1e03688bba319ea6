mod common;

use proptest::prelude::*;
use rand::Rng;

use dsinfo::downsample::{downsample, Algorithm, DownsampleConfig};
use dsinfo::metrics::{
    align, envelope_metrics, hilbert_envelope, jsd, metric_profile, metric_profile_with, ncd, pointwise_metrics,
    psd_distance, summarize_config, welch_psd, MetricVector, Reference, METRIC_NAMES,
};
use dsinfo::signal::{synth_muap_signal, Signal};
use dsinfo::stats::{average_ranks, find_peaks, kurtosis, skewness, zero_crossing_rate};

const TOL: f64 = 1e-9;

fn close(a: f64, b: f64, what: &str) {
    assert!((a - b).abs() <= TOL * (1.0 + b.abs()), "{what}: {a} vs {b}");
}

fn random_pair(r: &mut rand_chacha::ChaCha8Rng) -> (Signal, Signal) {
    let n = r.random_range(300..=600);
    let x = Signal::new(common::wiggly(r, n), r.random_range(100.0..2000.0)).unwrap();
    let alg = Algorithm::ALL[r.random_range(0..5)];
    let k = [2, 3, 4, 5, 8][r.random_range(0..5)];
    let y = downsample(&x, &DownsampleConfig::new(alg, k)).unwrap();
    (x, y)
}

#[test]
fn profile_matches_direct_summation_on_random_fixtures() {
    let mut r = common::rng(21);
    for case in 0..100 {
        let (x, y) = random_pair(&mut r);
        let got = metric_profile(&x, &y).unwrap().to_array();
        let want = common::metric_profile(&x, &y);
        for (j, name) in METRIC_NAMES.iter().enumerate() {
            if *name != "ncd" {
                close(got[j], want[j], &format!("case {case} {name}"));
            }
        }
        let again = metric_profile_with(&Reference::new(&x), &y).unwrap();
        assert_eq!(again.ncd.to_bits(), got[11].to_bits());
    }
}

#[test]
fn building_blocks_match_oracles() {
    let mut r = common::rng(22);
    for _ in 0..30 {
        let n = r.random_range(16..200);
        let mut x = common::wiggly(&mut r, n);
        if n % 3 == 0 {
            x.iter_mut().for_each(|v| *v = v.round());
        }
        assert_eq!(average_ranks(&x), common::ranks(&x));
        assert_eq!(find_peaks(&x).len(), common::peak_count(&x));
        close(zero_crossing_rate(&x), common::zcr(&x), "zcr");
        close(skewness(&x), common::skewness(&x), "skew");
        close(kurtosis(&x), common::kurtosis(&x), "kurt");
        let env = hilbert_envelope(&x);
        for (a, b) in env.iter().zip(common::hilbert_envelope(&x)) {
            close(*a, b, "envelope");
        }
        let seg = (n / 2).min(64);
        let p = welch_psd(&x, 500.0, seg).unwrap();
        let (f, d) = common::welch(&x, 500.0, seg);
        assert_eq!(p.freqs.len(), f.len());
        for (a, b) in p.density.iter().zip(&d) {
            close(*a, *b, "welch");
        }
        let m = r.random_range(8..200);
        let y = common::gaussian(&mut r, m);
        close(jsd(&x, &y), common::jsd(&x, &y), "jsd");
    }
}

#[test]
fn alignment_matches_reconstruction_oracle() {
    let mut r = common::rng(23);
    for _ in 0..50 {
        let (x, y) = random_pair(&mut r);
        let (a, rec) = align(&x, &y).unwrap();
        assert_eq!(a, x.values());
        let want = common::reconstruct(&common::positions(&y, x.len()), y.values(), x.len());
        for (g, w) in rec.iter().zip(&want) {
            close(*g, *w, "reconstruction");
        }
    }
}

#[test]
fn identity_configuration_is_zero() {
    let mut r = common::rng(24);
    for _ in 0..10 {
        let x = Signal::new(common::wiggly(&mut r, 512), 1000.0).unwrap();
        for alg in [
            Algorithm::Decimate,
            Algorithm::MinMax,
            Algorithm::Lttb,
            Algorithm::MinMaxLttb,
        ] {
            let y = downsample(&x, &DownsampleConfig::new(alg, 1)).unwrap();
            let m = metric_profile(&x, &y).unwrap();
            for (name, v) in METRIC_NAMES.iter().zip(m.to_array()) {
                match *name {
                    // the compressor never reaches zero on a signal and itself
                    "ncd" => assert!(v < 0.5, "{alg:?} ncd {v}"),
                    "psd_euclidean" if alg == Algorithm::Decimate => assert!(v.abs() < 1e-6),
                    _ => assert!(v.abs() < 1e-9, "{alg:?} {name} {v}"),
                }
            }
        }
    }
}

#[test]
fn ncd_is_deterministic_and_orders_similarity() {
    let mut r = common::rng(25);
    let x = common::gaussian(&mut r, 2000);
    let y = common::gaussian(&mut r, 2000);
    assert_eq!(ncd(&x, &y).to_bits(), ncd(&x, &y).to_bits());
    assert!(ncd(&x, &x) < 0.5);
    assert!(ncd(&x, &y) > ncd(&x, &x));
    assert!((ncd(&x, &y) - ncd(&y, &x)).abs() < 0.05);
    let s: Vec<f64> = (0..1500).map(|i| (i as f64 * 0.01).sin()).collect();
    assert!(ncd(&s, &s) < 0.5);
}

#[test]
fn jsd_examples() {
    let mut r = common::rng(26);
    let a: Vec<f64> = (0..1000).map(|_| r.random_range(0.0..1.0)).collect();
    let b: Vec<f64> = (0..1000).map(|_| r.random_range(2.0..3.0)).collect();
    assert!((jsd(&a, &b) - 1.0).abs() < 1e-6);
    assert!(jsd(&a, &a).abs() < 1e-12);
    let n: Vec<f64> = common::gaussian(&mut r, 100_000);
    let m: Vec<f64> = common::gaussian(&mut r, 100_000).iter().map(|v| v + 0.5).collect();
    close(jsd(&n, &m), common::jsd(&n, &m), "normal vs shifted");
    assert_eq!(jsd(&n, &m), jsd(&m, &n));
}

#[test]
fn psd_of_ideal_decimation_is_small() {
    let tone = |rate: f64, n: usize| -> Vec<f64> {
        (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * 10.0 * i as f64 / rate).sin())
            .collect()
    };
    let x = Signal::new(tone(1000.0, 2000), 1000.0).unwrap();
    let y = Signal::strided(tone(100.0, 200), 100.0, 10).unwrap();
    assert!(psd_distance(&x, &y).unwrap() < 0.1);
    assert!(psd_distance(&x, &x).unwrap() < 1e-12);
}

#[test]
fn envelope_and_pointwise_edge_cases() {
    let x: Vec<f64> = (0..64).map(|i| (i as f64 * 0.4).sin()).collect();
    let neg: Vec<f64> = x.iter().map(|v| -v).collect();
    let p = pointwise_metrics(&x, &neg).unwrap();
    assert!((p.pcc_dist - 2.0).abs() < 1e-12);
    let (e, _) = envelope_metrics(&x, &neg).unwrap();
    assert!(e.abs() < 1e-9, "negation keeps the envelope");
    assert!(pointwise_metrics(&[1.0; 8], &x[..8]).is_err());
}

#[test]
fn summaries_are_population_moments() {
    let c = DownsampleConfig::new(Algorithm::Lttb, 2);
    let mut a = MetricVector::default();
    let mut b = MetricVector::default();
    a.rmse = 1.0;
    b.rmse = 3.0;
    let s = summarize_config(&[a, b], 1, c).unwrap();
    assert_eq!(s.mean_metrics.rmse, 2.0);
    assert_eq!(s.std_metrics.rmse, 1.0);
    assert_eq!((s.n_pairs, s.n_excluded), (2, 1));
    assert!(summarize_config(&[], 0, c).is_err());
}

#[test]
fn rmse_grows_with_factor_on_muaps() {
    let x = synth_muap_signal(&common::muap(20.0, 0.05, 1.0, 9), 23437.5).unwrap();
    let reference = Reference::new(&x);
    for alg in Algorithm::ALL {
        let rmse: Vec<f64> = [2, 5, 10, 25, 50, 100]
            .iter()
            .map(|&k| {
                let y = downsample(&x, &DownsampleConfig::new(alg, k)).unwrap();
                metric_profile_with(&reference, &y).unwrap().rmse
            })
            .collect();
        let inversions = rmse.windows(2).filter(|w| w[1] < w[0]).count();
        assert!(inversions <= 1, "{alg:?} {rmse:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn metric_ranges(values in prop::collection::vec(-10.0f64..10.0, 256..512), k in 2usize..6, a in 0usize..5) {
        let x = Signal::new(values, 500.0).unwrap();
        let y = downsample(&x, &DownsampleConfig::new(Algorithm::ALL[a], k)).unwrap();
        let m = metric_profile(&x, &y).unwrap();
        for v in m.to_array() {
            prop_assert!(v.is_finite() && v >= 0.0);
        }
        for d in [m.pcc_dist, m.scc_dist, m.env_pcc_dist, m.env_scc_dist] {
            prop_assert!(d <= 2.0);
        }
        prop_assert!(m.ncd <= 1.1 && m.jsd <= 1.0 && m.zcr_delta <= 1.0);
    }

    #[test]
    fn jsd_is_symmetric(x in prop::collection::vec(-3.0f64..3.0, 4..100), y in prop::collection::vec(-3.0f64..3.0, 4..100)) {
        prop_assert!((jsd(&x, &y) - jsd(&y, &x)).abs() < 1e-12);
    }
}
