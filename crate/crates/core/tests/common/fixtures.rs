//! Seeded fixtures shared by several test targets.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use dsinfo::downsample::{apply_grid, Algorithm, DownsampleConfig};
use dsinfo::metrics::{profile_dataset, ConfigMetricSummary, Reference};
use dsinfo::pipeline::{ConfigEvaluation, FoldStrategy, Treatment};
use dsinfo::signal::{synth_dataset, synth_muap_signal, LabeledDataset, Signal};

pub const MUAP_RATE_HZ: f64 = 23437.5;
pub const RANKING_FACTORS: [usize; 6] = [2, 5, 10, 25, 50, 100];

/// A bare evaluation carrying only a treatment and its mean accuracy.
pub fn evaluation(treatment: Treatment, mean_accuracy: f64) -> ConfigEvaluation {
    ConfigEvaluation {
        treatment,
        folds: Vec::new(),
        mean_accuracy,
        std_accuracy: 0.0,
        fold_strategy: FoldStrategy::Stratified,
        non_finite_features: 0,
        extraction_time_s: 0.0,
    }
}

/// Triphasic MUAP trains: 0.5 ms phases at 30 Hz, noise 0.1, 2 s.
pub fn muap_signals(seeds: std::ops::Range<u64>) -> Vec<Signal> {
    seeds
        .map(|s| synth_muap_signal(&super::muap(30.0, 0.1, 2.0, s), MUAP_RATE_HZ).unwrap())
        .collect()
}

/// Metric summaries of LTTB and Decimate on MUAP trains over six factors,
/// with accuracies that fall with ln(k), twice as fast for Decimate, plus
/// small seeded noise.
pub fn ranking_grid(seed: u64) -> (Vec<ConfigMetricSummary>, Vec<ConfigEvaluation>) {
    let classes = super::rate_classes(&[("a", 12.0), ("b", 24.0)], 0.05, 1.0, 0.2);
    let ds = synth_dataset(&classes, 3, MUAP_RATE_HZ, seed).unwrap();
    let references: Vec<Reference> = ds.signals().iter().map(Reference::new).collect();
    let configs: Vec<DownsampleConfig> = [Algorithm::Lttb, Algorithm::Decimate]
        .iter()
        .flat_map(|a| RANKING_FACTORS.iter().map(move |&k| DownsampleConfig::new(*a, k)))
        .collect();
    let mut rng = super::rng(seed);
    let noise = Normal::new(0.0, 0.003).unwrap();
    let mut summaries = Vec::new();
    let mut evaluations = vec![evaluation(Treatment::Original, 0.97)];
    for (config, cell) in configs.iter().zip(apply_grid(&ds, &configs)) {
        summaries.push(profile_dataset(&references, &cell.unwrap().dataset, *config).unwrap());
        let slope = if config.algorithm == Algorithm::Lttb {
            0.03
        } else {
            0.06
        };
        let acc = 0.97 - slope * (config.factor as f64).ln() + noise.sample(&mut rng);
        evaluations.push(evaluation(Treatment::Downsampled(*config), acc));
    }
    (summaries, evaluations)
}

/// Ten fold accuracies for the original and factors {2, 10, 30, 50}: no
/// change up to 10, a clear drop from 30 on.
pub fn degradation_folds(seed: u64) -> (Vec<f64>, Vec<(usize, Vec<f64>)>) {
    let mut rng = super::rng(seed);
    let mut draw = |level: f64| -> Vec<f64> { (0..10).map(|_| level + rng.random_range(-0.02..0.02)).collect() };
    let original = draw(0.9);
    let per_factor = vec![(2, draw(0.9)), (10, draw(0.9)), (30, draw(0.7)), (50, draw(0.7))];
    (original, per_factor)
}

/// Three classes that differ only in firing rate.
pub fn rate_dataset(rates: [f64; 3], noise_std: f64, duration_s: f64, n_per_class: usize, seed: u64) -> LabeledDataset {
    let classes = super::rate_classes(
        &[("a", rates[0]), ("b", rates[1]), ("c", rates[2])],
        noise_std,
        duration_s,
        0.3,
    );
    synth_dataset(&classes, n_per_class, MUAP_RATE_HZ, seed).unwrap()
}

pub fn index_of(names: &[&str], name: &str) -> usize {
    names.iter().position(|n| *n == name).unwrap()
}
