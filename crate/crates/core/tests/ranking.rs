mod common;

use proptest::prelude::*;
use rand::Rng;

use dsinfo::downsample::{Algorithm, DownsampleConfig};
use dsinfo::metrics::{ConfigMetricSummary, MetricVector, METRIC_COUNT};
use dsinfo::pipeline::Treatment;
use dsinfo::ranking::{
    attribution, build_pairs, evaluate_ranking, kendall_tau, kendall_tau_b, rank_by_wins, train_ranker,
    weighted_accuracy, PairSample,
};

use common::fixtures;

#[test]
fn weighted_accuracy_hand_values() {
    for lambda in [5.0, 10.0, 20.0] {
        let preds = [(true, 0.0), (false, 2f64.ln() / lambda)];
        assert!((weighted_accuracy(&preds, lambda).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }
    let preds = [(true, 0.1), (false, 0.1), (true, 0.3), (true, 0.0)];
    assert_eq!(weighted_accuracy(&preds, 0.0).unwrap(), 0.75);
    let w: Vec<f64> = preds.iter().map(|(_, d)| (-10.0f64 * d).exp()).collect();
    let want = (w[0] + w[2] + w[3]) / w.iter().sum::<f64>();
    assert!((weighted_accuracy(&preds, 10.0).unwrap() - want).abs() < 1e-15);
    assert_eq!(weighted_accuracy(&[(true, 0.2); 3], 7.0).unwrap(), 1.0);
    assert!(weighted_accuracy(&preds, -1.0).is_err());
}

#[test]
fn tau_on_identical_and_reversed_orders() {
    let order: Vec<DownsampleConfig> = [2, 5, 10, 30]
        .iter()
        .map(|&k| DownsampleConfig::new(Algorithm::Lttb, k))
        .collect();
    let reversed: Vec<DownsampleConfig> = order.iter().rev().copied().collect();
    assert_eq!(kendall_tau(&order, &order).unwrap(), 1.0);
    assert_eq!(kendall_tau(&order, &reversed).unwrap(), -1.0);
}

#[test]
fn tau_b_matches_pair_enumeration() {
    let mut r = common::rng(31);
    for _ in 0..200 {
        let n = r.random_range(3..30);
        let x: Vec<f64> = (0..n).map(|_| r.random_range(0..6) as f64).collect();
        let y: Vec<f64> = (0..n).map(|_| r.random_range(0..6) as f64).collect();
        if x.iter().all(|v| *v == x[0]) || y.iter().all(|v| *v == y[0]) {
            continue;
        }
        let got = kendall_tau_b(&x, &y).unwrap();
        assert!((got - common::kendall_tau_b(&x, &y)).abs() < 1e-12);
    }
}

fn summary(config: DownsampleConfig, rmse: f64) -> ConfigMetricSummary {
    let m = MetricVector {
        rmse,
        env_pcc_dist: 0.5 * rmse,
        ..MetricVector::default()
    };
    ConfigMetricSummary {
        config,
        mean_metrics: m,
        std_metrics: MetricVector::default(),
        n_pairs: 1,
        n_excluded: 0,
    }
}

#[test]
fn linear_scores_order_the_wins() {
    let summaries: Vec<ConfigMetricSummary> = (1..=6)
        .map(|k| summary(DownsampleConfig::new(Algorithm::MinMax, k * 5), k as f64))
        .collect();
    let evals: Vec<_> = summaries
        .iter()
        .map(|s| fixtures::evaluation(Treatment::Downsampled(s.config), 1.0 - s.mean_metrics.rmse / 10.0))
        .collect();
    let set = build_pairs(&summaries, &evals).unwrap();
    assert_eq!(set.pairs.len(), 15);
    let model = train_ranker(&set.pairs, 0.01, 0).unwrap();
    let ranked = rank_by_wins(&model, &summaries);
    let wins: Vec<usize> = ranked.iter().map(|r| r.wins).collect();
    assert_eq!(wins, vec![5, 4, 3, 2, 1, 0]);
    assert_eq!(ranked[0].config.factor, 5);
    for p in &set.pairs {
        let contributions = attribution(&model, p);
        let total: f64 = contributions.iter().sum();
        assert!((total + model.bias - model.score(&p.metric_delta)).abs() < 1e-9);
    }
}

#[test]
fn two_configs_one_win() {
    let a = summary(DownsampleConfig::new(Algorithm::Lttb, 2), 0.1);
    let b = summary(DownsampleConfig::new(Algorithm::Lttb, 50), 2.0);
    let pairs: Vec<PairSample> = (0..10)
        .map(|i| PairSample {
            config_a: a.config,
            config_b: b.config,
            metric_delta: MetricVector::from_array(std::array::from_fn(|j| if j == 0 { -1.0 - i as f64 } else { 0.0 })),
            label: 1,
            accuracy_delta: 0.1,
        })
        .collect();
    let model = train_ranker(&pairs, 0.01, 0).unwrap();
    let ranked = rank_by_wins(&model, &[b.clone(), a.clone()]);
    assert_eq!((ranked[0].config, ranked[0].wins), (a.config, 1));
    assert_eq!(ranked[1].wins, 0);
    let zero = PairSample {
        metric_delta: MetricVector::default(),
        ..pairs[0]
    };
    assert!(attribution(&model, &zero).iter().all(|c| *c == 0.0));
    let single = attribution(&model, &pairs[0]);
    assert_eq!(single.iter().filter(|c| **c != 0.0).count(), 1);
}

#[test]
fn end_to_end_grid_ranks_by_accuracy() {
    let (summaries, evaluations) = fixtures::ranking_grid(5);
    let (_, ranked, eval) = evaluate_ranking(&summaries, &evaluations, 0.01, &[5.0, 10.0, 20.0], 1).unwrap();
    assert_eq!(ranked.len(), 12);
    assert_eq!(eval.n_pairs + eval.dropped_ties, 66);
    assert!(eval.kendall_tau >= 0.9, "tau {}", eval.kendall_tau);
    assert_eq!(eval.weighted_accuracy.len(), 3);
    let again = evaluate_ranking(&summaries, &evaluations, 0.01, &[5.0, 10.0, 20.0], 1).unwrap();
    assert_eq!(again.2, eval);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lambda_zero_is_plain_accuracy(preds in prop::collection::vec((any::<bool>(), 0.0f64..1.0), 1..50)) {
        let plain = preds.iter().filter(|(c, _)| *c).count() as f64 / preds.len() as f64;
        prop_assert!((weighted_accuracy(&preds, 0.0).unwrap() - plain).abs() < 1e-12);
    }

    #[test]
    fn ranker_is_antisymmetric(seed in 0u64..1000) {
        let mut r = common::rng(seed);
        let cfg = DownsampleConfig::new(Algorithm::M4, 2);
        let pairs: Vec<PairSample> = (0..20)
            .map(|_| {
                let d: [f64; METRIC_COUNT] = std::array::from_fn(|_| r.random_range(-1.0..1.0));
                PairSample {
                    config_a: cfg,
                    config_b: cfg,
                    metric_delta: MetricVector::from_array(d),
                    label: u8::from(d[0] + 0.3 * d[4] < 0.0),
                    accuracy_delta: r.random_range(0.0..0.2),
                }
            })
            .collect();
        let model = train_ranker(&pairs, 0.01, seed).unwrap();
        for p in &pairs {
            let flipped = MetricVector::from_array(p.metric_delta.to_array().map(|v| -v));
            prop_assert!((model.probability(&p.metric_delta) + model.probability(&flipped) - 1.0).abs() < 1e-12);
        }
    }
}
