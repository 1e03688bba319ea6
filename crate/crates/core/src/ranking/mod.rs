//! Pairwise ranking of downsampling configurations from their metric
//! summaries: an L2-regularized logistic model on metric differences,
//! win-count ranking, Kendall's tau-b and exponentially weighted pairwise
//! accuracy.

mod model;
mod score;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use model::{attribution, train_ranker, RankerModel, DEFAULT_L2, MAX_ITERATIONS, TOLERANCE};
pub use score::{kendall_tau, kendall_tau_b, weighted_accuracy};

use crate::downsample::DownsampleConfig;
use crate::error::{Error, Result};
use crate::metrics::{ConfigMetricSummary, MetricVector};
use crate::pipeline::{ConfigEvaluation, Treatment};

pub const DEFAULT_LAMBDAS: [f64; 3] = [5.0, 10.0, 20.0];

/// Folds used for the reported pair-level accuracy.
pub const PAIR_CV_FOLDS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSample {
    pub config_a: DownsampleConfig,
    pub config_b: DownsampleConfig,
    /// mean metrics of a minus mean metrics of b.
    pub metric_delta: MetricVector,
    /// 1 when a reached the higher accuracy.
    pub label: u8,
    /// |acc_a - acc_b|.
    pub accuracy_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSet {
    pub pairs: Vec<PairSample>,
    /// Pairs left out because both accuracies were exactly equal.
    pub dropped_ties: usize,
}

/// Every unordered pair of configurations, in (algorithm, factor) order.
pub fn build_pairs(summaries: &[ConfigMetricSummary], evaluations: &[ConfigEvaluation]) -> Result<PairSet> {
    let mut accuracy: BTreeMap<String, f64> = BTreeMap::new();
    for e in evaluations {
        if let Treatment::Downsampled(c) = e.treatment {
            accuracy.insert(c.to_string(), e.mean_accuracy);
        }
    }
    let mut sorted: Vec<&ConfigMetricSummary> = summaries.iter().collect();
    sorted.sort_by(|a, b| a.config.sort_key_cmp(&b.config));
    if sorted.len() < 2 {
        return Err(Error::InvalidArgument(
            "ranking needs at least two configurations".into(),
        ));
    }
    if sorted.len() != accuracy.len() {
        return Err(Error::Mismatch(format!(
            "{} metric summaries but {} evaluated configurations",
            sorted.len(),
            accuracy.len()
        )));
    }
    let acc = |c: &DownsampleConfig| {
        accuracy
            .get(&c.to_string())
            .copied()
            .ok_or_else(|| Error::Mismatch(format!("no evaluation for {c}")))
    };
    let mut pairs = Vec::new();
    let mut dropped = 0;
    for (i, a) in sorted.iter().enumerate() {
        let acc_a = acc(&a.config)?;
        for b in &sorted[i + 1..] {
            let acc_b = acc(&b.config)?;
            if acc_a == acc_b {
                dropped += 1;
                continue;
            }
            pairs.push(PairSample {
                config_a: a.config,
                config_b: b.config,
                metric_delta: a.mean_metrics.sub(&b.mean_metrics),
                label: u8::from(acc_a > acc_b),
                accuracy_delta: (acc_a - acc_b).abs(),
            });
        }
    }
    Ok(PairSet {
        pairs,
        dropped_ties: dropped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedConfig {
    pub config: DownsampleConfig,
    pub wins: usize,
    /// Linear score of the configuration's mean metrics; differences of
    /// scores are the pairwise logits.
    pub score: f64,
}

/// Plays every configuration against every other with the model and sorts
/// by wins (descending), then by (algorithm name, factor).
pub fn rank_by_wins(model: &RankerModel, summaries: &[ConfigMetricSummary]) -> Vec<RankedConfig> {
    let mut ranked: Vec<RankedConfig> = summaries
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let wins = summaries
                .iter()
                .enumerate()
                .filter(|(j, b)| *j != i && model.probability(&a.mean_metrics.sub(&b.mean_metrics)) > 0.5)
                .count();
            RankedConfig {
                config: a.config,
                wins,
                score: model.linear_score(&a.mean_metrics),
            }
        })
        .collect();
    ranked.sort_by(|a, b| b.wins.cmp(&a.wins).then_with(|| a.config.sort_key_cmp(&b.config)));
    ranked
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEvaluation {
    /// Tau-b between predicted win counts and true mean accuracies.
    pub kendall_tau: f64,
    /// Keyed by lambda formatted without trailing zeros ("5", "10", ...).
    pub weighted_accuracy: BTreeMap<String, f64>,
    pub plain_accuracy: f64,
    pub n_pairs: usize,
    pub dropped_ties: usize,
    pub cv_folds: usize,
}

/// Held-out correctness of every pair under pair-level k-fold
/// cross-validation: (correct, accuracy_delta) per pair, in pair order.
pub fn cross_validated_predictions(pairs: &[PairSample], l2: f64, folds: usize, seed: u64) -> Result<Vec<(bool, f64)>> {
    if pairs.len() < folds || folds < 2 {
        return Err(Error::Degenerate(format!(
            "{} pairs cannot be split into {folds} folds",
            pairs.len()
        )));
    }
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut fold_of = vec![0; pairs.len()];
    for (pos, &i) in order.iter().enumerate() {
        fold_of[i] = pos % folds;
    }
    let mut out = vec![(false, 0.0); pairs.len()];
    for f in 0..folds {
        let train: Vec<PairSample> = pairs
            .iter()
            .zip(&fold_of)
            .filter(|(_, &k)| k != f)
            .map(|(p, _)| *p)
            .collect();
        let model = train_ranker(&train, l2, seed)?;
        for (i, p) in pairs.iter().enumerate().filter(|(i, _)| fold_of[*i] == f) {
            let predicted = model.probability(&p.metric_delta) > 0.5;
            out[i] = (predicted == (p.label == 1), p.accuracy_delta);
        }
    }
    Ok(out)
}

/// Trains on all pairs for the ranking, and reports pairwise accuracy from
/// pair-level cross-validation.
pub fn evaluate_ranking(
    summaries: &[ConfigMetricSummary],
    evaluations: &[ConfigEvaluation],
    l2: f64,
    lambdas: &[f64],
    seed: u64,
) -> Result<(RankerModel, Vec<RankedConfig>, RankEvaluation)> {
    let set = build_pairs(summaries, evaluations)?;
    let model = train_ranker(&set.pairs, l2, seed)?;
    let ranked = rank_by_wins(&model, summaries);

    let truth: BTreeMap<String, f64> = evaluations
        .iter()
        .filter_map(|e| e.treatment.config().map(|c| (c.to_string(), e.mean_accuracy)))
        .collect();
    let wins: Vec<f64> = ranked.iter().map(|r| r.wins as f64).collect();
    let acc: Vec<f64> = ranked.iter().map(|r| truth[&r.config.to_string()]).collect();
    let tau = kendall_tau_b(&wins, &acc)?;

    let held_out = cross_validated_predictions(&set.pairs, l2, PAIR_CV_FOLDS, seed)?;
    let mut weighted = BTreeMap::new();
    for &l in lambdas {
        weighted.insert(format_lambda(l), weighted_accuracy(&held_out, l)?);
    }
    let plain = weighted_accuracy(&held_out, 0.0)?;
    Ok((
        model,
        ranked,
        RankEvaluation {
            kendall_tau: tau,
            weighted_accuracy: weighted,
            plain_accuracy: plain,
            n_pairs: set.pairs.len(),
            dropped_ties: set.dropped_ties,
            cv_folds: PAIR_CV_FOLDS,
        },
    ))
}

pub fn format_lambda(l: f64) -> String {
    let s = format!("{l}");
    s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
}
