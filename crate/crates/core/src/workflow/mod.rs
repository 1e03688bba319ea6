//! The end-to-end workflow behind the `dsinfo` binary: downsample grid,
//! metric summaries, cross-validated classification, ranking, analyses,
//! timing and plots, all written below one artifact directory.

pub mod artifacts;
mod config;
mod plot;
pub mod svg;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use artifacts::{ArtifactEntry, ArtifactManifest, ArtifactWriter, ARTIFACT_MANIFEST};
pub use config::{DatasetSource, SynthSource, WorkflowConfig, BUILTIN_CONFIG};
pub use plot::cmd_plot;

use crate::analysis::{
    cluster_importances, critical_factor, jaccard_stability, mark_dominated, mds_embed, speedup, trajectory_export,
    EmbeddedPoint, ParetoPoint, NEMENYI_ALPHA,
};
use crate::downsample::{apply_grid, DownsampleConfig, GridResult};
use crate::error::{Error, Result};
use crate::metrics::{profile_dataset, ConfigMetricSummary, Reference, METRIC_NAMES};
use crate::pipeline::{evaluate, extract_dataset, ConfigEvaluation, Treatment, FEATURE_NAMES};
use crate::ranking::{attribution, build_pairs, evaluate_ranking, format_lambda};
use crate::signal::{write_dataset, DataFormat, LabeledDataset};
use crate::stats::derive_seed;

pub const METRICS_JSON: &str = "metrics/metric_summaries.json";
pub const EVALUATIONS_JSON: &str = "classification/evaluations.json";

/// Process exit status for an error: 2 configuration, 3 data, 4 internal.
pub fn exit_code(err: &Error) -> i32 {
    match err.root() {
        Error::Config(_) | Error::InvalidArgument(_) => 2,
        Error::Io { .. }
        | Error::Format(_)
        | Error::Ingestion(_)
        | Error::Data(_)
        | Error::Length(_)
        | Error::EmptyResult(_)
        | Error::Degenerate(_)
        | Error::Stratification(_)
        | Error::Mismatch(_)
        | Error::MissingArtifact(_) => 3,
        _ => 4,
    }
}

fn num(v: f64) -> String {
    format!("{v}")
}

/// Results whose failure only means "not applicable to this data" are kept
/// as a reason string; anything else aborts.
fn soft<T>(r: Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if matches!(e.root(), Error::Degenerate(_) | Error::EmptyResult(_)) => Ok(Err(e.to_string())),
        Err(e) => Err(e),
    }
}

#[derive(Serialize)]
struct Skipped<'a> {
    skipped: &'a str,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub n_signals: usize,
    pub classes: BTreeMap<String, usize>,
    pub sample_rate_hz: f64,
    pub min_len: usize,
    pub max_len: usize,
    pub n_groups: Option<usize>,
}

impl DatasetInfo {
    pub fn of(ds: &LabeledDataset) -> DatasetInfo {
        let mut classes = BTreeMap::new();
        for l in ds.labels() {
            *classes.entry(l.clone()).or_insert(0) += 1;
        }
        let lens = ds.signals().iter().map(|s| s.len());
        DatasetInfo {
            n_signals: ds.len(),
            classes,
            sample_rate_hz: ds.sample_rate_hz(),
            min_len: lens.clone().min().unwrap_or(0),
            max_len: lens.max().unwrap_or(0),
            n_groups: ds.groups().map(|g| g.iter().collect::<BTreeSet<_>>().len()),
        }
    }
}

fn load(config: &WorkflowConfig) -> Result<LabeledDataset> {
    config.validate()?;
    config.load_dataset().map_err(|e| e.in_step("load"))
}

fn log(step: &str, start: Instant, detail: &str) {
    eprintln!("[{step}] {detail} ({:.1} s)", start.elapsed().as_secs_f64());
}

fn downsample_step(ds: &LabeledDataset, config: &WorkflowConfig) -> Result<Vec<GridResult>> {
    let start = Instant::now();
    let grid: Vec<GridResult> = apply_grid(ds, &config.grid())
        .into_iter()
        .collect::<Result<_>>()
        .map_err(|e| e.in_step("downsample"))?;
    log("downsample", start, &format!("{} cells", grid.len()));
    Ok(grid)
}

fn metrics_step(ds: &LabeledDataset, grid: &[GridResult]) -> Result<Vec<ConfigMetricSummary>> {
    let start = Instant::now();
    let refs: Vec<Reference<'_>> = ds.signals().par_iter().map(Reference::new).collect();
    let summaries = grid
        .iter()
        .map(|g| profile_dataset(&refs, &g.dataset, g.config))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_step("metrics"))?;
    log("metrics", start, &format!("{} summaries", summaries.len()));
    Ok(summaries)
}

fn write_metrics(w: &mut ArtifactWriter, summaries: &[ConfigMetricSummary]) -> Result<()> {
    let mut header = vec!["config", "algorithm", "factor", "n_pairs", "n_excluded"];
    let mean_cols: Vec<String> = METRIC_NAMES.iter().map(|m| format!("mean_{m}")).collect();
    let std_cols: Vec<String> = METRIC_NAMES.iter().map(|m| format!("std_{m}")).collect();
    header.extend(mean_cols.iter().map(String::as_str));
    header.extend(std_cols.iter().map(String::as_str));
    let rows: Vec<Vec<String>> = summaries
        .iter()
        .map(|s| {
            let mut r = vec![
                s.config.to_string(),
                s.config.algorithm.name().to_string(),
                s.config.factor.to_string(),
                s.n_pairs.to_string(),
                s.n_excluded.to_string(),
            ];
            r.extend(s.mean_metrics.to_array().iter().map(|v| num(*v)));
            r.extend(s.std_metrics.to_array().iter().map(|v| num(*v)));
            r
        })
        .collect();
    w.write_csv("metrics/metric_summary.csv", &header, &rows, false)?;
    w.write_json(METRICS_JSON, summaries, false)?;
    Ok(())
}

/// Extracts features and cross-validates the original and every grid cell.
/// Cells run in parallel; each cell's signals are extracted serially so the
/// per-signal times are single-threaded measurements.
fn classification_step(
    ds: &LabeledDataset,
    grid: &[GridResult],
    config: &WorkflowConfig,
) -> Result<Vec<ConfigEvaluation>> {
    let start = Instant::now();
    let mut jobs: Vec<(Treatment, &LabeledDataset)> = vec![(Treatment::Original, ds)];
    jobs.extend(grid.iter().map(|g| (Treatment::Downsampled(g.config), &g.dataset)));
    let evals = jobs
        .par_iter()
        .map(|(t, d)| {
            let table = extract_dataset(d, false)?;
            evaluate(&table, *t, config.folds, config.seed)
        })
        .zip(jobs.par_iter())
        .map(|(r, (t, _))| r.map_err(|e| e.in_cell(t)))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_step("classification"))?;
    log("classification", start, &format!("{} treatments", evals.len()));
    Ok(evals)
}

fn write_classification(w: &mut ArtifactWriter, evals: &[ConfigEvaluation]) -> Result<()> {
    w.write_json(EVALUATIONS_JSON, evals, false)?;
    let cell = |t: &Treatment| vec![t.to_string(), t.algorithm_name().to_string(), t.factor().to_string()];

    let rows: Vec<Vec<String>> = evals
        .iter()
        .map(|e| {
            let mut r = cell(&e.treatment);
            r.extend([
                num(e.mean_accuracy),
                num(e.std_accuracy),
                serde_json::to_value(e.fold_strategy)?
                    .as_str()
                    .unwrap_or_default()
                    .to_string(),
                e.non_finite_features.to_string(),
            ]);
            Ok(r)
        })
        .collect::<Result<_>>()?;
    w.write_csv(
        "classification/summary.csv",
        &[
            "treatment",
            "algorithm",
            "factor",
            "mean_accuracy",
            "std_accuracy",
            "fold_strategy",
            "non_finite_features",
        ],
        &rows,
        false,
    )?;

    let mut rows = Vec::new();
    for e in evals {
        for f in &e.folds {
            let mut r = cell(&e.treatment);
            r.extend([
                f.fold_id.to_string(),
                num(f.accuracy),
                num(f.f1_macro),
                num(f.precision_macro),
                num(f.recall_macro),
            ]);
            rows.push(r);
        }
    }
    w.write_csv(
        "classification/folds.csv",
        &[
            "treatment",
            "algorithm",
            "factor",
            "fold",
            "accuracy",
            "f1_macro",
            "precision_macro",
            "recall_macro",
        ],
        &rows,
        false,
    )?;

    let mut rows = Vec::new();
    for e in evals {
        let classes: Vec<&String> = e.folds[0].per_class.keys().collect();
        let n = e.folds.len() as f64;
        for c in classes {
            let sens = e.folds.iter().map(|f| f.per_class[c].sensitivity).sum::<f64>() / n;
            let spec = e.folds.iter().map(|f| f.per_class[c].specificity).sum::<f64>() / n;
            let undefined = e.folds.iter().filter(|f| f.per_class[c].undefined).count();
            let mut r = cell(&e.treatment);
            r.extend([c.clone(), num(sens), num(spec), undefined.to_string()]);
            rows.push(r);
        }
    }
    w.write_csv(
        "classification/per_class.csv",
        &[
            "treatment",
            "algorithm",
            "factor",
            "class",
            "sensitivity",
            "specificity",
            "undefined_folds",
        ],
        &rows,
        false,
    )?;

    let mut rows = Vec::new();
    for e in evals {
        let classes: Vec<&String> = e.folds[0].per_class.keys().collect();
        for f in &e.folds {
            for (i, row) in f.confusion.iter().enumerate() {
                for (j, count) in row.iter().enumerate() {
                    let mut r = vec![e.treatment.to_string(), f.fold_id.to_string()];
                    r.extend([classes[i].clone(), classes[j].clone(), count.to_string()]);
                    rows.push(r);
                }
            }
        }
    }
    w.write_csv(
        "classification/confusion.csv",
        &["treatment", "fold", "true", "predicted", "count"],
        &rows,
        false,
    )?;

    let mut header = vec!["treatment", "algorithm", "factor"];
    header.extend(FEATURE_NAMES);
    let rows: Vec<Vec<String>> = evals
        .iter()
        .map(|e| {
            let mut r = cell(&e.treatment);
            r.extend(e.mean_importances().iter().map(|v| num(*v)));
            r
        })
        .collect();
    w.write_csv("classification/importances.csv", &header, &rows, false)?;

    let rows: Vec<Vec<String>> = evals
        .iter()
        .map(|e| {
            let sets: Vec<BTreeSet<String>> = e.folds.iter().map(|f| f.selected_features.clone()).collect();
            let mut r = cell(&e.treatment);
            r.push(num(jaccard_stability(&sets)?));
            Ok(r)
        })
        .collect::<Result<_>>()?;
    w.write_csv(
        "classification/stability.csv",
        &["treatment", "algorithm", "factor", "jaccard"],
        &rows,
        false,
    )?;
    Ok(())
}

/// Trains and evaluates the ranker and writes its artifacts. Data on which
/// no ranker can be fitted (e.g. every accuracy tied) is recorded as
/// skipped.
pub fn ranking_step(
    w: &mut ArtifactWriter,
    summaries: &[ConfigMetricSummary],
    evals: &[ConfigEvaluation],
    config: &WorkflowConfig,
) -> Result<()> {
    let start = Instant::now();
    let outcome = soft(evaluate_ranking(
        summaries,
        evals,
        config.l2,
        &config.lambdas,
        config.seed,
    ))
    .map_err(|e| e.in_step("ranking"))?;
    let (model, ranked, evaluation) = match outcome {
        Ok(v) => v,
        Err(reason) => {
            eprintln!("[ranking] skipped: {reason}");
            w.write_json("ranking/evaluation.json", &Skipped { skipped: &reason }, false)?;
            return Ok(());
        }
    };
    w.write_json("ranking/model.json", &model, false)?;
    w.write_json("ranking/evaluation.json", &evaluation, false)?;

    let truth: BTreeMap<String, f64> = evals
        .iter()
        .filter_map(|e| e.treatment.config().map(|c| (c.to_string(), e.mean_accuracy)))
        .collect();
    let rows: Vec<Vec<String>> = ranked
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let key = r.config.to_string();
            vec![
                (i + 1).to_string(),
                key.clone(),
                r.config.algorithm.name().to_string(),
                r.config.factor.to_string(),
                r.wins.to_string(),
                num(r.score),
                num(truth[&key]),
            ]
        })
        .collect();
    w.write_csv(
        "ranking/ranking.csv",
        &[
            "rank",
            "config",
            "algorithm",
            "factor",
            "wins",
            "score",
            "mean_accuracy",
        ],
        &rows,
        false,
    )?;

    let pairs = build_pairs(summaries, evals)?.pairs;
    let rows: Vec<Vec<String>> = METRIC_NAMES
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let mean_abs = pairs.iter().map(|p| attribution(&model, p)[j].abs()).sum::<f64>() / pairs.len() as f64;
            vec![
                m.to_string(),
                num(model.weights[j]),
                num(model.delta_scale[j]),
                num(mean_abs),
            ]
        })
        .collect();
    w.write_csv(
        "ranking/attribution.csv",
        &["metric", "weight", "delta_scale", "mean_abs_contribution"],
        &rows,
        false,
    )?;
    let weighted: Vec<String> = config
        .lambdas
        .iter()
        .map(|l| {
            format!(
                "{}={:.3}",
                format_lambda(*l),
                evaluation.weighted_accuracy[&format_lambda(*l)]
            )
        })
        .collect();
    log(
        "ranking",
        start,
        &format!(
            "tau {:.3}, weighted accuracy {}",
            evaluation.kendall_tau,
            weighted.join(" ")
        ),
    );
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct CriticalRecord {
    algorithm: String,
    critical_factor: Option<usize>,
    friedman_statistic: Option<f64>,
    p_value: Option<f64>,
    critical_difference: Option<f64>,
    rank_gaps: Vec<(usize, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
}

#[derive(Serialize)]
struct ClusterReport<'a> {
    treatments: Vec<String>,
    features: &'a [&'a str],
    chosen_k: usize,
    silhouettes: &'a [(usize, f64)],
    assignment: BTreeMap<&'a str, usize>,
    /// Mean importance of each cluster's features per treatment.
    centroids: &'a [Vec<f64>],
}

#[derive(Serialize)]
struct EmbeddingReport<'a> {
    dims: usize,
    pearson_fidelity: f64,
    spearman_fidelity: f64,
    stress: f64,
    iterations: usize,
    start: &'a crate::analysis::MdsStart,
    points: &'a [EmbeddedPoint],
}

fn analysis_step(w: &mut ArtifactWriter, evals: &[ConfigEvaluation], config: &WorkflowConfig) -> Result<()> {
    let start = Instant::now();
    let original = evals
        .iter()
        .find(|e| e.treatment == Treatment::Original)
        .ok_or_else(|| Error::EmptyResult("no evaluation of the original data".into()))?;

    let mut by_alg: BTreeMap<&str, Vec<(usize, Vec<f64>)>> = BTreeMap::new();
    for e in evals {
        if let Some(c) = e.treatment.config() {
            by_alg
                .entry(c.algorithm.name())
                .or_default()
                .push((c.factor, e.fold_accuracies()));
        }
    }
    let mut records = Vec::new();
    for (alg, per_factor) in &by_alg {
        let rec = match soft(critical_factor(per_factor, &original.fold_accuracies(), NEMENYI_ALPHA))? {
            Ok(cf) => CriticalRecord {
                algorithm: alg.to_string(),
                critical_factor: cf.factor,
                friedman_statistic: Some(cf.friedman.statistic),
                p_value: Some(cf.friedman.p_value),
                critical_difference: Some(cf.critical_difference),
                rank_gaps: cf.rank_gaps,
                skipped: None,
            },
            Err(reason) => CriticalRecord {
                algorithm: alg.to_string(),
                critical_factor: None,
                friedman_statistic: None,
                p_value: None,
                critical_difference: None,
                rank_gaps: Vec::new(),
                skipped: Some(reason),
            },
        };
        records.push(rec);
    }
    w.write_json("analysis/critical_factors.json", &records, false)?;
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.algorithm.clone(),
                r.critical_factor.map(|f| f.to_string()).unwrap_or_default(),
                opt(r.friedman_statistic),
                opt(r.p_value),
                opt(r.critical_difference),
            ]
        })
        .collect();
    w.write_csv(
        "analysis/critical_factors.csv",
        &[
            "algorithm",
            "critical_factor",
            "friedman_statistic",
            "p_value",
            "critical_difference",
        ],
        &rows,
        false,
    )?;

    // features as points, their mean importance per treatment as coordinates
    let mut sorted: Vec<&ConfigEvaluation> = evals.iter().collect();
    sorted.sort_by(|a, b| a.treatment.sort_key_cmp(&b.treatment));
    let means: Vec<Vec<f64>> = sorted.iter().map(|e| e.mean_importances()).collect();
    let vectors: Vec<Vec<f64>> = (0..FEATURE_NAMES.len())
        .map(|f| means.iter().map(|m| m[f]).collect())
        .collect();
    let k_max = config.cluster_k_max.min(FEATURE_NAMES.len() - 1);
    match soft(cluster_importances(&vectors, 2..=k_max, derive_seed(config.seed, 101)))? {
        Ok(c) => {
            let report = ClusterReport {
                treatments: sorted.iter().map(|e| e.treatment.to_string()).collect(),
                features: &FEATURE_NAMES,
                chosen_k: c.chosen_k,
                silhouettes: &c.silhouettes,
                assignment: FEATURE_NAMES
                    .iter()
                    .copied()
                    .zip(c.assignment.iter().copied())
                    .collect(),
                centroids: &c.centroids,
            };
            w.write_json("analysis/clusters.json", &report, false)?;
        }
        Err(reason) => {
            w.write_json("analysis/clusters.json", &Skipped { skipped: &reason }, false)?;
        }
    }

    let mut points = Vec::new();
    let mut vectors = Vec::new();
    for e in &sorted {
        for f in 0..e.folds.len() {
            vectors.push(e.fold_importances(f));
            points.push(EmbeddedPoint {
                treatment: e.treatment,
                fold: e.folds[f].fold_id,
                coords: Vec::new(),
            });
        }
    }
    match soft(mds_embed(&vectors, config.mds_dims, derive_seed(config.seed, 102)))? {
        Ok(m) => {
            for (p, c) in points.iter_mut().zip(&m.embedding) {
                p.coords = c.clone();
            }
            let report = EmbeddingReport {
                dims: config.mds_dims,
                pearson_fidelity: m.pearson_fidelity,
                spearman_fidelity: m.spearman_fidelity,
                stress: m.stress,
                iterations: m.stress_history.len() - 1,
                start: &m.start,
                points: &points,
            };
            w.write_json("analysis/embedding.json", &report, false)?;
            w.write_json("analysis/trajectories.json", &trajectory_export(&points), false)?;
        }
        Err(reason) => {
            w.write_json("analysis/embedding.json", &Skipped { skipped: &reason }, false)?;
            w.write_json("analysis/trajectories.json", &Vec::<()>::new(), false)?;
        }
    }
    log("analysis", start, &format!("{} critical-factor tests", records.len()));
    Ok(())
}

fn timing_step(w: &mut ArtifactWriter, grid: &[GridResult], evals: &[ConfigEvaluation]) -> Result<()> {
    let wall: BTreeMap<String, f64> = grid.iter().map(|g| (g.config.to_string(), g.wall_time_s)).collect();
    let mut rows = Vec::new();
    for e in evals {
        let key = e.treatment.to_string();
        rows.push(vec![
            key.clone(),
            wall.get(&key).map(|v| num(*v)).unwrap_or_default(),
            num(e.extraction_time_s),
        ]);
    }
    w.write_csv(
        "timing/timings.csv",
        &["treatment", "downsample_wall_s", "extraction_s"],
        &rows,
        true,
    )?;

    let t_orig = evals
        .iter()
        .find(|e| e.treatment == Treatment::Original)
        .map(|e| e.extraction_time_s)
        .ok_or_else(|| Error::EmptyResult("no evaluation of the original data".into()))?;
    let rows: Vec<Vec<String>> = evals
        .iter()
        .filter(|e| e.treatment != Treatment::Original)
        .map(|e| {
            let s = speedup(t_orig, e.extraction_time_s)?;
            Ok(vec![e.treatment.to_string(), num(s.t_orig), num(s.t_ds), num(s.s)])
        })
        .collect::<Result<_>>()?;
    w.write_csv("timing/speedup.csv", &["treatment", "t_orig", "t_ds", "S"], &rows, true)?;

    let points: Vec<ParetoPoint> = evals
        .iter()
        .map(|e| ParetoPoint::new(e.treatment, e.extraction_time_s, e.mean_accuracy))
        .collect();
    let rows: Vec<Vec<String>> = mark_dominated(&points)
        .iter()
        .map(|p| {
            vec![
                p.treatment.to_string(),
                p.treatment.algorithm_name().to_string(),
                p.treatment.factor().to_string(),
                num(p.extraction_time_s),
                num(p.mean_accuracy),
                p.dominated.to_string(),
            ]
        })
        .collect();
    w.write_csv(
        "timing/pareto.csv",
        &[
            "treatment",
            "algorithm",
            "factor",
            "extraction_time_s",
            "mean_accuracy",
            "dominated",
        ],
        &rows,
        true,
    )?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub out: PathBuf,
    pub dataset: DatasetInfo,
    pub manifest: ArtifactManifest,
}

/// Runs every step and writes the artifact directory `config.out`.
pub fn cmd_run(config: &WorkflowConfig) -> Result<RunOutcome> {
    let ds = load(config)?;
    let info = DatasetInfo::of(&ds);
    let mut w = ArtifactWriter::fresh(&config.out)?;
    w.write_json("config.json", config, false)?;
    w.write_json("dataset.json", &info, false)?;

    let grid = downsample_step(&ds, config)?;
    let summaries = metrics_step(&ds, &grid)?;
    write_metrics(&mut w, &summaries)?;
    let evals = classification_step(&ds, &grid, config)?;
    write_classification(&mut w, &evals)?;
    ranking_step(&mut w, &summaries, &evals, config)?;
    analysis_step(&mut w, &evals, config).map_err(|e| e.in_step("analysis"))?;
    timing_step(&mut w, &grid, &evals).map_err(|e| e.in_step("timing"))?;
    plot::render_plots(&mut w).map_err(|e| e.in_step("plot"))?;
    let manifest = w.finish()?;
    Ok(RunOutcome {
        out: config.out.clone(),
        dataset: info,
        manifest,
    })
}

/// Downsamples and writes metric summaries only.
pub fn cmd_metrics(config: &WorkflowConfig) -> Result<ArtifactManifest> {
    let ds = load(config)?;
    let mut w = ArtifactWriter::resume(&config.out)?;
    w.write_json("dataset.json", &DatasetInfo::of(&ds), false)?;
    let grid = downsample_step(&ds, config)?;
    let summaries = metrics_step(&ds, &grid)?;
    write_metrics(&mut w, &summaries)?;
    w.finish()
}

/// Re-ranks from the metric summaries and evaluations of a previous run.
pub fn cmd_rank(dir: &Path, config: &WorkflowConfig) -> Result<ArtifactManifest> {
    let summaries: Vec<ConfigMetricSummary> = artifacts::read_json_artifact(dir, METRICS_JSON)?;
    let evals: Vec<ConfigEvaluation> = artifacts::read_json_artifact(dir, EVALUATIONS_JSON)?;
    let mut w = ArtifactWriter::resume(dir)?;
    ranking_step(&mut w, &summaries, &evals, config)?;
    w.finish()
}

/// Writes the configured dataset (after segmentation) as files in `format`.
pub fn cmd_synth(config: &WorkflowConfig, format: DataFormat) -> Result<DatasetInfo> {
    let ds = load(config)?;
    write_dataset(&config.out, &ds, format).map_err(|e| e.in_step("synth"))?;
    Ok(DatasetInfo::of(&ds))
}

pub const BENCH_WARMUPS: usize = 3;
pub const BENCH_REPEATS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub config: DownsampleConfig,
    pub t_orig: f64,
    pub t_ds: f64,
    #[serde(rename = "S")]
    pub s: f64,
}

/// Median over `BENCH_REPEATS` timed runs after `BENCH_WARMUPS` discarded
/// ones of serial feature extraction over the whole dataset.
pub fn time_extraction(ds: &LabeledDataset) -> Result<f64> {
    for _ in 0..BENCH_WARMUPS {
        extract_dataset(ds, false)?;
    }
    let mut times = Vec::with_capacity(BENCH_REPEATS);
    for _ in 0..BENCH_REPEATS {
        times.push(extract_dataset(ds, false)?.total_extraction_time_s());
    }
    times.sort_by(f64::total_cmp);
    Ok(times[BENCH_REPEATS / 2])
}

/// Isolated extraction timing on the calling thread: one row per grid cell.
pub fn cmd_bench(config: &WorkflowConfig) -> Result<Vec<BenchRow>> {
    let ds = load(config)?;
    let t_orig = time_extraction(&ds).map_err(|e| e.in_step("bench"))?;
    let mut rows = Vec::new();
    for cell in config.grid() {
        let result = apply_grid(&ds, &[cell]).remove(0).map_err(|e| e.in_step("bench"))?;
        let t_ds = time_extraction(&result.dataset).map_err(|e| e.in_cell(cell).in_step("bench"))?;
        let s = speedup(t_orig, t_ds)?;
        rows.push(BenchRow {
            config: cell,
            t_orig,
            t_ds,
            s: s.s,
        });
    }
    let mut w = ArtifactWriter::resume(&config.out)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.config.to_string(), num(r.t_orig), num(r.t_ds), num(r.s)])
        .collect();
    w.write_csv("bench/speedup.csv", &["config", "t_orig", "t_ds", "S"], &table, true)?;
    w.finish()?;
    Ok(rows)
}
