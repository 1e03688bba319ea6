use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::features::{FeatureTable, FEATURE_COUNT, FEATURE_NAMES};
use super::knn::{knn_predict, Standardizer, KNN_K};
use super::select::select_features;
use crate::error::{Error, Result};
use crate::stats::{derive_seed, mean, std_dev};

/// Shuffles per feature when estimating permutation importance.
pub const PERMUTATION_REPEATS: usize = 5;

/// How fold membership was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldStrategy {
    /// Whole recordings are assigned to folds.
    Grouped,
    Stratified,
}

/// Assigns each sample a fold in `0..folds`. Within every class the members
/// are shuffled and dealt round-robin, continuing from where the previous
/// class stopped so fold sizes stay balanced. When recording groups are
/// known, each class has at least `folds` of them and no group mixes
/// classes, whole groups are dealt instead of samples.
pub fn assign_folds(
    labels: &[usize],
    groups: Option<&[String]>,
    folds: usize,
    seed: u64,
) -> Result<(Vec<usize>, FoldStrategy)> {
    if folds < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 folds, got {folds}")));
    }
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_class.entry(l).or_default().push(i);
    }
    if let Some((c, members)) = by_class.iter().find(|(_, m)| m.len() < folds) {
        return Err(Error::Stratification(format!(
            "class {c} has {} members, fewer than {folds} folds",
            members.len()
        )));
    }

    // units are sample lists: single samples, or every sample of one group
    let mut units_by_class: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    let mut strategy = FoldStrategy::Stratified;
    if let Some(g) = groups {
        let mut group_members: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, name) in g.iter().enumerate() {
            group_members.entry(name.as_str()).or_default().push(i);
        }
        let pure = group_members
            .values()
            .all(|m| m.iter().all(|&i| labels[i] == labels[m[0]]));
        let mut grouped: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        for m in group_members.into_values() {
            grouped.entry(labels[m[0]]).or_default().push(m);
        }
        if pure && grouped.values().all(|u| u.len() >= folds) {
            units_by_class = grouped;
            strategy = FoldStrategy::Grouped;
        }
    }
    if strategy == FoldStrategy::Stratified {
        units_by_class = by_class
            .into_iter()
            .map(|(c, m)| (c, m.into_iter().map(|i| vec![i]).collect()))
            .collect();
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = vec![usize::MAX; labels.len()];
    let mut offset = 0;
    for units in units_by_class.values_mut() {
        units.shuffle(&mut rng);
        for (j, unit) in units.iter().enumerate() {
            for &i in unit {
                fold_of[i] = (offset + j) % folds;
            }
        }
        offset = (offset + units.len()) % folds;
    }
    Ok((fold_of, strategy))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassRates {
    pub sensitivity: f64,
    pub specificity: f64,
    /// Set when either rate had a zero denominator and was defined as 0.
    pub undefined: bool,
}

/// Sensitivity and specificity of every class of a confusion matrix whose
/// rows are true classes and columns predictions.
pub fn per_class_rates(confusion: &[Vec<usize>]) -> Vec<ClassRates> {
    let total: usize = confusion.iter().flatten().sum();
    (0..confusion.len())
        .map(|c| {
            let tp = confusion[c][c];
            let fn_ = confusion[c].iter().sum::<usize>() - tp;
            let fp = confusion.iter().map(|r| r[c]).sum::<usize>() - tp;
            let tn = total - tp - fn_ - fp;
            let ratio = |a: usize, b: usize| {
                if a + b == 0 {
                    None
                } else {
                    Some(a as f64 / (a + b) as f64)
                }
            };
            let sens = ratio(tp, fn_);
            let spec = ratio(tn, fp);
            ClassRates {
                sensitivity: sens.unwrap_or(0.0),
                specificity: spec.unwrap_or(0.0),
                undefined: sens.is_none() || spec.is_none(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationScores {
    pub accuracy: f64,
    pub f1_macro: f64,
    pub precision_macro: f64,
    pub recall_macro: f64,
}

pub fn classification_scores(confusion: &[Vec<usize>]) -> ClassificationScores {
    let k = confusion.len();
    let total: usize = confusion.iter().flatten().sum();
    let correct: usize = (0..k).map(|c| confusion[c][c]).sum();
    let (mut p_sum, mut r_sum, mut f_sum) = (0.0, 0.0, 0.0);
    for c in 0..k {
        let tp = confusion[c][c] as f64;
        let actual: usize = confusion[c].iter().sum();
        let predicted: usize = confusion.iter().map(|r| r[c]).sum();
        let p = if predicted > 0 { tp / predicted as f64 } else { 0.0 };
        let r = if actual > 0 { tp / actual as f64 } else { 0.0 };
        let f = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
        p_sum += p;
        r_sum += r;
        f_sum += f;
    }
    let kf = k.max(1) as f64;
    ClassificationScores {
        accuracy: if total > 0 { correct as f64 / total as f64 } else { 0.0 },
        f1_macro: f_sum / kf,
        precision_macro: p_sum / kf,
        recall_macro: r_sum / kf,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResults {
    pub fold_id: usize,
    pub accuracy: f64,
    pub f1_macro: f64,
    pub precision_macro: f64,
    pub recall_macro: f64,
    pub per_class: BTreeMap<String, ClassRates>,
    pub selected_features: BTreeSet<String>,
    /// Permutation importance of every feature; 0 for unselected ones.
    pub feature_importances: BTreeMap<String, f64>,
    pub confusion: Vec<Vec<usize>>,
    /// Summed extraction time of this fold's validation signals.
    #[serde(skip)]
    pub extraction_time_s: f64,
}

/// A model fitted on one training split.
#[derive(Debug, Clone)]
pub struct FoldModel {
    pub selected: Vec<usize>,
    pub scaler: Standardizer,
    train: Vec<Vec<f64>>,
    labels: Vec<usize>,
    n_classes: usize,
}

impl FoldModel {
    /// Selects features and fits z-scoring on the training rows only.
    pub fn fit(rows: &[[f64; FEATURE_COUNT]], labels: &[usize], n_classes: usize) -> Result<Self> {
        let full: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        let selected = select_features(&full, labels, &FEATURE_NAMES)?;
        let reduced: Vec<Vec<f64>> = full.iter().map(|r| selected.iter().map(|&j| r[j]).collect()).collect();
        let scaler = Standardizer::fit(&reduced);
        let train = reduced.iter().map(|r| scaler.transform(r)).collect();
        Ok(FoldModel {
            selected,
            scaler,
            train,
            labels: labels.to_vec(),
            n_classes,
        })
    }

    /// Selected and z-scored columns of a raw feature row.
    pub fn project(&self, row: &[f64; FEATURE_COUNT]) -> Vec<f64> {
        let reduced: Vec<f64> = self.selected.iter().map(|&j| row[j]).collect();
        self.scaler.transform(&reduced)
    }

    pub fn predict_projected(&self, x: &[f64]) -> usize {
        knn_predict(&self.train, &self.labels, x, KNN_K, self.n_classes)
    }

    pub fn predict(&self, row: &[f64; FEATURE_COUNT]) -> usize {
        self.predict_projected(&self.project(row))
    }
}

fn accuracy_of(model: &FoldModel, xs: &[Vec<f64>], ys: &[usize]) -> f64 {
    let hits = xs
        .iter()
        .zip(ys)
        .filter(|(x, &y)| model.predict_projected(x) == y)
        .count();
    hits as f64 / ys.len() as f64
}

/// Fits on the training split, scores the validation split and estimates
/// permutation importances there.
pub fn evaluate_fold(table: &FeatureTable, fold_of: &[usize], fold: usize, seed: u64) -> Result<FoldResults> {
    let n_classes = table.class_names.len();
    let (mut tr_rows, mut tr_y, mut va_rows, mut va_y) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut time = 0.0;
    for (i, row) in table.rows.iter().enumerate() {
        if fold_of[i] == fold {
            va_rows.push(*row);
            va_y.push(table.labels[i]);
            time += table.extraction_times_s[i];
        } else {
            tr_rows.push(*row);
            tr_y.push(table.labels[i]);
        }
    }
    if va_rows.is_empty() {
        return Err(Error::Stratification(format!("fold {fold} is empty")));
    }
    let model = FoldModel::fit(&tr_rows, &tr_y, n_classes)?;
    let xs: Vec<Vec<f64>> = va_rows.iter().map(|r| model.project(r)).collect();

    let mut confusion = vec![vec![0usize; n_classes]; n_classes];
    for (x, &y) in xs.iter().zip(&va_y) {
        confusion[y][model.predict_projected(x)] += 1;
    }
    let scores = classification_scores(&confusion);

    let mut importances: BTreeMap<String, f64> = FEATURE_NAMES.iter().map(|n| (n.to_string(), 0.0)).collect();
    for (col, &feat) in model.selected.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, (fold * FEATURE_COUNT + feat) as u64));
        let mut drops = 0.0;
        for _ in 0..PERMUTATION_REPEATS {
            let mut column: Vec<f64> = xs.iter().map(|x| x[col]).collect();
            column.shuffle(&mut rng);
            let permuted: Vec<Vec<f64>> = xs
                .iter()
                .zip(&column)
                .map(|(x, &v)| {
                    let mut x = x.clone();
                    x[col] = v;
                    x
                })
                .collect();
            drops += scores.accuracy - accuracy_of(&model, &permuted, &va_y);
        }
        let imp = (drops / PERMUTATION_REPEATS as f64).max(0.0);
        importances.insert(FEATURE_NAMES[feat].to_string(), imp);
    }

    let rates = per_class_rates(&confusion);
    Ok(FoldResults {
        fold_id: fold,
        accuracy: scores.accuracy,
        f1_macro: scores.f1_macro,
        precision_macro: scores.precision_macro,
        recall_macro: scores.recall_macro,
        per_class: table.class_names.iter().cloned().zip(rates).collect(),
        selected_features: model.selected.iter().map(|&j| FEATURE_NAMES[j].to_string()).collect(),
        feature_importances: importances,
        confusion,
        extraction_time_s: time,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvOutcome {
    pub folds: Vec<FoldResults>,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub strategy: FoldStrategy,
}

/// Stratified k-fold cross-validation of the k-NN pipeline. Fold
/// assignment and permutation shuffles are fixed by `seed`.
pub fn cross_validate(table: &FeatureTable, folds: usize, seed: u64) -> Result<CvOutcome> {
    let (fold_of, strategy) = assign_folds(&table.labels, table.groups.as_deref(), folds, seed)?;
    let results = (0..folds)
        .map(|f| evaluate_fold(table, &fold_of, f, derive_seed(seed, 1 + f as u64)))
        .collect::<Result<Vec<_>>>()?;
    let acc: Vec<f64> = results.iter().map(|r| r.accuracy).collect();
    Ok(CvOutcome {
        mean_accuracy: mean(&acc),
        std_accuracy: std_dev(&acc),
        folds: results,
        strategy,
    })
}
