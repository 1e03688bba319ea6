use std::collections::BTreeMap;
use std::path::Path;

use super::artifacts::{read_csv_artifact, read_json_artifact, ArtifactManifest, ArtifactWriter};
use super::svg::{accuracy_svg, class_grid_svg, pareto_svg, trajectories_svg, AccuracyPoint, ParetoMarker};
use crate::analysis::Trajectory;
use crate::error::{Error, Result};

fn field<'a>(row: &'a BTreeMap<String, String>, name: &str, file: &str) -> Result<&'a str> {
    row.get(name)
        .map(String::as_str)
        .ok_or_else(|| Error::Format(format!("{file}: missing column '{name}'")))
}

fn parse<T: std::str::FromStr>(row: &BTreeMap<String, String>, name: &str, file: &str) -> Result<T> {
    let s = field(row, name, file)?;
    s.parse()
        .map_err(|_| Error::Format(format!("{file}: column '{name}' has unparsable value '{s}'")))
}

fn accuracy_plot(dir: &Path) -> Result<String> {
    const SUMMARY: &str = "classification/summary.csv";
    const CRITICAL: &str = "analysis/critical_factors.csv";
    let mut original = None;
    let mut points = Vec::new();
    for row in read_csv_artifact(dir, SUMMARY)? {
        let alg = field(&row, "algorithm", SUMMARY)?.to_string();
        let mean: f64 = parse(&row, "mean_accuracy", SUMMARY)?;
        if alg == "Original" {
            original = Some((mean, parse(&row, "std_accuracy", SUMMARY)?));
        } else {
            points.push(AccuracyPoint {
                algorithm: alg,
                factor: parse(&row, "factor", SUMMARY)?,
                mean_accuracy: mean,
            });
        }
    }
    let original = original.ok_or_else(|| Error::Format(format!("{SUMMARY}: no Original row")))?;
    let mut critical = BTreeMap::new();
    for row in read_csv_artifact(dir, CRITICAL)? {
        let f = field(&row, "critical_factor", CRITICAL)?;
        if !f.is_empty() {
            critical.insert(
                field(&row, "algorithm", CRITICAL)?.to_string(),
                parse(&row, "critical_factor", CRITICAL)?,
            );
        }
    }
    accuracy_svg(&points, original, &critical)
}

fn class_plot(dir: &Path) -> Result<String> {
    const FILE: &str = "classification/per_class.csv";
    let mut rows: Vec<String> = Vec::new();
    let mut cols: Vec<String> = Vec::new();
    let mut cells: BTreeMap<(String, String), f64> = BTreeMap::new();
    for row in read_csv_artifact(dir, FILE)? {
        let t = field(&row, "treatment", FILE)?.to_string();
        let c = field(&row, "class", FILE)?.to_string();
        if !rows.contains(&t) {
            rows.push(t.clone());
        }
        if !cols.contains(&c) {
            cols.push(c.clone());
        }
        cells.insert((t, c), parse(&row, "sensitivity", FILE)?);
    }
    let values: Vec<Vec<f64>> = rows
        .iter()
        .map(|t| {
            cols.iter()
                .map(|c| cells.get(&(t.clone(), c.clone())).copied().unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    class_grid_svg("Per-class sensitivity", &rows, &cols, &values)
}

fn pareto_plot(dir: &Path) -> Result<String> {
    const FILE: &str = "timing/pareto.csv";
    let markers = read_csv_artifact(dir, FILE)?
        .iter()
        .map(|row| {
            Ok(ParetoMarker {
                label: field(row, "treatment", FILE)?.to_string(),
                algorithm: field(row, "algorithm", FILE)?.to_string(),
                time_s: parse(row, "extraction_time_s", FILE)?,
                accuracy: parse(row, "mean_accuracy", FILE)?,
                dominated: parse(row, "dominated", FILE)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    pareto_svg(&markers)
}

fn trajectory_plot(dir: &Path) -> Result<String> {
    const FILE: &str = "analysis/trajectories.json";
    let trajectories: Vec<Trajectory> = read_json_artifact(dir, FILE)?;
    if trajectories.is_empty() {
        return Err(Error::MissingArtifact(dir.join(FILE)));
    }
    trajectories_svg(&trajectories)
}

fn embedding_skipped(dir: &Path) -> bool {
    read_json_artifact::<serde_json::Value>(dir, "analysis/embedding.json")
        .map(|v| v.get("skipped").is_some())
        .unwrap_or(false)
}

/// Renders every plot from the artifacts below the writer's root. The
/// trajectory plot is left out when the embedding step was skipped.
pub(super) fn render_plots(w: &mut ArtifactWriter) -> Result<()> {
    let dir = w.root().to_path_buf();
    let accuracy = accuracy_plot(&dir)?;
    w.write_bytes("plots/accuracy.svg", accuracy.as_bytes(), false)?;
    let classes = class_plot(&dir)?;
    w.write_bytes("plots/per_class.svg", classes.as_bytes(), false)?;
    let pareto = pareto_plot(&dir)?;
    w.write_bytes("plots/pareto.svg", pareto.as_bytes(), true)?;
    if !embedding_skipped(&dir) {
        let traj = trajectory_plot(&dir)?;
        w.write_bytes("plots/trajectories.svg", traj.as_bytes(), false)?;
    }
    Ok(())
}

type Renderer = fn(&Path) -> Result<String>;

/// Renders the plots of an existing artifact directory. Every input must be
/// present and non-empty; a missing one is reported by path.
pub fn cmd_plot(dir: &Path) -> Result<ArtifactManifest> {
    let mut w = ArtifactWriter::resume(dir)?;
    let dir = dir.to_path_buf();
    let plots: [(&str, Renderer, bool); 4] = [
        ("plots/accuracy.svg", accuracy_plot, false),
        ("plots/per_class.svg", class_plot, false),
        ("plots/pareto.svg", pareto_plot, true),
        ("plots/trajectories.svg", trajectory_plot, false),
    ];
    for (name, render, timing) in plots {
        let svg = render(&dir).map_err(|e| e.in_step("plot"))?;
        w.write_bytes(name, svg.as_bytes(), timing)?;
    }
    w.finish()
}
