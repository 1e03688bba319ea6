use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::pipeline::Treatment;

/// One embedded importance vector: a treatment on one fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedPoint {
    pub treatment: Treatment,
    pub fold: usize,
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryVertex {
    /// 1 for the original.
    pub factor: usize,
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub algorithm: String,
    pub fold: usize,
    pub vertices: Vec<TrajectoryVertex>,
}

/// One polyline per (algorithm, fold): the fold's original point, if
/// present, followed by that algorithm's points in ascending factor order.
pub fn trajectory_export(points: &[EmbeddedPoint]) -> Vec<Trajectory> {
    let originals: BTreeMap<usize, &EmbeddedPoint> = points
        .iter()
        .filter(|p| p.treatment == Treatment::Original)
        .map(|p| (p.fold, p))
        .collect();
    let mut lines: BTreeMap<(&'static str, usize), Vec<TrajectoryVertex>> = BTreeMap::new();
    for p in points {
        if let Treatment::Downsampled(c) = p.treatment {
            lines
                .entry((c.algorithm.name(), p.fold))
                .or_default()
                .push(TrajectoryVertex {
                    factor: c.factor,
                    coords: p.coords.clone(),
                });
        }
    }
    lines
        .into_iter()
        .map(|((algorithm, fold), mut vs)| {
            vs.sort_by_key(|v| v.factor);
            if let Some(o) = originals.get(&fold) {
                vs.insert(
                    0,
                    TrajectoryVertex {
                        factor: 1,
                        coords: o.coords.clone(),
                    },
                );
            }
            Trajectory {
                algorithm: algorithm.to_string(),
                fold,
                vertices: vs,
            }
        })
        .collect()
}
