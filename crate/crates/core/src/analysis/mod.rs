//! Post-hoc analyses: Friedman and Nemenyi tests for the critical factor,
//! the time/accuracy Pareto front, speedup, selection stability, k-means
//! clustering of importances and SMACOF embeddings.

mod friedman;
mod kmeans;
mod mds;
mod pareto;
mod special;
mod trajectory;

pub use friedman::{
    critical_factor, friedman_test, nemenyi_critical_difference, CriticalFactor, FriedmanResult, NEMENYI_ALPHA,
};
pub use kmeans::{cluster_importances, kmeans, silhouette, Clustering, KMeansResult, KMEANS_RESTARTS};
pub use mds::{
    classical_mds, distance_matrix, mds_embed, smacof, MdsResult, MdsStart, SMACOF_MAX_ITER, SMACOF_TOLERANCE,
};
pub use pareto::{jaccard_stability, mark_dominated, pareto_front, speedup, ParetoPoint, SpeedupRecord};
pub use special::{chi_square_sf, gamma_q, ln_gamma};
pub use trajectory::{trajectory_export, EmbeddedPoint, Trajectory, TrajectoryVertex};
