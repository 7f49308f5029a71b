//! Tropical geometry toolkit.
//!
//! Max-plus linear algebra on the tropical projective torus, hit-and-run
//! samplers over tropically convex sets, tropical Fermat-Weber points,
//! volume estimation for tropical polytopes, and three statistical
//! applications built on them: tropical logistic regression, tropical PCA
//! and tropical kernel density estimation. Phylogenetic trees enter through
//! their ultrametric (cophenetic) vectors.

pub mod centroid;
pub mod error;
pub mod geometry;
pub mod learn;
pub mod phylo;
pub mod rng;
pub mod sampler;
pub mod synth;
pub mod tropical;

pub use centroid::{
    fermat_weber_lp, fermat_weber_regularized, fermat_weber_subgradient, FermatWeberResult,
    FwMethod, RegularizedFWConfig, StepSchedule, SubgradientConfig,
};
pub use error::{Error, ErrorKind, Result};
pub use geometry::{
    ball_generators, ball_volume, estimate_volume, min_enclosing_ball, polytope_contains,
    TropicalBall, VolumeConfig, VolumeEstimate,
};
pub use learn::{
    fit_logistic, fit_tropical_pca, kde_fit, kde_scores, pca_plot_coords, predict_prob, roc_auc,
    KdeModel, LogisticConfig, LogisticModel, PcaConfig, PcaTriangle, RocCurve,
};
pub use phylo::{
    is_ultrametric, parse_newick, subdominant_ultrametric, tree_to_vector, vector_to_tree,
    RootedTree, UltrametricVector,
};
pub use sampler::{
    har_step_polytope, run_chain, run_chains, sample_segment_centered, sample_segment_uniform,
    CenterTarget, ChainConfig,
};
pub use tropical::{
    hyperplane_distance, normalize_matrix, normalize_point, project_onto_polytope, trop_det,
    trop_distance, trop_linear_combination, trop_segment, Algebra, Determinant, TropicalHyperplane,
    TropicalPoint, TropicalPolytope, TropicalSegment,
};
