//! Statistical learning on the tropical projective torus.

mod kde;
mod logistic;
mod model_io;
mod pca;
mod roc;

pub use kde::{kde_fit, kde_outlier_scores, kde_scores, KdeModel, MIN_BANDWIDTH};
pub use logistic::{fit_logistic, predict_prob, LogisticConfig, LogisticModel, TrainMeta, SCALE_RANGE};
pub use model_io::{model_from_json, model_to_json, Model, MODEL_VERSION};
pub use pca::{fit_tropical_pca, pca_plot_coords, projection_objective, PcaConfig, PcaTriangle, PLOT_CORNERS};
pub use roc::{roc_auc, RocCurve};
