//! JSON model files.
//!
//! ```json
//! { "version": "tropml-model-v1", "kind": "logistic",
//!   "omega0": [...], "omega1": [...], "scale": 1.7, "penalty": 0.0,
//!   "train_meta": { "counts": [80, 80], "seed": 0 } }
//! { "version": "tropml-model-v1", "kind": "pca",
//!   "vertices": [[...], [...], [...]], "objective": 4.2, "trace": [...] }
//! ```
//!
//! Points are stored in canonical form. Floats are written in shortest
//! round-trip form, so loading reproduces a model bit for bit.

use serde::{Deserialize, Serialize};

use super::logistic::LogisticModel;
use super::pca::PcaTriangle;
use crate::error::{Error, Result};

pub const MODEL_VERSION: &str = "tropml-model-v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Model {
    Logistic(LogisticModel),
    Pca(PcaTriangle),
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    version: String,
    #[serde(flatten)]
    model: Model,
}

pub fn model_to_json(model: &Model) -> String {
    let env = Envelope { version: MODEL_VERSION.to_string(), model: model.clone() };
    serde_json::to_string_pretty(&env).expect("models serialize")
}

pub fn model_from_json(text: &str) -> Result<Model> {
    let env: Envelope = serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
    if env.version != MODEL_VERSION {
        return Err(Error::Model(format!(
            "unsupported model version {:?}, expected {MODEL_VERSION:?}",
            env.version
        )));
    }
    if let Model::Logistic(m) = &env.model {
        if m.omega0.dim() != m.omega1.dim() || !(m.scale > 0.0) {
            return Err(Error::Model("inconsistent logistic model".into()));
        }
    }
    Ok(env.model)
}
