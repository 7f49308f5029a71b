//! Tropical logistic regression.
//!
//! Each class is summarized by a (regularized) Fermat-Weber point and a row
//! is scored by how much closer it is to class 1 than to class 0:
//! `p(x) = sigmoid(scale · (d(x, ω0) − d(x, ω1)))`.

use serde::{Deserialize, Serialize};

use crate::centroid::{fermat_weber_regularized, RegularizedFWConfig, SubgradientConfig};
use crate::error::{Error, Result};
use crate::tropical::{raw_distance, TropicalPoint, TropicalPolytope};

/// Search interval for the link scale.
pub const SCALE_RANGE: (f64, f64) = (1e-3, 1e3);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainMeta {
    /// Training rows per class, `[class 0, class 1]`.
    pub counts: [usize; 2],
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub omega0: TropicalPoint,
    pub omega1: TropicalPoint,
    pub scale: f64,
    pub penalty: f64,
    pub train_meta: TrainMeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LogisticConfig {
    /// Settings of the centroid solver (its `lambda` comes from the penalty).
    pub fw: SubgradientConfig,
    /// Recorded in the model. Fitting itself is deterministic.
    pub seed: u64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let t = z.exp();
        t / (1.0 + t)
    }
}

/// `ln(sigmoid(z))`, stable for large `|z|`.
fn log_sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        -(-z).exp().ln_1p()
    } else {
        z - z.exp().ln_1p()
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

/// Fits class centroids with [`fermat_weber_regularized`] at rate `penalty`
/// and then the link scale by maximum likelihood (golden-section search over
/// `log10(scale)` on [`SCALE_RANGE`]).
pub fn fit_logistic<R: AsRef<[f64]>>(
    rows: &[R],
    labels: &[bool],
    penalty: f64,
    config: &LogisticConfig,
) -> Result<LogisticModel> {
    let data = TropicalPolytope::from_rows(rows)?;
    if labels.len() != data.len() {
        return Err(Error::DimensionMismatch { expected: data.len(), found: labels.len() });
    }
    let class = |c: bool| -> Vec<TropicalPoint> {
        data.generators()
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == c)
            .map(|(g, _)| g.clone())
            .collect()
    };
    let (x0, x1) = (class(false), class(true));
    if x0.is_empty() || x1.is_empty() {
        return Err(Error::SingleClass);
    }
    let counts = [x0.len(), x1.len()];
    let fw = RegularizedFWConfig {
        lambda: penalty,
        max_iters: config.fw.max_iters,
        step: config.fw.step,
        tol: config.fw.tol,
        patience: config.fw.patience,
    };
    let omega0 = fermat_weber_regularized(&TropicalPolytope::new(x0)?, &fw)?.point;
    let omega1 = fermat_weber_regularized(&TropicalPolytope::new(x1)?, &fw)?.point;

    let gaps: Vec<f64> = data
        .generators()
        .iter()
        .map(|g| raw_distance(g.coords(), omega0.coords()) - raw_distance(g.coords(), omega1.coords()))
        .collect();
    let log_lik = |log_scale: f64| -> f64 {
        let scale = 10f64.powf(log_scale);
        gaps.iter()
            .zip(labels)
            .map(|(&g, &l)| if l { log_sigmoid(scale * g) } else { log_sigmoid(-scale * g) })
            .sum()
    };
    let (lo, hi) = SCALE_RANGE;
    let scale = 10f64.powf(golden_max(log_lik, lo.log10(), hi.log10(), 1e-9));

    Ok(LogisticModel {
        omega0,
        omega1,
        scale,
        penalty,
        train_meta: TrainMeta { counts, seed: config.seed },
    })
}

impl LogisticModel {
    /// Probability of class 1.
    pub fn predict_prob(&self, x: &[f64]) -> Result<f64> {
        let e = self.omega0.dim();
        if x.len() != e {
            return Err(Error::DimensionMismatch { expected: e, found: x.len() });
        }
        if let Some(index) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let gap = raw_distance(x, self.omega0.coords()) - raw_distance(x, self.omega1.coords());
        Ok(sigmoid(self.scale * gap))
    }
}

/// Probability of class 1 for `x`.
pub fn predict_prob(model: &LogisticModel, x: &TropicalPoint) -> Result<f64> {
    model.predict_prob(x.coords())
}
