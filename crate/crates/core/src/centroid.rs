//! Tropical Fermat-Weber points: minimizers of the sum of tropical
//! distances to a finite set of points.
//!
//! The minimizer is generally not unique. All solvers return one minimizer
//! together with its objective value, and callers should compare objectives
//! rather than points.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phylo::{leaf_count, subdominant_ultrametric};
use crate::tropical::{raw_distance, TropicalPoint, TropicalPolytope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FwMethod {
    Lp,
    Subgradient,
    Regularized,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FermatWeberResult {
    pub point: TropicalPoint,
    /// Minimized value: `distance_sum + penalty`.
    pub objective: f64,
    /// Sum of tropical distances from `point` to the data.
    pub distance_sum: f64,
    /// Ultrametric penalty `λ‖ω − π(ω)‖²` (zero for unregularized solvers).
    pub penalty: f64,
    pub method: FwMethod,
    pub iterations: usize,
    pub converged: bool,
}

/// Step sizes `η_t = η₀ / t^decay` along the normalized subgradient. With
/// `initial == None`, `η₀ = D / (4√e)` where `D` is the mean distance from
/// the starting point to the data and `e` the dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSchedule {
    pub initial: Option<f64>,
    pub decay: f64,
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule { initial: None, decay: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubgradientConfig {
    pub max_iters: usize,
    pub step: StepSchedule,
    /// Relative improvement below which an iteration counts as stagnant.
    pub tol: f64,
    /// Consecutive stagnant iterations that declare convergence.
    pub patience: usize,
}

impl Default for SubgradientConfig {
    fn default() -> Self {
        SubgradientConfig { max_iters: 10_000, step: StepSchedule::default(), tol: 1e-9, patience: 50 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizedFWConfig {
    pub lambda: f64,
    pub max_iters: usize,
    pub step: StepSchedule,
    pub tol: f64,
    pub patience: usize,
}

impl RegularizedFWConfig {
    pub fn new(lambda: f64) -> Self {
        let base = SubgradientConfig::default();
        RegularizedFWConfig {
            lambda,
            max_iters: base.max_iters,
            step: base.step,
            tol: base.tol,
            patience: base.patience,
        }
    }
}

/// Sum of tropical distances from `y` to every row.
pub fn fw_objective(points: &TropicalPolytope, y: &[f64]) -> f64 {
    points.generators().iter().map(|v| raw_distance(y, v.coords())).sum()
}

/// Exact Fermat-Weber point by linear programming.
///
/// With auxiliary variables `a_i ≥ y_j − v_ij` and `b_i ≤ y_j − v_ij` for
/// every coordinate `j`, the sum `Σ (a_i − b_i)` equals the objective at the
/// optimum. This is the epigraph form with `2se` constraints instead of
/// `se²`. The first coordinate of `y` is fixed at 0.
pub fn fermat_weber_lp(points: &TropicalPolytope) -> Result<FermatWeberResult> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    let e = points.dim();
    let free = (f64::NEG_INFINITY, f64::INFINITY);
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let y: Vec<_> = (1..e).map(|_| lp.add_var(0.0, free)).collect();
    for v in points.generators() {
        let v = v.coords();
        let a = lp.add_var(1.0, free);
        let b = lp.add_var(-1.0, free);
        for j in 0..e {
            // y_0 is the constant 0
            if j == 0 {
                lp.add_constraint(&[(a, 1.0)], ComparisonOp::Ge, -v[0]);
                lp.add_constraint(&[(b, 1.0)], ComparisonOp::Le, -v[0]);
            } else {
                lp.add_constraint(&[(a, 1.0), (y[j - 1], -1.0)], ComparisonOp::Ge, -v[j]);
                lp.add_constraint(&[(b, 1.0), (y[j - 1], -1.0)], ComparisonOp::Le, -v[j]);
            }
        }
    }
    let solution = lp.solve().map_err(|err| Error::SolverFailure(err.to_string()))?;
    let mut coords = vec![0.0; e];
    for (j, var) in y.iter().enumerate() {
        coords[j + 1] = solution[*var];
    }
    let point = TropicalPoint::new(coords)?;
    let distance_sum = fw_objective(points, point.coords());
    Ok(FermatWeberResult {
        point,
        objective: distance_sum,
        distance_sum,
        penalty: 0.0,
        method: FwMethod::Lp,
        iterations: 0,
        converged: true,
    })
}

/// Fermat-Weber point by subgradient descent from the coordinatewise median,
/// returning the best iterate seen.
pub fn fermat_weber_subgradient(
    points: &TropicalPolytope,
    config: &SubgradientConfig,
) -> Result<FermatWeberResult> {
    let settings = Descent {
        lambda: 0.0,
        max_iters: config.max_iters,
        step: config.step,
        tol: config.tol,
        patience: config.patience,
    };
    descend(points, &settings, FwMethod::Subgradient)
}

/// Fermat-Weber point with an ultrametric penalty, minimizing
/// `Σ d(x_i, ω) + λ‖ω − π(ω)‖²` where `π` is the subdominant ultrametric.
///
/// Each iteration takes a subgradient step on the distance sum and then a
/// proximal step on the penalty with `π(ω)` held fixed, which stays stable
/// for very large `λ`. When `λ > 0` the projection `π(ω)` of every iterate is
/// also considered as a candidate, so the result is at least as good as the
/// best ultrametric seen. With `λ == 0` this is exactly
/// [`fermat_weber_subgradient`].
pub fn fermat_weber_regularized(
    points: &TropicalPolytope,
    config: &RegularizedFWConfig,
) -> Result<FermatWeberResult> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    if !(config.lambda >= 0.0 && config.lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be a nonnegative number, got {}",
            config.lambda
        )));
    }
    if config.lambda > 0.0 {
        leaf_count(points.dim())?;
    }
    let settings = Descent {
        lambda: config.lambda,
        max_iters: config.max_iters,
        step: config.step,
        tol: config.tol,
        patience: config.patience,
    };
    descend(points, &settings, FwMethod::Regularized)
}

struct Descent {
    lambda: f64,
    max_iters: usize,
    step: StepSchedule,
    tol: f64,
    patience: usize,
}

fn coordinatewise_median(points: &TropicalPolytope) -> Vec<f64> {
    let e = points.dim();
    let s = points.len();
    let mut column = vec![0.0; s];
    (0..e)
        .map(|j| {
            for (c, v) in column.iter_mut().zip(points.generators()) {
                *c = v.coords()[j];
            }
            column.sort_by(f64::total_cmp);
            if s % 2 == 1 {
                column[s / 2]
            } else {
                0.5 * (column[s / 2 - 1] + column[s / 2])
            }
        })
        .collect()
}

/// Penalty `λ‖ω − π(ω)‖²` and the projection `π(ω)`.
fn penalty(lambda: f64, w: &[f64]) -> (f64, Vec<f64>) {
    let pi = subdominant_ultrametric(w).expect("dimension checked by caller");
    let sq: f64 = w.iter().zip(&pi).map(|(a, b)| (a - b) * (a - b)).sum();
    (lambda * sq, pi)
}

/// Argmax and argmin of `y − v`, lowest index on ties.
fn extreme_coords(y: &[f64], v: &[f64]) -> (usize, usize) {
    let (mut hi, mut lo) = (0, 0);
    let (mut hv, mut lv) = (y[0] - v[0], y[0] - v[0]);
    for j in 1..y.len() {
        let d = y[j] - v[j];
        if d > hv {
            hv = d;
            hi = j;
        }
        if d < lv {
            lv = d;
            lo = j;
        }
    }
    (hi, lo)
}

fn descend(points: &TropicalPolytope, cfg: &Descent, method: FwMethod) -> Result<FermatWeberResult> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    if cfg.patience == 0 || !(cfg.tol >= 0.0) {
        return Err(Error::InvalidParameter("patience must be positive and tol nonnegative".into()));
    }
    let s = points.len();
    let e = points.dim();
    let regularize = cfg.lambda > 0.0;
    let score = |y: &[f64]| -> (f64, f64) {
        let dist = fw_objective(points, y);
        let pen = if regularize { penalty(cfg.lambda, y).0 } else { 0.0 };
        (dist, pen)
    };

    let mut y = coordinatewise_median(points);
    let (d0, p0) = score(&y);
    let mut best = (y.clone(), d0, p0);
    let consider = |cand: &[f64], best: &mut (Vec<f64>, f64, f64)| -> bool {
        let (d, p) = score(cand);
        let improved = d + p < (best.1 + best.2) - cfg.tol * (best.1 + best.2).abs().max(1.0);
        if d + p < best.1 + best.2 {
            *best = (cand.to_vec(), d, p);
        }
        improved
    };
    if regularize {
        let (_, pi) = penalty(cfg.lambda, &y);
        consider(&pi, &mut best);
    }

    let eta0 = cfg.step.initial.unwrap_or(d0 / s as f64 / (4.0 * (e as f64).sqrt()));
    let mut g = vec![0.0; e];
    let mut stagnant = 0usize;
    let mut iterations = 0usize;
    let mut converged = eta0 <= 0.0 || best.1 + best.2 == 0.0;
    while !converged && iterations < cfg.max_iters {
        iterations += 1;
        g.iter_mut().for_each(|x| *x = 0.0);
        for v in points.generators() {
            let (hi, lo) = extreme_coords(&y, v.coords());
            if hi != lo {
                g[hi] += 1.0;
                g[lo] -= 1.0;
            }
        }
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 && !regularize {
            // zero subgradient: y is a minimizer
            converged = true;
            break;
        }
        let eta = eta0 / (iterations as f64).powf(cfg.step.decay);
        if norm > 0.0 {
            for (yj, gj) in y.iter_mut().zip(&g) {
                *yj -= eta * gj / norm;
            }
        }
        if regularize {
            let (_, pi) = penalty(cfg.lambda, &y);
            let shrink = 2.0 * eta * cfg.lambda;
            for (yj, pj) in y.iter_mut().zip(&pi) {
                *yj = (*yj + shrink * pj) / (1.0 + shrink);
            }
        }
        let first = y[0];
        y.iter_mut().for_each(|x| *x -= first);

        let mut improved = consider(&y, &mut best);
        if regularize {
            let (_, pi) = penalty(cfg.lambda, &y);
            improved |= consider(&pi, &mut best);
        }
        if improved {
            stagnant = 0;
        } else {
            stagnant += 1;
            if stagnant >= cfg.patience {
                converged = true;
            }
        }
    }

    let (point, distance_sum, pen) = best;
    Ok(FermatWeberResult {
        point: TropicalPoint::new(point)?,
        objective: distance_sum + pen,
        distance_sum,
        penalty: pen,
        method,
        iterations,
        converged,
    })
}
