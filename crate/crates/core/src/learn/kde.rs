//! Tropical kernel density estimation with a Laplacian kernel and
//! nearest-neighbor bandwidths.
//!
//! Scores are unnormalized, so they are meaningful for ranking (outlier
//! detection) but are not densities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tropical::{raw_distance, TropicalPoint, TropicalPolytope, EQ_TOL};

/// Smallest bandwidth, used for rows with an exact duplicate.
pub const MIN_BANDWIDTH: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdeModel {
    pub points: Vec<TropicalPoint>,
    pub bandwidths: Vec<f64>,
    pub multiplier: f64,
}

/// `σ_i = h · min_{j≠i} d(x_i, x_j)`, floored at [`MIN_BANDWIDTH`].
pub fn kde_fit<R: AsRef<[f64]>>(rows: &[R], multiplier: f64) -> Result<KdeModel> {
    if !(multiplier > 0.0 && multiplier.is_finite()) {
        return Err(Error::InvalidParameter(format!("bandwidth multiplier must be positive, got {multiplier}")));
    }
    let data = TropicalPolytope::from_rows(rows)?;
    if data.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, found: data.len() });
    }
    let points = data.generators();
    let bandwidths = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let nearest = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| raw_distance(points[i].coords(), q.coords()))
                .fold(f64::INFINITY, f64::min);
            (multiplier * nearest).max(MIN_BANDWIDTH)
        })
        .collect();
    Ok(KdeModel { points: points.to_vec(), bandwidths, multiplier })
}

impl KdeModel {
    /// Mean kernel value `exp(−d(q, x_i)/σ_i)`. With `holdout_self`, the
    /// first training row within [`EQ_TOL`] of the query is left out.
    pub fn score(&self, q: &TropicalPoint, holdout_self: bool) -> f64 {
        let q = q.coords();
        let mut total = 0.0;
        let mut count = 0usize;
        let mut skipped = !holdout_self;
        for (x, sigma) in self.points.iter().zip(&self.bandwidths) {
            let d = raw_distance(q, x.coords());
            if !skipped && d <= EQ_TOL {
                skipped = true;
                continue;
            }
            total += (-d / sigma).exp();
            count += 1;
        }
        if count == 0 {
            0.0
        } else {
            total / count as f64
        }
    }
}

/// Scores every query row (see [`KdeModel::score`]).
pub fn kde_scores<R: AsRef<[f64]> + Sync>(model: &KdeModel, queries: &[R], holdout_self: bool) -> Result<Vec<f64>> {
    let e = model.points.first().map_or(0, |p| p.dim());
    let queries = queries
        .iter()
        .map(|q| {
            let q = TropicalPoint::new(q.as_ref().to_vec())?;
            q.check_dim(e)?;
            Ok(q)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(queries.par_iter().map(|q| model.score(q, holdout_self)).collect())
}

/// Outlier scores for `candidates` judged one at a time against
/// `reference`.
///
/// Each candidate `c` is appended to the reference set on its own, the
/// nearest-neighbor bandwidths are recomputed for that set, and `c` is
/// scored with its own kernel left out. Candidates never see each other, so
/// a group of outliers cannot vouch for itself.
pub fn kde_outlier_scores<R: AsRef<[f64]>, S: AsRef<[f64]> + Sync>(
    reference: &[R],
    candidates: &[S],
    multiplier: f64,
) -> Result<Vec<f64>> {
    let base = kde_fit(reference, multiplier)?;
    let e = base.points[0].dim();
    let candidates = candidates
        .iter()
        .map(|c| {
            let c = TropicalPoint::new(c.as_ref().to_vec())?;
            c.check_dim(e)?;
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(candidates
        .par_iter()
        .map(|c| {
            let total: f64 = base
                .points
                .iter()
                .zip(&base.bandwidths)
                .map(|(x, &sigma)| {
                    let d = raw_distance(c.coords(), x.coords());
                    // the candidate may become this row's nearest neighbor
                    let sigma = sigma.min((multiplier * d).max(MIN_BANDWIDTH));
                    (-d / sigma).exp()
                })
                .sum();
            total / base.points.len() as f64
        })
        .collect())
}
