//! Tropical polytope geometry: hull membership, minimum enclosing tropical
//! balls, ball generators and volume estimation by sampling.

pub mod karp;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::{self, ChainConfig};
use crate::tropical::{raw_distance, TropicalPoint, TropicalPolytope, EQ_TOL};

/// Default tolerance for hull membership.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// `{y : d_tr(center, y) <= radius}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TropicalBall {
    pub center: TropicalPoint,
    pub radius: f64,
}

impl TropicalBall {
    pub fn new(center: TropicalPoint, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be finite and non-negative, got {radius}"
            )));
        }
        Ok(TropicalBall { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn contains(&self, y: &TropicalPoint, tol: f64) -> Result<bool> {
        Ok(self.center.distance(y)? <= self.radius + tol)
    }

    pub fn volume(&self) -> Result<f64> {
        ball_volume(self.dim(), self.radius)
    }
}

/// True iff `x` is within `tol` (tropical metric) of its projection onto
/// the hull of `p`.
pub fn polytope_contains(p: &TropicalPolytope, x: &TropicalPoint, tol: f64) -> Result<bool> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be >= 0, got {tol}")));
    }
    x.check_dim(p.dim())?;
    let mut scratch = vec![0.0; x.dim()];
    Ok(p.distance_to_hull(x.coords(), &mut scratch) <= tol)
}

/// `M[j][k] = max_i (v_ij - v_ik)`.
fn difference_matrix(v: &TropicalPolytope) -> Vec<Vec<f64>> {
    let e = v.dim();
    let mut m = vec![vec![f64::NEG_INFINITY; e]; e];
    for g in v.generators() {
        let c = g.coords();
        for j in 0..e {
            for k in 0..e {
                m[j][k] = m[j][k].max(c[j] - c[k]);
            }
        }
    }
    m
}

/// Smallest tropical ball containing every generator of `v`.
///
/// A center `x` with radius `r` must satisfy `x_k - x_j >= M[k][j] - r` for
/// all `j, k`. That system is feasible exactly when `r` is at least the
/// maximum cycle mean of `M`, so the optimal radius is that cycle mean, and a
/// center is the max-plus eigenvector of `M - r` rooted at the first
/// critical node.
pub fn min_enclosing_ball(v: &TropicalPolytope) -> Result<TropicalBall> {
    if v.is_empty() {
        return Err(Error::Empty);
    }
    let e = v.dim();
    let m = difference_matrix(v);
    let lambda = karp::max_cycle_mean(&m).max(0.0);
    // edge j -> k carries M[k][j] - lambda
    let w: Vec<Vec<f64>> = (0..e)
        .map(|j| (0..e).map(|k| m[k][j] - lambda).collect())
        .collect();
    let scale = m.iter().flatten().fold(1.0f64, |a, x| a.max(x.abs()));
    let critical = karp::critical_nodes(&w, 0.0, 1e-9 * scale);
    let root = critical.first().copied().unwrap_or(0);
    let plus = karp::kleene_plus(&w);
    let mut center: Vec<f64> = (0..e).map(|k| plus[root][k]).collect();
    center[root] = 0.0;
    let center = TropicalPoint::new(center)?;
    let radius = v
        .generators()
        .iter()
        .map(|g| raw_distance(g.coords(), center.coords()))
        .fold(0.0f64, f64::max);
    TropicalBall::new(center, radius)
}

/// The `e` vertices `center + radius·e_i` of a tropical ball.
pub fn ball_generators(b: &TropicalBall) -> TropicalPolytope {
    let rows: Vec<TropicalPoint> = (0..b.dim())
        .map(|i| {
            let mut c = b.center.coords().to_vec();
            c[i] += b.radius;
            TropicalPoint::from_raw_unchecked(c)
        })
        .collect();
    TropicalPolytope::new(rows).expect("ball generators share one dimension")
}

/// Euclidean volume of a radius-`radius` tropical ball in the chart
/// `x_0 = 0`: `e · r^(e-1)`.
pub fn ball_volume(e: usize, radius: f64) -> Result<f64> {
    if e < 2 {
        return Err(Error::BadDimension(format!(
            "ball volume needs e >= 2, got {e}"
        )));
    }
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "radius must be finite and non-negative, got {radius}"
        )));
    }
    Ok(e as f64 * radius.powi(e as i32 - 1))
}

/// Settings for [`estimate_volume`].
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeConfig {
    pub samples: usize,
    pub chain_steps: usize,
    pub seed: u64,
    /// Fraction of extra chain states discarded before counting.
    pub burn_in: f64,
    pub tol: f64,
}

impl VolumeConfig {
    pub fn new(samples: usize, chain_steps: usize, seed: u64) -> Self {
        VolumeConfig {
            samples,
            chain_steps,
            seed,
            burn_in: 0.1,
            tol: MEMBERSHIP_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub proportion: f64,
    pub ball_volume: f64,
    pub estimate: f64,
    pub samples: usize,
    pub chain_steps: usize,
    pub seed: u64,
}

impl VolumeEstimate {
    /// Binomial standard error of `estimate`.
    pub fn stderr_binomial(&self) -> f64 {
        let p = self.proportion;
        self.ball_volume * (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

/// Samples uniformly from the ball spanned by `ball` (its generators) and
/// scales the ball volume by the fraction of samples inside `p`.
pub fn estimate_volume(
    ball: &TropicalPolytope,
    p: &TropicalPolytope,
    x0: &TropicalPoint,
    radius: f64,
    config: &VolumeConfig,
) -> Result<VolumeEstimate> {
    if config.samples == 0 || config.chain_steps == 0 {
        return Err(Error::InvalidParameter(
            "samples and chain steps must be >= 1".into(),
        ));
    }
    if !(0.0..1.0).contains(&config.burn_in) {
        return Err(Error::InvalidParameter(format!(
            "burn-in fraction must be in [0, 1), got {}",
            config.burn_in
        )));
    }
    crate::tropical::check_dim(ball.dim(), p.dim())?;
    x0.check_dim(ball.dim())?;
    let mut scratch = vec![0.0; x0.dim()];
    let outside = ball.distance_to_hull(x0.coords(), &mut scratch);
    if outside > config.tol.max(EQ_TOL) {
        return Err(Error::StartOutsideBall { distance: outside });
    }
    let ball_volume = ball_volume(ball.dim(), radius)?;
    let burn = (config.samples as f64 * config.burn_in).ceil() as usize;
    let chain = ChainConfig {
        intermediate_steps: config.chain_steps,
        seed: config.seed,
        tol: config.tol,
    };
    let states = sampler::run_chain(ball, x0, config.samples + burn, &chain, None)?;
    let hits = states[burn..]
        .iter()
        .filter(|s| p.distance_to_hull(s.coords(), &mut scratch) <= config.tol)
        .count();
    let proportion = hits as f64 / config.samples as f64;
    Ok(VolumeEstimate {
        proportion,
        ball_volume,
        estimate: proportion * ball_volume,
        samples: config.samples,
        chain_steps: config.chain_steps,
        seed: config.seed,
    })
}
