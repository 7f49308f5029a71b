//! Hit-and-run samplers over tropical line segments and tropical polytopes.
//!
//! A polytope transition picks a line through the current state whose
//! direction is a 0/1 indicator vector `1_S`. Along such a direction the
//! tropical and Euclidean segments coincide, so the intersection of the line
//! with a tropically convex set is a single interval. Its ends are located
//! by bisection against the membership oracle and the next state is drawn
//! on the extended segment, either uniformly by arc length or concentrated
//! around the projection of a target centroid.

use rand::Rng;
use rayon::prelude::*;
use statrs::function::erf::{erfc, erfc_inv};

use crate::error::{Error, Result};
use crate::rng::{stream_rng, ChainRng};
use crate::tropical::{
    lerp, raw_distance, trop_linear_combination, trop_segment, TropicalPoint, TropicalPolytope,
    TropicalSegment,
};

/// Retries before a transition gives up on finding a non-degenerate line.
pub const MAX_DIRECTION_RETRIES: usize = 100;
const MAX_DOUBLINGS: usize = 60;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    /// Internal transitions between two emitted states.
    pub intermediate_steps: usize,
    pub seed: u64,
    /// Membership and bisection tolerance.
    pub tol: f64,
}

impl ChainConfig {
    pub fn new(intermediate_steps: usize, seed: u64) -> Self {
        ChainConfig {
            intermediate_steps,
            seed,
            tol: 1e-9,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.intermediate_steps == 0 {
            return Err(Error::InvalidParameter("intermediate steps must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "chain tolerance must be > 0, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// Location `mu` and tropical-distance scale `sigma` for centered sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterTarget {
    mu: TropicalPoint,
    sigma: f64,
}

impl CenterTarget {
    pub fn new(mu: TropicalPoint, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive and finite, got {sigma}"
            )));
        }
        Ok(CenterTarget { mu, sigma })
    }

    pub fn mu(&self) -> &TropicalPoint {
        &self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Uniform draw (by Euclidean arc length) from the tropical segment
/// between `u` and `v`.
pub fn sample_segment_uniform<R: Rng + ?Sized>(
    u: &TropicalPoint,
    v: &TropicalPoint,
    rng: &mut R,
) -> Result<TropicalPoint> {
    let seg = trop_segment(u, v)?;
    Ok(uniform_on(&seg, rng))
}

fn uniform_on<R: Rng + ?Sized>(seg: &TropicalSegment, rng: &mut R) -> TropicalPoint {
    let len = seg.euclidean_length();
    if len <= 0.0 {
        return seg.target().clone();
    }
    seg.point_at(rng.random::<f64>() * len)
}

/// Draw from the tropical segment between `u` and `v` concentrated around
/// the centroid of `target`.
///
/// A point `p` is chosen uniformly from the set of nearest points of the
/// segment to `mu`; the draw then has density proportional to
/// `exp(-d_tr(x, p)² / (2σ²))` with respect to Euclidean arc length.
/// Because the segment is a geodesic, `d_tr(x, p)` is the tropical arc
/// distance, which makes the density a truncated normal on each leg; legs
/// are sampled exactly.
pub fn sample_segment_centered<R: Rng + ?Sized>(
    u: &TropicalPoint,
    v: &TropicalPoint,
    target: &CenterTarget,
    rng: &mut R,
) -> Result<TropicalPoint> {
    target.mu.check_dim(u.dim())?;
    let seg = trop_segment(u, v)?;
    Ok(centered_on(&seg, target, rng))
}

fn centered_on<R: Rng + ?Sized>(
    seg: &TropicalSegment,
    target: &CenterTarget,
    rng: &mut R,
) -> TropicalPoint {
    if seg.is_degenerate() {
        return seg.source().clone();
    }
    let bends = seg.bends();
    let trop = seg.leg_tropical_lengths();
    let euc = seg.leg_lengths();
    let mut starts = Vec::with_capacity(trop.len() + 1);
    starts.push(0.0);
    for t in &trop {
        starts.push(starts.last().unwrap() + t);
    }

    let (lo, hi) = projection_interval(seg, &target.mu, &starts, &trop);
    let p = lo + (hi - lo) * rng.random::<f64>();
    let sigma = target.sigma;

    let weights: Vec<f64> = (0..trop.len())
        .map(|k| {
            if trop[k] <= 0.0 {
                return 0.0;
            }
            let a = (starts[k] - p) / sigma;
            let b = (starts[k + 1] - p) / sigma;
            euc[k] / trop[k] * normal_mass(a, b)
        })
        .collect();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return point_at_tropical(bends, &starts, &trop, p);
    }
    let mut pick = rng.random::<f64>() * total;
    let mut leg = weights.len() - 1;
    for (k, w) in weights.iter().enumerate() {
        if pick < *w {
            leg = k;
            break;
        }
        pick -= w;
    }
    // guard against landing on a zero-weight leg through rounding
    while weights[leg] <= 0.0 && leg > 0 {
        leg -= 1;
    }
    let a = (starts[leg] - p) / sigma;
    let b = (starts[leg + 1] - p) / sigma;
    let z = truncated_normal(a, b, rng);
    let tau = (p + sigma * z).clamp(starts[leg], starts[leg + 1]);
    let frac = (tau - starts[leg]) / trop[leg];
    lerp(&bends[leg], &bends[leg + 1], frac.clamp(0.0, 1.0))
}

fn point_at_tropical(
    bends: &[TropicalPoint],
    starts: &[f64],
    trop: &[f64],
    tau: f64,
) -> TropicalPoint {
    for k in 0..trop.len() {
        if tau <= starts[k + 1] && trop[k] > 0.0 {
            let frac = ((tau - starts[k]) / trop[k]).clamp(0.0, 1.0);
            return lerp(&bends[k], &bends[k + 1], frac);
        }
    }
    bends.last().unwrap().clone()
}

/// Tropical arc-length interval of the points of `seg` nearest to `mu`.
///
/// On each leg `d_tr(mu, ·)` is piecewise linear with at most two interior
/// breakpoints, so the minimum and its level set are found by evaluating
/// at the breakpoints and leg ends.
fn projection_interval(
    seg: &TropicalSegment,
    mu: &TropicalPoint,
    starts: &[f64],
    trop: &[f64],
) -> (f64, f64) {
    let bends = seg.bends();
    let mut knots: Vec<(f64, f64)> = Vec::new();
    for k in 0..trop.len() {
        let a = bends[k].coords();
        let b = bends[k + 1].coords();
        let len = trop[k];
        let mut rs = vec![0.0, len];
        if len > 0.0 {
            let slope: Vec<f64> = a.iter().zip(b).map(|(x, y)| (y - x) / len).collect();
            let s = slope
                .iter()
                .copied()
                .max_by(|x, y| x.abs().total_cmp(&y.abs()))
                .unwrap_or(0.0);
            let (mut a0, mut a1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            let (mut b0, mut b1) = (f64::INFINITY, f64::INFINITY);
            for j in 0..a.len() {
                let c = mu.coords()[j] - a[j];
                if slope[j].abs() < 0.5 {
                    a0 = a0.max(c);
                    b0 = b0.min(c);
                } else {
                    a1 = a1.max(c);
                    b1 = b1.min(c);
                }
            }
            if s.abs() >= 0.5 {
                for r in [(a1 - a0) / s, (b1 - b0) / s] {
                    if r.is_finite() && r > 0.0 && r < len {
                        rs.push(r);
                    }
                }
            }
        }
        for r in rs {
            let frac = if len > 0.0 { r / len } else { 0.0 };
            let x = lerp(&bends[k], &bends[k + 1], frac);
            knots.push((starts[k] + r, raw_distance(x.coords(), mu.coords())));
        }
    }
    let min = knots.iter().map(|k| k.1).fold(f64::INFINITY, f64::min);
    let level = min + 1e-10 * (1.0 + min.abs());
    let near = knots.iter().filter(|k| k.1 <= level).map(|k| k.0);
    let lo = near.clone().fold(f64::INFINITY, f64::min);
    let hi = near.fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Standard normal upper tail.
fn upper_tail(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

fn upper_tail_inv(q: f64) -> f64 {
    std::f64::consts::SQRT_2 * erfc_inv(2.0 * q)
}

/// `Φ(b) - Φ(a)` computed on the side of the distribution that keeps
/// precision.
fn normal_mass(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        upper_tail(a) - upper_tail(b)
    } else if b <= 0.0 {
        upper_tail(-b) - upper_tail(-a)
    } else {
        1.0 - upper_tail(b) - upper_tail(-a)
    }
}

/// Standard normal restricted to `[a, b]`, by inverse CDF.
fn truncated_normal<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    let z = if a >= 0.0 {
        let (qa, qb) = (upper_tail(a), upper_tail(b));
        upper_tail_inv(qb + (qa - qb) * u)
    } else if b <= 0.0 {
        let (qa, qb) = (upper_tail(-b), upper_tail(-a));
        -upper_tail_inv(qb + (qa - qb) * u)
    } else {
        let lower = upper_tail(-a);
        let upper = 1.0 - upper_tail(b);
        let c = lower + (upper - lower) * u;
        if c < 0.5 {
            -upper_tail_inv(c)
        } else {
            upper_tail_inv(1.0 - c)
        }
    };
    if z.is_nan() {
        return 0.5 * (a + b);
    }
    z.clamp(a, b)
}

/// Random hull member `⊕ c_l ⊙ g_l` with i.i.d. coefficients on
/// `[-diameter, 0]`, shifted so the largest coefficient is zero.
pub fn random_hull_point<R: Rng + ?Sized>(p: &TropicalPolytope, rng: &mut R) -> TropicalPoint {
    let spread = p.diameter().max(1.0);
    let mut coeffs: Vec<f64> = (0..p.len()).map(|_| -spread * rng.random::<f64>()).collect();
    let top = coeffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for c in &mut coeffs {
        *c -= top;
    }
    trop_linear_combination(&coeffs, p.generators()).expect("generators are consistent")
}

/// Hull walker with cached scratch space for one chain.
struct HullWalker<'a> {
    p: &'a TropicalPolytope,
    diameter: f64,
    tol: f64,
    scratch: Vec<f64>,
    probe: Vec<f64>,
}

impl<'a> HullWalker<'a> {
    fn new(p: &'a TropicalPolytope, tol: f64) -> Self {
        HullWalker {
            p,
            diameter: p.diameter(),
            tol,
            scratch: vec![0.0; p.dim()],
            probe: vec![0.0; p.dim()],
        }
    }

    fn outside_distance(&mut self, x: &[f64]) -> f64 {
        self.p.distance_to_hull(x, &mut self.scratch)
    }

    fn inside_at(&mut self, x: &[f64], dir: &[f64], t: f64) -> bool {
        for ((q, a), d) in self.probe.iter_mut().zip(x).zip(dir) {
            *q = a + t * d;
        }
        self.p.distance_to_hull(&self.probe, &mut self.scratch) <= self.tol
    }

    /// Largest `t >= 0` (within `tol`) with `x + t·dir` in the hull.
    fn reach(&mut self, x: &[f64], dir: &[f64]) -> f64 {
        let mut lo = 0.0;
        let mut hi = self.diameter + 1.0;
        let mut doublings = 0;
        while self.inside_at(x, dir, hi) {
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings >= MAX_DOUBLINGS {
                return lo;
            }
        }
        let mut iters = 0;
        while hi - lo > self.tol && iters < MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if self.inside_at(x, dir, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
            iters += 1;
        }
        lo
    }

    /// Chord through `x` along `dir`, or `None` when it is degenerate.
    fn chord(&mut self, x: &TropicalPoint, dir: &[f64]) -> Option<(TropicalPoint, TropicalPoint)> {
        let fwd = self.reach(x.coords(), dir);
        let back: Vec<f64> = dir.iter().map(|d| -d).collect();
        let bwd = self.reach(x.coords(), &back);
        if fwd + bwd <= self.tol {
            return None;
        }
        let at = |t: f64| {
            TropicalPoint::from_raw_unchecked(
                x.coords().iter().zip(dir).map(|(a, d)| a + t * d).collect(),
            )
        };
        Some((at(-bwd), at(fwd)))
    }

    fn step<R: Rng + ?Sized>(
        &mut self,
        x: &TropicalPoint,
        target: Option<&CenterTarget>,
        rng: &mut R,
    ) -> Result<TropicalPoint> {
        if self.diameter <= self.tol {
            return Ok(x.clone());
        }
        for attempt in 0..MAX_DIRECTION_RETRIES {
            // odd retries borrow the first leg of a segment towards a random
            // hull point, which always points into the hull
            let dir = if attempt % 2 == 0 {
                Some(subset_direction(x.dim(), rng))
            } else {
                let u = random_hull_point(self.p, rng);
                leg_direction(x, &u)
            };
            let Some(dir) = dir else { continue };
            if let Some((a, b)) = self.chord(x, &dir) {
                let seg = trop_segment(&b, &a)?;
                return Ok(match target {
                    Some(t) => centered_on(&seg, t, rng),
                    None => uniform_on(&seg, rng),
                });
            }
        }
        Err(Error::DegenerateDirection {
            retries: MAX_DIRECTION_RETRIES,
        })
    }
}

/// Canonical form of `1_S` for a uniformly random nonempty proper subset `S`.
fn subset_direction<R: Rng + ?Sized>(e: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let bits: Vec<bool> = (0..e).map(|_| rng.random()).collect();
        let ones = bits.iter().filter(|b| **b).count();
        if ones == 0 || ones == e {
            continue;
        }
        return if bits[0] {
            bits.iter().map(|b| if *b { 0.0 } else { -1.0 }).collect()
        } else {
            bits.iter().map(|b| if *b { 1.0 } else { 0.0 }).collect()
        };
    }
}

/// Unit-tropical-length direction of the first leg of the segment from `x`
/// towards `u`.
fn leg_direction(x: &TropicalPoint, u: &TropicalPoint) -> Option<Vec<f64>> {
    let seg = trop_segment(u, x).ok()?;
    if seg.is_degenerate() {
        return None;
    }
    let a = seg.bends()[0].coords();
    let b = seg.bends()[1].coords();
    let len = raw_distance(a, b);
    if len <= 0.0 {
        return None;
    }
    Some(a.iter().zip(b).map(|(p, q)| ((q - p) / len).round()).collect())
}

fn check_start(walker: &mut HullWalker<'_>, x: &TropicalPoint) -> Result<()> {
    x.check_dim(walker.p.dim())?;
    let distance = walker.outside_distance(x.coords());
    if distance > walker.tol.max(1e-9) {
        return Err(Error::StartOutsideHull { distance });
    }
    Ok(())
}

/// One uniform hit-and-run transition inside the hull of `p`.
pub fn har_step_polytope<R: Rng + ?Sized>(
    p: &TropicalPolytope,
    x: &TropicalPoint,
    config: &ChainConfig,
    rng: &mut R,
) -> Result<TropicalPoint> {
    har_step(p, x, config, None, rng)
}

/// One transition, uniform or centered on `target`.
pub fn har_step<R: Rng + ?Sized>(
    p: &TropicalPolytope,
    x: &TropicalPoint,
    config: &ChainConfig,
    target: Option<&CenterTarget>,
    rng: &mut R,
) -> Result<TropicalPoint> {
    config.validate()?;
    let mut walker = HullWalker::new(p, config.tol);
    check_start(&mut walker, x)?;
    if let Some(t) = target {
        t.mu.check_dim(p.dim())?;
    }
    walker.step(x, target, rng)
}

/// Runs a chain from `x0` and emits `n` states, each separated by
/// `config.intermediate_steps` transitions. No burn-in is discarded.
pub fn run_chain(
    p: &TropicalPolytope,
    x0: &TropicalPoint,
    n: usize,
    config: &ChainConfig,
    target: Option<&CenterTarget>,
) -> Result<Vec<TropicalPoint>> {
    let mut rng = stream_rng(config.seed, 0);
    run_chain_with_rng(p, x0, n, config, target, &mut rng)
}

pub fn run_chain_with_rng(
    p: &TropicalPolytope,
    x0: &TropicalPoint,
    n: usize,
    config: &ChainConfig,
    target: Option<&CenterTarget>,
    rng: &mut ChainRng,
) -> Result<Vec<TropicalPoint>> {
    config.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter("chain length must be >= 1".into()));
    }
    if let Some(t) = target {
        t.mu.check_dim(p.dim())?;
    }
    let mut walker = HullWalker::new(p, config.tol);
    check_start(&mut walker, x0)?;
    let mut state = x0.clone();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        for _ in 0..config.intermediate_steps {
            state = walker.step(&state, target, rng)?;
        }
        out.push(state.clone());
    }
    Ok(out)
}

/// Independent chains on streams `0..chains` of `config.seed`, run on up to
/// `threads` worker threads. Output order does not depend on `threads`.
pub fn run_chains(
    p: &TropicalPolytope,
    x0: &TropicalPoint,
    n: usize,
    config: &ChainConfig,
    target: Option<&CenterTarget>,
    chains: usize,
    threads: usize,
) -> Result<Vec<Vec<TropicalPoint>>> {
    let one = |k: usize| {
        let mut rng = stream_rng(config.seed, k as u64);
        run_chain_with_rng(p, x0, n, config, target, &mut rng)
    };
    if threads <= 1 {
        return (0..chains).map(one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| (0..chains).into_par_iter().map(one).collect())
}
