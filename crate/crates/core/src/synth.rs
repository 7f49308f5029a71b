//! Synthetic data with known structure, for tests, benchmarks and demos.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::phylo::{pair_index, subdominant_ultrametric};
use crate::rng::stream_rng;
use crate::tropical::raw_distance;

/// Labeled rows, canonical (first coordinate 0).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledData {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

fn canonical(mut v: Vec<f64>) -> Vec<f64> {
    let first = v[0];
    v.iter_mut().for_each(|x| *x -= first);
    v[0] = 0.0;
    v
}

fn jitter<R: Rng>(center: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    center
        .iter()
        .map(|c| {
            let z: f64 = StandardNormal.sample(rng);
            c + sigma * z
        })
        .collect()
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma >= 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("noise scale must be nonnegative, got {sigma}")))
    }
}

/// Gaussian clouds `center + σ·N(0, I)` around each center, `counts[k]`
/// points for center `k`, labeled by center index.
pub fn gaussian_clusters(
    centers: &[Vec<f64>],
    counts: &[usize],
    sigma: f64,
    seed: u64,
) -> Result<LabeledData> {
    check_sigma(sigma)?;
    if centers.is_empty() || centers.len() != counts.len() {
        return Err(Error::InvalidParameter("need one count per center".into()));
    }
    let e = centers[0].len();
    if e < 2 {
        return Err(Error::TooShort { len: e });
    }
    if let Some(c) = centers.iter().find(|c| c.len() != e) {
        return Err(Error::DimensionMismatch { expected: e, found: c.len() });
    }
    let mut rng = stream_rng(seed, 0);
    let mut data = LabeledData { rows: Vec::new(), labels: Vec::new() };
    for (k, (center, &n)) in centers.iter().zip(counts).enumerate() {
        for _ in 0..n {
            data.rows.push(canonical(jitter(center, sigma, &mut rng)));
            data.labels.push(k);
        }
    }
    Ok(data)
}

/// Cophenetic vector of a random equidistant tree on `m` leaves with root
/// height `height`. Random pairs of clusters merge at increasing heights.
pub fn random_ultrametric<R: Rng>(m: usize, height: f64, rng: &mut R) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(Error::TooFewLeaves { found: m });
    }
    let mut clusters: Vec<Vec<usize>> = (0..m).map(|i| vec![i]).collect();
    let mut u = vec![0.0; m * (m - 1) / 2];
    let mut level = 0.0;
    while clusters.len() > 1 {
        level += rng.random_range(0.1..1.0);
        let a = rng.random_range(0..clusters.len());
        let mut b = rng.random_range(0..clusters.len() - 1);
        if b >= a {
            b += 1;
        }
        let (a, b) = (a.min(b), a.max(b));
        let gone = clusters.swap_remove(b);
        for &i in &clusters[a] {
            for &j in &gone {
                u[pair_index(m, i.min(j), i.max(j))] = 2.0 * level;
            }
        }
        clusters[a].extend(gone);
    }
    let scale = height / level;
    u.iter_mut().for_each(|x| *x *= scale);
    Ok(u)
}

/// Noisy copies of an ultrametric center, each projected back to the
/// ultrametrics: `π(center + σ·N(0, I))`, in canonical form.
pub fn ultrametric_cloud<R: Rng>(center: &[f64], n: usize, sigma: f64, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    check_sigma(sigma)?;
    (0..n)
        .map(|_| subdominant_ultrametric(&jitter(center, sigma, rng)).map(canonical))
        .collect()
}

/// Two classes of ultrametric vectors on `m` leaves around random tree
/// centers at tropical distance `separation`, with noise `σ`.
pub fn ultrametric_clusters(
    m: usize,
    counts: [usize; 2],
    separation: f64,
    sigma: f64,
    seed: u64,
) -> Result<LabeledData> {
    if !(separation > 0.0 && separation.is_finite()) {
        return Err(Error::InvalidParameter(format!("separation must be positive, got {separation}")));
    }
    let mut rng = stream_rng(seed, 0);
    let (c0, c1) = loop {
        let a = random_ultrametric(m, 1.0, &mut rng)?;
        let b = random_ultrametric(m, 1.0, &mut rng)?;
        if raw_distance(&a, &b) > 1e-3 {
            break (a, b);
        }
    };
    // distances scale linearly, so rescaling both centers fixes the separation
    let k = separation / raw_distance(&c0, &c1);
    let c0: Vec<f64> = c0.iter().map(|x| x * k).collect();
    let c1: Vec<f64> = c1.iter().map(|x| x * k).collect();
    let mut data = LabeledData { rows: Vec::new(), labels: Vec::new() };
    for (label, center) in [(0, &c0), (1, &c1)] {
        for row in ultrametric_cloud(center, counts[label], sigma, &mut rng)? {
            data.rows.push(row);
            data.labels.push(label);
        }
    }
    Ok(data)
}
