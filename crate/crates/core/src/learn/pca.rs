//! Tropical PCA: the best-fit tropical triangle.
//!
//! The fit is a stochastic hill climb. Each outer iteration picks one vertex
//! (round-robin), proposes a replacement drawn by hit-and-run inside the
//! tropical hull of the data, and keeps it only if the sum of projection
//! distances strictly decreases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::polytope_contains;
use crate::rng::stream_rng;
use crate::sampler::{random_hull_point, run_chain_with_rng, ChainConfig};
use crate::tropical::{TropicalPoint, TropicalPolytope};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaTriangle {
    pub vertices: Vec<TropicalPoint>,
    /// `Σ_i d(x_i, π(x_i))` with `π` the projection onto the triangle.
    pub objective: f64,
    /// Best objective before the first iteration and after each iteration.
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcaConfig {
    pub outer_iters: usize,
    /// Hit-and-run transitions per proposal.
    pub chain_steps: usize,
    pub seed: u64,
}

/// Sum of distances from each row to its projection onto the hull of
/// `vertices`.
pub fn projection_objective(vertices: &TropicalPolytope, data: &TropicalPolytope) -> f64 {
    let mut scratch = vec![0.0; data.dim()];
    data.generators()
        .iter()
        .map(|x| vertices.distance_to_hull(x.coords(), &mut scratch))
        .sum()
}

pub fn fit_tropical_pca<R: AsRef<[f64]>, S: AsRef<[f64]>>(
    rows: &[R],
    initial: &[S],
    config: &PcaConfig,
) -> Result<PcaTriangle> {
    let data = TropicalPolytope::from_rows(rows)?;
    if data.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, found: data.len() });
    }
    if initial.len() != 3 {
        return Err(Error::InvalidParameter(format!(
            "a triangle needs 3 initial vertices, got {}",
            initial.len()
        )));
    }
    let triangle = TropicalPolytope::from_rows(initial)?;
    if triangle.dim() != data.dim() {
        return Err(Error::DimensionMismatch { expected: data.dim(), found: triangle.dim() });
    }
    let chain = ChainConfig::new(config.chain_steps, config.seed);
    let mut rng = stream_rng(config.seed, 0);

    let mut vertices = triangle.generators().to_vec();
    let mut objective = projection_objective(&triangle, &data);
    let mut trace = Vec::with_capacity(config.outer_iters + 1);
    trace.push(objective);
    for it in 0..config.outer_iters {
        if objective > 0.0 {
            let k = it % 3;
            // walk from the current vertex when it is inside the data hull
            let start = if polytope_contains(&data, &vertices[k], chain.tol)? {
                vertices[k].clone()
            } else {
                random_hull_point(&data, &mut rng)
            };
            match run_chain_with_rng(&data, &start, 1, &chain, None, &mut rng) {
                Ok(mut draw) => {
                    let mut candidate = vertices.clone();
                    candidate[k] = draw.pop().expect("one state");
                    let value = projection_objective(&TropicalPolytope::new(candidate.clone())?, &data);
                    if value < objective {
                        vertices = candidate;
                        objective = value;
                    }
                }
                // a lower-dimensional hull can leave no usable line; skip the proposal
                Err(Error::DegenerateDirection { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        trace.push(objective);
    }
    Ok(PcaTriangle { vertices, objective, trace })
}

/// Corners of the reference triangle in the plane.
pub const PLOT_CORNERS: [[f64; 2]; 3] = [[0.0, 1.0], [-0.866_025_403_784_438_6, -0.5], [0.866_025_403_784_438_6, -0.5]];

/// Plane coordinates for plotting data against a fitted triangle.
///
/// Each row is projected onto the triangle and placed at the convex
/// combination of [`PLOT_CORNERS`] with weights proportional to the inverse
/// tropical distance from the projection to each vertex. A projection equal
/// to a vertex lands on that vertex's corner. Every output lies in the
/// reference triangle.
pub fn pca_plot_coords<R: AsRef<[f64]>>(triangle: &PcaTriangle, rows: &[R]) -> Result<Vec<[f64; 2]>> {
    let tri = TropicalPolytope::new(triangle.vertices.clone())?;
    if tri.len() != 3 {
        return Err(Error::InvalidParameter("plot coordinates need exactly 3 vertices".into()));
    }
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let x = TropicalPoint::new(r.as_ref().to_vec())?;
        x.check_dim(tri.dim())?;
        let p = tri.project(&x)?;
        let d: Vec<f64> = tri.generators().iter().map(|v| p.distance(v)).collect::<Result<_>>()?;
        let at_vertex: Vec<usize> = (0..3).filter(|&l| d[l] <= 1e-12).collect();
        let weights: Vec<f64> = if at_vertex.is_empty() {
            let inv: Vec<f64> = d.iter().map(|x| 1.0 / x).collect();
            let total: f64 = inv.iter().sum();
            inv.iter().map(|w| w / total).collect()
        } else {
            (0..3).map(|l| if at_vertex.contains(&l) { 1.0 / at_vertex.len() as f64 } else { 0.0 }).collect()
        };
        let mut xy = [0.0, 0.0];
        for (w, c) in weights.iter().zip(PLOT_CORNERS) {
            xy[0] += w * c[0];
            xy[1] += w * c[1];
        }
        out.push(xy);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::gaussian_clusters;

    #[test]
    fn three_points_are_a_fixed_point() {
        let x = vec![vec![0.0, 1.0, 3.0], vec![0.0, 4.0, 1.0], vec![0.0, -2.0, 2.0]];
        let cfg = PcaConfig { outer_iters: 30, chain_steps: 5, seed: 1 };
        let t = fit_tropical_pca(&x, &x, &cfg).unwrap();
        assert_eq!(t.objective, 0.0);
        assert_eq!(t.trace, vec![0.0; 31]);
        let rows: Vec<Vec<f64>> = t.vertices.iter().map(|v| v.coords().to_vec()).collect();
        assert_eq!(rows, x);
    }

    #[test]
    fn trace_is_monotone_and_improves() {
        let d = gaussian_clusters(&[vec![0.0, 0.0, 0.0, 0.0]], &[60], 3.0, 5).unwrap();
        let cfg = PcaConfig { outer_iters: 150, chain_steps: 10, seed: 2 };
        let t = fit_tropical_pca(&d.rows, &d.rows[..3], &cfg).unwrap();
        assert!(t.trace.windows(2).all(|w| w[1] <= w[0]));
        assert!(t.objective < t.trace[0]);
        assert_eq!(t.objective, *t.trace.last().unwrap());
        let tri = TropicalPolytope::new(t.vertices.clone()).unwrap();
        let data = TropicalPolytope::from_rows(&d.rows).unwrap();
        assert!((projection_objective(&tri, &data) - t.objective).abs() < 1e-6);
        for v in &t.vertices {
            assert!(polytope_contains(&data, v, 1e-9).unwrap());
        }
    }

    #[test]
    fn plot_coords_corners_and_containment() {
        let x = vec![vec![0.0, 1.0, 3.0], vec![0.0, 4.0, 1.0], vec![0.0, -2.0, 2.0], vec![0.0, 1.0, 1.0]];
        let t = PcaTriangle {
            vertices: x[..3].iter().map(|r| TropicalPoint::new(r.clone()).unwrap()).collect(),
            objective: 0.0,
            trace: vec![0.0],
        };
        let xy = pca_plot_coords(&t, &x).unwrap();
        for k in 0..3 {
            assert!((xy[k][0] - PLOT_CORNERS[k][0]).abs() < 1e-12 && (xy[k][1] - PLOT_CORNERS[k][1]).abs() < 1e-12);
        }
        // inside the reference triangle: all three edge functions nonnegative
        for p in &xy {
            for k in 0..3 {
                let (a, b) = (PLOT_CORNERS[k], PLOT_CORNERS[(k + 1) % 3]);
                let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
                assert!(cross >= -1e-12);
            }
        }
    }

    #[test]
    fn symmetric_instance_has_equal_norms() {
        // the 3-cycle of coordinates permutes vertices and queries together
        let v = [vec![0.0, 0.0, 0.0, 6.0], vec![0.0, 0.0, 6.0, 0.0], vec![0.0, 6.0, 0.0, 0.0]];
        let q = [vec![0.0, 1.0, 2.0, 4.0], vec![0.0, 2.0, 4.0, 1.0], vec![0.0, 4.0, 1.0, 2.0]];
        let t = PcaTriangle {
            vertices: v.iter().map(|r| TropicalPoint::new(r.clone()).unwrap()).collect(),
            objective: 0.0,
            trace: vec![],
        };
        let xy = pca_plot_coords(&t, &q).unwrap();
        let norms: Vec<f64> = xy.iter().map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt()).collect();
        assert!((norms[0] - norms[1]).abs() < 1e-12 && (norms[1] - norms[2]).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let x = vec![vec![0.0, 1.0], vec![0.0, 2.0]];
        let cfg = PcaConfig { outer_iters: 1, chain_steps: 1, seed: 0 };
        assert_eq!(fit_tropical_pca(&x, &x, &cfg), Err(Error::TooFewPoints { needed: 3, found: 2 }));
    }
}
