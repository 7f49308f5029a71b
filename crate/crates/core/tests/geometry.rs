use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropml::tropical::raw_distance;
use tropml::{ball_volume, min_enclosing_ball, TropicalPolytope};

/// Smallest covering radius over centers `(0, a, b)` on a grid.
fn grid_radius(rows: &[[f64; 3]], step: f64) -> f64 {
    let (lo, hi) = (-1.0, 5.0);
    let n = ((hi - lo) / step).round() as usize;
    let mut best = f64::INFINITY;
    for i in 0..=n {
        let a = lo + i as f64 * step;
        for j in 0..=n {
            let c = [0.0, a, lo + j as f64 * step];
            let r = rows.iter().map(|v| raw_distance(v, &c)).fold(0.0, f64::max);
            best = best.min(r);
        }
    }
    best
}

#[test]
fn enclosing_radius_matches_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut instances = vec![vec![[0.0, 0.0, 0.0], [0.0, 3.0, 1.0], [0.0, 2.0, 5.0]]];
    for s in [2, 3, 4] {
        instances.push(
            (0..s)
                .map(|_| [0.0, rng.random_range(0.0..4.0), rng.random_range(0.0..4.0)])
                .collect(),
        );
    }
    for rows in instances {
        let ball = min_enclosing_ball(&TropicalPolytope::from_rows(&rows).unwrap()).unwrap();
        let grid = grid_radius(&rows, 1e-3);
        assert!((ball.radius - grid).abs() < 2e-3, "{} vs {grid} on {rows:?}", ball.radius);
    }
}

#[test]
fn ball_volume_matches_monte_carlo() {
    // the ball of radius r about 0 sits in the chart box [-r, r]^(e-1)
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let r = 1.5;
    let n = 200_000;
    for e in 2..=5usize {
        let mut inside = 0usize;
        let mut y = vec![0.0; e];
        for _ in 0..n {
            for c in y.iter_mut().skip(1) {
                *c = rng.random_range(-r..r);
            }
            let hi = y.iter().cloned().fold(f64::MIN, f64::max);
            let lo = y.iter().cloned().fold(f64::MAX, f64::min);
            if hi - lo <= r {
                inside += 1;
            }
        }
        let frac = inside as f64 / n as f64;
        let box_volume = (2.0 * r).powi(e as i32 - 1);
        let se = box_volume * (frac * (1.0 - frac) / n as f64).sqrt();
        let est = frac * box_volume;
        let exact = ball_volume(e, r).unwrap();
        assert!((est - exact).abs() <= 4.0 * se + 1e-12, "e={e}: {est} vs {exact}");
    }
    assert_eq!(ball_volume(3, 2.5).unwrap(), 18.75);
}
