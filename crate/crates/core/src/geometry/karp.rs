//! Max-plus spectral tools on dense weight matrices.
//!
//! `w[j][k]` is the weight of the edge `j -> k`. Every entry must be finite,
//! so the graph is complete and strongly connected.

/// Maximum cycle mean by Karp's algorithm (max-plus form).
pub fn max_cycle_mean(w: &[Vec<f64>]) -> f64 {
    let n = w.len();
    assert!(n > 0, "empty weight matrix");
    // best[k][v]: heaviest walk of exactly k edges from node 0 to v
    let mut best = vec![vec![f64::NEG_INFINITY; n]; n + 1];
    best[0][0] = 0.0;
    for k in 1..=n {
        for v in 0..n {
            let mut acc = f64::NEG_INFINITY;
            for u in 0..n {
                if best[k - 1][u] > f64::NEG_INFINITY {
                    acc = acc.max(best[k - 1][u] + w[u][v]);
                }
            }
            best[k][v] = acc;
        }
    }
    let mut lambda = f64::NEG_INFINITY;
    for v in 0..n {
        if best[n][v] == f64::NEG_INFINITY {
            continue;
        }
        let mut worst = f64::INFINITY;
        for k in 0..n {
            if best[k][v] > f64::NEG_INFINITY {
                worst = worst.min((best[n][v] - best[k][v]) / (n - k) as f64);
            }
        }
        lambda = lambda.max(worst);
    }
    lambda
}

/// Heaviest path weights over paths with at least one edge
/// (`A ⊕ A² ⊕ … ⊕ Aⁿ`). Requires no positive-weight cycle.
pub fn kleene_plus(w: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = w.len();
    let mut d = w.to_vec();
    for mid in 0..n {
        for i in 0..n {
            let via = d[i][mid];
            for j in 0..n {
                let cand = via + d[mid][j];
                if cand > d[i][j] {
                    d[i][j] = cand;
                }
            }
        }
    }
    d
}

/// Nodes lying on a cycle of maximum mean, within `tol`.
pub fn critical_nodes(w: &[Vec<f64>], lambda: f64, tol: f64) -> Vec<usize> {
    let shifted: Vec<Vec<f64>> = w
        .iter()
        .map(|row| row.iter().map(|x| x - lambda).collect())
        .collect();
    let plus = kleene_plus(&shifted);
    (0..w.len()).filter(|&c| plus[c][c] >= -tol).collect()
}
