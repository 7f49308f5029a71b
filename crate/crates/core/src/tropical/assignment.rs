//! Maximum-weight assignment, used for the tropical determinant.
//!
//! Both solvers return `(value, permutation)` with `permutation[col] = row`.

/// Enumerates permutations in lexicographic order and keeps the first one
/// that attains the maximum, so ties go to the lexicographically smallest.
pub fn max_assignment_exhaustive(m: &[Vec<f64>]) -> (f64, Vec<usize>) {
    let n = m.len();
    let scale = m
        .iter()
        .flatten()
        .fold(1.0f64, |acc, x| acc.max(x.abs()));
    let tie_tol = 1e-12 * scale * n as f64;

    struct Search<'a> {
        m: &'a [Vec<f64>],
        used: Vec<bool>,
        current: Vec<usize>,
        best_value: f64,
        best: Vec<usize>,
        tie_tol: f64,
    }

    impl Search<'_> {
        fn go(&mut self, col: usize, partial: f64) {
            let n = self.m.len();
            if col == n {
                if partial > self.best_value + self.tie_tol || self.best.is_empty() {
                    self.best_value = partial;
                    self.best.clone_from(&self.current);
                }
                return;
            }
            for row in 0..n {
                if !self.used[row] {
                    self.used[row] = true;
                    self.current.push(row);
                    self.go(col + 1, partial + self.m[row][col]);
                    self.current.pop();
                    self.used[row] = false;
                }
            }
        }
    }

    let mut s = Search {
        m,
        used: vec![false; n],
        current: Vec::with_capacity(n),
        best_value: f64::NEG_INFINITY,
        best: Vec::new(),
        tie_tol,
    };
    s.go(0, 0.0);
    let value = s.best.iter().enumerate().map(|(c, &r)| m[r][c]).sum();
    (value, s.best)
}

/// Hungarian method with potentials, O(n³).
pub fn max_assignment_hungarian(m: &[Vec<f64>]) -> (f64, Vec<usize>) {
    let n = m.len();
    // minimize cost = -weight; 1-based arrays with a sentinel column 0
    let cost = |row: usize, col: usize| -m[row - 1][col - 1];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r0 = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0usize;
            for col in 1..=n {
                if !used[col] {
                    let cur = cost(r0, col) - u[r0] - v[col];
                    if cur < minv[col] {
                        minv[col] = cur;
                        way[col] = col0;
                    }
                    if minv[col] < delta {
                        delta = minv[col];
                        col1 = col;
                    }
                }
            }
            for col in 0..=n {
                if used[col] {
                    u[owner[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }
    let permutation: Vec<usize> = (1..=n).map(|col| owner[col] - 1).collect();
    let value = permutation.iter().enumerate().map(|(c, &r)| m[r][c]).sum();
    (value, permutation)
}
