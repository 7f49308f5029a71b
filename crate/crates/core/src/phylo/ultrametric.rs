//! Ultrametric vectors: cophenetic distances of equidistant trees.
//!
//! A vector over `m` leaves has `m(m-1)/2` entries, one per unordered leaf
//! pair, ordered lexicographically by the sorted leaf labels:
//! `(0,1), (0,2), …, (0,m-1), (1,2), …`.

use serde::{Deserialize, Serialize};

use super::newick::{Node, RootedTree};
use crate::error::{Error, Result};

/// Tolerance used when reconstructing a tree from a vector.
pub const RECONSTRUCT_TOL: f64 = 1e-6;

/// Number of leaves `m` with `m(m-1)/2 == len`.
pub fn leaf_count(len: usize) -> Result<usize> {
    let m = ((1.0 + (1.0 + 8.0 * len as f64).sqrt()) / 2.0).round() as usize;
    if m >= 2 && m * (m - 1) / 2 == len {
        Ok(m)
    } else {
        Err(Error::BadDimension(format!(
            "{len} entries is not m(m-1)/2 for any m >= 2"
        )))
    }
}

/// Position of the pair `(i, j)`, `i < j`, among `m` leaves.
#[inline]
pub fn pair_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * m - i * (i + 1) / 2 + (j - i - 1)
}

/// Default labels `1..=m`, zero-padded so that string order is numeric order.
pub fn default_labels(m: usize) -> Vec<String> {
    let width = m.to_string().len();
    (1..=m).map(|i| format!("{i:0width$}")).collect()
}

/// Pairwise leaf values with their labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UltrametricVector {
    values: Vec<f64>,
    labels: Vec<String>,
}

impl UltrametricVector {
    /// Pairs `values` with `labels`. Labels must be unique and sorted, and
    /// their count must match the vector length.
    pub fn new(values: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        let m = leaf_count(values.len())?;
        if labels.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: labels.len() });
        }
        if let Some(w) = labels.windows(2).find(|w| w[0] >= w[1]) {
            return if w[0] == w[1] {
                Err(Error::DuplicateLabel(w[0].clone()))
            } else {
                Err(Error::InvalidParameter("leaf labels must be sorted".into()))
            };
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(UltrametricVector { values, labels })
    }

    /// Uses [`default_labels`].
    pub fn unlabeled(values: Vec<f64>) -> Result<Self> {
        let m = leaf_count(values.len())?;
        Self::new(values, default_labels(m))
    }

    /// Builds a vector from pair labels such as `"A|B"`, as found in CSV
    /// headers. The pairs must appear in the canonical order.
    pub fn from_pair_header(values: Vec<f64>, header: &[String]) -> Result<Self> {
        let m = leaf_count(header.len())?;
        let mut labels = Vec::with_capacity(m);
        for h in header.iter().take(m - 1) {
            let (a, b) = split_pair(h)?;
            if labels.is_empty() {
                labels.push(a.to_string());
            }
            labels.push(b.to_string());
        }
        let v = Self::new(values, labels)?;
        if v.pair_labels() != header {
            return Err(Error::InvalidParameter(
                "pair header is not in lexicographic pair order".into(),
            ));
        }
        Ok(v)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.len()
    }

    /// Value for leaves `i` and `j` (0 when `i == j`).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => 0.0,
            Less => self.values[pair_index(self.labels.len(), i, j)],
            Greater => self.values[pair_index(self.labels.len(), j, i)],
        }
    }

    /// Header strings `"A|B"` in vector order.
    pub fn pair_labels(&self) -> Vec<String> {
        let m = self.labels.len();
        let mut out = Vec::with_capacity(self.values.len());
        for i in 0..m {
            for j in i + 1..m {
                out.push(format!("{}|{}", self.labels[i], self.labels[j]));
            }
        }
        out
    }

    pub fn is_ultrametric(&self, tol: f64) -> bool {
        worst_violation(&self.values, self.labels.len()) <= tol
    }
}

fn split_pair(h: &str) -> Result<(&str, &str)> {
    h.split_once('|')
        .filter(|(a, b)| !a.is_empty() && !b.is_empty() && !b.contains('|'))
        .ok_or_else(|| Error::InvalidParameter(format!("pair label {h:?} is not of the form A|B")))
}

/// Largest gap between the two biggest values of any leaf triple. Zero iff
/// the maximum of every triple is attained at least twice.
fn worst_violation(u: &[f64], m: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            let ij = u[pair_index(m, i, j)];
            for k in j + 1..m {
                let mut t = [ij, u[pair_index(m, i, k)], u[pair_index(m, j, k)]];
                t.sort_by(f64::total_cmp);
                worst = worst.max(t[2] - t[1]);
            }
        }
    }
    worst
}

/// True iff the maximum of every leaf triple is attained at least twice,
/// within `tol`.
pub fn is_ultrametric(u: &[f64], tol: f64) -> Result<bool> {
    let m = leaf_count(u.len())?;
    Ok(worst_violation(u, m) <= tol)
}

/// Cophenetic distances of a tree, in lexicographic label order.
///
/// With `normalize` the result is shifted so that its first entry is 0.
pub fn tree_to_vector(tree: &RootedTree, normalize: bool) -> Result<UltrametricVector> {
    let leaves = tree.leaves();
    if leaves.len() < 2 {
        return Err(Error::TooFewLeaves { found: leaves.len() });
    }
    let mut order: Vec<(String, usize)> = leaves
        .iter()
        .map(|&l| (tree.nodes()[l].label.clone().unwrap_or_default(), l))
        .collect();
    order.sort();

    let depth = tree.depths();
    let nodes = tree.nodes();
    let ancestors = |mut n: usize| {
        let mut path = vec![n];
        while let Some(p) = nodes[n].parent {
            path.push(p);
            n = p;
        }
        path
    };
    let paths: Vec<Vec<usize>> = order.iter().map(|&(_, l)| ancestors(l)).collect();
    let m = order.len();
    let mut values = Vec::with_capacity(m * (m - 1) / 2);
    let mut mark = vec![usize::MAX; nodes.len()];
    for i in 0..m {
        for &a in &paths[i] {
            mark[a] = i;
        }
        for path in paths.iter().skip(i + 1) {
            let lca = *path.iter().find(|&&a| mark[a] == i).expect("common root");
            values.push(depth[order[i].1] + depth[path[0]] - 2.0 * depth[lca]);
        }
    }
    if normalize {
        let first = values[0];
        values.iter_mut().for_each(|v| *v -= first);
    }
    UltrametricVector::new(values, order.into_iter().map(|(s, _)| s).collect())
}

/// Reconstructs an equidistant tree by single-linkage agglomeration.
///
/// The two clusters with the smallest inter-cluster value merge under a new
/// node at half that value. Ties go to the pair whose smallest labels are
/// lexicographically first.
pub fn vector_to_tree(u: &UltrametricVector) -> Result<RootedTree> {
    let m = u.leaf_count();
    let violation = worst_violation(u.values(), m);
    if violation > RECONSTRUCT_TOL {
        return Err(Error::NotUltrametric { violation });
    }

    let mut nodes: Vec<Node> = u
        .labels()
        .iter()
        .map(|l| Node { parent: None, children: Vec::new(), length: 0.0, label: Some(l.clone()) })
        .collect();
    let mut height = vec![0.0; m];
    // active clusters: (node id, index of smallest leaf label); leaves are sorted
    let mut active: Vec<(usize, usize)> = (0..m).map(|i| (i, i)).collect();
    let mut dist: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| u.get(i, j)).collect()).collect();

    while active.len() > 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..active.len() {
            for b in a + 1..active.len() {
                let d = dist[a][b];
                // strict comparison keeps the first pair in scan order, and
                // `active` stays sorted by smallest label
                if d < best.0 {
                    best = (d, a, b);
                }
            }
        }
        let (d, a, b) = best;
        let (na, la) = active[a];
        let (nb, _) = active[b];
        let h = (d / 2.0).max(height[na]).max(height[nb]);
        let id = nodes.len();
        nodes.push(Node { parent: None, children: vec![na, nb], length: 0.0, label: None });
        height.push(h);
        for c in [na, nb] {
            nodes[c].parent = Some(id);
            nodes[c].length = h - height[c];
        }
        // single linkage update; cluster b is removed, a becomes the merge
        for k in 0..active.len() {
            let v = dist[a][k].min(dist[b][k]);
            dist[a][k] = v;
            dist[k][a] = v;
        }
        active[a] = (id, la);
        active.remove(b);
        dist.remove(b);
        for row in &mut dist {
            row.remove(b);
        }
    }
    RootedTree::from_nodes(nodes)
}

/// Subdominant ultrametric: the largest ultrametric below `w`.
///
/// Entry `(i, j)` is the minimax path value, the smallest possible largest
/// edge over all paths from `i` to `j`. It is read off a minimum spanning
/// tree built by Kruskal's algorithm.
pub fn subdominant_ultrametric(w: &[f64]) -> Result<Vec<f64>> {
    let m = leaf_count(w.len())?;
    if let Some(index) = w.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let mut edges: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    edges.sort_by(|&(a, b), &(c, d)| w[pair_index(m, a, b)].total_cmp(&w[pair_index(m, c, d)]));

    let mut members: Vec<Vec<usize>> = (0..m).map(|i| vec![i]).collect();
    let mut component: Vec<usize> = (0..m).collect();
    let mut out = vec![0.0; w.len()];
    for (i, j) in edges {
        let (ci, cj) = (component[i], component[j]);
        if ci == cj {
            continue;
        }
        let value = w[pair_index(m, i, j)];
        let (keep, gone) = if members[ci].len() >= members[cj].len() { (ci, cj) } else { (cj, ci) };
        let moved = std::mem::take(&mut members[gone]);
        for &a in &members[keep] {
            for &b in &moved {
                out[pair_index(m, a.min(b), a.max(b))] = value;
            }
        }
        for &b in &moved {
            component[b] = keep;
        }
        members[keep].extend(moved);
    }
    Ok(out)
}
