//! Dense and kNN-sparse similarity kernels plus distance matrices built
//! from feature vectors.

use crate::error::{Error, Result};
use crate::ingest::FeatureMatrix;
use crate::par;

/// Rows processed per cache block during the O(n^2) construction pass.
const BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimilarityMetric {
    Cosine,
    Gaussian { sigma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMetric {
    Euclidean,
    OneMinusCosine,
}

#[derive(Debug, Clone)]
enum Storage {
    Dense(Vec<f64>),
    /// Per-row `(column, value)` pairs sorted by column; absent entries are 0.
    Sparse(Vec<Vec<(u32, f64)>>),
}

/// Symmetric pairwise similarity over the ground set, values in [0, 1],
/// unit diagonal. Row sums are cached at construction.
#[derive(Debug, Clone)]
pub struct Kernel {
    n: usize,
    storage: Storage,
    row_sums: Vec<f64>,
}

impl Kernel {
    pub fn from_dense(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || values.len() != n * n {
            return Err(Error::InvalidParam(format!(
                "{} values for a {n}x{n} kernel",
                values.len()
            )));
        }
        for (idx, &v) in values.iter().enumerate() {
            if !v.is_finite() || !(-1e-9..=1.0 + 1e-9).contains(&v) {
                return Err(Error::InvalidParam(format!(
                    "similarity {v} at ({}, {}) outside [0, 1]",
                    idx / n,
                    idx % n
                )));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (values[i * n + j] - values[j * n + i]).abs() > 1e-6 {
                    return Err(Error::InvalidParam(format!("kernel not symmetric at ({i}, {j})")));
                }
            }
        }
        let row_sums = (0..n).map(|i| values[i * n..(i + 1) * n].iter().sum()).collect();
        Ok(Kernel { n, storage: Storage::Dense(values), row_sums })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.storage {
            Storage::Dense(v) => v[i * self.n + j],
            Storage::Sparse(rows) => rows[i]
                .binary_search_by_key(&(j as u32), |&(c, _)| c)
                .map(|pos| rows[i][pos].1)
                .unwrap_or(0.0),
        }
    }

    /// Calls `f(j, s_ij)` for every stored entry of row `i`. Dense rows
    /// yield all columns; sparse rows yield only the retained neighbors.
    pub fn for_row(&self, i: usize, mut f: impl FnMut(usize, f64)) {
        match &self.storage {
            Storage::Dense(v) => {
                for (j, &s) in v[i * self.n..(i + 1) * self.n].iter().enumerate() {
                    f(j, s);
                }
            }
            Storage::Sparse(rows) => {
                for &(j, s) in &rows[i] {
                    f(j as usize, s);
                }
            }
        }
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row_sums[i]
    }

    /// Densifies into the ingest module's n x n payload representation.
    pub fn to_feature_matrix(&self) -> FeatureMatrix {
        let mut values = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            self.for_row(i, |j, s| values[i * self.n + j] = s);
        }
        FeatureMatrix::from_parts(self.n, self.n, values, None).expect("kernel values are valid features")
    }

    /// Rebuilds a dense kernel from an n x n payload, clamping float dust
    /// back into [0, 1].
    pub fn from_feature_matrix(fm: &FeatureMatrix) -> Result<Self> {
        if fm.n() != fm.d() {
            return Err(Error::DimensionMismatch(format!("{}x{} payload is not square", fm.n(), fm.d())));
        }
        let values = fm.values().iter().map(|&v| v.clamp(0.0, 1.0)).collect();
        Kernel::from_dense(fm.n(), values)
    }
}

/// Symmetric non-negative pairwise distances with zero diagonal.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_dense(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || values.len() != n * n {
            return Err(Error::InvalidParam(format!(
                "{} values for a {n}x{n} distance matrix",
                values.len()
            )));
        }
        for (idx, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParam(format!(
                    "distance {v} at ({}, {})",
                    idx / n,
                    idx % n
                )));
            }
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::InvalidParam(format!("nonzero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                if (values[i * n + j] - values[j * n + i]).abs() > 1e-6 {
                    return Err(Error::InvalidParam(format!("distances not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(DistanceMatrix { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn to_feature_matrix(&self) -> FeatureMatrix {
        FeatureMatrix::from_parts(self.n, self.n, self.values.clone(), None)
            .expect("distances are valid features")
    }

    pub fn from_feature_matrix(fm: &FeatureMatrix) -> Result<Self> {
        if fm.n() != fm.d() {
            return Err(Error::DimensionMismatch(format!("{}x{} payload is not square", fm.n(), fm.d())));
        }
        let mut values = fm.values().to_vec();
        let n = fm.n();
        for i in 0..n {
            values[i * n + i] = 0.0;
        }
        DistanceMatrix::from_dense(n, values)
    }
}

fn cosine_norms(features: &FeatureMatrix) -> Result<Vec<f64>> {
    let mut norms = Vec::with_capacity(features.n());
    for i in 0..features.n() {
        let norm = features.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector(i));
        }
        norms.push(norm);
    }
    Ok(norms)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Fills an n x n buffer with `entry(i, j)`, blocked over rows and columns
/// for cache locality and fanned out over row blocks.
fn fill_pairwise(n: usize, out: &mut [f64], entry: impl Fn(usize, usize) -> f64 + Sync) {
    par::for_each_row_block(out, n, BLOCK, |row0, rows| {
        for col0 in (0..n).step_by(BLOCK) {
            let col_end = (col0 + BLOCK).min(n);
            for (li, row) in rows.chunks_mut(n).enumerate() {
                let i = row0 + li;
                for (j, slot) in row[col0..col_end].iter_mut().enumerate() {
                    *slot = entry(i, col0 + j);
                }
            }
        }
    });
}

/// Builds the dense similarity kernel. Cosine on non-negative features
/// lands in [0, 1]; the Gaussian metric is exp(-||xi - xj||^2 / (2 sigma^2)).
pub fn compute_kernel(features: &FeatureMatrix, metric: SimilarityMetric) -> Result<Kernel> {
    let n = features.n();
    let mut values = vec![0.0; n * n];
    match metric {
        SimilarityMetric::Cosine => {
            let norms = cosine_norms(features)?;
            fill_pairwise(n, &mut values, |i, j| {
                if i == j {
                    1.0
                } else {
                    (dot(features.row(i), features.row(j)) / (norms[i] * norms[j])).clamp(0.0, 1.0)
                }
            });
        }
        SimilarityMetric::Gaussian { sigma } => {
            if !sigma.is_finite() || sigma <= 0.0 {
                return Err(Error::InvalidParam(format!("gaussian sigma {sigma} must be > 0")));
            }
            let denom = 2.0 * sigma * sigma;
            fill_pairwise(n, &mut values, |i, j| {
                if i == j {
                    1.0
                } else {
                    (-sq_dist(features.row(i), features.row(j)) / denom).exp()
                }
            });
        }
    }
    let row_sums = (0..n).map(|i| values[i * n..(i + 1) * n].iter().sum()).collect();
    Ok(Kernel { n, storage: Storage::Dense(values), row_sums })
}

/// Keeps the k largest off-diagonal entries per row (plus the diagonal) and
/// symmetrizes by max(s_ij, s_ji). Absent entries are treated as 0 by all
/// objectives.
pub fn sparsify_knn(kernel: &Kernel, k: usize) -> Result<Kernel> {
    let n = kernel.n();
    if kernel.is_sparse() {
        return Err(Error::InvalidParam("knn sparsification expects a dense kernel".into()));
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidParam(format!("knn k = {k} must satisfy 1 <= k < n = {n}")));
    }
    let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    for i in 0..n {
        let mut candidates: Vec<(u32, f64)> = Vec::with_capacity(n - 1);
        kernel.for_row(i, |j, s| {
            if j != i {
                candidates.push((j as u32, s));
            }
        });
        // largest first, ties toward the lower index
        candidates.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        candidates.truncate(k);
        rows[i].push((i as u32, kernel.get(i, i)));
        for (j, s) in candidates {
            rows[i].push((j, s));
            rows[j as usize].push((i as u32, s));
        }
    }
    for row in &mut rows {
        row.sort_by_key(|&(c, _)| c);
        // duplicates arise when i keeps j and j keeps i; the kernel is
        // symmetric so max() == either copy
        row.dedup_by(|a, b| {
            if a.0 == b.0 {
                b.1 = b.1.max(a.1);
                true
            } else {
                false
            }
        });
    }
    let row_sums = rows.iter().map(|r| r.iter().map(|&(_, s)| s).sum()).collect();
    Ok(Kernel { n, storage: Storage::Sparse(rows), row_sums })
}

/// Builds the dense distance matrix: symmetric, non-negative, zero diagonal.
pub fn compute_distances(features: &FeatureMatrix, metric: DistanceMetric) -> Result<DistanceMatrix> {
    let n = features.n();
    let mut values = vec![0.0; n * n];
    match metric {
        DistanceMetric::Euclidean => {
            fill_pairwise(n, &mut values, |i, j| {
                if i == j {
                    0.0
                } else {
                    sq_dist(features.row(i), features.row(j)).sqrt()
                }
            });
        }
        DistanceMetric::OneMinusCosine => {
            let norms = cosine_norms(features)?;
            fill_pairwise(n, &mut values, |i, j| {
                if i == j {
                    0.0
                } else {
                    (1.0 - dot(features.row(i), features.row(j)) / (norms[i] * norms[j])).clamp(0.0, 1.0)
                }
            });
        }
    }
    DistanceMatrix::from_dense(n, values)
}
