//! Affinity graphs, normalized spectral embedding and k-means.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{norm2, symmetric_eig, Matrix};
use crate::sparse::CoefficientMatrix;

/// Symmetric, nonnegative, zero-diagonal similarity graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Affinity {
    a: Matrix,
}

impl Affinity {
    /// Validates the invariants on an arbitrary matrix.
    pub fn from_matrix(a: Matrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::invalid("affinity must be square"));
        }
        let n = a.rows();
        for i in 0..n {
            if a[(i, i)] != 0.0 {
                return Err(Error::invalid(format!("affinity diagonal entry {i} is nonzero")));
            }
            for j in 0..n {
                if a[(i, j)] < 0.0 || !a[(i, j)].is_finite() || a[(i, j)] != a[(j, i)] {
                    return Err(Error::invalid(format!(
                        "affinity entry ({i}, {j}) breaks symmetry or nonnegativity"
                    )));
                }
            }
        }
        Ok(Affinity { a })
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }
}

/// `A = |C| + |C|ᵀ`
pub fn build_affinity(c: &CoefficientMatrix) -> Affinity {
    let m = c.as_matrix();
    let n = m.rows();
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = m[(i, j)].abs() + m[(j, i)].abs();
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    Affinity { a }
}

/// `L = I − D^{-1/2} A D^{-1/2}`. Isolated vertices get `D^{-1/2} = 0`, so
/// their row of `L` is the identity row.
pub fn normalized_laplacian(a: &Affinity) -> Matrix {
    let m = &a.a;
    let n = m.rows();
    let inv_sqrt: Vec<f64> = (0..n)
        .map(|i| {
            let deg: f64 = m.row(i).iter().sum();
            if deg > 0.0 {
                1.0 / deg.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let mut l = Matrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            let v = -(m[(i, j)] * inv_sqrt[i] * inv_sqrt[j]);
            l[(i, j)] = v;
            l[(j, i)] = v;
        }
    }
    l
}

/// Rows of the bottom-`k` Laplacian eigenvectors, each scaled to unit norm
/// (zero rows stay zero). Output is `n × k`.
pub fn spectral_embed(a: &Affinity, k: usize) -> Result<Matrix> {
    let n = a.n();
    if k < 2 || k > n {
        return Err(Error::invalid(format!("cluster count {k} outside 2..={n}")));
    }
    let eig = symmetric_eig(&normalized_laplacian(a))?;
    let mut emb = Matrix::zeros(n, k);
    for i in 0..n {
        let row = emb.row_mut(i);
        for (j, r) in row.iter_mut().enumerate() {
            *r = eig.eigenvectors[(i, j)];
        }
        let norm = norm2(row);
        if norm > 0.0 {
            row.iter_mut().for_each(|v| *v /= norm);
        }
    }
    Ok(emb)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    pub labels: Vec<usize>,
    pub k: usize,
}

#[derive(Debug, Clone)]
pub struct KMeansResult {
    pub assignment: ClusterAssignment,
    pub sse: f64,
    pub centroids: Matrix,
    /// Index of the winning restart.
    pub restart: usize,
    /// SSE after every Lloyd iteration, per restart.
    pub sse_history: Vec<Vec<f64>>,
}

pub const MAX_LLOYD_ITERS: usize = 300;

/// k-means on the rows of `points`: k-means++ seeding, Lloyd iterations,
/// best of `restarts` by SSE (earliest restart on ties).
pub fn kmeans(points: &Matrix, k: usize, restarts: usize, seed: u64) -> Result<ClusterAssignment> {
    Ok(kmeans_detailed(points, k, restarts, seed)?.assignment)
}

pub fn kmeans_detailed(points: &Matrix, k: usize, restarts: usize, seed: u64) -> Result<KMeansResult> {
    let n = points.rows();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("cannot form {k} clusters from {n} points")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, usize, Vec<usize>, Matrix)> = None;
    let mut histories = Vec::with_capacity(restarts.max(1));
    for restart in 0..restarts.max(1) {
        let init = plus_plus(points, k, &mut rng);
        let (labels, centroids, history) = lloyd(points, init);
        let sse = *history.last().expect("at least one evaluation");
        histories.push(history);
        if best.as_ref().is_none_or(|(b, ..)| sse < *b) {
            best = Some((sse, restart, labels, centroids));
        }
    }
    let (sse, restart, labels, centroids) = best.expect("at least one restart");
    Ok(KMeansResult {
        assignment: ClusterAssignment { labels, k },
        sse,
        centroids,
        restart,
        sse_history: histories,
    })
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn plus_plus(points: &Matrix, k: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let n = points.rows();
    let dim = points.cols();
    let mut centroids = Matrix::zeros(k, dim);
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen[first] = true;
    centroids.row_mut(0).copy_from_slice(points.row(first));
    let mut nearest: Vec<f64> = (0..n).map(|i| sq_dist(points.row(i), centroids.row(0))).collect();
    for c in 1..k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = None;
            for (i, &w) in nearest.iter().enumerate() {
                if w <= 0.0 {
                    continue;
                }
                pick = Some(i);
                if target < w {
                    break;
                }
                target -= w;
            }
            pick.expect("positive total weight")
        } else {
            // all points coincide with a centre
            (0..n).find(|&i| !chosen[i]).unwrap_or(0)
        };
        chosen[pick] = true;
        centroids.row_mut(c).copy_from_slice(points.row(pick));
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(sq_dist(points.row(i), centroids.row(c)));
        }
    }
    centroids
}

fn assign(points: &Matrix, centroids: &Matrix) -> (Vec<usize>, Vec<f64>) {
    let k = centroids.rows();
    (0..points.rows())
        .map(|i| {
            let p = points.row(i);
            let mut best = (0, f64::INFINITY);
            for c in 0..k {
                let d = sq_dist(p, centroids.row(c));
                if d < best.1 {
                    best = (c, d);
                }
            }
            best
        })
        .unzip()
}

/// Runs Lloyd iterations from `centroids`; returns labels, final centroids
/// and the SSE recorded after each assignment step.
fn lloyd(points: &Matrix, mut centroids: Matrix) -> (Vec<usize>, Matrix, Vec<f64>) {
    let (n, dim) = points.shape();
    let k = centroids.rows();
    let (mut labels, mut dists) = assign(points, &centroids);
    let mut history = vec![dists.iter().sum::<f64>()];
    for _ in 0..MAX_LLOYD_ITERS {
        let mut sums = Matrix::zeros(k, dim);
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[labels[i]] += 1;
            for (s, &v) in sums.row_mut(labels[i]).iter_mut().zip(points.row(i)) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                let inv = 1.0 / counts[c] as f64;
                let row = sums.row(c).iter().map(|s| s * inv).collect::<Vec<_>>();
                centroids.row_mut(c).copy_from_slice(&row);
            }
        }
        // reseed empty clusters at the point farthest from its centroid
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let far = (0..n)
                .filter(|&i| counts[labels[i]] > 1)
                .max_by(|&i, &j| dists[i].total_cmp(&dists[j]).then(j.cmp(&i)));
            if let Some(far) = far {
                counts[labels[far]] -= 1;
                counts[c] = 1;
                labels[far] = c;
                dists[far] = 0.0;
                centroids.row_mut(c).copy_from_slice(points.row(far));
            }
        }
        let (new_labels, new_dists) = assign(points, &centroids);
        history.push(new_dists.iter().sum());
        let changed = new_labels != labels;
        labels = new_labels;
        dists = new_dists;
        if !changed {
            break;
        }
    }
    (labels, centroids, history)
}

/// Embeds with [`spectral_embed`] then clusters the rows with [`kmeans`].
pub fn spectral_cluster(a: &Affinity, k: usize, restarts: usize, seed: u64) -> Result<ClusterAssignment> {
    let emb = spectral_embed(a, k)?;
    kmeans(&emb, k, restarts, seed)
}
