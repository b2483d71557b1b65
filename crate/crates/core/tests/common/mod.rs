#![allow(dead_code)]

use dssc::data::{SynthSpec, Warp};
use dssc::network::ActivationKind;
use dssc::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> Matrix {
    let data = (0..rows * cols)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    Matrix::from_vec(rows, cols, data).unwrap()
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, len: usize, scale: f64) -> Vec<f64> {
    (0..len).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Uniform on `[lo, hi]` in log space.
pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// The experiment setup shared by the shallow and deep runs: three 4-dim
/// subspaces of R^30, 50 points each.
pub fn experiment_spec(warp: Warp, seed: u64) -> SynthSpec {
    SynthSpec {
        num_subspaces: 3,
        ambient_dim: 30,
        subspace_dim: 4,
        points_per: 50,
        noise_sigma: 0.01,
        warp,
        seed,
    }
}

/// A random symmetric matrix with entries of unit scale.
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let g = gaussian_matrix(rng, n, n, 1.0);
    g.add(&g.transpose()).unwrap().scale(0.5)
}

/// An activation drawn from `ALL`, excluding the identity when `nonlinear`.
pub fn activations(nonlinear: bool) -> Vec<ActivationKind> {
    ActivationKind::ALL
        .iter()
        .copied()
        .filter(|a| !nonlinear || *a != ActivationKind::Identity)
        .collect()
}

/// A left-to-right partition with `k` blocks of the given sizes.
pub fn block_labels(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect()
}

/// Largest relative error between backprop and central differences over
/// every weight and bias of a random network.
pub fn gradient_check(activation: ActivationKind, seed: u64, step: f64) -> f64 {
    use dssc::network::{init_network, per_sample_gradient, per_sample_loss};

    let mut r = rng(seed);
    let depth = r.random_range(1..=3);
    let dims: Vec<usize> = (0..=depth).map(|_| r.random_range(2..=6)).collect();
    let mut params = init_network(&dims, activation).unwrap();
    for layer in &mut params.layers {
        let fan_in = layer.w.cols() as f64;
        layer.w = gaussian_matrix(&mut r, layer.w.rows(), layer.w.cols(), 1.0 / fan_in.sqrt());
        layer.b = gaussian_vec(&mut r, layer.b.len(), 0.3);
    }
    let x = gaussian_vec(&mut r, dims[0], 1.0);
    let target = gaussian_vec(&mut r, *dims.last().unwrap(), 0.5);
    let lambda = r.random_range(0.0..0.5);

    let grads = per_sample_gradient(&params, &x, &target, lambda).unwrap();
    let loss = |p: &dssc::network::NetworkParams| per_sample_loss(p, &x, &target, lambda).unwrap();

    let mut analytic = Vec::new();
    let mut numeric = Vec::new();
    for m in 0..params.depth() {
        let (rows, cols) = params.layers[m].w.shape();
        for i in 0..rows {
            for j in 0..cols {
                let mut plus = params.clone();
                plus.layers[m].w[(i, j)] += step;
                let mut minus = params.clone();
                minus.layers[m].w[(i, j)] -= step;
                numeric.push((loss(&plus) - loss(&minus)) / (2.0 * step));
                analytic.push(grads.layers[m].w[(i, j)]);
            }
            let mut plus = params.clone();
            plus.layers[m].b[i] += step;
            let mut minus = params.clone();
            minus.layers[m].b[i] -= step;
            numeric.push((loss(&plus) - loss(&minus)) / (2.0 * step));
            analytic.push(grads.layers[m].b[i]);
        }
    }
    let diff: Vec<f64> = analytic.iter().zip(&numeric).map(|(a, b)| a - b).collect();
    dssc::linalg::norm2(&diff) / dssc::linalg::norm2(&numeric).max(1e-8)
}

/// Random problem: `d ≤ 20`, `p ≤ 30`, `γ` log-uniform on `[1e-3, 1]`.
pub struct RandomLasso {
    pub dictionary: Matrix,
    pub target: Vec<f64>,
    pub gamma: f64,
    pub excluded: Option<usize>,
}

impl RandomLasso {
    pub fn draw(seed: u64) -> Self {
        let mut r = rng(seed);
        let d = r.random_range(2..=20);
        let p = r.random_range(2..=30);
        let mut dictionary = gaussian_matrix(&mut r, d, p, 1.0);
        for j in 0..p {
            let col = dictionary.column(j);
            let nrm = dssc::linalg::norm2(&col);
            let unit: Vec<f64> = col.iter().map(|v| v / nrm).collect();
            dictionary.set_column(j, &unit);
        }
        let target = gaussian_vec(&mut r, d, 1.0);
        let gamma = log_uniform(&mut r, 1e-3, 1.0);
        let excluded = r.random_bool(0.5).then(|| r.random_range(0..p));
        RandomLasso {
            dictionary,
            target,
            gamma,
            excluded,
        }
    }

    pub fn problem(&self) -> dssc::sparse::LassoProblem<'_> {
        dssc::sparse::LassoProblem {
            dictionary: &self.dictionary,
            target: &self.target,
            gamma: self.gamma,
            excluded: self.excluded,
        }
    }
}

/// A symmetric nonnegative affinity with `sizes` dense blocks (weights in
/// `[0.5, 1]`) and off-block entries in `[0, noise]`.
pub fn planted_affinity(rng: &mut ChaCha8Rng, sizes: &[usize], noise: f64) -> Matrix {
    let labels = block_labels(sizes);
    let n = labels.len();
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = if labels[i] == labels[j] {
                rng.random_range(0.5..=1.0)
            } else {
                rng.random_range(0.0..=noise)
            };
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

/// Accuracy by trying every relabeling of `pred`.
pub fn brute_force_accuracy(pred: &[usize], truth: &[usize]) -> f64 {
    let k = 1 + pred.iter().chain(truth).copied().max().unwrap_or(0);
    let mut best = 0usize;
    let mut perm: Vec<usize> = (0..k).collect();
    permute(&mut perm, 0, &mut |p| {
        let hits = pred.iter().zip(truth).filter(|(a, b)| p[**a] == **b).count();
        best = best.max(hits);
    });
    best as f64 / pred.len() as f64
}

fn permute(v: &mut Vec<usize>, at: usize, visit: &mut dyn FnMut(&[usize])) {
    if at == v.len() {
        visit(v);
        return;
    }
    for i in at..v.len() {
        v.swap(at, i);
        permute(v, at + 1, visit);
        v.swap(at, i);
    }
}
