//! Dataset ingestion, preprocessing and synthetic union-of-subspaces data.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, symmetric_eig, Matrix};

/// Samples as columns of `x` (`d × n`), with optional ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: Matrix,
    pub labels: Option<Vec<usize>>,
    pub k: Option<usize>,
}

impl Dataset {
    /// Validates shapes and compacts labels to `0..k` in first-appearance
    /// order.
    pub fn new(x: Matrix, labels: Option<Vec<usize>>) -> Result<Self> {
        if x.rows() < 1 || x.cols() < 2 {
            return Err(Error::invalid(format!(
                "dataset needs d >= 1 and n >= 2, got {}x{}",
                x.rows(),
                x.cols()
            )));
        }
        let (labels, k) = match labels {
            Some(raw) => {
                if raw.len() != x.cols() {
                    return Err(Error::invalid(format!("{} labels for {} samples", raw.len(), x.cols())));
                }
                let (compact, k) = compact_labels(&raw);
                (Some(compact), Some(k))
            }
            None => (None, None),
        };
        Ok(Dataset { x, labels, k })
    }

    pub fn n(&self) -> usize {
        self.x.cols()
    }

    pub fn dim(&self) -> usize {
        self.x.rows()
    }
}

/// Maps arbitrary ids to `0..k` in order of first appearance.
pub fn compact_labels(raw: &[usize]) -> (Vec<usize>, usize) {
    let mut map = HashMap::new();
    let compact = raw
        .iter()
        .map(|id| {
            let next = map.len();
            *map.entry(*id).or_insert(next)
        })
        .collect();
    (compact, map.len())
}

/// Reads one sample per row and returns the `d × n` matrix. A first row
/// whose first field is not a float is treated as a header.
pub fn load_matrix_csv(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::ingest(path, format!("cannot read file: {e}")))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if line_no == 0 && fields[0].parse::<f64>().is_err() {
            continue;
        }
        let mut row = Vec::with_capacity(fields.len());
        for (col, field) in fields.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                Error::ingest(
                    path,
                    format!("row {}, column {}: cannot parse {field:?}", line_no + 1, col + 1),
                )
            })?;
            if !v.is_finite() {
                return Err(Error::ingest(
                    path,
                    format!("row {}, column {}: non-finite value", line_no + 1, col + 1),
                ));
            }
            row.push(v);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::ingest(
                    path,
                    format!("row {} has {} fields, expected {w}", line_no + 1, row.len()),
                ))
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::ingest(path, "no data rows"));
    }
    Ok(Matrix::from_rows(&rows)?.transpose())
}

/// Formats a `d × n` matrix as CSV, one sample per row.
pub fn matrix_to_csv(x: &Matrix) -> String {
    let mut out = String::new();
    for j in 0..x.cols() {
        for i in 0..x.rows() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{}", x[(i, j)]).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn save_matrix_csv(path: impl AsRef<Path>, x: &Matrix) -> Result<()> {
    fs::write(path, matrix_to_csv(x))?;
    Ok(())
}

/// Reads one non-negative integer per line.
pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::ingest(path, format!("cannot read file: {e}")))?;
    let mut labels = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let id = line
            .parse::<usize>()
            .map_err(|_| Error::ingest(path, format!("line {}: not a label: {line:?}", line_no + 1)))?;
        labels.push(id);
    }
    if labels.is_empty() {
        return Err(Error::ingest(path, "no labels"));
    }
    Ok(labels)
}

pub fn labels_to_string(labels: &[usize]) -> String {
    let mut out = String::with_capacity(labels.len() * 2);
    for l in labels {
        writeln!(out, "{l}").unwrap();
    }
    out
}

pub fn save_labels(path: impl AsRef<Path>, labels: &[usize]) -> Result<()> {
    fs::write(path, labels_to_string(labels))?;
    Ok(())
}

/// Scales every column with norm above `1e-12` to unit ℓ2 norm.
pub fn normalize_columns(x: &Matrix) -> Matrix {
    let mut out = x.clone();
    for j in 0..x.cols() {
        let col = x.column(j);
        let norm = norm2(&col);
        if norm > 1e-12 {
            let scaled: Vec<f64> = col.iter().map(|v| v / norm).collect();
            out.set_column(j, &scaled);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct Pca {
    /// `target_dim × n` scores.
    pub projected: Matrix,
    /// `d × target_dim`, orthonormal columns.
    pub basis: Matrix,
    /// Per-row mean removed before projection.
    pub mean: Vec<f64>,
    /// All covariance eigenvalues, descending. Covariance is normalized by
    /// `n - 1`.
    pub variances: Vec<f64>,
}

impl Pca {
    pub fn reconstruct(&self) -> Matrix {
        let mut x = self.basis.matmul(&self.projected).expect("pca shapes agree");
        for i in 0..x.rows() {
            let m = self.mean[i];
            x.row_mut(i).iter_mut().for_each(|v| *v += m);
        }
        x
    }
}

/// Mean-centred PCA onto the top `target_dim` principal axes. No whitening.
pub fn pca_reduce(x: &Matrix, target_dim: usize) -> Result<Pca> {
    let (d, n) = x.shape();
    if target_dim == 0 || target_dim > d.min(n) {
        return Err(Error::invalid(format!(
            "pca target dimension {target_dim} outside 1..={}",
            d.min(n)
        )));
    }
    let mean: Vec<f64> = (0..d).map(|i| x.row(i).iter().sum::<f64>() / n as f64).collect();
    let mut centered = x.clone();
    for (i, &m) in mean.iter().enumerate() {
        centered.row_mut(i).iter_mut().for_each(|v| *v -= m);
    }
    let denom = (n - 1).max(1) as f64;
    let cov = centered.transpose().gram().scale(1.0 / denom);
    let eig = symmetric_eig(&cov)?;
    let mut basis = Matrix::zeros(d, target_dim);
    for (dst, src) in (0..d).rev().take(target_dim).enumerate() {
        basis.set_column(dst, &eig.eigenvectors.column(src));
    }
    let projected = basis.transpose().matmul(&centered)?;
    let variances = eig.eigenvalues.iter().rev().copied().collect();
    Ok(Pca {
        projected,
        basis,
        mean,
        variances,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warp {
    Identity,
    /// `x ↦ R·(x + 0.5·x∘x∘x)` with a seeded random orthogonal `R`.
    CubicRotate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub num_subspaces: usize,
    pub ambient_dim: usize,
    pub subspace_dim: usize,
    pub points_per: usize,
    pub noise_sigma: f64,
    pub warp: Warp,
    pub seed: u64,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_subspaces == 0 {
            return Err(Error::invalid("need at least one subspace"));
        }
        if self.subspace_dim == 0 || self.subspace_dim >= self.ambient_dim {
            return Err(Error::invalid(format!(
                "subspace dimension {} must lie in 1..{}",
                self.subspace_dim, self.ambient_dim
            )));
        }
        if self.points_per < self.subspace_dim + 1 {
            return Err(Error::invalid(format!(
                "{} points per subspace cannot span a {}-dimensional subspace with a spare",
                self.points_per, self.subspace_dim
            )));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::invalid("noise sigma must be finite and nonnegative"));
        }
        if self.num_subspaces * self.points_per < 2 {
            return Err(Error::invalid("need at least two points"));
        }
        Ok(())
    }
}

/// Everything a generator draws, for tests that need the ground truth.
#[derive(Debug, Clone)]
pub struct Synthetic {
    pub dataset: Dataset,
    /// Per-subspace orthonormal bases (`ambient × subspace_dim`).
    pub bases: Vec<Matrix>,
    /// Points before the warp (equal to `dataset.x` for the identity warp).
    pub pre_warp: Matrix,
    pub rotation: Option<Matrix>,
}

/// Draws the union-of-subspaces sample described by `spec`. The linear draws
/// come first from the RNG stream, so the identity and cubic warps share
/// the same pre-warp points for the same seed.
pub fn generate(spec: &SynthSpec) -> Result<Synthetic> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let d = spec.ambient_dim;
    let bases: Vec<Matrix> = (0..spec.num_subspaces)
        .map(|_| random_orthonormal(&mut rng, d, spec.subspace_dim))
        .collect();
    let n = spec.num_subspaces * spec.points_per;
    let mut x = Matrix::zeros(d, n);
    let mut labels = Vec::with_capacity(n);
    for (s, basis) in bases.iter().enumerate() {
        for p in 0..spec.points_per {
            let coeffs: Vec<f64> = (0..spec.subspace_dim).map(|_| gaussian(&mut rng)).collect();
            let mut point = basis.matvec(&coeffs)?;
            for v in point.iter_mut() {
                *v += spec.noise_sigma * gaussian(&mut rng);
            }
            x.set_column(s * spec.points_per + p, &point);
            labels.push(s);
        }
    }
    let (x_out, rotation) = match spec.warp {
        Warp::Identity => (x.clone(), None),
        Warp::CubicRotate => {
            let r = random_orthonormal(&mut rng, d, d);
            let cubed = x.map(|v| v + 0.5 * v * v * v);
            (r.matmul(&cubed)?, Some(r))
        }
    };
    Ok(Synthetic {
        dataset: Dataset::new(x_out, Some(labels))?,
        bases,
        pre_warp: x,
        rotation,
    })
}

/// `generate` with the identity warp.
pub fn gen_linear_subspaces(spec: &SynthSpec) -> Result<Dataset> {
    let spec = SynthSpec {
        warp: Warp::Identity,
        ..spec.clone()
    };
    Ok(generate(&spec)?.dataset)
}

/// `generate` with the warp named in `spec`.
pub fn gen_nonlinear_subspaces(spec: &SynthSpec) -> Result<Dataset> {
    Ok(generate(spec)?.dataset)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Gram-Schmidt (applied twice) on a Gaussian `rows × cols` draw.
fn random_orthonormal(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(cols);
    while columns.len() < cols {
        let mut v: Vec<f64> = (0..rows).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &columns {
                let p = dot(&v, q);
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= p * b);
            }
        }
        let norm = norm2(&v);
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|a| *a /= norm);
        columns.push(v);
    }
    Matrix::from_columns(&columns).expect("equal-length columns")
}
