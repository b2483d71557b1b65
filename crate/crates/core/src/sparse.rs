//! ℓ1-regularized least squares, `min ½‖y − Dc‖² + γ‖c‖₁`, solved by
//! following the homotopy path from `γ = ‖Dᵀy‖_∞` down to the requested
//! value. A cyclic coordinate-descent solver is kept as an independent
//! cross-check, and [`self_expression`] assembles the zero-diagonal
//! coefficient matrix used for subspace clustering.

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};

/// Default path tolerance (`δ`).
pub const DEFAULT_DELTA: f64 = 1e-4;

const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct LassoProblem<'a> {
    /// `d × p`, columns are atoms.
    pub dictionary: &'a Matrix,
    pub target: &'a [f64],
    pub gamma: f64,
    /// Atom forced to zero.
    pub excluded: Option<usize>,
}

impl LassoProblem<'_> {
    fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::invalid(format!("gamma must be positive, got {}", self.gamma)));
        }
        if self.target.len() != self.dictionary.rows() {
            return Err(Error::invalid(format!(
                "target length {} does not match dictionary rows {}",
                self.target.len(),
                self.dictionary.rows()
            )));
        }
        if let Some(e) = self.excluded {
            if e >= self.dictionary.cols() {
                return Err(Error::invalid(format!(
                    "excluded atom {e} out of range for {} atoms",
                    self.dictionary.cols()
                )));
            }
        }
        Ok(())
    }

    /// `½‖y − Dc‖² + γ‖c‖₁`
    pub fn objective(&self, coefficients: &[f64]) -> f64 {
        let r = self.residual(coefficients);
        0.5 * dot(&r, &r) + self.gamma * l1(coefficients)
    }

    fn residual(&self, coefficients: &[f64]) -> Vec<f64> {
        let fit = self.dictionary.matvec(coefficients).expect("shapes validated");
        self.target.iter().zip(&fit).map(|(y, f)| y - f).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseCode {
    pub coefficients: Vec<f64>,
    /// Indices of nonzero coefficients, ascending.
    pub support: Vec<usize>,
    pub objective: f64,
}

impl SparseCode {
    fn new(coefficients: Vec<f64>, objective: f64) -> Self {
        let support = coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(j, _)| j)
            .collect();
        SparseCode {
            coefficients,
            support,
            objective,
        }
    }
}

fn l1(c: &[f64]) -> f64 {
    c.iter().map(|v| v.abs()).sum()
}

fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

/// Largest KKT violation of `coefficients`: `|dⱼᵀr| − γ` over zero
/// coefficients and `|dⱼᵀr − γ·sign(cⱼ)|` over nonzero ones, with
/// `r = y − Dc`. The excluded atom is not checked.
pub fn kkt_residual(problem: &LassoProblem<'_>, coefficients: &[f64]) -> f64 {
    let r = problem.residual(coefficients);
    let corr = problem.dictionary.tr_matvec(&r).expect("shapes validated");
    kkt_from_correlations(&corr, coefficients, problem.gamma, problem.excluded)
}

fn kkt_from_correlations(corr: &[f64], c: &[f64], gamma: f64, excluded: Option<usize>) -> f64 {
    let mut worst = 0.0f64;
    for (j, (&cj, &rj)) in c.iter().zip(corr).enumerate() {
        if Some(j) == excluded {
            continue;
        }
        let v = if cj == 0.0 {
            (rj.abs() - gamma).max(0.0)
        } else {
            (rj - gamma * cj.signum()).abs()
        };
        worst = worst.max(v);
    }
    worst
}

/// Homotopy (LARS-lasso) solver.
///
/// Ties between atoms reaching the correlation bound at the same step go
/// to the lowest index. Fails with [`Error::PathLimit`] after `10·p`
/// breakpoints.
pub fn solve_lasso_homotopy(problem: &LassoProblem<'_>, delta: f64) -> Result<SparseCode> {
    problem.validate()?;
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    let gram = problem.dictionary.gram();
    let dty = problem.dictionary.tr_matvec(problem.target)?;
    let coefficients = homotopy_path(&gram, &dty, problem.gamma, problem.excluded, delta)?;
    let objective = problem.objective(&coefficients);
    Ok(SparseCode::new(coefficients, objective))
}

/// Lower-triangular Cholesky factor of the active Gram block, grown one
/// atom at a time.
struct ActiveCholesky {
    rows: Vec<Vec<f64>>,
}

impl ActiveCholesky {
    fn new() -> Self {
        ActiveCholesky { rows: Vec::new() }
    }

    fn rebuild(gram: &Matrix, active: &[usize]) -> Option<Self> {
        let mut chol = ActiveCholesky::new();
        for (pos, &j) in active.iter().enumerate() {
            if !chol.push(gram, &active[..pos], j) {
                return None;
            }
        }
        Some(chol)
    }

    /// Appends atom `j` given the atoms already factored. Returns `false`
    /// (leaving the factor untouched) if the new pivot is below tolerance.
    fn push(&mut self, gram: &Matrix, active: &[usize], j: usize) -> bool {
        let k = self.rows.len();
        let mut w = Vec::with_capacity(k + 1);
        for i in 0..k {
            let s = gram[(active[i], j)] - dot(&self.rows[i][..i], &w[..i]);
            w.push(s / self.rows[i][i]);
        }
        let pivot_sq = gram[(j, j)] - dot(&w, &w);
        if pivot_sq <= PIVOT_TOL * gram[(j, j)].max(f64::MIN_POSITIVE) {
            return false;
        }
        w.push(pivot_sq.sqrt());
        self.rows.push(w);
        true
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let k = self.rows.len();
        let mut y = vec![0.0; k];
        for i in 0..k {
            y[i] = (b[i] - dot(&self.rows[i][..i], &y[..i])) / self.rows[i][i];
        }
        let mut x = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = y[i];
            for r in i + 1..k {
                s -= self.rows[r][i] * x[r];
            }
            x[i] = s / self.rows[i][i];
        }
        x
    }
}

struct ActiveSet {
    atoms: Vec<usize>,
    signs: Vec<f64>,
    member: Vec<bool>,
    chol: ActiveCholesky,
}

impl ActiveSet {
    /// Adds atom `j` with the sign of its current correlation. Returns
    /// `false` if `j` is numerically dependent on the active atoms.
    fn enter(&mut self, gram: &Matrix, j: usize, corr: &[f64]) -> bool {
        let mut ok = self.chol.push(gram, &self.atoms, j);
        if !ok {
            // the incremental pivot may have drifted; retry on a fresh factor
            if let Some(fresh) = ActiveCholesky::rebuild(gram, &self.atoms) {
                self.chol = fresh;
                ok = self.chol.push(gram, &self.atoms, j);
            }
        }
        if ok {
            self.atoms.push(j);
            self.signs.push(corr[j].signum());
            self.member[j] = true;
        }
        ok
    }
}

enum Event {
    Done,
    Enter(usize),
    Exit(usize),
}

/// Runs the path given the full Gram matrix `DᵀD` and `Dᵀy`.
pub(crate) fn homotopy_path(
    gram: &Matrix,
    dty: &[f64],
    gamma: f64,
    excluded: Option<usize>,
    delta: f64,
) -> Result<Vec<f64>> {
    let p = dty.len();
    let mut c = vec![0.0; p];
    let eligible = |j: usize| Some(j) != excluded;

    let mut lambda = 0.0;
    let mut first = None;
    for j in (0..p).filter(|&j| eligible(j)) {
        if dty[j].abs() > lambda {
            lambda = dty[j].abs();
            first = Some(j);
        }
    }
    let Some(first) = first else {
        return Ok(c);
    };
    if lambda <= gamma {
        return Ok(c);
    }

    let mut blocked = vec![false; p];
    let mut corr = dty.to_vec();
    let mut just_dropped = None;

    let mut state = ActiveSet {
        atoms: Vec::new(),
        signs: Vec::new(),
        member: vec![false; p],
        chol: ActiveCholesky::new(),
    };
    if !state.enter(gram, first, &corr) {
        // zero atom: nothing can be fit
        return Ok(c);
    }

    let max_breakpoints = 10 * p.max(1);
    let mut breakpoints = 0;
    loop {
        let dir = state.chol.solve(&state.signs);
        let mut best_t = lambda - gamma;
        let mut event = Event::Done;

        let tiny = 1e-14 * lambda.max(1.0);
        for j in 0..p {
            if state.member[j] || blocked[j] || !eligible(j) {
                continue;
            }
            // an atom that just left sits on the bound with its old sign;
            // only the opposite crossing is a real event
            let left_with = just_dropped.filter(|&(k, _)| k == j).map(|(_, s)| s);
            let row = gram.row(j);
            let a: f64 = state.atoms.iter().zip(&dir).map(|(&k, &dk)| row[k] * dk).sum();
            if left_with != Some(1.0) && 1.0 - a > 1e-15 {
                let t = (lambda - corr[j]) / (1.0 - a);
                if t > tiny && t < best_t {
                    best_t = t;
                    event = Event::Enter(j);
                }
            }
            if left_with != Some(-1.0) && 1.0 + a > 1e-15 {
                let t = (lambda + corr[j]) / (1.0 + a);
                if t > tiny && t < best_t {
                    best_t = t;
                    event = Event::Enter(j);
                }
            }
        }
        for (pos, &k) in state.atoms.iter().enumerate() {
            if dir[pos] == 0.0 {
                continue;
            }
            let t = -c[k] / dir[pos];
            if t > tiny && t < best_t {
                best_t = t;
                event = Event::Exit(pos);
            }
        }

        for (pos, &k) in state.atoms.iter().enumerate() {
            c[k] += best_t * dir[pos];
        }
        lambda -= best_t;
        just_dropped = None;

        match event {
            Event::Done => {
                break;
            }
            Event::Exit(pos) => {
                let k = state.atoms.remove(pos);
                let sign = state.signs.remove(pos);
                state.member[k] = false;
                c[k] = 0.0;
                just_dropped = Some((k, sign));
                blocked.iter_mut().for_each(|b| *b = false);
                state.chol = ActiveCholesky::rebuild(gram, &state.atoms).ok_or_else(|| Error::Numerical {
                    message: "active gram block became singular".into(),
                    residual: 0.0,
                })?;
                refresh_correlations(gram, dty, &c, &state.atoms, &mut corr);
            }
            Event::Enter(j) => {
                refresh_correlations(gram, dty, &c, &state.atoms, &mut corr);
                if !state.enter(gram, j, &corr) {
                    blocked[j] = true;
                }
            }
        }

        breakpoints += 1;
        if breakpoints > max_breakpoints {
            let residual = kkt_from_correlations(&corr, &c, lambda.max(gamma), excluded);
            return Err(Error::PathLimit {
                breakpoints: max_breakpoints,
                residual,
                best: c,
            });
        }
    }

    // land exactly on γ: solve the active system once more from the
    // refreshed correlations to wash out accumulated step error
    if !state.atoms.is_empty() {
        let rhs: Vec<f64> = state
            .atoms
            .iter()
            .zip(&state.signs)
            .map(|(&k, &s)| dty[k] - gamma * s)
            .collect();
        let sol = state.chol.solve(&rhs);
        let consistent = sol.iter().zip(&state.signs).all(|(&v, &s)| v == 0.0 || v.signum() == s);
        if consistent {
            for (&k, &v) in state.atoms.iter().zip(&sol) {
                c[k] = v;
            }
        }
    }
    refresh_correlations(gram, dty, &c, &state.atoms, &mut corr);
    let residual = kkt_from_correlations(&corr, &c, gamma, excluded);
    if residual > delta {
        return Err(Error::Numerical {
            message: "homotopy path ended outside the KKT tolerance".into(),
            residual,
        });
    }
    Ok(c)
}

fn refresh_correlations(gram: &Matrix, dty: &[f64], c: &[f64], active: &[usize], corr: &mut [f64]) {
    for (j, out) in corr.iter_mut().enumerate() {
        let row = gram.row(j);
        *out = dty[j] - active.iter().map(|&k| row[k] * c[k]).sum::<f64>();
    }
}

/// Cyclic coordinate descent with exact soft-threshold updates. Stops when
/// no coordinate moves by more than `tol` in a sweep.
pub fn solve_lasso_cd(problem: &LassoProblem<'_>, max_iters: usize, tol: f64) -> Result<SparseCode> {
    problem.validate()?;
    let d = problem.dictionary;
    let p = d.cols();
    let columns: Vec<Vec<f64>> = (0..p).map(|j| d.column(j)).collect();
    let sq_norms: Vec<f64> = columns.iter().map(|col| dot(col, col)).collect();
    let mut c = vec![0.0; p];
    let mut r = problem.target.to_vec();
    for _ in 0..max_iters {
        let mut max_change = 0.0f64;
        for j in 0..p {
            if Some(j) == problem.excluded || sq_norms[j] == 0.0 {
                continue;
            }
            let col = &columns[j];
            let rho = dot(col, &r) + sq_norms[j] * c[j];
            let new = soft_threshold(rho, problem.gamma) / sq_norms[j];
            let diff = new - c[j];
            if diff != 0.0 {
                r.iter_mut().zip(col).for_each(|(ri, &a)| *ri -= diff * a);
                c[j] = new;
                max_change = max_change.max(diff.abs());
            }
        }
        if max_change <= tol {
            let objective = problem.objective(&c);
            return Ok(SparseCode::new(c, objective));
        }
    }
    Err(Error::Numerical {
        message: format!("coordinate descent did not converge in {max_iters} sweeps"),
        residual: kkt_residual(problem, &c),
    })
}

/// Self-expressive coefficients: `n × n` matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    c: Matrix,
}

impl CoefficientMatrix {
    pub fn zeros(n: usize) -> Self {
        CoefficientMatrix { c: Matrix::zeros(n, n) }
    }

    /// Rejects non-square input or a nonzero diagonal.
    pub fn from_matrix(c: Matrix) -> Result<Self> {
        if !c.is_square() {
            return Err(Error::invalid("coefficient matrix must be square"));
        }
        if (0..c.rows()).any(|i| c[(i, i)] != 0.0) {
            return Err(Error::invalid("coefficient matrix must have a zero diagonal"));
        }
        Ok(CoefficientMatrix { c })
    }

    pub fn n(&self) -> usize {
        self.c.rows()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.c
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        self.c.column(i)
    }

    /// Replaces sample `i`'s code. Entry `i` is forced to zero.
    pub fn set_column(&mut self, i: usize, code: &[f64]) {
        self.c.set_column(i, code);
        self.c[(i, i)] = 0.0;
    }

    pub fn l1_norm(&self) -> f64 {
        l1(self.c.as_slice())
    }
}

/// Solves the lasso for one column of `h` against all others, reusing a
/// precomputed Gram matrix `hᵀh`.
pub(crate) fn solve_column(gram: &Matrix, i: usize, gamma: f64, delta: f64) -> Result<Vec<f64>> {
    let dty = gram.column(i);
    homotopy_path(gram, &dty, gamma, Some(i), delta)
}

/// Codes every column of `h` (`d × n`) from the remaining columns.
pub fn self_expression(h: &Matrix, gamma: f64, delta: f64) -> Result<CoefficientMatrix> {
    let n = h.cols();
    if n < 2 {
        return Err(Error::invalid("self-expression needs at least two samples"));
    }
    if !(gamma > 0.0) {
        return Err(Error::invalid(format!("gamma must be positive, got {gamma}")));
    }
    let gram = h.gram();
    let mut c = CoefficientMatrix::zeros(n);
    for i in 0..n {
        let code = solve_column(&gram, i, gamma, delta).map_err(|e| e.context(format!("column {i}")))?;
        c.set_column(i, &code);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Matrix {
        Matrix::from_vec(r, c, (0..r * c).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
    }

    fn orthonormal(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
        let mut cols: Vec<Vec<f64>> = Vec::new();
        while cols.len() < n {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            for _ in 0..2 {
                for q in &cols {
                    let p = dot(&v, q);
                    v.iter_mut().zip(q).for_each(|(a, b)| *a -= p * b);
                }
            }
            let norm = dot(&v, &v).sqrt();
            v.iter_mut().for_each(|a| *a /= norm);
            cols.push(v);
        }
        Matrix::from_columns(&cols).unwrap()
    }

    #[test]
    fn large_gamma_gives_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = uniform(&mut rng, 5, 8);
        let y: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
        let bound = d.tr_matvec(&y).unwrap().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let prob = LassoProblem {
            dictionary: &d,
            target: &y,
            gamma: bound,
            excluded: None,
        };
        let code = solve_lasso_homotopy(&prob, DEFAULT_DELTA).unwrap();
        assert!(code.coefficients.iter().all(|&v| v == 0.0));
        assert!(code.support.is_empty());
        assert_eq!(kkt_residual(&prob, &code.coefficients), 0.0);
        assert!((code.objective - 0.5 * dot(&y, &y)).abs() <= 1e-15);
    }

    #[test]
    fn orthonormal_design_is_soft_threshold() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let d = orthonormal(&mut rng, 6);
            let y: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            let gamma = 0.15;
            let prob = LassoProblem {
                dictionary: &d,
                target: &y,
                gamma,
                excluded: None,
            };
            let code = solve_lasso_homotopy(&prob, DEFAULT_DELTA).unwrap();
            let dty = d.tr_matvec(&y).unwrap();
            for (c, v) in code.coefficients.iter().zip(&dty) {
                assert!((c - soft_threshold(*v, gamma)).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn single_atom_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut d = uniform(&mut rng, 6, 5);
        for j in 0..5 {
            let col = d.column(j);
            let n = dot(&col, &col).sqrt();
            d.set_column(j, &col.iter().map(|v| v / n).collect::<Vec<_>>());
        }
        let y = d.column(2);
        let prob = LassoProblem {
            dictionary: &d,
            target: &y,
            gamma: 0.01,
            excluded: None,
        };
        let code = solve_lasso_homotopy(&prob, DEFAULT_DELTA).unwrap();
        assert_eq!(code.support, vec![2]);
        assert!((code.coefficients[2] - 0.99).abs() <= 1e-8);
    }

    #[test]
    fn excluded_atom_stays_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let d = uniform(&mut rng, 6, 9);
        let y = d.column(4);
        let prob = LassoProblem {
            dictionary: &d,
            target: &y,
            gamma: 0.01,
            excluded: Some(4),
        };
        let code = solve_lasso_homotopy(&prob, DEFAULT_DELTA).unwrap();
        assert_eq!(code.coefficients[4], 0.0);
        assert!(kkt_residual(&prob, &code.coefficients) <= DEFAULT_DELTA);
    }

    #[test]
    fn rejects_bad_problems() {
        let d = Matrix::zeros(3, 4);
        let y = [0.0; 3];
        let bad_gamma = LassoProblem {
            dictionary: &d,
            target: &y,
            gamma: 0.0,
            excluded: None,
        };
        assert!(solve_lasso_homotopy(&bad_gamma, 1e-4).is_err());
        let bad_idx = LassoProblem {
            dictionary: &d,
            target: &y,
            gamma: 0.1,
            excluded: Some(4),
        };
        assert!(solve_lasso_homotopy(&bad_idx, 1e-4).is_err());
        let short = [0.0; 2];
        let bad_len = LassoProblem {
            dictionary: &d,
            target: &short,
            gamma: 0.1,
            excluded: None,
        };
        assert!(solve_lasso_cd(&bad_len, 10, 1e-8).is_err());
    }

    #[test]
    fn cd_scalar_problem() {
        let d = Matrix::from_rows(&[[2.0]]).unwrap();
        let y = [3.0];
        let prob = LassoProblem {
            dictionary: &d,
            target: &y,
            gamma: 1.0,
            excluded: None,
        };
        let code = solve_lasso_cd(&prob, 2, 1e-12).unwrap();
        // argmin ½(3 − 2c)² + |c| → c = (6 − 1)/4
        assert!((code.coefficients[0] - 1.25).abs() <= 1e-15);
    }

    #[test]
    fn cd_tiny_gamma_approaches_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut d = orthonormal(&mut rng, 4);
        // mild non-orthogonality keeps it well conditioned
        d[(0, 1)] += 0.2;
        d[(2, 3)] -= 0.1;
        let x_true = [0.5, -0.3, 0.8, 0.1];
        let y = d.matvec(&x_true).unwrap();
        let prob = LassoProblem {
            dictionary: &d,
            target: &y,
            gamma: 1e-8,
            excluded: None,
        };
        let code = solve_lasso_cd(&prob, 100_000, 1e-14).unwrap();
        let resid: Vec<f64> = prob.residual(&code.coefficients);
        assert!(dot(&resid, &resid).sqrt() <= 1e-4);
        for (c, x) in code.coefficients.iter().zip(x_true) {
            assert!((c - x).abs() <= 1e-4);
        }
    }

    #[test]
    fn kkt_detects_perturbation() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let d = uniform(&mut rng, 8, 12);
        let y: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
        let prob = LassoProblem {
            dictionary: &d,
            target: &y,
            gamma: 0.05,
            excluded: None,
        };
        let code = solve_lasso_homotopy(&prob, DEFAULT_DELTA).unwrap();
        assert!(kkt_residual(&prob, &code.coefficients) <= DEFAULT_DELTA);
        let mut bumped = code.coefficients.clone();
        bumped[code.support[0]] += 0.1;
        assert!(kkt_residual(&prob, &bumped) > DEFAULT_DELTA);
    }

    #[test]
    fn self_expression_two_identical_columns() {
        let h = Matrix::from_columns(&[vec![0.6, 0.8], vec![0.6, 0.8]]).unwrap();
        let gamma = 0.01;
        let c = self_expression(&h, gamma, DEFAULT_DELTA).unwrap();
        let m = c.as_matrix();
        assert_eq!(m[(0, 0)], 0.0);
        assert_eq!(m[(1, 1)], 0.0);
        assert!((m[(0, 1)] - (1.0 - gamma)).abs() <= 1e-12);
        assert!((m[(1, 0)] - (1.0 - gamma)).abs() <= 1e-12);
    }

    #[test]
    fn self_expression_zero_above_threshold() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = uniform(&mut rng, 5, 10);
        let g = h.gram();
        let mut bound = 0.0f64;
        for i in 0..10 {
            for j in 0..10 {
                if i != j {
                    bound = bound.max(g[(i, j)].abs());
                }
            }
        }
        let c = self_expression(&h, bound, DEFAULT_DELTA).unwrap();
        assert!(c.as_matrix().as_slice().iter().all(|&v| v == 0.0));
        let c = self_expression(&h, 0.05, DEFAULT_DELTA).unwrap();
        assert!((0..10).all(|i| c.as_matrix()[(i, i)] == 0.0));
        assert!(self_expression(&Matrix::zeros(3, 1), 0.1, 1e-4).is_err());
    }

    #[test]
    fn coefficient_matrix_rejects_diagonal() {
        assert!(CoefficientMatrix::from_matrix(Matrix::identity(2)).is_err());
        assert!(CoefficientMatrix::from_matrix(Matrix::zeros(2, 3)).is_err());
        let mut c = CoefficientMatrix::zeros(3);
        c.set_column(1, &[0.5, 2.0, -0.5]);
        assert_eq!(c.column(1), vec![0.5, 0.0, -0.5]);
        assert_eq!(c.l1_norm(), 1.0);
    }
}
