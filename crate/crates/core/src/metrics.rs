//! Clustering quality against ground truth: accuracy under the optimal
//! label matching, NMI, ARI and pairwise F-score.

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Counts `table[i][j]` of samples with predicted id `i` and true id `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Contingency {
    pub table: Vec<Vec<usize>>,
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
    pub n: usize,
}

impl Contingency {
    pub fn new(pred: &[usize], truth: &[usize]) -> Result<Self> {
        check_lengths(pred, truth, 1)?;
        let rows = pred.iter().max().map_or(0, |m| m + 1);
        let cols = truth.iter().max().map_or(0, |m| m + 1);
        let mut table = vec![vec![0usize; cols]; rows];
        for (&p, &t) in pred.iter().zip(truth) {
            table[p][t] += 1;
        }
        // drop ids that never occur so gaps in the id range are harmless
        table.retain(|row| row.iter().any(|&c| c > 0));
        let used: Vec<usize> = (0..cols).filter(|&j| table.iter().any(|r| r[j] > 0)).collect();
        let table: Vec<Vec<usize>> = table
            .into_iter()
            .map(|r| used.iter().map(|&j| r[j]).collect())
            .collect();
        let row_sums = table.iter().map(|r| r.iter().sum()).collect();
        let col_sums = (0..used.len()).map(|j| table.iter().map(|r| r[j]).sum()).collect();
        Ok(Contingency {
            table,
            row_sums,
            col_sums,
            n: pred.len(),
        })
    }
}

fn check_lengths(pred: &[usize], truth: &[usize], min: usize) -> Result<()> {
    if pred.len() != truth.len() {
        return Err(Error::invalid(format!(
            "prediction has {} labels, truth has {}",
            pred.len(),
            truth.len()
        )));
    }
    if pred.len() < min {
        return Err(Error::invalid(format!("need at least {min} labels")));
    }
    Ok(())
}

/// Minimum-cost assignment (Kuhn–Munkres with potentials). Rectangular
/// inputs are padded to square with zero cost; the returned pairs cover
/// `min(r, c)` real cells, sorted by row.
pub fn hungarian(cost: &Matrix) -> Vec<(usize, usize)> {
    let (r, c) = cost.shape();
    let n = r.max(c);
    if n == 0 {
        return Vec::new();
    }
    let at = |i: usize, j: usize| if i < r && j < c { cost[(i, j)] } else { 0.0 };

    // 1-based arrays; index 0 is the virtual start column
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = at(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = (1..=n)
        .filter(|&j| owner[j] != 0 && owner[j] - 1 < r && j - 1 < c)
        .map(|j| (owner[j] - 1, j - 1))
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Fraction of samples matched under the best one-to-one relabeling.
pub fn accuracy(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let cont = Contingency::new(pred, truth)?;
    let rows = cont.table.len();
    let cols = cont.col_sums.len();
    let mut cost = Matrix::zeros(rows, cols);
    for (i, row) in cont.table.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            cost[(i, j)] = -(v as f64);
        }
    }
    let matched: usize = hungarian(&cost).iter().map(|&(i, j)| cont.table[i][j]).sum();
    Ok(matched as f64 / cont.n as f64)
}

fn entropy(counts: &[usize], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// `I(U;V) / √(H(U)·H(V))`, natural logarithms. Two single-cluster
/// partitions score 1; a single-cluster partition against a split one
/// scores 0.
pub fn nmi(pred: &[usize], truth: &[usize]) -> Result<f64> {
    let cont = Contingency::new(pred, truth)?;
    let n = cont.n as f64;
    let hu = entropy(&cont.row_sums, n);
    let hv = entropy(&cont.col_sums, n);
    if hu == 0.0 && hv == 0.0 {
        return Ok(1.0);
    }
    if hu == 0.0 || hv == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for (i, row) in cont.table.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = c as f64;
            mi += c / n * (c * n / (cont.row_sums[i] as f64 * cont.col_sums[j] as f64)).ln();
        }
    }
    Ok((mi / (hu * hv).sqrt()).clamp(0.0, 1.0))
}

fn pairs(x: usize) -> f64 {
    let x = x as f64;
    x * (x - 1.0) / 2.0
}

/// Adjusted Rand index. When the index is undefined (both partitions
/// trivial in the same way) returns 1 for identical partitions, else 0.
pub fn ari(pred: &[usize], truth: &[usize]) -> Result<f64> {
    check_lengths(pred, truth, 2)?;
    let cont = Contingency::new(pred, truth)?;
    let index: f64 = cont.table.iter().flatten().map(|&c| pairs(c)).sum();
    let a: f64 = cont.row_sums.iter().map(|&c| pairs(c)).sum();
    let b: f64 = cont.col_sums.iter().map(|&c| pairs(c)).sum();
    let expected = a * b / pairs(cont.n);
    let max = 0.5 * (a + b);
    if max == expected {
        let identical = cont.table.iter().all(|r| r.iter().filter(|&&c| c > 0).count() == 1)
            && cont.row_sums.len() == cont.col_sums.len();
        return Ok(if identical { 1.0 } else { 0.0 });
    }
    Ok((index - expected) / (max - expected))
}

/// Pair-counting F-measure over same-cluster pairs.
pub fn pairwise_fscore(pred: &[usize], truth: &[usize]) -> Result<f64> {
    check_lengths(pred, truth, 2)?;
    let cont = Contingency::new(pred, truth)?;
    let both: f64 = cont.table.iter().flatten().map(|&c| pairs(c)).sum();
    let same_pred: f64 = cont.row_sums.iter().map(|&c| pairs(c)).sum();
    let same_truth: f64 = cont.col_sums.iter().map(|&c| pairs(c)).sum();
    let precision = if same_pred > 0.0 { both / same_pred } else { 1.0 };
    let recall = if same_truth > 0.0 { both / same_truth } else { 1.0 };
    if precision + recall == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * precision * recall / (precision + recall))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub acc: f64,
    pub nmi: f64,
    pub ari: f64,
    pub fscore: f64,
}

pub fn evaluate(pred: &[usize], truth: &[usize]) -> Result<Scores> {
    Ok(Scores {
        acc: accuracy(pred, truth)?,
        nmi: nmi(pred, truth)?,
        ari: ari(pred, truth)?,
        fscore: pairwise_fscore(pred, truth)?,
    })
}
