//! Small dense helpers: vector norms, a cyclic Jacobi symmetric eigensolver
//! and an LU solve with partial pivoting.

use crate::tensor::Matrix;

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, c| acc.max(c.abs()))
}

/// Returns `v / ‖v‖₂`, or `None` for the zero vector.
pub fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let norm = norm2(v);
    (norm > 0.0 && norm.is_finite()).then(|| v.iter().map(|c| c / norm).collect())
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is at most
/// `1e-12·‖A‖_F` (or exactly zero for the zero matrix).
pub fn jacobi_eigen(a: &Matrix) -> SymmetricEigen {
    let size = a.rows();
    assert_eq!(size, a.cols(), "jacobi_eigen needs a square matrix");
    let mut w: Vec<Vec<f64>> = (0..size)
        .map(|r| (0..size).map(|c| a.get(r, c)).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..size)
        .map(|r| (0..size).map(|c| if r == c { 1.0 } else { 0.0 }).collect())
        .collect();
    let target = 1e-12 * a.frobenius_norm();
    let off = |w: &Vec<Vec<f64>>| {
        let mut s = 0.0;
        for r in 0..size {
            for c in 0..size {
                if r != c {
                    s += w[r][c] * w[r][c];
                }
            }
        }
        s.sqrt()
    };
    for _sweep in 0..100 {
        if off(&w) <= target {
            break;
        }
        for p in 0..size {
            for q in (p + 1)..size {
                let apq = w[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (w[q][q] - w[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..size {
                    let wkp = w[k][p];
                    let wkq = w[k][q];
                    w[k][p] = c * wkp - s * wkq;
                    w[k][q] = s * wkp + c * wkq;
                }
                for k in 0..size {
                    let wpk = w[p][k];
                    let wqk = w[q][k];
                    w[p][k] = c * wpk - s * wqk;
                    w[q][k] = s * wpk + c * wqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&i, &j| w[i][i].total_cmp(&w[j][j]));
    SymmetricEigen {
        values: order.iter().map(|&k| w[k][k]).collect(),
        vectors: order
            .iter()
            .map(|&k| (0..size).map(|r| v[r][k]).collect())
            .collect(),
    }
}

/// Solves `a·x = b` for a square system stored as rows. Returns `None` when a
/// pivot is below `1e-300` in magnitude.
pub fn lu_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let size = b.len();
    for col in 0..size {
        let pivot = (col..size).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in (col + 1)..size {
            let factor = a[r][col] / a[col][col];
            if factor != 0.0 {
                for c in col..size {
                    a[r][c] -= factor * a[col][c];
                }
                b[r] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; size];
    for r in (0..size).rev() {
        let s: f64 = ((r + 1)..size).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
