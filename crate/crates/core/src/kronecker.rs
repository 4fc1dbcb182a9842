//! Kronecker-structured tensors `a[i,j,k,l] = b[i,k]·c[j,l]` built from
//! symmetric factors, and their eigenpairs.
//!
//! For such a tensor `f(x, y) = (xᵀBx)(yᵀCy)`, so every pair of nonzero
//! eigenpairs `(α, x)` of `B` and `(β, y)` of `C` gives an M-eigenpair
//! `(αβ, x, y)`, and every nonzero M-eigenpair arises this way.

use serde::{Deserialize, Serialize};

use crate::error::{BiquadError, Result};
use crate::linalg::jacobi_eigen;
use crate::tensor::{BiquadraticTensor, Matrix};

/// Relative threshold below which a factor eigenvalue counts as zero.
pub const NONZERO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KroneckerFactors {
    pub b: Matrix,
    pub c: Matrix,
}

impl KroneckerFactors {
    pub fn new(b: Matrix, c: Matrix) -> Result<Self> {
        require_symmetric(&b)?;
        require_symmetric(&c)?;
        Ok(Self { b, c })
    }

    pub fn build(&self) -> BiquadraticTensor {
        kron_build(&self.b, &self.c).expect("factors validated on construction")
    }
}

fn require_symmetric(mat: &Matrix) -> Result<()> {
    if mat.rows() != mat.cols() {
        return Err(BiquadError::DimensionMismatch(format!(
            "factor must be square, got {} × {}",
            mat.rows(),
            mat.cols()
        )));
    }
    match mat.first_asymmetry() {
        Some((r, c)) => Err(BiquadError::NonSymmetricFactor(r, c)),
        None => Ok(()),
    }
}

/// Builds `a[i,j,k,l] = b[i,k]·c[j,l]`.
pub fn kron_build(b: &Matrix, c: &Matrix) -> Result<BiquadraticTensor> {
    require_symmetric(b)?;
    require_symmetric(c)?;
    BiquadraticTensor::from_fn(b.rows(), c.rows(), |i, j, k, l| b.get(i, k) * c.get(j, l))
}

/// Largest defect `|¼(a_ijkl + a_kjil + a_ilkj + a_klij) − b_ik c_jl|`.
pub fn kron_defect(t: &BiquadraticTensor, b: &Matrix, c: &Matrix) -> Result<f64> {
    let (m, n) = (t.m(), t.n());
    if b.rows() != m || b.cols() != m || c.rows() != n || c.cols() != n {
        return Err(BiquadError::DimensionMismatch(format!(
            "tensor is {m} × {n} × {m} × {n} but factors are {} × {} and {} × {}",
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    let mut worst = 0.0_f64;
    for i in 0..m {
        for j in 0..n {
            for k in 0..m {
                for l in 0..n {
                    let sym = 0.25 * (t.at(i, j, k, l) + t.at(k, j, i, l) + t.at(i, l, k, j) + t.at(k, l, i, j));
                    worst = worst.max((sym - b.get(i, k) * c.get(j, l)).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Whether the symmetrized tensor matches `b[i,k]·c[j,l]` within `tol`.
pub fn kron_check(t: &BiquadraticTensor, b: &Matrix, c: &Matrix, tol: f64) -> Result<bool> {
    Ok(kron_defect(t, b, c)? <= tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductPair {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// All products of nonzero eigenpairs of `B` and `C`, by descending `λ`.
pub fn factor_eigenpairs(b: &Matrix, c: &Matrix) -> Result<Vec<ProductPair>> {
    require_symmetric(b)?;
    require_symmetric(c)?;
    let eb = jacobi_eigen(b);
    let ec = jacobi_eigen(c);
    let (tb, tc) = (NONZERO_TOL * b.frobenius_norm(), NONZERO_TOL * c.frobenius_norm());
    let mut out = Vec::new();
    for (alpha, x) in eb.values.iter().zip(&eb.vectors) {
        if alpha.abs() <= tb {
            continue;
        }
        for (beta, y) in ec.values.iter().zip(&ec.vectors) {
            if beta.abs() <= tc {
                continue;
            }
            out.push(ProductPair {
                lambda: alpha * beta,
                alpha: *alpha,
                beta: *beta,
                x: x.clone(),
                y: y.clone(),
            });
        }
    }
    out.sort_by(|p, q| q.lambda.total_cmp(&p.lambda));
    Ok(out)
}
