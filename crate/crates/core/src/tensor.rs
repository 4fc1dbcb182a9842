//! Dense biquadratic tensors.
//!
//! A biquadratic tensor has shape `m × n × m × n` and entries
//! `a[i1, j1, i2, j2]`. Indices are 0-based everywhere in this crate
//! (the usual mathematical notation is 1-based; subtract one). Storage is
//! row-major over `(i1, j1, i2, j2)`:
//!
//! ```text
//! flat = ((i1 * n + j1) * m + i2) * n + j2
//! ```
//!
//! Tensors are immutable once constructed. No symmetrization is applied on
//! construction: the eigen-equations are defined for general tensors, so the
//! entries are stored exactly as given.

use serde::{Deserialize, Serialize};

use crate::error::{BiquadError, Result};

/// Symmetry class of a biquadratic tensor, strongest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryClass {
    /// No symmetry beyond the shape.
    General,
    /// `a[i1,j1,i2,j2] = a[i2,j2,i1,j1]`.
    WeaklySymmetric,
    /// Weakly symmetric and additionally invariant under swapping only the
    /// `i` indices or only the `j` indices.
    Symmetric,
}

/// Dense real `m × n × m × n` tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct BiquadraticTensor {
    m: usize,
    n: usize,
    entries: Vec<f64>,
}

impl BiquadraticTensor {
    /// Builds a tensor from a flat row-major entry array of length `m²n²`.
    pub fn new_dense(m: usize, n: usize, entries: Vec<f64>) -> Result<Self> {
        check_dims(m, n)?;
        let expected = m * m * n * n;
        if entries.len() != expected {
            return Err(BiquadError::DimensionMismatch(format!(
                "expected {expected} entries for m={m}, n={n}, got {}",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            return Err(BiquadError::NonFiniteEntry(pos));
        }
        Ok(Self { m, n, entries })
    }

    /// The all-zero tensor.
    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        check_dims(m, n)?;
        Ok(Self {
            m,
            n,
            entries: vec![0.0; m * m * n * n],
        })
    }

    /// Builds a tensor from `(i1, j1, i2, j2, value)` coordinates; unlisted
    /// entries are zero and a repeated coordinate is an error.
    pub fn from_coo(
        m: usize,
        n: usize,
        coords: &[(usize, usize, usize, usize, f64)],
    ) -> Result<Self> {
        let mut t = Self::zeros(m, n)?;
        let mut seen = vec![false; t.entries.len()];
        for &(i1, j1, i2, j2, v) in coords {
            let k = t.checked_index(i1, j1, i2, j2)?;
            if seen[k] {
                return Err(BiquadError::DuplicateEntry(i1, j1, i2, j2));
            }
            if !v.is_finite() {
                return Err(BiquadError::NonFiniteEntry(k));
            }
            seen[k] = true;
            t.entries[k] = v;
        }
        Ok(t)
    }

    /// Builds a tensor by evaluating `f(i1, j1, i2, j2)` at every index.
    pub fn from_fn(
        m: usize,
        n: usize,
        mut f: impl FnMut(usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        check_dims(m, n)?;
        let mut entries = Vec::with_capacity(m * m * n * n);
        for i1 in 0..m {
            for j1 in 0..n {
                for i2 in 0..m {
                    for j2 in 0..n {
                        entries.push(f(i1, j1, i2, j2));
                    }
                }
            }
        }
        Self::new_dense(m, n, entries)
    }

    /// The identity tensor `δ(i1,i2)·δ(j1,j2)`.
    pub fn identity(m: usize, n: usize) -> Result<Self> {
        Self::from_fn(m, n, |i1, j1, i2, j2| {
            if i1 == i2 && j1 == j2 {
                1.0
            } else {
                0.0
            }
        })
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Flat row-major entries.
    #[inline]
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub(crate) fn index(&self, i1: usize, j1: usize, i2: usize, j2: usize) -> usize {
        ((i1 * self.n + j1) * self.m + i2) * self.n + j2
    }

    fn checked_index(&self, i1: usize, j1: usize, i2: usize, j2: usize) -> Result<usize> {
        if i1 >= self.m || i2 >= self.m || j1 >= self.n || j2 >= self.n {
            return Err(BiquadError::IndexOutOfRange(format!(
                "({i1}, {j1}, {i2}, {j2}) for shape {m}x{n}x{m}x{n}",
                m = self.m,
                n = self.n
            )));
        }
        Ok(self.index(i1, j1, i2, j2))
    }

    /// Entry `a[i1, j1, i2, j2]`.
    pub fn entry(&self, i1: usize, j1: usize, i2: usize, j2: usize) -> Result<f64> {
        Ok(self.entries[self.checked_index(i1, j1, i2, j2)?])
    }

    /// Unchecked accessor for hot loops; panics on out-of-range indices.
    #[inline]
    pub fn at(&self, i1: usize, j1: usize, i2: usize, j2: usize) -> f64 {
        self.entries[self.index(i1, j1, i2, j2)]
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// True iff every entry is `>= 0` exactly.
    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|&v| v >= 0.0)
    }

    /// Errors with the first negative entry, if any.
    pub fn require_nonnegative(&self) -> Result<()> {
        match self.entries.iter().position(|&v| v < 0.0) {
            None => Ok(()),
            Some(k) => {
                let (i1, j1, i2, j2) = self.unflatten(k);
                Err(BiquadError::NotNonnegative(i1, j1, i2, j2))
            }
        }
    }

    pub(crate) fn unflatten(&self, k: usize) -> (usize, usize, usize, usize) {
        let j2 = k % self.n;
        let r = k / self.n;
        let i2 = r % self.m;
        let r = r / self.m;
        let j1 = r % self.n;
        let i1 = r / self.n;
        (i1, j1, i2, j2)
    }

    /// Strongest symmetry class holding with entrywise tolerance `tol`.
    pub fn classify_symmetry(&self, tol: f64) -> SymmetryClass {
        let (m, n) = (self.m, self.n);
        let close = |a: f64, b: f64| (a - b).abs() <= tol;
        let mut weak = true;
        let mut full = true;
        for i1 in 0..m {
            for j1 in 0..n {
                for i2 in 0..m {
                    for j2 in 0..n {
                        let a = self.at(i1, j1, i2, j2);
                        if !close(a, self.at(i2, j2, i1, j1)) {
                            weak = false;
                        }
                        if !close(a, self.at(i2, j1, i1, j2)) || !close(a, self.at(i1, j2, i2, j1))
                        {
                            full = false;
                        }
                        if !weak {
                            return SymmetryClass::General;
                        }
                    }
                }
            }
        }
        if full {
            SymmetryClass::Symmetric
        } else {
            SymmetryClass::WeaklySymmetric
        }
    }

    /// The symmetric `m × m` slice `½(A(:,j,:,j) + A(:,j,:,j)ᵀ)`.
    pub fn slice_x(&self, j: usize) -> Result<Matrix> {
        if j >= self.n {
            return Err(BiquadError::IndexOutOfRange(format!(
                "slice_x column {j} with n={}",
                self.n
            )));
        }
        let m = self.m;
        let mut out = Matrix::zeros(m, m);
        for i1 in 0..m {
            for i2 in 0..m {
                out.set(i1, i2, 0.5 * (self.at(i1, j, i2, j) + self.at(i2, j, i1, j)));
            }
        }
        Ok(out)
    }

    /// The symmetric `n × n` slice `½(A(i,:,i,:) + A(i,:,i,:)ᵀ)`.
    pub fn slice_y(&self, i: usize) -> Result<Matrix> {
        if i >= self.m {
            return Err(BiquadError::IndexOutOfRange(format!(
                "slice_y row {i} with m={}",
                self.m
            )));
        }
        let n = self.n;
        let mut out = Matrix::zeros(n, n);
        for j1 in 0..n {
            for j2 in 0..n {
                out.set(j1, j2, 0.5 * (self.at(i, j1, i, j2) + self.at(i, j2, i, j1)));
            }
        }
        Ok(out)
    }
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m < 2 || n < 2 {
        return Err(BiquadError::DimensionMismatch(format!(
            "m and n must be at least 2, got m={m}, n={n}"
        )));
    }
    Ok(())
}

/// Small dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    #[serde(rename = "dense")]
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut out = Self::zeros(size, size);
        for i in 0..size {
            out.set(i, i, 1.0);
        }
        out
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(BiquadError::DimensionMismatch(format!(
                "matrix {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(BiquadError::NonFiniteEntry(pos));
        }
        Ok(Self { rows, cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Exact symmetry check.
    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    pub(crate) fn first_asymmetry(&self) -> Option<(usize, usize)> {
        if self.rows != self.cols {
            return Some((0, 0));
        }
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                if self.get(r, c) != self.get(c, r) {
                    return Some((r, c));
                }
            }
        }
        None
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn zero_tensor_is_zero_everywhere() {
        let t = BiquadraticTensor::new_dense(2, 2, vec![0.0; 16]).unwrap();
        assert!(t.entries().iter().all(|&v| v == 0.0));
        assert_eq!(t.entry(1, 1, 1, 1).unwrap(), 0.0);
    }

    #[test]
    fn wrong_length_is_rejected() {
        let err = BiquadraticTensor::new_dense(2, 3, vec![0.0; 25]).unwrap_err();
        assert!(matches!(err, BiquadError::DimensionMismatch(_)));
        assert!(err.to_string().contains("36"));
    }

    #[test]
    fn small_dims_and_nan_rejected() {
        assert!(BiquadraticTensor::new_dense(1, 2, vec![0.0; 4]).is_err());
        let mut e = vec![0.0; 16];
        e[5] = f64::NAN;
        assert_eq!(
            BiquadraticTensor::new_dense(2, 2, e).unwrap_err(),
            BiquadError::NonFiniteEntry(5)
        );
    }

    #[test]
    fn linearization_matches_layout() {
        let t = BiquadraticTensor::from_fn(2, 3, |i1, j1, i2, j2| {
            (1000 * i1 + 100 * j1 + 10 * i2 + j2) as f64
        })
        .unwrap();
        assert_eq!(t.entries()[((1 * 3 + 2) * 2 + 0) * 3 + 1], 1201.0);
        assert_eq!(t.entry(1, 2, 0, 1).unwrap(), 1201.0);
        for k in 0..t.entries().len() {
            let (a, b, c, d) = t.unflatten(k);
            assert_eq!(t.index(a, b, c, d), k);
        }
        assert!(matches!(
            t.entry(2, 0, 0, 0),
            Err(BiquadError::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn catalog_entries() {
        let b = catalog::multiple_mplus();
        assert_eq!(b.entry(0, 0, 0, 0).unwrap(), 4.0);
        let a = catalog::mixed_spectrum();
        assert_eq!(a.entry(0, 0, 0, 0).unwrap(), 1.0);
        assert_eq!(a.entry(1, 0, 1, 0).unwrap(), 2.0);
    }

    #[test]
    fn symmetry_classes() {
        assert_eq!(
            catalog::multiple_mplus().classify_symmetry(0.0),
            SymmetryClass::Symmetric
        );
        assert_eq!(
            catalog::mixed_spectrum().classify_symmetry(0.0),
            SymmetryClass::Symmetric
        );
        let t = BiquadraticTensor::from_coo(2, 2, &[(0, 0, 0, 1, 1.0)]).unwrap();
        assert_eq!(t.classify_symmetry(0.0), SymmetryClass::General);
        // weak partner present but the i-swap partner differs
        let w = BiquadraticTensor::from_coo(2, 2, &[(0, 0, 1, 1, 1.0), (1, 1, 0, 0, 1.0)]).unwrap();
        assert_eq!(w.classify_symmetry(0.0), SymmetryClass::WeaklySymmetric);
        assert_eq!(w.classify_symmetry(1.0), SymmetryClass::Symmetric);
    }

    #[test]
    fn nonnegativity_is_strict() {
        assert!(catalog::multiple_mplus().is_nonnegative());
        assert!(BiquadraticTensor::zeros(2, 2).unwrap().is_nonnegative());
        let t = BiquadraticTensor::from_coo(2, 2, &[(1, 0, 1, 1, -1e-12)]).unwrap();
        assert!(!t.is_nonnegative());
        assert_eq!(
            t.require_nonnegative().unwrap_err(),
            BiquadError::NotNonnegative(1, 0, 1, 1)
        );
    }

    #[test]
    fn identity_structure() {
        let id = BiquadraticTensor::identity(2, 2).unwrap();
        let ones: Vec<usize> = (0..16).filter(|&k| id.entries()[k] == 1.0).collect();
        let expect: Vec<usize> = [(0, 0, 0, 0), (0, 1, 0, 1), (1, 0, 1, 0), (1, 1, 1, 1)]
            .iter()
            .map(|&(a, b, c, d)| id.index(a, b, c, d))
            .collect();
        assert_eq!(ones, expect);
        assert_eq!(id.entries().iter().sum::<f64>(), 4.0);
        for m in 2..=6 {
            for n in 2..=6 {
                let id = BiquadraticTensor::identity(m, n).unwrap();
                assert_eq!(id.classify_symmetry(0.0), SymmetryClass::Symmetric);
            }
        }
    }

    #[test]
    fn identity_form_is_product_of_norms() {
        // direct 4-index summation
        let id = BiquadraticTensor::identity(2, 3).unwrap();
        let x = [0.6, 0.8];
        let y = [1.0 / 3.0_f64.sqrt(); 3];
        let mut f = 0.0;
        for i1 in 0..2 {
            for j1 in 0..3 {
                for i2 in 0..2 {
                    for j2 in 0..3 {
                        f += id.at(i1, j1, i2, j2) * x[i1] * y[j1] * x[i2] * y[j2];
                    }
                }
            }
        }
        assert!((f - 1.0).abs() < 1e-15);
    }

    #[test]
    fn slices() {
        let b = catalog::multiple_mplus();
        // a[0,0,0,0] = 4, a[0,0,1,0] = a[1,0,0,0] = 1, a[1,0,1,0] = 10
        let s = b.slice_x(0).unwrap();
        assert_eq!(s.data(), &[4.0, 1.0, 1.0, 10.0]);
        let id = BiquadraticTensor::identity(2, 2).unwrap();
        assert_eq!(id.slice_x(0).unwrap(), Matrix::identity(2));
        let z = BiquadraticTensor::zeros(2, 2).unwrap();
        assert_eq!(z.slice_y(0).unwrap(), Matrix::zeros(2, 2));
        assert!(b.slice_x(2).is_err());
        assert!(b.slice_y(2).is_err());
    }

    #[test]
    fn coo_duplicates_rejected() {
        let err =
            BiquadraticTensor::from_coo(2, 2, &[(0, 0, 0, 0, 1.0), (0, 0, 0, 0, 2.0)]).unwrap_err();
        assert_eq!(err, BiquadError::DuplicateEntry(0, 0, 0, 0));
    }
}
