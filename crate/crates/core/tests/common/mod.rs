//! Helpers shared by the integration tests: random instance generators and
//! reference computations written independently of the library kernels.
#![allow(dead_code)]

use biquad::rng::stream_rng;
use biquad::{BiquadraticTensor, Matrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    stream_rng(seed, stream)
}

/// Dense tensor with independent entries in [-1, 1); no symmetry.
pub fn random_general(rng: &mut impl Rng, m: usize, n: usize) -> BiquadraticTensor {
    let data = (0..m * n * m * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    BiquadraticTensor::new_dense(m, n, data).unwrap()
}

/// Writes `value` to every member of the symmetry orbit of `(i1, j1, i2, j2)`.
pub fn set_orbit(data: &mut [f64], m: usize, n: usize, (i1, j1, i2, j2): (usize, usize, usize, usize), value: f64) {
    let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * m + c) * n + d;
    for k in [idx(i1, j1, i2, j2), idx(i2, j2, i1, j1), idx(i2, j1, i1, j2), idx(i1, j2, i2, j1)] {
        data[k] = value;
    }
}

/// Symmetric nonnegative tensor. Each orbit is zero with probability
/// `sparsity`, otherwise uniform in (0, 1]. When `block` is set, orbits
/// coupling the x-index block `{0..block.0}` to its complement, or the
/// y-index block `{0..block.1}` to its complement, are zeroed.
pub fn random_structured(
    rng: &mut impl Rng,
    m: usize,
    n: usize,
    sparsity: f64,
    block: Option<(usize, usize)>,
) -> BiquadraticTensor {
    let mut data = vec![0.0; m * n * m * n];
    for i1 in 0..m {
        for j1 in 0..n {
            for i2 in i1..m {
                for j2 in 0..n {
                    let v = if rng.gen::<f64>() < sparsity {
                        0.0
                    } else {
                        1.0 - rng.gen::<f64>()
                    };
                    let crosses = block.is_some_and(|(bx, by)| (i1 < bx) != (i2 < bx) || (j1 < by) != (j2 < by));
                    set_orbit(&mut data, m, n, (i1, j1, i2, j2), if crosses { 0.0 } else { v });
                }
            }
        }
    }
    BiquadraticTensor::new_dense(m, n, data).unwrap()
}

/// Symmetric tensor with strictly positive entries.
pub fn random_positive(rng: &mut impl Rng, m: usize, n: usize) -> BiquadraticTensor {
    random_structured(rng, m, n, 0.0, None)
}

pub fn random_symmetric_matrix(rng: &mut impl Rng, size: usize, lo: f64, hi: f64) -> Matrix {
    let mut mat = Matrix::zeros(size, size);
    for r in 0..size {
        for c in r..size {
            let v = rng.gen_range(lo..hi);
            mat.set(r, c, v);
            mat.set(c, r, v);
        }
    }
    mat
}

pub fn random_vector(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Nonnegative vector with each component zero with probability ½ (at least
/// one component positive).
pub fn random_support_vector(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len)
            .map(|_| if rng.gen::<bool>() { 0.0 } else { 1.0 - rng.gen::<f64>() })
            .collect();
        if v.iter().any(|&c| c > 0.0) {
            return v;
        }
    }
}

/// The form by direct quadruple summation.
pub fn form(t: &BiquadraticTensor, x: &[f64], y: &[f64]) -> f64 {
    let (m, n) = (t.m(), t.n());
    let e = t.entries();
    let mut s = 0.0;
    for i1 in 0..m {
        for j1 in 0..n {
            for i2 in 0..m {
                for j2 in 0..n {
                    s += e[((i1 * n + j1) * m + i2) * n + j2] * x[i1] * y[j1] * x[i2] * y[j2];
                }
            }
        }
    }
    s
}

/// Central-difference gradient of `form` in x (first) and y (second).
pub fn fd_gradient(t: &BiquadraticTensor, x: &[f64], y: &[f64], step: f64) -> (Vec<f64>, Vec<f64>) {
    let dx = (0..x.len())
        .map(|i| {
            let (mut p, mut q) = (x.to_vec(), x.to_vec());
            p[i] += step;
            q[i] -= step;
            (form(t, &p, y) - form(t, &q, y)) / (2.0 * step)
        })
        .collect();
    let dy = (0..y.len())
        .map(|j| {
            let (mut p, mut q) = (y.to_vec(), y.to_vec());
            p[j] += step;
            q[j] -= step;
            (form(t, x, &p) - form(t, x, &q)) / (2.0 * step)
        })
        .collect();
    (dx, dy)
}

/// Perron root of a nonnegative irreducible symmetric matrix by power
/// iteration on `M + I`.
pub fn perron_root(mat: &Matrix) -> f64 {
    let k = mat.rows();
    let mut v = vec![1.0 / (k as f64).sqrt(); k];
    let mut est = 0.0;
    for _ in 0..100_000 {
        let mut w = mat.mul_vec(&v);
        w.iter_mut().zip(&v).for_each(|(wi, vi)| *wi += vi);
        let norm = w.iter().map(|c| c * c).sum::<f64>().sqrt();
        let next = norm - 1.0;
        v = w.into_iter().map(|c| c / norm).collect();
        if (next - est).abs() < 1e-15 * next.abs().max(1.0) {
            return next;
        }
        est = next;
    }
    est
}

/// Distinct values after merging those within `tol`, sorted descending.
pub fn distinct(values: impl IntoIterator<Item = f64>, tol: f64) -> Vec<f64> {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v.dedup_by(|a, b| (*a - *b).abs() <= tol);
    v
}

/// Largest componentwise distance between `a` and `b` or `-b`.
pub fn sign_distance(a: &[f64], b: &[f64]) -> f64 {
    let plus = a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    let minus = a.iter().zip(b).map(|(p, q)| (p + q).abs()).fold(0.0, f64::max);
    plus.min(minus)
}

pub fn unit(len: usize, k: usize) -> Vec<f64> {
    (0..len).map(|i| if i == k { 1.0 } else { 0.0 }).collect()
}
