//! Multilinear forms of a biquadratic tensor.
//!
//! For `x ∈ ℝᵐ`, `y ∈ ℝⁿ`:
//!
//! ```text
//! f(x, y) = Σ a[i1,j1,i2,j2] x[i1] y[j1] x[i2] y[j2]
//! g[i]    = ½ Σ a[i1,j1,i,j2] x[i1] y[j1] y[j2] + ½ Σ a[i,j1,i2,j2] y[j1] x[i2] y[j2]
//! h[j]    = ½ Σ a[i1,j1,i2,j] x[i1] y[j1] x[i2] + ½ Σ a[i1,j,i2,j2] x[i1] x[i2] y[j2]
//! ```
//!
//! so that `g = ½∇ₓf`, `h = ½∇ᵧf` and `xᵀg = f = yᵀh`. An M-eigenpair
//! `(λ, x, y)` solves `g = λx`, `h = λy` with `‖x‖ = ‖y‖ = 1`.
//!
//! All contractions are a single pass over the `m²n²` entries.

use serde::{Deserialize, Serialize};

use crate::error::{BiquadError, Result, Side};
use crate::tensor::BiquadraticTensor;

pub(crate) fn check_vectors(t: &BiquadraticTensor, x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != t.m() || y.len() != t.n() {
        return Err(BiquadError::DimensionMismatch(format!(
            "vectors of length ({}, {}) for tensor with m={}, n={}",
            x.len(),
            y.len(),
            t.m(),
            t.n()
        )));
    }
    Ok(())
}

/// Partial contractions `M[i1,j1] = Σ a[i1,j1,·,·] x y` (trailing pair) and
/// `N[i2,j2] = Σ a[·,·,i2,j2] x y` (leading pair), both `m × n` row-major.
fn half_contractions(t: &BiquadraticTensor, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = (t.m(), t.n());
    let a = t.entries();
    let mut trailing = vec![0.0; m * n];
    let mut leading = vec![0.0; m * n];
    for i1 in 0..m {
        for j1 in 0..n {
            let lead = x[i1] * y[j1];
            let base = (i1 * n + j1) * m * n;
            let block = &a[base..base + m * n];
            let mut acc = 0.0;
            for i2 in 0..m {
                let xi = x[i2];
                let row = &block[i2 * n..(i2 + 1) * n];
                let out = &mut leading[i2 * n..(i2 + 1) * n];
                for j2 in 0..n {
                    let v = row[j2];
                    acc += v * xi * y[j2];
                    out[j2] += v * lead;
                }
            }
            trailing[i1 * n + j1] = acc;
        }
    }
    (trailing, leading)
}

/// `f(x, y)` without dimension checks.
pub(crate) fn form(t: &BiquadraticTensor, x: &[f64], y: &[f64]) -> f64 {
    let (m, n) = (t.m(), t.n());
    let a = t.entries();
    let mut f = 0.0;
    for i1 in 0..m {
        for j1 in 0..n {
            let base = (i1 * n + j1) * m * n;
            let mut acc = 0.0;
            for i2 in 0..m {
                let row = &a[base + i2 * n..base + (i2 + 1) * n];
                let mut r = 0.0;
                for j2 in 0..n {
                    r += row[j2] * y[j2];
                }
                acc += r * x[i2];
            }
            f += acc * x[i1] * y[j1];
        }
    }
    f
}

/// Returns `(g, h)` and the two summands of `g` without dimension checks.
fn gradient_parts(
    t: &BiquadraticTensor,
    x: &[f64],
    y: &[f64],
) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let (m, n) = (t.m(), t.n());
    let (trailing, leading) = half_contractions(t, x, y);
    let mut g_lead = vec![0.0; m];
    let mut g_trail = vec![0.0; m];
    let mut h = vec![0.0; n];
    for i in 0..m {
        for j in 0..n {
            let l = leading[i * n + j];
            let r = trailing[i * n + j];
            g_lead[i] += 0.5 * l * y[j];
            g_trail[i] += 0.5 * r * y[j];
            h[j] += 0.5 * (l + r) * x[i];
        }
    }
    let g = g_lead.iter().zip(&g_trail).map(|(a, b)| a + b).collect();
    (g, h, g_lead, g_trail)
}

/// `(g, h)` without dimension checks.
pub(crate) fn gradients_unchecked(
    t: &BiquadraticTensor,
    x: &[f64],
    y: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let (g, h, _, _) = gradient_parts(t, x, y);
    (g, h)
}

/// The biquadratic form `f(x, y) = ⟨A, x∘y∘x∘y⟩`.
pub fn eval_f(t: &BiquadraticTensor, x: &[f64], y: &[f64]) -> Result<f64> {
    check_vectors(t, x, y)?;
    Ok(form(t, x, y))
}

/// Both half-gradients `(g, h)` in one pass.
pub fn gradients(t: &BiquadraticTensor, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    check_vectors(t, x, y)?;
    Ok(gradients_unchecked(t, x, y))
}

/// `g = ½(A·yxy + Axy·y)`, an `m`-vector.
pub fn grad_g(t: &BiquadraticTensor, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    gradients(t, x, y).map(|(g, _)| g)
}

/// `h = ½(Ax·xy + Axyx·)`, an `n`-vector.
pub fn grad_h(t: &BiquadraticTensor, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    gradients(t, x, y).map(|(_, h)| h)
}

/// The two summands of `g`: contraction over the leading index pair and over
/// the trailing pair, each already scaled by ½. They coincide for weakly
/// symmetric tensors.
pub fn grad_g_summands(
    t: &BiquadraticTensor,
    x: &[f64],
    y: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_vectors(t, x, y)?;
    let (_, _, lead, trail) = gradient_parts(t, x, y);
    Ok((lead, trail))
}

/// Position of a ratio `g_i/x_i` or `h_j/y_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioIndex {
    pub side: Side,
    pub position: usize,
}

/// Minimum and maximum of the componentwise ratios `{g_i/x_i, h_j/y_j}`.
///
/// A zero component with a positive gradient entry contributes `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioBounds {
    /// `v(x, y)`, the minimum ratio.
    pub v_val: f64,
    /// `u(x, y)`, the maximum ratio.
    pub u_val: f64,
    pub arg_min: RatioIndex,
    pub arg_max: RatioIndex,
}

pub(crate) fn check_nonnegative_vector(v: &[f64]) -> Result<()> {
    if let Some(p) = v.iter().position(|&c| c < 0.0 || c.is_nan()) {
        return Err(BiquadError::NegativeComponent(p));
    }
    if v.iter().all(|&c| c == 0.0) {
        return Err(BiquadError::ZeroVector);
    }
    Ok(())
}

/// Evaluates `v(x, y)` and `u(x, y)` at a nonnegative point.
///
/// A pair with `x_i = 0` and `g_i = 0` (or `y_j = 0`, `h_j = 0`) has no
/// defined ratio and is reported as [`BiquadError::DegeneratePoint`].
pub fn ratio_bounds(t: &BiquadraticTensor, x: &[f64], y: &[f64]) -> Result<RatioBounds> {
    check_vectors(t, x, y)?;
    check_nonnegative_vector(x)?;
    check_nonnegative_vector(y)?;
    let (g, h) = gradients_unchecked(t, x, y);
    ratio_bounds_from_parts(x, y, &g, &h)
}

pub(crate) fn ratio_bounds_from_parts(
    x: &[f64],
    y: &[f64],
    g: &[f64],
    h: &[f64],
) -> Result<RatioBounds> {
    let mut best = RatioBounds {
        v_val: f64::INFINITY,
        u_val: f64::NEG_INFINITY,
        arg_min: RatioIndex {
            side: Side::X,
            position: 0,
        },
        arg_max: RatioIndex {
            side: Side::X,
            position: 0,
        },
    };
    let sides = [(Side::X, x, g), (Side::Y, y, h)];
    for (side, vec, grad) in sides {
        for (position, (&c, &d)) in vec.iter().zip(grad).enumerate() {
            let r = if c > 0.0 {
                d / c
            } else if d > 0.0 {
                f64::INFINITY
            } else {
                return Err(BiquadError::DegeneratePoint {
                    side,
                    index: position,
                });
            };
            let here = RatioIndex { side, position };
            if r < best.v_val {
                best.v_val = r;
                best.arg_min = here;
            }
            if r > best.u_val {
                best.u_val = r;
                best.arg_max = here;
            }
        }
    }
    Ok(best)
}

/// Infinity norms of the two eigen-equation blocks, `‖g − λx‖∞` and
/// `‖h − λy‖∞`.
pub fn residual_blocks(
    t: &BiquadraticTensor,
    lambda: f64,
    x: &[f64],
    y: &[f64],
) -> Result<(f64, f64)> {
    check_vectors(t, x, y)?;
    let (g, h) = gradients_unchecked(t, x, y);
    Ok(residual_from_parts(lambda, x, y, &g, &h))
}

pub(crate) fn residual_from_parts(
    lambda: f64,
    x: &[f64],
    y: &[f64],
    g: &[f64],
    h: &[f64],
) -> (f64, f64) {
    let block = |v: &[f64], w: &[f64]| {
        v.iter()
            .zip(w)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - lambda * b).abs()))
    };
    (block(g, x), block(h, y))
}

/// Eigenpair residual `max(‖g − λx‖∞, ‖h − λy‖∞)`.
pub fn residual(t: &BiquadraticTensor, lambda: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    let (rx, ry) = residual_blocks(t, lambda, x, y)?;
    Ok(rx.max(ry))
}
