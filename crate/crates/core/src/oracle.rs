//! Brute-force enumeration of M-eigenpairs on small tensors.
//!
//! M-eigenpairs are the stationary points of `f(x, y)` on the product of
//! unit spheres, with `λ = f(x, y)`. Two searches are provided:
//!
//! * [`enumerate_2x2`] scans `x = (cos θ, sin θ)`, `y = (cos φ, sin φ)` over
//!   a `grid × grid` lattice of `[0, π)²`, seeds Newton's method on `∇F = 0`
//!   in every cell where both partials change sign, and deduplicates the
//!   roots. This is the reference oracle and uses its own four-linear form
//!   rather than the contraction kernels.
//! * [`enumerate_small`] runs Newton's method on the Lagrange system
//!   `g = λx`, `h = μy`, `‖x‖ = ‖y‖ = 1` from random starts. It finds saddle
//!   points as readily as extrema but gives no completeness guarantee.
//!
//! Stationary points that lie on a continuum (the identity tensor, the zero
//! tensor, flat directions of reducible tensors) are not isolated; both
//! searches collapse them to one representative per eigenvalue, preferring a
//! pair of coordinate vectors when one lies on the continuum.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contraction::{
    check_vectors, gradients_unchecked, ratio_bounds_from_parts, residual,
};
use crate::error::{BiquadError, Result};
use crate::linalg::{dot, jacobi_eigen, lu_solve, norm2, normalized};
use crate::rng::{sphere_vector, standard_normal, stream_rng};
use crate::tensor::{BiquadraticTensor, Matrix};

pub const DEFAULT_GRID: usize = 720;
pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_STEPS: usize = 50;
pub const DEDUP_RADIUS: f64 = 1e-6;
/// Sign threshold for the M⁺ / M⁺⁺ classification.
pub const SIGN_TOL: f64 = 1e-8;
pub const DEFAULT_RHO_STARTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EigenClass {
    M,
    Mplus,
    Mplusplus,
}

impl EigenClass {
    pub fn is_mplus(self) -> bool {
        self >= EigenClass::Mplus
    }
}

impl std::fmt::Display for EigenClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EigenClass::M => "M",
            EigenClass::Mplus => "M+",
            EigenClass::Mplusplus => "M++",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MEigenpair {
    pub lambda: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub class: EigenClass,
    pub residual: f64,
}

/// Flips `v` so its largest-magnitude component is positive; ties go to the
/// lowest index.
pub fn canonical_sign(v: &mut [f64]) {
    let mut best = 0;
    for k in 1..v.len() {
        if v[k].abs() > v[best].abs() + 1e-12 {
            best = k;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|c| *c = -*c);
    }
}

/// Distance between `a` and `b` up to a global sign.
fn sign_distance(a: &[f64], b: &[f64]) -> f64 {
    let (mut plus, mut minus) = (0.0_f64, 0.0_f64);
    for (p, q) in a.iter().zip(b) {
        plus = plus.max((p - q).abs());
        minus = minus.max((p + q).abs());
    }
    plus.min(minus)
}

fn same_pair(a: &Root, b: &Root) -> bool {
    sign_distance(&a.x, &b.x) <= DEDUP_RADIUS && sign_distance(&a.y, &b.y) <= DEDUP_RADIUS
}

/// Applies the four sign flips `(±x, ±y)` and sets the class.
pub fn classify(pair: &MEigenpair) -> MEigenpair {
    let mut out = pair.clone();
    out.class = EigenClass::M;
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            let xs: Vec<f64> = pair.x.iter().map(|c| sx * c).collect();
            let ys: Vec<f64> = pair.y.iter().map(|c| sy * c).collect();
            let nonneg = xs.iter().chain(&ys).all(|&c| c >= -SIGN_TOL);
            if !nonneg {
                continue;
            }
            let class = if xs.iter().chain(&ys).all(|&c| c > SIGN_TOL) {
                EigenClass::Mplusplus
            } else {
                EigenClass::Mplus
            };
            if class > out.class {
                out.class = class;
                out.x = xs;
                out.y = ys;
            }
        }
    }
    out
}

/// A stationary point before classification.
#[derive(Debug, Clone)]
struct Root {
    lambda: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    isolated: bool,
}

/// Scale used for tolerances: an upper bound on `|f|` over the spheres.
fn form_scale(t: &BiquadraticTensor) -> f64 {
    t.entries().iter().map(|v| v.abs()).sum()
}

/// Replaces a continuum of stationary points with a single representative:
/// a coordinate pair `(e_i, e_j)` with eigenvalue `lambda` if one exists,
/// preferring `i = j`, otherwise the most axis-aligned member.
fn collapse_continuum(t: &BiquadraticTensor, lambda: f64, members: &[Root]) -> Root {
    let (m, n) = (t.m(), t.n());
    let tol = 1e-9 * form_scale(t).max(f64::MIN_POSITIVE);
    let axis = |i: usize, len: usize| {
        let mut e = vec![0.0; len];
        e[i] = 1.0;
        e
    };
    let mut candidates: Vec<(usize, usize)> = (0..m.min(n)).map(|k| (k, k)).collect();
    for i in 0..m {
        for j in 0..n {
            if i != j {
                candidates.push((i, j));
            }
        }
    }
    for (i, j) in candidates {
        let (x, y) = (axis(i, m), axis(j, n));
        let res = residual(t, lambda, &x, &y).expect("dimensions match");
        if res <= tol {
            return Root {
                lambda,
                x,
                y,
                isolated: false,
            };
        }
    }
    let score = |r: &Root| {
        r.x.iter().fold(0.0_f64, |a, c| a.max(c.abs())) + r.y.iter().fold(0.0_f64, |a, c| a.max(c.abs()))
    };
    let mut best = &members[0];
    for r in &members[1..] {
        if score(r) > score(best) + 1e-12 {
            best = r;
        }
    }
    Root {
        lambda,
        ..best.clone()
    }
}

/// Deduplicates roots, collapses non-isolated ones by eigenvalue, and
/// returns classified eigenpairs sorted by descending `λ`, then by vectors.
fn finish(t: &BiquadraticTensor, roots: Vec<Root>) -> Vec<MEigenpair> {
    let lambda_tol = DEDUP_RADIUS * form_scale(t).max(1.0);
    let (isolated, mut flat): (Vec<Root>, Vec<Root>) = roots.into_iter().partition(|r| r.isolated);
    let mut kept: Vec<Root> = Vec::new();
    for r in isolated {
        if !kept.iter().any(|k| same_pair(k, &r)) {
            kept.push(r);
        }
    }
    flat.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let mut start = 0;
    while start < flat.len() {
        let mut end = start + 1;
        while end < flat.len() && flat[end].lambda - flat[end - 1].lambda <= lambda_tol {
            end += 1;
        }
        let cluster = &flat[start..end];
        let mean = cluster.iter().map(|r| r.lambda).sum::<f64>() / cluster.len() as f64;
        let rep = collapse_continuum(t, mean, cluster);
        kept.retain(|k| (k.lambda - mean).abs() > lambda_tol || !same_pair(k, &rep));
        kept.push(rep);
        start = end;
    }
    let mut pairs: Vec<MEigenpair> = kept
        .into_iter()
        .map(|mut r| {
            snap_small(t, &mut r);
            canonical_sign(&mut r.x);
            canonical_sign(&mut r.y);
            let lambda = crate::contraction::form(t, &r.x, &r.y);
            let residual = residual(t, lambda, &r.x, &r.y).expect("dimensions match");
            classify(&MEigenpair {
                lambda,
                x: r.x,
                y: r.y,
                class: EigenClass::M,
                residual,
            })
        })
        .collect();
    pairs.sort_by(|a, b| {
        b.lambda
            .total_cmp(&a.lambda)
            .then_with(|| cmp_vec(&b.x, &a.x))
            .then_with(|| cmp_vec(&b.y, &a.y))
    });
    pairs
}

/// Zeroes components below `1e-13` when that does not worsen the residual
/// beyond rounding.
fn snap_small(t: &BiquadraticTensor, r: &mut Root) {
    let clean = |v: &[f64]| -> Option<Vec<f64>> {
        let w: Vec<f64> = v.iter().map(|&c| if c.abs() < 1e-13 { 0.0 } else { c }).collect();
        normalized(&w)
    };
    let (Some(x), Some(y)) = (clean(&r.x), clean(&r.y)) else {
        return;
    };
    let before = residual(t, r.lambda, &r.x, &r.y).expect("dimensions match");
    let lambda = crate::contraction::form(t, &x, &y);
    let after = residual(t, lambda, &x, &y).expect("dimensions match");
    if after <= before + 1e-12 * form_scale(t) {
        r.x = x;
        r.y = y;
        r.lambda = lambda;
    }
}

fn cmp_vec(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (p, q) in a.iter().zip(b) {
        let o = p.total_cmp(q);
        if o.is_ne() {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// `Σ a[i1,j1,i2,j2] x1[i1] y1[j1] x2[i2] y2[j2]`.
fn form4(t: &BiquadraticTensor, x1: &[f64], y1: &[f64], x2: &[f64], y2: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i1, a) in x1.iter().enumerate() {
        for (j1, b) in y1.iter().enumerate() {
            for (i2, c) in x2.iter().enumerate() {
                for (j2, d) in y2.iter().enumerate() {
                    s += t.at(i1, j1, i2, j2) * a * b * c * d;
                }
            }
        }
    }
    s
}

/// Angular chart of the 2 × 2 problem.
struct Angles<'a> {
    t: &'a BiquadraticTensor,
}

struct Local {
    value: f64,
    grad: [f64; 2],
    hess: [[f64; 2]; 2],
}

impl Angles<'_> {
    fn vectors(theta: f64, phi: f64) -> ([f64; 2], [f64; 2], [f64; 2], [f64; 2]) {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        ([ct, st], [-st, ct], [cp, sp], [-sp, cp])
    }

    fn grad(&self, theta: f64, phi: f64) -> [f64; 2] {
        let t = self.t;
        let (x, dx, y, dy) = Self::vectors(theta, phi);
        [
            form4(t, &dx, &y, &x, &y) + form4(t, &x, &y, &dx, &y),
            form4(t, &x, &dy, &x, &y) + form4(t, &x, &y, &x, &dy),
        ]
    }

    fn local(&self, theta: f64, phi: f64) -> Local {
        let t = self.t;
        let (x, dx, y, dy) = Self::vectors(theta, phi);
        let (nx, ny) = ([-x[0], -x[1]], [-y[0], -y[1]]);
        let tt = form4(t, &nx, &y, &x, &y) + 2.0 * form4(t, &dx, &y, &dx, &y) + form4(t, &x, &y, &nx, &y);
        let pp = form4(t, &x, &ny, &x, &y) + 2.0 * form4(t, &x, &dy, &x, &dy) + form4(t, &x, &y, &x, &ny);
        let tp = form4(t, &dx, &dy, &x, &y)
            + form4(t, &dx, &y, &x, &dy)
            + form4(t, &x, &dy, &dx, &y)
            + form4(t, &x, &y, &dx, &dy);
        Local {
            value: form4(t, &x, &y, &x, &y),
            grad: self.grad(theta, phi),
            hess: [[tt, tp], [tp, pp]],
        }
    }

    /// Newton's method on `∇F = 0`, with a Levenberg–Marquardt step when the
    /// Hessian is close to singular.
    fn newton(&self, mut theta: f64, mut phi: f64, tol: f64) -> Option<(f64, f64, Local)> {
        for _ in 0..=NEWTON_MAX_STEPS {
            let loc = self.local(theta, phi);
            let gnorm = loc.grad[0].abs().max(loc.grad[1].abs());
            if gnorm <= tol {
                return Some((theta, phi, loc));
            }
            let [[a, b], [_, d]] = loc.hess;
            let det = a * d - b * b;
            let hnorm = a.abs().max(b.abs()).max(d.abs());
            let (g0, g1) = (loc.grad[0], loc.grad[1]);
            let step = if det.abs() > 1e-10 * hnorm * hnorm && hnorm > 0.0 {
                [-(d * g0 - b * g1) / det, -(a * g1 - b * g0) / det]
            } else {
                // (HᵀH + μI) s = −Hᵀ∇F with H symmetric
                let mu = 1e-8 * hnorm * hnorm + f64::MIN_POSITIVE;
                let (p, q, r) = (a * a + b * b + mu, a * b + b * d, b * b + d * d + mu);
                let (rhs0, rhs1) = (-(a * g0 + b * g1), -(b * g0 + d * g1));
                let det2 = p * r - q * q;
                if !(det2.abs() > 0.0) {
                    return None;
                }
                [(r * rhs0 - q * rhs1) / det2, (p * rhs1 - q * rhs0) / det2]
            };
            let len = step[0].hypot(step[1]);
            if !len.is_finite() {
                return None;
            }
            let scale = if len > 0.5 { 0.5 / len } else { 1.0 };
            theta += scale * step[0];
            phi += scale * step[1];
        }
        None
    }
}

/// Enumerates the M-eigenpairs of a `2 × 2 × 2 × 2` tensor.
///
/// `tol` is the Newton tolerance on `‖∇F‖∞` relative to `Σ|a|`.
pub fn enumerate_2x2(t: &BiquadraticTensor, grid: usize, tol: f64) -> Result<Vec<MEigenpair>> {
    if t.m() != 2 || t.n() != 2 {
        return Err(BiquadError::DimensionMismatch(format!(
            "enumerate_2x2 needs m = n = 2, got m = {}, n = {}",
            t.m(),
            t.n()
        )));
    }
    if grid < 4 {
        return Err(BiquadError::InvalidArgument("grid must be at least 4".into()));
    }
    if !(tol > 0.0) {
        return Err(BiquadError::InvalidArgument("tol must be positive".into()));
    }
    let chart = Angles { t };
    let step = PI / grid as f64;
    let scale = form_scale(t);
    let newton_tol = tol * scale;
    let sign_thr = 1e-9 * scale;
    let partials: Vec<[f64; 2]> = (0..grid * grid)
        .into_par_iter()
        .map(|k| chart.grad((k / grid) as f64 * step, (k % grid) as f64 * step))
        .collect();
    let at = |a: usize, b: usize| partials[(a % grid) * grid + b % grid];
    let seeds: Vec<(usize, usize)> = (0..grid * grid)
        .filter_map(|k| {
            let (a, b) = (k / grid, k % grid);
            let corners = [at(a, b), at(a + 1, b), at(a, b + 1), at(a + 1, b + 1)];
            let brackets = |c: usize| {
                let lo = corners.iter().map(|p| p[c]).fold(f64::INFINITY, f64::min);
                let hi = corners.iter().map(|p| p[c]).fold(f64::NEG_INFINITY, f64::max);
                lo <= sign_thr && hi >= -sign_thr
            };
            (brackets(0) && brackets(1)).then_some((a, b))
        })
        .collect();
    let roots: Vec<Root> = seeds
        .par_iter()
        .filter_map(|&(a, b)| {
            let theta = (a as f64 + 0.5) * step;
            let phi = (b as f64 + 0.5) * step;
            match chart.newton(theta, phi, newton_tol) {
                Some((th, ph, loc)) => {
                    let (x, _, y, _) = Angles::vectors(th, ph);
                    let [[p, q], [_, r]] = loc.hess;
                    let half_tr = 0.5 * (p + r);
                    let disc = (0.25 * (p - r) * (p - r) + q * q).sqrt();
                    let min_eig = (half_tr - disc).abs().min((half_tr + disc).abs());
                    Some(Root {
                        lambda: loc.value,
                        x: x.to_vec(),
                        y: y.to_vec(),
                        isolated: min_eig > 1e-6 * scale,
                    })
                }
                None => {
                    log::debug!("newton did not converge from cell ({a}, {b})");
                    None
                }
            }
        })
        .collect();
    Ok(finish(t, roots))
}

/// Result of [`enumerate_small`]; never guaranteed to be complete.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallEnumeration {
    pub pairs: Vec<MEigenpair>,
    pub converged_starts: usize,
    pub dropped_starts: usize,
    pub exhaustive: bool,
}

/// Blocks of the Jacobian of `(g, h)`: `∂g/∂x`, `∂g/∂y`, `∂h/∂y`.
fn gradient_jacobian(t: &BiquadraticTensor, x: &[f64], y: &[f64]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let (m, n) = (t.m(), t.n());
    let mut gxx = vec![vec![0.0; m]; m];
    let mut gxy = vec![vec![0.0; n]; m];
    let mut hyy = vec![vec![0.0; n]; n];
    for (k, &v) in t.entries().iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let (i1, j1, i2, j2) = t.unflatten(k);
        let half = 0.5 * v;
        let yy = half * y[j1] * y[j2];
        gxx[i1][i2] += yy;
        gxx[i2][i1] += yy;
        let xx = half * x[i1] * x[i2];
        hyy[j1][j2] += xx;
        hyy[j2][j1] += xx;
        gxy[i1][j1] += half * x[i2] * y[j2];
        gxy[i1][j2] += half * y[j1] * x[i2];
        gxy[i2][j1] += half * x[i1] * y[j2];
        gxy[i2][j2] += half * x[i1] * y[j1];
    }
    (gxx, gxy, hyy)
}

/// Solves `J s = −r`, falling back to a Levenberg–Marquardt step.
fn damped_solve(jac: &[Vec<f64>], r: &[f64]) -> Option<Vec<f64>> {
    let rhs: Vec<f64> = r.iter().map(|c| -c).collect();
    if let Some(s) = lu_solve(jac.to_vec(), rhs.clone()) {
        if s.iter().all(|c| c.is_finite()) && norm2(&s) < 1e6 {
            return Some(s);
        }
    }
    let size = r.len();
    let fro2: f64 = jac.iter().flatten().map(|c| c * c).sum();
    let mu = 1e-10 * fro2 + f64::MIN_POSITIVE;
    let mut normal = vec![vec![0.0; size]; size];
    let mut jtr = vec![0.0; size];
    for p in 0..size {
        for q in 0..size {
            normal[p][q] = (0..size).map(|k| jac[k][p] * jac[k][q]).sum();
        }
        normal[p][p] += mu;
        jtr[p] = (0..size).map(|k| jac[k][p] * rhs[k]).sum();
    }
    lu_solve(normal, jtr).filter(|s| s.iter().all(|c| c.is_finite()))
}

/// Whether the tangent Hessian of the Lagrangian at an eigenpair has no null
/// directions beyond the two normal ones.
fn isolated_lagrange(t: &BiquadraticTensor, x: &[f64], y: &[f64], lambda: f64) -> bool {
    let (m, n) = (t.m(), t.n());
    let (gxx, gxy, hyy) = gradient_jacobian(t, x, y);
    let size = m + n;
    let mut k = Matrix::zeros(size, size);
    for p in 0..m {
        for q in 0..m {
            k.set(p, q, gxx[p][q] - if p == q { lambda } else { 0.0 });
        }
        for q in 0..n {
            k.set(p, m + q, gxy[p][q]);
            k.set(m + q, p, gxy[p][q]);
        }
    }
    for p in 0..n {
        for q in 0..n {
            k.set(m + p, m + q, hyy[p][q] - if p == q { lambda } else { 0.0 });
        }
    }
    // projector onto the tangent space of the two spheres
    let mut proj = Matrix::identity(size);
    for p in 0..m {
        for q in 0..m {
            proj.set(p, q, proj.get(p, q) - x[p] * x[q]);
        }
    }
    for p in 0..n {
        for q in 0..n {
            proj.set(m + p, m + q, proj.get(m + p, m + q) - y[p] * y[q]);
        }
    }
    let pk = mat_mul(&mat_mul(&proj, &k), &proj);
    let eig = jacobi_eigen(&pk);
    let thr = 1e-6 * form_scale(t);
    let null = eig.values.iter().filter(|v| v.abs() <= thr).count();
    null <= 2
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut c = Matrix::zeros(a.rows(), b.cols());
    for r in 0..a.rows() {
        for q in 0..b.cols() {
            let s = (0..a.cols()).map(|k| a.get(r, k) * b.get(k, q)).sum();
            c.set(r, q, s);
        }
    }
    c
}

/// Newton's method on the Lagrange system from `(x, y)`.
fn lagrange_newton(t: &BiquadraticTensor, mut x: Vec<f64>, mut y: Vec<f64>, tol: f64) -> Option<Root> {
    let (m, n) = (t.m(), t.n());
    let size = m + n + 2;
    let scale = form_scale(t);
    let f0 = crate::contraction::form(t, &x, &y);
    let (mut lambda, mut mu) = (f0, f0);
    for _ in 0..=2 * NEWTON_MAX_STEPS {
        let (g, h) = gradients_unchecked(t, &x, &y);
        let mut r = Vec::with_capacity(size);
        r.extend(g.iter().zip(&x).map(|(a, b)| a - lambda * b));
        r.extend(h.iter().zip(&y).map(|(a, b)| a - mu * b));
        r.push(0.5 * (1.0 - dot(&x, &x)));
        r.push(0.5 * (1.0 - dot(&y, &y)));
        // stationarity measured after projecting onto the spheres
        let (xu, yu) = (normalized(&x)?, normalized(&y)?);
        let (gu, hu) = gradients_unchecked(t, &xu, &yu);
        let fu = dot(&xu, &gu);
        let stat = gu
            .iter()
            .zip(&xu)
            .chain(hu.iter().zip(&yu))
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - fu * b).abs()));
        if stat <= tol * scale {
            let isolated = isolated_lagrange(t, &xu, &yu, fu);
            return Some(Root {
                lambda: fu,
                x: xu,
                y: yu,
                isolated,
            });
        }
        let (gxx, gxy, hyy) = gradient_jacobian(t, &x, &y);
        let mut jac = vec![vec![0.0; size]; size];
        for p in 0..m {
            for q in 0..m {
                jac[p][q] = gxx[p][q];
            }
            jac[p][p] -= lambda;
            for q in 0..n {
                jac[p][m + q] = gxy[p][q];
                jac[m + q][p] = gxy[p][q];
            }
            jac[p][m + n] = -x[p];
            jac[m + n][p] = -x[p];
        }
        for p in 0..n {
            for q in 0..n {
                jac[m + p][m + q] = hyy[p][q];
            }
            jac[m + p][m + p] -= mu;
            jac[m + p][m + n + 1] = -y[p];
            jac[m + n + 1][m + p] = -y[p];
        }
        let s = damped_solve(&jac, &r)?;
        x.iter_mut().zip(&s[..m]).for_each(|(a, b)| *a += b);
        y.iter_mut().zip(&s[m..m + n]).for_each(|(a, b)| *a += b);
        lambda += s[m + n];
        mu += s[m + n + 1];
        if !(norm2(&x).is_finite() && norm2(&y).is_finite()) || norm2(&x) > 1e6 || norm2(&y) > 1e6 {
            return None;
        }
    }
    None
}

/// Multistart Lagrange–Newton search for M-eigenpairs of a tensor with
/// `m·n ≤ 36`. Starts are uniform on the spheres, so all orthants are
/// sampled.
pub fn enumerate_small(
    t: &BiquadraticTensor,
    n_starts: usize,
    tol: f64,
    seed: u64,
) -> Result<SmallEnumeration> {
    if t.m() * t.n() > 36 {
        return Err(BiquadError::DimensionMismatch(format!(
            "enumerate_small needs m·n ≤ 36, got {}",
            t.m() * t.n()
        )));
    }
    if n_starts == 0 {
        return Err(BiquadError::InvalidArgument("n_starts must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(BiquadError::InvalidArgument("tol must be positive".into()));
    }
    let found: Vec<Option<Root>> = (0..n_starts)
        .into_par_iter()
        .map(|idx| {
            let mut rng = stream_rng(seed, idx as u64);
            let x = sphere_vector(&mut rng, t.m());
            let y = sphere_vector(&mut rng, t.n());
            lagrange_newton(t, x, y, tol)
        })
        .collect();
    let dropped_starts = found.iter().filter(|r| r.is_none()).count();
    let roots: Vec<Root> = found.into_iter().flatten().collect();
    let converged_starts = roots.len();
    if dropped_starts > 0 {
        log::info!("{dropped_starts} of {n_starts} starts did not converge");
    }
    Ok(SmallEnumeration {
        pairs: finish(t, roots),
        converged_starts,
        dropped_starts,
        exhaustive: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub lambda_max: f64,
    /// `max |λ|`.
    pub rho_m: f64,
    /// Smallest M⁺-eigenvalue, if any pair is M⁺.
    pub lambda_plus_min: Option<f64>,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Descending M⁺-eigenvalues.
    pub mplus_set: Vec<f64>,
    /// For nonnegative tensors: whether `ρ_M = λ_max` and the `λ_max` pair is
    /// M⁺, each within 1e-6. `None` for tensors with negative entries.
    pub perron_consistent: Option<bool>,
}

pub fn spectral_summary(pairs: &[MEigenpair], t: &BiquadraticTensor) -> Result<SpectralSummary> {
    if pairs.is_empty() {
        return Err(BiquadError::EmptyList);
    }
    let mut eigenvalues: Vec<f64> = pairs.iter().map(|p| p.lambda).collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let lambda_max = eigenvalues[0];
    let rho_m = eigenvalues.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let mut mplus_set: Vec<f64> = pairs
        .iter()
        .filter(|p| p.class.is_mplus())
        .map(|p| p.lambda)
        .collect();
    mplus_set.sort_by(|a, b| b.total_cmp(a));
    let lambda_plus_min = mplus_set.last().copied();
    let perron_consistent = t.is_nonnegative().then(|| {
        let tol = 1e-6 * lambda_max.abs().max(1.0);
        let top_is_mplus = pairs
            .iter()
            .any(|p| p.class.is_mplus() && (p.lambda - lambda_max).abs() <= tol);
        (rho_m - lambda_max).abs() <= tol && top_is_mplus
    });
    if perron_consistent == Some(false) {
        log::warn!("enumerated spectrum violates ρ_M = λ_max for a nonnegative tensor");
    }
    Ok(SpectralSummary {
        lambda_max,
        rho_m,
        lambda_plus_min,
        eigenvalues,
        mplus_set,
        perron_consistent,
    })
}

/// Estimates of `ρ_* = inf u` and `ρ* = sup v` over positive unit pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoEstimates {
    pub rho_star_lower: f64,
    pub rho_star_upper: f64,
    pub arg_lower_x: Vec<f64>,
    pub arg_lower_y: Vec<f64>,
    pub arg_upper_x: Vec<f64>,
    pub arg_upper_y: Vec<f64>,
    pub n_starts: usize,
    pub seed: u64,
}

/// Maps unconstrained coordinates to a strictly positive unit pair.
fn chart_point(w: &[f64], m: usize) -> (Vec<f64>, Vec<f64>) {
    let pos = |s: &[f64]| -> Vec<f64> {
        let v: Vec<f64> = s.iter().map(|c| c.clamp(-30.0, 30.0).exp()).collect();
        let norm = norm2(&v);
        v.into_iter().map(|c| c / norm).collect()
    };
    (pos(&w[..m]), pos(&w[m..]))
}

/// Random orthonormal basis of `ℝ^d` by Gram–Schmidt on Gaussian vectors.
fn random_basis(rng: &mut impl rand::Rng, d: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    while basis.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| standard_normal(rng)).collect();
        for b in &basis {
            let p = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(a, c)| *a -= p * c);
        }
        if let Some(u) = normalized(&v) {
            if norm2(&v) > 1e-6 {
                basis.push(u);
            }
        }
    }
    basis
}

/// Derivative-free minimization by polling `±` a fresh random orthonormal
/// basis around the incumbent.
fn pattern_search(
    objective: impl Fn(&[f64]) -> f64,
    mut w: Vec<f64>,
    rng: &mut impl rand::Rng,
    max_evals: usize,
) -> (Vec<f64>, f64) {
    let d = w.len();
    let mut best = objective(&w);
    let mut step = 1.0;
    let mut evals = 1;
    while evals < max_evals && step > 1e-12 {
        let basis = random_basis(rng, d);
        let mut improved = false;
        'poll: for dir in &basis {
            for sign in [1.0, -1.0] {
                let trial: Vec<f64> = w.iter().zip(dir).map(|(a, b)| a + sign * step * b).collect();
                let val = objective(&trial);
                evals += 1;
                if val < best {
                    best = val;
                    w = trial;
                    improved = true;
                    break 'poll;
                }
            }
        }
        step = if improved { (step * 2.0).min(4.0) } else { step * 0.5 };
    }
    (w, best)
}

/// Multistart pattern search for `min u` and `max v` over the interior of
/// the nonnegative unit spheres.
pub fn estimate_rho_bounds(t: &BiquadraticTensor, n_starts: usize, seed: u64) -> Result<RhoEstimates> {
    t.require_nonnegative()?;
    if n_starts == 0 {
        return Err(BiquadError::InvalidArgument("n_starts must be at least 1".into()));
    }
    let (m, n) = (t.m(), t.n());
    let d = m + n;
    let max_evals = 400 * d;
    let ratio = |w: &[f64]| {
        let (x, y) = chart_point(w, m);
        let (g, h) = gradients_unchecked(t, &x, &y);
        ratio_bounds_from_parts(&x, &y, &g, &h).ok()
    };
    let u_obj = |w: &[f64]| ratio(w).map_or(f64::INFINITY, |r| r.u_val);
    let v_obj = |w: &[f64]| ratio(w).map_or(f64::INFINITY, |r| -r.v_val);
    let runs: Vec<((Vec<f64>, f64), (Vec<f64>, f64))> = (0..n_starts)
        .into_par_iter()
        .map(|idx| {
            let mut rng = stream_rng(seed, idx as u64);
            let w0: Vec<f64> = if idx == 0 {
                vec![0.0; d]
            } else {
                (0..d).map(|_| standard_normal(&mut rng)).collect()
            };
            let lower = pattern_search(u_obj, w0.clone(), &mut rng, max_evals);
            let upper = pattern_search(v_obj, w0, &mut rng, max_evals);
            (lower, upper)
        })
        .collect();
    let mut lower = &runs[0].0;
    let mut upper = &runs[0].1;
    for (lo, up) in &runs[1..] {
        if lo.1 < lower.1 {
            lower = lo;
        }
        if up.1 < upper.1 {
            upper = up;
        }
    }
    if !lower.1.is_finite() || !upper.1.is_finite() {
        let x = vec![1.0 / (m as f64).sqrt(); m];
        let y = vec![1.0 / (n as f64).sqrt(); n];
        check_vectors(t, &x, &y)?;
        crate::contraction::ratio_bounds(t, &x, &y)?;
        return Err(BiquadError::Internal("ratio search found no finite value".into()));
    }
    let (lx, ly) = chart_point(&lower.0, m);
    let (ux, uy) = chart_point(&upper.0, m);
    Ok(RhoEstimates {
        rho_star_lower: lower.1,
        rho_star_upper: -upper.1,
        arg_lower_x: lx,
        arg_lower_y: ly,
        arg_upper_x: ux,
        arg_upper_y: uy,
        n_starts,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::contraction::eval_f;

    fn values(pairs: &[MEigenpair]) -> Vec<f64> {
        pairs.iter().map(|p| p.lambda).collect()
    }

    fn distinct(sorted: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for &v in sorted {
            if out.last().map_or(true, |&l: &f64| (l - v).abs() > 1e-6) {
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn form4_matches_form() {
        let b = catalog::multiple_mplus();
        let (x, y) = ([0.6, 0.8], [0.28, 0.96]);
        let f = eval_f(&b, &x, &y).unwrap();
        assert!((form4(&b, &x, &y, &x, &y) - f).abs() < 1e-12);
    }

    #[test]
    fn angular_derivatives_match_differences() {
        let b = catalog::mixed_spectrum();
        let chart = Angles { t: &b };
        let (th, ph, e) = (0.7, 2.1, 1e-6);
        let loc = chart.local(th, ph);
        let fd = |dt: f64, dp: f64| chart.local(th + dt, ph + dp).value;
        let gt = (fd(e, 0.0) - fd(-e, 0.0)) / (2.0 * e);
        let gp = (fd(0.0, e) - fd(0.0, -e)) / (2.0 * e);
        assert!((gt - loc.grad[0]).abs() < 1e-6);
        assert!((gp - loc.grad[1]).abs() < 1e-6);
        let gt2 = |dp: f64| chart.local(th, ph + dp).grad[0];
        assert!(((gt2(e) - gt2(-e)) / (2.0 * e) - loc.hess[0][1]).abs() < 1e-5);
        let gtt = |dt: f64| chart.local(th + dt, ph).grad[0];
        assert!(((gtt(e) - gtt(-e)) / (2.0 * e) - loc.hess[0][0]).abs() < 1e-5);
    }

    #[test]
    fn canonical_sign_rules() {
        let mut v = vec![0.3, -0.9];
        canonical_sign(&mut v);
        assert_eq!(v, vec![-0.3, 0.9]);
        let mut w = vec![-0.5, 0.5];
        canonical_sign(&mut w);
        assert_eq!(w, vec![0.5, -0.5]);
    }

    #[test]
    fn classify_examples() {
        let pair = |lambda, x: [f64; 2], y: [f64; 2]| MEigenpair {
            lambda,
            x: x.to_vec(),
            y: y.to_vec(),
            class: EigenClass::M,
            residual: 0.0,
        };
        assert_eq!(classify(&pair(4.6312, [0.6639, 0.7478], [0.8774, 0.4798])).class, EigenClass::Mplusplus);
        assert_eq!(classify(&pair(2.3970, [-0.6577, 0.7533], [-0.5762, 0.8173])).class, EigenClass::M);
        assert_eq!(classify(&pair(1.0, [1.0, 0.0], [1.0, 0.0])).class, EigenClass::Mplus);
        let flipped = classify(&pair(1.0, [-0.6, -0.8], [0.6, 0.8]));
        assert_eq!(flipped.class, EigenClass::Mplusplus);
        assert_eq!(flipped.x, vec![0.6, 0.8]);
    }

    #[test]
    fn grid_oracle_on_catalog() {
        let b = catalog::multiple_mplus();
        let pairs = enumerate_2x2(&b, DEFAULT_GRID, NEWTON_TOL).unwrap();
        let expected = [10.9075, 10.9075, 10.5, 5.5925, 5.5925, 4.8202, 3.7408, 1.2332];
        assert_eq!(pairs.len(), 8, "{:?}", values(&pairs));
        for (p, e) in pairs.iter().zip(expected) {
            assert!((p.lambda - e).abs() < 1e-3, "{} vs {e}", p.lambda);
            assert!(p.residual < 1e-10);
        }
        let a = catalog::mixed_spectrum();
        let pairs = enumerate_2x2(&a, DEFAULT_GRID, NEWTON_TOL).unwrap();
        let expected = [4.6312, 2.3970, 1.7917, 1.0, -0.1142, -1.9038];
        let got = distinct(&values(&pairs));
        assert_eq!(got.len(), 6, "{got:?}");
        for (p, e) in got.iter().zip(expected) {
            assert!((p - e).abs() < 1e-3);
        }
        // three pairs share λ = 1: (e0, e1), (e1, e1) and (e0, (2, -1)/√5)
        assert_eq!(pairs.iter().filter(|p| (p.lambda - 1.0).abs() < 1e-9).count(), 3);
    }

    #[test]
    fn grid_oracle_collapses_continua() {
        let id = BiquadraticTensor::identity(2, 2).unwrap();
        let pairs = enumerate_2x2(&id, 90, NEWTON_TOL).unwrap();
        assert_eq!(values(&pairs), vec![1.0]);
        let z = BiquadraticTensor::zeros(2, 2).unwrap();
        let pairs = enumerate_2x2(&z, 90, NEWTON_TOL).unwrap();
        assert_eq!(values(&pairs), vec![0.0]);
        let c = catalog::single_corner();
        let pairs = enumerate_2x2(&c, DEFAULT_GRID, NEWTON_TOL).unwrap();
        assert_eq!(values(&pairs), vec![1.0, 0.0]);
        assert_eq!(pairs[0].x, vec![1.0, 0.0]);
        assert_eq!(pairs[1].x, vec![0.0, 1.0]);
        assert_eq!(pairs[1].y, vec![0.0, 1.0]);
        assert!(pairs.iter().all(|p| p.class != EigenClass::Mplusplus));
    }

    #[test]
    fn grid_oracle_rejects_bad_input() {
        let t = BiquadraticTensor::zeros(3, 2).unwrap();
        assert!(enumerate_2x2(&t, 720, 1e-12).is_err());
        let id = BiquadraticTensor::identity(2, 2).unwrap();
        assert!(enumerate_2x2(&id, 2, 1e-12).is_err());
    }

    #[test]
    fn lagrange_search_finds_grid_spectrum() {
        let b = catalog::multiple_mplus();
        let found = enumerate_small(&b, 500, NEWTON_TOL, 3).unwrap();
        assert!(!found.exhaustive);
        let grid = enumerate_2x2(&b, DEFAULT_GRID, NEWTON_TOL).unwrap();
        for p in &grid {
            assert!(
                found.pairs.iter().any(|q| (q.lambda - p.lambda).abs() < 1e-6),
                "missing {}",
                p.lambda
            );
        }
    }

    #[test]
    fn lagrange_search_on_identity_and_diagonal() {
        let id = BiquadraticTensor::identity(3, 3).unwrap();
        let found = enumerate_small(&id, 50, NEWTON_TOL, 1).unwrap();
        assert_eq!(values(&found.pairs), vec![1.0]);
        let mut entries = Vec::new();
        let mut value = 1.0;
        for i in 0..3 {
            for j in 0..2 {
                entries.push((i, j, i, j, value));
                value += 1.0;
            }
        }
        let d = BiquadraticTensor::from_coo(3, 2, &entries).unwrap();
        let found = enumerate_small(&d, 400, NEWTON_TOL, 9).unwrap();
        for &(i, j, _, _, v) in &entries {
            let hit = found.pairs.iter().find(|p| (p.lambda - v).abs() < 1e-9).unwrap();
            assert!((hit.x[i].abs() - 1.0).abs() < 1e-9 && (hit.y[j].abs() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn summary_of_catalog_spectra() {
        let a = catalog::mixed_spectrum();
        let pairs = enumerate_2x2(&a, DEFAULT_GRID, NEWTON_TOL).unwrap();
        let s = spectral_summary(&pairs, &a).unwrap();
        assert!((s.lambda_max - 4.6312).abs() < 1e-3);
        assert!((s.rho_m - 4.6312).abs() < 1e-3);
        assert!((s.lambda_plus_min.unwrap() - 1.0).abs() < 1e-3);
        assert_eq!(distinct(&s.mplus_set).len(), 2);
        assert_eq!(s.perron_consistent, Some(true));
        let c = catalog::single_corner();
        let pairs = enumerate_2x2(&c, DEFAULT_GRID, NEWTON_TOL).unwrap();
        let s = spectral_summary(&pairs, &c).unwrap();
        assert_eq!(s.lambda_max, 1.0);
        assert_eq!(s.lambda_plus_min, Some(0.0));
        assert!(matches!(spectral_summary(&[], &c), Err(BiquadError::EmptyList)));
    }

    #[test]
    fn rho_bounds_on_cross_coupled() {
        let t = catalog::cross_coupled();
        let r = estimate_rho_bounds(&t, 40, 11).unwrap();
        assert!((r.rho_star_lower - 0.5).abs() < 1e-4, "{}", r.rho_star_lower);
        assert!((r.rho_star_upper - 0.5).abs() < 1e-4, "{}", r.rho_star_upper);
    }

    #[test]
    fn rho_bounds_bracket_perron_value() {
        let b = catalog::multiple_mplus();
        let r = estimate_rho_bounds(&b, 40, 2).unwrap();
        assert!((r.rho_star_upper - 10.9075).abs() < 1e-3, "{}", r.rho_star_upper);
        assert!(r.rho_star_lower <= 10.5 + 1e-3, "{}", r.rho_star_lower);
    }
}
