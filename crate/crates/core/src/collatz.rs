//! Collatz iteration for the largest M⁺-eigenvalue of a nonnegative
//! biquadratic tensor.
//!
//! Starting from nonnegative unit vectors, each step computes `g = g(x, y)`
//! and `h = h(x, y)`, brackets the eigenvalue by the smallest and largest of
//! the ratios `g_i/x_i`, `h_j/y_j` over the positive components, and moves to
//! `x ← g/‖g‖`, `y ← h/‖h‖`. The run stops when either
//!
//! * the bracket closes: `|λ̲ − λ̄| ≤ ε`, or
//! * the bracket stops moving: `|λ̲ − λ̲_prev| + |λ̄ − λ̄_prev| ≤ ε`,
//!
//! with `λ̲_prev = −1`, `λ̄_prev = +∞` before the first step. The status
//! records which of the two fired; only the first is evidence of an
//! eigenpair. [`StopRule::GapOnly`] disables the second test.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contraction::{check_nonnegative_vector, check_vectors, gradients_unchecked, residual};
use crate::error::{BiquadError, Result};
use crate::linalg::{dot, norm2};
use crate::rng::{positive_unit_vector, stream_rng};
use crate::tensor::BiquadraticTensor;

/// Agreement threshold between a run's bounds and the best estimate.
pub const AGREEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollatzConfig {
    pub k_max: usize,
    pub epsilon: f64,
    pub record_trace: bool,
    /// Iterate on `A + shift·I` and report eigenvalues of `A`. Zero by default.
    pub shift: f64,
    pub stop_rule: StopRule,
}

/// Which stopping tests are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StopRule {
    /// Stop when the bracket closes or stops moving.
    #[default]
    GapOrStagnation,
    /// Stop only when the bracket closes.
    GapOnly,
}

impl Default for CollatzConfig {
    fn default() -> Self {
        Self {
            k_max: 1000,
            epsilon: 1e-8,
            record_trace: false,
            shift: 0.0,
            stop_rule: StopRule::GapOrStagnation,
        }
    }
}

impl CollatzConfig {
    fn validate(&self) -> Result<()> {
        if self.k_max < 1 {
            return Err(BiquadError::InvalidArgument("k_max must be at least 1".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(BiquadError::InvalidArgument("epsilon must be positive".into()));
        }
        if !self.shift.is_finite() {
            return Err(BiquadError::InvalidArgument("shift must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CollatzStatus {
    /// `|λ̲ − λ̄| ≤ ε`.
    ConvergedGap,
    /// The bounds stopped moving before the gap closed.
    ConvergedStagnation,
    MaxIterations,
    /// `g` or `h` vanished and could not be normalized.
    DegenerateBreakdown,
}

impl CollatzStatus {
    pub fn is_converged(self) -> bool {
        matches!(self, CollatzStatus::ConvergedGap | CollatzStatus::ConvergedStagnation)
    }
}

/// Bounds and form value at one iterate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub k: usize,
    pub lower: f64,
    pub upper: f64,
    /// `f(x⁽ᵏ⁾, y⁽ᵏ⁾)`.
    pub form: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollatzResult {
    pub status: CollatzStatus,
    pub lambda_lower: f64,
    pub lambda_upper: f64,
    /// Midpoint `½(λ̲ + λ̄)`.
    pub lambda_est: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Index `k` of the final iterate.
    pub iterations: usize,
    /// Eigenpair residual at `(lambda_est, x, y)`.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
}

impl CollatzResult {
    pub fn gap(&self) -> f64 {
        self.lambda_upper - self.lambda_lower
    }
}

fn prepare_start(v: &[f64], what: &str) -> Result<Vec<f64>> {
    check_nonnegative_vector(v).map_err(|e| BiquadError::InvalidStart(format!("{what}: {e}")))?;
    let norm = norm2(v);
    if !norm.is_finite() {
        return Err(BiquadError::InvalidStart(format!("{what}: non-finite norm")));
    }
    Ok(v.iter().map(|c| c / norm).collect())
}

/// Componentwise ratio bracket over the positive components only.
fn bracket(x: &[f64], y: &[f64], g: &[f64], h: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (v, w) in [(x, g), (y, h)] {
        for (&c, &d) in v.iter().zip(w) {
            if c > 0.0 {
                let r = d / c;
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
    }
    (lo, hi)
}

/// Runs the Collatz iteration from `(x0, y0)`; the starts are normalized to
/// unit Euclidean norm first.
pub fn collatz_run(
    t: &BiquadraticTensor,
    x0: &[f64],
    y0: &[f64],
    cfg: &CollatzConfig,
) -> Result<CollatzResult> {
    cfg.validate()?;
    check_vectors(t, x0, y0)?;
    let mut x = prepare_start(x0, "x0")?;
    let mut y = prepare_start(y0, "y0")?;
    let mut trace = cfg.record_trace.then(Vec::new);
    let (mut prev_lo, mut prev_hi) = (-1.0_f64, f64::INFINITY);
    let mut k = 0;
    let (status, lo, hi) = loop {
        let (mut g, mut h) = gradients_unchecked(t, &x, &y);
        if cfg.shift != 0.0 {
            g.iter_mut().zip(&x).for_each(|(a, b)| *a += cfg.shift * b);
            h.iter_mut().zip(&y).for_each(|(a, b)| *a += cfg.shift * b);
        }
        let (lo, hi) = bracket(&x, &y, &g, &h);
        if let Some(tr) = trace.as_mut() {
            tr.push(TraceStep {
                k,
                lower: lo - cfg.shift,
                upper: hi - cfg.shift,
                form: dot(&x, &g) - cfg.shift,
            });
        }
        let gap = (lo - hi).abs();
        let drift = (lo - prev_lo).abs() + (hi - prev_hi).abs();
        if gap <= cfg.epsilon {
            break (CollatzStatus::ConvergedGap, lo, hi);
        }
        if cfg.stop_rule == StopRule::GapOrStagnation && drift <= cfg.epsilon {
            break (CollatzStatus::ConvergedStagnation, lo, hi);
        }
        if k >= cfg.k_max {
            break (CollatzStatus::MaxIterations, lo, hi);
        }
        let (gn, hn) = (norm2(&g), norm2(&h));
        if !(gn > 0.0 && hn > 0.0 && gn.is_finite() && hn.is_finite()) {
            break (CollatzStatus::DegenerateBreakdown, lo, hi);
        }
        x = g.iter().map(|c| c / gn).collect();
        y = h.iter().map(|c| c / hn).collect();
        prev_lo = lo;
        prev_hi = hi;
        k += 1;
    };
    let lambda_lower = lo - cfg.shift;
    let lambda_upper = hi - cfg.shift;
    let lambda_est = 0.5 * (lambda_lower + lambda_upper);
    let residual = residual(t, lambda_est, &x, &y)?;
    Ok(CollatzResult {
        status,
        lambda_lower,
        lambda_upper,
        lambda_est,
        x,
        y,
        iterations: k,
        residual,
        trace,
    })
}

/// Aggregate of independent Collatz runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultistartResult {
    pub seed: u64,
    /// Run with the largest `lambda_est`.
    pub best: CollatzResult,
    pub per_start: Vec<CollatzResult>,
    /// Fraction of runs with `|λ̲ − best| ≤ 1e-6`.
    pub agreement_ratio_lower: f64,
    /// Fraction of runs with `|λ̄ − best| ≤ 1e-6`.
    pub agreement_ratio_upper: f64,
    pub mean_iterations: f64,
}

/// Start pair number `index` under `seed`: U(0,1) entries, normalized.
pub fn random_start(m: usize, n: usize, seed: u64, index: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = stream_rng(seed, index);
    let x = positive_unit_vector(&mut rng, m);
    let y = positive_unit_vector(&mut rng, n);
    (x, y)
}

/// Runs `n_starts` Collatz iterations from seeded random positive starts.
pub fn collatz_multistart(
    t: &BiquadraticTensor,
    cfg: &CollatzConfig,
    n_starts: usize,
    seed: u64,
) -> Result<MultistartResult> {
    if n_starts == 0 {
        return Err(BiquadError::InvalidArgument("n_starts must be at least 1".into()));
    }
    let per_start = (0..n_starts)
        .into_par_iter()
        .map(|idx| {
            let (x0, y0) = random_start(t.m(), t.n(), seed, idx as u64);
            collatz_run(t, &x0, &y0, cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    let best = per_start
        .iter()
        .fold(None::<&CollatzResult>, |acc, r| match acc {
            Some(b) if b.lambda_est >= r.lambda_est => Some(b),
            _ => Some(r),
        })
        .expect("at least one start")
        .clone();
    let count = per_start.len() as f64;
    let frac = |pick: fn(&CollatzResult) -> f64| {
        per_start
            .iter()
            .filter(|r| (pick(r) - best.lambda_est).abs() <= AGREEMENT_TOL)
            .count() as f64
            / count
    };
    let agreement_ratio_lower = frac(|r| r.lambda_lower);
    let agreement_ratio_upper = frac(|r| r.lambda_upper);
    let mean_iterations = per_start.iter().map(|r| r.iterations as f64).sum::<f64>() / count;
    Ok(MultistartResult {
        seed,
        best,
        per_start,
        agreement_ratio_lower,
        agreement_ratio_upper,
        mean_iterations,
    })
}
