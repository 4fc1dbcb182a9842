//! Seeded random instances and Collatz experiment reports.
//!
//! An experiment runs the Collatz iteration `repeats` times from fresh
//! random positive starts and averages iterations, solver time, final gap
//! and residual. Agreement ratios count the repeats whose final bounds are
//! within `1e-6` of the reference value: the largest `lambda_est` observed
//! in fixed-tensor mode, or a per-tensor multistart reference in
//! fresh-tensor mode.

use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::collatz::{collatz_multistart, collatz_run, random_start, CollatzConfig, CollatzStatus, AGREEMENT_TOL};
use crate::error::{BiquadError, Result};
use crate::rng::stream_rng;
use crate::tensor::BiquadraticTensor;

/// Starts used for the per-tensor reference value in fresh-tensor mode.
pub const FRESH_REFERENCE_STARTS: usize = 10;

pub const CSV_HEADER: &str = "m,n,iter,time_s,gap,res,ratio_lower,ratio_upper";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    #[default]
    UniformSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BenchMode {
    /// One tensor, a fresh start per repeat.
    #[default]
    FixedTensor,
    /// A fresh tensor and a fresh start per repeat.
    FreshTensor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub m: usize,
    pub n: usize,
    pub repeats: usize,
    pub seed: u64,
    pub collatz: CollatzConfig,
    pub generator: Generator,
    pub mode: BenchMode,
}

impl BenchConfig {
    pub fn new(m: usize, n: usize, seed: u64) -> Self {
        Self {
            m,
            n,
            repeats: 100,
            seed,
            collatz: CollatzConfig::default(),
            generator: Generator::UniformSymmetric,
            mode: BenchMode::FixedTensor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub m: usize,
    pub n: usize,
    pub repeats: usize,
    pub seed: u64,
    pub mode: BenchMode,
    pub mean_iterations: f64,
    pub mean_time_seconds: f64,
    /// Mean of `λ̄ − λ̲` at exit.
    pub mean_gap: f64,
    pub mean_residual: f64,
    pub ratio_lower: f64,
    pub ratio_upper: f64,
    /// Largest `lambda_est` over the repeats.
    pub rho_m_observed: f64,
    pub max_lower: f64,
    pub max_upper: f64,
    pub max_iterations_count: usize,
    pub stagnation_count: usize,
    pub breakdown_count: usize,
    pub error_count: usize,
}

impl BenchReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.2},{:.6e},{:.6e},{:.6e},{:.4},{:.4}",
            self.m,
            self.n,
            self.mean_iterations,
            self.mean_time_seconds,
            self.mean_gap,
            self.mean_residual,
            self.ratio_lower,
            self.ratio_upper
        )
    }
}

/// CSV with header and one row per report.
pub fn to_csv(reports: &[BenchReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Fixed-width table with the same columns as the CSV, ratios in percent.
pub fn format_table(reports: &[BenchReport]) -> String {
    let mut out = format!(
        "{:>5} {:>5} {:>8} {:>10} {:>10} {:>10} {:>8} {:>8} {:>12}\n",
        "m", "n", "Iter", "Time(s)", "gap", "Res", "lower", "upper", "rho_M"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:>5} {:>5} {:>8.2} {:>10.2e} {:>10.2e} {:>10.2e} {:>7.0}% {:>7.0}% {:>12.4}",
            r.m,
            r.n,
            r.mean_iterations,
            r.mean_time_seconds,
            r.mean_gap,
            r.mean_residual,
            100.0 * r.ratio_lower,
            100.0 * r.ratio_upper,
            r.rho_m_observed
        );
    }
    out
}

/// SplitMix64 finalizer, used to derive independent seeds.
fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Entries drawn from U(0, 1), then averaged over the orbit
/// `{(i1,j1,i2,j2), (i2,j2,i1,j1), (i2,j1,i1,j2), (i1,j2,i2,j1)}`. Each orbit
/// mean is computed once and written to every member, so the result is
/// exactly symmetric.
pub fn gen_random_symmetric_nbq(m: usize, n: usize, seed: u64) -> Result<BiquadraticTensor> {
    if m < 2 || n < 2 {
        return Err(BiquadError::InvalidArgument(format!(
            "random tensors need m, n ≥ 2, got m = {m}, n = {n}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let raw = BiquadraticTensor::from_fn(m, n, |_, _, _, _| rng.gen::<f64>())?;
    let mut out = raw.entries().to_vec();
    for k in 0..out.len() {
        let (i1, j1, i2, j2) = raw.unflatten(k);
        let orbit = [
            raw.index(i1, j1, i2, j2),
            raw.index(i2, j2, i1, j1),
            raw.index(i2, j1, i1, j2),
            raw.index(i1, j2, i2, j1),
        ];
        if orbit.iter().any(|&o| o < k) {
            continue;
        }
        let mean = orbit.iter().map(|&o| raw.entries()[o]).sum::<f64>() / 4.0;
        for o in orbit {
            out[o] = mean;
        }
    }
    BiquadraticTensor::new_dense(m, n, out)
}

struct Repeat {
    status: CollatzStatus,
    iterations: usize,
    seconds: f64,
    lower: f64,
    upper: f64,
    estimate: f64,
    residual: f64,
    reference: Option<f64>,
}

fn one_repeat(
    t: &BiquadraticTensor,
    cfg: &BenchConfig,
    start_seed: u64,
    index: usize,
    reference_seed: Option<u64>,
) -> Result<Repeat> {
    let (x0, y0) = random_start(t.m(), t.n(), start_seed, index as u64);
    let clock = Instant::now();
    let r = collatz_run(t, &x0, &y0, &cfg.collatz)?;
    let seconds = clock.elapsed().as_secs_f64();
    let reference = match reference_seed {
        Some(s) => Some(collatz_multistart(t, &cfg.collatz, FRESH_REFERENCE_STARTS, s)?.best.lambda_est),
        None => None,
    };
    Ok(Repeat {
        status: r.status,
        iterations: r.iterations,
        seconds,
        lower: r.lambda_lower,
        upper: r.lambda_upper,
        estimate: r.lambda_est,
        residual: r.residual,
        reference,
    })
}

fn validate(cfg: &BenchConfig) -> Result<()> {
    if cfg.repeats == 0 {
        return Err(BiquadError::InvalidArgument("repeats must be at least 1".into()));
    }
    Ok(())
}

fn aggregate(cfg: &BenchConfig, m: usize, n: usize, runs: Vec<Result<Repeat>>) -> BenchReport {
    let error_count = runs.iter().filter(|r| r.is_err()).count();
    let ok: Vec<Repeat> = runs.into_iter().filter_map(|r| r.ok()).collect();
    let count = ok.len().max(1) as f64;
    let mean = |f: fn(&Repeat) -> f64| ok.iter().map(f).sum::<f64>() / count;
    let fold_max = |f: fn(&Repeat) -> f64| ok.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    let rho_m_observed = fold_max(|r| r.estimate);
    let agree = |f: fn(&Repeat) -> f64| {
        ok.iter()
            .filter(|r| (f(r) - r.reference.unwrap_or(rho_m_observed)).abs() <= AGREEMENT_TOL)
            .count() as f64
            / count
    };
    let status_count = |s: CollatzStatus| ok.iter().filter(|r| r.status == s).count();
    BenchReport {
        m,
        n,
        repeats: cfg.repeats,
        seed: cfg.seed,
        mode: cfg.mode,
        mean_iterations: mean(|r| r.iterations as f64),
        mean_time_seconds: mean(|r| r.seconds),
        mean_gap: mean(|r| r.upper - r.lower),
        mean_residual: mean(|r| r.residual),
        ratio_lower: agree(|r| r.lower),
        ratio_upper: agree(|r| r.upper),
        rho_m_observed,
        max_lower: fold_max(|r| r.lower),
        max_upper: fold_max(|r| r.upper),
        max_iterations_count: status_count(CollatzStatus::MaxIterations),
        stagnation_count: status_count(CollatzStatus::ConvergedStagnation),
        breakdown_count: status_count(CollatzStatus::DegenerateBreakdown),
        error_count,
    }
}

/// Runs the configured experiment on generated tensors.
pub fn run_experiment(cfg: &BenchConfig) -> Result<BenchReport> {
    validate(cfg)?;
    let start_seed = mix(cfg.seed, 1);
    let runs: Vec<Result<Repeat>> = match cfg.mode {
        BenchMode::FixedTensor => {
            let t = gen_random_symmetric_nbq(cfg.m, cfg.n, cfg.seed)?;
            (0..cfg.repeats)
                .into_par_iter()
                .map(|r| one_repeat(&t, cfg, start_seed, r, None))
                .collect()
        }
        BenchMode::FreshTensor => (0..cfg.repeats)
            .into_par_iter()
            .map(|r| {
                let t = gen_random_symmetric_nbq(cfg.m, cfg.n, mix(cfg.seed, 2 + r as u64))?;
                one_repeat(&t, cfg, start_seed, r, Some(mix(cfg.seed, 3)))
            })
            .collect(),
    };
    Ok(aggregate(cfg, cfg.m, cfg.n, runs))
}

/// Runs the experiment on a given tensor; `cfg.m`, `cfg.n`, `cfg.mode` and
/// `cfg.generator` are ignored.
pub fn run_on_tensor(t: &BiquadraticTensor, cfg: &BenchConfig) -> Result<BenchReport> {
    validate(cfg)?;
    t.require_nonnegative()?;
    let start_seed = mix(cfg.seed, 1);
    let runs: Vec<Result<Repeat>> = (0..cfg.repeats)
        .into_par_iter()
        .map(|r| one_repeat(t, cfg, start_seed, r, None))
        .collect();
    let fixed = BenchConfig {
        mode: BenchMode::FixedTensor,
        ..cfg.clone()
    };
    Ok(aggregate(&fixed, t.m(), t.n(), runs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::tensor::SymmetryClass;

    #[test]
    fn generated_tensors_are_symmetric_and_nonnegative() {
        for seed in 0..5 {
            let t = gen_random_symmetric_nbq(3, 4, seed).unwrap();
            assert!(t.is_nonnegative());
            assert_eq!(t.classify_symmetry(0.0), SymmetryClass::Symmetric);
        }
        let a = gen_random_symmetric_nbq(3, 3, 7).unwrap();
        let b = gen_random_symmetric_nbq(3, 3, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_random_symmetric_nbq(3, 3, 8).unwrap());
        assert!(gen_random_symmetric_nbq(1, 3, 0).is_err());
    }

    #[test]
    fn report_is_deterministic_except_time() {
        let mut cfg = BenchConfig::new(4, 5, 99);
        cfg.repeats = 8;
        let mut a = run_experiment(&cfg).unwrap();
        let mut b = run_experiment(&cfg).unwrap();
        a.mean_time_seconds = 0.0;
        b.mean_time_seconds = 0.0;
        assert_eq!(a, b);
        assert!(a.rho_m_observed >= a.max_lower - 1e-12 && a.rho_m_observed <= a.max_upper + 1e-12);
    }

    #[test]
    fn fresh_mode_reports_ratios() {
        let mut cfg = BenchConfig::new(3, 3, 5);
        cfg.repeats = 6;
        cfg.mode = BenchMode::FreshTensor;
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.mode, BenchMode::FreshTensor);
        assert_eq!(r.ratio_lower, 1.0);
        assert_eq!(r.ratio_upper, 1.0);
    }

    #[test]
    fn catalog_tensor_experiment() {
        let mut cfg = BenchConfig::new(0, 0, 1);
        cfg.repeats = 20;
        let r = run_on_tensor(&catalog::multiple_mplus(), &cfg).unwrap();
        assert!((r.rho_m_observed - 10.9075).abs() < 1e-3);
        assert_eq!((r.m, r.n), (2, 2));
    }

    #[test]
    fn csv_layout() {
        let mut cfg = BenchConfig::new(3, 3, 2);
        cfg.repeats = 2;
        let r = run_experiment(&cfg).unwrap();
        let csv = to_csv(&[r]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next().unwrap().split(',').count(), 8);
        assert!(format_table(&[]).starts_with("    m"));
    }
}
