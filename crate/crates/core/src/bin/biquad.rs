//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 when the Collatz iteration hits its iteration
//! cap, 1 on any error (including usage errors).

use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use biquad::bench::{self, BenchConfig, BenchMode, BenchReport};
use biquad::collatz::{collatz_multistart, CollatzConfig, CollatzStatus, MultistartResult, StopRule};
use biquad::io::{read_matrix, read_tensor, tensor_to_json};
use biquad::kronecker::kron_build;
use biquad::oracle::{self, MEigenpair, RhoEstimates, SpectralSummary};
use biquad::structure::{irreducibility_report_tol, IrreducibilityReport, ReducibilityWitness};
use biquad::{BiquadError, BiquadraticTensor, SymmetryClass};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Tolerance for symmetry and nonzero tests on tensors read from files.
const PARSED_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(name = "biquad", version, about = "Spectral analysis of nonnegative biquadratic tensors")]
struct Cli {
    /// Output format; defaults to `table` on a terminal and `json` otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for every random choice; drawn from entropy and echoed to stderr
    /// when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Fixed,
    Fresh,
}

#[derive(Subcommand)]
enum Command {
    /// Largest M⁺-eigenvalue by multistart Collatz iteration.
    Eig {
        tensor: PathBuf,
        #[arg(long, default_value_t = 100)]
        starts: usize,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        #[arg(long, default_value_t = 1000)]
        kmax: usize,
        /// Include the per-step bounds of the best run.
        #[arg(long)]
        trace: bool,
        /// Stop only when the bounds meet, ignoring stagnation.
        #[arg(long)]
        gap_only: bool,
        /// Run on tensors with negative entries (with a warning).
        #[arg(long)]
        allow_general: bool,
    },
    /// Enumerate M-eigenpairs (exhaustive grid search for 2 × 2 tensors).
    Spectrum {
        tensor: PathBuf,
        #[arg(long, default_value_t = oracle::DEFAULT_GRID)]
        grid: usize,
        /// Starts for the search used on larger tensors.
        #[arg(long, default_value_t = 500)]
        starts: usize,
    },
    /// Partial and full irreducibility with a reducibility witness.
    Irreducible { tensor: PathBuf },
    /// Estimate ρ_* = inf u and ρ* = sup v.
    Bounds {
        tensor: PathBuf,
        #[arg(long, default_value_t = oracle::DEFAULT_RHO_STARTS)]
        starts: usize,
    },
    /// Build the tensor b[i,k]·c[j,l] from two symmetric matrix files.
    Kron {
        b: PathBuf,
        c: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Collatz experiment on random symmetric tensors (or a given tensor).
    Bench {
        #[arg(long, default_value_t = 10)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        repeats: usize,
        #[arg(long, value_enum, default_value = "fixed")]
        mode: Mode,
        /// Use this tensor instead of generating one.
        #[arg(long)]
        tensor: Option<PathBuf>,
        /// Also write the CSV report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random symmetric nonnegative tensor.
    Gen {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

type CliResult = Result<ExitCode, BiquadError>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<(), BiquadError> {
    let Ok(value) = std::env::var("BIQUAD_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .map_err(|_| BiquadError::InvalidArgument(format!("BIQUAD_THREADS={value} is not a count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| BiquadError::Internal(e.to_string()))
}

fn run(cli: Cli) -> CliResult {
    let format = cli.format.unwrap_or(if std::io::stdout().is_terminal() {
        Format::Table
    } else {
        Format::Json
    });
    let seed = || {
        cli.seed.unwrap_or_else(|| {
            let s = rand::random::<u64>();
            eprintln!("seed: {s}");
            s
        })
    };
    match cli.command {
        Command::Eig {
            tensor,
            starts,
            eps,
            kmax,
            trace,
            gap_only,
            allow_general,
        } => {
            let t = load_tensor(&tensor)?;
            check_nonnegative(&t, allow_general)?;
            let cfg = CollatzConfig {
                k_max: kmax,
                epsilon: eps,
                record_trace: trace,
                stop_rule: if gap_only { StopRule::GapOnly } else { StopRule::GapOrStagnation },
                ..CollatzConfig::default()
            };
            let result = collatz_multistart(&t, &cfg, starts, seed())?;
            emit(format, &EigOutput::from(&result), eig_table, eig_csv)?;
            Ok(match result.best.status {
                CollatzStatus::ConvergedGap | CollatzStatus::ConvergedStagnation => ExitCode::SUCCESS,
                CollatzStatus::MaxIterations => ExitCode::from(2),
                CollatzStatus::DegenerateBreakdown => {
                    eprintln!("error: iteration broke down (g or h vanished)");
                    ExitCode::from(1)
                }
            })
        }
        Command::Spectrum { tensor, grid, starts } => {
            let t = load_tensor(&tensor)?;
            let (pairs, exhaustive) = if t.m() == 2 && t.n() == 2 {
                (oracle::enumerate_2x2(&t, grid, oracle::NEWTON_TOL)?, true)
            } else {
                eprintln!("warning: m, n > 2; the stationary-point search is not exhaustive");
                let found = oracle::enumerate_small(&t, starts, oracle::NEWTON_TOL, seed())?;
                (found.pairs, false)
            };
            let summary = oracle::spectral_summary(&pairs, &t)?;
            let out = SpectrumOutput {
                exhaustive,
                pairs,
                summary,
            };
            emit(format, &out, spectrum_table, spectrum_csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Irreducible { tensor } => {
            let t = load_tensor(&tensor)?;
            let report = irreducibility_report_tol(&t, PARSED_TOL)?;
            emit(format, &report, irreducible_table, irreducible_csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { tensor, starts } => {
            let t = load_tensor(&tensor)?;
            let est = oracle::estimate_rho_bounds(&t, starts, seed())?;
            emit(format, &est, bounds_table, bounds_csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Kron { b, c, out } => {
            let (b, c) = (read_matrix(&b)?, read_matrix(&c)?);
            let t = kron_build(&b, &c)?;
            write_or_print(out.as_deref(), &tensor_to_json(&t))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            m,
            n,
            repeats,
            mode,
            tensor,
            out,
        } => {
            let mut cfg = BenchConfig::new(m, n, seed());
            cfg.repeats = repeats;
            cfg.mode = match mode {
                Mode::Fixed => BenchMode::FixedTensor,
                Mode::Fresh => BenchMode::FreshTensor,
            };
            let report = match tensor {
                Some(path) => bench::run_on_tensor(&load_tensor(&path)?, &cfg)?,
                None => bench::run_experiment(&cfg)?,
            };
            if let Some(path) = out {
                std::fs::write(&path, bench::to_csv(std::slice::from_ref(&report)))?;
            }
            emit(
                format,
                &report,
                |r: &BenchReport| bench::format_table(std::slice::from_ref(r)),
                |r: &BenchReport| bench::to_csv(std::slice::from_ref(r)),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { m, n, out } => {
            let t = bench::gen_random_symmetric_nbq(m, n, seed())?;
            write_or_print(out.as_deref(), &tensor_to_json(&t))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_tensor(path: &Path) -> Result<BiquadraticTensor, BiquadError> {
    let t = read_tensor(path)?;
    if t.classify_symmetry(PARSED_TOL) == SymmetryClass::General {
        log::info!("{} is not weakly symmetric", path.display());
    }
    Ok(t)
}

fn check_nonnegative(t: &BiquadraticTensor, allow_general: bool) -> Result<(), BiquadError> {
    match t.require_nonnegative() {
        Err(e) if allow_general => {
            eprintln!("warning: {e}; results carry no Perron–Frobenius guarantees");
            Ok(())
        }
        other => other,
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), BiquadError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit<T: Serialize>(
    format: Format,
    value: &T,
    table: impl Fn(&T) -> String,
    csv: impl Fn(&T) -> String,
) -> Result<(), BiquadError> {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Table => table(value),
        Format::Csv => csv(value),
    };
    std::io::stdout().write_all(text.as_bytes())?;
    Ok(())
}

#[derive(Serialize)]
struct EigOutput<'a> {
    seed: u64,
    starts: usize,
    lambda_est: f64,
    lambda_lower: f64,
    lambda_upper: f64,
    iterations: usize,
    residual: f64,
    status: CollatzStatus,
    x: &'a [f64],
    y: &'a [f64],
    agreement_ratio_lower: f64,
    agreement_ratio_upper: f64,
    mean_iterations: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a [biquad::collatz::TraceStep]>,
}

impl<'a> From<&'a MultistartResult> for EigOutput<'a> {
    fn from(r: &'a MultistartResult) -> Self {
        let b = &r.best;
        EigOutput {
            seed: r.seed,
            starts: r.per_start.len(),
            lambda_est: b.lambda_est,
            lambda_lower: b.lambda_lower,
            lambda_upper: b.lambda_upper,
            iterations: b.iterations,
            residual: b.residual,
            status: b.status,
            x: &b.x,
            y: &b.y,
            agreement_ratio_lower: r.agreement_ratio_lower,
            agreement_ratio_upper: r.agreement_ratio_upper,
            mean_iterations: r.mean_iterations,
            trace: b.trace.as_deref(),
        }
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|c| format!("{c:>8.4}")).collect();
    format!("({})", parts.join(", "))
}

fn eig_table(o: &EigOutput) -> String {
    let mut s = format!(
        "lambda_est   {:.10}\nbounds       [{:.10}, {:.10}]\niterations   {}\nresidual     {:.3e}\nstatus       {:?}\nx            {}\ny            {}\nstarts       {} (mean iterations {:.2})\nagreement    {:.0}% / {:.0}%\nseed         {}\n",
        o.lambda_est,
        o.lambda_lower,
        o.lambda_upper,
        o.iterations,
        o.residual,
        o.status,
        fmt_vec(o.x),
        fmt_vec(o.y),
        o.starts,
        o.mean_iterations,
        100.0 * o.agreement_ratio_lower,
        100.0 * o.agreement_ratio_upper,
        o.seed
    );
    if let Some(trace) = o.trace {
        s.push_str("\n    k        lower        upper\n");
        for step in trace {
            s.push_str(&format!("{:>5} {:>12.8} {:>12.8}\n", step.k, step.lower, step.upper));
        }
    }
    s
}

fn eig_csv(o: &EigOutput) -> String {
    format!(
        "lambda_est,lambda_lower,lambda_upper,iterations,residual,status,ratio_lower,ratio_upper\n{},{},{},{},{},{:?},{},{}\n",
        o.lambda_est,
        o.lambda_lower,
        o.lambda_upper,
        o.iterations,
        o.residual,
        o.status,
        o.agreement_ratio_lower,
        o.agreement_ratio_upper
    )
}

#[derive(Serialize)]
struct SpectrumOutput {
    exhaustive: bool,
    pairs: Vec<MEigenpair>,
    summary: SpectralSummary,
}

fn spectrum_table(o: &SpectrumOutput) -> String {
    let mut s = format!("{:>10}  {:<5} {:<24} {:<24}\n", "lambda", "class", "x", "y");
    for p in &o.pairs {
        s.push_str(&format!(
            "{:>10.4}  {:<5} {:<24} {:<24}\n",
            p.lambda,
            p.class.to_string(),
            fmt_vec(&p.x),
            fmt_vec(&p.y)
        ));
    }
    let sm = &o.summary;
    s.push_str(&format!("\nlambda_max   {:.4}\nrho_M        {:.4}\n", sm.lambda_max, sm.rho_m));
    match sm.lambda_plus_min {
        Some(v) => s.push_str(&format!("lambda+_min  {v:.4}\n")),
        None => s.push_str("lambda+_min  none\n"),
    }
    if !o.exhaustive {
        s.push_str("(search is not exhaustive)\n");
    }
    s
}

fn spectrum_csv(o: &SpectrumOutput) -> String {
    let (m, n) = o.pairs.first().map_or((0, 0), |p| (p.x.len(), p.y.len()));
    let mut s = String::from("lambda,class,residual");
    (0..m).for_each(|i| s.push_str(&format!(",x{i}")));
    (0..n).for_each(|j| s.push_str(&format!(",y{j}")));
    s.push('\n');
    for p in &o.pairs {
        s.push_str(&format!("{},{:?},{}", p.lambda, p.class, p.residual));
        p.x.iter().chain(&p.y).for_each(|c| s.push_str(&format!(",{c}")));
        s.push('\n');
    }
    s
}

fn describe_witness(w: &Option<ReducibilityWitness>) -> String {
    match w {
        None => "none".into(),
        Some(ReducibilityWitness::X { block, j }) => format!("x block {block:?} in slice j = {j}"),
        Some(ReducibilityWitness::Y { i, block }) => format!("y block {block:?} in slice i = {i}"),
    }
}

fn irreducible_table(r: &IrreducibilityReport) -> String {
    format!(
        "x_partial    {}\ny_partial    {}\nirreducible  {}\nwitness      {}\nagreement    {}\n",
        r.x_partial_irreducible,
        r.y_partial_irreducible,
        r.irreducible,
        describe_witness(&r.witness),
        r.method_agreement
    )
}

fn irreducible_csv(r: &IrreducibilityReport) -> String {
    format!(
        "x_partial,y_partial,irreducible,method_agreement\n{},{},{},{}\n",
        r.x_partial_irreducible, r.y_partial_irreducible, r.irreducible, r.method_agreement
    )
}

fn bounds_table(r: &RhoEstimates) -> String {
    format!(
        "rho_lower    {:.8}  at x = {}, y = {}\nrho_upper    {:.8}  at x = {}, y = {}\nstarts       {}\nseed         {}\n",
        r.rho_star_lower,
        fmt_vec(&r.arg_lower_x),
        fmt_vec(&r.arg_lower_y),
        r.rho_star_upper,
        fmt_vec(&r.arg_upper_x),
        fmt_vec(&r.arg_upper_y),
        r.n_starts,
        r.seed
    )
}

fn bounds_csv(r: &RhoEstimates) -> String {
    format!("rho_lower,rho_upper\n{},{}\n", r.rho_star_lower, r.rho_star_upper)
}
