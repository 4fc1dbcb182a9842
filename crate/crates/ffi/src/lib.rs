//! C ABI for the `biquad` library.
//!
//! Tensors and eigenpair lists are opaque handles created and released by
//! this library. Every fallible function returns a [`BqStatus`]; on failure
//! [`bq_last_error_message`] describes the error for the calling thread.
//! Vector arguments are passed as a pointer plus a length, and output
//! buffers must have exactly the documented length.
//!
//! Panics never cross the boundary: they are reported as
//! `BQ_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use biquad::collatz::{collatz_multistart, collatz_run, CollatzConfig, CollatzResult, CollatzStatus, StopRule};
use biquad::oracle::{enumerate_2x2, EigenClass, MEigenpair};
use biquad::structure::irreducibility_report_tol;
use biquad::{contraction, io, kronecker, BiquadError, BiquadraticTensor, Matrix};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotNonnegative = 4,
    Degenerate = 5,
    Parse = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BqCollatzStatus {
    ConvergedGap = 0,
    ConvergedStagnation = 1,
    MaxIterations = 2,
    DegenerateBreakdown = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BqEigenClass {
    M = 0,
    Mplus = 1,
    Mplusplus = 2,
}

/// Opaque tensor handle.
pub struct BqTensor(BiquadraticTensor);

/// Opaque list of eigenpairs.
pub struct BqEigenList(Vec<MEigenpair>);

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BqCollatzConfig {
    pub k_max: usize,
    pub epsilon: f64,
    /// Nonzero: stop only when the bounds meet.
    pub gap_only: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BqCollatzSummary {
    pub status: BqCollatzStatus,
    pub lambda_lower: f64,
    pub lambda_upper: f64,
    pub lambda_est: f64,
    pub iterations: usize,
    pub residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BqIrreducibility {
    pub x_partial: bool,
    pub y_partial: bool,
    pub irreducible: bool,
    pub method_agreement: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &BiquadError) -> BqStatus {
    match err {
        BiquadError::DimensionMismatch(_) | BiquadError::IndexOutOfRange(_) => BqStatus::DimensionMismatch,
        BiquadError::NotNonnegative(..) => BqStatus::NotNonnegative,
        BiquadError::DegeneratePoint { .. } => BqStatus::Degenerate,
        BiquadError::Parse(_) | BiquadError::Io(_) => BqStatus::Parse,
        BiquadError::Internal(_) => BqStatus::Internal,
        _ => BqStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Lib(BiquadError),
}

impl From<BiquadError> for Failure {
    fn from(e: BiquadError) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> BqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => BqStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            BqStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("panic inside biquad".into());
            BqStatus::Panic
        }
    }
}

unsafe fn tensor_ref<'a>(t: *const BqTensor) -> Result<&'a BiquadraticTensor, Failure> {
    t.as_ref().map(|h| &h.0).ok_or(Failure::Null("tensor"))
}

unsafe fn input<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn output<'a>(p: *mut f64, len: usize, want: usize, what: &'static str) -> Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    if len != want {
        return Err(BiquadError::DimensionMismatch(format!("{what} has length {len}, expected {want}")).into());
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn store<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed_tensor(t: BiquadraticTensor) -> *mut BqTensor {
    Box::into_raw(Box::new(BqTensor(t)))
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a tensor from `m·m·n·n` row-major entries.
///
/// # Safety
/// `entries` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bq_tensor_new_dense(
    m: usize,
    n: usize,
    entries: *const f64,
    len: usize,
    out: *mut *mut BqTensor,
) -> BqStatus {
    guard(|| {
        let data = input(entries, len, "entries")?.to_vec();
        let t = BiquadraticTensor::new_dense(m, n, data)?;
        store(out, boxed_tensor(t), "out")
    })
}

/// Parses a tensor from JSON text (`dense` or `coo` form).
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bq_tensor_from_json(json: *const c_char, out: *mut *mut BqTensor) -> BqStatus {
    guard(|| {
        if json.is_null() {
            return Err(Failure::Null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| BiquadError::Parse(e.to_string()))?;
        let t = io::parse_tensor(text)?;
        store(out, boxed_tensor(t), "out")
    })
}

/// Releases a tensor; null is ignored.
///
/// # Safety
/// `t` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bq_tensor_free(t: *mut BqTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// Pointers must be valid; `m` and `n` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bq_tensor_dims(t: *const BqTensor, m: *mut usize, n: *mut usize) -> BqStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        store(m, t.m(), "m")?;
        store(n, t.n(), "n")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bq_tensor_entry(
    t: *const BqTensor,
    i1: usize,
    j1: usize,
    i2: usize,
    j2: usize,
    out: *mut f64,
) -> BqStatus {
    guard(|| {
        let v = tensor_ref(t)?.entry(i1, j1, i2, j2)?;
        store(out, v, "out")
    })
}

/// Serializes a tensor to JSON; release the string with [`bq_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bq_tensor_to_json(t: *const BqTensor, out: *mut *mut c_char) -> BqStatus {
    guard(|| {
        let text = io::tensor_to_json(tensor_ref(t)?);
        let c = CString::new(text).map_err(|e| BiquadError::Internal(e.to_string()))?;
        store(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `f(x, y)`.
///
/// # Safety
/// `x` and `y` must point to `x_len` and `y_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bq_eval_f(
    t: *const BqTensor,
    x: *const f64,
    x_len: usize,
    y: *const f64,
    y_len: usize,
    out: *mut f64,
) -> BqStatus {
    guard(|| {
        let v = contraction::eval_f(tensor_ref(t)?, input(x, x_len, "x")?, input(y, y_len, "y")?)?;
        store(out, v, "out")
    })
}

/// `g(x, y)` into an `m`-vector.
///
/// # Safety
/// Buffers must have the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn bq_grad_g(
    t: *const BqTensor,
    x: *const f64,
    x_len: usize,
    y: *const f64,
    y_len: usize,
    out: *mut f64,
    out_len: usize,
) -> BqStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let g = contraction::grad_g(t, input(x, x_len, "x")?, input(y, y_len, "y")?)?;
        output(out, out_len, t.m(), "out")?.copy_from_slice(&g);
        Ok(())
    })
}

/// `h(x, y)` into an `n`-vector.
///
/// # Safety
/// Buffers must have the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn bq_grad_h(
    t: *const BqTensor,
    x: *const f64,
    x_len: usize,
    y: *const f64,
    y_len: usize,
    out: *mut f64,
    out_len: usize,
) -> BqStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let h = contraction::grad_h(t, input(x, x_len, "x")?, input(y, y_len, "y")?)?;
        output(out, out_len, t.n(), "out")?.copy_from_slice(&h);
        Ok(())
    })
}

/// `max(‖g − λx‖∞, ‖h − λy‖∞)`.
///
/// # Safety
/// Buffers must have the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn bq_residual(
    t: *const BqTensor,
    lambda: f64,
    x: *const f64,
    x_len: usize,
    y: *const f64,
    y_len: usize,
    out: *mut f64,
) -> BqStatus {
    guard(|| {
        let r = contraction::residual(tensor_ref(t)?, lambda, input(x, x_len, "x")?, input(y, y_len, "y")?)?;
        store(out, r, "out")
    })
}

/// Default Collatz settings: `k_max = 1000`, `epsilon = 1e-8`.
#[no_mangle]
pub extern "C" fn bq_collatz_default_config() -> BqCollatzConfig {
    let d = CollatzConfig::default();
    BqCollatzConfig {
        k_max: d.k_max,
        epsilon: d.epsilon,
        gap_only: false,
    }
}

fn to_config(cfg: &BqCollatzConfig) -> CollatzConfig {
    CollatzConfig {
        k_max: cfg.k_max,
        epsilon: cfg.epsilon,
        stop_rule: if cfg.gap_only { StopRule::GapOnly } else { StopRule::GapOrStagnation },
        ..CollatzConfig::default()
    }
}

fn summarize(r: &CollatzResult) -> BqCollatzSummary {
    BqCollatzSummary {
        status: match r.status {
            CollatzStatus::ConvergedGap => BqCollatzStatus::ConvergedGap,
            CollatzStatus::ConvergedStagnation => BqCollatzStatus::ConvergedStagnation,
            CollatzStatus::MaxIterations => BqCollatzStatus::MaxIterations,
            CollatzStatus::DegenerateBreakdown => BqCollatzStatus::DegenerateBreakdown,
        },
        lambda_lower: r.lambda_lower,
        lambda_upper: r.lambda_upper,
        lambda_est: r.lambda_est,
        iterations: r.iterations,
        residual: r.residual,
    }
}

/// Collatz iteration from `(x0, y0)`. `x_out` / `y_out` receive the final
/// vectors when non-null and must then hold `m` / `n` doubles.
///
/// # Safety
/// Buffers must have the stated lengths; `cfg` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bq_collatz_run(
    t: *const BqTensor,
    x0: *const f64,
    x_len: usize,
    y0: *const f64,
    y_len: usize,
    cfg: *const BqCollatzConfig,
    out: *mut BqCollatzSummary,
    x_out: *mut f64,
    y_out: *mut f64,
) -> BqStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let cfg = cfg.as_ref().ok_or(Failure::Null("cfg"))?;
        let r = collatz_run(t, input(x0, x_len, "x0")?, input(y0, y_len, "y0")?, &to_config(cfg))?;
        if !x_out.is_null() {
            output(x_out, t.m(), t.m(), "x_out")?.copy_from_slice(&r.x);
        }
        if !y_out.is_null() {
            output(y_out, t.n(), t.n(), "y_out")?.copy_from_slice(&r.y);
        }
        store(out, summarize(&r), "out")
    })
}

/// Multistart Collatz iteration; `out` receives the best run.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bq_collatz_multistart(
    t: *const BqTensor,
    cfg: *const BqCollatzConfig,
    n_starts: usize,
    seed: u64,
    out: *mut BqCollatzSummary,
    ratio_lower: *mut f64,
    ratio_upper: *mut f64,
) -> BqStatus {
    guard(|| {
        let t = tensor_ref(t)?;
        let cfg = cfg.as_ref().ok_or(Failure::Null("cfg"))?;
        let r = collatz_multistart(t, &to_config(cfg), n_starts, seed)?;
        store(ratio_lower, r.agreement_ratio_lower, "ratio_lower")?;
        store(ratio_upper, r.agreement_ratio_upper, "ratio_upper")?;
        store(out, summarize(&r.best), "out")
    })
}

/// Irreducibility verdicts, counting entries `> tol` as nonzero.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bq_irreducibility(t: *const BqTensor, tol: f64, out: *mut BqIrreducibility) -> BqStatus {
    guard(|| {
        let r = irreducibility_report_tol(tensor_ref(t)?, tol)?;
        store(
            out,
            BqIrreducibility {
                x_partial: r.x_partial_irreducible,
                y_partial: r.y_partial_irreducible,
                irreducible: r.irreducible,
                method_agreement: r.method_agreement,
            },
            "out",
        )
    })
}

/// All M-eigenpairs of a `2 × 2 × 2 × 2` tensor, by descending eigenvalue.
///
/// # Safety
/// Pointers must be valid; release the list with [`bq_eigen_list_free`].
#[no_mangle]
pub unsafe extern "C" fn bq_enumerate_2x2(
    t: *const BqTensor,
    grid: usize,
    tol: f64,
    out: *mut *mut BqEigenList,
) -> BqStatus {
    guard(|| {
        let pairs = enumerate_2x2(tensor_ref(t)?, grid, tol)?;
        store(out, Box::into_raw(Box::new(BqEigenList(pairs))), "out")
    })
}

/// # Safety
/// `list` must be a valid list or null (length 0).
#[no_mangle]
pub unsafe extern "C" fn bq_eigen_list_len(list: *const BqEigenList) -> usize {
    list.as_ref().map_or(0, |l| l.0.len())
}

/// Copies pair `index`. `x_out` and `y_out` must hold `m` and `n` doubles.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bq_eigen_list_get(
    list: *const BqEigenList,
    index: usize,
    lambda: *mut f64,
    x_out: *mut f64,
    x_len: usize,
    y_out: *mut f64,
    y_len: usize,
    class: *mut BqEigenClass,
) -> BqStatus {
    guard(|| {
        let list = list.as_ref().ok_or(Failure::Null("list"))?;
        let p = list.0.get(index).ok_or_else(|| {
            BiquadError::IndexOutOfRange(format!("index {index} in a list of {}", list.0.len()))
        })?;
        output(x_out, x_len, p.x.len(), "x_out")?.copy_from_slice(&p.x);
        output(y_out, y_len, p.y.len(), "y_out")?.copy_from_slice(&p.y);
        store(lambda, p.lambda, "lambda")?;
        let c = match p.class {
            EigenClass::M => BqEigenClass::M,
            EigenClass::Mplus => BqEigenClass::Mplus,
            EigenClass::Mplusplus => BqEigenClass::Mplusplus,
        };
        store(class, c, "class")
    })
}

/// # Safety
/// `list` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bq_eigen_list_free(list: *mut BqEigenList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// Tensor `b[i,k]·c[j,l]` from symmetric row-major `m × m` and `n × n`
/// matrices.
///
/// # Safety
/// `b` and `c` must hold `m·m` and `n·n` doubles.
#[no_mangle]
pub unsafe extern "C" fn bq_kron_build(
    b: *const f64,
    m: usize,
    c: *const f64,
    n: usize,
    out: *mut *mut BqTensor,
) -> BqStatus {
    guard(|| {
        let bm = Matrix::from_rows(m, m, input(b, m * m, "b")?.to_vec())?;
        let cm = Matrix::from_rows(n, n, input(c, n * n, "c")?.to_vec())?;
        let t = kronecker::kron_build(&bm, &cm)?;
        store(out, boxed_tensor(t), "out")
    })
}

/// Seeded random symmetric nonnegative tensor.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bq_gen_random_symmetric(m: usize, n: usize, seed: u64, out: *mut *mut BqTensor) -> BqStatus {
    guard(|| {
        let t = biquad::bench::gen_random_symmetric_nbq(m, n, seed)?;
        store(out, boxed_tensor(t), "out")
    })
}
