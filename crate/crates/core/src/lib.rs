//! Spectral analysis of nonnegative biquadratic tensors.
//!
//! A biquadratic tensor `A ∈ ℝ^{m×n×m×n}` defines the form
//! `f(x, y) = Σ a[i1,j1,i2,j2] x[i1] y[j1] x[i2] y[j2]`. Its M-eigenpairs are
//! the stationary points of `f` on the product of unit spheres. For a
//! nonnegative tensor the largest M-eigenvalue equals the M-spectral radius and
//! has a nonnegative eigenvector pair (an M⁺-eigenvalue); for irreducible
//! tensors every M⁺-eigenpair is strictly positive.
//!
//! Modules:
//!
//! | module | contents |
//! |---|---|
//! | [`tensor`] | dense storage, symmetry classes, slices |
//! | [`contraction`] | `f`, the half-gradients `g`, `h`, ratio bounds, residuals |
//! | [`structure`] | supports and (partial) irreducibility with two deciders |
//! | [`collatz`] | Collatz iteration for the largest M⁺-eigenvalue |
//! | [`oracle`] | brute-force eigenpair enumeration and spectral summaries |
//! | [`kronecker`] | `B ⊗ C` tensors and their factorized eigenpairs |
//! | [`bench`] | seeded random instances and experiment reports |
//! | [`io`] | JSON file formats |
//!
//! All indices are 0-based.

pub mod bench;
pub mod catalog;
pub mod collatz;
pub mod contraction;
pub mod error;
pub mod io;
pub mod kronecker;
pub mod linalg;
pub mod oracle;
pub mod rng;
pub mod structure;
pub mod tensor;

pub use collatz::{collatz_multistart, collatz_run, CollatzConfig, CollatzResult, CollatzStatus, StopRule};
pub use contraction::{eval_f, grad_g, grad_h, ratio_bounds, residual, RatioBounds};
pub use error::{BiquadError, Result, Side};
pub use oracle::{EigenClass, MEigenpair, SpectralSummary};
pub use structure::{irreducibility_report, IrreducibilityReport};
pub use tensor::{BiquadraticTensor, Matrix, SymmetryClass};
