//! Spectral decomposition and null-control synthesis for the singular
//! Sturm–Liouville operator
//!
//! ```text
//! A f = -f'' + c/x² f   on (-1,1),   c = ν² - 1/4,   ν ∈ (0,1),
//! ```
//!
//! with homogeneous Dirichlet conditions at ±1 and a *coupling* self-adjoint
//! extension at the interior singularity x = 0 (transmission conditions linking
//! the two sides of 0).
//!
//! The crate provides:
//!
//! - [`special`]: real-order Bessel functions J_ν̃, derivatives, zeros, the
//!   Wronskian identity, Gamma, and the closed-form Bessel product integrals
//!   that make all norm computations exact.
//! - [`quad`]: deterministic adaptive Gauss–Legendre quadrature on subsets of
//!   (-1,1) with geometric grading toward the singular point 0.
//! - [`spectrum`]: certified eigenvalue bracketing and bisection, eigenfunction
//!   coefficients, closed-form normalization, and Hilbert-basis diagnostics.
//! - [`asymptotics`]: large-n predictions for √λ_n, the even/odd gap, and the
//!   condensation index of the eigenvalue sequence.
//! - [`control`]: truncated moment-method synthesis of internal and boundary
//!   null controls with closed-form time integrals and mode-wise certificates.
//! - [`extensions`]: classification of self-adjoint extensions under Dirichlet
//!   endpoint conditions (coupled / decoupled / invalid) and the ill-posedness
//!   demonstration for c < -1/4.
//!
//! All computations are pure and deterministic: re-running any entry point with
//! the same inputs produces bit-identical results.

pub mod asymptotics;
pub mod control;
pub mod extensions;
pub mod quad;
pub mod special;
pub mod spectrum;

/// Errors reported by the numerical routines.
///
/// Anything not covered here is a programming error and panics (e.g. indexing
/// past the end of a computed basis).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on a numeric argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// An iterative solver did not reach its tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),
    /// Quadrature finished but the error estimate exceeds the requested tolerance.
    #[error("quadrature tolerance not met: requested {requested:e}, achieved {achieved:e}")]
    ToleranceNotMet { requested: f64, achieved: f64 },
    /// The exponential Gram matrix is too ill-conditioned to invert reliably.
    #[error("gram matrix condition {condition:e} exceeds cap {cap:e}; reduce the mode count")]
    IllConditioned { condition: f64, cap: f64 },
    /// An observability mass required to be positive vanished numerically.
    #[error("zero observability mass for mode {mode}: {mass:e}")]
    ZeroMass { mode: usize, mass: f64 },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
