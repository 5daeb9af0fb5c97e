//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by transforms, solvers and enumerators.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Inversion of a dual number with vanishing real part.
    #[error("non-invertible dual number (zero real part)")]
    NonInvertible,
    /// Evaluation outside the domain of analyticity (on the support, on ℝ, …).
    #[error("domain error: {0}")]
    DomainError(String),
    /// Composition inverse requested at a critical point (f₁′ = 0).
    #[error("critical point: vanishing derivative in composition inverse")]
    CriticalPoint,
    /// Enumeration size cap exceeded.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    /// The designated zero-block seed is not a block of the base pairing.
    #[error("invalid block: K is not a block of the base pairing")]
    InvalidBlock,
    /// A transform value degenerated (G = 0 where F = 1/G is needed).
    #[error("degenerate value: {0}")]
    DegenerateValue(String),
    /// Measure representation not usable for the requested transform.
    #[error("unsupported representation: {0}")]
    UnsupportedRepr(String),
    /// Iterative solver failed to reach tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    /// Multiplicative subordination with Haar-type first coordinate.
    #[error("degenerate measure: vanishing first moment, ω not determined")]
    DegenerateMeasure,
    /// Stable-law parameters outside the admissible region.
    #[error("invalid stable spec: {0}")]
    InvalidSpec(String),
    /// Lemma-rs correspondence requires a centered measure.
    #[error("measure is not centered (first moment {0:.3e})")]
    NonCentered(f64),
    /// Lemma-rs correspondence requires a finite second moment.
    #[error("measure has no finite second moment")]
    InfiniteVariance,
    /// Fock truncation depth too small for the requested moment.
    #[error("truncation too shallow: depth {depth} < required {required}")]
    TruncationTooShallow { depth: usize, required: usize },
    /// Malformed input specification (JSON law files, CLI grids, …).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
