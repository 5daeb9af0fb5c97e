//! Type B (infinitesimal) free convolutions over the dual algebra ℂ + ħℂ.
//!
//! A type B law is a pair (μ, ν): a probability measure on ℝ together with
//! a second-coordinate functional acting as a first-order deformation.  This
//! crate computes the additive, multiplicative, and conditionally free
//! convolutions of such pairs by analytic subordination, with dual-number
//! forward propagation supplying every derivative the formulas need:
//!
//! - [`dualnum`]: the commutative algebra 𝒞 = ℂ + ħℂ, ħ² = 0;
//! - [`nc`]: non-crossing partitions of types A and B, moment ↔ cumulant
//!   transforms over arbitrary coefficient rings, colored pairing counts;
//! - [`measures`]: measure and functional representations with closed-form
//!   Cauchy/ψ transform jets and Stieltjes inversion;
//! - [`subordination`]: fixed-point solvers for ω₁, ω₂ on ℂ⁺, 𝔻, ℂ∖[0,∞);
//! - [`typeb`]: ⊞_B, ⊠_B, conditionally free ⊞_C, the ρ ↔ σ correspondence,
//!   the partial semigroup, and path-derivative verification;
//! - [`laws`]: stable laws (five φ classes), the type B Poisson family, and
//!   the Burgers/heat-system residuals;
//! - [`fock`]: the deterministic matrix model with free-creation entries;
//! - [`checks`]: bundled invariant suites for the command-line `check`.

pub mod checks;
pub mod dualnum;
pub mod error;
pub mod fock;
pub mod laws;
pub mod measures;
pub mod nc;
pub mod subordination;
pub mod typeb;

pub use dualnum::{Dual, DualComplex};
pub use error::{Error, Result};
pub use measures::{MeasureRepr, ScaledMeasure, SecondCoordRepr};
pub use subordination::{MultDomain, SolverConfig};
pub use typeb::{ConvolutionOutput, TypeBLaw};
