//! Decomposition of complex relaxation spectra into Debye components.
//!
//! A measured spectrum `Q(T)` is modelled as a sum of Debye peaks
//!
//! ```text
//! Q(T) = Σ_j Q0_j / cosh[(E_j / R)(1/T − 1/T0_j)],   E_j = R·T0_j·ln(k_b·T0_j / (h·f))
//! ```
//!
//! and fitted by Levenberg–Marquardt least squares. The number of components is
//! chosen adaptively: starting from one component, a component is added until
//! the residuals pass a battery of adequacy tests (Anderson–Darling normality,
//! one-sample t-test for zero mean, Durbin–Watson up to lag 5, and an F-test of
//! residual variance against the known measurement-error variance).
//!
//! The peak shape is the reciprocal of `cosh` (i.e. `sech`), not the inverse
//! hyperbolic cosine that the `cosh⁻¹` notation sometimes suggests.

// `!(x > 0.0)` is used on purpose so NaN is rejected along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod decomposer;
pub mod diagnostics;
mod error;
pub mod io;
pub mod model;
pub mod optimizer;
pub mod selftest;
pub mod special;
mod spectrum;
pub mod synth;

pub use decomposer::{decompose, initial_guess, Attempt, DecompositionConfig, DecompositionResult, DofMode, Status};
pub use diagnostics::{
    assess_adequacy, AdequacyReport, DiagnosticsConfig, DurbinWatsonResult, LagStatistic, TestResult,
};
pub use error::{Error, Result};
pub use model::{DebyeComponent, DebyeModel, ParameterVector, PhysicalConstants};
pub use optimizer::{fit, fit_traced, sum_squared_residuals, FitResult, LmOptions, TerminationReason};
pub use spectrum::Spectrum;
pub use synth::{generate, SynthSpec, SyntheticSpectrum};
