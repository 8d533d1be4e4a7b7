//! Numerical laboratory for the focusing nonlinear Schrödinger equation on
//! ℝ³ with a real radial potential,
//!
//! ```text
//!     i ∂ₜu + Δu − V u + |u|^{p−1} u = 0,      u(0) = u₀ ∈ H¹(ℝ³),
//! ```
//!
//! restricted to radial data. The crate computes the ground state Q of
//! −Q + ΔQ + Q^p = 0 by shooting, the sharp Gagliardo–Nirenberg constant,
//! Kato/Lebesgue norms and sign conditions of the potential, the
//! mass/energy threshold quantities that separate scattering from
//! blow-up, a spectral split-step evolution of the radial flow, and the
//! virial/Morawetz diagnostics used to monitor either regime.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line live in the companion `nlslab` crate.

#![no_std]
// Negated comparisons like `!(x > 0.0)` are deliberate: they reject NaN,
// which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod classifier;
pub mod error;
pub mod evolution;
pub mod functionals;
pub mod grid;
pub mod groundstate;
mod math;
pub mod potentials;
pub mod sweep;
pub mod transform;
pub mod virial;
pub mod weights;

pub use classifier::{classify, ThresholdReport, Verdict};
pub use error::Error;
pub use evolution::{evolve, scattering_diagnostic, EvolutionTrace, EvolveConfig, Terminal};
pub use functionals::{
    coercivity_gap, hardy_check, snapshot, threshold_products, FunctionalSnapshot, ThresholdRatio,
};
pub use grid::{gradient_sq_norm, integrate3d, Parity, RadialField, RadialGrid};
pub use groundstate::{rescale, sharp_gn_constant, solve_ground_state, GroundState};
pub use potentials::{inverse_square_floor_check, kato_norm, Potential, PotentialReport};
pub use transform::SineTransform;
pub use virial::{morawetz_average, virial_consistency, virial_eval, VirialSeries};
pub use weights::{Weight, WeightKind};

// The complex type of `RadialField` values comes from here; re-exported so
// downstream crates share one version.
pub use num_complex;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
