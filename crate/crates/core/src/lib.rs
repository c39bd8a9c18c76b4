//! Entanglement of two-mode Gaussian states.
//!
//! Two computable families of entanglement measures are provided side by side:
//!
//! * negativities, functions of the smallest partially-transposed symplectic
//!   eigenvalue `ν̃₋` ([`negativity`]);
//! * Gaussian convex-roof measures, obtained by minimising the single-mode
//!   determinant of the optimal pure state over the rim of two light cones
//!   ([`gaussian_em`]).
//!
//! Closed forms for the states of extremal negativity at fixed purities live in
//! [`extremal`], the bound curves and the random-state experiment in [`bounds`].
//! The `gaussent` binary in this crate wraps everything in [`cli`].
//!
//! All covariance matrices use the convention `[X_i, X_j] = 2iΩ_ij`, so the
//! vacuum has the identity as covariance matrix.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod gaussian_em;
pub mod negativity;
pub mod optimize;
pub mod report;
pub mod symplectic;

pub use error::{Error, Result};
pub use extremal::{ExtremalParams, OrderingVerdict, Regime};
pub use gaussian_em::{GammaCoordinates, GemOptions, GemResult};
pub use negativity::{LogBase, NegativityReport};
pub use symplectic::{CovarianceMatrix, StandardForm, SymplecticInvariants, SymplecticSpectrum};

/// Default absolute tolerance on inequality slack for physicality checks.
pub const DEFAULT_TOL: f64 = 1e-10;
