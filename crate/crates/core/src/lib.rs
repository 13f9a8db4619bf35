//! Correlated-noise Pauli channels on blocks of `d` qudits, each of
//! dimension `d`.
//!
//! The crate has two independent routes to every quantity of interest and
//! cross-validates them:
//!
//! - [`oracle`]: exact dense simulation. Channels are applied to full
//!   `d^d`-dimensional density matrices and entropies come from Hermitian
//!   eigendecompositions. Slow but first-principles; this is the ground
//!   truth.
//! - [`closed`]: analytic expressions for fidelity and Holevo mutual
//!   information of the studied input families (maximally entangled basis,
//!   computational product basis, and two one-parameter interpolating
//!   families). Fast enough for dense parameter sweeps.
//!
//! [`analysis`] ties the two together: memory-parameter sweeps with oracle
//! spot-checks, crossover-threshold finding, and a seeded validation harness
//! that measures the closed-form-vs-oracle error over randomized channels.
//!
//! Everything is generic over the real scalar type (`f32`/`f64`) via
//! [`num::Real`]; concrete `f64` aliases are re-exported at the crate root.

pub mod algebra;
pub mod analysis;
pub mod closed;
pub mod error;
pub mod noise;
pub mod num;
pub mod oracle;
pub mod states;

pub use error::{Error, Result};
pub use num::{c64, C64, CMat, CMat64, CVec, CVec64, Cplx, Real};

pub use algebra::{PauliIndex, QuditDim};
pub use closed::{Method, MutualInfoResult};
pub use noise::{CorrelatedChannel, KrausTerm, PauliProbTable};
pub use oracle::{DensityMatrix, EnsembleSpec, StateFamily};
pub use states::{DiagonalCoeffs, StateVector};
