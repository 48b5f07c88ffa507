//! Unified-(q,s) entropies and entanglement measures for few-qubit states,
//! together with an engine that evaluates monogamy and polygamy bounds on
//! them and a seeded audit harness that checks those bounds on Haar-random
//! ensembles.
//!
//! Module map:
//!
//! - [`spectral`]: dense Hermitian kernel (Jacobi eigensolver, matrix powers and roots).
//! - [`qstate`]: pure states, density matrices, partial traces, named states, Haar sampling.
//! - [`entropy`]: the unified-(q,s) entropy with its Rényi, Tsallis and von Neumann limits.
//! - [`measures`]: concurrence, entanglement of formation and unified-(q,s) entanglement.
//! - [`bounds`]: scalar lemmas, monogamy and polygamy bounds, tightness comparisons.
//! - [`audit`]: randomized certification and parameter sweeps.
//!
//! All logarithms are base 2.

pub mod audit;
pub mod bounds;
pub mod entropy;
mod error;
mod par;
pub use par::Execution;
pub mod measures;
pub mod qstate;
pub mod spectral;

pub use error::{Error, Result};

pub use num_complex::Complex64;
