//! Closed-form Gaussian ergotropy for bosonic systems with quadratic
//! Hamiltonians, together with the symplectic machinery it rests on and
//! independent numerical oracles that cross-check every closed formula.
//!
//! Conventions: ħ = 1, vacuum covariance = identity, xpxp quadrature
//! ordering, entropies in nats.

pub mod channels;
pub mod ergotropy;
pub mod error;
pub mod io;
mod linalg;
pub mod oracle;
pub mod sampling;
pub mod states;
pub mod symplectic;

pub use error::{Error, Result};
