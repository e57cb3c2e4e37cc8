//! Bethe ansatz for Gaudin models of the Lie superalgebra gl(m|n).
//!
//! The crate covers root data for arbitrary parity sequences, finite-dimensional
//! representations realized inside tensor powers of the defining module,
//! Gaudin Hamiltonians, the weight function and Bethe ansatz equations, and
//! numerical solvers including a completeness homotopy.

pub mod bethe;
pub mod error;
pub mod gaudin;
pub mod io;
pub mod linalg;
pub mod numeric;
pub mod pipeline;
pub mod poly;
pub mod reps;
pub mod scalar;
pub mod solver;
pub mod sparse;
pub mod superalg;

pub use error::{Error, Result};
