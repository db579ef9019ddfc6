//! Grover search and quantum-walk spatial search on hypercubic lattices,
//! simulated with dense state vectors.
//!
//! Layers, bottom-up: [`hilbert`] (states and reflections), [`grover`]
//! (database search and its closed forms), [`lattice`] (periodic geometry
//! and the odd/even block partition), [`walk`] (the local walk step `W`),
//! [`spatial`] (the `[W^t1 R]^t2` search loop and the ancilla-regulated
//! variant) and [`lab`] (sweeps, fits, CSV and figure reproduction).

pub mod error;
pub mod grover;
pub mod hilbert;
pub mod lab;
pub mod lattice;
pub mod spatial;
pub mod walk;

pub use error::{Error, Result};
pub use hilbert::StateVector;
pub use num_complex::Complex64;
