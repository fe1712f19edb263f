//! Geometric entanglement of N-qubit pure states across arbitrary
//! partitions, computed by maximizing the overlap with a variational
//! separable ansatz.
//!
//! The crate is organized bottom-up:
//!
//! - [`statevector`]: dense amplitudes, gate kernels, inner products.
//! - [`ansatz`]: partitions, rotation and canonical two-qubit gates, and the
//!   separable circuit state.
//! - [`optimizer`]: Sobol global search, finite-difference BFGS and the
//!   two-stage GE driver.
//! - [`spin`]: lattices, matrix-free XY/XXZ Hamiltonians and Lanczos.
//! - [`oracles`]: benchmark states and independent GE ground truths.
//! - [`sweep`]: field sweeps and validation runs emitting CSV.

pub mod ansatz;
pub mod error;
pub mod optimizer;
pub mod oracles;
pub mod spin;
pub mod state_file;
pub mod statevector;
pub mod sweep;

pub use ansatz::{AnsatzParams, Partition};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use optimizer::{compute_ge, compute_ge_symmetric, GeResult, OptimizerConfig};
pub use spin::{LatticeGraph, ModelKind, SpinModelSpec};
pub use statevector::{Gate2, Gate4, StateVector};
