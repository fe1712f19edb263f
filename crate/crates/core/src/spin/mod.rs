//! Spin-1/2 lattice models and their ground states.

mod hamiltonian;
mod lanczos;
mod lattice;

pub use hamiltonian::{
    build_hamiltonian, saturation_field, LinearOperator, ModelKind, SpinHamiltonian, SpinModelSpec,
};
pub use lanczos::{lanczos_ground_state, lanczos_lowest, Eigenpair, LanczosConfig};
pub use lattice::{ring_lattice, square_lattice, Geometry, LatticeGraph};
