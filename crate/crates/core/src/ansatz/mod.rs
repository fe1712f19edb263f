//! Variational separable ansatz.
//!
//! Each party of a [`Partition`] runs its own circuit from `|0…0⟩`: a
//! single-qubit party gets `R_z(φ) R_x(θ)`, a multi-qubit party gets blocks
//! of `R_x` on every qubit, a chain of canonical two-qubit gates over
//! consecutive entries of the party list, and `R_z` on every qubit.

mod circuit;
mod gates;
mod overlap;
mod partition;

pub use circuit::{build_separable_state, party_state, party_unitary_apply, AnsatzParams};
pub use gates::{canonical_two_qubit, rx, rz};
pub use overlap::{SeparableOverlap, SymmetricOverlap};
pub use partition::Partition;
