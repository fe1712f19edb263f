//! Fast `⟨φ(params)|ψ⟩` for a fixed target and partition.
//!
//! The target is permuted once so that every party occupies a contiguous
//! block of qubits; the overlap is then a sequence of small contractions
//! against the local party states, `O(2^N)` per evaluation.

use num_complex::Complex64;

use super::circuit::{party_amplitudes, split_flat, AnsatzParams};
use super::partition::Partition;
use crate::error::{invalid, Result};
use crate::statevector::{permute_qubits, StateVector};

/// Contracts the leading `vec.len()` rows of `tensor` with `conj(vec)`.
fn contract_leading(vec: &[Complex64], tensor: &[Complex64]) -> Vec<Complex64> {
    let rest = tensor.len() / vec.len();
    let mut out = vec![Complex64::new(0.0, 0.0); rest];
    for (row, v) in tensor.chunks_exact(rest).zip(vec) {
        let w = v.conj();
        for (o, t) in out.iter_mut().zip(row) {
            *o += w * t;
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct SeparableOverlap {
    partition: Partition,
    layers: usize,
    permuted: Vec<Complex64>,
}

impl SeparableOverlap {
    pub fn new(target: &StateVector, partition: &Partition, layers: usize) -> Result<Self> {
        if target.n_qubits() != partition.n_qubits() {
            return Err(invalid(format!(
                "target has {} qubits, partition covers {}",
                target.n_qubits(),
                partition.n_qubits()
            )));
        }
        if layers == 0 {
            return Err(invalid("layers must be at least 1"));
        }
        let permuted = permute_qubits(
            target.amplitudes(),
            target.n_qubits(),
            &partition.qubit_order(),
        );
        Ok(SeparableOverlap {
            partition: partition.clone(),
            layers,
            permuted,
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn dim(&self) -> usize {
        AnsatzParams::dim(&self.partition, self.layers)
    }

    /// Local party states for a flat parameter vector.
    pub fn party_states(&self, x: &[f64]) -> Vec<Vec<Complex64>> {
        split_flat(&self.partition, self.layers, x)
            .into_iter()
            .zip(self.partition.parties())
            .map(|(s, party)| party_amplitudes(party.len(), &s.theta, &s.phi, &s.weyl, self.layers))
            .collect()
    }

    /// `⟨φ(x)|ψ⟩`; panics if `x.len() != self.dim()`.
    pub fn amplitude(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.dim(), "parameter vector length");
        let states = self.party_states(x);
        let (first, rest) = states.split_first().expect("partition has a party");
        let mut t = contract_leading(first, &self.permuted);
        for s in rest {
            t = contract_leading(s, &t);
        }
        t[0]
    }

    /// `|⟨φ(x)|ψ⟩|²`.
    pub fn overlap(&self, x: &[f64]) -> f64 {
        self.amplitude(x).norm_sqr()
    }
}

/// Overlap with `u(θ, φ)^⊗N`, one rotation pair shared by all qubits.
#[derive(Clone, Debug)]
pub struct SymmetricOverlap {
    target: Vec<Complex64>,
    n_qubits: usize,
}

impl SymmetricOverlap {
    pub fn new(target: &StateVector) -> Self {
        SymmetricOverlap {
            target: target.amplitudes().to_vec(),
            n_qubits: target.n_qubits(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `x = [θ, φ]`.
    pub fn overlap(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), 2, "symmetric ansatz takes (theta, phi)");
        let u = party_amplitudes(1, &x[..1], &x[1..], &[], 1);
        let mut t = contract_leading(&u, &self.target);
        while t.len() > 1 {
            t = contract_leading(&u, &t);
        }
        t[0].norm_sqr()
    }

    /// The flat parameters of the equivalent global-partition ansatz.
    pub fn expand(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![x[0]; self.n_qubits];
        out.extend(std::iter::repeat_n(x[1], self.n_qubits));
        out
    }
}
