use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ansatz::Partition;
use crate::error::{invalid, Result};
use crate::statevector::{bipartite_matrix, StateVector};

fn check(state: &StateVector, bipartition: &Partition) -> Result<()> {
    if bipartition.n_parties() != 2 {
        return Err(invalid(format!(
            "Schmidt decomposition needs two parties, got {}",
            bipartition.n_parties()
        )));
    }
    if bipartition.n_qubits() != state.n_qubits() {
        return Err(invalid("partition and state sizes differ"));
    }
    Ok(())
}

/// Schmidt coefficients across the cut, in descending order.
pub fn schmidt_coefficients(state: &StateVector, bipartition: &Partition) -> Result<Vec<f64>> {
    check(state, bipartition)?;
    let (rows, cols, m) = bipartite_matrix(state, &bipartition.parties()[0]);
    let mat = DMatrix::<Complex64>::from_row_slice(rows, cols, &m);
    let mut sv: Vec<f64> = mat.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Largest squared Schmidt coefficient, the maximal overlap with any product
/// across the cut.
pub fn schmidt_max_overlap(state: &StateVector, bipartition: &Partition) -> Result<f64> {
    Ok(schmidt_coefficients(state, bipartition)?[0].powi(2))
}
