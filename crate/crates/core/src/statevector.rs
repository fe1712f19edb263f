//! Dense pure states and gate kernels.
//!
//! Basis index convention: `b = Σ_j bit_j · 2^(N-1-j)`, so qubit 0 is the most
//! significant bit and `|q0 q1 … q(N-1)⟩` reads left to right.

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Normalization slack accepted silently.
pub const NORM_TOL: f64 = 1e-10;
/// Beyond [`NORM_TOL`] and up to this deviation, inputs are renormalized with a warning.
pub const RENORM_LIMIT: f64 = 1e-6;

const UNITARY_TOL: f64 = 1e-12;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Validates length and normalization.
    ///
    /// A squared norm within [`NORM_TOL`] of one is accepted as is; up to
    /// [`RENORM_LIMIT`] the amplitudes are rescaled and a warning is logged;
    /// anything further off is rejected.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amps.len())?;
        let mut state = StateVector { n_qubits, amps };
        let norm_sqr = state.norm_sqr();
        let dev = (1.0 - norm_sqr).abs();
        if !dev.is_finite() || dev > RENORM_LIMIT {
            return Err(invalid(format!(
                "state is not normalized (sum of |amplitude|^2 = {norm_sqr})"
            )));
        }
        if dev > NORM_TOL {
            log::warn!("renormalizing state with squared norm {norm_sqr}");
            let scale = 1.0 / norm_sqr.sqrt();
            state.amps.iter_mut().for_each(|a| *a *= scale);
        }
        Ok(state)
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(invalid("cannot normalize a zero vector"));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(StateVector { n_qubits, amps })
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits >= usize::BITS as usize {
            return Err(invalid(format!("unsupported qubit count {n_qubits}")));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(invalid(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(StateVector { n_qubits, amps })
    }

    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// Caller guarantees a power-of-two length and unit norm.
    pub(crate) fn from_parts(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        StateVector { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(invalid(format!(
            "amplitude count {len} is not 2^n for n >= 1"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Single-qubit gate, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gate2(pub [[Complex64; 2]; 2]);

/// Two-qubit gate in the basis `|q_a q_b⟩`, `q_a` the more significant bit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gate4(pub [[Complex64; 4]; 4]);

macro_rules! gate_common {
    ($name:ident, $n:expr) => {
        impl $name {
            /// Checks unitarity to 1e-12 entrywise.
            pub fn new(entries: [[Complex64; $n]; $n]) -> Result<Self> {
                let g = $name(entries);
                if !g.is_unitary(UNITARY_TOL) {
                    return Err(invalid(concat!(stringify!($name), " is not unitary")));
                }
                Ok(g)
            }

            pub fn identity() -> Self {
                let mut m = [[ZERO; $n]; $n];
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = ONE;
                }
                $name(m)
            }

            pub fn dagger(&self) -> Self {
                let mut m = [[ZERO; $n]; $n];
                for i in 0..$n {
                    for j in 0..$n {
                        m[i][j] = self.0[j][i].conj();
                    }
                }
                $name(m)
            }

            /// Matrix product `self · rhs`.
            pub fn matmul(&self, rhs: &Self) -> Self {
                let mut m = [[ZERO; $n]; $n];
                for i in 0..$n {
                    for j in 0..$n {
                        m[i][j] = (0..$n).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
                    }
                }
                $name(m)
            }

            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                let mut d: f64 = 0.0;
                for i in 0..$n {
                    for j in 0..$n {
                        d = d.max((self.0[i][j] - other.0[i][j]).norm());
                    }
                }
                d
            }

            pub fn is_unitary(&self, tol: f64) -> bool {
                self.matmul(&self.dagger()).max_abs_diff(&Self::identity()) <= tol
            }
        }
    };
}

gate_common!(Gate2, 2);
gate_common!(Gate4, 4);

impl Gate2 {
    pub fn pauli_x() -> Self {
        Gate2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn hadamard() -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Gate2([[s, s], [s, -s]])
    }
}

impl Gate4 {
    /// Control is the more significant qubit.
    pub fn cnot() -> Self {
        let mut m = [[ZERO; 4]; 4];
        m[0][0] = ONE;
        m[1][1] = ONE;
        m[2][3] = ONE;
        m[3][2] = ONE;
        Gate4(m)
    }

    pub fn swap() -> Self {
        let mut m = [[ZERO; 4]; 4];
        m[0][0] = ONE;
        m[1][2] = ONE;
        m[2][1] = ONE;
        m[3][3] = ONE;
        Gate4(m)
    }
}

#[inline]
pub(crate) fn bit_mask(n_qubits: usize, qubit: usize) -> usize {
    1usize << (n_qubits - 1 - qubit)
}

/// Inserts a zero bit at position `pos` (counted from the LSB).
#[inline]
fn insert_zero_bit(x: usize, pos: u32) -> usize {
    let low = x & ((1usize << pos) - 1);
    ((x >> pos) << (pos + 1)) | low
}

/// In-place single-qubit kernel over a raw `2^n` amplitude buffer.
pub(crate) fn apply_gate2_in_place(
    amps: &mut [Complex64],
    n_qubits: usize,
    qubit: usize,
    g: &Gate2,
) {
    let stride = bit_mask(n_qubits, qubit);
    let [[g00, g01], [g10, g11]] = g.0;
    for block in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x0, x1) = (*a0, *a1);
            *a0 = g00 * x0 + g01 * x1;
            *a1 = g10 * x0 + g11 * x1;
        }
    }
}

/// In-place two-qubit kernel; `qa != qb` is the caller's responsibility.
pub(crate) fn apply_gate4_in_place(
    amps: &mut [Complex64],
    n_qubits: usize,
    qa: usize,
    qb: usize,
    g: &Gate4,
) {
    let ma = bit_mask(n_qubits, qa);
    let mb = bit_mask(n_qubits, qb);
    let (p_lo, p_hi) = {
        let pa = ma.trailing_zeros();
        let pb = mb.trailing_zeros();
        (pa.min(pb), pa.max(pb))
    };
    let m = &g.0;
    for k in 0..amps.len() / 4 {
        let base = insert_zero_bit(insert_zero_bit(k, p_lo), p_hi);
        let idx = [base, base | mb, base | ma, base | ma | mb];
        let x = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for (r, &i) in idx.iter().enumerate() {
            amps[i] = m[r][0] * x[0] + m[r][1] * x[1] + m[r][2] * x[2] + m[r][3] * x[3];
        }
    }
}

/// Kronecker product; the first factor occupies the most significant qubits.
pub fn product_state(factors: &[StateVector]) -> Result<StateVector> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| invalid("product_state needs at least one factor"))?;
    let mut amps = first.amps.clone();
    let mut n = first.n_qubits;
    for f in rest {
        let mut next = Vec::with_capacity(amps.len() * f.amps.len());
        for &a in &amps {
            next.extend(f.amps.iter().map(|&b| a * b));
        }
        amps = next;
        n += f.n_qubits;
    }
    Ok(StateVector::from_parts(n, amps))
}

pub fn apply_single_qubit_gate(
    state: &StateVector,
    qubit: usize,
    g: &Gate2,
) -> Result<StateVector> {
    if qubit >= state.n_qubits {
        return Err(invalid(format!(
            "qubit {qubit} out of range for {} qubits",
            state.n_qubits
        )));
    }
    let mut amps = state.amps.clone();
    apply_gate2_in_place(&mut amps, state.n_qubits, qubit, g);
    Ok(StateVector::from_parts(state.n_qubits, amps))
}

pub fn apply_two_qubit_gate(
    state: &StateVector,
    qubit_a: usize,
    qubit_b: usize,
    g: &Gate4,
) -> Result<StateVector> {
    let n = state.n_qubits;
    if qubit_a == qubit_b {
        return Err(invalid(format!(
            "two-qubit gate on repeated qubit {qubit_a}"
        )));
    }
    if qubit_a >= n || qubit_b >= n {
        return Err(invalid(format!(
            "qubit pair ({qubit_a}, {qubit_b}) out of range for {n} qubits"
        )));
    }
    let mut amps = state.amps.clone();
    apply_gate4_in_place(&mut amps, n, qubit_a, qubit_b, g);
    Ok(StateVector::from_parts(n, amps))
}

/// `⟨a|b⟩ = Σ conj(a_i) b_i`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.n_qubits != b.n_qubits {
        return Err(invalid(format!(
            "dimension mismatch: {} vs {} qubits",
            a.n_qubits, b.n_qubits
        )));
    }
    Ok(dot(&a.amps, &b.amps))
}

pub fn overlap_sq(a: &StateVector, b: &StateVector) -> Result<f64> {
    inner_product(a, b).map(|z| z.norm_sqr())
}

#[inline]
pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Reorders amplitudes so that `order[k]` becomes qubit `k` of the result.
///
/// `order` must be a permutation of `0..n_qubits`.
pub(crate) fn permute_qubits(
    amps: &[Complex64],
    n_qubits: usize,
    order: &[usize],
) -> Vec<Complex64> {
    debug_assert_eq!(order.len(), n_qubits);
    let masks: Vec<usize> = order.iter().map(|&q| bit_mask(n_qubits, q)).collect();
    let mut out = vec![ZERO; amps.len()];
    for (new_idx, slot) in out.iter_mut().enumerate() {
        let mut old_idx = 0usize;
        for (k, &m) in masks.iter().enumerate() {
            if new_idx & bit_mask(n_qubits, k) != 0 {
                old_idx |= m;
            }
        }
        *slot = amps[old_idx];
    }
    out
}

pub(crate) fn check_subset(n_qubits: usize, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(invalid("qubit subset is empty"));
    }
    let mut seen = vec![false; n_qubits];
    for &q in subset {
        if q >= n_qubits {
            return Err(invalid(format!(
                "qubit {q} out of range for {n_qubits} qubits"
            )));
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(invalid(format!("qubit {q} appears twice")));
        }
    }
    Ok(())
}

/// Amplitudes reshaped as a row-major `2^|subset| × 2^(N-|subset|)` matrix,
/// rows indexed by `subset` (in the given order), columns by the remaining
/// qubits in ascending order.
pub(crate) fn bipartite_matrix(
    state: &StateVector,
    subset: &[usize],
) -> (usize, usize, Vec<Complex64>) {
    let n = state.n_qubits;
    let mut order = subset.to_vec();
    order.extend((0..n).filter(|q| !subset.contains(q)));
    let rows = 1usize << subset.len();
    let cols = state.dim() / rows;
    (rows, cols, permute_qubits(&state.amps, n, &order))
}

/// Purity `Tr(ρ²)` of the reduced state on `subset`.
pub fn reduced_purity(state: &StateVector, subset: &[usize]) -> Result<f64> {
    check_subset(state.n_qubits, subset)?;
    // Spectra of complementary marginals coincide; contract over the larger side.
    let complement: Vec<usize> = (0..state.n_qubits)
        .filter(|q| !subset.contains(q))
        .collect();
    if complement.is_empty() {
        return Ok(state.norm_sqr().powi(2));
    }
    let side = if subset.len() <= complement.len() {
        subset
    } else {
        &complement[..]
    };
    let (rows, cols, m) = bipartite_matrix(state, side);
    let mut purity = 0.0;
    for i in 0..rows {
        let ri = &m[i * cols..(i + 1) * cols];
        for j in 0..rows {
            let rj = &m[j * cols..(j + 1) * cols];
            purity += dot(rj, ri).norm_sqr();
        }
    }
    Ok(purity)
}
