use num_complex::Complex64;

use super::gates::{canonical_two_qubit, rx, rz};
use super::partition::Partition;
use crate::error::{invalid, Result};
use crate::statevector::{apply_gate2_in_place, apply_gate4_in_place, StateVector};

/// Variational angles, in radians.
///
/// Every party repeats `layers` blocks, each block carrying its own `θ`, `φ`
/// per qubit and one Weyl triple `(c1, c2, c3)` per chain bond.
///
/// - `theta[l * N + q]`, `phi[l * N + q]`: qubit `q` in block `l`.
/// - `weyl[l * B + b]`: bond `b` in block `l`, bonds enumerated party by party
///   along each chain, `B = Σ (m_i - 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzParams {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub weyl: Vec<[f64; 3]>,
    pub layers: usize,
}

impl AnsatzParams {
    pub fn zeros(partition: &Partition, layers: usize) -> Self {
        let n = partition.n_qubits();
        AnsatzParams {
            theta: vec![0.0; layers * n],
            phi: vec![0.0; layers * n],
            weyl: vec![[0.0; 3]; layers * partition.bond_count()],
            layers,
        }
    }

    /// Number of real parameters, `layers · (2N + 3B)`.
    pub fn dim(partition: &Partition, layers: usize) -> usize {
        layers * (2 * partition.n_qubits() + 3 * partition.bond_count())
    }

    /// Unpacks `θ ‖ φ ‖ weyl` as laid out by [`AnsatzParams::to_flat`].
    pub fn from_flat(partition: &Partition, layers: usize, x: &[f64]) -> Result<Self> {
        if layers == 0 {
            return Err(invalid("layers must be at least 1"));
        }
        let expected = Self::dim(partition, layers);
        if x.len() != expected {
            return Err(invalid(format!(
                "expected {expected} parameters, got {}",
                x.len()
            )));
        }
        let nl = layers * partition.n_qubits();
        let (theta, rest) = x.split_at(nl);
        let (phi, weyl) = rest.split_at(nl);
        Ok(AnsatzParams {
            theta: theta.to_vec(),
            phi: phi.to_vec(),
            weyl: weyl.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect(),
            layers,
        })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.theta.len() * 2 + self.weyl.len() * 3);
        x.extend_from_slice(&self.theta);
        x.extend_from_slice(&self.phi);
        x.extend(self.weyl.iter().flatten());
        x
    }

    pub fn check(&self, partition: &Partition) -> Result<()> {
        let n = partition.n_qubits();
        let b = partition.bond_count();
        if self.layers == 0
            || self.theta.len() != self.layers * n
            || self.phi.len() != self.layers * n
            || self.weyl.len() != self.layers * b
        {
            return Err(invalid(format!(
                "parameters sized (theta {}, phi {}, weyl {}, layers {}) do not fit \
                 {n} qubits with {b} bonds",
                self.theta.len(),
                self.phi.len(),
                self.weyl.len(),
                self.layers
            )));
        }
        Ok(())
    }
}

/// Per-party parameter slices in block-major order.
pub(crate) struct PartySlices {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub weyl: Vec<[f64; 3]>,
}

/// Gathers each party's slices out of a flat `θ ‖ φ ‖ weyl` vector.
pub(crate) fn split_flat(partition: &Partition, layers: usize, x: &[f64]) -> Vec<PartySlices> {
    let n = partition.n_qubits();
    let b = partition.bond_count();
    let phi_off = layers * n;
    let weyl_off = 2 * layers * n;
    let mut bond_start = 0;
    partition
        .parties()
        .iter()
        .map(|party| {
            let m = party.len();
            let mut s = PartySlices {
                theta: Vec::with_capacity(layers * m),
                phi: Vec::with_capacity(layers * m),
                weyl: Vec::with_capacity(layers * (m - 1)),
            };
            for l in 0..layers {
                for &q in party {
                    s.theta.push(x[l * n + q]);
                    s.phi.push(x[phi_off + l * n + q]);
                }
                for k in 0..m - 1 {
                    let at = weyl_off + 3 * (l * b + bond_start + k);
                    s.weyl.push([x[at], x[at + 1], x[at + 2]]);
                }
            }
            bond_start += m - 1;
            s
        })
        .collect()
}

fn check_slices(
    m: usize,
    theta: &[f64],
    phi: &[f64],
    weyl: &[[f64; 3]],
    layers: usize,
) -> Result<()> {
    if layers == 0 {
        return Err(invalid("layers must be at least 1"));
    }
    if m == 0
        || theta.len() != layers * m
        || phi.len() != layers * m
        || weyl.len() != layers * (m - 1)
    {
        return Err(invalid(format!(
            "slice sizes (theta {}, phi {}, weyl {}) do not fit a {m}-qubit party with {layers} layer(s)",
            theta.len(),
            phi.len(),
            weyl.len()
        )));
    }
    Ok(())
}

/// Runs the party circuit on `qubits` of a raw register.
fn run_party(
    amps: &mut [Complex64],
    n_qubits: usize,
    qubits: &[usize],
    theta: &[f64],
    phi: &[f64],
    weyl: &[[f64; 3]],
    layers: usize,
) {
    let m = qubits.len();
    for l in 0..layers {
        for (k, &q) in qubits.iter().enumerate() {
            apply_gate2_in_place(amps, n_qubits, q, &rx(theta[l * m + k]));
        }
        for (k, pair) in qubits.windows(2).enumerate() {
            let [c1, c2, c3] = weyl[l * (m - 1) + k];
            apply_gate4_in_place(
                amps,
                n_qubits,
                pair[0],
                pair[1],
                &canonical_two_qubit(c1, c2, c3),
            );
        }
        for (k, &q) in qubits.iter().enumerate() {
            apply_gate2_in_place(amps, n_qubits, q, &rz(phi[l * m + k]));
        }
    }
}

/// Applies one party's circuit to `party` qubits of `state`.
///
/// Per block: `R_x` on every party qubit, then the canonical gate on each
/// consecutive pair of the party list in ascending order, then `R_z` on
/// every party qubit.
pub fn party_unitary_apply(
    state: &StateVector,
    party: &[usize],
    theta: &[f64],
    phi: &[f64],
    weyl: &[[f64; 3]],
    layers: usize,
) -> Result<StateVector> {
    check_slices(party.len(), theta, phi, weyl, layers)?;
    crate::statevector::check_subset(state.n_qubits(), party)?;
    let mut amps = state.amplitudes().to_vec();
    run_party(&mut amps, state.n_qubits(), party, theta, phi, weyl, layers);
    Ok(StateVector::from_parts(state.n_qubits(), amps))
}

/// The party circuit applied to `|0…0⟩` on an `m`-qubit register of its own.
pub fn party_state(
    m: usize,
    theta: &[f64],
    phi: &[f64],
    weyl: &[[f64; 3]],
    layers: usize,
) -> Result<StateVector> {
    check_slices(m, theta, phi, weyl, layers)?;
    Ok(StateVector::from_parts(
        m,
        party_amplitudes(m, theta, phi, weyl, layers),
    ))
}

pub(crate) fn party_amplitudes(
    m: usize,
    theta: &[f64],
    phi: &[f64],
    weyl: &[[f64; 3]],
    layers: usize,
) -> Vec<Complex64> {
    if m == 1 && layers == 1 {
        // R_z(φ) R_x(θ)|0⟩ in closed form.
        let (s, c) = (theta[0] / 2.0).sin_cos();
        return vec![
            Complex64::from_polar(c, -phi[0] / 2.0),
            Complex64::new(0.0, -s) * Complex64::from_polar(1.0, phi[0] / 2.0),
        ];
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << m];
    amps[0] = Complex64::new(1.0, 0.0);
    let qubits: Vec<usize> = (0..m).collect();
    run_party(&mut amps, m, &qubits, theta, phi, weyl, layers);
    amps
}

/// The full `N`-qubit separable state: every party circuit applied to
/// `|0⟩^⊗N` in place.
pub fn build_separable_state(partition: &Partition, params: &AnsatzParams) -> Result<StateVector> {
    params.check(partition)?;
    let n = partition.n_qubits();
    let x = params.to_flat();
    let mut amps = StateVector::zero(n)?.into_amplitudes();
    for (party, s) in partition
        .parties()
        .iter()
        .zip(split_flat(partition, params.layers, &x))
    {
        run_party(
            &mut amps,
            n,
            party,
            &s.theta,
            &s.phi,
            &s.weyl,
            params.layers,
        );
    }
    Ok(StateVector::from_parts(n, amps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::{overlap_sq, product_state, reduced_purity};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qubit_party_rotates_to_one() {
        let s = party_state(1, &[PI], &[0.0], &[], 1).unwrap();
        assert!((s.amplitudes()[1] - c(0., -1.)).norm() < 1e-15);
        let one = StateVector::basis(1, 1).unwrap();
        assert!((overlap_sq(&s, &one).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_qubit_party_examples() {
        let s = party_state(2, &[0., 0.], &[0., 0.], &[[PI / 2.0, 0., 0.]], 1).unwrap();
        let h = FRAC_1_SQRT_2;
        let want = [c(h, 0.), c(0., 0.), c(0., 0.), c(0., -h)];
        for (a, b) in s.amplitudes().iter().zip(want) {
            assert!((a - b).norm() < 1e-15);
        }
        let zero = StateVector::zero(2).unwrap();
        let s = party_unitary_apply(&zero, &[0, 1], &[0., 0.], &[0., 0.], &[[0.; 3]], 1).unwrap();
        assert_eq!(s, zero);
        assert!(party_unitary_apply(&zero, &[0, 1], &[0.], &[0., 0.], &[[0.; 3]], 1).is_err());
        assert!(party_unitary_apply(&zero, &[0, 1], &[0., 0.], &[0., 0.], &[], 1).is_err());
    }

    #[test]
    fn separable_state_examples() {
        let g = Partition::global(3).unwrap();
        let s = build_separable_state(&g, &AnsatzParams::zeros(&g, 1)).unwrap();
        assert_eq!(s, StateVector::zero(3).unwrap());

        let whole = Partition::parse("0,1", 2).unwrap();
        let mut p = AnsatzParams::zeros(&whole, 1);
        p.weyl[0] = [PI / 2.0, 0., 0.];
        let s = build_separable_state(&whole, &p).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0] - c(h, 0.)).norm() < 1e-15);
        assert!((s.amplitudes()[3] - c(0., -h)).norm() < 1e-15);
        assert!((reduced_purity(&s, &[0]).unwrap() - 0.5).abs() < 1e-12);

        let split = Partition::global(2).unwrap();
        let mut p = AnsatzParams::zeros(&split, 1);
        p.theta = vec![PI, 0.0];
        let s = build_separable_state(&split, &p).unwrap();
        assert!((s.amplitudes()[2] - c(0., -1.)).norm() < 1e-15);

        let mut bad = AnsatzParams::zeros(&split, 1);
        bad.theta.pop();
        assert!(build_separable_state(&split, &bad).is_err());
    }

    #[test]
    fn flat_layout_round_trips() {
        let p = Partition::parse("0,2|1|3,4,5", 6).unwrap();
        let dim = AnsatzParams::dim(&p, 2);
        assert_eq!(dim, 2 * (12 + 9));
        let x: Vec<f64> = (0..dim).map(|i| i as f64).collect();
        let params = AnsatzParams::from_flat(&p, 2, &x).unwrap();
        assert_eq!(params.to_flat(), x);
        assert!(AnsatzParams::from_flat(&p, 2, &x[1..]).is_err());
    }

    fn arb_case() -> impl Strategy<Value = (Partition, usize, Vec<f64>)> {
        (2usize..=6, 1usize..=3, any::<u64>()).prop_flat_map(|(n, layers, seed)| {
            // Deterministic shuffle of 0..n into random-sized parties.
            let mut order: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            let mut parties = Vec::new();
            let mut cur = Vec::new();
            for q in order {
                cur.push(q);
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                if (s >> 40) % 3 == 0 {
                    parties.push(std::mem::take(&mut cur));
                }
            }
            if !cur.is_empty() {
                parties.push(cur);
            }
            let part = Partition::new(parties, n).unwrap();
            let dim = AnsatzParams::dim(&part, layers);
            (
                Just(part),
                Just(layers),
                prop::collection::vec(-7.0f64..7.0, dim),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn every_party_is_pure((part, layers, x) in arb_case()) {
            let params = AnsatzParams::from_flat(&part, layers, &x).unwrap();
            let s = build_separable_state(&part, &params).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            for party in part.parties() {
                prop_assert!((reduced_purity(&s, party).unwrap() - 1.0).abs() < 1e-10);
            }
        }

        #[test]
        fn in_place_circuit_equals_party_product((part, layers, x) in arb_case()) {
            // Kronecker product of local party states, relabelled to global qubits.
            let params = AnsatzParams::from_flat(&part, layers, &x).unwrap();
            let full = build_separable_state(&part, &params).unwrap();
            let factors: Vec<StateVector> = split_flat(&part, layers, &x)
                .iter()
                .zip(part.parties())
                .map(|(s, party)| party_state(party.len(), &s.theta, &s.phi, &s.weyl, layers).unwrap())
                .collect();
            let kron = product_state(&factors).unwrap();
            let order = part.qubit_order();
            let n = part.n_qubits();
            for (i, a) in full.amplitudes().iter().enumerate() {
                let mut j = 0;
                for (k, &q) in order.iter().enumerate() {
                    if i >> (n - 1 - q) & 1 == 1 {
                        j |= 1 << (n - 1 - k);
                    }
                }
                prop_assert!((a - kron.amplitudes()[j]).norm() < 1e-12);
            }
        }
    }
}
