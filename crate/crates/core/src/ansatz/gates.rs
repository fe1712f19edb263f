use num_complex::Complex64;

use crate::statevector::{Gate2, Gate4};

/// `exp(-i θ σx / 2)`.
pub fn rx(theta: f64) -> Gate2 {
    let (s, c) = (theta / 2.0).sin_cos();
    let cr = Complex64::new(c, 0.0);
    let ms = Complex64::new(0.0, -s);
    Gate2([[cr, ms], [ms, cr]])
}

/// `exp(-i φ σz / 2)`.
pub fn rz(phi: f64) -> Gate2 {
    let zero = Complex64::new(0.0, 0.0);
    Gate2([
        [Complex64::from_polar(1.0, -phi / 2.0), zero],
        [zero, Complex64::from_polar(1.0, phi / 2.0)],
    ])
}

/// `exp[-(i/2)(c1 σx⊗σx + c2 σy⊗σy + c3 σz⊗σz)]`.
///
/// The three generators commute and are simultaneously diagonal in the Bell
/// basis, so the gate is the sum of four Bell projectors weighted by phases.
pub fn canonical_two_qubit(c1: f64, c2: f64, c3: f64) -> Gate4 {
    let phase = |lambda: f64| Complex64::from_polar(1.0, -lambda / 2.0);
    // Bell eigenvalues of the generator: Φ± on {00,11}, Ψ± on {01,10}.
    let phi_p = phase(c1 - c2 + c3);
    let phi_m = phase(-c1 + c2 + c3);
    let psi_p = phase(c1 + c2 - c3);
    let psi_m = phase(-c1 - c2 - c3);
    let zero = Complex64::new(0.0, 0.0);
    let (d_even, o_even) = ((phi_p + phi_m) * 0.5, (phi_p - phi_m) * 0.5);
    let (d_odd, o_odd) = ((psi_p + psi_m) * 0.5, (psi_p - psi_m) * 0.5);
    Gate4([
        [d_even, zero, zero, o_even],
        [zero, d_odd, o_odd, zero],
        [zero, o_odd, d_odd, zero],
        [o_even, zero, zero, d_even],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    type M4 = [[Complex64; 4]; 4];

    fn pauli_pair(k: usize) -> M4 {
        let p: [[[Complex64; 2]; 2]; 3] = [
            [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
            [[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]],
            [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]],
        ];
        let s = p[k];
        let mut m = [[c(0., 0.); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = s[i >> 1][j >> 1] * s[i & 1][j & 1];
            }
        }
        m
    }

    /// Taylor-series matrix exponential of `-(i/2) Σ c_k σ_k⊗σ_k`
    /// with scaling and squaring.
    fn expm_oracle(cs: [f64; 3]) -> Gate4 {
        let mut gen = [[c(0., 0.); 4]; 4];
        for (k, &ck) in cs.iter().enumerate() {
            let p = pauli_pair(k);
            for i in 0..4 {
                for j in 0..4 {
                    gen[i][j] += c(0., -0.5 * ck) * p[i][j];
                }
            }
        }
        let squarings = 10;
        let scale = 1.0 / f64::from(1u32 << squarings);
        let a = Gate4(gen.map(|r| r.map(|v| v * scale)));
        let mut sum = Gate4::identity();
        let mut term = Gate4::identity();
        for n in 1..30 {
            term = term.matmul(&a);
            term = Gate4(term.0.map(|r| r.map(|v| v / n as f64)));
            for i in 0..4 {
                for j in 0..4 {
                    sum.0[i][j] += term.0[i][j];
                }
            }
        }
        for _ in 0..squarings {
            sum = sum.matmul(&sum);
        }
        sum
    }

    #[test]
    fn rotation_examples() {
        assert!(rx(0.0).max_abs_diff(&Gate2::identity()) < 1e-15);
        let flipped = rx(PI);
        assert!((flipped.0[1][0] - c(0., -1.)).norm() < 1e-15);
        assert!(flipped.0[0][0].norm() < 1e-15);
        let z = rz(PI);
        assert!((z.0[0][0] - c(0., -1.)).norm() < 1e-15);
        assert!((z.0[1][1] - c(0., 1.)).norm() < 1e-15);
        assert!(z.0[0][1].norm() == 0.0 && z.0[1][0].norm() == 0.0);
    }

    #[test]
    fn canonical_examples() {
        assert!(canonical_two_qubit(0., 0., 0.).max_abs_diff(&Gate4::identity()) < 1e-15);
        // (I - i XX)/√2
        let g = canonical_two_qubit(PI / 2.0, 0., 0.);
        let xx = pauli_pair(0);
        let mut expected = [[c(0., 0.); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let id = if i == j { c(1., 0.) } else { c(0., 0.) };
                expected[i][j] = (id - c(0., 1.) * xx[i][j]) * FRAC_1_SQRT_2;
            }
        }
        assert!(g.max_abs_diff(&Gate4(expected)) < 1e-15);
        assert!(g.max_abs_diff(&expm_oracle([PI / 2.0, 0., 0.])) < 1e-12);
        let g = canonical_two_qubit(PI, PI, PI);
        let minus_i = Gate4(Gate4::identity().0.map(|r| r.map(|v| v * c(0., -1.))));
        assert!(g.max_abs_diff(&minus_i) < 1e-15);
        assert!(g.max_abs_diff(&expm_oracle([PI, PI, PI])) < 1e-12);
    }

    proptest! {
        #[test]
        fn canonical_matches_matrix_exponential(a in -7.0f64..7.0, b in -7.0f64..7.0, d in -7.0f64..7.0) {
            let g = canonical_two_qubit(a, b, d);
            prop_assert!(g.is_unitary(1e-12));
            prop_assert!(g.max_abs_diff(&expm_oracle([a, b, d])) < 1e-10);
        }

        #[test]
        fn canonical_is_swap_symmetric(a in -7.0f64..7.0, b in -7.0f64..7.0, d in -7.0f64..7.0) {
            let g = canonical_two_qubit(a, b, d);
            let s = Gate4::swap();
            prop_assert!(s.matmul(&g).matmul(&s).max_abs_diff(&g) < 1e-12);
        }

        #[test]
        fn canonical_inverse_is_negated_coordinates(a in -7.0f64..7.0, b in -7.0f64..7.0, d in -7.0f64..7.0) {
            let prod = canonical_two_qubit(a, b, d).matmul(&canonical_two_qubit(-a, -b, -d));
            prop_assert!(prod.max_abs_diff(&Gate4::identity()) < 1e-12);
        }

        #[test]
        fn rotations_are_unitary(t in -20.0f64..20.0) {
            prop_assert!(rx(t).is_unitary(1e-12));
            prop_assert!(rz(t).is_unitary(1e-12));
        }
    }
}
