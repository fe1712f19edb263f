use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::statevector::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BenchmarkFamily {
    /// `√p|00⟩ + √(1−p)|11⟩`.
    PsiP,
    /// `√p|W⟩ + √(1−p) e^{iφ}|W̃⟩`.
    WPPhi,
    /// `√p|GHZ⟩ + √(1−p) e^{iφ}|W⟩`.
    GwPPhi,
    /// `√p|ψ⁺₁₃⟩|ψ⁺₂₄⟩ + √(1−p)|ψ⁻₁₃⟩|ψ⁻₂₄⟩`, qubits 1..4 stored as 0..3.
    BbP,
}

impl BenchmarkFamily {
    pub fn n_qubits(self) -> usize {
        match self {
            BenchmarkFamily::PsiP => 2,
            BenchmarkFamily::WPPhi | BenchmarkFamily::GwPPhi => 3,
            BenchmarkFamily::BbP => 4,
        }
    }

    pub fn has_phase(self) -> bool {
        matches!(self, BenchmarkFamily::WPPhi | BenchmarkFamily::GwPPhi)
    }

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkFamily::PsiP => "psi",
            BenchmarkFamily::WPPhi => "w",
            BenchmarkFamily::GwPPhi => "gw",
            BenchmarkFamily::BbP => "bb",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchmarkStateSpec {
    pub family: BenchmarkFamily,
    pub p: f64,
    /// Ignored by families without a relative phase.
    pub phi: f64,
}

const W: [usize; 3] = [0b001, 0b010, 0b100];
const W_TILDE: [usize; 3] = [0b011, 0b101, 0b110];
const GHZ: [usize; 2] = [0b000, 0b111];

fn superpose(n: usize, terms: &[(&[usize], Complex64)]) -> Vec<Complex64> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (support, coef) in terms {
        let norm = (support.len() as f64).sqrt();
        for &i in support.iter() {
            amps[i] += coef / norm;
        }
    }
    amps
}

/// `|ψ^{s1}_{ab}⟩ ⊗ |ψ^{s2}_{cd}⟩` on four qubits, `|ψ^±⟩ = (|00⟩ ± |11⟩)/√2`.
fn bell_pairs(
    pair1: (usize, usize),
    sign1: f64,
    pair2: (usize, usize),
    sign2: f64,
) -> Vec<Complex64> {
    let n = 4;
    let bit = |q: usize| 1usize << (n - 1 - q);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for x in 0..2 {
        for y in 0..2 {
            let mut idx = 0;
            if x == 1 {
                idx |= bit(pair1.0) | bit(pair1.1);
            }
            if y == 1 {
                idx |= bit(pair2.0) | bit(pair2.1);
            }
            let s = if x == 1 { sign1 } else { 1.0 } * if y == 1 { sign2 } else { 1.0 };
            amps[idx] += Complex64::new(s * FRAC_1_SQRT_2 * FRAC_1_SQRT_2, 0.0);
        }
    }
    amps
}

pub fn make_benchmark_state(spec: &BenchmarkStateSpec) -> Result<StateVector> {
    let p = spec.p;
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("p = {p} outside [0, 1]")));
    }
    let a = Complex64::new(p.sqrt(), 0.0);
    let b = Complex64::from_polar((1.0 - p).sqrt(), spec.phi);
    let amps = match spec.family {
        BenchmarkFamily::PsiP => superpose(
            2,
            &[
                (&[0b00], a),
                (&[0b11], Complex64::new((1.0 - p).sqrt(), 0.0)),
            ],
        ),
        BenchmarkFamily::WPPhi => superpose(3, &[(&W, a), (&W_TILDE, b)]),
        BenchmarkFamily::GwPPhi => superpose(3, &[(&GHZ, a), (&W, b)]),
        BenchmarkFamily::BbP => {
            let plus = bell_pairs((0, 2), 1.0, (1, 3), 1.0);
            let minus = bell_pairs((0, 2), -1.0, (1, 3), -1.0);
            let (sp, sm) = (p.sqrt(), (1.0 - p).sqrt());
            plus.iter()
                .zip(&minus)
                .map(|(x, y)| x * sp + y * sm)
                .collect()
        }
    };
    StateVector::new(amps)
}
