//! Alternating maximization of `|⟨φ_1 ⊗ … ⊗ φ_M|ψ⟩|²` over arbitrary party
//! states.
//!
//! With every party but `j` fixed, the optimal `φ_j` is the normalized
//! partial inner product of the others with `ψ`, so each update can only
//! raise the overlap. Random restarts guard against local maxima.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ansatz::Partition;
use crate::error::{invalid, Result};
use crate::statevector::{permute_qubits, StateVector};

const STOP: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct BruteForceConfig {
    pub restarts: usize,
    /// Full sweeps over the parties per restart.
    pub inner_iters: usize,
    pub seed: u64,
}

impl BruteForceConfig {
    /// 50 restarts up to 4 qubits, 200 beyond.
    pub fn for_qubits(n: usize) -> Self {
        BruteForceConfig {
            restarts: if n <= 4 { 50 } else { 200 },
            inner_iters: 500,
            seed: 0xB0F0_2E11,
        }
    }
}

/// Contracts the leading axis of a row-major tensor with `conj(v)`.
fn contract_first(v: &[Complex64], t: &[Complex64]) -> Vec<Complex64> {
    let rest = t.len() / v.len();
    let mut out = vec![Complex64::new(0.0, 0.0); rest];
    for (row, a) in t.chunks_exact(rest).zip(v) {
        let w = a.conj();
        out.iter_mut().zip(row).for_each(|(o, x)| *o += w * x);
    }
    out
}

/// Contracts the trailing axis of a row-major tensor with `conj(v)`.
fn contract_last(v: &[Complex64], t: &[Complex64]) -> Vec<Complex64> {
    t.chunks_exact(v.len())
        .map(|row| row.iter().zip(v).map(|(x, a)| a.conj() * x).sum())
        .collect()
}

/// `⟨⊗_{p≠j} φ_p|ψ⟩`, a vector on party `j`.
fn environment(psi: &[Complex64], states: &[Vec<Complex64>], j: usize) -> Vec<Complex64> {
    let mut t = psi.to_vec();
    for s in &states[..j] {
        t = contract_first(s, &t);
    }
    for s in states[j + 1..].iter().rev() {
        t = contract_last(s, &t);
    }
    t
}

fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}

/// Runs alternating sweeps from `states`, returning the overlap after every
/// single-party update.
fn ascend(psi: &[Complex64], states: &mut [Vec<Complex64>], inner_iters: usize) -> Vec<f64> {
    let mut history = Vec::new();
    let mut last = -1.0;
    for _ in 0..inner_iters {
        for j in 0..states.len() {
            let env = environment(psi, states, j);
            let n2: f64 = env.iter().map(|a| a.norm_sqr()).sum();
            if n2 > 0.0 {
                let n = n2.sqrt();
                states[j] = env.into_iter().map(|a| a / n).collect();
            }
            history.push(n2);
        }
        let cur = *history.last().expect("at least one party");
        if (cur - last).abs() < STOP {
            break;
        }
        last = cur;
    }
    history
}

fn permuted_target(
    state: &StateVector,
    partition: &Partition,
) -> Result<(Vec<Complex64>, Vec<usize>)> {
    if state.n_qubits() != partition.n_qubits() {
        return Err(invalid("partition and state sizes differ"));
    }
    let psi = permute_qubits(
        state.amplitudes(),
        state.n_qubits(),
        &partition.qubit_order(),
    );
    let dims = partition
        .parties()
        .iter()
        .map(|p| 1usize << p.len())
        .collect();
    Ok((psi, dims))
}

/// Largest overlap of `state` with any product across `partition`.
pub fn brute_force_max_overlap(
    state: &StateVector,
    partition: &Partition,
    cfg: &BruteForceConfig,
) -> Result<f64> {
    if cfg.restarts == 0 || cfg.inner_iters == 0 {
        return Err(invalid("restarts and inner_iters must be at least 1"));
    }
    let (psi, dims) = permuted_target(state, partition)?;
    let best = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r as u64);
            let mut states: Vec<Vec<Complex64>> =
                dims.iter().map(|&d| random_state(d, &mut rng)).collect();
            *ascend(&psi, &mut states, cfg.inner_iters)
                .last()
                .expect("nonempty history")
        })
        .reduce(|| 0.0, f64::max);
    Ok(best.min(1.0))
}

/// `1 − max_overlap` from [`brute_force_max_overlap`].
pub fn brute_force_ge(
    state: &StateVector,
    partition: &Partition,
    cfg: &BruteForceConfig,
) -> Result<f64> {
    Ok(1.0 - brute_force_max_overlap(state, partition, cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{
        make_benchmark_state, schmidt_max_overlap, BenchmarkFamily, BenchmarkStateSpec,
    };
    use proptest::prelude::*;

    fn cfg() -> BruteForceConfig {
        BruteForceConfig {
            restarts: 20,
            inner_iters: 500,
            seed: 3,
        }
    }

    #[test]
    fn anchor_values() {
        let w = make_benchmark_state(&BenchmarkStateSpec {
            family: BenchmarkFamily::WPPhi,
            p: 1.0,
            phi: 0.0,
        })
        .unwrap();
        let g = Partition::global(3).unwrap();
        assert!((brute_force_ge(&w, &g, &cfg()).unwrap() - 5.0 / 9.0).abs() < 1e-9);
        let ghz = make_benchmark_state(&BenchmarkStateSpec {
            family: BenchmarkFamily::GwPPhi,
            p: 1.0,
            phi: 0.0,
        })
        .unwrap();
        assert!((brute_force_ge(&ghz, &g, &cfg()).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn agrees_with_schmidt_on_bipartitions() {
        for p in [0.0, 0.2, 0.5, 0.9] {
            let s = make_benchmark_state(&BenchmarkStateSpec {
                family: BenchmarkFamily::BbP,
                p,
                phi: 0.0,
            })
            .unwrap();
            for text in ["0,2|1,3", "0|1,2,3", "0,1|2,3"] {
                let cut = Partition::parse(text, 4).unwrap();
                let a = brute_force_max_overlap(&s, &cut, &cfg()).unwrap();
                let b = schmidt_max_overlap(&s, &cut).unwrap();
                assert!((a - b).abs() < 1e-9, "p = {p}, {text}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let s = make_benchmark_state(&BenchmarkStateSpec {
            family: BenchmarkFamily::GwPPhi,
            p: 0.4,
            phi: 1.0,
        })
        .unwrap();
        let g = Partition::global(3).unwrap();
        assert_eq!(
            brute_force_ge(&s, &g, &cfg()).unwrap(),
            brute_force_ge(&s, &g, &cfg()).unwrap()
        );
    }

    #[test]
    fn environment_reproduces_amplitude() {
        let s = make_benchmark_state(&BenchmarkStateSpec {
            family: BenchmarkFamily::BbP,
            p: 0.3,
            phi: 0.0,
        })
        .unwrap();
        let part = Partition::parse("2|0,3|1", 4).unwrap();
        let (psi, dims) = permuted_target(&s, &part).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let states: Vec<_> = dims.iter().map(|&d| random_state(d, &mut rng)).collect();
        let amps: Vec<Complex64> = (0..states.len())
            .map(|j| {
                environment(&psi, &states, j)
                    .iter()
                    .zip(&states[j])
                    .map(|(e, a)| a.conj() * e)
                    .sum()
            })
            .collect();
        for a in &amps[1..] {
            assert!((a - amps[0]).norm() < 1e-13);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn updates_never_decrease_overlap(
            amps in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 32),
            seed in any::<u64>(),
        ) {
            let Ok(s) = StateVector::normalized(amps.into_iter().map(|(r, i)| Complex64::new(r, i)).collect()) else {
                return Ok(());
            };
            let part = Partition::parse("0,3|1|2,4", 5).unwrap();
            let (psi, dims) = permuted_target(&s, &part).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut states: Vec<_> = dims.iter().map(|&d| random_state(d, &mut rng)).collect();
            let h = ascend(&psi, &mut states, 50);
            for w in h.windows(2) {
                prop_assert!(w[1] >= w[0] - 1e-14);
            }
            prop_assert!(*h.last().unwrap() <= 1.0 + 1e-12);
        }
    }
}
