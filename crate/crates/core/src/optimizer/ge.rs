use std::f64::consts::TAU;

use rayon::prelude::*;

use super::bfgs::BfgsOutcome;
use super::saddle::minimize_escaping_saddles;
use super::sobol::Sobol;
use crate::ansatz::{
    build_separable_state, AnsatzParams, Partition, SeparableOverlap, SymmetricOverlap,
};
use crate::error::{invalid, Result};
use crate::statevector::{overlap_sq, StateVector};

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Sobol points in the global scan.
    pub n_init: usize,
    /// Scan box per parameter; refinement is unconstrained.
    pub seed_interval: (f64, f64),
    /// Stop when `‖∇‖_∞` falls below this.
    pub bfgs_grad_tol: f64,
    pub bfgs_max_iter: usize,
    /// Relative central-difference step.
    pub fd_step: f64,
    /// Best scan points refined by BFGS.
    pub top_k: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            n_init: 2000,
            seed_interval: (0.0, TAU),
            bfgs_grad_tol: 1e-9,
            bfgs_max_iter: 500,
            fd_step: 1e-6,
            top_k: 1,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.seed_interval;
        if self.n_init == 0 || self.top_k == 0 {
            return Err(invalid("n_init and top_k must be at least 1"));
        }
        if !(self.bfgs_grad_tol > 0.0 && self.fd_step > 0.0) {
            return Err(invalid("tolerances must be positive"));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(invalid("seed interval must be a finite, nonempty range"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeResult {
    pub max_overlap: f64,
    pub ge: f64,
    pub optimal_params: AnsatzParams,
    pub sobol_best_overlap: f64,
    pub bfgs_iterations: usize,
    pub converged: bool,
    pub objective_evaluations: usize,
}

/// `1 − |⟨φ(params)|ψ⟩|²`, evaluated on the full separable state.
pub fn objective(
    target: &StateVector,
    partition: &Partition,
    params: &AnsatzParams,
) -> Result<f64> {
    if target.n_qubits() != partition.n_qubits() {
        return Err(invalid(format!(
            "target has {} qubits, partition covers {}",
            target.n_qubits(),
            partition.n_qubits()
        )));
    }
    let phi = build_separable_state(partition, params)?;
    Ok(1.0 - overlap_sq(&phi, target)?)
}

struct Refined {
    x: Vec<f64>,
    overlap: f64,
    sobol_best: f64,
    iterations: usize,
    converged: bool,
    evaluations: usize,
}

/// Sobol scan then saddle-aware BFGS from the `top_k` best scan points.
fn two_stage<F>(overlap: F, dim: usize, cfg: &OptimizerConfig) -> Result<Refined>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate()?;
    let (lo, hi) = cfg.seed_interval;
    let points: Vec<Vec<f64>> = Sobol::new(dim)?
        .take(cfg.n_init)
        .map(|p| p.into_iter().map(|u| lo + (hi - lo) * u).collect())
        .collect();
    let values: Vec<f64> = points.par_iter().map(|p| overlap(p)).collect();

    let mut ranked: Vec<usize> = (0..points.len()).collect();
    // Highest overlap first; ties keep scan order.
    ranked.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    ranked.truncate(cfg.top_k);
    let sobol_best = values[ranked[0]];

    let runs: Vec<BfgsOutcome> = ranked
        .par_iter()
        .map(|&i| {
            minimize_escaping_saddles(
                |x: &[f64]| 1.0 - overlap(x),
                &points[i],
                cfg.bfgs_grad_tol,
                cfg.bfgs_max_iter,
                cfg.fd_step,
            )
        })
        .collect();

    let overlaps: Vec<f64> = runs.iter().map(|r| overlap(&r.x)).collect();
    let mut best = 0;
    for (k, &v) in overlaps.iter().enumerate() {
        if v > overlaps[best] {
            best = k;
        }
    }
    let evaluations = points.len() + runs.iter().map(|r| r.evaluations + 1).sum::<usize>();
    let run = &runs[best];
    let (x, overlap_value) = if overlaps[best] >= sobol_best {
        (run.x.clone(), overlaps[best])
    } else {
        (points[ranked[0]].clone(), sobol_best)
    };
    Ok(Refined {
        x,
        overlap: overlap_value,
        sobol_best,
        iterations: run.iterations,
        converged: run.converged,
        evaluations,
    })
}

fn finish(r: Refined, params: AnsatzParams) -> GeResult {
    let max_overlap = r.overlap.clamp(0.0, 1.0);
    GeResult {
        max_overlap,
        ge: 1.0 - max_overlap,
        optimal_params: params,
        sobol_best_overlap: r.sobol_best,
        bfgs_iterations: r.iterations,
        converged: r.converged,
        objective_evaluations: r.evaluations,
    }
}

/// Geometric entanglement of `target` across `partition`.
///
/// Scans `n_init` Sobol points over `seed_interval^dim` with
/// `dim = layers · (2N + 3 Σ (m_i − 1))`, refines the best `top_k` with BFGS
/// and reports `ge = 1 − max_overlap`. The result is an upper bound on the
/// true GE whenever the party circuits cannot reach the optimal party states.
pub fn compute_ge(
    target: &StateVector,
    partition: &Partition,
    cfg: &OptimizerConfig,
    layers: usize,
) -> Result<GeResult> {
    let ev = SeparableOverlap::new(target, partition, layers)?;
    let r = two_stage(|x| ev.overlap(x), ev.dim(), cfg)?;
    let params = AnsatzParams::from_flat(partition, layers, &r.x)?;
    Ok(finish(r, params))
}

/// Global GE restricted to translation-invariant products `u(θ, φ)^⊗N`.
///
/// Always a two-parameter problem; `optimal_params` is the equivalent
/// global-partition parameter set.
pub fn compute_ge_symmetric(target: &StateVector, cfg: &OptimizerConfig) -> Result<GeResult> {
    let ev = SymmetricOverlap::new(target);
    let r = two_stage(|x| ev.overlap(x), 2, cfg)?;
    let global = Partition::global(target.n_qubits())?;
    let params = AnsatzParams::from_flat(&global, 1, &ev.expand(&r.x))?;
    Ok(finish(r, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn state(pairs: &[(usize, f64)], n: usize) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for &(i, a) in pairs {
            amps[i] = Complex64::new(a, 0.0);
        }
        StateVector::normalized(amps).unwrap()
    }

    fn small_cfg() -> OptimizerConfig {
        OptimizerConfig {
            n_init: 256,
            ..Default::default()
        }
    }

    #[test]
    fn objective_examples() {
        let g = Partition::global(2).unwrap();
        let mut p = AnsatzParams::zeros(&g, 1);
        p.theta = vec![0.7, 2.1];
        p.phi = vec![-0.4, 1.3];
        let t = build_separable_state(&g, &p).unwrap();
        assert!(objective(&t, &g, &p).unwrap().abs() < 1e-15);

        let zeros = AnsatzParams::zeros(&g, 1);
        assert!((objective(&state(&[(3, 1.0)], 2), &g, &zeros).unwrap() - 1.0).abs() < 1e-15);
        let bell = state(&[(0, FRAC_1_SQRT_2), (3, FRAC_1_SQRT_2)], 2);
        assert!((objective(&bell, &g, &zeros).unwrap() - 0.5).abs() < 1e-15);
        assert!(objective(&state(&[(0, 1.0)], 3), &g, &zeros).is_err());
    }

    #[test]
    fn product_target_has_zero_ge() {
        let t = state(&[(0b0101, 1.0)], 4);
        let r = compute_ge(&t, &Partition::global(4).unwrap(), &small_cfg(), 1).unwrap();
        assert!(r.ge <= 1e-9, "{r:?}");
        assert!((r.ge - (1.0 - r.max_overlap)).abs() <= 1e-15);
    }

    #[test]
    fn bell_and_ghz_anchor_values() {
        let bell = state(&[(0, 1.0), (3, 1.0)], 2);
        let r = compute_ge(&bell, &Partition::global(2).unwrap(), &small_cfg(), 1).unwrap();
        assert!((r.ge - 0.5).abs() < 1e-6, "{r:?}");
        let ghz = state(&[(0, 1.0), (7, 1.0)], 3);
        let r = compute_ge(&ghz, &Partition::global(3).unwrap(), &small_cfg(), 1).unwrap();
        assert!((r.ge - 0.5).abs() < 1e-6, "{r:?}");
        assert!(r.max_overlap >= r.sobol_best_overlap - 1e-12);
    }

    #[test]
    fn w_state_anchor_value() {
        let w = state(&[(1, 1.0), (2, 1.0), (4, 1.0)], 3);
        let r = compute_ge(
            &w,
            &Partition::global(3).unwrap(),
            &OptimizerConfig::default(),
            1,
        )
        .unwrap();
        assert!((r.ge - 5.0 / 9.0).abs() < 1e-4, "{r:?}");
    }

    #[test]
    fn symmetric_mode_examples() {
        let zero = state(&[(0, 1.0)], 5);
        let r = compute_ge_symmetric(&zero, &small_cfg()).unwrap();
        assert!(r.ge <= 1e-9);
        let ghz = state(&[(0, 1.0), (31, 1.0)], 5);
        let r = compute_ge_symmetric(&ghz, &small_cfg()).unwrap();
        assert!((r.ge - 0.5).abs() < 1e-6, "{r:?}");
        assert_eq!(r.optimal_params.theta.len(), 5);
    }

    #[test]
    fn results_are_deterministic() {
        let t = state(&[(1, 0.3), (2, -0.8), (5, 0.5), (6, 0.1)], 3);
        let part = Partition::parse("0|1,2", 3).unwrap();
        let a = compute_ge(&t, &part, &small_cfg(), 1).unwrap();
        let b = compute_ge(&t, &part, &small_cfg(), 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation() {
        let t = state(&[(0, 1.0)], 2);
        let g = Partition::global(2).unwrap();
        let bad = OptimizerConfig {
            n_init: 0,
            ..Default::default()
        };
        assert!(compute_ge(&t, &g, &bad, 1).is_err());
        let bad = OptimizerConfig {
            top_k: 0,
            ..Default::default()
        };
        assert!(compute_ge(&t, &g, &bad, 1).is_err());
        assert!(compute_ge(&t, &g, &small_cfg(), 0).is_err());
    }
}
