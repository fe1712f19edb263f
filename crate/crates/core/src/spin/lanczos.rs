//! Explicitly restarted Lanczos with full reorthogonalization.
//!
//! Each cycle builds a Krylov basis of at most `krylov_dim` vectors from the
//! current guess, diagonalizes the tridiagonal projection and restarts from
//! the lowest Ritz vector until its true residual `‖Hx − θx‖` reaches `tol`.
//! Excited states are found by deflation: every basis vector is kept
//! orthogonal to the eigenvectors already locked.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hamiltonian::LinearOperator;
use crate::error::{invalid, Error, Result};
use crate::statevector::{dot, StateVector};

#[derive(Clone, Debug, PartialEq)]
pub struct LanczosConfig {
    pub tol: f64,
    pub max_restarts: usize,
    pub krylov_dim: usize,
    /// Seed of the pseudo-random start vector.
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        LanczosConfig {
            tol: 1e-10,
            max_restarts: 200,
            krylov_dim: 60,
            seed: 0x5EED_1A2C,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair {
    pub energy: f64,
    pub state: StateVector,
    pub residual: f64,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn scale(v: &mut [Complex64], s: f64) {
    v.iter_mut().for_each(|a| *a *= s);
}

/// `w ← w − Σ_b ⟨b|w⟩ b` over an orthonormal set.
fn orthogonalize(w: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for b in basis {
        let p = dot(b, w);
        w.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
    }
}

fn start_vector(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

/// Rotates the global phase so the largest-magnitude amplitude (lowest index
/// on ties) is real and positive.
fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    for (i, a) in v.iter().enumerate() {
        if a.norm() > v[best].norm() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let a = v[best];
    if a.norm() > 0.0 {
        let rot = a.conj() / a.norm();
        v.iter_mut().for_each(|x| *x *= rot);
    }
}

fn residual<O: LinearOperator + ?Sized>(
    op: &O,
    x: &[Complex64],
    theta: f64,
    locked: &[Vec<Complex64>],
    work: &mut [Complex64],
) -> f64 {
    op.apply(x, work);
    work.iter_mut().zip(x).for_each(|(w, v)| *w -= v * theta);
    orthogonalize(work, locked);
    norm(work)
}

/// Lowest eigenpair of `op` in the orthogonal complement of `locked`.
fn lowest_in_complement<O: LinearOperator + ?Sized>(
    op: &O,
    locked: &[Vec<Complex64>],
    cfg: &LanczosConfig,
    seed: u64,
) -> Result<(f64, Vec<Complex64>, f64)> {
    let dim = op.dim();
    let free = dim - locked.len();
    let m_max = cfg.krylov_dim.min(free).max(1);
    let mut x = start_vector(dim, seed);
    orthogonalize(&mut x, locked);
    orthogonalize(&mut x, locked);
    let nx = norm(&x);
    if nx == 0.0 {
        return Err(invalid("start vector vanished after deflation"));
    }
    scale(&mut x, 1.0 / nx);

    let mut work = vec![Complex64::new(0.0, 0.0); dim];
    let mut best: Option<(f64, Vec<Complex64>, f64)> = None;

    for _ in 0..=cfg.max_restarts {
        let mut basis: Vec<Vec<Complex64>> = vec![x.clone()];
        let mut alpha: Vec<f64> = Vec::with_capacity(m_max);
        let mut beta: Vec<f64> = Vec::with_capacity(m_max);
        loop {
            let j = basis.len() - 1;
            let mut w = vec![Complex64::new(0.0, 0.0); dim];
            op.apply(&basis[j], &mut w);
            alpha.push(dot(&basis[j], &w).re);
            // Two passes of classical Gram–Schmidt keep the basis orthogonal
            // to working precision.
            for _ in 0..2 {
                orthogonalize(&mut w, locked);
                orthogonalize(&mut w, &basis);
            }
            let b = norm(&w);
            let scale_ref = alpha.iter().fold(1.0f64, |m, a| m.max(a.abs()));
            if basis.len() == m_max || b <= 1e-13 * scale_ref {
                break;
            }
            beta.push(b);
            scale(&mut w, 1.0 / b);
            basis.push(w);
        }

        let k = alpha.len();
        let t = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let eig = t.symmetric_eigen();
        let (idx, theta) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty tridiagonal");
        let coeffs = eig.eigenvectors.column(idx);
        let mut ritz = vec![Complex64::new(0.0, 0.0); dim];
        for (v, &c) in basis.iter().zip(coeffs.iter()) {
            ritz.iter_mut().zip(v).for_each(|(r, x)| *r += x * c);
        }
        orthogonalize(&mut ritz, locked);
        let nr = norm(&ritz);
        scale(&mut ritz, 1.0 / nr);
        let res = residual(op, &ritz, theta, locked, &mut work);
        if best.as_ref().is_none_or(|b| res < b.2) {
            best = Some((theta, ritz.clone(), res));
        }
        if res <= cfg.tol {
            break;
        }
        x = ritz;
    }

    let (theta, v, res) = best.expect("at least one cycle");
    if res <= cfg.tol {
        Ok((theta, v, res))
    } else {
        Err(Error::NonConvergence { residual: res })
    }
}

/// The `count` lowest eigenpairs, in ascending energy order.
pub fn lanczos_lowest<O: LinearOperator + ?Sized>(
    op: &O,
    count: usize,
    cfg: &LanczosConfig,
) -> Result<Vec<Eigenpair>> {
    let dim = op.dim();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(invalid(format!("operator dimension {dim} is not 2^n")));
    }
    if count == 0 || count > dim {
        return Err(invalid(format!(
            "cannot extract {count} eigenpairs from dimension {dim}"
        )));
    }
    if !(cfg.tol > 0.0) || cfg.krylov_dim == 0 {
        return Err(invalid(
            "Lanczos tolerance and Krylov dimension must be positive",
        ));
    }
    let n_qubits = dim.trailing_zeros() as usize;
    let mut locked: Vec<Vec<Complex64>> = Vec::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let seed = cfg.seed.wrapping_add(k as u64);
        let (energy, mut v, res) = lowest_in_complement(op, &locked, cfg, seed)?;
        locked.push(v.clone());
        fix_phase(&mut v);
        out.push(Eigenpair {
            energy,
            state: StateVector::from_parts(n_qubits, v),
            residual: res,
        });
    }
    Ok(out)
}

pub fn lanczos_ground_state<O: LinearOperator + ?Sized>(
    op: &O,
    cfg: &LanczosConfig,
) -> Result<Eigenpair> {
    Ok(lanczos_lowest(op, 1, cfg)?.remove(0))
}
