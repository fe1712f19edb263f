//! BFGS with a second-order exit test.
//!
//! A zero gradient does not imply a minimum: symmetric targets make some
//! scan points exact saddles, and BFGS started there never moves. After each
//! converged run the finite-difference Hessian is checked; a clearly negative
//! eigenvalue triggers a backtracking step along its eigenvector and a fresh
//! BFGS run.

use std::cell::Cell;

use nalgebra::{DMatrix, SymmetricEigen};

use super::bfgs::{bfgs_minimize, BfgsOutcome};
use super::gradient::finite_diff_hessian;

/// Curvature below `-NEGATIVE_CURVATURE` marks a saddle.
const NEGATIVE_CURVATURE: f64 = 1e-5;
const HESSIAN_STEP: f64 = 1e-4;
const MAX_ESCAPES: usize = 8;
/// The Hessian costs `O(dim²)` evaluations; larger problems skip the check.
const MAX_HESSIAN_DIM: usize = 512;

/// Most negative Hessian direction, if its curvature is below the threshold.
fn descent_direction<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64]) -> Option<(f64, Vec<f64>)> {
    let n = x.len();
    if n == 0 || n > MAX_HESSIAN_DIM {
        return None;
    }
    let h = DMatrix::from_row_slice(n, n, &finite_diff_hessian(f, x, HESSIAN_STEP));
    let eig = SymmetricEigen::new(h);
    let (k, lambda) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))?;
    (lambda < -NEGATIVE_CURVATURE)
        .then(|| (lambda, eig.eigenvectors.column(k).iter().copied().collect()))
}

/// Backtracking along `±v` until `f` drops below `fx`.
fn escape_step<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], fx: f64, v: &[f64]) -> Option<Vec<f64>> {
    let mut alpha = 1.0;
    for _ in 0..30 {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for sign in [1.0, -1.0] {
            let y: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + sign * alpha * b).collect();
            let fy = f(&y);
            if fy < fx && best.as_ref().is_none_or(|b| fy < b.0) {
                best = Some((fy, y));
            }
        }
        if let Some((_, y)) = best {
            return Some(y);
        }
        alpha *= 0.5;
    }
    None
}

/// [`bfgs_minimize`], restarted from a descent step whenever it converges to a
/// point with negative curvature. `iterations` and `evaluations` accumulate
/// over all runs; `max_iter` caps the total.
pub fn minimize_escaping_saddles<F>(
    f: F,
    x0: &[f64],
    grad_tol: f64,
    max_iter: usize,
    fd_step: f64,
) -> BfgsOutcome
where
    F: Fn(&[f64]) -> f64,
{
    let extra = Cell::new(0usize);
    let counted = |x: &[f64]| {
        extra.set(extra.get() + 1);
        f(x)
    };
    let mut run = bfgs_minimize(&f, x0, grad_tol, max_iter, fd_step);
    let mut iterations = run.iterations;
    let mut evaluations = run.evaluations;
    for _ in 0..MAX_ESCAPES {
        if !run.converged || iterations >= max_iter {
            break;
        }
        let Some((_, v)) = descent_direction(&counted, &run.x) else {
            break;
        };
        let Some(start) = escape_step(&counted, &run.x, run.f, &v) else {
            break;
        };
        let next = bfgs_minimize(&f, &start, grad_tol, max_iter - iterations, fd_step);
        iterations += next.iterations;
        evaluations += next.evaluations;
        if next.f >= run.f {
            break;
        }
        run = next;
    }
    BfgsOutcome {
        iterations,
        evaluations: evaluations + extra.get(),
        ..run
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Saddle at the origin, minima at `(±1, 0)`.
    fn saddle(x: &[f64]) -> f64 {
        (x[0] * x[0] - 1.0).powi(2) + x[1] * x[1]
    }

    #[test]
    fn plain_bfgs_stalls_on_saddle() {
        let out = bfgs_minimize(saddle, &[0.0, 0.0], 1e-9, 100, 1e-6);
        assert_eq!(out.iterations, 0);
        assert!((out.f - 1.0).abs() < 1e-15);
    }

    #[test]
    fn escapes_to_minimum() {
        let out = minimize_escaping_saddles(saddle, &[0.0, 0.0], 1e-9, 100, 1e-6);
        assert!(out.converged);
        assert!(out.f < 1e-12, "{out:?}");
        assert!((out.x[0].abs() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn minimum_is_left_alone() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * x[1] * x[1];
        let a = minimize_escaping_saddles(f, &[0.2, 0.4], 1e-9, 100, 1e-6);
        let b = bfgs_minimize(f, &[0.2, 0.4], 1e-9, 100, 1e-6);
        assert_eq!(a.x, b.x);
        assert_eq!(a.iterations, b.iterations);
        assert!(a.evaluations > b.evaluations);
    }

    #[test]
    fn flat_directions_are_not_saddles() {
        // `x[1]` is a pure phase direction: zero curvature, not negative.
        let f = |x: &[f64]| x[0] * x[0] + 0.0 * x[1];
        let out = minimize_escaping_saddles(f, &[0.0, 2.0], 1e-9, 100, 1e-6);
        assert_eq!(out.iterations, 0);
        assert_eq!(out.x, vec![0.0, 2.0]);
    }
}
