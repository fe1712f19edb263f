//! Dense BFGS with a strong-Wolfe line search (bracketing plus zoom).

use std::cell::Cell;

use super::gradient::finite_diff_gradient;

const WOLFE_C1: f64 = 1e-4;
const WOLFE_C2: f64 = 0.9;
const MAX_BRACKET: usize = 25;
const MAX_ZOOM: usize = 40;
const STEP_GROWTH: f64 = 2.0;
const MAX_STEP: f64 = 1e4;
/// Relative slack on `f` for the approximate Wolfe test.
const APPROX_EPS: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct BfgsOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective evaluations, including those spent on finite differences.
    pub evaluations: usize,
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(x: &[f64], alpha: f64, p: &[f64]) -> Vec<f64> {
    x.iter().zip(p).map(|(xi, pi)| xi + alpha * pi).collect()
}

struct Trial {
    alpha: f64,
    f: f64,
    g: Vec<f64>,
    slope: f64,
}

/// Nocedal–Wright line search; `None` if no acceptable point was found.
///
/// When `f` differences drop to roundoff the Armijo test is meaningless, so a
/// trial also passes under the Hager–Zhang approximate Wolfe conditions:
/// `f(α) ≤ f(0) + ε|f(0)|` and `(2c₁ − 1) φ'(0) ≥ φ'(α) ≥ c₂ φ'(0)`.
fn strong_wolfe<F, G>(f: &F, grad: &G, x: &[f64], fx: f64, gx: &[f64], p: &[f64]) -> Option<Trial>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let slope0 = dot(gx, p);
    let eval = |alpha: f64| {
        let xa = axpy(x, alpha, p);
        let fa = f(&xa);
        let ga = grad(&xa);
        let slope = dot(&ga, p);
        Trial {
            alpha,
            f: fa,
            g: ga,
            slope,
        }
    };
    let armijo = |t: &Trial| t.f <= fx + WOLFE_C1 * t.alpha * slope0;
    let curvature = |t: &Trial| t.slope.abs() <= -WOLFE_C2 * slope0;
    let approx = |t: &Trial| {
        t.f <= fx + APPROX_EPS * (1.0 + fx.abs())
            && t.slope >= WOLFE_C2 * slope0
            && t.slope <= (2.0 * WOLFE_C1 - 1.0) * slope0
    };

    let mut best: Option<Trial> = None;
    let keep_best = |best: &mut Option<Trial>, t: &Trial| {
        if t.f < fx && best.as_ref().is_none_or(|b| t.f < b.f) {
            *best = Some(Trial {
                alpha: t.alpha,
                f: t.f,
                g: t.g.clone(),
                slope: t.slope,
            });
        }
    };

    let mut prev = Trial {
        alpha: 0.0,
        f: fx,
        g: gx.to_vec(),
        slope: slope0,
    };
    let mut alpha = 1.0;
    let mut bracket = None;
    for i in 0..MAX_BRACKET {
        let t = eval(alpha);
        if !t.f.is_finite() {
            alpha = 0.5 * (prev.alpha + alpha);
            continue;
        }
        keep_best(&mut best, &t);
        if !armijo(&t) && approx(&t) {
            return Some(t);
        }
        if !armijo(&t) || (i > 0 && t.f >= prev.f) {
            bracket = Some((prev, t));
            break;
        }
        if curvature(&t) {
            return Some(t);
        }
        if t.slope >= 0.0 {
            bracket = Some((t, prev));
            break;
        }
        prev = t;
        alpha = (alpha * STEP_GROWTH).min(MAX_STEP);
    }

    if let Some((mut lo, mut hi)) = bracket {
        for _ in 0..MAX_ZOOM {
            let (a, b) = (lo.alpha, hi.alpha);
            let width = (b - a).abs();
            if width <= 1e-16 * a.abs().max(b.abs()).max(1.0) {
                break;
            }
            // Quadratic through φ(lo), φ'(lo), φ(hi), kept inside the interval.
            let d = b - a;
            let denom = 2.0 * (hi.f - lo.f - lo.slope * d);
            let mut trial = if denom > 0.0 {
                a - lo.slope * d * d / denom
            } else {
                0.5 * (a + b)
            };
            let (left, right) = (a.min(b), a.max(b));
            let guard = 0.1 * width;
            if !trial.is_finite() || trial < left + guard || trial > right - guard {
                trial = 0.5 * (a + b);
            }
            let t = eval(trial);
            keep_best(&mut best, &t);
            if !armijo(&t) && approx(&t) {
                return Some(t);
            }
            if !armijo(&t) || t.f >= lo.f {
                hi = t;
            } else {
                if curvature(&t) {
                    return Some(t);
                }
                if t.slope * (hi.alpha - lo.alpha) >= 0.0 {
                    hi = lo;
                }
                lo = t;
            }
        }
    }
    best.filter(|t| armijo(t) || t.f < fx)
}

/// Minimizes `f` with an explicit gradient.
///
/// Stops once `‖∇f‖_∞ ≤ grad_tol` (converged) or after `max_iter` iterations.
/// A failed line search, even after resetting the curvature model, ends the run
/// at the best point so far with `converged = false`.
pub fn bfgs_minimize_with_gradient<F, G>(
    f: F,
    grad: G,
    x0: &[f64],
    grad_tol: f64,
    max_iter: usize,
) -> BfgsOutcome
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut g = grad(&x);
    let mut h = identity(n);
    let mut fresh = true;
    let mut iterations = 0;
    let mut converged = inf_norm(&g) <= grad_tol;

    while !converged && iterations < max_iter {
        let mut p = mat_vec_neg(&h, &g);
        if dot(&p, &g) >= 0.0 {
            h = identity(n);
            fresh = true;
            p = g.iter().map(|v| -v).collect();
        }
        let step = match strong_wolfe(&f, &grad, &x, fx, &g, &p) {
            Some(t) => t,
            None if !fresh => {
                h = identity(n);
                fresh = true;
                continue;
            }
            None => break,
        };
        let s: Vec<f64> = p.iter().map(|v| step.alpha * v).collect();
        let y: Vec<f64> = step.g.iter().zip(&g).map(|(a, b)| a - b).collect();
        x = axpy(&x, 1.0, &s);
        fx = step.f;
        g = step.g;
        iterations += 1;
        if inf_norm(&g) <= grad_tol {
            converged = true;
            break;
        }
        let sy = dot(&s, &y);
        if sy > 1e-14 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
            if fresh {
                let scale = sy / dot(&y, &y);
                h.iter_mut().for_each(|v| *v *= scale);
                fresh = false;
            }
            bfgs_update(&mut h, &s, &y, sy);
        }
    }

    BfgsOutcome {
        x,
        f: fx,
        iterations,
        converged,
        evaluations: 0,
    }
}

/// Minimizes `f` using central finite-difference gradients with relative
/// step `fd_step`.
pub fn bfgs_minimize<F>(
    f: F,
    x0: &[f64],
    grad_tol: f64,
    max_iter: usize,
    fd_step: f64,
) -> BfgsOutcome
where
    F: Fn(&[f64]) -> f64,
{
    let count = Cell::new(0usize);
    let counted = |x: &[f64]| {
        count.set(count.get() + 1);
        f(x)
    };
    let grad = |x: &[f64]| finite_diff_gradient(&counted, x, fd_step);
    let mut out = bfgs_minimize_with_gradient(counted, grad, x0, grad_tol, max_iter);
    out.evaluations = count.get();
    out
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

fn mat_vec_neg(h: &[f64], g: &[f64]) -> Vec<f64> {
    let n = g.len();
    (0..n).map(|i| -dot(&h[i * n..(i + 1) * n], g)).collect()
}

/// `H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ`, `ρ = 1 / sᵀy`.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = (0..n).map(|i| dot(&h[i * n..(i + 1) * n], y)).collect();
    let yhy = dot(y, &hy);
    let coef = (1.0 + rho * yhy) * rho;
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] += coef * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}
