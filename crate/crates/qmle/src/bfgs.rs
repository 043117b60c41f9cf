//! Quasi-Newton minimizer: BFGS on the inverse Hessian with a strong-Wolfe
//! line search and an Armijo backtracking fallback.
//!
//! The objective callback may return `None` to mark a point invalid (for
//! example a parameter whose model covariance is not positive definite);
//! the line search treats such points as +∞ and retreats.

use nalgebra::{DMatrix, DVector};

/// Stopping and iteration controls.
#[derive(Debug, Clone, Copy)]
pub struct BfgsOptions {
    /// Maximum BFGS iterations.
    pub max_iter: usize,
    /// Relative gradient tolerance: stop when ‖∇f‖ ≤ tol·max(1, |f|).
    pub grad_tol_rel: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        BfgsOptions { max_iter: 500, grad_tol_rel: 1e-8 }
    }
}

/// Terminal state of a minimization run.
#[derive(Debug, Clone)]
pub struct BfgsOutcome {
    /// Final iterate.
    pub x: Vec<f64>,
    /// Objective value there.
    pub f: f64,
    /// Euclidean gradient norm there.
    pub grad_norm: f64,
    /// Iterations performed.
    pub iterations: usize,
    /// Whether the gradient test was met.
    pub converged: bool,
}

const C1: f64 = 1e-4;
const C2: f64 = 0.9;
const MAX_LINE_EVALS: usize = 40;

/// An accepted step that improves f by no more than this (relative to
/// max(1, |f|)) is beneath float resolution: the objective cannot be
/// decreased further at this scale.
const STALL_FTOL: f64 = 8.0 * f64::EPSILON;
/// Gradient test applied at a stall, 1000× the strict tolerance. Near a
/// regular minimum the achievable gradient norm is bounded below by
/// roughly √(κ·ε·|f|) (curvature κ, machine ε), which can exceed the
/// strict tolerance; a stalled iterate whose gradient clears this relaxed
/// band is the float-level optimum, not a failure.
const STALL_GRAD_FACTOR: f64 = 1e3;

struct Eval {
    alpha: f64,
    f: f64,
    g: DVector<f64>,
    x: DVector<f64>,
}

/// Minimize `f_g` from `x0`. Returns `None` when the starting point itself
/// is invalid.
pub fn minimize<F>(mut f_g: F, x0: &[f64], opts: &BfgsOptions) -> Option<BfgsOutcome>
where
    F: FnMut(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    let q = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let (mut f, g0) = f_g(x.as_slice())?;
    let mut g = DVector::from_vec(g0);

    let mut h_inv = DMatrix::identity(q, q);
    let mut first_update = true;
    let mut iterations = 0;
    let mut stalled_steps = 0;
    let mut converged = grad_ok(&g, f, 1.0, opts);

    while iterations < opts.max_iter && !converged {
        iterations += 1;

        let mut dir = -(&h_inv * &g);
        if dir.dot(&g) >= 0.0 {
            // Numerical breakdown of the curvature model: restart steepest.
            h_inv = DMatrix::identity(q, q);
            first_update = true;
            dir = -g.clone();
        }

        let Some(step) = line_search(&mut f_g, &x, f, &g, &dir) else {
            // No decrease along the direction at any tried step: either the
            // float-level optimum (small gradient) or a genuine failure.
            converged = grad_ok(&g, f, STALL_GRAD_FACTOR, opts);
            break;
        };

        let s = &step.x - &x;
        let y = &step.g - &g;
        let ys = y.dot(&s);
        if ys > 1e-10 * y.norm() * s.norm() {
            if first_update {
                // Scale the seed matrix before the first update (standard
                // sᵀy/yᵀy heuristic) so step lengths start well-sized.
                let yy = y.dot(&y);
                if yy > 0.0 {
                    h_inv = DMatrix::identity(q, q) * (ys / yy);
                }
                first_update = false;
            }
            bfgs_update(&mut h_inv, &s, &y, ys);
        }

        let improvement = f - step.f;
        x = step.x;
        f = step.f;
        g = step.g;
        converged = grad_ok(&g, f, 1.0, opts);

        // Two consecutive accepted steps with improvement beneath float
        // resolution: further progress is impossible, so judge the iterate
        // by the relaxed gradient band instead of burning iterations.
        if improvement <= STALL_FTOL * f.abs().max(1.0) {
            stalled_steps += 1;
            if stalled_steps >= 2 && !converged {
                converged = grad_ok(&g, f, STALL_GRAD_FACTOR, opts);
                break;
            }
        } else {
            stalled_steps = 0;
        }
    }

    Some(BfgsOutcome {
        x: x.as_slice().to_vec(),
        f,
        grad_norm: g.norm(),
        iterations,
        converged,
    })
}

fn grad_ok(g: &DVector<f64>, f: f64, factor: f64, opts: &BfgsOptions) -> bool {
    g.norm() <= factor * opts.grad_tol_rel * f.abs().max(1.0)
}

/// H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ with ρ = 1/yᵀs.
fn bfgs_update(h_inv: &mut DMatrix<f64>, s: &DVector<f64>, y: &DVector<f64>, ys: f64) {
    let rho = 1.0 / ys;
    let hy = &*h_inv * y;
    let yhy = y.dot(&hy);
    // Expanded form: H + ρ²(yᵀHy)ssᵀ + ρssᵀ − ρ(s(Hy)ᵀ + (Hy)sᵀ).
    let c = rho * rho * yhy + rho;
    h_inv.ger(c, s, s, 1.0);
    h_inv.ger(-rho, s, &hy, 1.0);
    h_inv.ger(-rho, &hy, s, 1.0);
}

/// Strong-Wolfe line search (bracket + bisection zoom) with an Armijo
/// backtracking fallback; invalid evaluations are treated as +∞.
fn line_search<F>(
    f_g: &mut F,
    x: &DVector<f64>,
    f0: f64,
    g0: &DVector<f64>,
    dir: &DVector<f64>,
) -> Option<Eval>
where
    F: FnMut(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    let dphi0 = g0.dot(dir);
    let mut evals = 0usize;

    let mut try_alpha = |alpha: f64, evals: &mut usize| -> Option<Eval> {
        *evals += 1;
        let xt = x + dir * alpha;
        let (f, g) = f_g(xt.as_slice())?;
        if !f.is_finite() {
            return None;
        }
        Some(Eval { alpha, f, g: DVector::from_vec(g), x: xt })
    };

    let armijo = |e: &Eval| e.f <= f0 + C1 * e.alpha * dphi0;
    let curvature = |e: &Eval| e.g.dot(dir).abs() <= C2 * dphi0.abs();

    // Bracketing phase (Nocedal–Wright 3.5 structure).
    let mut prev: Option<Eval> = None;
    let mut prev_alpha = 0.0;
    let mut alpha = 1.0;
    let mut bracket: Option<(f64, Option<Eval>, f64)> = None; // (lo_alpha, lo_eval?, hi_alpha)
    for _ in 0..12 {
        if evals >= MAX_LINE_EVALS {
            break;
        }
        match try_alpha(alpha, &mut evals) {
            None => {
                // Invalid point: the admissible region ends inside
                // (prev_alpha, alpha); zoom toward the valid end.
                bracket = Some((prev_alpha, prev.take(), alpha));
                break;
            }
            Some(e) => {
                let worse_than_prev = prev.as_ref().is_some_and(|p| e.f >= p.f);
                if !armijo(&e) || worse_than_prev {
                    bracket = Some((prev_alpha, prev.take(), e.alpha));
                    break;
                }
                if curvature(&e) {
                    return Some(e);
                }
                if e.g.dot(dir) >= 0.0 {
                    bracket = Some((e.alpha, Some(e), prev_alpha.max(0.0)));
                    break;
                }
                prev_alpha = e.alpha;
                prev = Some(e);
                alpha *= 2.0;
            }
        }
    }

    // Zoom phase: bisect the bracket keeping the best Armijo point seen.
    let mut best: Option<Eval> = None;
    if let Some((mut lo, lo_eval, mut hi)) = bracket {
        if let Some(e) = lo_eval {
            if armijo(&e) {
                best = Some(e);
            }
        }
        for _ in 0..20 {
            if evals >= MAX_LINE_EVALS {
                break;
            }
            let mid = 0.5 * (lo + hi);
            match try_alpha(mid, &mut evals) {
                None => {
                    // Invalid midpoint: retreat toward lo (valid end).
                    hi = mid;
                }
                Some(e) => {
                    if !armijo(&e) || best.as_ref().is_some_and(|b| e.f >= b.f) {
                        hi = mid;
                    } else {
                        let done = curvature(&e);
                        let uphill = e.g.dot(dir) >= 0.0;
                        if best.as_ref().is_none_or(|b| e.f < b.f) {
                            best = Some(e);
                        }
                        if done {
                            return best;
                        }
                        if uphill {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                }
            }
        }
        if best.is_some() {
            return best;
        }
    }

    // Fallback: plain Armijo backtracking from 1.
    let mut alpha = 1.0;
    for _ in 0..60 {
        if evals >= MAX_LINE_EVALS + 60 {
            break;
        }
        if let Some(e) = try_alpha(alpha, &mut evals) {
            if armijo(&e) {
                return Some(e);
            }
        }
        alpha *= 0.5;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn minimizes_a_quadratic_exactly() {
        // f(x) = ½(x−c)ᵀA(x−c) with A diagonal.
        let a = [1.0, 10.0, 0.1];
        let c = [2.0, -1.0, 5.0];
        let f_g = |x: &[f64]| {
            let mut f = 0.0;
            let mut g = vec![0.0; 3];
            for i in 0..3 {
                f += 0.5 * a[i] * (x[i] - c[i]).powi(2);
                g[i] = a[i] * (x[i] - c[i]);
            }
            Some((f, g))
        };
        let out = minimize(f_g, &[0.0, 0.0, 0.0], &BfgsOptions::default()).unwrap();
        assert!(out.converged, "grad norm {}", out.grad_norm);
        for i in 0..3 {
            assert_relative_eq!(out.x[i], c[i], epsilon = 1e-6);
        }
    }

    #[test]
    fn minimizes_rosenbrock() {
        let f_g = |x: &[f64]| {
            let (a, b) = (1.0, 100.0);
            let f = (a - x[0]).powi(2) + b * (x[1] - x[0] * x[0]).powi(2);
            let g = vec![
                -2.0 * (a - x[0]) - 4.0 * b * x[0] * (x[1] - x[0] * x[0]),
                2.0 * b * (x[1] - x[0] * x[0]),
            ];
            Some((f, g))
        };
        let out = minimize(f_g, &[-1.2, 1.0], &BfgsOptions::default()).unwrap();
        assert!(out.converged, "iterations {} grad {}", out.iterations, out.grad_norm);
        assert_relative_eq!(out.x[0], 1.0, epsilon = 1e-5);
        assert_relative_eq!(out.x[1], 1.0, epsilon = 1e-5);
    }

    #[test]
    fn invalid_region_is_avoided() {
        // f(x) = -log(x) + x is only defined for x > 0; minimum at x = 1.
        let f_g = |x: &[f64]| {
            if x[0] <= 0.0 {
                return None;
            }
            Some((-x[0].ln() + x[0], vec![-1.0 / x[0] + 1.0]))
        };
        let out = minimize(f_g, &[3.0], &BfgsOptions::default()).unwrap();
        assert!(out.converged);
        assert_relative_eq!(out.x[0], 1.0, epsilon = 1e-6);
    }

    #[test]
    fn invalid_start_returns_none() {
        let f_g = |_: &[f64]| -> Option<(f64, Vec<f64>)> { None };
        assert!(minimize(f_g, &[1.0], &BfgsOptions::default()).is_none());
    }
}
