//! Small dense Levenberg-Marquardt solver.
//!
//! The fits in this crate have at most four parameters and a few thousand
//! residuals, so a hand-rolled normal-equations implementation with central
//! finite differences is both adequate and dependency-free. The damping
//! parameter lambda multiplies the diagonal of J^T J (Marquardt scaling),
//! is divided by 10 on accepted steps and multiplied by 10 on rejected ones,
//! and a fit is declared degenerate once lambda exceeds 1e12 without any
//! acceptable step.

use crate::error::{Error, Result};

pub(crate) struct LmOptions {
    pub max_iterations: usize,
    /// Relative step-size convergence threshold.
    pub tolerance: f64,
}

pub(crate) struct LmOutcome {
    pub params: Vec<f64>,
    /// Sum of squared residuals at the solution.
    pub ssr: f64,
    pub iterations: usize,
    pub converged: bool,
    /// (J^T J)^(-1) * ssr/(n-p), row-major; None when n <= p or the normal
    /// matrix is numerically singular at the solution.
    pub covariance: Option<Vec<Vec<f64>>>,
}

/// Minimize the sum of squares of `residuals(x)` starting from `x0`.
pub(crate) fn least_squares<F>(residuals: F, x0: &[f64], opts: &LmOptions) -> Result<LmOutcome>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let p = x0.len();
    let mut x = x0.to_vec();
    let mut r = residuals(&x);
    let n = r.len();
    if n == 0 {
        return Err(Error::domain("least squares needs at least one residual"));
    }
    let mut ssr = dot(&r, &r);
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..opts.max_iterations {
        iterations = iter + 1;
        let jac = jacobian(&residuals, &x, n);
        let a = normal_matrix(&jac, p);
        let g = gradient(&jac, &r, p);

        if g.iter().all(|gi| gi.abs() < 1e-14 * (1.0 + ssr)) {
            converged = true;
            break;
        }

        // inner damping loop: escalate lambda until a step reduces the cost
        let mut stepped = false;
        loop {
            let mut damped = a.clone();
            for i in 0..p {
                // Marquardt scaling, with an absolute floor for parameters
                // the residuals currently do not depend on
                let d = damped[i][i];
                damped[i][i] = d + lambda * d.max(1e-30);
            }
            let rhs: Vec<f64> = g.iter().map(|gi| -gi).collect();
            if let Some(step) = solve(damped, rhs) {
                let step_norm = dot(&step, &step).sqrt();
                let x_norm = dot(&x, &x).sqrt();
                let small = step_norm <= opts.tolerance * (x_norm + opts.tolerance);
                let trial: Vec<f64> = x.iter().zip(&step).map(|(xi, si)| xi + si).collect();
                let r_trial = residuals(&trial);
                let ssr_trial = dot(&r_trial, &r_trial);
                if ssr_trial.is_finite() && ssr_trial < ssr {
                    x = trial;
                    r = r_trial;
                    ssr = ssr_trial;
                    lambda = (lambda / 10.0).max(1e-12);
                    stepped = true;
                    if small {
                        converged = true;
                    }
                    break;
                }
                // a sub-tolerance step that fails to improve after the
                // Gauss-Newton direction was already damped away means the
                // cost is flat to floating-point resolution: done
                if small && lambda >= 1.0 {
                    converged = true;
                    break;
                }
            }
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
        if converged {
            break;
        }
        if !stepped {
            return Err(Error::DegenerateFit(format!(
                "no descent direction after damping escalation at iteration {iterations}; \
                 the data do not constrain all parameters"
            )));
        }
        if ssr <= 1e-300 {
            converged = true;
            break;
        }
    }

    let covariance = if n > p {
        let jac = jacobian(&residuals, &x, n);
        let a = normal_matrix(&jac, p);
        invert(&a).map(|inv| {
            let s2 = ssr / (n - p) as f64;
            inv.into_iter()
                .map(|row| row.into_iter().map(|v| v * s2).collect())
                .collect()
        })
    } else {
        None
    };

    Ok(LmOutcome {
        params: x,
        ssr,
        iterations,
        converged,
        covariance,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Central-difference Jacobian, h_j = 1e-6 * max(|x_j|, 1).
fn jacobian<F>(residuals: &F, x: &[f64], n: usize) -> Vec<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let p = x.len();
    let mut jac = vec![vec![0.0; p]; n];
    let mut xp = x.to_vec();
    for j in 0..p {
        let h = 1e-6 * x[j].abs().max(1.0);
        xp[j] = x[j] + h;
        let r_plus = residuals(&xp);
        xp[j] = x[j] - h;
        let r_minus = residuals(&xp);
        xp[j] = x[j];
        for i in 0..n {
            jac[i][j] = (r_plus[i] - r_minus[i]) / (2.0 * h);
        }
    }
    jac
}

fn normal_matrix(jac: &[Vec<f64>], p: usize) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; p]; p];
    for row in jac {
        for i in 0..p {
            for j in i..p {
                a[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..p {
        for j in 0..i {
            a[i][j] = a[j][i];
        }
    }
    a
}

fn gradient(jac: &[Vec<f64>], r: &[f64], p: usize) -> Vec<f64> {
    let mut g = vec![0.0; p];
    for (row, ri) in jac.iter().zip(r) {
        for j in 0..p {
            g[j] += row[j] * ri;
        }
    }
    g
}

/// Gaussian elimination with partial pivoting. Returns None on a (near-)
/// singular pivot so the caller can react by raising the damping.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let p = b.len();
    for col in 0..p {
        let pivot_row = (col..p).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot_row][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..p {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..p {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; p];
    for col in (0..p).rev() {
        let mut acc = b[col];
        for k in col + 1..p {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
        if !x[col].is_finite() {
            return None;
        }
    }
    Some(x)
}

fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let p = a.len();
    let mut inv = vec![vec![0.0; p]; p];
    for col in 0..p {
        let mut e = vec![0.0; p];
        e[col] = 1.0;
        let x = solve(a.to_vec(), e)?;
        for row in 0..p {
            inv[row][col] = x[row];
        }
    }
    Some(inv)
}
