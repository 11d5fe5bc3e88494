//! Small Levenberg-Marquardt engine for the calibration fits.
//!
//! Damped normal equations with a forward-difference Jacobian, lower-bound
//! clamping, and accept-only-improving steps, so the cost trace is
//! monotonically non-increasing by construction. Sized for n <= 4
//! parameters; the dense solves are direct Gaussian elimination.

const LAMBDA_INIT: f64 = 1e-3;
const LAMBDA_GROW: f64 = 10.0;
const LAMBDA_SHRINK: f64 = 0.3;
const LAMBDA_MIN: f64 = 1e-12;
const LAMBDA_MAX: f64 = 1e14;
const REL_STEP: f64 = 1e-6;
const REL_IMPROVEMENT_TOL: f64 = 1e-14;
const MAX_REJECTS_PER_ITER: usize = 30;

pub(crate) struct LmOutcome {
    pub params: Vec<f64>,
    /// Sum of squared residuals at `params`.
    pub cost: f64,
    /// Cost after every accepted step, starting with the initial cost.
    pub cost_trace: Vec<f64>,
    /// Full residual-vector evaluations performed.
    pub evaluations: usize,
    pub converged: bool,
    pub iterations: usize,
    /// Diagonal of the parameter covariance estimate at the solution.
    pub covariance_diag: Vec<f64>,
}

/// Minimize the sum of squared residuals subject to `params >= lower`.
///
/// `residuals` writes the m residuals for the given parameters. `scales`
/// gives a typical magnitude per parameter; the finite-difference step is
/// `1e-6 * max(|x_j|, scales[j])` so parameters sitting at zero still get a
/// meaningful probe. The budget caps residual-vector evaluations;
/// exhausting it or `max_iter` leaves `converged` false.
pub(crate) fn least_squares(
    residuals: &mut dyn FnMut(&[f64], &mut [f64]),
    x0: &[f64],
    lower: &[f64],
    scales: &[f64],
    m: usize,
    max_iter: usize,
    max_evals: usize,
) -> LmOutcome {
    let n = x0.len();
    assert!((1..=4).contains(&n), "engine sized for 1..=4 parameters");
    assert!(m > n, "need more residuals than parameters");
    assert_eq!(lower.len(), n);
    assert_eq!(scales.len(), n);
    assert!(scales.iter().all(|s| s.is_finite() && *s > 0.0));

    let clamp = |x: &mut [f64]| {
        for (xi, lo) in x.iter_mut().zip(lower) {
            if *xi < *lo {
                *xi = *lo;
            }
        }
    };

    let mut x: Vec<f64> = x0.to_vec();
    clamp(&mut x);

    let mut r = vec![0.0; m];
    let mut evals = 0usize;

    residuals(&x, &mut r);
    evals += 1;
    let mut cost = sum_of_squares(&r);
    let mut trace = vec![cost];
    let mut lambda = LAMBDA_INIT;
    let mut converged = false;
    let mut iterations = 0;

    let mut r_probe = vec![0.0; m];
    let mut jac = vec![0.0; m * n];

    'outer: for iter in 0..max_iter {
        iterations = iter + 1;
        if evals + n >= max_evals {
            break;
        }
        // J[i][j] = d r_i / d x_j, forward differences.
        for j in 0..n {
            let h = REL_STEP * x[j].abs().max(scales[j]);
            let mut xp = x.clone();
            xp[j] += h;
            residuals(&xp, &mut r_probe);
            evals += 1;
            for i in 0..m {
                jac[i * n + j] = (r_probe[i] - r[i]) / h;
            }
        }

        let jtj = normal_matrix(&jac, m, n);
        let jtr = gradient(&jac, &r, m, n);

        let mut accepted = false;
        for _ in 0..MAX_REJECTS_PER_ITER {
            if evals >= max_evals {
                break 'outer;
            }
            let mut a = jtj.clone();
            for j in 0..n {
                let d = if jtj[j * n + j] > 0.0 {
                    jtj[j * n + j]
                } else {
                    1e-300
                };
                a[j * n + j] += lambda * d;
            }
            let mut delta = match solve(&a, &jtr, n) {
                Some(d) => d,
                None => {
                    lambda *= LAMBDA_GROW;
                    if lambda > LAMBDA_MAX {
                        converged = true;
                        break 'outer;
                    }
                    continue;
                }
            };
            for d in delta.iter_mut() {
                *d = -*d;
            }
            let mut x_new: Vec<f64> = x.iter().zip(&delta).map(|(a, b)| a + b).collect();
            clamp(&mut x_new);
            residuals(&x_new, &mut r_probe);
            evals += 1;
            let cost_new = sum_of_squares(&r_probe);
            if cost_new < cost {
                let improvement = (cost - cost_new) / cost.max(1e-300);
                x = x_new;
                std::mem::swap(&mut r, &mut r_probe);
                cost = cost_new;
                trace.push(cost);
                lambda = (lambda * LAMBDA_SHRINK).max(LAMBDA_MIN);
                accepted = true;
                if improvement < REL_IMPROVEMENT_TOL {
                    converged = true;
                    break 'outer;
                }
                break;
            }
            lambda *= LAMBDA_GROW;
            if lambda > LAMBDA_MAX {
                converged = true;
                break 'outer;
            }
        }
        if !accepted {
            converged = true;
            break;
        }
    }

    // Covariance from the Jacobian at the solution: sigma^2 (J^T J)^-1.
    for j in 0..n {
        let h = REL_STEP * x[j].abs().max(scales[j]);
        let mut xp = x.clone();
        xp[j] += h;
        residuals(&xp, &mut r_probe);
        evals += 1;
        for i in 0..m {
            jac[i * n + j] = (r_probe[i] - r[i]) / h;
        }
    }
    let mut jtj = normal_matrix(&jac, m, n);
    for j in 0..n {
        if jtj[j * n + j] <= 0.0 {
            jtj[j * n + j] = 1e-300;
        }
    }
    let sigma2 = cost / (m - n) as f64;
    let covariance_diag = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            match solve(&jtj, &e, n) {
                Some(col) => sigma2 * col[j],
                None => f64::INFINITY,
            }
        })
        .collect();

    LmOutcome {
        params: x,
        cost,
        cost_trace: trace,
        evaluations: evals,
        converged,
        iterations,
        covariance_diag,
    }
}

fn sum_of_squares(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

fn normal_matrix(jac: &[f64], m: usize, n: usize) -> Vec<f64> {
    let mut jtj = vec![0.0; n * n];
    for i in 0..m {
        for a in 0..n {
            let ja = jac[i * n + a];
            if ja == 0.0 {
                continue;
            }
            for b in a..n {
                jtj[a * n + b] += ja * jac[i * n + b];
            }
        }
    }
    for a in 0..n {
        for b in 0..a {
            jtj[a * n + b] = jtj[b * n + a];
        }
    }
    jtj
}

fn gradient(jac: &[f64], r: &[f64], m: usize, n: usize) -> Vec<f64> {
    let mut g = vec![0.0; n];
    for i in 0..m {
        for j in 0..n {
            g[j] += jac[i * n + j] * r[i];
        }
    }
    g
}

/// Gaussian elimination with partial pivoting; None when singular.
fn solve(a: &[f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if m[row * n + col].abs() > m[pivot * n + col].abs() {
                pivot = row;
            }
        }
        if m[pivot * n + col] == 0.0 || !m[pivot * n + col].is_finite() {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            rhs.swap(col, pivot);
        }
        let d = m[col * n + col];
        for row in col + 1..n {
            let factor = m[row * n + col] / d;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                m[row * n + k] -= factor * m[col * n + k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = rhs[col];
        for k in col + 1..n {
            acc -= m[col * n + k] * x[k];
        }
        x[col] = acc / m[col * n + col];
        if !x[col].is_finite() {
            return None;
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_linear_model_exactly() {
        // y = 2x + 3 sampled without noise.
        let xs: Vec<f64> = (0..20).map(|i| i as f64 / 2.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 3.0).collect();
        let mut resid = |p: &[f64], out: &mut [f64]| {
            for (i, x) in xs.iter().enumerate() {
                out[i] = p[0] * x + p[1] - ys[i];
            }
        };
        let out = least_squares(
            &mut resid,
            &[1.0, 0.0],
            &[-1e30, -1e30],
            &[1.0, 1.0],
            20,
            100,
            10_000,
        );
        assert!(out.converged);
        assert!((out.params[0] - 2.0).abs() < 1e-10);
        assert!((out.params[1] - 3.0).abs() < 1e-10);
        assert!(out.cost < 1e-18);
    }

    #[test]
    fn recovers_nonlinear_model() {
        // y = a * exp(-b x).
        let xs: Vec<f64> = (0..40).map(|i| i as f64 / 10.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 5.0 * (-0.7 * x).exp()).collect();
        let mut resid = |p: &[f64], out: &mut [f64]| {
            for (i, x) in xs.iter().enumerate() {
                out[i] = p[0] * (-p[1] * x).exp() - ys[i];
            }
        };
        let out = least_squares(
            &mut resid,
            &[1.0, 0.1],
            &[0.0, 0.0],
            &[1.0, 1.0],
            40,
            200,
            10_000,
        );
        assert!(out.converged);
        assert!((out.params[0] - 5.0).abs() < 1e-6, "a = {}", out.params[0]);
        assert!((out.params[1] - 0.7).abs() < 1e-7, "b = {}", out.params[1]);
    }

    #[test]
    fn cost_trace_is_monotone() {
        let xs: Vec<f64> = (0..30).map(|i| i as f64 / 5.0).collect();
        let ys: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, x)| 4.0 * (-0.5 * x).exp() + if i % 2 == 0 { 0.05 } else { -0.05 })
            .collect();
        let mut resid = |p: &[f64], out: &mut [f64]| {
            for (i, x) in xs.iter().enumerate() {
                out[i] = p[0] * (-p[1] * x).exp() - ys[i];
            }
        };
        let out = least_squares(
            &mut resid,
            &[1.0, 0.1],
            &[0.0, 0.0],
            &[1.0, 1.0],
            30,
            200,
            10_000,
        );
        for w in out.cost_trace.windows(2) {
            assert!(w[1] <= w[0], "trace regressed: {} -> {}", w[0], w[1]);
        }
        assert_eq!(out.cost, *out.cost_trace.last().unwrap());
    }

    #[test]
    fn respects_lower_bounds() {
        // Optimum of (x + 2)^2 is below the bound x >= 0.
        let mut resid = |p: &[f64], out: &mut [f64]| {
            out[0] = p[0] + 2.0;
            out[1] = 0.1 * (p[0] + 2.0);
        };
        let out = least_squares(&mut resid, &[1.0], &[0.0], &[1.0], 2, 100, 10_000);
        assert_eq!(out.params[0], 0.0);
    }

    #[test]
    fn insensitive_parameter_stays_put_with_huge_variance() {
        // Second parameter does not enter the residuals at all. The
        // constant offset shifts the optimum slope off 3 by 0.01*sx/sxx.
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let sx: f64 = xs.iter().sum();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let expected = 3.0 - 0.01 * sx / sxx;
        let mut resid = |p: &[f64], out: &mut [f64]| {
            for (i, x) in xs.iter().enumerate() {
                out[i] = p[0] * x - 3.0 * x + 0.01;
            }
        };
        let out = least_squares(
            &mut resid,
            &[1.0, 7.0],
            &[0.0, 0.0],
            &[1.0, 1.0],
            10,
            100,
            10_000,
        );
        assert!(
            (out.params[0] - expected).abs() < 1e-6,
            "slope {} vs {}",
            out.params[0],
            expected
        );
        assert_eq!(out.params[1], 7.0);
        assert!(out.covariance_diag[1] > 1e100);
    }

    #[test]
    fn respects_evaluation_budget() {
        let xs: Vec<f64> = (0..50).map(|i| i as f64 / 10.0).collect();
        let mut resid = |p: &[f64], out: &mut [f64]| {
            for (i, x) in xs.iter().enumerate() {
                out[i] = p[0] * (-p[1] * x).exp() - (5.0 * (-0.7 * x).exp());
            }
        };
        let out = least_squares(
            &mut resid,
            &[1.0, 0.1],
            &[0.0, 0.0],
            &[1.0, 1.0],
            50,
            10_000,
            25,
        );
        assert!(out.evaluations <= 25 + 2);
    }

    #[test]
    fn solver_handles_singular_matrix() {
        let a = [1.0, 2.0, 2.0, 4.0];
        assert!(solve(&a, &[1.0, 2.0], 2).is_none());
        let id = [1.0, 0.0, 0.0, 1.0];
        let x = solve(&id, &[3.0, 4.0], 2).unwrap();
        assert_eq!(x, vec![3.0, 4.0]);
    }
}
