//! Levenberg–Marquardt least squares and the four-exponential Q-function fit.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::noise::{max_abs_deviation, FitSource, NoiseModel, QApprox, TABLE};

/// Nonlinear least-squares problem: minimize ½‖r(θ)‖².
pub struct LmProblem<F> {
    pub residual: F,
    pub initial: Vec<f64>,
    pub max_iterations: usize,
    /// Stop once ‖Jᵀr‖∞ falls below this.
    pub gradient_tol: f64,
    /// Stop once ‖δ‖ < step_tol · (‖θ‖ + step_tol).
    pub step_tol: f64,
    pub damping_init: f64,
    pub damping_factor: f64,
}

impl<F: Fn(&[f64]) -> Vec<f64>> LmProblem<F> {
    pub fn new(residual: F, initial: Vec<f64>) -> Self {
        Self {
            residual,
            initial,
            max_iterations: 500,
            gradient_tol: 1e-12,
            step_tol: 1e-12,
            damping_init: 1e-3,
            damping_factor: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmStatus {
    Gradient,
    Step,
    MaxIter,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmResult {
    pub params: Vec<f64>,
    pub ssr: f64,
    pub iterations: usize,
    pub status: LmStatus,
    /// SSR at the start and after every accepted step.
    pub ssr_history: Vec<f64>,
}

fn eval<F: Fn(&[f64]) -> Vec<f64>>(f: &F, theta: &[f64]) -> Option<DVector<f64>> {
    let r = f(theta);
    r.iter().all(|v| v.is_finite()).then(|| DVector::from_vec(r))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Classic Marquardt-scaled LM with a forward-difference Jacobian.
///
/// A trial point whose residual is not finite is rejected like any uphill
/// step. A non-finite residual at the starting point or inside the Jacobian
/// is an error.
pub fn levenberg_marquardt<F: Fn(&[f64]) -> Vec<f64>>(problem: &LmProblem<F>) -> Result<LmResult> {
    let f = &problem.residual;
    let n = problem.initial.len();
    if !(problem.gradient_tol > 0.0 && problem.step_tol > 0.0 && problem.damping_init > 0.0)
        || !(problem.damping_factor > 1.0)
    {
        return Err(Error::Precondition { detail: "tolerances and damping must be positive".into() });
    }
    let mut theta = problem.initial.clone();
    let mut r = eval(f, &theta).ok_or_else(|| Error::NonFiniteResidual { params: theta.clone() })?;
    if r.len() < n {
        return Err(Error::Precondition {
            detail: format!("{} residuals for {} parameters", r.len(), n),
        });
    }
    let mut ssr = r.norm_squared();
    let mut history = vec![ssr];
    let mut lambda = problem.damping_init;
    let mut iterations = 0;

    while iterations < problem.max_iterations {
        iterations += 1;
        let mut jac = DMatrix::zeros(r.len(), n);
        for j in 0..n {
            let h = 1e-7 * theta[j].abs().max(1.0);
            let mut shifted = theta.clone();
            shifted[j] += h;
            let rh = eval(f, &shifted).ok_or(Error::NonFiniteResidual { params: shifted })?;
            jac.set_column(j, &((rh - &r) / h));
        }
        let grad = jac.transpose() * &r;
        if grad.amax() < problem.gradient_tol {
            return Ok(LmResult { params: theta, ssr, iterations, status: LmStatus::Gradient, ssr_history: history });
        }
        let jtj = jac.transpose() * &jac;
        let diag_floor = 1e-12 * jtj.diagonal().amax().max(f64::MIN_POSITIVE);

        loop {
            let mut lhs = jtj.clone();
            for j in 0..n {
                lhs[(j, j)] += lambda * jtj[(j, j)].max(diag_floor);
            }
            let step = match lhs.cholesky() {
                Some(ch) => -ch.solve(&grad),
                None => {
                    lambda *= problem.damping_factor;
                    if lambda > 1e300 {
                        return Ok(LmResult { params: theta, ssr, iterations, status: LmStatus::Step, ssr_history: history });
                    }
                    continue;
                }
            };
            let small_step = norm(step.as_slice()) < problem.step_tol * (norm(&theta) + problem.step_tol);
            let trial: Vec<f64> = theta.iter().zip(step.iter()).map(|(t, d)| t + d).collect();
            let accepted = match eval(f, &trial) {
                Some(rt) => {
                    let s = rt.norm_squared();
                    if s < ssr {
                        theta = trial;
                        r = rt;
                        ssr = s;
                        history.push(s);
                        lambda /= problem.damping_factor;
                        true
                    } else {
                        false
                    }
                }
                None => false,
            };
            if small_step {
                return Ok(LmResult { params: theta, ssr, iterations, status: LmStatus::Step, ssr_history: history });
            }
            if accepted {
                break;
            }
            lambda *= problem.damping_factor;
        }
    }
    Ok(LmResult { params: theta, ssr, iterations, status: LmStatus::MaxIter, ssr_history: history })
}

/// x = 0 and 0.0625 k² for k = 1..32, covering [0, 64].
pub fn default_grid() -> Vec<f64> {
    std::iter::once(0.0).chain((1..=32).map(|k| 0.0625 * (k * k) as f64)).collect()
}

const RESTARTS: usize = 8;
const SEED: u64 = 0x00C0_FFEE_5EED;

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::Precondition { detail: "grid points must be finite and non-negative".into() });
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    if sorted.len() < 16 {
        return Err(Error::Precondition { detail: format!("grid has {} distinct points, need 16", sorted.len()) });
    }
    Ok(())
}

/// Starting points: the nearest builtin row with weights rescaled to sum to
/// Q_a(0), then log-uniform jitters by factors in [0.5, 2].
fn initial_points(a: f64, origin: f64) -> Vec<Vec<f64>> {
    let row = TABLE
        .iter()
        .min_by(|x, y| (x.0 - a).abs().total_cmp(&(y.0 - a).abs()))
        .expect("table is non-empty");
    let sum: f64 = row.1.iter().sum();
    let base: Vec<f64> =
        row.1.iter().map(|p| p * origin / sum).chain(row.2.iter().map(|q| q.ln())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ a.to_bits());
    let mut starts = vec![base.clone()];
    let span = 2f64.ln();
    for _ in 1..RESTARTS {
        let start = base
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let u: f64 = rng.gen_range(-span..=span);
                if j < 4 {
                    v * u.exp()
                } else {
                    v + u
                }
            })
            .collect();
        starts.push(start);
    }
    starts
}

fn to_fit(a: f64, theta: &[f64]) -> QApprox {
    let mut p = [0.0; 4];
    let mut q = [0.0; 4];
    for i in 0..4 {
        p[i] = theta[i];
        q[i] = theta[4 + i].exp();
    }
    QApprox { a, p, q, source: FitSource::Refit }.canonical()
}

/// Refits Q_a(√x) ≈ Σ pᵢ e^(−qᵢx) by least squares on `grid` (default
/// [`default_grid`]). Decay rates are optimized as ln qᵢ. Restarts run in
/// parallel; the lowest SSR wins, ties going to the lexicographically
/// smaller sorted q.
pub fn fit_q_approx(a: f64, grid: Option<&[f64]>) -> Result<QApprox> {
    let model = NoiseModel::new(a)?;
    let owned;
    let grid = match grid {
        Some(g) => g,
        None => {
            owned = default_grid();
            &owned
        }
    };
    validate_grid(grid)?;
    let targets = grid.iter().map(|&x| model.q_exact(x.sqrt())).collect::<Result<Vec<f64>>>()?;
    let residual = |theta: &[f64]| -> Vec<f64> {
        grid.iter()
            .zip(&targets)
            .map(|(&x, &t)| (0..4).map(|i| theta[i] * (-theta[4 + i].exp() * x).exp()).sum::<f64>() - t)
            .collect()
    };

    let outcomes: Vec<Result<LmResult>> = initial_points(a, model.q_at_origin())
        .into_par_iter()
        .map(|start| {
            let mut problem = LmProblem::new(&residual, start);
            // near-coincident rates make some starts crawl for thousands of steps
            problem.max_iterations = 10_000;
            problem.gradient_tol = 1e-10;
            problem.step_tol = 1e-10;
            levenberg_marquardt(&problem)
        })
        .collect();

    let mut best: Option<(LmResult, QApprox)> = None;
    for outcome in outcomes.into_iter().flatten() {
        let fit = to_fit(a, &outcome.params);
        let better = match &best {
            None => true,
            Some((b, bf)) => {
                outcome.ssr < b.ssr
                    || (outcome.ssr == b.ssr
                        && fit.q.iter().zip(&bf.q).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne())
                            == Some(std::cmp::Ordering::Less))
            }
        };
        if better {
            best = Some((outcome, fit));
        }
    }
    match best {
        Some((res, fit)) if res.status != LmStatus::MaxIter => Ok(fit),
        Some((_, fit)) => {
            let max_abs_dev = max_abs_deviation(&fit, &model, grid)?;
            Err(Error::FitFailed { best: Box::new(fit), max_abs_dev })
        }
        None => {
            let fallback = QApprox::builtin(a).unwrap_or_else(|_| to_fit(a, &initial_points(a, model.q_at_origin())[0]));
            let max_abs_dev = max_abs_deviation(&fallback, &model, grid)?;
            Err(Error::FitFailed { best: Box::new(fallback), max_abs_dev })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_problem() {
        let p = LmProblem::new(|t: &[f64]| vec![t[0] - 1.0, t[1] - 2.0], vec![0.0, 0.0]);
        let r = levenberg_marquardt(&p).unwrap();
        assert!((r.params[0] - 1.0).abs() < 1e-9 && (r.params[1] - 2.0).abs() < 1e-9);
        assert!(r.ssr < 1e-18);
    }

    #[test]
    fn exponential_recovery() {
        let xs: Vec<f64> = (0..=16).map(|k| 0.5 * k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 * (-2.0 * x).exp()).collect();
        let p = LmProblem::new(
            |t: &[f64]| xs.iter().zip(&ys).map(|(x, y)| t[0] * (-t[1] * x).exp() - y).collect(),
            vec![1.0, 1.0],
        );
        let r = levenberg_marquardt(&p).unwrap();
        assert!((r.params[0] - 0.5).abs() < 1e-6 && (r.params[1] - 2.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn rosenbrock() {
        let mut p = LmProblem::new(|t: &[f64]| vec![10.0 * (t[1] - t[0] * t[0]), 1.0 - t[0]], vec![-1.2, 1.0]);
        p.max_iterations = 1000;
        let r = levenberg_marquardt(&p).unwrap();
        assert!((r.params[0] - 1.0).abs() < 1e-6 && (r.params[1] - 1.0).abs() < 1e-6, "{r:?}");
        assert!(r.ssr_history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn non_finite_start_is_an_error() {
        let p = LmProblem::new(|t: &[f64]| vec![t[0].ln()], vec![-1.0]);
        assert!(matches!(levenberg_marquardt(&p), Err(Error::NonFiniteResidual { .. })));
    }

    #[test]
    fn underdetermined_rejected() {
        let p = LmProblem::new(|t: &[f64]| vec![t[0] + t[1]], vec![0.0, 0.0]);
        assert!(matches!(levenberg_marquardt(&p), Err(Error::Precondition { .. })));
    }

    #[test]
    fn grid_shape() {
        let g = default_grid();
        assert_eq!(g.len(), 33);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[32], 64.0);
        assert!(matches!(fit_q_approx(2.0, Some(&[0.0, 1.0, 2.0])), Err(Error::Precondition { .. })));
        assert!(matches!(fit_q_approx(0.1, None), Err(Error::NoiseShapeOutOfRange { .. })));
    }

    #[test]
    fn gaussian_refit() {
        let fit = fit_q_approx(2.0, None).unwrap();
        assert_eq!(fit.source, FitSource::Refit);
        assert!(fit.q.windows(2).all(|w| w[0] <= w[1]));
        assert!((fit.weight_sum() - 0.5).abs() < 5e-3);
        let model = NoiseModel::new(2.0).unwrap();
        let grid = default_grid();
        let table = max_abs_deviation(&QApprox::builtin(2.0).unwrap(), &model, &grid).unwrap();
        let refit = max_abs_deviation(&fit, &model, &grid).unwrap();
        assert!(refit <= 1.5 * table, "{refit} vs {table}");
    }
}
