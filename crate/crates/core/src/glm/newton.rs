use log::{debug, warn};

use crate::error::{MvbError, Result};
use crate::linalg::solve_damped;
use crate::scalar::Scalar;

use super::{evaluate, Dataset, MvbGlmModel};

/// Controls for the Newton–Raphson fit.
#[derive(Debug, Clone)]
pub struct FitOptions<T> {
    /// Stop once the largest absolute gradient entry falls below this.
    pub gtol: T,
    pub max_iter: usize,
    /// Fit on centered and scaled covariates, then map the coefficients
    /// back to the original scale.
    pub standardize: bool,
    /// Any coefficient exceeding this magnitude is taken as a sign of
    /// complete separation.
    pub separation_bound: T,
    /// First ridge tried (relative to the Hessian diagonal) when the
    /// Cholesky factorization fails.
    pub initial_ridge: T,
    pub max_halvings: usize,
}

impl<T: Scalar> Default for FitOptions<T> {
    fn default() -> Self {
        Self {
            gtol: T::lit(1e-8),
            max_iter: 100,
            standardize: false,
            separation_bound: T::lit(30.0),
            initial_ridge: T::lit(1e-10),
            max_halvings: 60,
        }
    }
}

fn max_abs<T: Scalar>(v: &[T]) -> T {
    v.iter()
        .fold(T::zero(), |m, x| if x.abs() > m { x.abs() } else { m })
}

/// Maximum-likelihood fit by damped Newton–Raphson, starting from the
/// all-zero (uniform) model.
///
/// Each iteration solves `H Δ = −g` by Cholesky (adding a ridge when the
/// factorization fails) and halves the step until the negative
/// log-likelihood does not increase.
pub fn fit<T: Scalar>(data: &Dataset<T>, options: &FitOptions<T>) -> Result<MvbGlmModel<T>> {
    let start = MvbGlmModel::zeros(data.k(), data.p())?;
    fit_from(data, options, start)
}

pub(crate) fn fit_from<T: Scalar>(
    data: &Dataset<T>,
    options: &FitOptions<T>,
    start: MvbGlmModel<T>,
) -> Result<MvbGlmModel<T>> {
    let dim = start.n_params();
    if dim > data.n() {
        warn!(
            "{dim} free parameters exceed {} observations; the MLE may not exist",
            data.n()
        );
    }

    if !options.standardize || data.p() == 0 {
        return newton(data, options, start);
    }
    let (mean, sd) = data.column_moments();
    let scaled = data.standardized(&mean, &sd);
    let start = to_scaled(start, &mean, &sd);
    let fitted = newton(&scaled, options, start)?;
    Ok(from_scaled(fitted, &mean, &sd))
}

fn to_scaled<T: Scalar>(mut model: MvbGlmModel<T>, mean: &[T], sd: &[T]) -> MvbGlmModel<T> {
    let w = model.p() + 1;
    for block in model.coefficients_mut().chunks_exact_mut(w) {
        let mut shift = T::zero();
        for j in 1..w {
            shift += block[j] * mean[j - 1];
            block[j] *= sd[j - 1];
        }
        block[0] += shift;
    }
    model
}

fn from_scaled<T: Scalar>(mut model: MvbGlmModel<T>, mean: &[T], sd: &[T]) -> MvbGlmModel<T> {
    let w = model.p() + 1;
    for block in model.coefficients_mut().chunks_exact_mut(w) {
        let mut shift = T::zero();
        for j in 1..w {
            block[j] /= sd[j - 1];
            shift += block[j] * mean[j - 1];
        }
        block[0] -= shift;
    }
    model
}

fn newton<T: Scalar>(
    data: &Dataset<T>,
    options: &FitOptions<T>,
    mut model: MvbGlmModel<T>,
) -> Result<MvbGlmModel<T>> {
    let dim = model.n_params();
    let mut eval = evaluate(&model, data, true, true);
    if !eval.nll.is_finite() {
        return Err(MvbError::Divergence(
            "negative log-likelihood is not finite at the starting point".into(),
        ));
    }
    let mut trace = vec![eval.nll];
    let mut iterations = 0;

    while iterations < options.max_iter {
        let gmax = max_abs(&eval.grad);
        if !gmax.is_finite() {
            return Err(MvbError::Divergence("gradient is not finite".into()));
        }
        if gmax < options.gtol {
            break;
        }
        let rhs: Vec<T> = eval.grad.iter().map(|g| -*g).collect();
        let (direction, ridge) = solve_damped(&eval.hess, dim, &rhs, options.initial_ridge)
            .ok_or_else(|| MvbError::Divergence("Newton system could not be solved".into()))?;
        if ridge > T::zero() {
            debug!("iteration {iterations}: Hessian damped with ridge {ridge}");
        }

        let current = model.coefficients().to_vec();
        let mut step = T::one();
        let mut accepted = None;
        for _ in 0..=options.max_halvings {
            for ((c, c0), d) in model
                .coefficients_mut()
                .iter_mut()
                .zip(&current)
                .zip(&direction)
            {
                *c = *c0 + step * *d;
            }
            let trial = evaluate(&model, data, false, false).nll;
            if trial.is_finite() && trial <= eval.nll {
                accepted = Some(trial);
                break;
            }
            step = step / T::lit(2.0);
        }
        if accepted.is_none() {
            model.coefficients_mut().copy_from_slice(&current);
            debug!("iteration {iterations}: no decrease after step halving; stopping");
            break;
        }

        iterations += 1;
        let cmax = max_abs(model.coefficients());
        if cmax > options.separation_bound {
            return Err(MvbError::Separation {
                magnitude: cmax.as_f64(),
                bound: options.separation_bound.as_f64(),
            });
        }
        eval = evaluate(&model, data, true, true);
        trace.push(eval.nll);
    }

    model.converged = max_abs(&eval.grad) < options.gtol;
    model.iterations = iterations;
    model.final_nll = eval.nll;
    model.trace = trace;
    Ok(model)
}
