//! Proximal gradient (ISTA) with backtracking for the L1-penalized model.
//!
//! Each trial step is proposed with a Barzilai–Borwein length and shrunk
//! until the smooth part satisfies the quadratic upper bound and the full
//! objective does not increase. Soft-thresholding writes exact zeros.

use std::fmt;

use crate::error::{MvbError, Result};
use crate::glm::{evaluate, fit, Dataset, FitOptions, MvbGlmModel};
use crate::lattice::ensure_same_dim;
use crate::scalar::Scalar;

use super::PenaltySpec;

#[derive(Debug, Clone)]
pub struct L1Options<T> {
    /// Stop when the largest KKT residual falls below this.
    pub tol: T,
    /// Residual bound for the reported KKT certificate.
    pub ktol: T,
    pub max_iter: usize,
    pub initial_step: T,
}

impl<T: Scalar> Default for L1Options<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-8),
            ktol: T::lit(1e-6),
            max_iter: 100_000,
            initial_step: T::one(),
        }
    }
}

/// Optimality certificate for a penalized solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktReport<T> {
    /// Largest residual over all coordinates: `|g|` for intercepts,
    /// `max(|g| − λ, 0)` for zero coefficients, `|g + λ sign(c)|` otherwise,
    /// where `g` is the gradient of `(1/n) NLL`.
    pub max_violation: T,
    pub ktol: T,
    pub satisfied: bool,
}

impl<T: Scalar> fmt::Display for KktReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kkt_max_violation={}\tktol={}\tsatisfied={}",
            self.max_violation, self.ktol, self.satisfied
        )
    }
}

#[derive(Debug, Clone)]
pub struct L1Fit<T> {
    /// `final_nll` holds the unpenalized negative log-likelihood and
    /// `trace` the penalized objective per accepted iteration.
    pub model: MvbGlmModel<T>,
    pub kkt: KktReport<T>,
    pub objective: T,
}

fn max_violation<T: Scalar>(coef: &[T], grad: &[T], pen: &PenaltySpec<T>, w: usize) -> T {
    let mut worst = T::zero();
    for (i, (cb, gb)) in coef.chunks_exact(w).zip(grad.chunks_exact(w)).enumerate() {
        let lambda = pen.lambda_by_mask(i + 1);
        for j in 0..w {
            let (c, g) = (cb[j], gb[j]);
            let r = if j == 0 {
                g.abs()
            } else if c == T::zero() {
                (g.abs() - lambda).max(T::zero())
            } else {
                (g + lambda * c.signum()).abs()
            };
            if r > worst || r.is_nan() {
                worst = r;
            }
        }
    }
    worst
}

fn smooth_value<T: Scalar>(model: &MvbGlmModel<T>, data: &Dataset<T>, inv_n: T) -> T {
    evaluate(model, data, false, false).nll * inv_n
}

fn smooth_gradient<T: Scalar>(model: &MvbGlmModel<T>, data: &Dataset<T>, inv_n: T) -> (T, Vec<T>) {
    let e = evaluate(model, data, true, false);
    (e.nll * inv_n, e.grad.into_iter().map(|g| g * inv_n).collect())
}

/// KKT certificate of `model` for the given penalty.
pub fn kkt_report<T: Scalar>(
    model: &MvbGlmModel<T>,
    data: &Dataset<T>,
    pen: &PenaltySpec<T>,
    ktol: T,
) -> Result<KktReport<T>> {
    ensure_same_dim(model.k(), data.k())?;
    ensure_same_dim(model.p(), data.p())?;
    ensure_same_dim(model.k(), pen.k())?;
    let inv_n = T::one() / T::lit(data.n() as f64);
    let (_, g) = smooth_gradient(model, data, inv_n);
    let v = max_violation(model.coefficients(), &g, pen, model.p() + 1);
    Ok(KktReport {
        max_violation: v,
        ktol,
        satisfied: v <= ktol,
    })
}

/// Minimizes the penalized objective from the all-zero model.
pub fn fit_l1<T: Scalar>(
    data: &Dataset<T>,
    pen: &PenaltySpec<T>,
    options: &L1Options<T>,
) -> Result<L1Fit<T>> {
    let start = MvbGlmModel::zeros(data.k(), data.p())?;
    fit_l1_from(data, pen, options, &start)
}

/// Minimizes the penalized objective starting from `start` (warm start).
pub fn fit_l1_from<T: Scalar>(
    data: &Dataset<T>,
    pen: &PenaltySpec<T>,
    options: &L1Options<T>,
    start: &MvbGlmModel<T>,
) -> Result<L1Fit<T>> {
    ensure_same_dim(data.k(), pen.k())?;
    ensure_same_dim(start.k(), data.k())?;
    ensure_same_dim(start.p(), data.p())?;

    let w = data.p() + 1;
    let inv_n = T::one() / T::lit(data.n() as f64);
    if let Some(null) = null_solution(data, pen, options, inv_n) {
        return Ok(null);
    }
    let mut model = MvbGlmModel::from_parts(data.k(), data.p(), start.coefficients().to_vec());
    let (mut smooth, mut grad) = smooth_gradient(&model, data, inv_n);
    let mut objective = smooth + pen.penalty(&model);
    if !objective.is_finite() {
        return Err(MvbError::Divergence(
            "penalized objective is not finite at the starting point".into(),
        ));
    }
    let mut trace = vec![objective];
    let mut step = options.initial_step;
    let min_step = T::lit(1e-30);
    let two = T::lit(2.0);
    let mut iterations = 0;
    let mut trial = model.clone();

    while iterations < options.max_iter {
        if max_violation(model.coefficients(), &grad, pen, w) <= options.tol {
            break;
        }

        let mut accepted = false;
        while step >= min_step {
            prox_step(model.coefficients(), &grad, pen, step, w, trial.coefficients_mut());
            let mut lin = T::zero();
            let mut sq = T::zero();
            for ((cn, c), g) in trial.coefficients().iter().zip(model.coefficients()).zip(&grad) {
                let d = *cn - *c;
                lin += *g * d;
                sq += d * d;
            }
            if sq == T::zero() {
                break;
            }
            let s_new = smooth_value(&trial, data, inv_n);
            let obj_new = s_new + pen.penalty(&trial);
            if s_new.is_finite()
                && s_new <= smooth + lin + sq / (two * step)
                && obj_new <= objective
            {
                accepted = true;
                break;
            }
            step = step / two;
        }
        if !accepted {
            break;
        }

        let (s_new, g_new) = smooth_gradient(&trial, data, inv_n);
        let obj_new = s_new + pen.penalty(&trial);
        if !obj_new.is_finite() {
            return Err(MvbError::Divergence("penalized objective is not finite".into()));
        }

        // Barzilai–Borwein proposal for the next step length.
        let mut ss = T::zero();
        let mut sy = T::zero();
        for (((cn, c), gn), g) in trial
            .coefficients()
            .iter()
            .zip(model.coefficients())
            .zip(&g_new)
            .zip(&grad)
        {
            let s = *cn - *c;
            ss += s * s;
            sy += s * (*gn - *g);
        }
        step = if sy > T::zero() {
            (ss / sy).max(T::lit(1e-10)).min(T::lit(1e10))
        } else {
            step * two
        };

        std::mem::swap(&mut model, &mut trial);
        smooth = s_new;
        grad = g_new;
        objective = obj_new;
        trace.push(objective);
        iterations += 1;
    }

    let violation = max_violation(model.coefficients(), &grad, pen, w);
    model.converged = violation <= options.tol;
    model.iterations = iterations;
    model.final_nll = smooth / inv_n;
    model.trace = trace;
    Ok(L1Fit {
        kkt: KktReport {
            max_violation: violation,
            ktol: options.ktol,
            satisfied: violation <= options.ktol,
        },
        objective,
        model,
    })
}

/// The intercept-only fit, if it already solves the penalized problem: every
/// penalized gradient entry lies within its λ (up to rounding). Iterating
/// would only approach those exact zeros sublinearly when some |g| = λ.
fn null_solution<T: Scalar>(
    data: &Dataset<T>,
    pen: &PenaltySpec<T>,
    options: &L1Options<T>,
    inv_n: T,
) -> Option<L1Fit<T>> {
    let w = data.p() + 1;
    let intercepts = fit(&data.intercept_only(), &FitOptions::default()).ok()?;
    let mut coef = vec![T::zero(); intercepts.coefficients().len() * w];
    for (block, c0) in coef.chunks_exact_mut(w).zip(intercepts.coefficients()) {
        block[0] = *c0;
    }
    let mut model = MvbGlmModel::from_parts(data.k(), data.p(), coef);
    let (smooth, grad) = smooth_gradient(&model, data, inv_n);
    let slack = T::one() + T::lit(1e-12);
    for (i, gb) in grad.chunks_exact(w).enumerate() {
        let lambda = pen.lambda_by_mask(i + 1);
        if gb[1..].iter().any(|g| g.abs() > lambda * slack) {
            return None;
        }
    }
    let violation = max_violation(model.coefficients(), &grad, pen, w);
    let objective = smooth + pen.penalty(&model);
    model.converged = violation <= options.tol;
    model.iterations = 0;
    model.final_nll = smooth / inv_n;
    model.trace = vec![objective];
    Some(L1Fit {
        kkt: KktReport {
            max_violation: violation,
            ktol: options.ktol,
            satisfied: violation <= options.ktol,
        },
        objective,
        model,
    })
}

fn prox_step<T: Scalar>(
    coef: &[T],
    grad: &[T],
    pen: &PenaltySpec<T>,
    step: T,
    w: usize,
    out: &mut [T],
) {
    for (i, ((cb, gb), ob)) in coef
        .chunks_exact(w)
        .zip(grad.chunks_exact(w))
        .zip(out.chunks_exact_mut(w))
        .enumerate()
    {
        let threshold = pen.lambda_by_mask(i + 1) * step;
        ob[0] = cb[0] - step * gb[0];
        for j in 1..w {
            ob[j] = soft_threshold(cb[j] - step * gb[j], threshold);
        }
    }
}

#[inline]
fn soft_threshold<T: Scalar>(v: T, t: T) -> T {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        T::zero()
    }
}
