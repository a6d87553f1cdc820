//! Negative log-likelihood of the logistic model with its analytic gradient
//! and Hessian.
//!
//! Per-sample terms are accumulated in fixed-size chunks that may run in
//! parallel; the chunk partials are then summed in index order, so results
//! are bit-identical regardless of the number of worker threads.

use rayon::prelude::*;

use crate::error::Result;
use crate::lattice::{ensure_same_dim, lattice_size, subset_sum, superset_sum};
use crate::scalar::{log_sum_exp, Scalar};

use super::{Dataset, MvbGlmModel};

const CHUNK: usize = 64;

#[derive(Debug, Clone)]
pub(crate) struct Evaluation<T> {
    pub nll: T,
    pub grad: Vec<T>,
    pub hess: Vec<T>,
}

/// Neumaier-compensated running sum. Near the optimum the Newton decrease
/// is a few ulps of the total, so the line search needs the NLL accurate to
/// about one rounding of the result rather than `n` roundings.
#[derive(Clone, Copy)]
struct Compensated<T> {
    sum: T,
    comp: T,
}

impl<T: Scalar> Compensated<T> {
    fn zero() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    fn add(&mut self, v: T) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> T {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Order {
    Value,
    Gradient,
    Hessian,
}

struct Scratch<T> {
    f: Vec<T>,
    mean: Vec<T>,
    xt: Vec<T>,
}

fn accumulate_chunk<T: Scalar>(
    model: &MvbGlmModel<T>,
    data: &Dataset<T>,
    rows: std::ops::Range<usize>,
    order: Order,
) -> Evaluation<T> {
    let size = lattice_size(model.k());
    let w = model.p() + 1;
    let dim = model.n_params();
    let mut out = Evaluation {
        nll: T::zero(),
        grad: if order == Order::Value { Vec::new() } else { vec![T::zero(); dim] },
        hess: if order == Order::Hessian { vec![T::zero(); dim * dim] } else { Vec::new() },
    };
    let mut sc = Scratch {
        f: vec![T::zero(); size],
        mean: vec![T::zero(); size],
        xt: vec![T::one(); w],
    };

    let mut nll = Compensated::zero();
    for i in rows {
        let x = data.x(i);
        let y = data.outcome(i).bits() as usize;
        model.natural_into(x, &mut sc.f);
        subset_sum(&mut sc.f);
        let b = log_sum_exp(&sc.f);
        nll.add(b - sc.f[y]);
        if order == Order::Value {
            continue;
        }

        for (m, s) in sc.mean.iter_mut().zip(&sc.f) {
            *m = (*s - b).exp();
        }
        superset_sum(&mut sc.mean);
        sc.mean[0] = T::one();
        sc.xt[1..].copy_from_slice(x);

        for m in 1..size {
            let observed = if m & !y == 0 { T::one() } else { T::zero() };
            let resid = sc.mean[m] - observed;
            let base = (m - 1) * w;
            for (g, xj) in out.grad[base..base + w].iter_mut().zip(&sc.xt) {
                *g += resid * *xj;
            }
        }

        if order == Order::Hessian {
            for m1 in 1..size {
                for m2 in m1..size {
                    let cov = sc.mean[m1 | m2] - sc.mean[m1] * sc.mean[m2];
                    for j in 0..w {
                        let row = ((m1 - 1) * w + j) * dim + (m2 - 1) * w;
                        let cj = cov * sc.xt[j];
                        for l in 0..w {
                            out.hess[row + l] += cj * sc.xt[l];
                        }
                    }
                }
            }
        }
    }
    out.nll = nll.value();
    out
}

pub(crate) fn evaluate<T: Scalar>(
    model: &MvbGlmModel<T>,
    data: &Dataset<T>,
    with_gradient: bool,
    with_hessian: bool,
) -> Evaluation<T> {
    let order = match (with_gradient, with_hessian) {
        (_, true) => Order::Hessian,
        (true, false) => Order::Gradient,
        _ => Order::Value,
    };
    let n = data.n();
    let chunks: Vec<_> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| accumulate_chunk(model, data, c * CHUNK..((c + 1) * CHUNK).min(n), order))
        .collect();

    let mut iter = chunks.into_iter();
    let mut total = iter.next().expect("dataset has at least one row");
    let mut nll = Compensated::zero();
    nll.add(total.nll);
    for part in iter {
        nll.add(part.nll);
        for (a, b) in total.grad.iter_mut().zip(&part.grad) {
            *a += *b;
        }
        for (a, b) in total.hess.iter_mut().zip(&part.hess) {
            *a += *b;
        }
    }

    total.nll = nll.value();

    if order == Order::Hessian {
        // Only blocks with m1 <= m2 were filled; mirror them.
        let dim = model.n_params();
        let w = model.p() + 1;
        for r in 0..dim {
            for c in 0..dim {
                if r / w > c / w {
                    total.hess[r * dim + c] = total.hess[c * dim + r];
                }
            }
        }
    }
    total
}

fn check_dims<T: Scalar>(model: &MvbGlmModel<T>, data: &Dataset<T>) -> Result<()> {
    ensure_same_dim(model.k(), data.k())?;
    ensure_same_dim(model.p(), data.p())
}

/// `Σ_i [b(f(x_i)) − S^{supp(y_i)}(x_i)]`.
pub fn negative_log_likelihood<T: Scalar>(model: &MvbGlmModel<T>, data: &Dataset<T>) -> Result<T> {
    check_dims(model, data)?;
    Ok(evaluate(model, data, false, false).nll)
}

/// Gradient with respect to the coefficients, in the model's dense layout:
/// entry `(τ, j)` is `Σ_i (E[B^τ | x_i] − B^τ(y_i)) x_{ij}` with `x_{i0} = 1`.
pub fn nll_gradient<T: Scalar>(model: &MvbGlmModel<T>, data: &Dataset<T>) -> Result<Vec<T>> {
    check_dims(model, data)?;
    Ok(evaluate(model, data, true, false).grad)
}

/// Row-major Hessian of order `(p + 1)(2^k − 1)`: entry `((τ1, j), (τ2, l))`
/// is `Σ_i cov(B^{τ1}, B^{τ2} | x_i) x_{ij} x_{il}`.
pub fn nll_hessian<T: Scalar>(model: &MvbGlmModel<T>, data: &Dataset<T>) -> Result<Vec<T>> {
    check_dims(model, data)?;
    Ok(evaluate(model, data, true, true).hess)
}
