//! Multivariate Bernoulli logistic regression.
//!
//! Every natural parameter is linear in the covariates,
//! `f^τ(x) = c_0^τ + Σ_j c_j^τ x_j`, giving `(p + 1)(2^k − 1)` coefficients.
//! Coefficients are stored densely: subset mask `m ≥ 1` owns the block
//! `[(m − 1)(p + 1), m (p + 1))`, intercept first.

mod data;
mod likelihood;
mod newton;

pub use data::Dataset;
pub use likelihood::{negative_log_likelihood, nll_gradient, nll_hessian};
pub(crate) use likelihood::evaluate;
pub use newton::{fit, FitOptions};

use crate::distribution::{natural_to_general, GeneralParams, NaturalParams};
use crate::error::{MvbError, Result};
use crate::lattice::{check_dimension, ensure_same_dim, lattice_size, SubsetIndex};
use crate::scalar::Scalar;

/// Fitted (or user-specified) coefficient vectors `c^τ` for every nonempty τ.
#[derive(Debug, Clone, PartialEq)]
pub struct MvbGlmModel<T> {
    k: usize,
    p: usize,
    coef: Vec<T>,
    pub converged: bool,
    pub iterations: usize,
    pub final_nll: T,
    /// Objective value after each accepted iteration, starting point first.
    pub trace: Vec<T>,
}

impl<T: Scalar> MvbGlmModel<T> {
    pub fn zeros(k: usize, p: usize) -> Result<Self> {
        check_dimension(k, true)?;
        let n = (lattice_size(k) - 1) * (p + 1);
        Ok(Self::from_parts(k, p, vec![T::zero(); n]))
    }

    /// Wraps a dense coefficient vector in the layout described in the
    /// module docs.
    pub fn from_coefficients(k: usize, p: usize, coef: Vec<T>) -> Result<Self> {
        check_dimension(k, true)?;
        ensure_same_dim((lattice_size(k) - 1) * (p + 1), coef.len())?;
        if coef.iter().any(|c| !c.is_finite()) {
            return Err(MvbError::InvalidParameter("coefficients must be finite".into()));
        }
        Ok(Self::from_parts(k, p, coef))
    }

    pub(crate) fn from_parts(k: usize, p: usize, coef: Vec<T>) -> Self {
        Self {
            k,
            p,
            coef,
            converged: false,
            iterations: 0,
            final_nll: T::nan(),
            trace: Vec::new(),
        }
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    /// Total free parameters `(p + 1)(2^k − 1)`.
    #[inline]
    pub fn n_params(&self) -> usize {
        self.coef.len()
    }

    #[inline]
    pub fn coefficients(&self) -> &[T] {
        &self.coef
    }

    pub(crate) fn coefficients_mut(&mut self) -> &mut [T] {
        &mut self.coef
    }

    /// `c^τ` with the intercept at index 0.
    pub fn coef(&self, tau: SubsetIndex) -> &[T] {
        assert!(!tau.is_empty(), "the empty set has no coefficients");
        let w = self.p + 1;
        let start = (tau.index() - 1) * w;
        &self.coef[start..start + w]
    }

    pub fn set_coef(&mut self, tau: SubsetIndex, values: &[T]) -> Result<()> {
        ensure_same_dim(self.k, tau.k())?;
        ensure_same_dim(self.p + 1, values.len())?;
        if tau.is_empty() {
            return Err(MvbError::InvalidSubset("the empty set has no coefficients".into()));
        }
        let w = self.p + 1;
        let start = (tau.index() - 1) * w;
        self.coef[start..start + w].copy_from_slice(values);
        Ok(())
    }

    /// Count of coefficients that are not exactly zero, intercepts included.
    pub fn nonzero_count(&self) -> usize {
        self.coef.iter().filter(|c| **c != T::zero()).count()
    }

    /// Writes `f^τ(x)` for every mask into `out` (length `2^k`).
    pub(crate) fn natural_into(&self, x: &[T], out: &mut [T]) {
        let w = self.p + 1;
        out[0] = T::zero();
        for (m, block) in self.coef.chunks_exact(w).enumerate() {
            let mut v = block[0];
            for (c, xi) in block[1..].iter().zip(x) {
                v += *c * *xi;
            }
            out[m + 1] = v;
        }
    }
}

/// Natural parameters at covariate point `x`.
pub fn linear_predictor<T: Scalar>(model: &MvbGlmModel<T>, x: &[T]) -> Result<NaturalParams<T>> {
    ensure_same_dim(model.p, x.len())?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(MvbError::InvalidParameter("covariates must be finite".into()));
    }
    let mut f = vec![T::zero(); lattice_size(model.k)];
    model.natural_into(x, &mut f);
    NaturalParams::from_vec(model.k, f)
}

/// Cell probabilities at covariate point `x`.
pub fn predict<T: Scalar>(model: &MvbGlmModel<T>, x: &[T]) -> Result<GeneralParams<T>> {
    Ok(natural_to_general(&linear_predictor(model, x)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(nodes: &[usize], k: usize) -> SubsetIndex {
        SubsetIndex::from_nodes(nodes, k).unwrap()
    }

    #[test]
    fn layout_and_predictor() {
        let mut m = MvbGlmModel::<f64>::zeros(2, 2).unwrap();
        assert_eq!(m.n_params(), 9);
        m.set_coef(sub(&[1], 2), &[0.5, 1.0, -1.0]).unwrap();
        m.set_coef(sub(&[1, 2], 2), &[-0.2, 0.0, 2.0]).unwrap();
        let f = linear_predictor(&m, &[0.3, 0.1]).unwrap();
        assert!((f.get(sub(&[1], 2)) - (0.5 + 0.3 - 0.1)).abs() < 1e-15);
        assert_eq!(f.get(sub(&[2], 2)), 0.0);
        assert!((f.get(sub(&[1, 2], 2)) - 0.0).abs() < 1e-15);
        assert!(linear_predictor(&m, &[0.3]).is_err());
    }

    #[test]
    fn intercept_only_predictor() {
        let mut m = MvbGlmModel::<f64>::zeros(2, 0).unwrap();
        m.set_coef(sub(&[2], 2), &[0.7]).unwrap();
        let f = linear_predictor(&m, &[]).unwrap();
        assert_eq!(f.values(), &[0.0, 0.0, 0.7, 0.0]);
    }

    #[test]
    fn zero_model_predicts_uniform() {
        let m = MvbGlmModel::<f64>::zeros(3, 1).unwrap();
        let p = predict(&m, &[2.5]).unwrap();
        assert!(p.probs().iter().all(|&v| (v - 0.125).abs() < 1e-15));
        let total: f64 = p.probs().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn univariate_prediction_is_sigmoid() {
        let m = MvbGlmModel::from_coefficients(1, 2, vec![-0.4, 1.5, 0.25]).unwrap();
        let x = [0.8, -2.0];
        let eta: f64 = -0.4 + 1.5 * 0.8 + 0.25 * -2.0;
        let p = predict(&m, &x).unwrap();
        assert!((p.probs()[1] - 1.0 / (1.0 + (-eta).exp())).abs() < 1e-15);
    }
}
