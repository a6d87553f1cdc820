//! L1-penalized fitting of the logistic model and graph structure read-out.
//!
//! The objective is `(1/n) NLL(c) + Σ_τ λ_τ Σ_{j ≥ 1} |c_j^τ|`; intercepts
//! are never penalized.

mod graph;
mod path;
mod proximal;

pub use graph::{extract_graph, extract_graph_from_natural, Graph};
pub use path::{regularization_path, PathOptions, PathResult, PathScore};
pub use proximal::{fit_l1, fit_l1_from, kkt_report, KktReport, L1Fit, L1Options};

use crate::error::{MvbError, Result};
use crate::glm::{negative_log_likelihood, Dataset, MvbGlmModel};
use crate::lattice::{check_dimension, ensure_same_dim, lattice_size, SubsetIndex};
use crate::scalar::Scalar;

/// Per-subset penalty weights `λ_τ ≥ 0`. Slot 0 (the empty set) is unused.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltySpec<T> {
    k: usize,
    lambda: Vec<T>,
}

impl<T: Scalar> PenaltySpec<T> {
    /// The same `λ` for every subset.
    pub fn uniform(k: usize, lambda: T) -> Result<Self> {
        check_dimension(k, true)?;
        check_lambda(lambda)?;
        let mut v = vec![lambda; lattice_size(k)];
        v[0] = T::zero();
        Ok(Self { k, lambda: v })
    }

    /// Explicit `(τ, λ_τ)` pairs; subsets not listed get `default`.
    pub fn per_subset<I>(k: usize, default: T, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SubsetIndex, T)>,
    {
        let mut spec = Self::uniform(k, default)?;
        for (tau, l) in entries {
            ensure_same_dim(k, tau.k())?;
            if tau.is_empty() {
                return Err(MvbError::InvalidSubset("the empty set has no penalty".into()));
            }
            check_lambda(l)?;
            spec.lambda[tau.index()] = l;
        }
        Ok(spec)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn lambda(&self, tau: SubsetIndex) -> T {
        self.lambda[tau.index()]
    }

    #[inline]
    pub(crate) fn lambda_by_mask(&self, m: usize) -> T {
        self.lambda[m]
    }

    /// Every `λ_τ` multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        check_lambda(factor)?;
        Ok(Self {
            k: self.k,
            lambda: self.lambda.iter().map(|l| *l * factor).collect(),
        })
    }

    fn penalty(&self, model: &MvbGlmModel<T>) -> T {
        let w = model.p() + 1;
        model
            .coefficients()
            .chunks_exact(w)
            .enumerate()
            .map(|(i, block)| {
                let l = self.lambda[i + 1];
                if l == T::zero() {
                    T::zero()
                } else {
                    l * block[1..].iter().map(|c| c.abs()).sum::<T>()
                }
            })
            .sum()
    }
}

fn check_lambda<T: Scalar>(l: T) -> Result<()> {
    if !l.is_finite() || l < T::zero() {
        return Err(MvbError::InvalidParameter(format!(
            "penalty weights must be finite and nonnegative, got {l}"
        )));
    }
    Ok(())
}

/// `(1/n) NLL + Σ_τ λ_τ Σ_{j=1}^{p} |c_j^τ|`.
pub fn penalized_objective<T: Scalar>(
    model: &MvbGlmModel<T>,
    data: &Dataset<T>,
    pen: &PenaltySpec<T>,
) -> Result<T> {
    ensure_same_dim(model.k(), pen.k())?;
    let nll = negative_log_likelihood(model, data)?;
    Ok(nll / T::lit(data.n() as f64) + pen.penalty(model))
}
