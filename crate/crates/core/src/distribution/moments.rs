use crate::error::Result;
use crate::lattice::{ensure_same_dim, subset_sum, superset_sum, SubsetIndex};
use crate::scalar::{log_sum_exp, Scalar};

use super::{natural_to_general, s_from_f, NaturalParams};

/// Means and covariances of the sufficient statistics `B^τ(Y)`.
///
/// Only the mean vector is stored. Because `B^{τ1} B^{τ2} = B^{τ1 ∪ τ2}`,
/// every covariance is `mean[τ1 ∪ τ2] − mean[τ1]·mean[τ2]`; the full
/// `2^k × 2^k` matrix is materialized on request.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable<T> {
    k: usize,
    mean: Vec<T>,
}

impl<T: Scalar> MomentTable<T> {
    /// Builds from cell probabilities in mask order.
    pub(crate) fn from_probs(k: usize, probs: &[T]) -> Self {
        let mut mean = probs.to_vec();
        superset_sum(&mut mean);
        mean[0] = T::one();
        Self { k, mean }
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// `E[B^τ(Y)]` for every τ in mask order.
    #[inline]
    pub fn means(&self) -> &[T] {
        &self.mean
    }

    #[inline]
    pub fn mean(&self, tau: SubsetIndex) -> T {
        self.mean[tau.index()]
    }

    /// `cov(B^{τ1}(Y), B^{τ2}(Y))`.
    #[inline]
    pub fn cov(&self, a: SubsetIndex, b: SubsetIndex) -> T {
        self.cov_by_index(a.index(), b.index())
    }

    #[inline]
    pub(crate) fn cov_by_index(&self, a: usize, b: usize) -> T {
        self.mean[a | b] - self.mean[a] * self.mean[b]
    }

    /// Row-major `2^k × 2^k` covariance matrix.
    pub fn cov_matrix(&self) -> Vec<T> {
        let n = self.mean.len();
        let mut out = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                out.push(self.cov_by_index(a, b));
            }
        }
        out
    }
}

pub fn moments<T: Scalar>(f: &NaturalParams<T>) -> MomentTable<T> {
    let p = natural_to_general(f);
    MomentTable::from_probs(f.k(), p.probs())
}

/// Mean vector `E[B^τ]`, the gradient of the log-partition function.
pub fn mean_parameters<T: Scalar>(f: &NaturalParams<T>) -> Vec<T> {
    moments(f).mean
}

/// Moment generating function `E[exp(Σ_j μ_j Y_j)]`.
pub fn mgf<T: Scalar>(f: &NaturalParams<T>, mu: &[T]) -> Result<T> {
    ensure_same_dim(f.k(), mu.len())?;
    let s = s_from_f(f);
    let b = s.log_partition();
    // Σ_{j ∈ τ} μ_j for every τ, as a subset sum of the singletons.
    let mut mu_sum = vec![T::zero(); s.values().len()];
    for (j, &m) in mu.iter().enumerate() {
        mu_sum[1 << j] = m;
    }
    subset_sum(&mut mu_sum);
    let terms: Vec<T> = s
        .values()
        .iter()
        .zip(&mu_sum)
        .map(|(&st, &ms)| st - b + ms)
        .collect();
    Ok(log_sum_exp(&terms).exp())
}
