use crate::error::{MvbError, Result};
use crate::lattice::{check_dimension, lattice_size, OutcomeVector};
use crate::scalar::Scalar;

/// `n` observations of a binary outcome vector `y(i) ∈ {0,1}^k` with
/// covariates `x(i) ∈ R^p`. Covariates are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    k: usize,
    p: usize,
    outcomes: Vec<OutcomeVector>,
    covariates: Vec<T>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(
        k: usize,
        p: usize,
        outcomes: Vec<OutcomeVector>,
        covariates: Vec<T>,
    ) -> Result<Self> {
        check_dimension(k, true)?;
        if outcomes.is_empty() {
            return Err(MvbError::InvalidParameter("dataset has no rows".into()));
        }
        if let Some(i) = outcomes.iter().position(|y| y.k() != k) {
            return Err(MvbError::DimensionMismatch {
                expected: k,
                found: outcomes[i].k(),
            });
        }
        if covariates.len() != outcomes.len() * p {
            return Err(MvbError::DimensionMismatch {
                expected: outcomes.len() * p,
                found: covariates.len(),
            });
        }
        if let Some(idx) = covariates.iter().position(|v| !v.is_finite()) {
            return Err(MvbError::InvalidParameter(format!(
                "covariate x{} in row {} is not finite",
                idx % p.max(1) + 1,
                idx / p.max(1) + 1
            )));
        }
        Ok(Self {
            k,
            p,
            outcomes,
            covariates,
        })
    }

    /// Builds from per-row 0/1 outcome vectors and covariate vectors.
    pub fn from_rows(outcomes: &[Vec<u8>], covariates: &[Vec<T>]) -> Result<Self> {
        let first = outcomes
            .first()
            .ok_or_else(|| MvbError::InvalidParameter("dataset has no rows".into()))?;
        let k = first.len();
        let p = covariates.first().map_or(0, Vec::len);
        if covariates.len() != outcomes.len() && !(p == 0 && covariates.is_empty()) {
            return Err(MvbError::DimensionMismatch {
                expected: outcomes.len(),
                found: covariates.len(),
            });
        }
        let ys = outcomes
            .iter()
            .map(|row| OutcomeVector::from_values(row))
            .collect::<Result<Vec<_>>>()?;
        let mut xs = Vec::with_capacity(outcomes.len() * p);
        for row in covariates {
            if row.len() != p {
                return Err(MvbError::DimensionMismatch {
                    expected: p,
                    found: row.len(),
                });
            }
            xs.extend_from_slice(row);
        }
        Self::new(k, p, ys, xs)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.outcomes.len()
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn outcomes(&self) -> &[OutcomeVector] {
        &self.outcomes
    }

    #[inline]
    pub fn outcome(&self, i: usize) -> OutcomeVector {
        self.outcomes[i]
    }

    #[inline]
    pub fn x(&self, i: usize) -> &[T] {
        &self.covariates[i * self.p..(i + 1) * self.p]
    }

    #[inline]
    pub fn covariates(&self) -> &[T] {
        &self.covariates
    }

    /// Same outcomes with all covariates dropped.
    pub fn intercept_only(&self) -> Self {
        Self {
            k: self.k,
            p: 0,
            outcomes: self.outcomes.clone(),
            covariates: Vec::new(),
        }
    }

    /// Number of rows per outcome cell, in mask order.
    pub fn cell_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; lattice_size(self.k)];
        for y in &self.outcomes {
            counts[y.index()] += 1;
        }
        counts
    }

    /// Column means and standard deviations (population form). Constant
    /// columns report a standard deviation of one.
    pub fn column_moments(&self) -> (Vec<T>, Vec<T>) {
        let n = T::lit(self.n() as f64);
        let mut mean = vec![T::zero(); self.p];
        for i in 0..self.n() {
            for (m, v) in mean.iter_mut().zip(self.x(i)) {
                *m += *v;
            }
        }
        for m in &mut mean {
            *m /= n;
        }
        let mut var = vec![T::zero(); self.p];
        for i in 0..self.n() {
            for ((s, v), m) in var.iter_mut().zip(self.x(i)).zip(&mean) {
                *s += (*v - *m) * (*v - *m);
            }
        }
        let sd = var
            .into_iter()
            .map(|s| {
                let sd = (s / n).sqrt();
                if sd > T::zero() {
                    sd
                } else {
                    T::one()
                }
            })
            .collect();
        (mean, sd)
    }

    /// Copy with covariates centered and scaled by the given moments.
    pub(crate) fn standardized(&self, mean: &[T], sd: &[T]) -> Self {
        let mut out = self.clone();
        for row in out.covariates.chunks_exact_mut(self.p.max(1)) {
            if self.p == 0 {
                break;
            }
            for ((v, m), s) in row.iter_mut().zip(mean).zip(sd) {
                *v = (*v - *m) / *s;
            }
        }
        out
    }
}
