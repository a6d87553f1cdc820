//! The Ising model on `{0,1}^k` and its relation to the pairwise
//! multivariate Bernoulli distribution.
//!
//! `log f(y) = Σ_j θ_jj y_j + Σ_{j<j'} θ_jj' y_j y_j' − log Z(Θ)`. With
//! `θ_jj = f^j` and `θ_jj' = f^{jj'}` this is the same polynomial as the
//! multivariate Bernoulli log-density with every `f^τ`, `|τ| ≥ 3`, zero.

use crate::distribution::NaturalParams;
use crate::error::{MvbError, Result};
use crate::lattice::{check_dimension, ensure_same_dim, lattice_size, OutcomeVector, SubsetIndex};
use crate::scalar::{log_sum_exp, Scalar};

/// Symmetric `k × k` interaction matrix, stored row-major. Not required to
/// be positive semi-definite.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingParams<T> {
    k: usize,
    theta: Vec<T>,
}

impl<T: Scalar> IsingParams<T> {
    pub fn new(k: usize, theta: Vec<T>) -> Result<Self> {
        check_dimension(k, true)?;
        ensure_same_dim(k * k, theta.len())?;
        if theta.iter().any(|v| !v.is_finite()) {
            return Err(MvbError::InvalidParameter("Θ entries must be finite".into()));
        }
        for i in 0..k {
            for j in (i + 1)..k {
                if theta[i * k + j] != theta[j * k + i] {
                    return Err(MvbError::InvalidParameter(format!(
                        "Θ is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { k, theta })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let k = rows.len();
        let mut theta = Vec::with_capacity(k * k);
        for row in rows {
            ensure_same_dim(k, row.len())?;
            theta.extend_from_slice(row);
        }
        Self::new(k, theta)
    }

    pub fn zeros(k: usize) -> Result<Self> {
        check_dimension(k, true)?;
        Ok(Self {
            k,
            theta: vec![T::zero(); k * k],
        })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// `θ_{i,j}` with 1-based indices.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.theta[(i - 1) * self.k + (j - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.theta.chunks_exact(self.k).map(<[T]>::to_vec).collect()
    }

    /// Unnormalized log-density `Σ θ_jj y_j + Σ_{j<j'} θ_jj' y_j y_j'`.
    fn energy(&self, bits: u32) -> T {
        let k = self.k;
        let mut e = T::zero();
        for i in 0..k {
            if bits >> i & 1 == 0 {
                continue;
            }
            e += self.theta[i * k + i];
            for j in (i + 1)..k {
                if bits >> j & 1 == 1 {
                    e += self.theta[i * k + j];
                }
            }
        }
        e
    }
}

/// `log Z(Θ)` by exact enumeration of all `2^k` configurations.
pub fn ising_log_partition<T: Scalar>(theta: &IsingParams<T>) -> T {
    let energies: Vec<T> = (0..lattice_size(theta.k) as u32)
        .map(|b| theta.energy(b))
        .collect();
    log_sum_exp(&energies)
}

pub fn ising_log_density<T: Scalar>(theta: &IsingParams<T>, y: OutcomeVector) -> Result<T> {
    ensure_same_dim(theta.k, y.k())?;
    Ok(theta.energy(y.bits()) - ising_log_partition(theta))
}

/// Pairwise embedding `θ_jj = f^j`, `θ_jj' = f^{jj'}`. Fails when any
/// natural parameter of order three or more is nonzero.
pub fn mvb_to_ising<T: Scalar>(f: &NaturalParams<T>) -> Result<IsingParams<T>> {
    let k = f.k();
    if let Some((tau, v)) = f
        .entries()
        .find(|(t, v)| t.len() >= 3 && v.abs() > T::pairwise_tol())
    {
        return Err(MvbError::NotPairwise {
            subset: tau.to_string(),
            value: v.as_f64(),
        });
    }
    let mut theta = vec![T::zero(); k * k];
    for i in 0..k {
        theta[i * k + i] = f.get(SubsetIndex::from_raw(1 << i, k));
        for j in (i + 1)..k {
            let v = f.get(SubsetIndex::from_raw((1 << i) | (1 << j), k));
            theta[i * k + j] = v;
            theta[j * k + i] = v;
        }
    }
    IsingParams::new(k, theta)
}

/// Free parameters needed to specify each model on `k` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParameterCounts {
    pub k: usize,
    pub mvb: u128,
    pub ising: u128,
    pub gaussian: u128,
}

/// `(2^k − 1, k(k+1)/2, k + k(k+1)/2)` for the multivariate Bernoulli,
/// Ising and multivariate Gaussian models.
pub fn parameter_counts(k: usize) -> Result<ParameterCounts> {
    if k == 0 || k > 127 {
        return Err(MvbError::DimensionOutOfRange { k, max: 127 });
    }
    let kk = k as u128;
    let pairs = kk * (kk + 1) / 2;
    Ok(ParameterCounts {
        k,
        mvb: (1u128 << k) - 1,
        ising: pairs,
        gaussian: kk + pairs,
    })
}
