//! The multivariate Bernoulli distribution in its two parameterizations.
//!
//! [`GeneralParams`] holds the `2^k` cell probabilities `p(y)`;
//! [`NaturalParams`] holds the natural parameters `f^τ`, one per nonempty
//! subset. The link between them runs through the S-function
//! `S^τ = Σ_{τ0 ⊆ τ} f^{τ0}`: `p(y) = exp(S^{supp(y)} − b(f))`, and in the
//! other direction `f` is the Möbius inversion of `log p` over the subset
//! lattice. All of it is exact enumeration over the lattice.

mod independence;
mod marginal;
mod moments;
mod sampling;

pub use independence::{independence_test_elementwise, independence_test_groups, IndependenceReport};
pub use marginal::{conditional, marginal};
pub use moments::{mean_parameters, mgf, moments, MomentTable};
pub use sampling::{sample, sample_with, SamplerRng};

use crate::error::{MvbError, Result};
use crate::lattice::{
    check_dimension, ensure_same_dim, lattice_size, subset_mobius, subset_sum, OutcomeVector,
    SubsetIndex,
};
use crate::scalar::{log_sum_exp, Scalar};

/// Cell probabilities `p(y)`, slot `m` holding the outcome with mask `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralParams<T> {
    k: usize,
    probs: Vec<T>,
}

impl<T: Scalar> GeneralParams<T> {
    /// Validates nonnegativity and unit total mass.
    pub fn new(k: usize, probs: Vec<T>) -> Result<Self> {
        check_dimension(k, true)?;
        ensure_same_dim(lattice_size(k), probs.len())?;
        if let Some((m, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < T::zero())
        {
            return Err(MvbError::InvalidProbabilities(format!(
                "entry {m} is {p}; probabilities must be finite and nonnegative"
            )));
        }
        let total: T = probs.iter().copied().sum();
        if (total - T::one()).abs() > T::normalization_tol() {
            return Err(MvbError::InvalidProbabilities(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { k, probs })
    }

    /// Normalizes nonnegative weights (e.g. cell counts) into probabilities.
    pub fn from_weights(k: usize, weights: Vec<T>) -> Result<Self> {
        check_dimension(k, true)?;
        ensure_same_dim(lattice_size(k), weights.len())?;
        if weights.iter().any(|w| !w.is_finite() || *w < T::zero()) {
            return Err(MvbError::InvalidProbabilities(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total: T = weights.iter().copied().sum();
        if total <= T::zero() {
            return Err(MvbError::InvalidProbabilities("weights sum to zero".into()));
        }
        Ok(Self {
            k,
            probs: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn uniform(k: usize) -> Result<Self> {
        check_dimension(k, true)?;
        let n = lattice_size(k);
        let v = T::one() / T::lit(n as f64);
        Ok(Self { k, probs: vec![v; n] })
    }

    /// Skips validation; callers guarantee a valid table of length `2^k`.
    pub(crate) fn from_parts(k: usize, probs: Vec<T>) -> Self {
        debug_assert_eq!(probs.len(), lattice_size(k));
        Self { k, probs }
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<T> {
        self.probs
    }

    pub fn prob(&self, y: OutcomeVector) -> Result<T> {
        ensure_same_dim(self.k, y.k())?;
        Ok(self.probs[y.index()])
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.probs.iter().all(|&p| p > T::zero())
    }
}

/// Natural parameters `f^τ`, slot `m` holding the subset with mask `m`.
/// Slot 0 (the empty set) is always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalParams<T> {
    k: usize,
    f: Vec<T>,
}

impl<T: Scalar> NaturalParams<T> {
    pub fn zeros(k: usize) -> Result<Self> {
        check_dimension(k, true)?;
        Ok(Self {
            k,
            f: vec![T::zero(); lattice_size(k)],
        })
    }

    /// Wraps a full-length table; `f[0]` must be zero and all entries finite.
    pub fn from_vec(k: usize, f: Vec<T>) -> Result<Self> {
        check_dimension(k, true)?;
        ensure_same_dim(lattice_size(k), f.len())?;
        if f[0] != T::zero() {
            return Err(MvbError::InvalidParameter(
                "natural parameter of the empty set must be 0".into(),
            ));
        }
        if let Some(m) = f.iter().position(|v| !v.is_finite()) {
            return Err(MvbError::InvalidParameter(format!(
                "natural parameter for {} is not finite",
                SubsetIndex::from_raw(m as u32, k)
            )));
        }
        Ok(Self { k, f })
    }

    /// Builds from `(τ, f^τ)` pairs; unspecified subsets are zero.
    pub fn from_entries<I>(k: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SubsetIndex, T)>,
    {
        let mut out = Self::zeros(k)?;
        for (tau, v) in entries {
            out.set(tau, v)?;
        }
        Ok(out)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// The full table including the zero at slot 0.
    #[inline]
    pub fn values(&self) -> &[T] {
        &self.f
    }

    #[inline]
    pub fn get(&self, tau: SubsetIndex) -> T {
        debug_assert_eq!(tau.k(), self.k);
        self.f[tau.index()]
    }

    pub fn set(&mut self, tau: SubsetIndex, value: T) -> Result<()> {
        ensure_same_dim(self.k, tau.k())?;
        if tau.is_empty() {
            return Err(MvbError::InvalidParameter(
                "natural parameter of the empty set is fixed at 0".into(),
            ));
        }
        if !value.is_finite() {
            return Err(MvbError::InvalidParameter(format!(
                "natural parameter for {tau} is not finite"
            )));
        }
        self.f[tau.index()] = value;
        Ok(())
    }

    /// Iterates `(τ, f^τ)` over nonempty subsets in mask order.
    pub fn entries(&self) -> impl Iterator<Item = (SubsetIndex, T)> + '_ {
        SubsetIndex::nonempty(self.k).map(move |t| (t, self.f[t.index()]))
    }
}

/// `S^τ = Σ_{τ0 ⊆ τ} f^{τ0}` for every τ.
#[derive(Debug, Clone, PartialEq)]
pub struct SFunctionTable<T> {
    k: usize,
    s: Vec<T>,
}

impl<T: Scalar> SFunctionTable<T> {
    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.s
    }

    #[inline]
    pub fn get(&self, tau: SubsetIndex) -> T {
        self.s[tau.index()]
    }

    /// `b(f) = log Σ_τ exp(S^τ)`, the ∅ term contributing `exp(0)`.
    pub fn log_partition(&self) -> T {
        log_sum_exp(&self.s)
    }

    /// Cell probabilities `exp(S^τ − b)`.
    pub fn probabilities(&self) -> Vec<T> {
        let b = self.log_partition();
        self.s.iter().map(|&s| (s - b).exp()).collect()
    }
}

pub fn s_from_f<T: Scalar>(f: &NaturalParams<T>) -> SFunctionTable<T> {
    let mut s = f.f.clone();
    subset_sum(&mut s);
    SFunctionTable { k: f.k, s }
}

pub fn log_partition<T: Scalar>(f: &NaturalParams<T>) -> T {
    s_from_f(f).log_partition()
}

pub fn natural_to_general<T: Scalar>(f: &NaturalParams<T>) -> GeneralParams<T> {
    GeneralParams::from_parts(f.k, s_from_f(f).probabilities())
}

/// Möbius inversion of `log p` over the subset lattice. Requires every cell
/// probability to be strictly positive.
pub fn general_to_natural<T: Scalar>(p: &GeneralParams<T>) -> Result<NaturalParams<T>> {
    if !p.is_strictly_positive() {
        return Err(MvbError::Degenerate);
    }
    let mut f: Vec<T> = p.probs.iter().map(|v| v.ln()).collect();
    subset_mobius(&mut f);
    f[0] = T::zero();
    NaturalParams::from_vec(p.k, f)
}

/// `log p(y) = S^{supp(y)} − b(f)`.
pub fn log_density<T: Scalar>(f: &NaturalParams<T>, y: OutcomeVector) -> Result<T> {
    ensure_same_dim(f.k, y.k())?;
    let s = s_from_f(f);
    Ok(s.s[y.index()] - s.log_partition())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(nodes: &[usize], k: usize) -> SubsetIndex {
        SubsetIndex::from_nodes(nodes, k).unwrap()
    }

    fn example_p() -> GeneralParams<f64> {
        // Mask order: 00, 10 (y1 = 1), 01 (y2 = 1), 11.
        GeneralParams::new(2, vec![0.4, 0.3, 0.2, 0.1]).unwrap()
    }

    #[test]
    fn s_from_f_examples() {
        let (a, b, c): (f64, f64, f64) = (0.3, -1.2, 0.7);
        let f = NaturalParams::from_vec(2, vec![0.0, a, b, c]).unwrap();
        let s = s_from_f(&f);
        assert!((s.get(sub(&[1, 2], 2)) - (a + b + c)).abs() < 1e-15);
        assert_eq!(s.get(sub(&[], 2)), 0.0);

        let zero = NaturalParams::<f64>::zeros(3).unwrap();
        assert!(s_from_f(&zero).values().iter().all(|&v| v == 0.0));

        let mut ones = vec![1.0; 8];
        ones[0] = 0.0;
        let f = NaturalParams::from_vec(3, ones).unwrap();
        assert_eq!(s_from_f(&f).get(sub(&[1, 2, 3], 3)), 7.0);
    }

    #[test]
    fn log_partition_examples() {
        let f1 = NaturalParams::<f64>::zeros(1).unwrap();
        assert!((log_partition(&f1) - 2f64.ln()).abs() < 1e-15);
        let f2 = NaturalParams::<f64>::zeros(2).unwrap();
        assert!((log_partition(&f2) - 4f64.ln()).abs() < 1e-15);

        let f = NaturalParams::from_vec(
            2,
            vec![0.0, 0.75f64.ln(), 0.5f64.ln(), (2.0f64 / 3.0).ln()],
        )
        .unwrap();
        assert!((log_partition(&f) + 0.4f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn natural_to_general_examples() {
        let p = natural_to_general(&NaturalParams::<f64>::zeros(1).unwrap());
        assert_eq!(p.probs(), &[0.5, 0.5]);
        let p = natural_to_general(&NaturalParams::<f64>::zeros(2).unwrap());
        assert!(p.probs().iter().all(|&v| (v - 0.25).abs() < 1e-16));
    }

    #[test]
    fn general_to_natural_examples() {
        let f = general_to_natural(&example_p()).unwrap();
        assert!((f.get(sub(&[1], 2)) - 0.75f64.ln()).abs() < 1e-15);
        assert!((f.get(sub(&[2], 2)) - 0.5f64.ln()).abs() < 1e-15);
        assert!((f.get(sub(&[1, 2], 2)) - (2.0f64 / 3.0).ln()).abs() < 1e-15);

        let uniform = GeneralParams::<f64>::uniform(3).unwrap();
        let f = general_to_natural(&uniform).unwrap();
        assert!(f.values().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn degenerate_rejected() {
        let p = GeneralParams::new(2, vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        let err = general_to_natural(&p).unwrap_err();
        assert_eq!(err, MvbError::Degenerate);
        assert_eq!(
            err.to_string(),
            "degenerate distribution: natural parameters undefined"
        );
    }

    #[test]
    fn log_density_examples() {
        let f = NaturalParams::<f64>::zeros(1).unwrap();
        let y = OutcomeVector::from_values(&[1]).unwrap();
        assert!((log_density(&f, y).unwrap() - 0.5f64.ln()).abs() < 1e-15);

        let f = general_to_natural(&example_p()).unwrap();
        let y = OutcomeVector::from_values(&[1, 1]).unwrap();
        assert!((log_density(&f, y).unwrap() - 0.1f64.ln()).abs() < 1e-14);
        let total: f64 = OutcomeVector::all(2)
            .map(|y| log_density(&f, y).unwrap().exp())
            .sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(log_density(&f, OutcomeVector::from_values(&[1]).unwrap()).is_err());
    }

    #[test]
    fn validation() {
        assert!(GeneralParams::new(1, vec![0.5, 0.6]).is_err());
        assert!(GeneralParams::new(1, vec![-0.1, 1.1]).is_err());
        assert!(GeneralParams::new(2, vec![0.5, 0.5]).is_err());
        assert!(NaturalParams::from_vec(1, vec![0.1, 0.2]).is_err());
        assert!(NaturalParams::from_vec(1, vec![0.0, f64::NAN]).is_err());
        let mut f = NaturalParams::<f64>::zeros(2).unwrap();
        assert!(f.set(sub(&[], 2), 1.0).is_err());
        f.set(sub(&[1, 2], 2), 0.5).unwrap();
        assert_eq!(f.get(sub(&[1, 2], 2)), 0.5);
    }

    #[test]
    fn works_in_f32() {
        let p = GeneralParams::<f32>::new(2, vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let f = general_to_natural(&p).unwrap();
        let back = natural_to_general(&f);
        for (a, b) in back.probs().iter().zip(p.probs()) {
            assert!((a - b).abs() < 1e-6);
        }
    }
}
