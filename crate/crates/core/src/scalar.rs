//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the distribution, GLM and Ising code is generic over.
///
/// Implemented for `f32` and `f64`. The associated tolerances scale the
/// validation checks to the precision of the type.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Allowed deviation of a probability table's total mass from one.
    fn normalization_tol() -> Self;

    /// Threshold below which higher-order natural parameters count as zero
    /// for the pairwise (Ising) embedding.
    fn pairwise_tol() -> Self;

    /// Lossy conversion from `f64`; used for literals and external data.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn normalization_tol() -> Self {
        1e-12
    }

    fn pairwise_tol() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn normalization_tol() -> Self {
        1e-5
    }

    fn pairwise_tol() -> Self {
        1e-6
    }
}

/// Numerically stable `log Σ exp(v)`.
///
/// Returns negative infinity for an empty slice or when every term is
/// negative infinity.
pub fn log_sum_exp<T: Scalar>(values: &[T]) -> T {
    let max = values
        .iter()
        .copied()
        .fold(T::neg_infinity(), |m, v| if v > m { v } else { m });
    if max == T::neg_infinity() {
        return max;
    }
    if max == T::infinity() {
        return max;
    }
    let total: T = values.iter().map(|&v| (v - max).exp()).sum();
    max + total.ln()
}
