//! Exact i.i.d. sampling by inverse CDF over the outcome table.
//!
//! The seeded entry point uses ChaCha8 (`rand_chacha`), whose output stream
//! is fixed by its specification and identical on every platform. Uniforms
//! are drawn as `f64` in `[0, 1)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::OutcomeVector;
use crate::scalar::Scalar;

use super::GeneralParams;

/// Generator used by [`sample`].
pub type SamplerRng = ChaCha8Rng;

/// Draws `n` outcomes with a ChaCha8 generator seeded from `seed`.
pub fn sample<T: Scalar>(p: &GeneralParams<T>, n: usize, seed: u64) -> Vec<OutcomeVector> {
    let mut rng = SamplerRng::seed_from_u64(seed);
    sample_with(p, n, &mut rng)
}

/// Draws `n` outcomes using the caller's generator state.
pub fn sample_with<T: Scalar, R: Rng + ?Sized>(
    p: &GeneralParams<T>,
    n: usize,
    rng: &mut R,
) -> Vec<OutcomeVector> {
    let k = p.k();
    let mut cdf = Vec::with_capacity(p.probs().len());
    let mut acc = 0.0f64;
    for &v in p.probs() {
        acc += v.as_f64();
        cdf.push(acc);
    }
    // Rounding can leave the last cumulative value just below 1; fall back
    // to the last cell with positive mass.
    let last_positive = p
        .probs()
        .iter()
        .rposition(|&v| v > T::zero())
        .unwrap_or(0);
    (0..n)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * acc;
            let idx = cdf.partition_point(|&c| c <= u).min(last_positive);
            OutcomeVector::from_raw(idx as u32, k)
        })
        .collect()
}
