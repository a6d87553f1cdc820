use crate::error::{MvbError, Result};
use crate::lattice::{compress_bits, ensure_same_dim, lattice_size, OutcomeVector, SubsetIndex};
use crate::scalar::Scalar;

use super::GeneralParams;

/// Distribution of the coordinates in `keep`, summing out the rest.
///
/// The result has dimension `|keep|`; its coordinates are the kept nodes in
/// ascending order.
pub fn marginal<T: Scalar>(p: &GeneralParams<T>, keep: SubsetIndex) -> Result<GeneralParams<T>> {
    ensure_same_dim(p.k(), keep.k())?;
    if keep.is_empty() {
        return Err(MvbError::InvalidSubset(
            "marginal requires a nonempty set of kept nodes".into(),
        ));
    }
    let mut out = vec![T::zero(); lattice_size(keep.len())];
    for (m, &pm) in p.probs().iter().enumerate() {
        out[compress_bits(m as u32, keep.mask()) as usize] += pm;
    }
    Ok(GeneralParams::from_parts(keep.len(), out))
}

/// Distribution of the `target` coordinates given that the `given`
/// coordinates equal their values in `given_values`.
///
/// `given_values` is a full-dimension outcome; only its bits on `given`
/// are read. Coordinates outside `target ∪ given` are summed out.
pub fn conditional<T: Scalar>(
    p: &GeneralParams<T>,
    target: SubsetIndex,
    given: SubsetIndex,
    given_values: OutcomeVector,
) -> Result<GeneralParams<T>> {
    ensure_same_dim(p.k(), target.k())?;
    ensure_same_dim(p.k(), given.k())?;
    ensure_same_dim(p.k(), given_values.k())?;
    if target.is_empty() || given.is_empty() {
        return Err(MvbError::InvalidSubset(
            "conditional requires nonempty target and given sets".into(),
        ));
    }
    if !target.is_disjoint(given)? {
        return Err(MvbError::OverlappingGroups);
    }
    let want = given_values.bits() & given.mask();
    let mut out = vec![T::zero(); lattice_size(target.len())];
    let mut total = T::zero();
    for (m, &pm) in p.probs().iter().enumerate() {
        if (m as u32) & given.mask() == want {
            out[compress_bits(m as u32, target.mask()) as usize] += pm;
            total += pm;
        }
    }
    if total <= T::zero() {
        return Err(MvbError::NullConditioning);
    }
    for v in &mut out {
        *v /= total;
    }
    Ok(GeneralParams::from_parts(target.len(), out))
}
