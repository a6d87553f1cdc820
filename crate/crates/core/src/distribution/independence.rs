use std::cmp::Ordering;
use std::fmt;

use crate::error::{MvbError, Result};
use crate::lattice::{ensure_same_dim, SubsetIndex};
use crate::scalar::Scalar;

use super::NaturalParams;

/// Outcome of an independence check on natural parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport<T> {
    pub independent: bool,
    /// Offending subsets with their `f^τ`, largest `|f^τ|` first.
    pub violations: Vec<(SubsetIndex, T)>,
}

impl<T: Scalar> IndependenceReport<T> {
    fn from_candidates(f: &NaturalParams<T>, tol: T, pred: impl Fn(SubsetIndex) -> bool) -> Self {
        let mut violations: Vec<_> = f
            .entries()
            .filter(|&(t, v)| pred(t) && v.abs() > tol)
            .collect();
        violations.sort_by(|(ta, a), (tb, b)| {
            b.abs()
                .partial_cmp(&a.abs())
                .unwrap_or(Ordering::Equal)
                .then(ta.mask().cmp(&tb.mask()))
        });
        Self {
            independent: violations.is_empty(),
            violations,
        }
    }
}

/// One `subset<TAB>value` line per violation.
impl<T: Scalar> fmt::Display for IndependenceReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (tau, v) in &self.violations {
            writeln!(f, "{tau}\t{v}")?;
        }
        Ok(())
    }
}

fn check_tol<T: Scalar>(tol: T) -> Result<()> {
    if tol.is_nan() || tol < T::zero() {
        return Err(MvbError::InvalidParameter(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    Ok(())
}

/// Mutual independence of all coordinates: every `f^τ` with `|τ| ≥ 2`
/// vanishes (within `tol`).
pub fn independence_test_elementwise<T: Scalar>(
    f: &NaturalParams<T>,
    tol: T,
) -> Result<IndependenceReport<T>> {
    check_tol(tol)?;
    Ok(IndependenceReport::from_candidates(f, tol, |t| t.len() >= 2))
}

/// Independence of two disjoint groups of coordinates: every `f^τ` with τ
/// meeting both groups vanishes (within `tol`).
///
/// When the groups together cover every node this is exactly independence
/// of the two blocks. Otherwise a pass certifies independence given the
/// remaining nodes, which does not imply marginal independence.
pub fn independence_test_groups<T: Scalar>(
    f: &NaturalParams<T>,
    group_a: SubsetIndex,
    group_b: SubsetIndex,
    tol: T,
) -> Result<IndependenceReport<T>> {
    check_tol(tol)?;
    ensure_same_dim(f.k(), group_a.k())?;
    ensure_same_dim(f.k(), group_b.k())?;
    if group_a.is_empty() || group_b.is_empty() || !group_a.is_disjoint(group_b)? {
        return Err(MvbError::OverlappingGroups);
    }
    let (a, b) = (group_a.mask(), group_b.mask());
    Ok(IndependenceReport::from_candidates(f, tol, |t| {
        t.mask() & a != 0 && t.mask() & b != 0
    }))
}

#[cfg(test)]
mod tests {
    use super::super::{general_to_natural, GeneralParams};
    use super::*;

    fn sub(nodes: &[usize], k: usize) -> SubsetIndex {
        SubsetIndex::from_nodes(nodes, k).unwrap()
    }

    #[test]
    fn bivariate_zero_interaction_is_independent() {
        let f = NaturalParams::from_vec(2, vec![0.0, 0.4, -0.2, 0.0]).unwrap();
        assert!(independence_test_elementwise(&f, 1e-8).unwrap().independent);
    }

    #[test]
    fn product_of_bernoullis_is_independent() {
        let margins = [0.2, 0.65, 0.9];
        let probs: Vec<f64> = (0..8u32)
            .map(|m| {
                margins
                    .iter()
                    .enumerate()
                    .map(|(j, &q)| if m >> j & 1 == 1 { q } else { 1.0 - q })
                    .product()
            })
            .collect();
        let f = general_to_natural(&GeneralParams::new(3, probs).unwrap()).unwrap();
        assert!(independence_test_elementwise(&f, 1e-10).unwrap().independent);
    }

    #[test]
    fn third_order_term_breaks_independence() {
        let f = NaturalParams::from_entries(3, [(sub(&[1, 2, 3], 3), 0.5)]).unwrap();
        let r = independence_test_elementwise(&f, 1e-8).unwrap();
        assert!(!r.independent);
        assert_eq!(r.violations, vec![(sub(&[1, 2, 3], 3), 0.5)]);
        assert_eq!(r.to_string(), "1,2,3\t0.5\n");
    }

    #[test]
    fn violations_sorted_by_magnitude() {
        let f = NaturalParams::from_entries(
            3,
            [
                (sub(&[1, 2], 3), 0.2),
                (sub(&[1, 3], 3), -0.9),
                (sub(&[1, 2, 3], 3), 0.4),
            ],
        )
        .unwrap();
        let r = independence_test_elementwise(&f, 1e-8).unwrap();
        let order: Vec<_> = r.violations.iter().map(|(t, _)| t.to_string()).collect();
        assert_eq!(order, vec!["1,3", "1,2,3", "1,2"]);
    }

    #[test]
    fn group_test() {
        let f = NaturalParams::from_entries(
            3,
            [(sub(&[1], 3), 0.3), (sub(&[1, 2], 3), 1.4), (sub(&[3], 3), -0.6)],
        )
        .unwrap();
        let r = independence_test_groups(&f, sub(&[1, 2], 3), sub(&[3], 3), 1e-8).unwrap();
        assert!(r.independent);
        let r = independence_test_groups(&f, sub(&[1], 3), sub(&[2, 3], 3), 1e-8).unwrap();
        assert!(!r.independent);
        assert_eq!(r.violations[0].0, sub(&[1, 2], 3));
        assert_eq!(
            independence_test_groups(&f, sub(&[1, 2], 3), sub(&[2, 3], 3), 1e-8).unwrap_err(),
            MvbError::OverlappingGroups
        );
        assert!(independence_test_elementwise(&f, -1.0).is_err());
    }
}
