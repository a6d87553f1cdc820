//! Dense symmetric solves for the Newton step.

use crate::scalar::Scalar;

/// Solves `A x = b` for symmetric positive definite `A` (row-major `n × n`)
/// by Cholesky factorization. Returns `None` when a pivot is not safely
/// positive.
pub(crate) fn cholesky_solve<T: Scalar>(a: &[T], n: usize, b: &[T]) -> Option<Vec<T>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let scale = (0..n)
        .map(|i| a[i * n + i].abs())
        .fold(T::zero(), |m, v| if v > m { v } else { m });
    let floor = T::epsilon() * T::lit(n.max(1) as f64) * scale;

    let mut l = vec![T::zero(); n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        for q in 0..j {
            d -= l[j * n + q] * l[j * n + q];
        }
        if !d.is_finite() || d <= floor {
            return None;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for q in 0..j {
                s -= l[i * n + q] * l[j * n + q];
            }
            l[i * n + j] = s / d;
        }
    }

    let mut y = b.to_vec();
    for i in 0..n {
        for q in 0..i {
            let t = l[i * n + q] * y[q];
            y[i] -= t;
        }
        y[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for q in (i + 1)..n {
            let t = l[q * n + i] * y[q];
            y[i] -= t;
        }
        y[i] /= l[i * n + i];
    }
    if y.iter().all(|v| v.is_finite()) {
        Some(y)
    } else {
        None
    }
}

/// Cholesky solve of `(A + ε I) x = b`, starting at `ε = 0` and raising the
/// ridge tenfold from `initial_ridge` (relative to the largest diagonal entry)
/// until the factorization succeeds. Returns the solution and the ridge used.
pub(crate) fn solve_damped<T: Scalar>(
    a: &[T],
    n: usize,
    b: &[T],
    initial_ridge: T,
) -> Option<(Vec<T>, T)> {
    if let Some(x) = cholesky_solve(a, n, b) {
        return Some((x, T::zero()));
    }
    let scale = (0..n)
        .map(|i| a[i * n + i].abs())
        .fold(T::one(), |m, v| if v > m { v } else { m });
    let mut ridge = initial_ridge * scale;
    let limit = T::lit(1e8) * scale;
    let mut damped = a.to_vec();
    while ridge <= limit {
        for i in 0..n {
            damped[i * n + i] = a[i * n + i] + ridge;
        }
        if let Some(x) = cholesky_solve(&damped, n, b) {
            return Some((x, ridge));
        }
        ridge *= T::lit(10.0);
    }
    None
}
