use crate::error::{MvbError, Result};
use crate::glm::{evaluate, fit, Dataset, FitOptions, MvbGlmModel};
use crate::scalar::Scalar;

use super::{fit_l1_from, KktReport, L1Options, PenaltySpec};

#[derive(Debug, Clone)]
pub struct PathOptions<T> {
    pub grid_size: usize,
    /// Smallest λ on the grid as a fraction of λ_max.
    pub min_ratio: T,
    /// Relative per-subset weights; the penalty at grid point λ is
    /// `λ · weights`. Defaults to all ones.
    pub weights: Option<PenaltySpec<T>>,
    pub l1: L1Options<T>,
    /// Options for the unpenalized intercept-only fit anchoring the path.
    pub intercept_fit: FitOptions<T>,
}

impl<T: Scalar> Default for PathOptions<T> {
    fn default() -> Self {
        Self {
            grid_size: 50,
            min_ratio: T::lit(1e-3),
            weights: None,
            l1: L1Options::default(),
            intercept_fit: FitOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathScore<T> {
    pub lambda: T,
    pub nll: T,
    /// Nonzero coefficients, intercepts included.
    pub df: usize,
    pub aic: T,
    pub bic: T,
}

#[derive(Debug, Clone)]
pub struct PathResult<T> {
    /// Descending λ values.
    pub grid: Vec<T>,
    pub lambda_max: T,
    pub models: Vec<MvbGlmModel<T>>,
    pub scores: Vec<PathScore<T>>,
    pub kkt: Vec<KktReport<T>>,
}

impl<T: Scalar> PathResult<T> {
    fn argmin(&self, key: impl Fn(&PathScore<T>) -> T) -> usize {
        let mut best = 0;
        for (i, s) in self.scores.iter().enumerate() {
            if key(s) < key(&self.scores[best]) {
                best = i;
            }
        }
        best
    }

    /// Grid index minimizing BIC (first one on ties).
    pub fn best_by_bic(&self) -> usize {
        self.argmin(|s| s.bic)
    }

    pub fn best_by_aic(&self) -> usize {
        self.argmin(|s| s.aic)
    }
}

/// Smallest scalar λ at which every penalized coefficient is zero, given
/// the intercept-only model and relative weights.
fn lambda_max<T: Scalar>(
    anchor: &MvbGlmModel<T>,
    data: &Dataset<T>,
    weights: &PenaltySpec<T>,
) -> T {
    let w = data.p() + 1;
    let inv_n = T::one() / T::lit(data.n() as f64);
    let grad = evaluate(anchor, data, true, false).grad;
    let mut out = T::zero();
    for (i, block) in grad.chunks_exact(w).enumerate() {
        let wt = weights.lambda_by_mask(i + 1);
        if wt <= T::zero() {
            continue;
        }
        for g in &block[1..] {
            let v = g.abs() * inv_n / wt;
            if v > out {
                out = v;
            }
        }
    }
    out
}

/// Fits a warm-started L1 path on a log-spaced λ grid from λ_max down to
/// `λ_max · min_ratio`, scoring each fit by AIC and BIC with
/// nonzero-count degrees of freedom.
pub fn regularization_path<T: Scalar>(
    data: &Dataset<T>,
    options: &PathOptions<T>,
) -> Result<PathResult<T>> {
    if options.grid_size == 0 {
        return Err(MvbError::InvalidParameter("grid size must be at least 1".into()));
    }
    if !(options.min_ratio > T::zero() && options.min_ratio <= T::one()) {
        return Err(MvbError::InvalidParameter(
            "min_ratio must lie in (0, 1]".into(),
        ));
    }
    let weights = match &options.weights {
        Some(w) => w.clone(),
        None => PenaltySpec::uniform(data.k(), T::one())?,
    };

    let intercepts = fit(&data.intercept_only(), &options.intercept_fit)?;
    let w = data.p() + 1;
    let mut anchor = MvbGlmModel::zeros(data.k(), data.p())?;
    for (block, c0) in anchor
        .coefficients_mut()
        .chunks_exact_mut(w)
        .zip(intercepts.coefficients())
    {
        block[0] = *c0;
    }

    let lmax = lambda_max(&anchor, data, &weights);
    let grid: Vec<T> = if lmax == T::zero() || options.grid_size == 1 {
        vec![lmax]
    } else {
        let last = T::lit((options.grid_size - 1) as f64);
        (0..options.grid_size)
            .map(|i| lmax * options.min_ratio.powf(T::lit(i as f64) / last))
            .collect()
    };

    let log_n = T::lit(data.n() as f64).ln();
    let two = T::lit(2.0);
    let mut models = Vec::with_capacity(grid.len());
    let mut scores = Vec::with_capacity(grid.len());
    let mut kkt = Vec::with_capacity(grid.len());
    let mut warm = anchor;
    for &lambda in &grid {
        let pen = weights.scaled(lambda)?;
        let fitted = fit_l1_from(data, &pen, &options.l1, &warm)?;
        let df = fitted.model.nonzero_count();
        let nll = fitted.model.final_nll;
        let df_t = T::lit(df as f64);
        scores.push(PathScore {
            lambda,
            nll,
            df,
            aic: two * nll + two * df_t,
            bic: two * nll + log_n * df_t,
        });
        kkt.push(fitted.kkt);
        warm = fitted.model.clone();
        models.push(fitted.model);
    }

    Ok(PathResult {
        grid,
        lambda_max: lmax,
        models,
        scores,
        kkt,
    })
}
