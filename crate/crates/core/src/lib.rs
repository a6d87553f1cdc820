//! Exact multivariate Bernoulli models on small binary graphs.
//!
//! * [`lattice`]: subsets of `{1..k}` as bitmasks and the subset-sum
//!   transforms everything else is built on.
//! * [`distribution`]: cell probabilities and natural parameters,
//!   conversions, log-partition, moments, MGF, marginals, conditionals,
//!   independence checks and sampling.
//! * [`glm`]: the logistic model with linear natural parameters, fitted by
//!   damped Newton–Raphson.
//! * [`sparse`]: L1-penalized fitting by proximal gradient, regularization
//!   paths with AIC/BIC, and graph read-out.
//! * [`ising`]: the pairwise Ising model and its embedding.
//! * [`io`]: JSON, CSV and DOT formats.
//!
//! Numeric code is generic over [`Scalar`] (`f64` or `f32`); the `*F64`
//! aliases below name the usual double-precision instantiations.

pub mod distribution;
pub mod error;
pub mod glm;
pub mod io;
pub mod ising;
pub mod lattice;
mod linalg;
pub mod scalar;
pub mod sparse;

pub use distribution::{
    conditional, general_to_natural, independence_test_elementwise, independence_test_groups,
    log_density, log_partition, marginal, mgf, moments, natural_to_general, s_from_f, sample,
    GeneralParams, IndependenceReport, MomentTable, NaturalParams, SFunctionTable,
};
pub use error::{MvbError, Result};
pub use glm::{
    fit, linear_predictor, negative_log_likelihood, nll_gradient, nll_hessian, predict, Dataset,
    FitOptions, MvbGlmModel,
};
pub use ising::{
    ising_log_density, ising_log_partition, mvb_to_ising, parameter_counts, IsingParams,
    ParameterCounts,
};
pub use lattice::{
    check_dimension, interaction_statistic, OutcomeVector, SubsetIndex, K_MAX, K_SOFT_MAX,
};
pub use scalar::Scalar;
pub use sparse::{
    extract_graph, fit_l1, penalized_objective, regularization_path, Graph, KktReport, L1Fit,
    L1Options, PathOptions, PathResult, PathScore, PenaltySpec,
};

pub type GeneralParamsF64 = GeneralParams<f64>;
pub type NaturalParamsF64 = NaturalParams<f64>;
pub type SFunctionTableF64 = SFunctionTable<f64>;
pub type MomentTableF64 = MomentTable<f64>;
pub type DatasetF64 = Dataset<f64>;
pub type MvbGlmModelF64 = MvbGlmModel<f64>;
pub type IsingParamsF64 = IsingParams<f64>;
pub type PenaltySpecF64 = PenaltySpec<f64>;

pub type GeneralParamsF32 = GeneralParams<f32>;
pub type NaturalParamsF32 = NaturalParams<f32>;
pub type DatasetF32 = Dataset<f32>;
pub type MvbGlmModelF32 = MvbGlmModel<f32>;
