#![allow(dead_code)]

use mvb::distribution::sample_with;
use mvb::{predict, Dataset, GeneralParams, MvbGlmModel, NaturalParams, OutcomeVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_natural(k: usize, scale: f64, rng: &mut impl Rng) -> NaturalParams<f64> {
    let mut f = vec![0.0; 1 << k];
    for v in f.iter_mut().skip(1) {
        *v = rng.random_range(-scale..scale);
    }
    NaturalParams::from_vec(k, f).unwrap()
}

/// Strictly positive cell probabilities, bounded away from zero.
pub fn random_general(k: usize, rng: &mut impl Rng) -> GeneralParams<f64> {
    let w: Vec<f64> = (0..1 << k).map(|_| rng.random_range(0.05..1.0)).collect();
    GeneralParams::from_weights(k, w).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Brute-force `p(y)` from the definition: exp(Σ_{τ ⊆ supp y} f^τ) / Z.
pub fn brute_probs(f: &NaturalParams<f64>) -> Vec<f64> {
    let k = f.k();
    let n = 1usize << k;
    let unnorm: Vec<f64> = (0..n)
        .map(|y| {
            let mut s = 0.0;
            for tau in 1..n {
                if tau & y == tau {
                    s += f.values()[tau];
                }
            }
            s.exp()
        })
        .collect();
    let z: f64 = unnorm.iter().sum();
    unnorm.into_iter().map(|u| u / z).collect()
}

/// Draws `n` rows with standard normal covariates and outcomes from `truth`.
pub fn simulate(truth: &MvbGlmModel<f64>, n: usize, seed: u64) -> Dataset<f64> {
    let mut r = rng(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let p = truth.p();
    let mut outcomes = Vec::with_capacity(n);
    let mut xs = Vec::with_capacity(n * p);
    for _ in 0..n {
        let x: Vec<f64> = (0..p).map(|_| normal.sample(&mut r)).collect();
        let probs = predict(truth, &x).unwrap();
        let y: OutcomeVector = sample_with(&probs, 1, &mut r)[0];
        outcomes.push(y);
        xs.extend(x);
    }
    Dataset::new(truth.k(), p, outcomes, xs).unwrap()
}

/// Random data with uniform outcomes and covariates in [-1, 1].
pub fn random_dataset(k: usize, p: usize, n: usize, seed: u64) -> Dataset<f64> {
    let mut r = rng(seed);
    let outcomes: Vec<OutcomeVector> = (0..n)
        .map(|_| OutcomeVector::new(r.random_range(0..1u32 << k), k).unwrap())
        .collect();
    let xs: Vec<f64> = (0..n * p).map(|_| r.random_range(-1.0..1.0)).collect();
    Dataset::new(k, p, outcomes, xs).unwrap()
}

pub fn random_model(k: usize, p: usize, scale: f64, seed: u64) -> MvbGlmModel<f64> {
    let mut r = rng(seed);
    let n = (p + 1) * ((1 << k) - 1);
    let c: Vec<f64> = (0..n).map(|_| r.random_range(-scale..scale)).collect();
    MvbGlmModel::from_coefficients(k, p, c).unwrap()
}
