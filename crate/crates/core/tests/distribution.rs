mod common;

use common::{brute_probs, max_abs_diff, random_general, random_natural, rng};
use mvb::lattice::compress_bits;
use mvb::{
    conditional, general_to_natural, independence_test_elementwise, independence_test_groups,
    log_density, log_partition, marginal, mgf, moments, natural_to_general, GeneralParams,
    NaturalParams, OutcomeVector, SubsetIndex,
};
use proptest::prelude::*;
use rand::Rng;

fn sub(mask: u32, k: usize) -> SubsetIndex {
    SubsetIndex::new(mask, k).unwrap()
}

#[test]
fn bivariate_closed_forms() {
    let mut r = rng(11);
    for _ in 0..100 {
        let p = random_general(2, &mut r);
        let [p00, p10, p01, p11] = [p.probs()[0], p.probs()[1], p.probs()[2], p.probs()[3]];
        let f = general_to_natural(&p).unwrap();
        assert!((f.values()[1] - (p10 / p00).ln()).abs() < 1e-12);
        assert!((f.values()[2] - (p01 / p00).ln()).abs() < 1e-12);
        assert!((f.values()[3] - (p11 * p00 / (p10 * p01)).ln()).abs() < 1e-12);
        let m = moments(&f);
        let cov = m.cov(sub(1, 2), sub(2, 2));
        assert!((cov - (p11 * p00 - p01 * p10)).abs() < 1e-12);
    }
}

#[test]
fn probabilities_match_definition() {
    let mut r = rng(12);
    for k in 1..=4 {
        for _ in 0..20 {
            let f = random_natural(k, 2.0, &mut r);
            let p = natural_to_general(&f);
            assert!(max_abs_diff(p.probs(), &brute_probs(&f)) < 1e-12);
            for y in OutcomeVector::all(k) {
                let ld = log_density(&f, y).unwrap();
                assert!((ld.exp() - p.probs()[y.index()]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn round_trip_100_draws_per_k() {
    let mut r = rng(13);
    for k in 1..=4 {
        for _ in 0..100 {
            let f = random_natural(k, 3.0, &mut r);
            let back = general_to_natural(&natural_to_general(&f)).unwrap();
            assert!(max_abs_diff(f.values(), back.values()) < 1e-10);

            let p = random_general(k, &mut r);
            let again = natural_to_general(&general_to_natural(&p).unwrap());
            assert!(max_abs_diff(p.probs(), again.probs()) < 1e-10);
        }
    }
}

proptest! {
    #[test]
    fn normalization(k in 1usize..=5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_natural(k, 5.0, &mut r);
        let total: f64 = natural_to_general(&f).probs().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn round_trip_property(k in 1usize..=4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_natural(k, 4.0, &mut r);
        let back = general_to_natural(&natural_to_general(&f)).unwrap();
        prop_assert!(max_abs_diff(f.values(), back.values()) < 1e-10);
    }

    #[test]
    fn covariance_matrix_symmetric_psd_diagonal(k in 1usize..=4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_natural(k, 2.0, &mut r);
        let m = moments(&f);
        let c = m.cov_matrix();
        let n = 1 << k;
        for a in 0..n {
            prop_assert!(c[a * n + a] >= -1e-15);
            for b in 0..n {
                prop_assert_eq!(c[a * n + b], c[b * n + a]);
            }
        }
    }
}

fn with_entry(f: &NaturalParams<f64>, tau: usize, v: f64) -> NaturalParams<f64> {
    let mut vals = f.values().to_vec();
    vals[tau] = v;
    NaturalParams::from_vec(f.k(), vals).unwrap()
}

/// Mean and covariance against finite differences of the log-partition
/// (relative 1e-6 or absolute 1e-4) and against direct enumeration (1e-10).
#[test]
fn moments_match_finite_differences_and_enumeration() {
    let mut r = rng(14);
    let h = 1e-5;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-4 || (a - b).abs() <= 1e-6 * b.abs();
    for k in 1..=4 {
        for _ in 0..5 {
            let f = random_natural(k, 1.5, &mut r);
            let m = moments(&f);
            let p = natural_to_general(&f);
            let n = 1usize << k;
            let b = |g: &NaturalParams<f64>| log_partition(g);

            for t in 1..n {
                let fd = (b(&with_entry(&f, t, f.values()[t] + h))
                    - b(&with_entry(&f, t, f.values()[t] - h)))
                    / (2.0 * h);
                assert!(close(fd, m.means()[t]), "mean {t}: {fd} vs {}", m.means()[t]);

                let enum_mean: f64 = (0..n).filter(|y| y & t == t).map(|y| p.probs()[y]).sum();
                assert!((enum_mean - m.means()[t]).abs() < 1e-10);
            }

            let hh = 1e-4;
            for t1 in 1..n {
                for t2 in 1..n {
                    let shift = |d1: f64, d2: f64| {
                        let mut v = f.values().to_vec();
                        v[t1] += d1;
                        v[t2] += d2;
                        b(&NaturalParams::from_vec(k, v).unwrap())
                    };
                    let fd = (shift(hh, hh) - shift(hh, -hh) - shift(-hh, hh) + shift(-hh, -hh))
                        / (4.0 * hh * hh);
                    let cov = m.cov(sub(t1 as u32, k), sub(t2 as u32, k));
                    assert!(close(fd, cov), "cov {t1},{t2}: {fd} vs {cov}");

                    let e12: f64 = (0..n)
                        .filter(|y| y & (t1 | t2) == (t1 | t2))
                        .map(|y| p.probs()[y])
                        .sum();
                    let enum_cov = e12 - m.means()[t1] * m.means()[t2];
                    assert!((enum_cov - cov).abs() < 1e-10);
                }
            }
        }
    }
}

fn product_distribution(q: &[f64]) -> GeneralParams<f64> {
    let k = q.len();
    let probs = (0..1usize << k)
        .map(|y| {
            (0..k)
                .map(|j| if y >> j & 1 == 1 { q[j] } else { 1.0 - q[j] })
                .product()
        })
        .collect();
    GeneralParams::new(k, probs).unwrap()
}

/// Largest gap between the joint and the product of its univariate marginals.
fn factorization_gap(p: &GeneralParams<f64>) -> f64 {
    let k = p.k();
    let q: Vec<f64> = (0..k)
        .map(|j| marginal(p, sub(1 << j, k)).unwrap().probs()[1])
        .collect();
    max_abs_diff(p.probs(), product_distribution(&q).probs())
}

#[test]
fn product_of_marginals_has_no_interactions() {
    let mut r = rng(15);
    for k in 1..=4 {
        for _ in 0..50 {
            let q: Vec<f64> = (0..k).map(|_| r.random_range(0.02..0.98)).collect();
            let f = general_to_natural(&product_distribution(&q)).unwrap();
            for t in SubsetIndex::nonempty(k).filter(|t| t.len() >= 2) {
                assert!(f.get(t).abs() <= 1e-10);
            }
            assert!(independence_test_elementwise(&f, 1e-10).unwrap().independent);
        }
    }
}

#[test]
fn any_injected_interaction_breaks_factorization() {
    let mut r = rng(16);
    for k in 2..=4 {
        let q: Vec<f64> = (0..k).map(|_| r.random_range(0.1..0.9)).collect();
        let base = general_to_natural(&product_distribution(&q)).unwrap();
        for t in SubsetIndex::nonempty(k).filter(|t| t.len() >= 2) {
            for v in [0.1, -0.1, 0.5, 2.0] {
                let f = with_entry(&base, t.index(), v);
                let gap = factorization_gap(&natural_to_general(&f));
                assert!(gap >= 1e-4, "k={k} tau={t} v={v}: gap {gap}");
                let report = independence_test_elementwise(&f, 1e-10).unwrap();
                assert!(!report.independent);
                assert_eq!(report.violations[0].0, t);
            }
        }
    }
}

/// Largest gap between `p` and `p(y_A) p(y_B)` for a partition A | B.
fn block_gap(p: &GeneralParams<f64>, a: u32, b: u32) -> f64 {
    let k = p.k();
    let pa = marginal(p, sub(a, k)).unwrap();
    let pb = marginal(p, sub(b, k)).unwrap();
    (0..1u32 << k)
        .map(|y| {
            let prod = pa.probs()[compress_bits(y, a) as usize]
                * pb.probs()[compress_bits(y, b) as usize];
            (p.probs()[y as usize] - prod).abs()
        })
        .fold(0.0, f64::max)
}

/// Joint distribution equal to `pa ⊗ pb` on the partition A | B.
fn block_product(pa: &GeneralParams<f64>, pb: &GeneralParams<f64>, a: u32, b: u32) -> GeneralParams<f64> {
    let k = (a | b).count_ones() as usize;
    let probs = (0..1u32 << k)
        .map(|y| pa.probs()[compress_bits(y, a) as usize] * pb.probs()[compress_bits(y, b) as usize])
        .collect();
    GeneralParams::new(k, probs).unwrap()
}

#[test]
fn group_test_iff_block_factorization() {
    let mut r = rng(17);
    for k in 2..=4 {
        let full = (1u32 << k) - 1;
        for a in 1..full {
            let b = full & !a;
            let (ka, kb) = (a.count_ones() as usize, b.count_ones() as usize);
            for trial in 0..6 {
                let p = if trial % 2 == 0 {
                    block_product(&random_general(ka, &mut r), &random_general(kb, &mut r), a, b)
                } else {
                    random_general(k, &mut r)
                };
                let f = general_to_natural(&p).unwrap();
                let passes = independence_test_groups(&f, sub(a, k), sub(b, k), 1e-9)
                    .unwrap()
                    .independent;
                let factors = block_gap(&p, a, b) < 1e-10;
                assert_eq!(passes, factors, "k={k} a={a:b} trial={trial}");
                assert_eq!(passes, trial % 2 == 0);
            }
        }
    }
}

#[test]
fn group_test_on_partial_cover_is_conditional() {
    // Y1 and Y2 both interact with Y3 but not with each other.
    let f = NaturalParams::from_vec(3, vec![0.0, 0.2, -0.1, 0.0, 0.3, 1.5, 1.5, 0.0]).unwrap();
    let report = independence_test_groups(&f, sub(1, 3), sub(2, 3), 1e-12).unwrap();
    assert!(report.independent);
    let p = natural_to_general(&f);
    let p12 = marginal(&p, sub(3, 3)).unwrap();
    assert!(block_gap(&p12, 1, 2) > 1e-3);
    for y3 in 0..2u32 {
        let given = OutcomeVector::new(y3 << 2, 3).unwrap();
        let c = conditional(&p, sub(3, 3), sub(4, 3), given).unwrap();
        assert!(block_gap(&c, 1, 2) < 1e-12);
    }
}

#[test]
fn group_test_rejects_overlap() {
    let f = NaturalParams::<f64>::zeros(3).unwrap();
    assert!(independence_test_groups(&f, sub(3, 3), sub(6, 3), 0.0).is_err());
}

#[test]
fn chain_rule_for_every_split() {
    let mut r = rng(18);
    for k in 2..=4 {
        let full = (1u32 << k) - 1;
        for _ in 0..5 {
            let p = random_general(k, &mut r);
            for target in 1..=full {
                for given in 1..=full {
                    if target & given != 0 {
                        continue;
                    }
                    let both = target | given;
                    let joint = marginal(&p, sub(both, k)).unwrap();
                    let pg = marginal(&p, sub(given, k)).unwrap();
                    for y in 0..1u32 << k {
                        if y & !both != 0 {
                            continue;
                        }
                        let y_out = OutcomeVector::new(y, k).unwrap();
                        let c = conditional(&p, sub(target, k), sub(given, k), y_out).unwrap();
                        let lhs = joint.probs()[compress_bits(y, both) as usize];
                        let rhs = c.probs()[compress_bits(y, target) as usize]
                            * pg.probs()[compress_bits(y, given) as usize];
                        assert!((lhs - rhs).abs() < 1e-12);
                    }
                    let total: f64 = joint.probs().iter().sum();
                    assert!((total - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn conditional_on_null_event_fails() {
    let p = GeneralParams::new(2, vec![0.5, 0.5, 0.0, 0.0]).unwrap();
    let given = OutcomeVector::new(2, 2).unwrap();
    assert!(conditional(&p, sub(1, 2), sub(2, 2), given).is_err());
}

#[test]
fn mgf_properties() {
    let mut r = rng(19);
    let h = 1e-6;
    for k in 1..=4 {
        for _ in 0..10 {
            let f = random_natural(k, 2.0, &mut r);
            let zero = vec![0.0; k];
            assert!((mgf(&f, &zero).unwrap() - 1.0).abs() < 1e-12);
            let m = moments(&f);
            for j in 0..k {
                let mut up = zero.clone();
                let mut down = zero.clone();
                up[j] = h;
                down[j] = -h;
                let d = (mgf(&f, &up).unwrap() - mgf(&f, &down).unwrap()) / (2.0 * h);
                assert!((d - m.means()[1 << j]).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn mgf_factorizes_under_independence() {
    let mut r = rng(20);
    let grid = [-2.0, -0.7, 0.0, 0.9, 2.5];
    for k in 1..=3 {
        let mut f = NaturalParams::zeros(k).unwrap();
        for j in 0..k {
            f.set(sub(1 << j, k), r.random_range(-1.5..1.5)).unwrap();
        }
        let singles: Vec<NaturalParams<f64>> = (0..k)
            .map(|j| NaturalParams::from_vec(1, vec![0.0, f.values()[1 << j]]).unwrap())
            .collect();
        let mut idx = vec![0usize; k];
        loop {
            let mu: Vec<f64> = idx.iter().map(|&i| grid[i]).collect();
            let prod: f64 = (0..k).map(|j| mgf(&singles[j], &[mu[j]]).unwrap()).product();
            let joint = mgf(&f, &mu).unwrap();
            assert!((joint - prod).abs() < 1e-10, "{joint} vs {prod}");
            let mut pos = 0;
            while pos < k && idx[pos] == grid.len() - 1 {
                idx[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
            idx[pos] += 1;
        }
    }
}

#[test]
fn degenerate_probabilities_have_no_natural_parameters() {
    let p = GeneralParams::new(2, vec![0.5, 0.5, 0.0, 0.0]).unwrap();
    let err = general_to_natural(&p).unwrap_err();
    assert_eq!(err.to_string(), "degenerate distribution: natural parameters undefined");
}
