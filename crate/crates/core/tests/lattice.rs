use mvb::lattice::{compress_bits, lattice_size, subset_mobius, subset_sum, superset_sum};
use mvb::{check_dimension, interaction_statistic, OutcomeVector, SubsetIndex, K_MAX};
use proptest::prelude::*;

fn naive_subset_sum(a: &[i64]) -> Vec<i64> {
    (0..a.len())
        .map(|t| (0..a.len()).filter(|s| s & t == *s).map(|s| a[s]).sum())
        .collect()
}

fn naive_superset_sum(a: &[i64]) -> Vec<i64> {
    (0..a.len())
        .map(|t| (0..a.len()).filter(|s| s & t == t).map(|s| a[s]).sum())
        .collect()
}

proptest! {
    #[test]
    fn transforms_match_naive_sums(k in 0usize..=6, vals in prop::collection::vec(-1000i64..1000, 64)) {
        let a: Vec<i64> = vals[..1 << k].to_vec();
        let mut s = a.clone();
        subset_sum(&mut s);
        prop_assert_eq!(&s, &naive_subset_sum(&a));
        subset_mobius(&mut s);
        prop_assert_eq!(&s, &a);
        let mut u = a.clone();
        superset_sum(&mut u);
        prop_assert_eq!(u, naive_superset_sum(&a));
    }

    #[test]
    fn superset_iterator_is_exact(k in 1usize..=8, raw in any::<u32>()) {
        let t = SubsetIndex::new(raw & ((1 << k) - 1), k).unwrap();
        let got: Vec<u32> = t.supersets().map(|s| s.mask()).collect();
        let want: Vec<u32> = (0..1u32 << k).filter(|m| m & t.mask() == t.mask()).collect();
        prop_assert_eq!(got, want);
        let subs: Vec<u32> = t.subsets().map(|s| s.mask()).collect();
        prop_assert_eq!(subs.len(), 1 << t.len());
        prop_assert!(subs.iter().all(|m| m & t.mask() == *m));
    }

    #[test]
    fn interaction_statistic_is_product(k in 1usize..=8, a in any::<u32>(), b in any::<u32>()) {
        let full = (1u32 << k) - 1;
        let t = SubsetIndex::new(a & full, k).unwrap();
        let y = OutcomeVector::new(b & full, k).unwrap();
        let prod: u8 = t.nodes().iter().map(|&j| y.get(j)).product();
        prop_assert_eq!(interaction_statistic(t, y).unwrap(), prod);
    }

    #[test]
    fn compress_keeps_selected_bits_in_order(mask in any::<u16>(), keep in any::<u16>()) {
        let (mask, keep) = (mask as u32, keep as u32);
        let got = compress_bits(mask, keep);
        let mut want = 0u32;
        let mut pos = 0;
        for j in 0..16 {
            if keep >> j & 1 == 1 {
                want |= (mask >> j & 1) << pos;
                pos += 1;
            }
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn subset_text_round_trip(k in 1usize..=12, raw in any::<u32>()) {
        let t = SubsetIndex::new(raw & ((1 << k) - 1), k).unwrap();
        let back = SubsetIndex::parse(&t.to_string(), k).unwrap();
        prop_assert_eq!(t, back);
        let y = OutcomeVector::new(raw & ((1 << k) - 1), k).unwrap();
        prop_assert_eq!(OutcomeVector::parse(&y.to_string()).unwrap(), y);
        prop_assert_eq!(y.support().mask(), y.bits());
    }
}

#[test]
fn slot_index_is_mask() {
    let t = SubsetIndex::from_nodes(&[1, 3], 3).unwrap();
    assert_eq!(t.index(), 0b101);
    assert_eq!(t.to_string(), "1,3");
    assert_eq!(SubsetIndex::empty(3).unwrap().to_string(), "∅");
    assert_eq!(lattice_size(4), 16);
}

#[test]
fn dimension_caps() {
    assert!(check_dimension(0, false).is_err());
    assert!(check_dimension(15, false).is_ok());
    assert!(check_dimension(16, false).is_err());
    assert!(check_dimension(16, true).is_ok());
    assert!(check_dimension(K_MAX, true).is_ok());
    assert!(check_dimension(K_MAX + 1, true).is_err());
}

#[test]
fn invalid_subsets_rejected() {
    assert!(SubsetIndex::from_nodes(&[0], 3).is_err());
    assert!(SubsetIndex::from_nodes(&[4], 3).is_err());
    assert!(SubsetIndex::new(0b1000, 3).is_err());
    assert!(OutcomeVector::from_values(&[0, 2]).is_err());
    assert!(OutcomeVector::parse("1,x").is_err());
}
