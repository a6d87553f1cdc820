//! Subsets of `{1, …, k}` as bitmasks, outcome vectors, and the subset-sum
//! transforms over the Boolean lattice.
//!
//! Every parameter table in the crate is a dense array of length `2^k`
//! indexed by mask: node `j` (1-based) is bit `j - 1`, and slot 0 is the
//! empty set.

use std::fmt;
use std::ops::{AddAssign, SubAssign};

use crate::error::{MvbError, Result};

/// Hard upper bound on the number of nodes.
pub const K_MAX: usize = 20;

/// Default cap on the number of nodes; raising `k` above it up to
/// [`K_MAX`] requires an explicit opt-in.
pub const K_SOFT_MAX: usize = 15;

/// Checks `1 <= k <= K_MAX`, and `k <= K_SOFT_MAX` unless `allow_large`.
pub fn check_dimension(k: usize, allow_large: bool) -> Result<()> {
    if k == 0 || k > K_MAX {
        return Err(MvbError::DimensionOutOfRange { k, max: K_MAX });
    }
    if !allow_large && k > K_SOFT_MAX {
        return Err(MvbError::DimensionAboveSoftCap {
            k,
            cap: K_SOFT_MAX,
            max: K_MAX,
        });
    }
    Ok(())
}

#[inline]
pub(crate) fn ensure_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(MvbError::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

/// Number of lattice slots for dimension `k`.
#[inline]
pub fn lattice_size(k: usize) -> usize {
    1usize << k
}

/// A subset τ of `{1, …, k}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIndex {
    mask: u32,
    k: u8,
}

impl SubsetIndex {
    pub fn new(mask: u32, k: usize) -> Result<Self> {
        check_dimension(k, true)?;
        if (mask as u64) >= (1u64 << k) {
            return Err(MvbError::InvalidSubset(format!(
                "mask {mask:#b} does not fit dimension {k}"
            )));
        }
        Ok(Self { mask, k: k as u8 })
    }

    /// Unchecked constructor for masks produced by lattice iteration.
    #[inline]
    pub(crate) fn from_raw(mask: u32, k: usize) -> Self {
        debug_assert!(k <= K_MAX && (mask as u64) < (1u64 << k));
        Self { mask, k: k as u8 }
    }

    pub fn empty(k: usize) -> Result<Self> {
        Self::new(0, k)
    }

    pub fn full(k: usize) -> Result<Self> {
        check_dimension(k, true)?;
        Ok(Self::from_raw(full_mask(k), k))
    }

    /// Builds a subset from 1-based node indices. Duplicates are ignored.
    pub fn from_nodes(nodes: &[usize], k: usize) -> Result<Self> {
        check_dimension(k, true)?;
        let mut mask = 0u32;
        for &j in nodes {
            if j == 0 || j > k {
                return Err(MvbError::InvalidSubset(format!(
                    "node {j} outside 1..={k}"
                )));
            }
            mask |= 1 << (j - 1);
        }
        Ok(Self::from_raw(mask, k))
    }

    /// Parses comma-joined ascending 1-based indices such as `"1,3"`;
    /// `"∅"` is the empty set.
    pub fn parse(text: &str, k: usize) -> Result<Self> {
        if text.trim() == "∅" {
            return Self::empty(k);
        }
        let nodes = parse_node_list(text)?;
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MvbError::InvalidSubset(format!(
                "indices in {text:?} must be strictly ascending"
            )));
        }
        Self::from_nodes(&nodes, k)
    }

    #[inline]
    pub fn mask(self) -> u32 {
        self.mask
    }

    #[inline]
    pub fn index(self) -> usize {
        self.mask as usize
    }

    #[inline]
    pub fn k(self) -> usize {
        self.k as usize
    }

    /// Cardinality |τ|.
    #[inline]
    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    /// Whether 1-based node `j` belongs to τ.
    #[inline]
    pub fn contains(self, j: usize) -> bool {
        j >= 1 && j <= self.k() && self.mask & (1 << (j - 1)) != 0
    }

    /// 1-based node indices in ascending order.
    pub fn nodes(self) -> Vec<usize> {
        (1..=self.k()).filter(|&j| self.contains(j)).collect()
    }

    pub fn is_subset(self, other: SubsetIndex) -> Result<bool> {
        ensure_same_dim(self.k(), other.k())?;
        Ok(self.mask & !other.mask == 0)
    }

    pub fn union(self, other: SubsetIndex) -> Result<SubsetIndex> {
        ensure_same_dim(self.k(), other.k())?;
        Ok(Self::from_raw(self.mask | other.mask, self.k()))
    }

    pub fn intersection(self, other: SubsetIndex) -> Result<SubsetIndex> {
        ensure_same_dim(self.k(), other.k())?;
        Ok(Self::from_raw(self.mask & other.mask, self.k()))
    }

    pub fn is_disjoint(self, other: SubsetIndex) -> Result<bool> {
        ensure_same_dim(self.k(), other.k())?;
        Ok(self.mask & other.mask == 0)
    }

    /// Every τ0 with τ ⊆ τ0 ⊆ {1..k}, in increasing mask order.
    pub fn supersets(self) -> Supersets {
        Supersets {
            next: Some(self.mask),
            base: self.mask,
            full: full_mask(self.k()),
            k: self.k(),
        }
    }

    /// Every subset of τ (including ∅ and τ), in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = SubsetIndex> {
        let k = self.k();
        let tau = self.mask;
        // Enumerate submasks downward, then reverse for ascending order.
        let mut out = Vec::with_capacity(1 << self.len());
        let mut s = tau;
        loop {
            out.push(Self::from_raw(s, k));
            if s == 0 {
                break;
            }
            s = (s - 1) & tau;
        }
        out.into_iter().rev()
    }

    /// All `2^k` subsets in mask order, starting with ∅.
    pub fn all(k: usize) -> impl Iterator<Item = SubsetIndex> {
        (0..lattice_size(k) as u32).map(move |m| Self::from_raw(m, k))
    }

    /// All `2^k - 1` nonempty subsets in mask order.
    pub fn nonempty(k: usize) -> impl Iterator<Item = SubsetIndex> {
        (1..lattice_size(k) as u32).map(move |m| Self::from_raw(m, k))
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let mut first = true;
        for j in self.nodes() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}/{}", self.k)
    }
}

/// Iterator over the supersets of a subset, produced by a masked increment.
#[derive(Debug, Clone)]
pub struct Supersets {
    next: Option<u32>,
    base: u32,
    full: u32,
    k: usize,
}

impl Iterator for Supersets {
    type Item = SubsetIndex;

    fn next(&mut self) -> Option<SubsetIndex> {
        let cur = self.next?;
        self.next = if cur == self.full {
            None
        } else {
            Some(((cur + 1) | self.base) & self.full)
        };
        Some(SubsetIndex::from_raw(cur, self.k))
    }
}

/// A realization `y ∈ {0,1}^k`, bit `j - 1` holding `y_j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutcomeVector {
    bits: u32,
    k: u8,
}

impl OutcomeVector {
    pub fn new(bits: u32, k: usize) -> Result<Self> {
        check_dimension(k, true)?;
        if (bits as u64) >= (1u64 << k) {
            return Err(MvbError::InvalidParameter(format!(
                "outcome bits {bits:#b} do not fit dimension {k}"
            )));
        }
        Ok(Self { bits, k: k as u8 })
    }

    #[inline]
    pub(crate) fn from_raw(bits: u32, k: usize) -> Self {
        debug_assert!(k <= K_MAX && (bits as u64) < (1u64 << k));
        Self { bits, k: k as u8 }
    }

    /// Builds an outcome from `(y_1, …, y_k)`; every entry must be 0 or 1.
    pub fn from_values(values: &[u8]) -> Result<Self> {
        let k = values.len();
        check_dimension(k, true)?;
        let mut bits = 0u32;
        for (j, &v) in values.iter().enumerate() {
            match v {
                0 => {}
                1 => bits |= 1 << j,
                other => {
                    return Err(MvbError::InvalidParameter(format!(
                        "outcome entry y{} = {other} is not binary",
                        j + 1
                    )))
                }
            }
        }
        Ok(Self::from_raw(bits, k))
    }

    /// Parses comma-separated 0/1 values, e.g. `"1,0,1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .map(|t| match t.trim() {
                "0" => Ok(0u8),
                "1" => Ok(1u8),
                other => Err(MvbError::Parse(format!(
                    "outcome value {other:?} is not 0 or 1"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(&values)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn index(self) -> usize {
        self.bits as usize
    }

    #[inline]
    pub fn k(self) -> usize {
        self.k as usize
    }

    /// Value of the 1-based coordinate `j`.
    #[inline]
    pub fn get(self, j: usize) -> u8 {
        ((self.bits >> (j - 1)) & 1) as u8
    }

    pub fn values(self) -> Vec<u8> {
        (1..=self.k()).map(|j| self.get(j)).collect()
    }

    /// The set of coordinates equal to one.
    #[inline]
    pub fn support(self) -> SubsetIndex {
        SubsetIndex::from_raw(self.bits, self.k())
    }

    /// All `2^k` outcomes in mask order.
    pub fn all(k: usize) -> impl Iterator<Item = OutcomeVector> {
        (0..lattice_size(k) as u32).map(move |m| Self::from_raw(m, k))
    }
}

impl fmt::Display for OutcomeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 1..=self.k() {
            if j > 1 {
                f.write_str(",")?;
            }
            write!(f, "{}", self.get(j))?;
        }
        Ok(())
    }
}

impl fmt::Debug for OutcomeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y({self})")
    }
}

/// `B^τ(y)`: 1 iff every coordinate in τ equals one in `y`.
pub fn interaction_statistic(tau: SubsetIndex, y: OutcomeVector) -> Result<u8> {
    ensure_same_dim(tau.k(), y.k())?;
    Ok(u8::from(tau.mask() & !y.bits() == 0))
}

#[inline]
pub(crate) fn full_mask(k: usize) -> u32 {
    ((1u64 << k) - 1) as u32
}

/// Packs the bits of `mask` at the positions set in `keep` into the low
/// bits of the result, preserving order.
#[inline]
pub fn compress_bits(mask: u32, keep: u32) -> u32 {
    let mut out = 0u32;
    let mut pos = 0;
    let mut rest = keep;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        if mask & low != 0 {
            out |= 1 << pos;
        }
        pos += 1;
        rest &= rest - 1;
    }
    out
}

fn parse_node_list(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(MvbError::InvalidSubset("empty subset string".into()));
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| MvbError::InvalidSubset(format!("bad node index {t:?}")))
        })
        .collect()
}

fn check_pow2(len: usize) -> usize {
    assert!(len.is_power_of_two(), "lattice table length must be 2^k");
    len.trailing_zeros() as usize
}

/// In place: `a[τ] ← Σ_{τ0 ⊆ τ} a[τ0]`.
pub fn subset_sum<T: Copy + AddAssign>(a: &mut [T]) {
    let k = check_pow2(a.len());
    for bit in 0..k {
        let b = 1usize << bit;
        for m in 0..a.len() {
            if m & b != 0 {
                let lo = a[m ^ b];
                a[m] += lo;
            }
        }
    }
}

/// In place inverse of [`subset_sum`]:
/// `a[τ] ← Σ_{τ0 ⊆ τ} (−1)^{|τ|−|τ0|} a[τ0]`.
pub fn subset_mobius<T: Copy + SubAssign>(a: &mut [T]) {
    let k = check_pow2(a.len());
    for bit in 0..k {
        let b = 1usize << bit;
        for m in 0..a.len() {
            if m & b != 0 {
                let lo = a[m ^ b];
                a[m] -= lo;
            }
        }
    }
}

/// In place: `a[τ] ← Σ_{τ0 ⊇ τ} a[τ0]`.
pub fn superset_sum<T: Copy + AddAssign>(a: &mut [T]) {
    let k = check_pow2(a.len());
    for bit in 0..k {
        let b = 1usize << bit;
        for m in 0..a.len() {
            if m & b == 0 {
                let hi = a[m | b];
                a[m] += hi;
            }
        }
    }
}
