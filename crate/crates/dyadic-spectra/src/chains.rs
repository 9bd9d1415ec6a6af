//! Dyadic chain decomposition of `{1, ..., n}`.
//!
//! The positions of a binary word split into disjoint chains
//! `{j, 2j, 4j, ...}` indexed by their odd head `j`. Every pair constraint
//! `(k, 2k)` links two adjacent members of the same chain, so counting and
//! sampling problems factor over chains. This module computes the chain
//! structure: head/level extraction, explicit chain positions, and the
//! length histogram of the full decomposition.
//!
//! The histogram is computed arithmetically (counting odd integers in dyadic
//! intervals), so `decompose` is O(log n) and works up to n = 2^60; chain
//! enumeration remains available as a test oracle.

use std::collections::BTreeMap;

use thiserror::Error;

/// Largest word length the arithmetic decomposition is guaranteed for.
pub const MAX_DECOMPOSE_N: u64 = 1 << 60;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("position index must be >= 1")]
    ZeroIndex,
    #[error("chain head {0} is not odd")]
    EvenHead(u64),
    #[error("chain head {head} exceeds word length {n}")]
    HeadBeyondWord { head: u64, n: u64 },
    #[error("word length must be >= 1")]
    ZeroLength,
    #[error("word length {0} exceeds supported maximum 2^60")]
    LengthTooLarge(u64),
}

/// Identifier of a dyadic chain: its odd head `2k - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChainId(u64);

impl ChainId {
    pub fn new(head: u64) -> Result<Self, ChainError> {
        if head == 0 {
            return Err(ChainError::ZeroIndex);
        }
        if head.is_multiple_of(2) {
            return Err(ChainError::EvenHead(head));
        }
        Ok(ChainId(head))
    }

    /// The odd head value.
    pub fn head(self) -> u64 {
        self.0
    }
}

/// Write `k = head * 2^level` with `head` odd.
///
/// `chain_head(12) == (ChainId(3), 2)`, `chain_head(32) == (ChainId(1), 5)`.
pub fn chain_head(k: u64) -> Result<(ChainId, u32), ChainError> {
    if k == 0 {
        return Err(ChainError::ZeroIndex);
    }
    let level = k.trailing_zeros();
    Ok((ChainId(k >> level), level))
}

/// Positions of the chain with the given odd head inside `{1, ..., n}`,
/// in increasing order: `head, 2*head, ...` up to the largest `2^l * head <= n`.
pub fn chain_positions(head: u64, n: u64) -> Result<Vec<u64>, ChainError> {
    if head == 0 {
        return Err(ChainError::ZeroIndex);
    }
    if head.is_multiple_of(2) {
        return Err(ChainError::EvenHead(head));
    }
    if head > n {
        return Err(ChainError::HeadBeyondWord { head, n });
    }
    let mut positions = Vec::new();
    let mut pos = head;
    loop {
        positions.push(pos);
        match pos.checked_mul(2) {
            Some(next) if next <= n => pos = next,
            _ => break,
        }
    }
    Ok(positions)
}

/// Length of the chain with odd head `head` inside `{1, ..., n}`:
/// `floor(log2(n / head)) + 1`.
pub fn chain_length(head: u64, n: u64) -> Result<u32, ChainError> {
    if head == 0 {
        return Err(ChainError::ZeroIndex);
    }
    if head.is_multiple_of(2) {
        return Err(ChainError::EvenHead(head));
    }
    if head > n {
        return Err(ChainError::HeadBeyondWord { head, n });
    }
    Ok((n / head).ilog2() + 1)
}

/// The dyadic chain decomposition of `{1, ..., n}` summarized as a
/// histogram: chain length -> number of chains of that length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainDecomposition {
    n: u64,
    histogram: BTreeMap<u32, u64>,
}

impl ChainDecomposition {
    /// Word length this decomposition covers.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of chains of length `len` (0 if none).
    pub fn multiplicity(&self, len: u32) -> u64 {
        self.histogram.get(&len).copied().unwrap_or(0)
    }

    /// Iterate `(length, multiplicity)` pairs in increasing length order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.histogram.iter().map(|(&l, &m)| (l, m))
    }

    /// Total number of chains; always `ceil(n / 2)`, one per odd head.
    pub fn chain_count(&self) -> u64 {
        self.histogram.values().sum()
    }

    /// Total number of covered positions; always `n`.
    pub fn position_total(&self) -> u64 {
        self.histogram.iter().map(|(&l, &m)| u64::from(l) * m).sum()
    }

    /// Largest chain length present (the chain headed by 1).
    pub fn max_length(&self) -> u32 {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }
}

/// Number of odd integers in `[1, x]`.
fn odd_count_up_to(x: u64) -> u64 {
    x.div_ceil(2)
}

/// Decompose `{1, ..., n}` into dyadic chains and return the length
/// histogram.
///
/// A chain of length `l` has its odd head in the interval
/// `(n / 2^l, n / 2^(l-1)]`, so the multiplicity of `l` is the count of odd
/// integers there. No enumeration is involved.
pub fn decompose(n: u64) -> Result<ChainDecomposition, ChainError> {
    if n == 0 {
        return Err(ChainError::ZeroLength);
    }
    if n > MAX_DECOMPOSE_N {
        return Err(ChainError::LengthTooLarge(n));
    }
    let mut histogram = BTreeMap::new();
    let max_len = n.ilog2() + 1;
    for len in 1..=max_len {
        let upper = n >> (len - 1);
        let lower = n >> len;
        let mult = odd_count_up_to(upper) - odd_count_up_to(lower);
        if mult > 0 {
            histogram.insert(len, mult);
        }
    }
    Ok(ChainDecomposition { n, histogram })
}

/// Iterate the chains of `{1, ..., n}` as `(head, length)` in increasing
/// head order. Intended for DP drivers at moderate n; the histogram form
/// should be used for asymptotic quantities.
pub fn chains(n: u64) -> impl Iterator<Item = (u64, u32)> {
    (1..=n)
        .step_by(2)
        .map(move |head| (head, (n / head).ilog2() + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn chain_head_examples() {
        assert_eq!(chain_head(1).unwrap(), (ChainId(1), 0));
        assert_eq!(chain_head(12).unwrap(), (ChainId(3), 2));
        assert_eq!(chain_head(32).unwrap(), (ChainId(1), 5));
        assert_eq!(chain_head(0), Err(ChainError::ZeroIndex));
    }

    #[test]
    fn chain_head_reconstructs() {
        for k in 1..=4096u64 {
            let (id, level) = chain_head(k).unwrap();
            assert_eq!(id.head() << level, k);
            assert_eq!(id.head() % 2, 1);
        }
    }

    #[test]
    fn chain_positions_examples() {
        assert_eq!(chain_positions(1, 4).unwrap(), vec![1, 2, 4]);
        assert_eq!(chain_positions(3, 8).unwrap(), vec![3, 6]);
        assert_eq!(chain_positions(5, 8).unwrap(), vec![5]);
        assert_eq!(chain_positions(2, 8), Err(ChainError::EvenHead(2)));
        assert_eq!(
            chain_positions(9, 8),
            Err(ChainError::HeadBeyondWord { head: 9, n: 8 })
        );
    }

    #[test]
    fn decompose_examples() {
        // n=4: chain {1,2,4} and chain {3}.
        let d = decompose(4).unwrap();
        assert_eq!(d.multiplicity(3), 1);
        assert_eq!(d.multiplicity(1), 1);
        assert_eq!(d.chain_count(), 2);

        // n=8: heads 1,3,5,7 give lengths 4,2,1,1.
        let d = decompose(8).unwrap();
        assert_eq!(d.multiplicity(4), 1);
        assert_eq!(d.multiplicity(2), 1);
        assert_eq!(d.multiplicity(1), 2);

        let d = decompose(1).unwrap();
        assert_eq!(d.multiplicity(1), 1);
        assert_eq!(d.chain_count(), 1);

        assert_eq!(decompose(0), Err(ChainError::ZeroLength));
    }

    /// Enumeration oracle: build the histogram by walking every chain.
    fn decompose_by_enumeration(n: u64) -> BTreeMap<u32, u64> {
        let mut histogram = BTreeMap::new();
        for head in (1..=n).step_by(2) {
            let len = chain_positions(head, n).unwrap().len() as u32;
            *histogram.entry(len).or_insert(0u64) += 1;
        }
        histogram
    }

    #[test]
    fn histogram_matches_enumeration_small() {
        for n in 1..=512 {
            let d = decompose(n).unwrap();
            assert_eq!(d.histogram, decompose_by_enumeration(n), "n={n}");
        }
    }

    #[test]
    fn chains_partition_positions() {
        for n in [1u64, 2, 3, 17, 64, 100, 513, 1 << 16] {
            let mut seen = vec![false; (n + 1) as usize];
            for head in (1..=n).step_by(2) {
                for pos in chain_positions(head, n).unwrap() {
                    assert!(!seen[pos as usize], "duplicate position {pos} at n={n}");
                    seen[pos as usize] = true;
                }
            }
            assert!(seen[1..].iter().all(|&s| s), "positions missing at n={n}");
        }
    }

    #[test]
    fn decompose_scales_to_huge_n() {
        let n = 1u64 << 60;
        let d = decompose(n).unwrap();
        assert_eq!(d.position_total(), n);
        assert_eq!(d.chain_count(), n.div_ceil(2));
        assert_eq!(d.max_length(), 61);
    }

    proptest! {
        #[test]
        fn histogram_identities(n in 1u64..(1 << 60)) {
            let d = decompose(n).unwrap();
            prop_assert_eq!(d.position_total(), n);
            prop_assert_eq!(d.chain_count(), n.div_ceil(2));
        }

        #[test]
        fn histogram_matches_enumeration(n in 1u64..=(1 << 16)) {
            let d = decompose(n).unwrap();
            prop_assert_eq!(&d.histogram, &decompose_by_enumeration(n));
        }

        #[test]
        fn multiplicity_counts_odd_heads_in_interval(n in 1u64..(1 << 40), len in 1u32..40) {
            let d = decompose(n).unwrap();
            let upper = n >> (len - 1);
            let lower = n >> len;
            let expected = upper.div_ceil(2) - lower.div_ceil(2);
            prop_assert_eq!(d.multiplicity(len), expected);
        }
    }
}
