//! Plain bit vector with constant-time rank and sampled select.
//!
//! Positions are 0-based. `rank1(k)` counts ones in `[0, k)`, so it agrees
//! with the 1-based inclusive convention `rank1(1..k)` used by the index.
//! `select1(j)` takes a 1-based occurrence number and returns the 0-based
//! position of that one.

use crate::SpaceUsage;

const WORDS_PER_BLOCK: usize = 8;
const BLOCK_BITS: usize = 64 * WORDS_PER_BLOCK;
const SELECT_SAMPLE: usize = 4096;

/// Append-only builder; freeze with [`BitVectorBuilder::build`].
#[derive(Debug, Default, Clone)]
pub struct BitVectorBuilder {
    words: Vec<u64>,
    len: usize,
}

impl BitVectorBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / 64] |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    #[inline]
    pub fn set(&mut self, pos: usize, bit: bool) {
        assert!(pos < self.len, "bit position {pos} out of range {}", self.len);
        let mask = 1u64 << (pos % 64);
        if bit {
            self.words[pos / 64] |= mask;
        } else {
            self.words[pos / 64] &= !mask;
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn build(self) -> BitVector {
        BitVector::from_words(self.words, self.len)
    }
}

impl FromIterator<bool> for BitVectorBuilder {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut b = BitVectorBuilder::new();
        for bit in iter {
            b.push(bit);
        }
        b
    }
}

/// Immutable bit vector with rank/select support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
    /// Ones before each block of `BLOCK_BITS` bits, plus a final total.
    block_ranks: Vec<u64>,
    /// Block index holding every `SELECT_SAMPLE`-th one (1-based multiples).
    select1_hints: Vec<u32>,
    select0_hints: Vec<u32>,
}

impl BitVector {
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.truncate(len.div_ceil(64));
        words.resize(len.div_ceil(64), 0);
        if !len.is_multiple_of(64) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % 64)) - 1;
        }
        words.shrink_to_fit();

        let n_blocks = words.len().div_ceil(WORDS_PER_BLOCK);
        let mut block_ranks = Vec::with_capacity(n_blocks + 1);
        let mut ones = 0u64;
        let mut select1_hints = Vec::new();
        let mut select0_hints = Vec::new();
        let mut next1 = SELECT_SAMPLE as u64;
        let mut next0 = SELECT_SAMPLE as u64;
        for b in 0..n_blocks {
            block_ranks.push(ones);
            let start = b * WORDS_PER_BLOCK;
            let end = (start + WORDS_PER_BLOCK).min(words.len());
            let block_ones: u64 = words[start..end]
                .iter()
                .map(|w| w.count_ones() as u64)
                .sum();
            let block_len = ((b + 1) * BLOCK_BITS).min(len) - b * BLOCK_BITS;
            let zeros_before = (b * BLOCK_BITS) as u64 - ones;
            let zeros_after = zeros_before + block_len as u64 - block_ones;
            ones += block_ones;
            while next1 <= ones {
                select1_hints.push(b as u32);
                next1 += SELECT_SAMPLE as u64;
            }
            while next0 <= zeros_after {
                select0_hints.push(b as u32);
                next0 += SELECT_SAMPLE as u64;
            }
        }
        block_ranks.push(ones);
        select1_hints.shrink_to_fit();
        select0_hints.shrink_to_fit();

        BitVector {
            words,
            len,
            block_ranks,
            select1_hints,
            select0_hints,
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        bits.iter().copied().collect::<BitVectorBuilder>().build()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, pos: usize) -> bool {
        debug_assert!(pos < self.len);
        (self.words[pos / 64] >> (pos % 64)) & 1 == 1
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        *self.block_ranks.last().unwrap_or(&0) as usize
    }

    #[inline]
    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    /// Number of ones in `[0, k)`.
    #[inline]
    pub fn rank1(&self, k: usize) -> usize {
        assert!(k <= self.len, "rank position {k} beyond length {}", self.len);
        let word = k / 64;
        let block = word / WORDS_PER_BLOCK;
        let mut r = self.block_ranks[block] as usize;
        for w in &self.words[block * WORDS_PER_BLOCK..word] {
            r += w.count_ones() as usize;
        }
        if !k.is_multiple_of(64) {
            r += (self.words[word] & ((1u64 << (k % 64)) - 1)).count_ones() as usize;
        }
        r
    }

    /// Number of zeros in `[0, k)`.
    #[inline]
    pub fn rank0(&self, k: usize) -> usize {
        k - self.rank1(k)
    }

    #[inline]
    pub fn rank(&self, k: usize, bit: bool) -> usize {
        if bit {
            self.rank1(k)
        } else {
            self.rank0(k)
        }
    }

    /// Position of the `j`-th one (1-based `j`), or `None` if there are fewer.
    pub fn select1(&self, j: usize) -> Option<usize> {
        if j == 0 || j > self.count_ones() {
            return None;
        }
        let (lo, hi) = self.hint_window(&self.select1_hints, j);
        // Last block whose rank is < j.
        let block = partition_point(lo, hi, |b| (self.block_ranks[b] as usize) < j) - 1;
        let mut remaining = j - self.block_ranks[block] as usize;
        let mut w = block * WORDS_PER_BLOCK;
        loop {
            let c = self.words[w].count_ones() as usize;
            if c >= remaining {
                return Some(w * 64 + select_in_word(self.words[w], remaining));
            }
            remaining -= c;
            w += 1;
        }
    }

    /// Position of the `j`-th zero (1-based `j`), or `None` if there are fewer.
    pub fn select0(&self, j: usize) -> Option<usize> {
        if j == 0 || j > self.count_zeros() {
            return None;
        }
        let zeros_before = |b: usize| b * BLOCK_BITS - self.block_ranks[b] as usize;
        let (lo, hi) = self.hint_window(&self.select0_hints, j);
        let block = partition_point(lo, hi, |b| zeros_before(b) < j) - 1;
        let mut remaining = j - zeros_before(block);
        let mut w = block * WORDS_PER_BLOCK;
        loop {
            // Bits past `len` are zero in storage but never selected: j <= count_zeros.
            let c = self.words[w].count_zeros() as usize;
            if c >= remaining {
                return Some(w * 64 + select_in_word(!self.words[w], remaining));
            }
            remaining -= c;
            w += 1;
        }
    }

    #[inline]
    pub fn select(&self, j: usize, bit: bool) -> Option<usize> {
        if bit {
            self.select1(j)
        } else {
            self.select0(j)
        }
    }

    /// Block-index window `[lo, hi)` for a binary search over `block_ranks`.
    fn hint_window(&self, hints: &[u32], j: usize) -> (usize, usize) {
        let n_blocks = self.block_ranks.len() - 1;
        let s = j / SELECT_SAMPLE;
        let lo = if s == 0 { 0 } else { hints[s - 1] as usize };
        let hi = if s < hints.len() {
            hints[s] as usize + 1
        } else {
            n_blocks
        };
        (lo, hi.max(lo + 1))
    }
}

impl SpaceUsage for BitVector {
    fn size_in_bits(&self) -> usize {
        64 * (self.words.capacity()
            + self.block_ranks.capacity()
            + (self.select1_hints.capacity() + self.select0_hints.capacity()) / 2)
            + 64
    }
}

/// First index in `[lo, hi)` where `pred` is false, assuming `pred` is
/// monotone (true then false). `pred(lo)` must hold.
#[inline]
fn partition_point(mut lo: usize, mut hi: usize, pred: impl Fn(usize) -> bool) -> usize {
    // Invariant: pred(lo) is true; pred(hi) false or hi is the end.
    lo += 1;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// 0-based index of the `j`-th set bit (1-based) in `w`. Requires `popcount(w) >= j`.
#[inline]
pub(crate) fn select_in_word(mut w: u64, j: usize) -> usize {
    debug_assert!(j >= 1 && w.count_ones() as usize >= j);
    for _ in 1..j {
        w &= w - 1;
    }
    w.trailing_zeros() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_select(bits: &[bool], j: usize, bit: bool) -> Option<usize> {
        bits.iter()
            .enumerate()
            .filter(|(_, &b)| b == bit)
            .nth(j.checked_sub(1)?)
            .map(|(i, _)| i)
    }

    #[test]
    fn empty_vector() {
        let bv = BitVector::from_bits(&[]);
        assert_eq!(bv.len(), 0);
        assert_eq!(bv.rank1(0), 0);
        assert_eq!(bv.select1(1), None);
        assert_eq!(bv.select0(1), None);
    }

    #[test]
    fn dense_and_sparse_selects_cross_sample_boundaries() {
        let n = 3 * SELECT_SAMPLE * 5 + 17;
        let bits: Vec<bool> = (0..n).map(|i| i % 5 == 0).collect();
        let bv = BitVector::from_bits(&bits);
        let ones = bv.count_ones();
        for j in (1..=ones).step_by(37).chain([1, ones]) {
            assert_eq!(bv.select1(j), Some((j - 1) * 5));
            assert_eq!(bv.rank1(bv.select1(j).unwrap()), j - 1);
        }
        let zeros = bv.count_zeros();
        for j in (1..=zeros).step_by(41).chain([1, zeros]) {
            assert_eq!(bv.select0(j), naive_select(&bits, j, false));
        }
        assert_eq!(bv.select1(ones + 1), None);
    }

    proptest! {
        #[test]
        fn rank_select_match_naive(bits in proptest::collection::vec(any::<bool>(), 0..2000)) {
            let bv = BitVector::from_bits(&bits);
            let mut ones = 0;
            for k in 0..=bits.len() {
                prop_assert_eq!(bv.rank1(k), ones);
                prop_assert_eq!(bv.rank0(k), k - ones);
                if k < bits.len() {
                    prop_assert_eq!(bv.get(k), bits[k]);
                    ones += bits[k] as usize;
                }
            }
            for j in 1..=bits.len() + 1 {
                prop_assert_eq!(bv.select1(j), naive_select(&bits, j, true));
                prop_assert_eq!(bv.select0(j), naive_select(&bits, j, false));
                if let Some(p) = bv.select1(j) {
                    prop_assert_eq!(bv.rank1(p + 1), j);
                }
            }
        }
    }
}
