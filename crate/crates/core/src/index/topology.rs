//! Suffix-tree topology as a balanced-parentheses (BP) sequence.
//!
//! Each node is an open parenthesis (bit 1) followed by its children and a
//! close parenthesis (bit 0); leaves are `10` pairs in lexicographic order.
//! Nodes are identified by the position of their open parenthesis.
//!
//! Navigation uses a range-min tree over blocks of `BLOCK_BITS` bits on the
//! excess sequence `E(k) = opens - closes in [0, k]`, with byte lookup
//! tables for in-block scans. `E(-1)` is taken as 0.

use super::bitvec::{select_in_word, BitVector, BitVectorBuilder};
use crate::SpaceUsage;

const BLOCK_BITS: usize = 256;
const BLOCK_BYTES: usize = BLOCK_BITS / 8;
const LEAF_BLOCK_WORDS: usize = 8;

/// BP position of a node's open parenthesis.
pub type NodeId = usize;

struct ByteTables {
    total: [i8; 256],
    /// min over k in 0..8 of the excess after bit k, relative to before the byte.
    fwd_min: [i8; 256],
    /// min over j in 0..8 of E(j) - E(7) inside the byte.
    bwd_min: [i8; 256],
}

const fn byte_tables() -> ByteTables {
    let mut total = [0i8; 256];
    let mut fwd_min = [0i8; 256];
    let mut bwd_min = [0i8; 256];
    let mut b = 0;
    while b < 256 {
        let mut e = 0i8;
        let mut m = i8::MAX;
        let mut k = 0;
        while k < 8 {
            e += if (b >> k) & 1 == 1 { 1 } else { -1 };
            if e < m {
                m = e;
            }
            k += 1;
        }
        total[b] = e;
        fwd_min[b] = m;
        // E(j) - E(7) = -(sum of steps j+1..=7)
        let mut suffix = 0i8;
        let mut bm = 0i8;
        let mut j = 7;
        while j > 0 {
            suffix += if (b >> j) & 1 == 1 { 1 } else { -1 };
            if -suffix < bm {
                bm = -suffix;
            }
            j -= 1;
        }
        bwd_min[b] = bm;
        b += 1;
    }
    ByteTables {
        total,
        fwd_min,
        bwd_min,
    }
}

static TABLES: ByteTables = byte_tables();

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixTreeTopology {
    bp: BitVector,
    n_leaves: usize,
    /// Leaves whose open parenthesis lies before each `LEAF_BLOCK_WORDS`-word block.
    leaf_block_ranks: Vec<u32>,
    /// Segment tree of block minima; leaves at `tree_base + block`.
    min_tree: Vec<i32>,
    tree_base: usize,
}

impl SuffixTreeTopology {
    /// Builds the lcp-interval tree of a suffix array from its LCP array.
    ///
    /// Leaves are the `lcp.len()` suffixes; internal nodes are the lcp
    /// intervals, including the root (lcp 0) spanning every leaf.
    pub fn from_lcp(lcp: &[u32]) -> Self {
        let n = lcp.len();
        let mut opens = vec![0u32; n];
        let mut closes = vec![0u32; n];
        if n > 0 {
            let mut stack: Vec<(u32, usize)> = vec![(0, 0)];
            for i in 1..n {
                let l = lcp[i];
                let mut lb = i - 1;
                while l < stack.last().unwrap().0 {
                    let (_, b) = stack.pop().unwrap();
                    opens[b] += 1;
                    closes[i - 1] += 1;
                    lb = b;
                }
                if l > stack.last().unwrap().0 {
                    stack.push((l, lb));
                }
            }
            while let Some((_, b)) = stack.pop() {
                opens[b] += 1;
                closes[n - 1] += 1;
            }
        }
        let internal: usize = opens.iter().map(|&o| o as usize).sum();
        let mut bits = BitVectorBuilder::with_capacity(2 * (n + internal));
        for i in 0..n {
            for _ in 0..opens[i] {
                bits.push(true);
            }
            bits.push(true);
            bits.push(false);
            for _ in 0..closes[i] {
                bits.push(false);
            }
        }
        drop(opens);
        drop(closes);
        Self::from_bp(bits.build())
    }

    /// Wraps an existing BP sequence. Panics if it is not balanced.
    pub fn from_bp(bp: BitVector) -> Self {
        let len = bp.len();
        let words = bp.words();

        let n_leaf_blocks = words.len().div_ceil(LEAF_BLOCK_WORDS);
        let mut leaf_block_ranks = Vec::with_capacity(n_leaf_blocks + 1);
        let mut leaves = 0u32;
        for b in 0..n_leaf_blocks {
            leaf_block_ranks.push(leaves);
            for w in b * LEAF_BLOCK_WORDS..((b + 1) * LEAF_BLOCK_WORDS).min(words.len()) {
                leaves += leaf_word(words, w).count_ones();
            }
        }
        leaf_block_ranks.push(leaves);

        let n_blocks = len.div_ceil(BLOCK_BITS).max(1);
        let tree_base = n_blocks.next_power_of_two();
        let mut min_tree = vec![i32::MAX; 2 * tree_base];
        let mut e: i32 = 0;
        for k in 0..len {
            e += if bp.get(k) { 1 } else { -1 };
            assert!(e >= 0, "unbalanced parentheses at position {k}");
            let slot = &mut min_tree[tree_base + k / BLOCK_BITS];
            *slot = (*slot).min(e);
        }
        assert_eq!(e, 0, "unbalanced parentheses: final excess {e}");
        for i in (1..tree_base).rev() {
            min_tree[i] = min_tree[2 * i].min(min_tree[2 * i + 1]);
        }

        SuffixTreeTopology {
            bp,
            n_leaves: leaves as usize,
            leaf_block_ranks,
            min_tree,
            tree_base,
        }
    }

    pub fn bp(&self) -> &BitVector {
        &self.bp
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn n_nodes(&self) -> usize {
        self.bp.len() / 2
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.bp.get(v) && !self.bp.get(v + 1)
    }

    /// Excess after position `k` (inclusive).
    #[inline]
    fn excess(&self, k: usize) -> i64 {
        2 * self.bp.rank1(k + 1) as i64 - (k as i64 + 1)
    }

    #[inline]
    fn byte(&self, byte_idx: usize) -> u8 {
        (self.bp.words()[byte_idx / 8] >> (8 * (byte_idx % 8))) as u8
    }

    #[inline]
    fn step(&self, k: usize) -> i64 {
        if self.bp.get(k) {
            1
        } else {
            -1
        }
    }

    /// BP position of the `j`-th leaf (1-based).
    pub fn leaf_select(&self, j: usize) -> NodeId {
        assert!(
            j >= 1 && j <= self.n_leaves,
            "leaf {j} outside 1..={}",
            self.n_leaves
        );
        let j32 = j as u32;
        let block = self.leaf_block_ranks.partition_point(|&r| r < j32) - 1;
        let mut remaining = j - self.leaf_block_ranks[block] as usize;
        let words = self.bp.words();
        let mut w = block * LEAF_BLOCK_WORDS;
        loop {
            let lw = leaf_word(words, w);
            let c = lw.count_ones() as usize;
            if c >= remaining {
                return w * 64 + select_in_word(lw, remaining);
            }
            remaining -= c;
            w += 1;
        }
    }

    /// Number of leaves whose open parenthesis lies strictly before `k`.
    pub fn leaf_rank(&self, k: usize) -> usize {
        let words = self.bp.words();
        let word = k / 64;
        let block = word / LEAF_BLOCK_WORDS;
        let mut r = self.leaf_block_ranks[block] as usize;
        for w in block * LEAF_BLOCK_WORDS..word {
            r += leaf_word(words, w).count_ones() as usize;
        }
        if !k.is_multiple_of(64) {
            r += (leaf_word(words, word) & ((1u64 << (k % 64)) - 1)).count_ones() as usize;
        }
        r
    }

    /// Position of the close parenthesis matching the open at `v`.
    pub fn find_close(&self, v: NodeId) -> usize {
        debug_assert!(self.bp.get(v));
        let target = self.excess(v) - 1;
        self.fwd_search(v + 1, self.excess(v), target)
            .expect("balanced sequence always closes")
    }

    /// Lowest common ancestor of nodes `u` and `v`.
    pub fn lca(&self, u: NodeId, v: NodeId) -> NodeId {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        if u == v || self.find_close(u) > v {
            return u;
        }
        let depth = self.range_min(u, v);
        match self.bwd_search(u, depth - 1) {
            Some(y) => (y + 1) as usize,
            None => unreachable!("lca search ran off the sequence"),
        }
    }

    /// 1-based rank of the leftmost leaf below `v`.
    pub fn leftmost_leaf(&self, v: NodeId) -> usize {
        self.leaf_rank(v) + 1
    }

    /// 1-based rank of the rightmost leaf below `v`.
    pub fn rightmost_leaf(&self, v: NodeId) -> usize {
        self.leaf_rank(self.find_close(v))
    }

    /// Smallest `y >= start` with `E(y) <= target`, given `E(start - 1) = e`.
    fn fwd_search(&self, start: usize, mut e: i64, target: i64) -> Option<usize> {
        let len = self.bp.len();
        let mut y = start;
        // Bits up to the next byte boundary.
        while y < len && !y.is_multiple_of(8) {
            e += self.step(y);
            if e <= target {
                return Some(y);
            }
            y += 1;
        }
        if y >= len {
            return None;
        }
        // Bytes to the end of the current block.
        let block = y / BLOCK_BITS;
        if let Some(hit) = self.scan_block_fwd(y / 8, (block + 1) * BLOCK_BYTES, &mut e, target) {
            return (hit < len).then_some(hit);
        }
        // Later blocks via the min tree.
        let next = self.first_block_at_most(block + 1, target)?;
        let begin = next * BLOCK_BITS;
        let mut e = if begin == 0 { 0 } else { self.excess(begin - 1) };
        let hit = self.scan_block_fwd(next * BLOCK_BYTES, (next + 1) * BLOCK_BYTES, &mut e, target)?;
        (hit < len).then_some(hit)
    }

    fn scan_block_fwd(&self, from_byte: usize, to_byte: usize, e: &mut i64, target: i64) -> Option<usize> {
        let to_byte = to_byte.min(self.bp.len().div_ceil(8));
        for b in from_byte..to_byte {
            let byte = self.byte(b);
            if *e + TABLES.fwd_min[byte as usize] as i64 <= target {
                for k in 0..8 {
                    *e += if (byte >> k) & 1 == 1 { 1 } else { -1 };
                    if *e <= target {
                        return Some(8 * b + k);
                    }
                }
                unreachable!("byte table promised a hit");
            }
            *e += TABLES.total[byte as usize] as i64;
        }
        None
    }

    /// Largest `y < x` with `E(y) <= target`; `y = -1` (with `E = 0`) counts.
    fn bwd_search(&self, x: usize, target: i64) -> Option<isize> {
        if x == 0 {
            return (target >= 0).then_some(-1);
        }
        let mut y = x - 1;
        let mut e = self.excess(y);
        loop {
            // Bit steps until y sits at the end of a byte.
            while y % 8 != 7 {
                if e <= target {
                    return Some(y as isize);
                }
                e -= self.step(y);
                if y == 0 {
                    return (e <= target).then_some(-1);
                }
                y -= 1;
            }
            // Whole bytes inside the current block, scanning right to left.
            let block = y / BLOCK_BITS;
            let block_first_byte = block * BLOCK_BYTES;
            let mut b = y / 8;
            loop {
                let byte = self.byte(b);
                if e + TABLES.bwd_min[byte as usize] as i64 <= target {
                    let mut yy = 8 * b + 7;
                    loop {
                        if e <= target {
                            return Some(yy as isize);
                        }
                        e -= if (byte >> (yy % 8)) & 1 == 1 { 1 } else { -1 };
                        yy -= 1;
                    }
                }
                e -= TABLES.total[byte as usize] as i64;
                if b == block_first_byte {
                    break;
                }
                b -= 1;
            }
            // e is now E(block * BLOCK_BITS - 1).
            if block == 0 {
                return (e <= target).then_some(-1);
            }
            if e <= target {
                return Some((block * BLOCK_BITS - 1) as isize);
            }
            match self.last_block_at_most(block - 1, target) {
                Some(prev) => {
                    y = (prev + 1) * BLOCK_BITS - 1;
                    e = self.excess(y);
                }
                None => return (target >= 0).then_some(-1),
            }
        }
    }

    /// Minimum of `E(k)` over `k in [p, q]`.
    fn range_min(&self, p: usize, q: usize) -> i64 {
        debug_assert!(p <= q && q < self.bp.len());
        let bp_block = p / BLOCK_BITS;
        let bq_block = q / BLOCK_BITS;
        let mut e = if p == 0 { 0 } else { self.excess(p - 1) };
        let mut best = i64::MAX;
        let first_end = if bp_block == bq_block {
            q + 1
        } else {
            (bp_block + 1) * BLOCK_BITS
        };
        self.scan_min(p, first_end, &mut e, &mut best);
        if bq_block > bp_block {
            if bq_block > bp_block + 1 {
                best = best.min(self.tree_range_min(bp_block + 1, bq_block - 1) as i64);
            }
            let begin = bq_block * BLOCK_BITS;
            let mut e = self.excess(begin - 1);
            self.scan_min(begin, q + 1, &mut e, &mut best);
        }
        best
    }

    /// Folds `E` over `[from, to)` into `best`; `e` holds `E(from - 1)`.
    fn scan_min(&self, from: usize, to: usize, e: &mut i64, best: &mut i64) {
        let mut k = from;
        while k < to && !k.is_multiple_of(8) {
            *e += self.step(k);
            *best = (*best).min(*e);
            k += 1;
        }
        while k + 8 <= to {
            let byte = self.byte(k / 8) as usize;
            *best = (*best).min(*e + TABLES.fwd_min[byte] as i64);
            *e += TABLES.total[byte] as i64;
            k += 8;
        }
        while k < to {
            *e += self.step(k);
            *best = (*best).min(*e);
            k += 1;
        }
    }

    fn n_blocks(&self) -> usize {
        self.bp.len().div_ceil(BLOCK_BITS).max(1)
    }

    fn tree_range_min(&self, lo: usize, hi: usize) -> i32 {
        let mut l = lo + self.tree_base;
        let mut r = hi + self.tree_base + 1;
        let mut best = i32::MAX;
        while l < r {
            if l & 1 == 1 {
                best = best.min(self.min_tree[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                best = best.min(self.min_tree[r]);
            }
            l >>= 1;
            r >>= 1;
        }
        best
    }

    /// First block `>= from` whose minimum is `<= target`.
    fn first_block_at_most(&self, from: usize, target: i64) -> Option<usize> {
        if from >= self.n_blocks() {
            return None;
        }
        self.descend_first(1, 0, self.tree_base, from, target)
    }

    fn descend_first(&self, node: usize, lo: usize, size: usize, from: usize, target: i64) -> Option<usize> {
        if lo + size <= from || self.min_tree[node] as i64 > target {
            return None;
        }
        if size == 1 {
            return Some(lo);
        }
        let half = size / 2;
        self.descend_first(2 * node, lo, half, from, target)
            .or_else(|| self.descend_first(2 * node + 1, lo + half, half, from, target))
    }

    /// Last block `<= upto` whose minimum is `<= target`.
    fn last_block_at_most(&self, upto: usize, target: i64) -> Option<usize> {
        self.descend_last(1, 0, self.tree_base, upto, target)
    }

    fn descend_last(&self, node: usize, lo: usize, size: usize, upto: usize, target: i64) -> Option<usize> {
        if lo > upto || self.min_tree[node] as i64 > target {
            return None;
        }
        if size == 1 {
            return Some(lo);
        }
        let half = size / 2;
        self.descend_last(2 * node + 1, lo + half, half, upto, target)
            .or_else(|| self.descend_last(2 * node, lo, half, upto, target))
    }
}

/// Bits marking leaf opens (`1` followed by `0`) in word `w`.
#[inline]
fn leaf_word(words: &[u64], w: usize) -> u64 {
    let next_lsb = words.get(w + 1).map_or(0, |n| n & 1);
    words[w] & !((words[w] >> 1) | (next_lsb << 63))
}

impl SpaceUsage for SuffixTreeTopology {
    fn size_in_bits(&self) -> usize {
        self.bp.size_in_bits()
            + 32 * self.leaf_block_ranks.capacity()
            + 32 * self.min_tree.capacity()
            + 2 * 64
    }
}
