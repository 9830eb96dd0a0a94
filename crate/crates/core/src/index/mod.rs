//! Compact text index: BWT in a wavelet tree, the C-array, and the
//! balanced-parentheses topology of the suffix tree.
//!
//! Lexicographic ranks are 1-based throughout, matching [`LexRange`].

pub mod bitvec;
mod serialize;
pub mod sais;
pub mod topology;
pub mod wavelet;

use std::fmt;

use serde::Serialize;

use crate::text::{Concatenation, SEPARATOR};
use crate::SpaceUsage;
use topology::SuffixTreeTopology;
use wavelet::WaveletTree;

pub use serialize::{read_index, write_index, INDEX_MAGIC};

/// Lexicographic interval `[lo, hi]` of suffixes (1-based, inclusive).
/// Empty iff `lo > hi`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LexRange {
    pub lo: usize,
    pub hi: usize,
}

impl LexRange {
    pub const fn new(lo: usize, hi: usize) -> Self {
        LexRange { lo, hi }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    #[inline]
    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.hi - self.lo + 1
        }
    }
}

impl fmt::Debug for LexRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Interval of 1-based kept-string ids, `first..=last`. Empty iff `first > last`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdRange {
    pub first: usize,
    pub last: usize,
}

impl IdRange {
    pub fn is_empty(&self) -> bool {
        self.first > self.last
    }
}

/// Cumulative code counts: `C[c]` = text positions holding a code `< c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CArray(Vec<usize>);

impl CArray {
    fn from_counts(counts: &[usize]) -> Self {
        let mut c = Vec::with_capacity(counts.len() + 1);
        let mut acc = 0;
        c.push(0);
        for &k in counts {
            acc += k;
            c.push(acc);
        }
        CArray(c)
    }

    /// `C[c]` for `c in 0..=sigma+1`; the last entry is N.
    #[inline]
    pub fn get(&self, c: usize) -> usize {
        self.0[c]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// The code `c` with `C[c] < rank <= C[c+1]` (1-based rank).
    pub fn code_of_rank(&self, rank: usize) -> u8 {
        debug_assert!(rank >= 1 && rank <= *self.0.last().unwrap());
        (self.0.partition_point(|&x| x < rank) - 1) as u8
    }
}

impl SpaceUsage for CArray {
    fn size_in_bits(&self) -> usize {
        64 * self.0.capacity()
    }
}

/// Per-component sizes, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexSizes {
    pub bwt: usize,
    pub c_array: usize,
    pub topology: usize,
}

impl IndexSizes {
    pub fn total(&self) -> usize {
        self.bwt + self.c_array + self.topology
    }
}

/// BWT and C-array: enough for backward search but not suffix links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BwtIndex {
    bwt: WaveletTree,
    c_array: CArray,
    sigma: usize,
}

impl BwtIndex {
    /// Builds from the suffix array of `codes` (codes `0..=sigma`).
    pub fn from_suffix_array(codes: &[u8], sa: &[u32], sigma: usize) -> Self {
        let n = codes.len();
        let bwt: Vec<u8> = sa
            .iter()
            .map(|&p| {
                if p == 0 {
                    // Cyclic wrap; only reached from the separator-initial suffix 0.
                    codes[n - 1]
                } else {
                    codes[p as usize - 1]
                }
            })
            .collect();
        Self::from_bwt(&bwt, sigma)
    }

    fn from_bwt(bwt: &[u8], sigma: usize) -> Self {
        let wt = WaveletTree::new(bwt, sigma + 1);
        let counts: Vec<usize> = (0..=sigma).map(|c| wt.rank(wt.len(), c as u8)).collect();
        BwtIndex {
            bwt: wt,
            c_array: CArray::from_counts(&counts),
            sigma,
        }
    }

    /// Indexed text length N.
    #[inline]
    pub fn len(&self) -> usize {
        self.bwt.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bwt.is_empty()
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn c_array(&self) -> &CArray {
        &self.c_array
    }

    pub fn wavelet_tree(&self) -> &WaveletTree {
        &self.bwt
    }

    /// BWT symbol at 1-based rank `k`.
    pub fn bwt_at(&self, k: usize) -> u8 {
        self.bwt.access(k - 1)
    }

    /// Occurrences of `c` in BWT ranks `1..=k`.
    #[inline]
    pub fn rank(&self, k: usize, c: u8) -> usize {
        self.bwt.rank(k, c)
    }

    /// Range of the empty string, `[1, N]`.
    pub fn full_range(&self) -> LexRange {
        LexRange::new(1, self.len())
    }

    /// Maps the range of `α` to the range of `cα`.
    pub fn left_extend(&self, range: LexRange, c: u8) -> LexRange {
        assert!(
            !range.is_empty() && range.lo >= 1 && range.hi <= self.len(),
            "left_extend on invalid range {range:?}"
        );
        assert!((c as usize) <= self.sigma, "code {c} outside alphabet");
        let base = self.c_array.get(c as usize);
        LexRange::new(
            base + self.rank(range.lo - 1, c) + 1,
            base + self.rank(range.hi, c),
        )
    }

    /// Range of `pattern`, possibly empty.
    pub fn backward_search(&self, pattern: &[u8]) -> LexRange {
        let mut range = self.full_range();
        for &c in pattern.iter().rev() {
            if (c as usize) > self.sigma {
                return LexRange::new(1, 0);
            }
            range = self.left_extend(range, c);
            if range.is_empty() {
                break;
            }
        }
        range
    }

    /// LF mapping of a single rank.
    #[inline]
    fn lf(&self, k: usize) -> (u8, usize) {
        let c = self.bwt_at(k);
        (c, self.c_array.get(c as usize) + self.rank(k, c))
    }
}

/// The full index used by the overlap engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FmIndex {
    bwt: BwtIndex,
    topology: SuffixTreeTopology,
    m: usize,
}

impl FmIndex {
    pub fn build(concat: &Concatenation) -> Self {
        let sa = sais::suffix_array(concat.codes(), concat.sigma() + 1);
        Self::build_with_suffix_array(concat, &sa)
    }

    /// Builds from a precomputed suffix array of `concat.codes()`.
    pub fn build_with_suffix_array(concat: &Concatenation, sa: &[u32]) -> Self {
        let codes = concat.codes();
        assert_eq!(sa.len(), codes.len());
        let bwt = BwtIndex::from_suffix_array(codes, sa, concat.sigma());
        let lcp = sais::lcp_array(codes, sa);
        let topology = SuffixTreeTopology::from_lcp(&lcp);
        drop(lcp);
        FmIndex {
            bwt,
            topology,
            m: concat.m(),
        }
    }

    /// Builds directly from a code sequence whose separators are code 0.
    pub fn from_codes(codes: &[u8], sigma: usize) -> Self {
        let concat = Concatenation::from_codes(codes.to_vec(), sigma);
        Self::build(&concat)
    }

    pub(crate) fn from_parts(bwt: BwtIndex, topology: SuffixTreeTopology, m: usize) -> Self {
        FmIndex { bwt, topology, m }
    }

    pub fn bwt(&self) -> &BwtIndex {
        &self.bwt
    }

    pub fn topology(&self) -> &SuffixTreeTopology {
        &self.topology
    }

    /// Indexed text length N.
    #[inline]
    pub fn len(&self) -> usize {
        self.bwt.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bwt.is_empty()
    }

    /// Number of indexed strings.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sigma(&self) -> usize {
        self.bwt.sigma
    }

    pub fn full_range(&self) -> LexRange {
        self.bwt.full_range()
    }

    pub fn left_extend(&self, range: LexRange, c: u8) -> LexRange {
        self.bwt.left_extend(range, c)
    }

    pub fn backward_search(&self, pattern: &[u8]) -> LexRange {
        self.bwt.backward_search(pattern)
    }

    /// Maps the range of `cα` to the range of `α` when `cα` is right-maximal;
    /// otherwise to the range of `αβ` for the shortest `β` making `cαβ`
    /// right-maximal (a single leaf if there is none).
    pub fn suffix_link(&self, range: LexRange) -> LexRange {
        assert!(
            !range.is_empty() && range.hi <= self.len(),
            "suffix_link on invalid range {range:?}"
        );
        let c = self.bwt.c_array.code_of_rank(range.lo);
        assert!(
            c != SEPARATOR,
            "suffix_link on separator-initial range {range:?}"
        );
        let base = self.bwt.c_array.get(c as usize);
        debug_assert!(range.hi <= self.bwt.c_array.get(c as usize + 1));
        let first = self.bwt.bwt.select(range.lo - base, c).expect("rank within C bucket");
        if range.lo == range.hi {
            return LexRange::new(first + 1, first + 1);
        }
        let last = self.bwt.bwt.select(range.hi - base, c).expect("rank within C bucket");
        let t = &self.topology;
        let v = t.lca(t.leaf_select(first + 1), t.leaf_select(last + 1));
        LexRange::new(t.leftmost_leaf(v), t.rightmost_leaf(v))
    }

    /// Right-maximality test for `cα` given the ranges of `cα` and `α`.
    pub fn is_right_maximal(&self, range_c_alpha: LexRange, range_alpha: LexRange) -> bool {
        self.suffix_link(range_c_alpha) == range_alpha
    }

    /// Kept-string ids whose strings follow the separators in `range`.
    pub fn string_ids_from_separator_range(&self, range: LexRange) -> IdRange {
        assert!(
            range.is_empty() || (range.lo >= 1 && range.hi <= self.m + 1),
            "range {range:?} is not within the separator block [1, {}]",
            self.m + 1
        );
        if range.is_empty() || range.hi < 2 {
            return IdRange { first: 1, last: 0 };
        }
        IdRange {
            first: range.lo.max(2) - 1,
            last: range.hi - 1,
        }
    }

    /// Recovers kept string `id` (1-based) by LF-walking from its terminator.
    pub fn extract(&self, id: usize) -> Vec<u8> {
        assert!(id >= 1 && id <= self.m, "string id {id} outside 1..={}", self.m);
        // "$s_{id+1}…" sits at rank id+2; the final lone "$" at rank 1.
        let mut k = if id < self.m { id + 2 } else { 1 };
        let mut out = Vec::new();
        loop {
            let (c, next) = self.bwt.lf(k);
            if c == SEPARATOR {
                break;
            }
            out.push(c);
            k = next;
        }
        out.reverse();
        out
    }

    pub fn sizes(&self) -> IndexSizes {
        IndexSizes {
            bwt: self.bwt.bwt.size_in_bits(),
            c_array: self.bwt.c_array.size_in_bits(),
            topology: self.topology.size_in_bits(),
        }
    }
}

impl SpaceUsage for FmIndex {
    fn size_in_bits(&self) -> usize {
        self.sizes().total() + 3 * 64
    }
}
