//! Levelwise (pointer-free) wavelet tree over small integer codes.
//!
//! Codes are `0..alphabet_size`, written with `width = ceil(log2(alphabet_size))`
//! bits. Level `l` stores bit `width - 1 - l` of every element, with the
//! elements stably ordered by their top `l` bits. The node for a code prefix
//! therefore occupies a contiguous segment of each level whose bounds come
//! from the cumulative code counts, so no node pointers are stored.

use super::bitvec::{BitVector, BitVectorBuilder};
use crate::SpaceUsage;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveletTree {
    len: usize,
    alphabet_size: usize,
    width: u32,
    levels: Vec<BitVector>,
    /// `cumulative[c]` = number of elements with code `< c`, for
    /// `c in 0..=2^width` (codes beyond the alphabet have no elements).
    cumulative: Vec<usize>,
}

impl WaveletTree {
    /// Builds the tree. Every element must be `< alphabet_size`.
    pub fn new(seq: &[u8], alphabet_size: usize) -> Self {
        assert!((1..=256).contains(&alphabet_size));
        let width = code_width(alphabet_size);
        let span = 1usize << width;

        let mut counts = vec![0usize; span + 1];
        for &c in seq {
            assert!((c as usize) < alphabet_size, "code {c} outside alphabet");
            counts[c as usize + 1] += 1;
        }
        for c in 1..=span {
            counts[c] += counts[c - 1];
        }

        let mut levels = Vec::with_capacity(width as usize);
        let mut current: Vec<u8> = seq.to_vec();
        let mut next: Vec<u8> = Vec::with_capacity(seq.len());
        for l in 0..width {
            let shift = width - 1 - l;
            let mut bits = BitVectorBuilder::with_capacity(seq.len());
            for &c in &current {
                bits.push((c >> shift) & 1 == 1);
            }
            levels.push(bits.build());

            // Stable partition inside each node: sorting by the top l+1 bits is
            // a stable sort on (c >> shift), which keeps parent segments intact.
            if l + 1 < width {
                next.clear();
                let mut offsets = counts.clone();
                next.resize(current.len(), 0);
                for &c in &current {
                    let key = ((c as usize) >> shift) << shift;
                    next[offsets[key]] = c;
                    offsets[key] += 1;
                }
                std::mem::swap(&mut current, &mut next);
            }
        }

        WaveletTree {
            len: seq.len(),
            alphabet_size,
            width,
            levels,
            cumulative: counts,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// Number of elements with code strictly smaller than `c`.
    #[inline]
    pub fn count_less(&self, c: usize) -> usize {
        self.cumulative[c.min(1 << self.width)]
    }

    /// Code at 0-based position `k`.
    pub fn access(&self, k: usize) -> u8 {
        assert!(k < self.len);
        let (mut lo, mut hi) = (0usize, 1usize << self.width);
        let mut pos = k;
        let mut code = 0u8;
        for level in &self.levels {
            let start = self.cumulative[lo];
            let mid = (lo + hi) / 2;
            let abs = start + pos;
            let bit = level.get(abs);
            let ones_before = level.rank1(abs) - level.rank1(start);
            code <<= 1;
            if bit {
                code |= 1;
                pos = ones_before;
                lo = mid;
            } else {
                pos -= ones_before;
                hi = mid;
            }
        }
        code
    }

    /// Occurrences of `c` in positions `[0, k)`.
    pub fn rank(&self, k: usize, c: u8) -> usize {
        assert!(k <= self.len);
        assert!((c as usize) < self.alphabet_size, "code {c} outside alphabet");
        let (mut lo, mut hi) = (0usize, 1usize << self.width);
        let mut pos = k;
        for (l, level) in self.levels.iter().enumerate() {
            if pos == 0 {
                return 0;
            }
            let start = self.cumulative[lo];
            let mid = (lo + hi) / 2;
            let ones = level.rank1(start + pos) - level.rank1(start);
            if (c >> (self.width as usize - 1 - l)) & 1 == 1 {
                pos = ones;
                lo = mid;
            } else {
                pos -= ones;
                hi = mid;
            }
        }
        pos
    }

    /// 0-based position of the `j`-th occurrence (1-based) of `c`.
    pub fn select(&self, j: usize, c: u8) -> Option<usize> {
        assert!((c as usize) < self.alphabet_size, "code {c} outside alphabet");
        let c = c as usize;
        if j == 0 || j > self.cumulative[c + 1] - self.cumulative[c] {
            return None;
        }
        // pos is the 0-based offset inside the current node, bottom-up.
        let mut pos = j - 1;
        for l in (0..self.width as usize).rev() {
            let shift = self.width as usize - l;
            let node_lo = (c >> shift) << shift;
            let start = self.cumulative[node_lo];
            let level = &self.levels[l];
            let bit = (c >> (shift - 1)) & 1 == 1;
            let before = level.rank(start, bit);
            let abs = level.select(before + pos + 1, bit)?;
            pos = abs - start;
        }
        Some(pos)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub(crate) fn levels(&self) -> &[BitVector] {
        &self.levels
    }

    /// Reassembles a tree from stored levels; `counts` are per-code frequencies.
    pub(crate) fn from_parts(
        levels: Vec<BitVector>,
        counts: &[usize],
        alphabet_size: usize,
    ) -> Option<Self> {
        let width = code_width(alphabet_size);
        if levels.len() != width as usize || counts.len() != alphabet_size {
            return None;
        }
        let span = 1usize << width;
        let mut cumulative = vec![0usize; span + 1];
        for c in 0..span {
            cumulative[c + 1] = cumulative[c] + counts.get(c).copied().unwrap_or(0);
        }
        let len = cumulative[span];
        if levels.iter().any(|l| l.len() != len) {
            return None;
        }
        Some(WaveletTree {
            len,
            alphabet_size,
            width,
            levels,
            cumulative,
        })
    }
}

/// Bits per code for an alphabet of `alphabet_size` codes (at least 1).
pub fn code_width(alphabet_size: usize) -> u32 {
    if alphabet_size <= 2 {
        1
    } else {
        usize::BITS - (alphabet_size - 1).leading_zeros()
    }
}

impl SpaceUsage for WaveletTree {
    fn size_in_bits(&self) -> usize {
        self.levels.iter().map(SpaceUsage::size_in_bits).sum::<usize>()
            + 64 * self.cumulative.capacity()
            + 3 * 64
    }
}
