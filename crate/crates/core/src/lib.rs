//! Greedy shortest-common-superstring approximation over a compact index.
//!
//! Input strings are deduplicated, stripped of strings contained in others,
//! sorted, and concatenated as `$s_1$s_2$…$s_m$`. A BWT index with a
//! balanced-parentheses suffix-tree topology enumerates every
//! prefix-suffix overlap in decreasing length, and a union-find backed
//! bookkeeper accepts merges that keep the overlap graph a set of simple
//! paths. After `m - 1` merges the path is spelled out as the superstring.
//!
//! ```
//! use compact_scs::pipeline::{compute_superstring, PipelineOptions};
//!
//! let out = compute_superstring(&[b"aab".to_vec(), b"abb".to_vec()], &PipelineOptions::default()).unwrap();
//! assert_eq!(out.superstring, b"aabb");
//! ```

pub mod assemble;
pub mod error;
pub mod index;
pub mod merge;
pub mod oracle;
pub mod overlap;
pub mod pipeline;
pub mod text;

pub use error::{Error, Result};
pub use index::{FmIndex, IdRange, LexRange};
pub use merge::{MergePlan, MergeState, NextOneUf};
pub use overlap::{OverlapIterator, Schedule};
pub use text::{Alphabet, Concatenation, InputFormat, StringSet};

/// Read access to kept strings by 1-based id, as symbol codes.
pub trait StringSource {
    fn count(&self) -> usize;
    fn string(&self, id: usize) -> std::borrow::Cow<'_, [u8]>;
}

impl StringSource for StringSet {
    fn count(&self) -> usize {
        self.m()
    }

    fn string(&self, id: usize) -> std::borrow::Cow<'_, [u8]> {
        std::borrow::Cow::Borrowed(self.get(id))
    }
}

impl StringSource for FmIndex {
    fn count(&self) -> usize {
        self.m()
    }

    fn string(&self, id: usize) -> std::borrow::Cow<'_, [u8]> {
        std::borrow::Cow::Owned(self.extract(id))
    }
}

impl StringSource for [Vec<u8>] {
    fn count(&self) -> usize {
        self.len()
    }

    fn string(&self, id: usize) -> std::borrow::Cow<'_, [u8]> {
        std::borrow::Cow::Borrowed(&self[id - 1])
    }
}

/// Self-reported heap footprint, in bits.
pub trait SpaceUsage {
    fn size_in_bits(&self) -> usize;
}

impl SpaceUsage for Vec<u32> {
    fn size_in_bits(&self) -> usize {
        32 * self.capacity()
    }
}
