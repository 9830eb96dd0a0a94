//! Merge bookkeeping for the greedy path: which strings may still be the
//! left or right side of a merge, chain endpoints for cycle prevention, and
//! a clear-only successor structure over right-availability.
//!
//! String ids are 1-based; index 0 of every array is unused (or a sentinel).

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::index::IdRange;
use crate::SpaceUsage;

/// Successor queries on a bit array that starts all ones and only clears.
///
/// Positions are `0..=m`; position 0 is a permanently cleared sentinel.
/// Each union-find group is one set position (or the sentinel) together
/// with the run of cleared positions right after it, and `next` at the
/// group root is the first set position after that run (`m + 1` if none).
#[derive(Debug, Clone)]
pub struct NextOneUf {
    parent: Vec<u32>,
    size: Vec<u32>,
    next: Vec<u32>,
    available: Vec<u64>,
    m: usize,
}

impl NextOneUf {
    pub fn new(m: usize) -> Self {
        assert!(m < u32::MAX as usize - 1);
        let mut available = vec![!0u64; (m + 1).div_ceil(64)];
        available[0] &= !1;
        NextOneUf {
            parent: (0..=m as u32).collect(),
            size: vec![1; m + 1],
            next: (1..=m as u32 + 1).collect(),
            available,
            m,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn is_available(&self, k: usize) -> bool {
        k >= 1 && k <= self.m && (self.available[k / 64] >> (k % 64)) & 1 == 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        let (big, small) = if self.size[a] >= self.size[b] { (a, b) } else { (b, a) };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        big
    }

    /// Smallest `j > k` that is still set, or `m + 1`.
    pub fn next_one(&mut self, k: usize) -> usize {
        assert!(k <= self.m, "position {k} outside 0..={}", self.m);
        let root = self.find(k);
        self.next[root] as usize
    }

    /// Clears position `k`. Clearing twice is a contract violation.
    pub fn clear(&mut self, k: usize) {
        assert!(self.is_available(k), "position {k} is already cleared");
        self.available[k / 64] &= !(1 << (k % 64));
        let root = self.find(k);
        let q = self.next[root];
        self.union(k, k - 1);
        if k < self.m && !self.is_available(k + 1) {
            self.union(k, k + 1);
        }
        let root = self.find(k);
        self.next[root] = q;
    }
}

impl SpaceUsage for NextOneUf {
    fn size_in_bits(&self) -> usize {
        32 * (self.parent.capacity() + self.size.capacity() + self.next.capacity())
            + 64 * self.available.capacity()
            + 64
    }
}

/// Result of a single merge attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeOutcome {
    Merged { right: usize },
    /// No right-available string in the candidate interval.
    NoCandidate,
    /// The only right-available candidate would close a cycle.
    Cycle,
}

#[derive(Debug, Clone)]
pub struct MergeState {
    m: usize,
    left_available: Vec<u64>,
    right: NextOneUf,
    left_end: Vec<u32>,
    right_end: Vec<u32>,
    successor: Vec<u32>,
    overlap: Vec<u32>,
    order: Vec<u32>,
}

impl MergeState {
    pub fn new(m: usize) -> Self {
        let mut left_available = vec![!0u64; (m + 1).div_ceil(64)];
        left_available[0] &= !1;
        let ids: Vec<u32> = (0..=m as u32).collect();
        MergeState {
            m,
            left_available,
            right: NextOneUf::new(m),
            left_end: ids.clone(),
            right_end: ids,
            successor: vec![0; m + 1],
            overlap: vec![0; m + 1],
            order: Vec::with_capacity(m.saturating_sub(1)),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn merges(&self) -> usize {
        self.order.len()
    }

    /// All `m - 1` edges are in place (trivially true for `m <= 1`).
    pub fn is_complete(&self) -> bool {
        self.merges() + 1 >= self.m
    }

    #[inline]
    pub fn is_left_available(&self, i: usize) -> bool {
        i >= 1 && i <= self.m && (self.left_available[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn is_right_available(&self, j: usize) -> bool {
        self.right.is_available(j)
    }

    pub fn left_end(&self, k: usize) -> usize {
        self.left_end[k] as usize
    }

    pub fn right_end(&self, k: usize) -> usize {
        self.right_end[k] as usize
    }

    pub fn next_one(&mut self, k: usize) -> usize {
        self.right.next_one(k)
    }

    pub fn clear_right_available(&mut self, k: usize) {
        self.right.clear(k);
    }

    /// Tries to add an edge `i -> j` for some right-available `j` in `ids`.
    ///
    /// At most two candidates are inspected: at most one right-available
    /// string can be the left end of `i`'s own chain.
    pub fn try_merge(&mut self, i: usize, ids: IdRange, d: usize) -> MergeOutcome {
        assert!(self.is_left_available(i), "string {i} already has a successor");
        if ids.is_empty() {
            return MergeOutcome::NoCandidate;
        }
        assert!(ids.first >= 1 && ids.last <= self.m);
        let j1 = self.right.next_one(ids.first - 1);
        if j1 > ids.last {
            return MergeOutcome::NoCandidate;
        }
        let j = if self.closes_cycle(i, j1) {
            let j2 = self.right.next_one(j1);
            if j2 > ids.last {
                return MergeOutcome::Cycle;
            }
            debug_assert!(!self.closes_cycle(i, j2));
            j2
        } else {
            j1
        };
        self.add_edge(i, j, d);
        MergeOutcome::Merged { right: j }
    }

    /// `i` is a right endpoint, `j` a left endpoint; `i -> j` closes a cycle
    /// iff they bound the same chain.
    #[inline]
    fn closes_cycle(&self, i: usize, j: usize) -> bool {
        let by_right = self.right_end[j] as usize == i;
        debug_assert_eq!(by_right, self.left_end[i] as usize == j);
        by_right
    }

    fn add_edge(&mut self, i: usize, j: usize, d: usize) {
        self.successor[i] = j as u32;
        self.overlap[i] = d as u32;
        self.left_available[i / 64] &= !(1 << (i % 64));
        self.right.clear(j);
        let le = self.left_end[i];
        let re = self.right_end[j];
        self.left_end[re as usize] = le;
        self.right_end[le as usize] = re;
        self.order.push(i as u32);
    }

    /// Tab-separated table: k, leftavailable, rightavailable, leftend,
    /// rightend, successor, overlaplength.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k\tleftavailable\trightavailable\tleftend\trightend\tsuccessor\toverlaplength")?;
        for k in 1..=self.m {
            writeln!(
                out,
                "{k}\t{}\t{}\t{}\t{}\t{}\t{}",
                self.is_left_available(k) as u8,
                self.is_right_available(k) as u8,
                self.left_end[k],
                self.right_end[k],
                self.successor[k],
                self.overlap[k]
            )?;
        }
        Ok(())
    }

    pub fn into_plan(self) -> MergePlan {
        MergePlan {
            m: self.m,
            successor: self.successor,
            overlap: self.overlap,
            order: self.order,
        }
    }
}

impl SpaceUsage for MergeState {
    fn size_in_bits(&self) -> usize {
        64 * self.left_available.capacity()
            + self.right.size_in_bits()
            + self.left_end.size_in_bits()
            + self.right_end.size_in_bits()
            + self.successor.size_in_bits()
            + self.overlap.size_in_bits()
            + self.order.size_in_bits()
            + 64
    }
}

/// The recorded greedy edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergePlan {
    m: usize,
    successor: Vec<u32>,
    overlap: Vec<u32>,
    order: Vec<u32>,
}

/// Directed merge edge `left -> right` with its overlap length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub left: usize,
    pub right: usize,
    pub overlap: usize,
}

impl MergePlan {
    /// Builds a plan from edges listed in the order they were accepted.
    pub fn from_edges(m: usize, edges: &[Edge]) -> Self {
        let mut successor = vec![0; m + 1];
        let mut overlap = vec![0; m + 1];
        let mut order = Vec::with_capacity(edges.len());
        for e in edges {
            successor[e.left] = e.right as u32;
            overlap[e.left] = e.overlap as u32;
            order.push(e.left as u32);
        }
        MergePlan {
            m,
            successor,
            overlap,
            order,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn successor(&self, i: usize) -> Option<usize> {
        match self.successor[i] {
            0 => None,
            j => Some(j as usize),
        }
    }

    pub fn overlap(&self, i: usize) -> usize {
        self.overlap[i] as usize
    }

    /// Edges in the order they were accepted.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.order.iter().map(|&i| Edge {
            left: i as usize,
            right: self.successor[i as usize] as usize,
            overlap: self.overlap[i as usize] as usize,
        })
    }

    pub fn total_overlap(&self) -> usize {
        self.order.iter().map(|&i| self.overlap[i as usize] as usize).sum()
    }

    /// The string that is nobody's successor. `None` for an empty plan or
    /// when the edges do not form a single path.
    pub fn head(&self) -> Option<usize> {
        let mut has_pred = vec![false; self.m + 1];
        for &j in &self.successor[1..] {
            if j != 0 {
                has_pred[j as usize] = true;
            }
        }
        let mut heads = (1..=self.m).filter(|&k| !has_pred[k]);
        let head = heads.next()?;
        heads.next().is_none().then_some(head)
    }

    /// Ids in path order, validating that the edges form one simple path
    /// through all `m` strings.
    pub fn path(&self) -> Result<Vec<usize>> {
        if self.m == 0 {
            return Ok(Vec::new());
        }
        let bad = |msg: String| Error::Internal {
            stage: "merge plan",
            msg,
        };
        if self.order.len() + 1 != self.m {
            return Err(bad(format!(
                "{} edges recorded for {} strings",
                self.order.len(),
                self.m
            )));
        }
        let head = self
            .head()
            .ok_or_else(|| bad("edges do not form a single path".into()))?;
        let mut seen = vec![false; self.m + 1];
        let mut path = Vec::with_capacity(self.m);
        let mut cur = Some(head);
        while let Some(k) = cur {
            if seen[k] {
                return Err(bad(format!("cycle through string {k}")));
            }
            seen[k] = true;
            path.push(k);
            cur = self.successor(k);
        }
        if path.len() != self.m {
            return Err(bad(format!("path covers {} of {} strings", path.len(), self.m)));
        }
        Ok(path)
    }
}

impl SpaceUsage for MergePlan {
    fn size_in_bits(&self) -> usize {
        self.successor.size_in_bits() + self.overlap.size_in_bits() + self.order.size_in_bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{seq::SliceRandom, Rng, SeedableRng};

    fn ids(first: usize, last: usize) -> IdRange {
        IdRange { first, last }
    }

    #[test]
    fn next_one_examples() {
        let mut uf = NextOneUf::new(5);
        assert_eq!(uf.next_one(2), 3);
        uf.clear(3);
        assert_eq!(uf.next_one(2), 4);
        assert_eq!(uf.next_one(3), 4);
        uf.clear(4);
        assert_eq!((uf.next_one(2), uf.next_one(3), uf.next_one(4)), (5, 5, 5));

        let mut uf = NextOneUf::new(5);
        uf.clear(1);
        assert_eq!(uf.next_one(0), 2);

        let mut uf = NextOneUf::new(1);
        uf.clear(1);
        assert_eq!(uf.next_one(0), 2);
    }

    #[test]
    #[should_panic(expected = "already cleared")]
    fn double_clear_panics() {
        let mut uf = NextOneUf::new(3);
        uf.clear(2);
        uf.clear(2);
    }

    #[test]
    fn groups_are_set_position_plus_following_zero_run() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m = rng.gen_range(1..60);
            let mut order: Vec<usize> = (1..=m).collect();
            order.shuffle(&mut rng);
            let mut uf = NextOneUf::new(m);
            for &k in order.iter().take(rng.gen_range(0..=m)) {
                uf.clear(k);
            }
            // Expected group head of each position: the nearest set position
            // at or before it (0 for the sentinel run).
            let mut head = 0;
            let mut heads = vec![0; m + 1];
            for (k, h) in heads.iter_mut().enumerate().skip(1) {
                if uf.is_available(k) {
                    head = k;
                }
                *h = head;
            }
            for a in 0..=m {
                for b in 0..=m {
                    assert_eq!(uf.find(a) == uf.find(b), heads[a] == heads[b]);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn next_one_matches_linear_scan(m in 1usize..200, seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut order: Vec<usize> = (1..=m).collect();
            order.shuffle(&mut rng);
            let mut bits = vec![true; m + 2];
            bits[0] = false;
            bits[m + 1] = false;
            let mut uf = NextOneUf::new(m);
            for &k in &order {
                uf.clear(k);
                bits[k] = false;
                for q in 0..=m {
                    let want = (q + 1..=m).find(|&j| bits[j]).unwrap_or(m + 1);
                    prop_assert_eq!(uf.next_one(q), want);
                }
            }
        }
    }

    #[test]
    fn try_merge_examples() {
        let mut st = MergeState::new(2);
        assert_eq!(st.try_merge(1, ids(2, 2), 2), MergeOutcome::Merged { right: 2 });
        assert_eq!(st.left_end(2), 1);
        assert_eq!(st.right_end(1), 2);
        assert!(!st.is_left_available(1));
        assert!(!st.is_right_available(2));
        assert_eq!(st.try_merge(2, ids(1, 1), 1), MergeOutcome::Cycle);
        assert_eq!(st.merges(), 1);

        let mut st = MergeState::new(3);
        assert_eq!(st.try_merge(1, ids(1, 0), 0), MergeOutcome::NoCandidate);
    }

    #[test]
    fn self_merge_is_cycle_and_second_candidate_is_taken() {
        let mut st = MergeState::new(3);
        assert_eq!(st.try_merge(2, ids(2, 2), 1), MergeOutcome::Cycle);
        assert_eq!(st.try_merge(2, ids(2, 3), 1), MergeOutcome::Merged { right: 3 });
        // chain 2 -> 3; 3 -> 2 would close it, 3 -> 1 is fine
        assert_eq!(st.try_merge(3, ids(1, 3), 0), MergeOutcome::Merged { right: 1 });
        let plan = st.into_plan();
        assert_eq!(plan.path().unwrap(), vec![2, 3, 1]);
        assert_eq!(plan.head(), Some(2));
        assert_eq!(plan.total_overlap(), 1);
    }

    #[test]
    fn state_dump() {
        let mut st = MergeState::new(2);
        st.try_merge(1, ids(2, 2), 2);
        let mut out = Vec::new();
        st.write_tsv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "1\t0\t1\t1\t2\t2\t2");
        assert_eq!(lines[2], "2\t1\t0\t1\t2\t0\t0");
    }

    /// Walks every chain from its head; returns false on a cycle.
    fn chains_are_simple_paths(st: &MergeState) -> bool {
        let m = st.m();
        let mut has_pred = vec![false; m + 1];
        for k in 1..=m {
            if st.successor[k] != 0 {
                has_pred[st.successor[k] as usize] = true;
            }
        }
        let mut visited = 0;
        for h in (1..=m).filter(|&k| !has_pred[k]) {
            let mut cur = h;
            let mut steps = 0;
            loop {
                visited += 1;
                steps += 1;
                if steps > m {
                    return false;
                }
                // endpoint arrays agree at chain ends
                match st.successor[cur] {
                    0 => {
                        if st.right_end(h) != cur || st.left_end(cur) != h {
                            return false;
                        }
                        break;
                    }
                    j => cur = j as usize,
                }
            }
        }
        visited == m
    }

    #[test]
    fn random_merges_keep_paths_and_endpoints_consistent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let m = rng.gen_range(1..25);
            let mut st = MergeState::new(m);
            for _ in 0..200 {
                if st.is_complete() {
                    break;
                }
                let i = rng.gen_range(1..=m);
                if !st.is_left_available(i) {
                    continue;
                }
                let a = rng.gen_range(1..=m);
                let b = rng.gen_range(a..=m);
                // Brute force: first right-available j in [a,b] not closing a cycle.
                let want = (a..=b).find(|&j| {
                    st.is_right_available(j) && {
                        let mut cur = j;
                        while st.successor[cur] != 0 {
                            cur = st.successor[cur] as usize;
                        }
                        cur != i
                    }
                });
                let got = st.try_merge(i, ids(a, b), 0);
                match want {
                    Some(j) => assert_eq!(got, MergeOutcome::Merged { right: j }),
                    None => assert!(!matches!(got, MergeOutcome::Merged { .. })),
                }
                assert!(chains_are_simple_paths(&st));
            }
        }
    }
}
