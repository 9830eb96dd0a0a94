//! Brute-force reference implementations for testing.
//!
//! Nothing here calls into the index, overlap, merge or assembly code.
//! Strings are code sequences where 0 is the separator; ids are 1-based.

use std::collections::BTreeSet;

const SEP: u8 = 0;
/// Stand-in for "end of text" when collecting right contexts.
const END: u16 = 256;

/// Suffix array, BWT, and pattern ranges by direct comparison and scanning.
/// Ranges are 1-based inclusive `(lo, hi)`; `None` means no occurrence.
#[derive(Debug, Clone)]
pub struct NaiveIndex {
    text: Vec<u8>,
    sa: Vec<usize>,
    rank: Vec<usize>,
}

impl NaiveIndex {
    pub fn new(text: &[u8]) -> Self {
        let mut sa: Vec<usize> = (0..text.len()).collect();
        sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
        let mut rank = vec![0; text.len() + 1];
        for (r, &p) in sa.iter().enumerate() {
            rank[p] = r + 1;
        }
        NaiveIndex {
            text: text.to_vec(),
            sa,
            rank,
        }
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn suffix_array(&self) -> &[usize] {
        &self.sa
    }

    pub fn bwt(&self) -> Vec<u8> {
        let n = self.text.len();
        self.sa.iter().map(|&p| self.text[(p + n - 1) % n]).collect()
    }

    /// 1-based rank of the suffix starting at `pos`.
    pub fn rank_of(&self, pos: usize) -> usize {
        self.rank[pos]
    }

    /// Ranks of the positions where `pattern` occurs, reading the text as a
    /// circle (position 0 follows the last one), as the BWT does.
    /// Linear and circular occurrences differ only for patterns containing
    /// two adjacent separators.
    pub fn range_of(&self, pattern: &[u8]) -> Option<(usize, usize)> {
        let n = self.len();
        let hits: Vec<usize> = (0..n)
            .filter(|&p| pattern.iter().enumerate().all(|(k, &c)| self.text[(p + k) % n] == c))
            .map(|p| self.rank[p])
            .collect();
        let (lo, hi) = (*hits.iter().min()?, *hits.iter().max()?);
        assert_eq!(hi - lo + 1, hits.len(), "occurrences of {pattern:?} are not contiguous");
        Some((lo, hi))
    }

    /// Ranks of positions `p` holding `c` whose circular successor ranks
    /// within `[lo, hi]`.
    pub fn left_extend(&self, lo: usize, hi: usize, c: u8) -> Option<(usize, usize)> {
        let n = self.len();
        let hits: Vec<usize> = (0..n)
            .filter(|&p| {
                let r = self.rank[(p + 1) % n];
                self.text[p] == c && lo <= r && r <= hi
            })
            .map(|p| self.rank[p])
            .collect();
        let (a, b) = (*hits.iter().min()?, *hits.iter().max()?);
        assert_eq!(b - a + 1, hits.len(), "extension of [{lo},{hi}] by {c} is not contiguous");
        Some((a, b))
    }

    /// Drops the first symbol of every suffix in `[lo, hi]` and returns the
    /// smallest interval grouping the results under their longest common
    /// prefix (a single rank when `lo == hi`).
    pub fn suffix_link(&self, lo: usize, hi: usize) -> (usize, usize) {
        let shifted: Vec<usize> = (lo..=hi)
            .map(|r| {
                let p = self.sa[r - 1];
                assert!(p + 1 < self.len(), "rank {r} holds the last suffix");
                self.rank[p + 1]
            })
            .collect();
        let a = *shifted.iter().min().unwrap();
        let b = *shifted.iter().max().unwrap();
        if a == b {
            return (a, a);
        }
        let sa = &self.text[self.sa[a - 1]..];
        let sb = &self.text[self.sa[b - 1]..];
        let l = sa.iter().zip(sb).take_while(|(x, y)| x == y).count();
        let prefix = &sa[..l];
        self.range_of(prefix).unwrap()
    }
}

/// Symbols (or end of text) seen right after occurrences of `alpha`.
fn right_contexts(text: &[u8], alpha: &[u8]) -> BTreeSet<u16> {
    let mut ctx = BTreeSet::new();
    if alpha.len() > text.len() {
        return ctx;
    }
    for p in 0..=text.len() - alpha.len() {
        if &text[p..p + alpha.len()] == alpha {
            ctx.insert(text.get(p + alpha.len()).map_or(END, |&c| c as u16));
        }
    }
    ctx
}

/// `alpha` occurs followed by at least two distinct continuations, where
/// the end of the text counts as one.
pub fn is_right_maximal(text: &[u8], alpha: &[u8]) -> bool {
    right_contexts(text, alpha).len() >= 2
}

/// `$s_1$s_2$…$s_m$`.
pub fn concatenate(strings: &[Vec<u8>]) -> Vec<u8> {
    let mut text = vec![SEP];
    for s in strings {
        text.extend_from_slice(s);
        text.push(SEP);
    }
    text
}

fn contains(hay: &[u8], needle: &[u8]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

/// Removes empty strings, duplicates, and strings occurring inside another;
/// returns the rest sorted.
pub fn naive_preprocess(strings: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let distinct: BTreeSet<&Vec<u8>> = strings.iter().filter(|s| !s.is_empty()).collect();
    distinct
        .iter()
        .filter(|s| {
            !distinct
                .iter()
                .any(|t| t.len() > s.len() && contains(t, s))
        })
        .map(|s| (*s).clone())
        .collect()
}

/// Longest suffix of `a` equal to a prefix of `b`, shorter than both.
pub fn overlap(a: &[u8], b: &[u8]) -> usize {
    let max = a.len().min(b.len()).saturating_sub(1);
    (0..=max).rev().find(|&k| a[a.len() - k..] == b[..k]).unwrap_or(0)
}

/// Pairwise overlaps, 1-based on both axes.
#[derive(Debug, Clone)]
pub struct OverlapTable {
    m: usize,
    ov: Vec<usize>,
}

impl OverlapTable {
    pub fn new(strings: &[Vec<u8>]) -> Self {
        let m = strings.len();
        let mut ov = vec![0; (m + 1) * (m + 1)];
        for i in 1..=m {
            for j in 1..=m {
                ov[i * (m + 1) + j] = overlap(&strings[i - 1], &strings[j - 1]);
            }
        }
        OverlapTable { m, ov }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.ov[i * (self.m + 1) + j]
    }
}

/// Chain bookkeeping by pointer walking.
struct Chains {
    succ: Vec<usize>,
    pred: Vec<usize>,
}

impl Chains {
    fn new(m: usize) -> Self {
        Chains {
            succ: vec![0; m + 1],
            pred: vec![0; m + 1],
        }
    }

    /// `i -> j` is allowed: `i` has no successor, `j` no predecessor, and
    /// following successors from `j` never reaches `i`.
    fn valid(&self, i: usize, j: usize) -> bool {
        if self.succ[i] != 0 || self.pred[j] != 0 {
            return false;
        }
        let mut k = j;
        let mut steps = 0;
        loop {
            if k == i {
                return false;
            }
            k = self.succ[k];
            if k == 0 {
                return true;
            }
            steps += 1;
            assert!(steps <= self.succ.len(), "successor pointers form a cycle");
        }
    }

    fn link(&mut self, i: usize, j: usize) {
        self.succ[i] = j;
        self.pred[j] = i;
    }
}

/// Greedy merges `(left, right, overlap)` in the order the compact engine
/// makes them, for a preprocessed (distinct, containment-free, sorted) set.
pub fn naive_greedy(strings: &[Vec<u8>]) -> Vec<(usize, usize, usize)> {
    let m = strings.len();
    let text = concatenate(strings);
    let init_d: Vec<usize> = strings
        .iter()
        .map(|s| {
            (1..s.len())
                .take_while(|&k| is_right_maximal(&text, &s[s.len() - k..]))
                .last()
                .unwrap_or(0)
        })
        .collect();
    let mut order: Vec<usize> = (1..=m).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(init_d[i - 1]), i));

    let mut chains = Chains::new(m);
    let mut edges = Vec::new();
    let max_d = init_d.iter().copied().max().unwrap_or(0);
    for d in (0..=max_d).rev() {
        for &i in &order {
            if edges.len() + 1 >= m {
                return edges;
            }
            if init_d[i - 1] < d || chains.succ[i] != 0 {
                continue;
            }
            let s = &strings[i - 1];
            let suffix = &s[s.len() - d..];
            let pick = (1..=m)
                .filter(|&j| strings[j - 1].starts_with(suffix))
                .find(|&j| chains.valid(i, j));
            if let Some(j) = pick {
                chains.link(i, j);
                edges.push((i, j, d));
            }
        }
    }
    edges
}

/// Spells out merges from [`naive_greedy`] (or any chain-forming edges).
pub fn spell(strings: &[Vec<u8>], edges: &[(usize, usize, usize)]) -> Vec<u8> {
    let m = strings.len();
    let mut succ = vec![(0, 0); m + 1];
    let mut has_pred = vec![false; m + 1];
    for &(i, j, d) in edges {
        succ[i] = (j, d);
        has_pred[j] = true;
    }
    let mut out = Vec::new();
    let Some(mut k) = (1..=m).find(|&k| !has_pred[k]) else {
        return out;
    };
    out.extend_from_slice(&strings[k - 1]);
    while succ[k].0 != 0 {
        let (j, d) = succ[k];
        out.extend_from_slice(&strings[j - 1][d..]);
        k = j;
    }
    out
}

/// Replays `edges` and reports the first one whose overlap is below the best
/// overlap available among valid pairs at that moment.
pub fn check_dominance(
    table: &OverlapTable,
    edges: &[(usize, usize, usize)],
) -> Result<(), String> {
    let m = table.m();
    let mut chains = Chains::new(m);
    for (step, &(i, j, d)) in edges.iter().enumerate() {
        if table.get(i, j) < d {
            return Err(format!("edge {i}->{j} claims overlap {d} > {}", table.get(i, j)));
        }
        if !chains.valid(i, j) {
            return Err(format!("edge {i}->{j} at step {step} is not valid"));
        }
        let mut best = 0;
        for a in 1..=m {
            for b in 1..=m {
                if a != b && table.get(a, b) > best && chains.valid(a, b) {
                    best = table.get(a, b);
                }
            }
        }
        if best != d {
            return Err(format!(
                "step {step}: edge {i}->{j} has overlap {d}, best available {best}"
            ));
        }
        chains.link(i, j);
    }
    Ok(())
}

/// Length of a shortest common superstring by trying every order.
/// Refuses sets with more than 8 strings.
pub fn exhaustive_optimal(strings: &[Vec<u8>]) -> Option<usize> {
    let set = naive_preprocess(strings);
    let m = set.len();
    if m > 8 {
        return None;
    }
    if m == 0 {
        return Some(0);
    }
    let table = OverlapTable::new(&set);
    let total: usize = set.iter().map(Vec::len).sum();

    fn best_overlap(table: &OverlapTable, last: usize, used: &mut [bool], left: usize) -> usize {
        if left == 0 {
            return 0;
        }
        let mut best = 0;
        for j in 1..used.len() {
            if !used[j] {
                used[j] = true;
                let gain = table.get(last, j) + best_overlap(table, j, used, left - 1);
                used[j] = false;
                best = best.max(gain);
            }
        }
        best
    }

    let mut used = vec![false; m + 1];
    let mut best = 0;
    for first in 1..=m {
        used[first] = true;
        best = best.max(best_overlap(&table, first, &mut used, m - 1));
        used[first] = false;
    }
    Some(total - best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &[&[u8]]) -> Vec<Vec<u8>> {
        x.iter().map(|v| v.to_vec()).collect()
    }

    #[test]
    fn naive_index_examples() {
        let idx = NaiveIndex::new(&[0, 1, 1, 2, 0, 1, 2, 2, 0]);
        assert_eq!(idx.suffix_array(), &[8, 0, 4, 1, 2, 5, 7, 3, 6]);
        assert_eq!(idx.bwt(), vec![2, 0, 2, 0, 1, 0, 2, 1, 1]);
        assert_eq!(idx.range_of(&[1]), Some((4, 6)));
        assert_eq!(idx.range_of(&[1, 2]), Some((5, 6)));
        assert_eq!(idx.range_of(&[2, 1]), None);
        assert_eq!(idx.left_extend(7, 9, 1), Some((5, 6)));
        assert_eq!(idx.suffix_link(5, 6), (7, 9));
        // "$$" exists only across the wrap-around
        assert_eq!(idx.range_of(&[0, 0]), Some((1, 1)));
        assert_eq!(idx.left_extend(2, 3, 0), Some((1, 1)));
        assert_eq!(idx.left_extend(1, 9, 0), Some((1, 3)));
        assert_eq!(NaiveIndex::new(&[0]).suffix_array(), &[0]);
        assert_eq!(NaiveIndex::new(&[0, 1, 0]).bwt(), vec![1, 0, 0]);
    }

    #[test]
    fn right_maximality_by_scan() {
        let text = [0, 1, 1, 2, 0, 1, 2, 2, 0];
        assert!(is_right_maximal(&text, &[1]));
        assert!(is_right_maximal(&text, &[1, 2]));
        assert!(!is_right_maximal(&text, &[1, 1]));
        // a single occurrence at the very end is still one context
        assert!(!is_right_maximal(&[1, 2], &[2]));
        assert!(is_right_maximal(&[2, 2], &[2]));
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(naive_greedy(&s(&[&[1, 1, 2], &[1, 2, 2]])), vec![(1, 2, 2)]);
        assert_eq!(naive_greedy(&s(&[&[1, 2], &[2, 1]])), vec![(1, 2, 1)]);
        assert_eq!(naive_greedy(&s(&[&[1, 1], &[2, 2]])), vec![(1, 2, 0)]);
        let set = s(&[&[1, 2], &[2, 1]]);
        assert_eq!(spell(&set, &naive_greedy(&set)), vec![1, 2, 1]);
    }

    #[test]
    fn preprocessing_and_overlaps() {
        assert_eq!(naive_preprocess(&s(&[b"ab", b"b", b"ab", b""])), s(&[b"ab"]));
        assert_eq!(naive_preprocess(&s(&[b"bcd", b"abc"])), s(&[b"abc", b"bcd"]));
        assert_eq!(overlap(b"abc", b"bcd"), 2);
        assert_eq!(overlap(b"aa", b"aa"), 1);
        assert_eq!(overlap(b"ab", b"cd"), 0);
    }

    #[test]
    fn exhaustive_examples() {
        assert_eq!(exhaustive_optimal(&s(&[b"ab", b"ba"])), Some(3));
        assert_eq!(exhaustive_optimal(&s(&[b"abc"])), Some(3));
        assert_eq!(exhaustive_optimal(&s(&[b"ab", b"bc", b"cd"])), Some(4));
        assert_eq!(exhaustive_optimal(&[]), Some(0));
        let nine: Vec<Vec<u8>> = (0..9u8).map(|k| vec![k + 1]).collect();
        assert_eq!(exhaustive_optimal(&nine), None);
    }

    #[test]
    fn dominance_flags_a_weak_edge() {
        let set = s(&[b"aab", b"abb", b"bbc"]);
        let table = OverlapTable::new(&set);
        assert!(check_dominance(&table, &[(1, 2, 2), (2, 3, 2)]).is_ok());
        assert!(check_dominance(&table, &[(1, 3, 0)]).is_err());
    }
}
