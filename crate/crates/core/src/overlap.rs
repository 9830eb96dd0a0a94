//! Enumerates prefix-suffix overlaps in decreasing length and feeds them to
//! the merge bookkeeper.
//!
//! Each kept string gets an iterator positioned at its longest
//! right-maximal proper suffix. Iterators are visited in decreasing current
//! depth (ties by `(init_depth desc, id asc)`); at each visit the separator
//! extension of the current suffix names the strings it prefixes, a merge
//! is attempted, and the iterator moves to the next shorter suffix through
//! a suffix link.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::index::{FmIndex, LexRange};
use crate::merge::{MergeOutcome, MergeState};
use crate::text::SEPARATOR;
use crate::{SpaceUsage, StringSource};

/// Position of one string's suffix walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverlapIterator {
    /// Kept-string id (1-based).
    pub id: u32,
    /// Range of the current suffix; `[1, N]` at depth 0.
    pub range: LexRange,
    pub depth: u32,
    pub init_depth: u32,
    pub retired: bool,
}

/// Iterators for every kept string, each at its longest right-maximal
/// proper suffix, in schedule order.
pub fn init_iterators<S: StringSource + ?Sized>(idx: &FmIndex, strings: &S) -> Vec<OverlapIterator> {
    let mut iters: Vec<OverlapIterator> = (1..=strings.count())
        .map(|id| {
            let s = strings.string(id);
            let mut range = idx.full_range();
            let mut depth = 0u32;
            for &c in s[1..].iter().rev() {
                let next = idx.left_extend(range, c);
                debug_assert!(!next.is_empty(), "suffix of an indexed string must occur");
                if !idx.is_right_maximal(next, range) {
                    break;
                }
                range = next;
                depth += 1;
            }
            OverlapIterator {
                id: id as u32,
                range,
                depth,
                init_depth: depth,
                retired: false,
            }
        })
        .collect();
    sort_schedule(&mut iters);
    iters
}

fn sort_schedule(iters: &mut [OverlapIterator]) {
    iters.sort_unstable_by(|a, b| b.init_depth.cmp(&a.init_depth).then(a.id.cmp(&b.id)));
}

/// Iterators in processing order.
#[derive(Debug, Clone)]
pub struct Schedule {
    iterators: Vec<OverlapIterator>,
}

impl Schedule {
    pub fn new(mut iterators: Vec<OverlapIterator>) -> Self {
        sort_schedule(&mut iterators);
        Schedule { iterators }
    }

    pub fn iterators(&self) -> &[OverlapIterator] {
        &self.iterators
    }

    pub fn max_depth(&self) -> Option<u32> {
        self.iterators.first().map(|it| it.init_depth)
    }

    /// Upper bound on processing steps: every iterator visited at each depth.
    pub fn step_budget(&self) -> usize {
        self.iterators.iter().map(|it| it.init_depth as usize + 1).sum()
    }
}

impl SpaceUsage for Schedule {
    fn size_in_bits(&self) -> usize {
        8 * std::mem::size_of::<OverlapIterator>() * self.iterators.capacity()
    }
}

/// One merge attempt, as written to the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attempt {
    pub left: usize,
    pub depth: usize,
    pub first: usize,
    pub last: usize,
    pub outcome: MergeOutcome,
}

impl Attempt {
    pub fn write_tsv<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        let decision = match self.outcome {
            MergeOutcome::Merged { right } => format!("merge:{right}"),
            MergeOutcome::NoCandidate => "none".to_string(),
            MergeOutcome::Cycle => "cycle".to_string(),
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            self.left, self.depth, self.first, self.last, decision
        )
    }
}

pub const TRACE_HEADER: &str = "i\td\tfirst\tlast\tdecision";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunReport {
    /// Iterator visits, including ones that only retire the iterator.
    pub steps: usize,
    pub attempts: usize,
    pub merges: usize,
    /// Peak number of simultaneously live iterators.
    pub peak_live: usize,
}

/// Drives the sweep until `m - 1` merges are recorded or every iterator is
/// retired. `on_attempt` sees every merge attempt in order.
pub fn run<F>(
    idx: &FmIndex,
    schedule: &mut Schedule,
    state: &mut MergeState,
    mut on_attempt: F,
) -> Result<RunReport>
where
    F: FnMut(&Attempt) -> io::Result<()>,
{
    let mut report = RunReport::default();
    if state.is_complete() || schedule.iterators.is_empty() {
        return Ok(report);
    }
    let budget = schedule.step_budget();
    let iters = &mut schedule.iterators;
    let max_depth = iters[0].init_depth;
    let mut live: Vec<u32> = Vec::new();
    let mut added = 0usize;

    for d in (0..=max_depth).rev() {
        while added < iters.len() && iters[added].init_depth == d {
            live.push(added as u32);
            added += 1;
        }
        report.peak_live = report.peak_live.max(live.len());

        let mut kept = 0;
        for r in 0..live.len() {
            let pos = live[r] as usize;
            let it = &mut iters[pos];
            debug_assert_eq!(it.depth, d);
            report.steps += 1;
            if report.steps > budget {
                return Err(Error::Internal {
                    stage: "overlap iteration",
                    msg: format!("step budget {budget} exceeded"),
                });
            }
            let i = it.id as usize;
            if !state.is_left_available(i) {
                it.retired = true;
                continue;
            }

            let ext = idx.left_extend(it.range, SEPARATOR);
            if !ext.is_empty() {
                let ids = idx.string_ids_from_separator_range(ext);
                let outcome = state.try_merge(i, ids, d as usize);
                report.attempts += 1;
                on_attempt(&Attempt {
                    left: i,
                    depth: d as usize,
                    first: ids.first,
                    last: ids.last,
                    outcome,
                })?;
                if let MergeOutcome::Merged { .. } = outcome {
                    report.merges += 1;
                    it.retired = true;
                    if state.is_complete() {
                        return Ok(report);
                    }
                    continue;
                }
            }

            if d == 0 {
                it.retired = true;
                continue;
            }
            it.range = idx.suffix_link(it.range);
            it.depth = d - 1;
            live[kept] = pos as u32;
            kept += 1;
        }
        live.truncate(kept);
    }
    Ok(report)
}
