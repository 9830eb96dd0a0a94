//! End-to-end run: preprocess, index, overlap sweep, assembly, verification.

use std::io::Write;
use std::time::Instant;

use log::{debug, info};
use serde::Serialize;

use crate::assemble::{build_superstring, verify_superstring};
use crate::error::{Error, Result};
use crate::index::FmIndex;
use crate::merge::{MergePlan, MergeState};
use crate::overlap::{init_iterators, run, RunReport, Schedule, TRACE_HEADER};
use crate::text::{preprocess, Alphabet, Concatenation, Origin, StringSet};
use crate::SpaceUsage;

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    /// Return the index in [`PipelineOutput::index`].
    pub keep_index: bool,
    /// Check that every input string occurs in the result.
    pub verify: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            keep_index: false,
            verify: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct PhaseSeconds {
    pub preprocess: f64,
    pub index: f64,
    pub init_iterators: f64,
    pub overlap: f64,
    pub assembly: f64,
    pub verify: f64,
}

impl PhaseSeconds {
    /// Iterator setup, the overlap sweep, and assembly.
    pub fn superstring_phase(&self) -> f64 {
        self.init_iterators + self.overlap + self.assembly
    }
}

/// Self-reported sizes of the structures live during the overlap sweep.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SpaceBreakdown {
    pub bwt: usize,
    pub c_array: usize,
    pub topology: usize,
    pub iterators: usize,
    pub merge_state: usize,
    pub string_ids: usize,
}

impl SpaceBreakdown {
    pub fn total(&self) -> usize {
        self.bwt + self.c_array + self.topology + self.iterators + self.merge_state + self.string_ids
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RunStats {
    pub stats_version: u32,
    pub input_strings: usize,
    pub input_chars: usize,
    pub empty: usize,
    pub duplicates: usize,
    pub contained: usize,
    pub m: usize,
    pub kept_chars: usize,
    pub text_length: usize,
    pub sigma: usize,
    pub merges: usize,
    pub attempts: usize,
    pub steps: usize,
    pub total_overlap: usize,
    pub superstring_length: usize,
    pub seconds: PhaseSeconds,
    pub bits: SpaceBreakdown,
    pub bits_total: usize,
    pub bits_per_input_char: f64,
}

#[derive(Debug)]
pub struct PipelineOutput {
    pub superstring: Vec<u8>,
    pub alphabet: Alphabet,
    /// Kept-string ids and origins; string bodies are dropped.
    pub set: StringSet,
    pub plan: MergePlan,
    pub stats: RunStats,
    pub index: Option<FmIndex>,
}

pub fn compute_superstring(strings: &[Vec<u8>], opts: &PipelineOptions) -> Result<PipelineOutput> {
    run_pipeline(strings, opts, None)
}

/// Like [`compute_superstring`], writing one TSV line per merge attempt to
/// `trace` if given.
pub fn run_pipeline(
    strings: &[Vec<u8>],
    opts: &PipelineOptions,
    mut trace: Option<&mut dyn Write>,
) -> Result<PipelineOutput> {
    let mut stats = RunStats {
        stats_version: 1,
        input_strings: strings.len(),
        input_chars: strings.iter().map(Vec::len).sum(),
        ..RunStats::default()
    };

    let t = Instant::now();
    let alphabet = Alphabet::from_strings(strings)?;
    let encoded: Vec<Vec<u8>> = strings.iter().map(|s| alphabet.encode(s)).collect();
    let (set, sa) = preprocess(&encoded, alphabet.sigma());
    drop(encoded);
    stats.seconds.preprocess = t.elapsed().as_secs_f64();
    for o in set.origins() {
        match o {
            Origin::Empty => stats.empty += 1,
            Origin::Duplicate(_) => stats.duplicates += 1,
            Origin::Contained(_) => stats.contained += 1,
            Origin::Kept(_) => {}
        }
    }
    stats.m = set.m();
    stats.kept_chars = set.n_chars();
    stats.sigma = alphabet.sigma();
    info!(
        "{} strings in, {} kept ({} duplicate, {} contained, {} empty)",
        stats.input_strings, stats.m, stats.duplicates, stats.contained, stats.empty
    );

    if let Some(w) = trace.as_deref_mut() {
        writeln!(w, "{TRACE_HEADER}")?;
    }

    if set.m() == 0 {
        return Ok(PipelineOutput {
            superstring: Vec::new(),
            alphabet,
            set,
            plan: MergePlan::from_edges(0, &[]),
            stats,
            index: None,
        });
    }

    let t = Instant::now();
    let concat = Concatenation::from_set(&set);
    let idx = match sa {
        Some(sa) => FmIndex::build_with_suffix_array(&concat, &sa),
        None => FmIndex::build(&concat),
    };
    drop(concat);
    stats.text_length = idx.len();
    stats.seconds.index = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let mut schedule = Schedule::new(init_iterators(&idx, &set));
    let set = set.into_skeleton();
    stats.seconds.init_iterators = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let mut state = MergeState::new(set.m());
    let sizes = idx.sizes();
    stats.bits = SpaceBreakdown {
        bwt: sizes.bwt,
        c_array: sizes.c_array,
        topology: sizes.topology,
        iterators: schedule.size_in_bits(),
        merge_state: state.size_in_bits(),
        string_ids: set_size_in_bits(&set),
    };
    let report: RunReport = run(&idx, &mut schedule, &mut state, |a| match trace.as_deref_mut() {
        Some(w) => a.write_tsv(w),
        None => Ok(()),
    })?;
    drop(schedule);
    if !state.is_complete() {
        return Err(Error::Internal {
            stage: "overlap iteration",
            msg: format!("{} of {} merges after all iterators retired", state.merges(), set.m() - 1),
        });
    }
    let plan = state.into_plan();
    stats.seconds.overlap = t.elapsed().as_secs_f64();
    stats.steps = report.steps;
    stats.attempts = report.attempts;
    stats.merges = report.merges;
    stats.total_overlap = plan.total_overlap();
    debug!("{report:?}");

    let t = Instant::now();
    let codes = build_superstring(&plan, &idx)?;
    let superstring = alphabet.decode(&codes);
    drop(codes);
    stats.seconds.assembly = t.elapsed().as_secs_f64();
    stats.superstring_length = superstring.len();
    if superstring.len() + stats.total_overlap != stats.kept_chars {
        return Err(Error::Internal {
            stage: "assembly",
            msg: format!(
                "length {} differs from {} kept characters minus {} overlap",
                superstring.len(),
                stats.kept_chars,
                stats.total_overlap
            ),
        });
    }

    if opts.verify {
        let t = Instant::now();
        let report = verify_superstring(&superstring, strings.iter().map(Vec::as_slice));
        stats.seconds.verify = t.elapsed().as_secs_f64();
        if !report.is_ok() {
            let ids: Vec<String> = report.missing.iter().take(10).map(|i| (i + 1).to_string()).collect();
            return Err(Error::Internal {
                stage: "verification",
                msg: format!("{} input strings missing, first: {}", report.missing.len(), ids.join(", ")),
            });
        }
    }

    stats.bits_total = stats.bits.total();
    stats.bits_per_input_char = stats.bits_total as f64 / stats.input_chars.max(1) as f64;
    Ok(PipelineOutput {
        superstring,
        alphabet,
        set,
        plan,
        stats,
        index: opts.keep_index.then_some(idx),
    })
}

fn set_size_in_bits(set: &StringSet) -> usize {
    8 * (std::mem::size_of_val(set.origins()) + std::mem::size_of::<usize>() * set.m())
}
