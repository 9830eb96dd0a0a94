//! Spelling the merge path out as a superstring, and checking the result.

use std::cmp::Ordering;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::index::sais;
use crate::merge::MergePlan;
use crate::text::StringSet;
use crate::StringSource;

/// Concatenates the strings along the plan's path, each minus its overlap
/// with the previous one. Every claimed overlap is checked.
pub fn build_superstring<S: StringSource + ?Sized>(plan: &MergePlan, strings: &S) -> Result<Vec<u8>> {
    let path = plan.path()?;
    let mut out = Vec::new();
    let mut prev: Option<(usize, Vec<u8>)> = None;
    for &k in &path {
        let s = strings.string(k).into_owned();
        let skip = match &prev {
            None => 0,
            Some((p, ps)) => {
                let ov = plan.overlap(*p);
                if ov >= s.len() || ov >= ps.len() || ps[ps.len() - ov..] != s[..ov] {
                    return Err(Error::Assembly(format!(
                        "strings {p} and {k} do not overlap by {ov}"
                    )));
                }
                ov
            }
        };
        out.extend_from_slice(&s[skip..]);
        prev = Some((k, s));
    }
    Ok(out)
}

/// Outcome of checking that every input occurs in a candidate superstring.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: usize,
    /// 0-based positions (in the checked sequence) of strings not found.
    pub missing: Vec<usize>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Substring test for many patterns against one text via its suffix array.
pub struct SubstringChecker<'a> {
    text: &'a [u8],
    sa: Vec<u32>,
}

impl<'a> SubstringChecker<'a> {
    pub fn new(text: &'a [u8]) -> Self {
        SubstringChecker {
            text,
            sa: sais::suffix_array(text, 256),
        }
    }

    pub fn contains(&self, pattern: &[u8]) -> bool {
        if pattern.is_empty() {
            return true;
        }
        let cmp = |&p: &u32| {
            let suf = &self.text[p as usize..];
            let k = suf.len().min(pattern.len());
            match suf[..k].cmp(&pattern[..k]) {
                Ordering::Equal if suf.len() < pattern.len() => Ordering::Less,
                Ordering::Equal => Ordering::Equal,
                o => o,
            }
        };
        self.sa.binary_search_by(cmp).is_ok()
    }
}

/// Checks each of `strings` against `superstring` (same byte space).
pub fn verify_superstring<'s, I>(superstring: &[u8], strings: I) -> VerifyReport
where
    I: IntoIterator<Item = &'s [u8]>,
{
    let checker = SubstringChecker::new(superstring);
    let mut report = VerifyReport::default();
    for (i, s) in strings.into_iter().enumerate() {
        report.checked += 1;
        if !checker.contains(s) {
            report.missing.push(i);
        }
    }
    report
}

pub const PLAN_HEADER: &str = "left_original_id\tright_original_id\toverlap_length";

/// Writes accepted merges in order, with 1-based original input ids.
pub fn write_plan_tsv<W: Write + ?Sized>(plan: &MergePlan, set: &StringSet, out: &mut W) -> io::Result<()> {
    writeln!(out, "{PLAN_HEADER}")?;
    for e in plan.edges() {
        writeln!(
            out,
            "{}\t{}\t{}",
            set.representative(e.left) + 1,
            set.representative(e.right) + 1,
            e.overlap
        )?;
    }
    Ok(())
}
