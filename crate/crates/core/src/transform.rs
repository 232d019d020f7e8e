//! Conversion between heuristic LCS and SCS results through a pattern, and
//! the iterative refinement loop built on it.
//!
//! The literal segments of the pattern act as anchors: every sequence is cut
//! at the leftmost in-order placement of the segments, the gaps between
//! anchors are solved independently, and the pieces are concatenated.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::lcs::{extend_raw, heuristic_lcs, heuristic_lcs_candidates, lcs_raw, DepositionParams, HeuristicParams, HeuristicResult};
use crate::metrics::PatternReport;
use crate::pals::{pals_lcs_from, pals_scs_from, MappingMode};
use crate::scs::{heuristic_scs, heuristic_scs_candidates, reduce_raw, DEFAULT_POOL_SIZE};
use crate::seq::{Dataset, Pattern, Sequence};

/// The pattern with the most literals, ties lexicographic.
fn anchor_pattern(ps: &[Pattern]) -> Option<&Pattern> {
    ps.iter()
        .min_by(|a, b| b.literal_count().cmp(&a.literal_count()).then_with(|| a.cmp(b)))
}

/// Cuts `s` at the leftmost in-order placement of `segments`. Returns the
/// `segments.len() + 1` gaps, or `None` if a segment cannot be placed.
fn cut<'a>(s: &'a [u8], segments: &[&[u8]]) -> Option<Vec<&'a [u8]>> {
    let mut gaps = Vec::with_capacity(segments.len() + 1);
    let mut cursor = 0;
    for seg in segments {
        let at = s[cursor..].windows(seg.len()).position(|w| w == *seg)? + cursor;
        gaps.push(&s[cursor..at]);
        cursor = at + seg.len();
    }
    gaps.push(&s[cursor..]);
    Some(gaps)
}

/// Gap slices per sequence, transposed to per-gap columns.
fn gap_columns<'a>(d: &'a Dataset, p: &Pattern) -> Option<(Vec<Vec<u8>>, Vec<Vec<&'a [u8]>>)> {
    let segments: Vec<&[u8]> = p.segments().collect();
    let per_seq: Vec<Vec<&[u8]>> = d
        .sequences()
        .iter()
        .map(|s| cut(s.as_bytes(), &segments))
        .collect::<Option<_>>()?;
    let columns = (0..=segments.len())
        .map(|g| per_seq.iter().map(|gaps| gaps[g]).collect())
        .collect();
    Some((segments.into_iter().map(<[u8]>::to_vec).collect(), columns))
}

fn transformed(value: Vec<u8>, from: &str, started: Instant) -> HeuristicResult {
    HeuristicResult {
        value: Sequence::anon(value),
        algorithm: format!("transform-from-{from}"),
        params: HeuristicParams::Transform { from: from.into() },
        elapsed: started.elapsed(),
    }
}

fn fallback(mut r: HeuristicResult, from: &str) -> HeuristicResult {
    r.algorithm = format!("transform-from-{from}-fallback");
    r
}

/// A common subsequence built from the pattern of `scs`: the gap LCSs
/// interleaved with the pattern's literal segments, then extended to a
/// maximal common subsequence.
pub fn scs_to_lcs(d: &Dataset, scs: &HeuristicResult) -> HeuristicResult {
    let started = Instant::now();
    let params = DepositionParams::default();
    let pattern = pals_scs_from(d, &scs.value, &params)
        .ok()
        .and_then(|out| anchor_pattern(&out.patterns).cloned());
    let Some((segments, columns)) = pattern.as_ref().and_then(|p| gap_columns(d, p)) else {
        return fallback(heuristic_lcs(d, &params), "scs");
    };
    let symbols = d.alphabet().symbols();
    let mut out = Vec::new();
    for (g, column) in columns.iter().enumerate() {
        out.extend(lcs_raw(column, symbols, &params));
        if let Some(seg) = segments.get(g) {
            out.extend_from_slice(seg);
        }
    }
    let out = extend_raw(&d.views(), symbols, &out);
    debug_assert!(d.is_common_subsequence(&out));
    transformed(out, "scs", started)
}

/// A common supersequence built from the pattern of `lcs`: the gap SCSs
/// interleaved with the pattern's literal segments, then reduced.
pub fn lcs_to_scs(d: &Dataset, lcs: &HeuristicResult) -> HeuristicResult {
    lcs_to_scs_with(d, lcs, DEFAULT_POOL_SIZE, 0)
}

pub fn lcs_to_scs_with(d: &Dataset, lcs: &HeuristicResult, pool_size: usize, seed: u64) -> HeuristicResult {
    let started = Instant::now();
    let pattern = pals_lcs_from(d, &lcs.value, MappingMode::Aligned)
        .ok()
        .and_then(|out| anchor_pattern(&out.patterns).cloned());
    let Some((segments, columns)) = pattern.as_ref().and_then(|p| gap_columns(d, p)) else {
        return fallback(heuristic_scs(d, pool_size, seed), "lcs");
    };
    let mut out = Vec::new();
    for (g, column) in columns.iter().enumerate() {
        if column.iter().any(|c| !c.is_empty()) {
            let gap = Dataset::with_alphabet(d.alphabet().clone(), column).expect("gaps use the dataset alphabet");
            out.extend_from_slice(heuristic_scs(&gap, pool_size, seed).value.as_bytes());
        }
        if let Some(seg) = segments.get(g) {
            out.extend_from_slice(seg);
        }
    }
    let out = reduce_raw(&d.views(), &out);
    debug_assert!(d.is_common_supersequence(&out));
    transformed(out, "lcs", started)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub lcs_len: usize,
    pub scs_len: usize,
    #[serde(with = "crate::metrics::ls_serde")]
    pub ls: f64,
    pub improved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementState {
    pub best_lcs: HeuristicResult,
    pub best_scs: HeuristicResult,
    pub best_patterns: PatternReport,
    /// Rounds run.
    pub round: usize,
    /// Distinct initial LCS candidates, in seed order.
    pub lcs_candidates: Vec<Sequence>,
    pub scs_candidates: Vec<Sequence>,
    pub history: Vec<RoundRecord>,
}

fn patterns_for(d: &Dataset, lcs: &HeuristicResult, scs: &HeuristicResult) -> [PatternReport; 2] {
    let from_lcs = pals_lcs_from(d, &lcs.value, MappingMode::Aligned).expect("valid LCS");
    let from_scs = pals_scs_from(d, &scs.value, &DepositionParams::default()).expect("valid SCS");
    [
        from_lcs.report("pals-lcs", d).without_timings(),
        from_scs.report("pals-scs", d).without_timings(),
    ]
}

fn better_patterns(new: &PatternReport, cur: &PatternReport) -> bool {
    new.ls < cur.ls && new.sensitivity >= cur.sensitivity
}

/// Alternates both transforms on the current best LCS and SCS, accepting
/// strict improvements only, until a round changes nothing or `max_rounds`
/// rounds have run.
pub fn refine(d: &Dataset, max_rounds: usize, candidates: usize, seed: u64) -> RefinementState {
    let candidates = candidates.max(1);
    let lcs_all = heuristic_lcs_candidates(d, &DepositionParams::default().with_seed(seed), candidates);
    let scs_all = heuristic_scs_candidates(d, DEFAULT_POOL_SIZE, seed, candidates);
    let best_lcs = lcs_all
        .iter()
        .min_by(|a, b| b.len().cmp(&a.len()))
        .cloned()
        .expect("at least one candidate");
    let best_scs = scs_all
        .iter()
        .min_by_key(|r| r.len())
        .cloned()
        .expect("at least one candidate");
    let [a, b] = patterns_for(d, &best_lcs, &best_scs);
    let best_patterns = if better_patterns(&b, &a) { b } else { a };

    let mut state = RefinementState {
        lcs_candidates: lcs_all.into_iter().map(|r| r.value).collect(),
        scs_candidates: scs_all.into_iter().map(|r| r.value).collect(),
        best_lcs,
        best_scs,
        best_patterns,
        round: 0,
        history: Vec::new(),
    };
    for round in 1..=max_rounds.max(1) {
        state.round = round;
        let new_lcs = scs_to_lcs(d, &state.best_scs);
        let new_scs = lcs_to_scs_with(d, &state.best_lcs, DEFAULT_POOL_SIZE, seed);
        let mut improved = false;
        if new_lcs.len() > state.best_lcs.len() {
            state.best_lcs = new_lcs;
            improved = true;
        }
        if new_scs.len() < state.best_scs.len() {
            state.best_scs = new_scs;
            improved = true;
        }
        for report in patterns_for(d, &state.best_lcs, &state.best_scs) {
            if better_patterns(&report, &state.best_patterns) {
                state.best_patterns = report;
                improved = true;
            }
        }
        state.history.push(RoundRecord {
            round,
            lcs_len: state.best_lcs.len(),
            scs_len: state.best_scs.len(),
            ls: state.best_patterns.ls,
            improved,
        });
        if !improved {
            break;
        }
    }
    state
}
