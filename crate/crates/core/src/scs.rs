//! SCS heuristics: the periodic alphabet supersequence, Sum Height and Min
//! Height merges, and deposition-and-reduction over a template pool.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lcs::{HeuristicParams, HeuristicResult};
use crate::seq::{Dataset, Sequence};
use crate::tables::SymbolIndex;

pub const DEFAULT_POOL_SIZE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateKind {
    Alphabet,
    SumHeight,
    MinHeight,
    RandomizedSumHeight { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub value: Sequence,
    pub kind: TemplateKind,
}

/// Common supersequences of one dataset, each tagged with how it was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplatePool {
    templates: Vec<Template>,
}

impl TemplatePool {
    /// Sum Height, Min Height and the periodic supersequence, then randomized
    /// Sum Height variants, truncated to `size` entries.
    pub fn build(d: &Dataset, size: usize, seed: u64) -> Self {
        let views = d.views();
        let symbols = d.alphabet().symbols();
        let mut templates = Vec::with_capacity(size);
        let mut push = |value: Vec<u8>, kind| {
            if templates.len() < size {
                templates.push(Template {
                    value: Sequence::anon(value),
                    kind,
                });
            }
        };
        push(sum_height_raw(&views, symbols, None), TemplateKind::SumHeight);
        push(min_height_raw(&views, symbols), TemplateKind::MinHeight);
        push(alphabet_raw(symbols, d.max_len()), TemplateKind::Alphabet);
        for i in 0..size.saturating_sub(3) as u64 {
            let s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i + 1);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            push(
                sum_height_raw(&views, symbols, Some(&mut rng)),
                TemplateKind::RandomizedSumHeight { seed: s },
            );
        }
        let pool = TemplatePool { templates };
        debug_assert!(pool
            .templates
            .iter()
            .all(|t| d.is_common_supersequence(t.value.as_bytes())));
        pool
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }
}

fn alphabet_raw(symbols: &[u8], repeats: usize) -> Vec<u8> {
    symbols.repeat(repeats)
}

/// `(a_1 … a_|Σ|)^K` with `K` the longest sequence length.
pub fn alphabet_supersequence(d: &Dataset) -> Sequence {
    Sequence::anon(alphabet_raw(d.alphabet().symbols(), d.max_len()))
}

/// Majority merge. With an RNG, ties among the most frequent fronts are
/// broken at random instead of by alphabet order.
pub(crate) fn sum_height_raw(
    strings: &[&[u8]],
    symbols: &[u8],
    mut rng: Option<&mut ChaCha8Rng>,
) -> Vec<u8> {
    let index = SymbolIndex::new(symbols);
    let mut front = vec![0usize; strings.len()];
    let mut counts = vec![0usize; index.len()];
    let mut out = Vec::new();
    loop {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut any = false;
        for (s, &f) in strings.iter().zip(&front) {
            if f < s.len() {
                any = true;
                counts[index.index(s[f]).expect("symbol in alphabet")] += 1;
            }
        }
        if !any {
            return out;
        }
        let top = *counts.iter().max().expect("non-empty alphabet");
        let ci = match rng.as_deref_mut() {
            None => counts.iter().position(|&c| c == top).expect("maximum exists"),
            Some(rng) => {
                let ties: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] == top).collect();
                ties[rng.gen_range(0..ties.len())]
            }
        };
        let c = index.symbol(ci);
        out.push(c);
        for (s, f) in strings.iter().zip(front.iter_mut()) {
            if *f < s.len() && s[*f] == c {
                *f += 1;
            }
        }
    }
}

pub fn sum_height_merge(d: &Dataset) -> Sequence {
    Sequence::anon(sum_height_raw(&d.views(), d.alphabet().symbols(), None))
}

/// Emits the front symbol of the sequence with the most symbols left. Among
/// equally long sequences, the front matched by most sequences wins, then
/// alphabet order.
pub(crate) fn min_height_raw(strings: &[&[u8]], symbols: &[u8]) -> Vec<u8> {
    let index = SymbolIndex::new(symbols);
    let mut front = vec![0usize; strings.len()];
    let mut counts = vec![0usize; index.len()];
    let mut out = Vec::new();
    loop {
        let remaining = strings.iter().zip(&front).map(|(s, &f)| s.len() - f).max().unwrap_or(0);
        if remaining == 0 {
            return out;
        }
        counts.iter_mut().for_each(|c| *c = 0);
        let mut eligible = vec![false; index.len()];
        for (s, &f) in strings.iter().zip(&front) {
            if f < s.len() {
                let ci = index.index(s[f]).expect("symbol in alphabet");
                counts[ci] += 1;
                if s.len() - f == remaining {
                    eligible[ci] = true;
                }
            }
        }
        let ci = (0..index.len())
            .filter(|&i| eligible[i])
            .max_by_key(|&i| (counts[i], std::cmp::Reverse(i)))
            .expect("some sequence is longest");
        let c = index.symbol(ci);
        out.push(c);
        for (s, f) in strings.iter().zip(front.iter_mut()) {
            if *f < s.len() && s[*f] == c {
                *f += 1;
            }
        }
    }
}

pub fn min_height_merge(d: &Dataset) -> Sequence {
    Sequence::anon(min_height_raw(&d.views(), d.alphabet().symbols()))
}

/// Deletes characters of `template` left to right while every string stays
/// a subsequence, repeating sweeps until nothing more can go.
///
/// Deleting position `j` is safe iff, for every string, the greedy match of
/// its prefix in the kept part before `j` plus the greedy match of its suffix
/// in the original part after `j` covers the whole string.
pub(crate) fn reduce_raw(strings: &[&[u8]], template: &[u8]) -> Vec<u8> {
    let mut current = template.to_vec();
    loop {
        let next = reduce_sweep(strings, &current);
        if next.len() == current.len() {
            return current;
        }
        current = next;
    }
}

fn reduce_sweep(strings: &[&[u8]], t: &[u8]) -> Vec<u8> {
    let m = t.len();
    // suffix[i * (m + 1) + j]: symbols of strings[i] matched greedily from the
    // right inside t[j..]
    let mut suffix = vec![0usize; strings.len() * (m + 1)];
    for (i, s) in strings.iter().enumerate() {
        let row = &mut suffix[i * (m + 1)..(i + 1) * (m + 1)];
        let mut got = 0;
        for j in (0..m).rev() {
            if got < s.len() && s[s.len() - 1 - got] == t[j] {
                got += 1;
            }
            row[j] = got;
        }
    }
    let mut prefix = vec![0usize; strings.len()];
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let deletable = strings
            .iter()
            .enumerate()
            .all(|(i, s)| prefix[i] + suffix[i * (m + 1) + j + 1] >= s.len());
        if deletable {
            continue;
        }
        out.push(t[j]);
        for (i, s) in strings.iter().enumerate() {
            if prefix[i] < s.len() && s[prefix[i]] == t[j] {
                prefix[i] += 1;
            }
        }
    }
    out
}

/// Shortens a common supersequence to a 1-minimal one.
pub fn reduce_template(d: &Dataset, template: &Sequence) -> Result<Sequence> {
    if !d.is_common_supersequence(template.as_bytes()) {
        return Err(Error::invalid(format!(
            "{:?} is not a common supersequence of the dataset",
            template.as_str()
        )));
    }
    Ok(Sequence::anon(reduce_raw(&d.views(), template.as_bytes())))
}

/// Deposition and reduction: `SCS_DepRedn(S)`.
///
/// Every template in the pool is reduced independently; the shortest result
/// wins, ties broken lexicographically.
pub fn heuristic_scs(d: &Dataset, pool_size: usize, seed: u64) -> HeuristicResult {
    let started = Instant::now();
    let pool = TemplatePool::build(d, pool_size.max(1), seed);
    let views = d.views();
    let value = pool
        .templates()
        .par_iter()
        .map(|t| reduce_raw(&views, t.value.as_bytes()))
        .collect::<Vec<_>>()
        .into_iter()
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
        .expect("pool is non-empty");
    debug_assert!(d.is_common_supersequence(&value));
    HeuristicResult {
        value: Sequence::anon(value),
        algorithm: "deposition-reduction".into(),
        params: HeuristicParams::Reduction {
            pool_size: pool_size.max(1),
            seed,
        },
        elapsed: started.elapsed(),
    }
}

/// Distinct heuristic SCS results for seeds `seed .. seed + count`.
pub fn heuristic_scs_candidates(
    d: &Dataset,
    pool_size: usize,
    seed: u64,
    count: usize,
) -> Vec<HeuristicResult> {
    let mut out: Vec<HeuristicResult> = Vec::new();
    for i in 0..count as u64 {
        let r = heuristic_scs(d, pool_size, seed + i);
        if !out.iter().any(|o| o.value.symbols == r.value.symbols) {
            out.push(r);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScsAlgorithm {
    Alphabet,
    SumHeight,
    MinHeight,
    DepositionReduction,
}

/// Runs one of the SCS algorithms by name.
pub fn run_scs(d: &Dataset, algo: ScsAlgorithm, pool_size: usize, seed: u64) -> HeuristicResult {
    let started = Instant::now();
    let (value, name) = match algo {
        ScsAlgorithm::DepositionReduction => return heuristic_scs(d, pool_size, seed),
        ScsAlgorithm::Alphabet => (alphabet_supersequence(d), "alphabet"),
        ScsAlgorithm::SumHeight => (sum_height_merge(d), "sum-height"),
        ScsAlgorithm::MinHeight => (min_height_merge(d), "min-height"),
    };
    HeuristicResult {
        value,
        algorithm: name.into(),
        params: HeuristicParams::Construction,
        elapsed: started.elapsed(),
    }
}
