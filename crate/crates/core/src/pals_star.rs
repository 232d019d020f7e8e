//! Post-processing of PALS patterns under a sensitivity floor: redundant
//! star removal, swap-merge of stars, and pattern-driven refinement.

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{ls_from_parts, LanguageModel, PatternReport};
use crate::pals::{pals_output, Base, PalsParams};
use crate::seq::{Dataset, Pattern, Token, WILDCARD};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarParams {
    /// Fraction of sequences every pattern must keep matching, in (0, 1].
    pub min_sensitivity: f64,
    /// Round limit for `pd_refine`.
    pub max_rounds: usize,
    /// Only accept patterns whose literal segments still occur, in order, in
    /// the heuristic LCS or SCS the pattern was derived from.
    pub keep_basis_order: bool,
}

impl Default for StarParams {
    fn default() -> Self {
        StarParams {
            min_sensitivity: 1.0,
            max_rounds: 64,
            keep_basis_order: true,
        }
    }
}

impl StarParams {
    pub fn new(min_sensitivity: f64, max_rounds: usize) -> Result<Self> {
        if !(min_sensitivity > 0.0 && min_sensitivity <= 1.0) {
            return Err(Error::invalid(format!(
                "min_sensitivity must lie in (0, 1], got {min_sensitivity}"
            )));
        }
        Ok(StarParams {
            min_sensitivity,
            max_rounds,
            ..Default::default()
        })
    }

    /// Support `m = ⌈min_sensitivity · n⌉`.
    pub fn support(&self, n: usize) -> usize {
        // tolerate binary noise such as 0.7 · 10 = 7.000000000000001
        let raw = self.min_sensitivity * n as f64;
        ((raw - 1e-9).ceil() as usize).clamp(1, n.max(1))
    }
}

/// Every pattern one refinement move away from `p`: a star replaced by a
/// symbol, a symbol inserted next to a star, a star split around a symbol
/// (`*` to `*c*`), or a star deleted. Each move yields a pattern whose
/// language is contained in that of `p`.
pub fn refinement_moves(p: &Pattern, symbols: &[u8]) -> Vec<Pattern> {
    let bytes = p.to_bytes();
    let mut out: Vec<Pattern> = Vec::new();
    for (i, _) in bytes.iter().enumerate().filter(|(_, &c)| c == WILDCARD) {
        let edit = |f: &dyn Fn(&mut Vec<u8>)| {
            let mut b = bytes.clone();
            f(&mut b);
            Pattern::from_bytes(&b)
        };
        out.push(edit(&|b| {
            b.remove(i);
        }));
        for &c in symbols {
            out.push(edit(&|b| b[i] = c));
            out.push(edit(&|b| b.insert(i, c)));
            out.push(edit(&|b| b.insert(i + 1, c)));
            out.push(edit(&|b| {
                b.insert(i + 1, WILDCARD);
                b.insert(i + 1, c);
            }));
        }
    }
    out.sort();
    out.dedup();
    out.retain(|q| q != p);
    out
}

/// Decides which patterns a phase may accept.
struct Gate<'a> {
    d: &'a Dataset,
    m: usize,
    basis: Option<&'a [u8]>,
}

impl Gate<'_> {
    fn admits(&self, p: &Pattern) -> bool {
        if let Some(b) = self.basis {
            if !p.padded().matches(b) {
                return false;
            }
        }
        let mut hits = 0;
        let mut left = self.d.len();
        for s in self.d.sequences() {
            if hits >= self.m || hits + left < self.m {
                break;
            }
            left -= 1;
            if p.matches(s.as_bytes()) {
                hits += 1;
            }
        }
        hits >= self.m
    }
}

fn remove_with(gate: &Gate, p: &Pattern) -> Pattern {
    let mut cur = p.clone();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < cur.tokens().len() {
            if cur.tokens()[i] == Token::Star {
                let mut t = cur.tokens().to_vec();
                t.remove(i);
                let q = Pattern::from_tokens(t);
                if gate.admits(&q) {
                    cur = q;
                    changed = true;
                    continue;
                }
            }
            i += 1;
        }
        if !changed {
            return cur;
        }
    }
}

fn swap_with(gate: &Gate, p: &Pattern) -> Pattern {
    let mut cur = p.clone();
    'sweep: loop {
        let bytes = cur.to_bytes();
        for i in 0..bytes.len() {
            if bytes[i] != WILDCARD {
                continue;
            }
            // star moves right past the next literal, then left past the previous
            for j in [i + 1, i.wrapping_sub(1)] {
                if j >= bytes.len() || bytes[j] == WILDCARD {
                    continue;
                }
                let mut b = bytes.clone();
                b.swap(i, j);
                let q = Pattern::from_bytes(&b);
                if q.star_count() < cur.star_count() && gate.admits(&q) {
                    cur = q;
                    continue 'sweep;
                }
            }
        }
        return cur;
    }
}

type Key = (f64, std::cmp::Reverse<usize>, usize, Vec<u8>);

/// Search order during refinement: smaller model size, then more literals
/// (the model cannot tell them apart over a unary alphabet), then fewer
/// stars, then lexicographic.
fn refine_key(d: &Dataset, p: &Pattern) -> Key {
    (
        LanguageModel::new(d, p).log10_size(),
        std::cmp::Reverse(p.literal_count()),
        p.star_count(),
        p.to_bytes(),
    )
}

fn key_cmp(a: &Key, b: &Key) -> Ordering {
    a.0.total_cmp(&b.0)
        .then(a.1.cmp(&b.1))
        .then(a.2.cmp(&b.2))
        .then_with(|| a.3.cmp(&b.3))
}

/// The sequence of patterns visited by refinement, starting with `p`.
fn refine_trace_with(gate: &Gate, p: &Pattern, max_rounds: usize) -> Vec<Pattern> {
    let symbols = gate.d.alphabet().symbols();
    let mut trace = vec![p.clone()];
    let mut cur_key = refine_key(gate.d, p);
    for _ in 0..max_rounds {
        let cur = trace.last().expect("non-empty");
        let best = refinement_moves(cur, symbols)
            .into_par_iter()
            .filter(|q| gate.admits(q))
            .map(|q| (refine_key(gate.d, &q), q))
            .min_by(|a, b| key_cmp(&a.0, &b.0));
        match best {
            Some((k, q)) if key_cmp(&k, &cur_key) == Ordering::Less => {
                cur_key = k;
                trace.push(q);
            }
            _ => break,
        }
    }
    trace
}

/// Whether `target` can be reached from `from` by a path of refinement
/// moves through patterns that all keep the support floor. Moves never
/// remove literals, so the search is confined to patterns with at most as
/// many literals as `target`.
pub fn pd_reachable(d: &Dataset, from: &Pattern, target: &Pattern, sp: &StarParams) -> bool {
    let g = gate(d, sp, None);
    if !g.admits(from) {
        return false;
    }
    let limit = target.literal_count();
    let mut seen = std::collections::HashSet::from([from.clone()]);
    let mut frontier = vec![from.clone()];
    for _ in 0..=sp.max_rounds {
        if frontier.iter().any(|p| p == target) {
            return true;
        }
        let mut next = Vec::new();
        for p in &frontier {
            for q in refinement_moves(p, d.alphabet().symbols()) {
                if q.literal_count() <= limit && !seen.contains(&q) && g.admits(&q) {
                    seen.insert(q.clone());
                    next.push(q);
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        frontier = next;
    }
    false
}

/// Single-pattern LS on `d`, ties broken by fewer stars then lexicographic.
fn best_specificity<'a>(d: &Dataset, ps: impl IntoIterator<Item = &'a Pattern>) -> Pattern {
    ps.into_iter()
        .map(|p| {
            let covered = d.sequences().iter().filter(|s| p.matches(s.as_bytes())).count();
            let ls = ls_from_parts(d, std::slice::from_ref(p), covered);
            ((ls, std::cmp::Reverse(p.literal_count()), p.star_count(), p.to_bytes()), p)
        })
        .min_by(|a, b| key_cmp(&a.0, &b.0))
        .map(|(_, p)| p.clone())
        .expect("at least one pattern")
}

fn gate<'a>(d: &'a Dataset, sp: &StarParams, basis: Option<&'a [u8]>) -> Gate<'a> {
    Gate {
        d,
        m: sp.support(d.len()),
        basis: if sp.keep_basis_order { basis } else { None },
    }
}

/// Deletes stars left to right while the support floor holds, to a fixpoint.
pub fn remove_redundant_stars(d: &Dataset, p: &Pattern, sp: &StarParams) -> Pattern {
    remove_with(&gate(d, sp, None), p)
}

/// Moves a star past a neighbouring literal whenever that merges it into an
/// adjacent star and the support floor holds, to a fixpoint.
pub fn swap_merge_stars(d: &Dataset, p: &Pattern, sp: &StarParams) -> Pattern {
    swap_with(&gate(d, sp, None), p)
}

/// Patterns visited by pattern-driven refinement from `p`, in order.
pub fn pd_refine_trace(d: &Dataset, p: &Pattern, sp: &StarParams) -> Vec<Pattern> {
    refine_trace_with(&gate(d, sp, None), p, sp.max_rounds)
}

/// Greedy specialisation by refinement moves under the support floor; the
/// visited pattern with the best specificity is returned.
pub fn pd_refine(d: &Dataset, p: &Pattern, sp: &StarParams) -> Pattern {
    best_specificity(d, &pd_refine_trace(d, p, sp))
}

/// All three phases on one pattern. The floor is relaxed one sequence at a
/// time, from the support `p` already has down to the requested one, each
/// stage starting from the best pattern so far; the result is the
/// best-specificity pattern seen at any stage. A looser floor therefore
/// never ends worse than a stricter one.
pub(crate) fn post_process(d: &Dataset, p: &Pattern, sp: &StarParams, basis: Option<&[u8]>) -> Pattern {
    let target = gate(d, sp, basis);
    if !target.admits(p) {
        return p.clone();
    }
    let start = d.sequences().iter().filter(|s| p.matches(s.as_bytes())).count();
    let mut seen = vec![p.clone()];
    let mut best = p.clone();
    for m in (target.m..=start).rev() {
        let g = Gate { m, ..target };
        let removed = remove_with(&g, &best);
        let swapped = swap_with(&g, &removed);
        let trace = refine_trace_with(&g, &swapped, sp.max_rounds);
        seen.push(removed);
        seen.push(swapped);
        seen.extend(trace);
        best = best_specificity(d, &seen);
    }
    best
}

/// PALS followed by star removal, swap-merge and refinement of every pattern.
/// The refined set replaces the PALS set only if its LS is no worse.
pub fn pals_star(d: &Dataset, base: Base, sp: &StarParams, params: &PalsParams) -> PatternReport {
    let out = pals_output(d, base, params);
    let started = Instant::now();
    let mut refined: Vec<Pattern> = out
        .patterns
        .iter()
        .map(|p| post_process(d, p, sp, Some(out.basis.as_bytes())))
        .collect();
    refined.sort();
    refined.dedup();
    let post = started.elapsed();

    let original = PatternReport::score("", d, out.patterns.clone(), None);
    let candidate = PatternReport::score("", d, refined.clone(), None);
    let patterns = if candidate.ls <= original.ls { refined } else { out.patterns.clone() };

    let mut phases = out.phases.clone();
    phases.push(("post-process", post));
    PatternReport::score(
        format!("pals*-{base}"),
        d,
        patterns,
        Some(out.basis.as_str().to_string()),
    )
    .with_phases(&phases)
}
