//! Pattern discovery from a heuristic LCS (`pals_lcs`) or SCS (`pals_scs`).

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lcs::{heuristic_lcs, lcs_raw, DepositionParams};
use crate::metrics::PatternReport;
use crate::scs::{heuristic_scs, DEFAULT_POOL_SIZE};
use crate::seq::{embed_leftmost, is_subsequence, Dataset, Pattern, Sequence, Token};
use crate::substring;

/// Which heuristic a pattern set is derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    Lcs,
    Scs,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::Lcs => "lcs",
            Base::Scs => "scs",
        })
    }
}

impl FromStr for Base {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lcs" => Ok(Base::Lcs),
            "scs" => Ok(Base::Scs),
            other => Err(Error::invalid(format!("unknown base {other:?}, expected lcs or scs"))),
        }
    }
}

/// How an LCS is projected onto each sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MappingMode {
    /// Each sequence on its own: a star wherever its leftmost embedding
    /// leaves a gap.
    PerSequence,
    /// Inner gaps are starred in every sequence as soon as one sequence has
    /// a gap there; the flanks follow each sequence's own embedding.
    #[default]
    Aligned,
}

impl FromStr for MappingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-sequence" | "per_sequence" => Ok(MappingMode::PerSequence),
            "aligned" => Ok(MappingMode::Aligned),
            other => Err(Error::invalid(format!(
                "unknown mapping {other:?}, expected aligned or per-sequence"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PalsParams {
    pub lcs: DepositionParams,
    pub pool_size: usize,
    /// Seed for the SCS template pool.
    pub seed: u64,
    pub mapping: MappingMode,
}

impl Default for PalsParams {
    fn default() -> Self {
        PalsParams {
            lcs: DepositionParams::default(),
            pool_size: DEFAULT_POOL_SIZE,
            seed: 0,
            mapping: MappingMode::default(),
        }
    }
}

impl PalsParams {
    /// Uses `seed` for both heuristics.
    pub fn with_seed(self, seed: u64) -> Self {
        PalsParams {
            lcs: self.lcs.with_seed(seed),
            seed,
            ..self
        }
    }
}

/// The projection of a heuristic result onto one sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappedPattern {
    pub source: String,
    pub pattern: Pattern,
}

/// Builds `[*] c0 [*] c1 … c(t−1) [*]` with a star before position `j`
/// wherever `star(j)` holds (`j == t` is the trailing flank).
fn starred(lit: &[u8], star: impl Fn(usize) -> bool) -> Pattern {
    let mut tokens = Vec::with_capacity(2 * lit.len() + 1);
    for j in 0..=lit.len() {
        if star(j) {
            tokens.push(Token::Star);
        }
        if let Some(&c) = lit.get(j) {
            tokens.push(Token::Literal(vec![c]));
        }
    }
    Pattern::from_tokens(tokens)
}

/// Gap flags of an embedding: `gaps[j]` is true iff something of `hay` lies
/// before match `j` (after match `j − 1`); `gaps[t]` covers the tail.
fn gap_flags(positions: &[usize], hay_len: usize) -> Vec<bool> {
    let mut out = Vec::with_capacity(positions.len() + 1);
    let mut prev: Option<usize> = None;
    for &p in positions {
        out.push(match prev {
            None => p > 0,
            Some(q) => p > q + 1,
        });
        prev = Some(p);
    }
    out.push(match prev {
        None => hay_len > 0,
        Some(q) => q + 1 < hay_len,
    });
    out
}

fn embed_all(d: &Dataset, lcs: &[u8]) -> Result<Vec<Vec<bool>>> {
    d.sequences()
        .iter()
        .map(|s| {
            embed_leftmost(lcs, s.as_bytes())
                .map(|pos| gap_flags(&pos, s.len()))
                .ok_or_else(|| {
                    Error::invalid(format!(
                        "{:?} is not a subsequence of sequence {}",
                        String::from_utf8_lossy(lcs),
                        s.id
                    ))
                })
        })
        .collect()
}

/// Projects a common subsequence onto every sequence by its leftmost
/// embedding; each run of unmatched characters becomes one star.
pub fn patternize_alpha(d: &Dataset, lcs: &Sequence) -> Result<Vec<MappedPattern>> {
    patternize_lcs(d, lcs, MappingMode::PerSequence)
}

pub fn patternize_lcs(d: &Dataset, lcs: &Sequence, mode: MappingMode) -> Result<Vec<MappedPattern>> {
    let lit = lcs.as_bytes();
    let gaps = embed_all(d, lit)?;
    let t = lit.len();
    let inner: Vec<bool> = (0..=t)
        .map(|j| j > 0 && j < t && gaps.iter().any(|g| g[j]))
        .collect();
    Ok(d.sequences()
        .iter()
        .zip(&gaps)
        .map(|(s, g)| {
            let pattern = match mode {
                MappingMode::PerSequence => starred(lit, |j| g[j]),
                MappingMode::Aligned => starred(lit, |j| if j == 0 || j == t { g[j] } else { inner[j] }),
            };
            MappedPattern {
                source: s.id.clone(),
                pattern,
            }
        })
        .collect())
}

/// Every distinct longest common substring of the rendered patterns, padded
/// with stars and sorted. No common substring gives the single pattern `*`.
pub fn longest_common_substrings(patterns: &[Pattern]) -> Vec<Pattern> {
    let rendered: Vec<Vec<u8>> = patterns.iter().map(Pattern::to_bytes).collect();
    let views: Vec<&[u8]> = rendered.iter().map(Vec::as_slice).collect();
    let mut out: Vec<Pattern> = substring::longest_common_substrings(&views)
        .into_iter()
        .map(|s| Pattern::from_bytes(&s).padded())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Projects every sequence onto a common supersequence: matched positions
/// keep the sequence's characters, each run of unmatched positions of the
/// supersequence becomes one star.
pub fn patternize_beta(d: &Dataset, scs: &Sequence) -> Result<Vec<MappedPattern>> {
    d.sequences()
        .iter()
        .map(|s| {
            let pos = embed_leftmost(s.as_bytes(), scs.as_bytes()).ok_or_else(|| {
                Error::invalid(format!(
                    "sequence {} is not a subsequence of {:?}",
                    s.id,
                    scs.as_str()
                ))
            })?;
            let g = gap_flags(&pos, scs.len());
            Ok(MappedPattern {
                source: s.id.clone(),
                pattern: starred(s.as_bytes(), |j| g[j]),
            })
        })
        .collect()
}

/// Patterns plus everything needed to report them.
#[derive(Debug, Clone, PartialEq)]
pub struct PalsOutput {
    pub patterns: Vec<Pattern>,
    /// The heuristic LCS or SCS the patterns came from.
    pub basis: Sequence,
    /// For the SCS base, the common subsequence found among the mapped
    /// patterns; for the LCS base, the basis itself.
    pub consensus: Sequence,
    pub phases: Vec<(&'static str, Duration)>,
}

impl PalsOutput {
    pub fn report(&self, algorithm: &str, d: &Dataset) -> PatternReport {
        PatternReport::score(
            algorithm,
            d,
            self.patterns.clone(),
            Some(self.basis.as_str().to_string()),
        )
        .with_phases(&self.phases)
    }
}

pub fn pals_lcs_from(d: &Dataset, lcs: &Sequence, mapping: MappingMode) -> Result<PalsOutput> {
    let t0 = Instant::now();
    let mapped = patternize_lcs(d, lcs, mapping)?;
    let t1 = Instant::now();
    let ps: Vec<Pattern> = mapped.into_iter().map(|m| m.pattern).collect();
    let patterns = longest_common_substrings(&ps);
    let t2 = Instant::now();
    Ok(PalsOutput {
        patterns,
        basis: lcs.clone(),
        consensus: lcs.clone(),
        phases: vec![("patternize", t1 - t0), ("substring", t2 - t1)],
    })
}

pub(crate) fn run_pals_lcs(d: &Dataset, params: &PalsParams) -> PalsOutput {
    let h = heuristic_lcs(d, &params.lcs);
    let mut out = pals_lcs_from(d, &h.value, params.mapping).expect("heuristic LCS is a common subsequence");
    out.phases.insert(0, ("heuristic", h.elapsed));
    out
}

/// Heuristic LCS, projection onto every sequence, longest common substrings.
pub fn pals_lcs(d: &Dataset, params: &PalsParams) -> PatternReport {
    run_pals_lcs(d, params).report("pals-lcs", d)
}

/// Splits literal segments of `p` until they occur, in order and without
/// overlap, as substrings of `host`. `p` must be a subsequence pattern of
/// `host` (its stripped form embeds in `host`).
pub(crate) fn split_to_host(p: &Pattern, host: &[u8]) -> Pattern {
    let mut tokens: Vec<Token> = Vec::new();
    let mut rest: Vec<u8> = p.strip_wildcards();
    let mut cursor = 0usize;
    for t in p.tokens() {
        let Token::Literal(seg) = t else {
            tokens.push(Token::Star);
            continue;
        };
        let mut seg: &[u8] = seg;
        while !seg.is_empty() {
            // longest prefix placeable at its leftmost spot without losing
            // the embedding of what follows
            let mut placed = None;
            for len in (1..=seg.len()).rev() {
                let Some(at) = find_from(host, &seg[..len], cursor) else {
                    continue;
                };
                if is_subsequence(&rest[len..], &host[at + len..]) {
                    placed = Some((len, at));
                    break;
                }
            }
            let (len, at) = placed.expect("stripped pattern embeds in host");
            tokens.push(Token::Literal(seg[..len].to_vec()));
            if len < seg.len() {
                tokens.push(Token::Star);
            }
            cursor = at + len;
            rest.drain(..len);
            seg = &seg[len..];
        }
    }
    Pattern::from_tokens(tokens)
}

fn find_from(hay: &[u8], needle: &[u8], from: usize) -> Option<usize> {
    if from + needle.len() > hay.len() {
        return None;
    }
    hay[from..]
        .windows(needle.len())
        .position(|w| w == needle)
        .map(|i| i + from)
}

pub fn pals_scs_from(d: &Dataset, scs: &Sequence, lcs: &DepositionParams) -> Result<PalsOutput> {
    let t0 = Instant::now();
    let mapped = patternize_beta(d, scs)?;
    let t1 = Instant::now();
    let rendered: Vec<Vec<u8>> = mapped.iter().map(|m| m.pattern.to_bytes()).collect();
    let views: Vec<&[u8]> = rendered.iter().map(Vec::as_slice).collect();
    // stars stay in the strings as spacers but are never deposited
    let consensus = lcs_raw(&views, d.alphabet().symbols(), lcs);
    let gaps = embed_all(d, &consensus)?;
    let pattern = starred(&consensus, |j| gaps.iter().any(|g| g[j])).padded();
    let pattern = split_to_host(&pattern, scs.as_bytes());
    let t2 = Instant::now();
    Ok(PalsOutput {
        patterns: vec![pattern],
        basis: scs.clone(),
        consensus: Sequence::anon(consensus),
        phases: vec![("patternize", t1 - t0), ("consensus", t2 - t1)],
    })
}

pub(crate) fn run_pals_scs(d: &Dataset, params: &PalsParams) -> PalsOutput {
    let h = heuristic_scs(d, params.pool_size, params.seed);
    let mut out = pals_scs_from(d, &h.value, &params.lcs).expect("heuristic SCS is a common supersequence");
    out.phases.insert(0, ("heuristic", h.elapsed));
    out
}

/// Heuristic SCS, projection of every sequence onto it, then one consensus
/// pattern from the projected patterns.
pub fn pals_scs(d: &Dataset, params: &PalsParams) -> PatternReport {
    run_pals_scs(d, params).report("pals-scs", d)
}

pub fn pals_output(d: &Dataset, base: Base, params: &PalsParams) -> PalsOutput {
    match base {
        Base::Lcs => run_pals_lcs(d, params),
        Base::Scs => run_pals_scs(d, params),
    }
}

pub fn pals(d: &Dataset, base: Base, params: &PalsParams) -> PatternReport {
    match base {
        Base::Lcs => pals_lcs(d, params),
        Base::Scs => pals_scs(d, params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::check_one_step_maximal;
    use proptest::prelude::*;

    fn ds(seqs: &[&str]) -> Dataset {
        Dataset::from_strs(seqs).unwrap()
    }

    fn rendered(ps: &[MappedPattern]) -> Vec<String> {
        ps.iter().map(|m| m.pattern.render()).collect()
    }

    fn pats(ps: &[&str]) -> Vec<Pattern> {
        ps.iter().map(|p| Pattern::parse(p)).collect()
    }

    #[test]
    fn patternize_alpha_examples() {
        let d = ds(&["ACGT", "CGGT", "CGTC"]);
        let got = rendered(&patternize_alpha(&d, &Sequence::anon("CGT")).unwrap());
        assert_eq!(got, ["*CGT", "CG*T", "CGT*"]);
        let got = rendered(&patternize_alpha(&ds(&["X"]), &Sequence::anon("X")).unwrap());
        assert_eq!(got, ["X"]);
        assert!(patternize_alpha(&d, &Sequence::anon("TT")).is_err());
    }

    #[test]
    fn aligned_mapping_examples() {
        let d = ds(&["ACGT", "CGGT", "CGTC"]);
        let got = rendered(&patternize_lcs(&d, &Sequence::anon("CGT"), MappingMode::Aligned).unwrap());
        assert_eq!(got, ["*CG*T", "CG*T", "CG*T*"]);
    }

    #[test]
    fn longest_common_substring_examples() {
        assert_eq!(longest_common_substrings(&pats(&["*CG*T", "CG*T", "CG*T*"])), pats(&["*CG*T*"]));
        assert_eq!(longest_common_substrings(&pats(&["X"])), pats(&["*X*"]));
        assert_eq!(longest_common_substrings(&pats(&["AB", "BA"])), pats(&["*A*", "*B*"]));
        assert_eq!(longest_common_substrings(&pats(&["AA", "CC"])), pats(&["*"]));
    }

    #[test]
    fn patternize_beta_examples() {
        let one = |seq: &str, scs: &str| {
            rendered(&patternize_beta(&ds(&[seq]), &Sequence::anon(scs)).unwrap()).remove(0)
        };
        assert_eq!(one("ACGT", "ACGGTC"), "ACG*T*");
        assert_eq!(one("X", "X"), "X");
        assert_eq!(one("CTGC", "ACTGGTC"), "*CTG*C");
    }

    #[test]
    fn pals_lcs_examples() {
        let r = pals_lcs(&ds(&["ACGT", "CGGT", "CGTC"]), &PalsParams::default());
        assert_eq!(r.patterns, pats(&["*CG*T*"]));
        assert_eq!(r.sensitivity, 1.0);
        assert_eq!(pals_lcs(&ds(&["X"]), &PalsParams::default()).patterns, pats(&["*X*"]));
        assert_eq!(pals_lcs(&ds(&["AAAA", "CCCC"]), &PalsParams::default()).patterns, pats(&["*"]));
    }

    #[test]
    fn pals_lcs_per_sequence_mapping() {
        let d = ds(&["ACGT", "CGGT", "CGTC"]);
        let out = pals_lcs_from(&d, &Sequence::anon("CGT"), MappingMode::PerSequence).unwrap();
        assert_eq!(out.patterns, pats(&["*CG*"]));
    }

    #[test]
    fn pals_scs_examples() {
        let d = ds(&["ACGT", "CGGT", "CTGC"]);
        let out = pals_scs_from(&d, &Sequence::anon("ACTGGTC"), &DepositionParams::default()).unwrap();
        assert_eq!(out.patterns, pats(&["*C*G*"]));
        assert!(check_one_step_maximal(&d, &out.patterns[0]));
        assert_eq!(pals_scs(&ds(&["X"]), &PalsParams::default()).patterns, pats(&["*X*"]));
        assert_eq!(pals_scs(&ds(&["AAAA", "CCCC"]), &PalsParams::default()).patterns, pats(&["*"]));
    }

    #[test]
    fn split_to_host_separates_non_adjacent_pieces() {
        assert_eq!(split_to_host(&Pattern::parse("*CG*"), b"ACTGGTC"), Pattern::parse("*C*G*"));
        assert_eq!(split_to_host(&Pattern::parse("*CG*T*"), b"ACGT"), Pattern::parse("*CG*T*"));
        assert_eq!(split_to_host(&Pattern::parse("AB"), b"AXB"), Pattern::parse("A*B"));
    }

    fn lemma4(p: &Pattern, host: &[u8]) -> bool {
        p.padded().matches(host)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn pals_patterns_cover_and_keep_order(
            seqs in prop::collection::vec("[ACGT]{0,14}", 1..5),
            base in prop_oneof![Just(Base::Lcs), Just(Base::Scs)],
            mapping in prop_oneof![Just(MappingMode::Aligned), Just(MappingMode::PerSequence)],
        ) {
            let d = Dataset::with_alphabet(crate::Alphabet::dna(), &seqs).unwrap();
            let params = PalsParams { mapping, ..Default::default() };
            let out = pals_output(&d, base, &params);
            prop_assert!(!out.patterns.is_empty());
            if base == Base::Scs {
                prop_assert_eq!(out.patterns.len(), 1);
            }
            for p in &out.patterns {
                prop_assert!(d.sequences().iter().all(|s| p.matches(s.as_bytes())), "{} misses a sequence", p);
                prop_assert!(d.is_common_subsequence(&p.strip_wildcards()));
                prop_assert!(lemma4(p, out.basis.as_bytes()));
                prop_assert!(lemma4(p, out.consensus.as_bytes()));
            }
        }
    }
}
