//! Exact solvers for small instances, used as ground truth.
//!
//! Everything here is exponential in the worst case except the pairwise
//! dynamic programs. The multi-sequence solvers check [`OracleLimits`] before
//! doing any work.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::{Alphabet, Dataset, Pattern, Sequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleLimits {
    pub max_sequences: usize,
    pub max_length: usize,
    pub max_language_len: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_sequences: 4,
            max_length: 12,
            max_language_len: 16,
        }
    }
}

impl OracleLimits {
    pub fn new(max_sequences: usize, max_length: usize, max_language_len: usize) -> Result<Self> {
        if max_sequences == 0 || max_length == 0 || max_language_len == 0 {
            return Err(Error::invalid("oracle limits must all be positive"));
        }
        Ok(OracleLimits {
            max_sequences,
            max_length,
            max_language_len,
        })
    }

    pub fn check(&self, d: &Dataset) -> Result<()> {
        if d.len() > self.max_sequences {
            return Err(Error::OracleLimit {
                what: "sequence count",
                actual: d.len(),
                limit: self.max_sequences,
            });
        }
        if d.max_len() > self.max_length {
            return Err(Error::OracleLimit {
                what: "sequence length",
                actual: d.max_len(),
                limit: self.max_length,
            });
        }
        Ok(())
    }
}

/// `table[i][j]` = LCS length of `a[i..]` and `b[j..]`.
fn lcs_suffix_table(a: &[u8], b: &[u8]) -> Vec<Vec<u32>> {
    let mut t = vec![vec![0u32; b.len() + 1]; a.len() + 1];
    for i in (0..a.len()).rev() {
        for j in (0..b.len()).rev() {
            t[i][j] = if a[i] == b[j] {
                t[i + 1][j + 1] + 1
            } else {
                t[i + 1][j].max(t[i][j + 1])
            };
        }
    }
    t
}

/// A longest common subsequence of two strings.
///
/// Ties prefer a match, then advancing in `a`.
pub fn exact_lcs_pair(a: &[u8], b: &[u8]) -> Vec<u8> {
    let t = lcs_suffix_table(a, b);
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(t[0][0] as usize);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] && t[i][j] == t[i + 1][j + 1] + 1 {
            out.push(a[i]);
            i += 1;
            j += 1;
        } else if t[i + 1][j] == t[i][j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// A shortest common supersequence of two strings.
pub fn exact_scs_pair(a: &[u8], b: &[u8]) -> Vec<u8> {
    // table[i][j] = SCS length of a[i..] and b[j..]
    let mut t = vec![vec![0u32; b.len() + 1]; a.len() + 1];
    for i in (0..=a.len()).rev() {
        for j in (0..=b.len()).rev() {
            t[i][j] = if i == a.len() {
                (b.len() - j) as u32
            } else if j == b.len() {
                (a.len() - i) as u32
            } else if a[i] == b[j] {
                t[i + 1][j + 1] + 1
            } else {
                t[i + 1][j].min(t[i][j + 1]) + 1
            };
        }
    }
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(t[0][0] as usize);
    while i < a.len() || j < b.len() {
        if i == a.len() {
            out.push(b[j]);
            j += 1;
        } else if j == b.len() {
            out.push(a[i]);
            i += 1;
        } else if a[i] == b[j] {
            out.push(a[i]);
            i += 1;
            j += 1;
        } else if t[i + 1][j] <= t[i][j + 1] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out
}

/// Exact LCS of a whole dataset, by enumerating subsequences of the shortest
/// sequence from longest to shortest.
pub fn brute_lcs(d: &Dataset, limits: &OracleLimits) -> Result<Sequence> {
    limits.check(d)?;
    let views = d.views();
    let shortest = *views.iter().min_by_key(|s| s.len()).expect("non-empty dataset");
    for len in (0..=shortest.len()).rev() {
        let mut idx: Vec<usize> = (0..len).collect();
        loop {
            let cand: Vec<u8> = idx.iter().map(|&i| shortest[i]).collect();
            if d.is_common_subsequence(&cand) {
                return Ok(Sequence::anon(cand));
            }
            if !next_combination(&mut idx, shortest.len()) {
                break;
            }
        }
    }
    unreachable!("the empty string is a common subsequence")
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact SCS of a whole dataset by breadth-first search over the tuple of
/// consumed prefix lengths. The first time the all-consumed state is reached
/// gives a minimum-length witness.
pub fn brute_scs(d: &Dataset, limits: &OracleLimits) -> Result<Sequence> {
    limits.check(d)?;
    let views = d.views();
    let radix: Vec<usize> = views.iter().map(|s| s.len() + 1).collect();
    let states: usize = radix.iter().product();
    let encode = |pos: &[usize]| pos.iter().zip(&radix).rev().fold(0, |acc, (&p, &r)| acc * r + p);
    let decode = |mut code: usize| -> Vec<usize> {
        radix
            .iter()
            .map(|&r| {
                let p = code % r;
                code /= r;
                p
            })
            .collect()
    };
    let goal: Vec<usize> = views.iter().map(|s| s.len()).collect();
    let goal = encode(&goal);
    let mut parent: Vec<Option<(usize, u8)>> = vec![None; states];
    let mut seen = vec![false; states];
    let mut queue = VecDeque::new();
    seen[0] = true;
    queue.push_back(0usize);
    while let Some(code) = queue.pop_front() {
        if code == goal {
            break;
        }
        let pos = decode(code);
        for &c in d.alphabet().symbols() {
            let mut moved = false;
            let next: Vec<usize> = pos
                .iter()
                .zip(&views)
                .map(|(&p, s)| {
                    if p < s.len() && s[p] == c {
                        moved = true;
                        p + 1
                    } else {
                        p
                    }
                })
                .collect();
            if !moved {
                continue;
            }
            let nc = encode(&next);
            if !seen[nc] {
                seen[nc] = true;
                parent[nc] = Some((code, c));
                queue.push_back(nc);
            }
        }
    }
    let mut out = Vec::new();
    let mut at = goal;
    while let Some((prev, c)) = parent[at] {
        out.push(c);
        at = prev;
    }
    out.reverse();
    Ok(Sequence::anon(out))
}

/// Number of distinct strings of length exactly `len` in `L(p)`.
///
/// Counts strings rather than derivations: the pattern is run as an NFA and
/// the count is carried over sets of NFA positions.
pub fn language_count(
    p: &Pattern,
    len: usize,
    alphabet: &Alphabet,
    limits: &OracleLimits,
) -> Result<u128> {
    if len > limits.max_language_len {
        return Err(Error::OracleLimit {
            what: "language length",
            actual: len,
            limit: limits.max_language_len,
        });
    }
    let text = p.to_bytes();
    let m = text.len();
    let closure = |set: &mut Vec<bool>| {
        for i in 0..m {
            if set[i] && text[i] == b'*' {
                set[i + 1] = true;
            }
        }
    };
    let mut start = vec![false; m + 1];
    start[0] = true;
    closure(&mut start);
    let mut layer: HashMap<Vec<bool>, u128> = HashMap::from([(start, 1)]);
    for _ in 0..len {
        let mut next: HashMap<Vec<bool>, u128> = HashMap::new();
        for (set, count) in &layer {
            for &c in alphabet.symbols() {
                let mut to = vec![false; m + 1];
                for i in 0..m {
                    if !set[i] {
                        continue;
                    }
                    if text[i] == b'*' {
                        to[i] = true;
                    } else if text[i] == c {
                        to[i + 1] = true;
                    }
                }
                if to.iter().any(|&b| b) {
                    closure(&mut to);
                    *next.entry(to).or_default() += count;
                }
            }
        }
        layer = next;
    }
    Ok(layer.iter().filter(|(set, _)| set[m]).map(|(_, c)| c).sum())
}
