//! All distinct longest common substrings of several strings, via a suffix
//! automaton of the shortest string.

use crate::tables::SymbolIndex;

const NONE: u32 = u32::MAX;

struct SuffixAutomaton {
    sigma: usize,
    next: Vec<u32>,
    link: Vec<u32>,
    len: Vec<u32>,
    // end position (inclusive) of the first occurrence of the state's strings
    first_end: Vec<u32>,
}

impl SuffixAutomaton {
    fn build(s: &[u8], index: &SymbolIndex) -> Self {
        let sigma = index.len();
        let mut sa = SuffixAutomaton {
            sigma,
            next: vec![NONE; sigma],
            link: vec![NONE],
            len: vec![0],
            first_end: vec![0],
        };
        let mut last = 0u32;
        for (pos, &c) in s.iter().enumerate() {
            let c = index.index(c).expect("symbol indexed");
            let cur = sa.add_state(sa.len[last as usize] + 1, pos as u32);
            let mut p = last;
            while p != NONE && sa.go(p, c) == NONE {
                sa.set(p, c, cur);
                p = sa.link[p as usize];
            }
            if p == NONE {
                sa.link[cur as usize] = 0;
            } else {
                let q = sa.go(p, c);
                if sa.len[p as usize] + 1 == sa.len[q as usize] {
                    sa.link[cur as usize] = q;
                } else {
                    let clone = sa.add_state(sa.len[p as usize] + 1, sa.first_end[q as usize]);
                    let (qs, cs) = (q as usize * sigma, clone as usize * sigma);
                    sa.next.copy_within(qs..qs + sigma, cs);
                    sa.link[clone as usize] = sa.link[q as usize];
                    while p != NONE && sa.go(p, c) == q {
                        sa.set(p, c, clone);
                        p = sa.link[p as usize];
                    }
                    sa.link[q as usize] = clone;
                    sa.link[cur as usize] = clone;
                }
            }
            last = cur;
        }
        sa
    }

    fn add_state(&mut self, len: u32, first_end: u32) -> u32 {
        let id = self.len.len() as u32;
        self.next.extend(std::iter::repeat_n(NONE, self.sigma));
        self.link.push(NONE);
        self.len.push(len);
        self.first_end.push(first_end);
        id
    }

    #[inline]
    fn go(&self, state: u32, c: usize) -> u32 {
        self.next[state as usize * self.sigma + c]
    }

    fn set(&mut self, state: u32, c: usize, to: u32) {
        self.next[state as usize * self.sigma + c] = to;
    }
}

/// Every distinct string of maximum length that is a substring of all
/// `strings`, in order of first occurrence in the shortest string. The result
/// is `[""]` when the strings share no symbol.
pub(crate) fn longest_common_substrings(strings: &[&[u8]]) -> Vec<Vec<u8>> {
    let Some(&shortest) = strings.iter().min_by_key(|s| s.len()) else {
        return vec![Vec::new()];
    };
    let mut symbols: Vec<u8> = shortest.to_vec();
    symbols.sort_unstable();
    symbols.dedup();
    if symbols.is_empty() {
        return vec![Vec::new()];
    }
    let index = SymbolIndex::new(&symbols);
    let sa = SuffixAutomaton::build(shortest, &index);
    let states = sa.len.len();

    // States ordered by decreasing len, for propagation up suffix links.
    let mut order: Vec<usize> = (0..states).collect();
    order.sort_unstable_by_key(|&v| std::cmp::Reverse(sa.len[v]));

    let mut common: Vec<u32> = sa.len.clone();
    let mut matched = vec![0u32; states];
    for other in strings {
        matched.iter_mut().for_each(|m| *m = 0);
        let (mut v, mut l) = (0u32, 0u32);
        for &byte in other.iter() {
            let Some(c) = index.index(byte) else {
                v = 0;
                l = 0;
                continue;
            };
            while v != 0 && sa.go(v, c) == NONE {
                v = sa.link[v as usize];
                l = sa.len[v as usize];
            }
            if sa.go(v, c) != NONE {
                v = sa.go(v, c);
                l += 1;
            } else {
                v = 0;
                l = 0;
            }
            let slot = &mut matched[v as usize];
            *slot = (*slot).max(l);
        }
        for &v in &order {
            let link = sa.link[v];
            if link != NONE && matched[v] > 0 {
                let up = matched[v].min(sa.len[link as usize]);
                let slot = &mut matched[link as usize];
                *slot = (*slot).max(up);
            }
        }
        for v in 0..states {
            common[v] = common[v].min(matched[v]);
        }
    }
    let best = common.iter().skip(1).copied().max().unwrap_or(0);
    if best == 0 {
        return vec![Vec::new()];
    }
    let mut found: Vec<(u32, Vec<u8>)> = (1..states)
        .filter(|&v| common[v] == best)
        .map(|v| {
            let end = sa.first_end[v] as usize + 1;
            let start = end - best as usize;
            (start as u32, shortest[start..end].to_vec())
        })
        .collect();
    found.sort();
    found.dedup_by(|a, b| a.1 == b.1);
    found.into_iter().map(|(_, s)| s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn brute(strings: &[&[u8]]) -> BTreeSet<Vec<u8>> {
        let shortest = strings.iter().min_by_key(|s| s.len()).unwrap();
        for len in (1..=shortest.len()).rev() {
            let found: BTreeSet<Vec<u8>> = shortest
                .windows(len)
                .filter(|w| strings.iter().all(|s| s.windows(len).any(|x| x == *w)))
                .map(|w| w.to_vec())
                .collect();
            if !found.is_empty() {
                return found;
            }
        }
        BTreeSet::from([vec![]])
    }

    #[test]
    fn examples() {
        let got = longest_common_substrings(&[b"*CG*T", b"CG*T", b"CG*T*"]);
        assert_eq!(got, vec![b"CG*T".to_vec()]);
        assert_eq!(longest_common_substrings(&[b"X"]), vec![b"X".to_vec()]);
        let got: BTreeSet<_> = longest_common_substrings(&[b"AB", b"BA"]).into_iter().collect();
        assert_eq!(got, BTreeSet::from([b"A".to_vec(), b"B".to_vec()]));
        assert_eq!(longest_common_substrings(&[b"AAAA", b"CCCC"]), vec![Vec::<u8>::new()]);
        assert_eq!(longest_common_substrings(&[b"", b"AC"]), vec![Vec::<u8>::new()]);
    }

    proptest! {
        #[test]
        fn agrees_with_enumeration(strings in prop::collection::vec("[AB*]{0,12}", 1..5)) {
            let views: Vec<&[u8]> = strings.iter().map(|s| s.as_bytes()).collect();
            let got: BTreeSet<Vec<u8>> = longest_common_substrings(&views).into_iter().collect();
            prop_assert_eq!(got, brute(&views));
        }
    }
}
