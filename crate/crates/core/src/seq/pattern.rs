use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::WILDCARD;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    Literal(Vec<u8>),
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizeMode {
    /// Collapse adjacent stars and merge adjacent literals.
    Collapse,
    /// As `Collapse`, and make sure the pattern starts and ends with `*`.
    FinalOutput,
}

/// A pattern over `Σ ∪ {*}` where `*` matches any string, including the
/// empty one.
///
/// Tokens are always kept normalised: no empty literal, no two adjacent
/// literals, no two adjacent stars. The empty token list is the pattern that
/// matches only the empty string.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Pattern {
    tokens: Vec<Token>,
}

impl Pattern {
    pub fn from_tokens(tokens: impl IntoIterator<Item = Token>) -> Self {
        let mut out: Vec<Token> = Vec::new();
        for t in tokens {
            match t {
                Token::Literal(l) if l.is_empty() => {}
                Token::Literal(l) => match out.last_mut() {
                    Some(Token::Literal(prev)) => prev.extend_from_slice(&l),
                    _ => out.push(Token::Literal(l)),
                },
                Token::Star => {
                    if out.last() != Some(&Token::Star) {
                        out.push(Token::Star);
                    }
                }
            }
        }
        Pattern { tokens: out }
    }

    /// Reads `*` as a wildcard and every other byte as a literal.
    pub fn from_bytes(text: &[u8]) -> Self {
        Pattern::from_tokens(text.iter().map(|&c| {
            if c == WILDCARD {
                Token::Star
            } else {
                Token::Literal(vec![c])
            }
        }))
    }

    pub fn parse(text: &str) -> Self {
        Pattern::from_bytes(text.as_bytes())
    }

    pub fn star() -> Self {
        Pattern {
            tokens: vec![Token::Star],
        }
    }

    pub fn literal(s: &[u8]) -> Self {
        Pattern::from_tokens([Token::Literal(s.to_vec())])
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn into_tokens(self) -> Vec<Token> {
        self.tokens
    }

    pub fn normalize(&self, mode: NormalizeMode) -> Pattern {
        let mut p = Pattern::from_tokens(self.tokens.iter().cloned());
        if mode == NormalizeMode::FinalOutput {
            if !p.leading_star() {
                p.tokens.insert(0, Token::Star);
            }
            if !p.trailing_star() {
                p.tokens.push(Token::Star);
            }
        }
        p
    }

    /// Shorthand for `normalize(NormalizeMode::FinalOutput)`.
    pub fn padded(&self) -> Pattern {
        self.normalize(NormalizeMode::FinalOutput)
    }

    pub fn leading_star(&self) -> bool {
        self.tokens.first() == Some(&Token::Star)
    }

    pub fn trailing_star(&self) -> bool {
        self.tokens.last() == Some(&Token::Star)
    }

    pub fn star_count(&self) -> usize {
        self.tokens.iter().filter(|t| **t == Token::Star).count()
    }

    /// Number of non-wildcard characters.
    pub fn literal_count(&self) -> usize {
        self.segments().map(<[u8]>::len).sum()
    }

    /// The literal segments in order.
    pub fn segments(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.tokens.iter().filter_map(|t| match t {
            Token::Literal(l) => Some(l.as_slice()),
            Token::Star => None,
        })
    }

    /// Concatenation of the literal segments.
    pub fn strip_wildcards(&self) -> Vec<u8> {
        self.segments().flatten().copied().collect()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for t in &self.tokens {
            match t {
                Token::Literal(l) => out.extend_from_slice(l),
                Token::Star => out.push(WILDCARD),
            }
        }
        out
    }

    pub fn render(&self) -> String {
        String::from_utf8_lossy(&self.to_bytes()).into_owned()
    }

    /// Membership test for `L(self)`.
    ///
    /// Literal segments are placed leftmost-greedily, with the first (last)
    /// segment pinned to the prefix (suffix) when there is no leading
    /// (trailing) star. Greedy placement is exact because `*` is unbounded.
    pub fn matches(&self, s: &[u8]) -> bool {
        let segs: Vec<&[u8]> = self.segments().collect();
        if segs.is_empty() {
            return self.star_count() > 0 || s.is_empty();
        }
        let mut lo = 0;
        let mut hi = s.len();
        let mut segs = &segs[..];
        if !self.leading_star() {
            let first = segs[0];
            if !s.starts_with(first) {
                return false;
            }
            lo = first.len();
            segs = &segs[1..];
            if segs.is_empty() && !self.trailing_star() {
                return lo == s.len();
            }
        }
        if !self.trailing_star() {
            if let Some((last, rest)) = segs.split_last() {
                if hi - lo < last.len() || !s.ends_with(last) {
                    return false;
                }
                hi -= last.len();
                segs = rest;
            }
        }
        for seg in segs {
            match find(&s[lo..hi], seg) {
                Some(at) => lo += at + seg.len(),
                None => return false,
            }
        }
        true
    }
}

fn find(hay: &[u8], needle: &[u8]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    if needle.len() == 1 {
        return hay.iter().position(|&c| c == needle[0]);
    }
    hay.windows(needle.len()).position(|w| w == needle)
}

impl PartialOrd for Pattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the rendered text.
impl Ord for Pattern {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_bytes().cmp(&other.to_bytes())
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({})", self.render())
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Pattern::parse(&String::deserialize(d)?))
    }
}
