use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::Alphabet;
use crate::error::{Error, Result};

/// A named symbol string.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequence {
    pub id: String,
    #[serde(with = "bytes_as_str")]
    pub symbols: Vec<u8>,
}

impl Sequence {
    pub fn new(id: impl Into<String>, symbols: impl Into<Vec<u8>>) -> Self {
        Sequence {
            id: id.into(),
            symbols: symbols.into(),
        }
    }

    /// An anonymous sequence, used for heuristic outputs.
    pub fn anon(symbols: impl Into<Vec<u8>>) -> Self {
        Sequence::new("", symbols)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.symbols
    }

    pub fn as_str(&self) -> &str {
        // Symbols are validated printable ASCII (or come from such input).
        std::str::from_utf8(&self.symbols).unwrap_or("<non-utf8>")
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.id.is_empty() {
            write!(f, "{:?}", self.as_str())
        } else {
            write!(f, "{}:{:?}", self.id, self.as_str())
        }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A non-empty, ordered set of sequences over one alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    alphabet: Alphabet,
    sequences: Vec<Sequence>,
}

impl Dataset {
    pub fn new(alphabet: Alphabet, sequences: Vec<Sequence>) -> Result<Self> {
        if sequences.is_empty() {
            return Err(Error::invalid("a dataset needs at least one sequence"));
        }
        for s in &sequences {
            alphabet.validate(&s.symbols)?;
        }
        Ok(Dataset {
            alphabet,
            sequences,
        })
    }

    /// Builds a dataset with ids `s1..sn` and an alphabet inferred from the
    /// symbols. When every string is empty the alphabet falls back to DNA.
    pub fn from_strs<S: AsRef<[u8]>>(seqs: &[S]) -> Result<Self> {
        let alphabet = if seqs.iter().all(|s| s.as_ref().is_empty()) {
            Alphabet::dna()
        } else {
            Alphabet::infer(seqs.iter().map(|s| s.as_ref()))?
        };
        Dataset::with_alphabet(alphabet, seqs)
    }

    pub fn with_alphabet<S: AsRef<[u8]>>(alphabet: Alphabet, seqs: &[S]) -> Result<Self> {
        let sequences = seqs
            .iter()
            .enumerate()
            .map(|(i, s)| Sequence::new(format!("s{}", i + 1), s.as_ref()))
            .collect();
        Dataset::new(alphabet, sequences)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn views(&self) -> Vec<&[u8]> {
        self.sequences.iter().map(|s| s.as_bytes()).collect()
    }

    pub fn max_len(&self) -> usize {
        self.sequences.iter().map(Sequence::len).max().unwrap_or(0)
    }

    pub fn min_len(&self) -> usize {
        self.sequences.iter().map(Sequence::len).min().unwrap_or(0)
    }

    pub fn avg_len(&self) -> f64 {
        let total: usize = self.sequences.iter().map(Sequence::len).sum();
        total as f64 / self.sequences.len() as f64
    }

    /// True iff `s` is a subsequence of every sequence.
    pub fn is_common_subsequence(&self, s: &[u8]) -> bool {
        self.sequences.iter().all(|q| is_subsequence(s, &q.symbols))
    }

    /// True iff every sequence is a subsequence of `s`.
    pub fn is_common_supersequence(&self, s: &[u8]) -> bool {
        self.sequences.iter().all(|q| is_subsequence(&q.symbols, s))
    }

    /// Hex SHA-256 over the alphabet and the `(id, symbols)` records.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.alphabet.symbols());
        h.update(b"\n");
        for s in &self.sequences {
            h.update(s.id.as_bytes());
            h.update(b"\t");
            h.update(&s.symbols);
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }
}

/// True iff `a` embeds in `b` preserving order.
pub fn is_subsequence(a: &[u8], b: &[u8]) -> bool {
    let mut it = b.iter();
    a.iter().all(|c| it.any(|d| d == c))
}

/// True iff `b` embeds in `a` preserving order.
pub fn is_supersequence(a: &[u8], b: &[u8]) -> bool {
    is_subsequence(b, a)
}

/// Positions of the leftmost-greedy embedding of `needle` into `hay`.
pub fn embed_leftmost(needle: &[u8], hay: &[u8]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(needle.len());
    let mut j = 0;
    for &c in needle {
        while j < hay.len() && hay[j] != c {
            j += 1;
        }
        if j == hay.len() {
            return None;
        }
        out.push(j);
        j += 1;
    }
    Some(out)
}

mod bytes_as_str {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&String::from_utf8_lossy(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        Ok(String::deserialize(d)?.into_bytes())
    }
}
