use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The reserved wildcard character. It is never a member of an [`Alphabet`].
pub const WILDCARD: u8 = b'*';

const ABSENT: u8 = u8::MAX;

/// An ordered set of distinct symbols.
///
/// The declared order is the "alphabet order" used for every deterministic
/// tie-break in the heuristics.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
    rank: [u8; 256],
}

impl Alphabet {
    pub fn new(symbols: &[u8]) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::invalid("alphabet must contain at least one symbol"));
        }
        if symbols.len() >= ABSENT as usize {
            return Err(Error::invalid("alphabet has too many symbols"));
        }
        let mut rank = [ABSENT; 256];
        for (i, &c) in symbols.iter().enumerate() {
            if c == WILDCARD {
                return Err(Error::invalid("'*' is reserved and cannot be an alphabet symbol"));
            }
            if !c.is_ascii_graphic() {
                return Err(Error::invalid(format!(
                    "alphabet symbol {:?} is not a printable ASCII character",
                    c as char
                )));
            }
            if rank[c as usize] != ABSENT {
                return Err(Error::invalid(format!("duplicate alphabet symbol {:?}", c as char)));
            }
            rank[c as usize] = i as u8;
        }
        Ok(Alphabet {
            symbols: symbols.to_vec(),
            rank,
        })
    }

    pub fn dna() -> Self {
        Alphabet::new(b"ACGT").expect("static alphabet")
    }

    /// The sorted set of distinct symbols occurring in `seqs`.
    pub fn infer<'a, I>(seqs: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [u8]>,
    {
        let mut seen = [false; 256];
        for s in seqs {
            for &c in s {
                seen[c as usize] = true;
            }
        }
        let symbols: Vec<u8> = (0..=255u8).filter(|&c| seen[c as usize]).collect();
        Alphabet::new(&symbols)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn contains(&self, c: u8) -> bool {
        self.rank[c as usize] != ABSENT
    }

    /// Position of `c` in alphabet order.
    pub fn rank(&self, c: u8) -> Option<usize> {
        match self.rank[c as usize] {
            ABSENT => None,
            r => Some(r as usize),
        }
    }

    pub fn validate(&self, s: &[u8]) -> Result<()> {
        match s.iter().find(|&&c| !self.contains(c)) {
            None => Ok(()),
            Some(&c) => Err(Error::AlphabetMismatch {
                symbol: c as char,
                alphabet: self.to_string(),
            }),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.symbols))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({self})")
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Alphabet::new(s.as_bytes()).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wildcard_and_duplicates() {
        assert!(Alphabet::new(b"AC*").is_err());
        assert!(Alphabet::new(b"ACA").is_err());
        assert!(Alphabet::new(b"").is_err());
    }

    #[test]
    fn infer_sorts_symbols() {
        let a = Alphabet::infer([&b"TGA"[..], b"CA"]).unwrap();
        assert_eq!(a.symbols(), b"ACGT");
        assert_eq!(a.rank(b'G'), Some(2));
        assert_eq!(a.rank(b'N'), None);
    }

    #[test]
    fn declared_order_is_kept() {
        let a = Alphabet::new(b"TGCA").unwrap();
        assert_eq!(a.rank(b'T'), Some(0));
        assert_eq!(a.to_string(), "TGCA");
    }
}
