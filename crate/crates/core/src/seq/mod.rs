//! Sequences, datasets and wildcard patterns.

mod alphabet;
mod dataset;
mod pattern;

pub use alphabet::{Alphabet, WILDCARD};
pub use dataset::{embed_leftmost, is_subsequence, is_supersequence, Dataset, Sequence};
pub use pattern::{NormalizeMode, Pattern, Token};
