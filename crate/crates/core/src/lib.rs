//! Heuristic longest common subsequences and shortest common supersequences
//! of many sequences, and the wildcard patterns derived from them.
//!
//! The crate is organised bottom-up:
//!
//! * [`seq`] holds alphabets, sequences, datasets and `*`-wildcard patterns.
//! * [`oracles`] are exact, exponential solvers used as ground truth.
//! * [`lcs`] and [`scs`] are the deposition-based heuristics.
//! * [`pals`] and [`pals_star`] derive patterns from those heuristics.
//! * [`metrics`] scores pattern sets; [`transform`] converts between LCS and
//!   SCS through patterns and refines both iteratively.
//! * [`io`] reads and writes FASTA, generates random datasets and serialises
//!   reports; [`bench`] runs the trend harness and the oracle audit.

pub mod bench;
pub mod error;
pub mod io;
pub mod lcs;
pub mod metrics;
pub mod oracles;
pub mod pals;
pub mod pals_star;
pub mod scs;
pub mod seq;
mod substring;
mod tables;
pub mod transform;

pub use error::{Error, Result};
pub use lcs::{heuristic_lcs, DepositionParams, HeuristicResult};
pub use metrics::{LanguageModel, PatternReport};
pub use pals::{pals_lcs, pals_scs, Base, MappingMode, PalsParams};
pub use pals_star::{pals_star, StarParams};
pub use scs::heuristic_scs;

pub use seq::{Alphabet, Dataset, Pattern, Sequence, Token};
