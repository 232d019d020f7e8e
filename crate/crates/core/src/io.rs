//! FASTA input and output, seeded dataset generation, and run reports.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, FastaErrorKind, Result};
use crate::lcs::HeuristicResult;
use crate::metrics::PatternReport;
use crate::seq::{Alphabet, Dataset, Sequence, WILDCARD};
use crate::transform::RefinementState;

/// Reads a FASTA file. Sequence lines are concatenated and uppercased; the
/// alphabet is `alphabet` if given, otherwise inferred from the symbols.
pub fn read_fasta(path: impl AsRef<Path>, alphabet: Option<&Alphabet>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    parse_fasta(BufReader::new(file), path, alphabet)
}

pub fn parse_fasta(reader: impl BufRead, path: &Path, alphabet: Option<&Alphabet>) -> Result<Dataset> {
    let err = |line: usize, kind: FastaErrorKind| Error::Fasta {
        path: path.to_path_buf(),
        line,
        kind,
    };
    let mut records: Vec<Sequence> = Vec::new();
    let mut last_line = 0;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            let id = header.split_whitespace().next().ok_or_else(|| err(lineno, FastaErrorKind::EmptyHeader))?;
            records.push(Sequence::new(id, Vec::new()));
            continue;
        }
        let record = records
            .last_mut()
            .ok_or_else(|| err(lineno, FastaErrorKind::SequenceBeforeHeader))?;
        for c in line.bytes().filter(|c| !c.is_ascii_whitespace()) {
            let c = c.to_ascii_uppercase();
            let ok = match alphabet {
                Some(a) => a.contains(c),
                None => c.is_ascii_graphic() && c != WILDCARD,
            };
            if !ok {
                return Err(err(lineno, FastaErrorKind::BadSymbol(c as char)));
            }
            record.symbols.push(c);
        }
    }
    if records.is_empty() {
        return Err(err(last_line.max(1), FastaErrorKind::Empty));
    }
    let alphabet = match alphabet {
        Some(a) => a.clone(),
        None if records.iter().all(Sequence::is_empty) => Alphabet::dna(),
        None => Alphabet::infer(records.iter().map(Sequence::as_bytes))?,
    };
    Dataset::new(alphabet, records)
}

/// Writes one record per sequence, wrapping bodies at 60 columns.
pub fn write_fasta(d: &Dataset, mut w: impl Write) -> Result<()> {
    w.write_all(to_fasta(d).as_bytes())?;
    Ok(())
}

pub fn to_fasta(d: &Dataset) -> String {
    let mut out = String::new();
    for s in d.sequences() {
        let _ = writeln!(out, ">{}", s.id);
        for chunk in s.as_bytes().chunks(60) {
            out.push_str(&String::from_utf8_lossy(chunk));
            out.push('\n');
        }
    }
    out
}

/// Shape of a batch of random datasets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n: usize,
    pub k: usize,
    pub alphabet: Alphabet,
    pub seed: u64,
    pub replicates: usize,
}

impl GeneratorSpec {
    pub fn new(n: usize, k: usize, alphabet: Alphabet, seed: u64, replicates: usize) -> Result<Self> {
        for (name, v) in [("n", n), ("k", k), ("replicates", replicates)] {
            if v == 0 {
                return Err(Error::invalid(format!("{name} must be at least 1")));
            }
        }
        Ok(GeneratorSpec {
            n,
            k,
            alphabet,
            seed,
            replicates,
        })
    }
}

/// One dataset of i.i.d. uniform sequences. Replicate `r` draws from stream
/// `r` of the seeded generator, so it does not depend on how many replicates
/// are requested.
pub fn generate_one(spec: &GeneratorSpec, replicate: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(replicate as u64);
    let symbols = spec.alphabet.symbols();
    let sequences = (0..spec.n)
        .map(|i| {
            let body: Vec<u8> = (0..spec.k).map(|_| symbols[rng.gen_range(0..symbols.len())]).collect();
            Sequence::new(format!("r{}_s{}", replicate + 1, i + 1), body)
        })
        .collect();
    Dataset::new(spec.alphabet.clone(), sequences).expect("generated symbols are in the alphabet")
}

pub fn generate(spec: &GeneratorSpec) -> Vec<Dataset> {
    (0..spec.replicates).map(|r| generate_one(spec, r)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub digest: String,
    pub n: usize,
    pub alphabet: Alphabet,
    pub min_len: usize,
    pub max_len: usize,
    pub avg_len: f64,
}

impl DatasetSummary {
    pub fn of(d: &Dataset) -> Self {
        DatasetSummary {
            digest: d.digest(),
            n: d.len(),
            alphabet: d.alphabet().clone(),
            min_len: d.min_len(),
            max_len: d.max_len(),
            avg_len: d.avg_len(),
        }
    }
}

/// A heuristic LCS or SCS as it appears in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeuristicEntry {
    pub algorithm: String,
    pub value: String,
    pub len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_secs: Option<f64>,
}

impl HeuristicEntry {
    pub fn of(r: &HeuristicResult, timings: bool) -> Self {
        HeuristicEntry {
            algorithm: r.algorithm.clone(),
            value: r.value.as_str().to_string(),
            len: r.len(),
            elapsed_secs: timings.then(|| r.elapsed.as_secs_f64()),
        }
    }
}

/// Everything one CLI run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub dataset: DatasetSummary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub heuristics: Vec<HeuristicEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub patterns: Vec<PatternReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refinement: Option<RefinementState>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, seed: u64, d: &Dataset) -> Self {
        RunReport {
            tool: "pals".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            dataset: DatasetSummary::of(d),
            heuristics: Vec::new(),
            patterns: Vec::new(),
            refinement: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// One row per pattern report and per heuristic, with the columns of a
    /// results table.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("command\talgorithm\tn\tk\tcount\tls\tsensitivity\ttime_s\tresult\n");
        let (n, k) = (self.dataset.n, self.dataset.avg_len);
        let time = |t: Option<f64>| t.map(|t| format!("{t:.6}")).unwrap_or_else(|| "-".into());
        for p in &self.patterns {
            let patterns: Vec<String> = p.patterns.iter().map(|p| p.render()).collect();
            let _ = writeln!(
                out,
                "{}\t{}\t{n}\t{k}\t{}\t{}\t{}\t{}\t{}",
                self.command,
                p.algorithm,
                p.patterns.len(),
                format_ls(p.ls),
                p.sensitivity,
                time(p.elapsed_secs),
                patterns.join(",")
            );
        }
        for h in &self.heuristics {
            let _ = writeln!(
                out,
                "{}\t{}\t{n}\t{k}\t{}\t-\t-\t{}\t{}",
                self.command,
                h.algorithm,
                h.len,
                time(h.elapsed_secs),
                h.value
            );
        }
        out
    }
}

pub fn format_ls(ls: f64) -> String {
    if ls.is_finite() {
        format!("{ls:.6}")
    } else {
        "inf".into()
    }
}
