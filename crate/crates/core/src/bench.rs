//! Trend harness over generated datasets, and the oracle audit behind the
//! `eval` command.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{generate_one, GeneratorSpec};
use crate::lcs::{heuristic_lcs, DepositionParams};
use crate::oracles::{brute_lcs, brute_scs, exact_lcs_pair, exact_scs_pair, OracleLimits};
use crate::pals::{self, Base, PalsParams};
use crate::pals_star::{pals_star, StarParams};
use crate::scs::{alphabet_supersequence, heuristic_scs, reduce_template, DEFAULT_POOL_SIZE};
use crate::seq::{is_subsequence, Alphabet, Dataset, Pattern, Sequence, WILDCARD};

/// Desk-scale caps on generated datasets.
pub const MAX_N: usize = 200;
pub const MAX_K: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    N,
    K,
    MinSensitivity,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::N => "n",
            Axis::K => "k",
            Axis::MinSensitivity => "min_sensitivity",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n" => Ok(Axis::N),
            "k" => Ok(Axis::K),
            "min_sensitivity" | "min-sensitivity" => Ok(Axis::MinSensitivity),
            other => Err(Error::invalid(format!("unknown axis {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendSpec {
    pub base: Base,
    pub axis: Axis,
    pub settings: Vec<f64>,
    /// Sequence count when the axis is not `n`.
    pub n: usize,
    /// Sequence length when the axis is not `k`.
    pub k: usize,
    pub alphabet: Alphabet,
    pub replicates: usize,
    pub seed: u64,
    /// Run PALS* (at the floor `min_sensitivity`, or the axis setting) instead
    /// of PALS. Always on for the min-sensitivity axis.
    pub star: bool,
    pub min_sensitivity: f64,
}

impl TrendSpec {
    pub fn new(base: Base, axis: Axis, settings: Vec<f64>) -> Self {
        TrendSpec {
            base,
            axis,
            settings,
            n: 10,
            k: 100,
            alphabet: Alphabet::dna(),
            replicates: 10,
            seed: 0,
            star: axis == Axis::MinSensitivity,
            min_sensitivity: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.settings.is_empty() {
            return Err(Error::invalid("a trend needs at least one setting"));
        }
        if self.replicates == 0 {
            return Err(Error::invalid("replicates must be at least 1"));
        }
        for &s in &self.settings {
            let (n, k) = self.shape(s);
            if n == 0 || k == 0 || n > MAX_N || k > MAX_K {
                return Err(Error::invalid(format!(
                    "dataset {n}x{k} is outside the bench caps ({MAX_N}x{MAX_K})"
                )));
            }
            if self.axis == Axis::MinSensitivity {
                StarParams::new(s, 1)?;
            }
        }
        StarParams::new(self.min_sensitivity, 1)?;
        Ok(())
    }

    fn shape(&self, setting: f64) -> (usize, usize) {
        match self.axis {
            Axis::N => (setting as usize, self.k),
            Axis::K => (self.n, setting as usize),
            Axis::MinSensitivity => (self.n, self.k),
        }
    }

    fn floor(&self, setting: f64) -> f64 {
        match self.axis {
            Axis::MinSensitivity => setting,
            _ => self.min_sensitivity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub setting: f64,
    #[serde(with = "crate::metrics::ls_serde")]
    pub mean_ls: f64,
    pub mean_sensitivity: f64,
    /// Wall-clock seconds; excluded from equality-sensitive comparisons.
    pub mean_time_secs: f64,
    /// Mean LS of plain PALS on the same datasets, for PALS* runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_pals_ls: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendResult {
    pub base: Base,
    pub axis: Axis,
    pub points: Vec<TrendPoint>,
    pub verdicts: Vec<Verdict>,
}

impl TrendResult {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("base\t{}\tmean_ls\tmean_sensitivity\tmean_time_s\tmean_pals_ls\n", self.axis);
        for p in &self.points {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{:.6}\t{}\n",
                self.base,
                p.setting,
                crate::io::format_ls(p.mean_ls),
                p.mean_sensitivity,
                p.mean_time_secs,
                p.mean_pals_ls.map(crate::io::format_ls).unwrap_or_else(|| "-".into())
            ));
        }
        for v in &self.verdicts {
            out.push_str(&format!("# {}\t{}\n", v.check, if v.pass { "PASS" } else { "FAIL" }));
        }
        out
    }
}

struct Sample {
    ls: f64,
    sensitivity: f64,
    secs: f64,
    pals_ls: Option<f64>,
}

fn sample(spec: &TrendSpec, setting: f64, replicate: usize) -> Sample {
    let (n, k) = spec.shape(setting);
    let gen = GeneratorSpec {
        n,
        k,
        alphabet: spec.alphabet.clone(),
        seed: spec.seed,
        replicates: spec.replicates,
    };
    let d = generate_one(&gen, replicate);
    let params = PalsParams::default().with_seed(spec.seed);
    let started = Instant::now();
    if spec.star {
        let sp = StarParams::new(spec.floor(setting), StarParams::default().max_rounds).expect("validated");
        let r = pals_star(&d, spec.base, &sp, &params);
        let secs = started.elapsed().as_secs_f64();
        let plain = pals::pals(&d, spec.base, &params);
        Sample {
            ls: r.ls,
            sensitivity: r.sensitivity,
            secs,
            pals_ls: Some(plain.ls),
        }
    } else {
        let r = pals::pals(&d, spec.base, &params);
        Sample {
            ls: r.ls,
            sensitivity: r.sensitivity,
            secs: started.elapsed().as_secs_f64(),
            pals_ls: None,
        }
    }
}

/// Means over replicates for every setting, sorted by setting, with the
/// trend verdicts that apply to the axis.
pub fn run_trend(spec: &TrendSpec) -> Result<TrendResult> {
    spec.validate()?;
    let mut settings = spec.settings.clone();
    settings.sort_by(f64::total_cmp);
    settings.dedup();
    let points: Vec<TrendPoint> = settings
        .iter()
        .map(|&setting| {
            let samples: Vec<Sample> = (0..spec.replicates)
                .into_par_iter()
                .map(|r| sample(spec, setting, r))
                .collect();
            let mean = |f: &dyn Fn(&Sample) -> f64| samples.iter().map(f).sum::<f64>() / samples.len() as f64;
            TrendPoint {
                setting,
                mean_ls: mean(&|s| s.ls),
                mean_sensitivity: mean(&|s| s.sensitivity),
                mean_time_secs: mean(&|s| s.secs),
                mean_pals_ls: spec.star.then(|| mean(&|s| s.pals_ls.unwrap_or(f64::NAN))),
            }
        })
        .collect();

    let mut verdicts = Vec::new();
    let full: Vec<&TrendPoint> = points.iter().filter(|p| spec.floor(p.setting) >= 1.0).collect();
    if !full.is_empty() {
        verdicts.push(Verdict {
            check: "(a) sensitivity 100% at min_sensitivity 1".into(),
            pass: full.iter().all(|p| p.mean_sensitivity == 1.0),
        });
    }
    let rising = points.windows(2).all(|w| w[1].mean_ls >= w[0].mean_ls);
    match spec.axis {
        Axis::N => verdicts.push(Verdict {
            check: "(b) mean LS non-decreasing in n".into(),
            pass: rising,
        }),
        Axis::MinSensitivity => verdicts.push(Verdict {
            check: "(c) mean LS non-increasing as min_sensitivity decreases".into(),
            pass: rising,
        }),
        Axis::K => {}
    }
    if spec.star {
        verdicts.push(Verdict {
            check: "PALS* LS <= PALS LS".into(),
            pass: points.iter().all(|p| p.mean_ls <= p.mean_pals_ls.unwrap_or(f64::INFINITY) + 1e-9),
        });
    }
    Ok(TrendResult {
        base: spec.base,
        axis: spec.axis,
        points,
        verdicts,
    })
}

/// One line of the oracle audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRow {
    pub check: String,
    pub cases: usize,
    pub violations: usize,
}

impl EvalRow {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Glob membership by dynamic programming, independent of `Pattern::matches`.
pub fn glob_member(pattern: &[u8], s: &[u8]) -> bool {
    let mut row = vec![false; s.len() + 1];
    row[0] = true;
    for &c in pattern {
        let mut next = vec![false; s.len() + 1];
        if c == WILDCARD {
            let mut any = false;
            for j in 0..=s.len() {
                any |= row[j];
                next[j] = any;
            }
        } else {
            for j in 1..=s.len() {
                next[j] = row[j - 1] && s[j - 1] == c;
            }
        }
        row = next;
    }
    row[s.len()]
}

fn random_dataset(rng: &mut ChaCha8Rng, alphabet: &Alphabet, n_max: usize, len_max: usize) -> Dataset {
    let n = rng.gen_range(1..=n_max);
    let sym = alphabet.symbols();
    let seqs: Vec<Vec<u8>> = (0..n)
        .map(|_| {
            let len = rng.gen_range(0..=len_max);
            (0..len).map(|_| sym[rng.gen_range(0..sym.len())]).collect()
        })
        .collect();
    Dataset::with_alphabet(alphabet.clone(), &seqs).expect("symbols drawn from the alphabet")
}

/// Order check: the pattern's literal segments occur in order, without
/// overlap, as substrings of `host`.
pub fn segments_in_order(p: &Pattern, host: &[u8]) -> bool {
    p.padded().matches(host)
}

/// Compares every heuristic against the exact oracles on `cases` random
/// instances with sequences of length at most `max_len`.
pub fn eval_suite(max_len: usize, cases: usize, seed: u64) -> Result<Vec<EvalRow>> {
    let limits = OracleLimits::default();
    if max_len > limits.max_length {
        return Err(Error::OracleLimit {
            what: "max length",
            actual: max_len,
            limit: limits.max_length,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<EvalRow> = [
        "heuristic LCS is a common subsequence",
        "heuristic SCS is a common supersequence",
        "|LCS| <= |exact LCS|",
        "|exact SCS| <= |SCS| <= |alphabet supersequence|",
        "pairwise |LCS| + |SCS| = |a| + |b|",
        "PALS patterns cover every sequence",
        "stripped pattern is a subsequence of the exact SCS",
        "|stripped pattern| <= |exact LCS|",
        "segments occur in order in the generating LCS/SCS",
        "reduction is idempotent",
        "matcher agrees with DP membership",
    ]
    .iter()
    .map(|c| EvalRow {
        check: (*c).to_string(),
        cases: 0,
        violations: 0,
    })
    .collect();
    let mut tally = |i: usize, ok: bool| {
        rows[i].cases += 1;
        if !ok {
            rows[i].violations += 1;
        }
    };
    for case in 0..cases {
        let alphabet = if case % 2 == 0 { Alphabet::new(b"AB")? } else { Alphabet::dna() };
        let d = random_dataset(&mut rng, &alphabet, limits.max_sequences.min(3), max_len);
        let lcs = heuristic_lcs(&d, &DepositionParams::default().with_seed(case as u64));
        let scs = heuristic_scs(&d, DEFAULT_POOL_SIZE, case as u64);
        let exact_lcs = brute_lcs(&d, &limits)?;
        let exact_scs = brute_scs(&d, &limits)?;
        tally(0, d.is_common_subsequence(lcs.value.as_bytes()));
        tally(1, d.is_common_supersequence(scs.value.as_bytes()));
        tally(2, lcs.len() <= exact_lcs.len());
        tally(3, exact_scs.len() <= scs.len() && scs.len() <= alphabet_supersequence(&d).len());

        let a = &d.sequences()[0];
        let b = &d.sequences()[d.len() - 1];
        tally(4, exact_lcs_pair(a.as_bytes(), b.as_bytes()).len() + exact_scs_pair(a.as_bytes(), b.as_bytes()).len() == a.len() + b.len());

        for base in [Base::Lcs, Base::Scs] {
            let out = pals::pals_output(&d, base, &PalsParams::default().with_seed(case as u64));
            let star = pals_star(&d, base, &StarParams::default(), &PalsParams::default().with_seed(case as u64));
            for p in out.patterns.iter().chain(&star.patterns) {
                let stripped = p.strip_wildcards();
                tally(5, d.sequences().iter().all(|s| p.matches(s.as_bytes())));
                tally(6, is_subsequence(&stripped, exact_scs.as_bytes()));
                tally(7, stripped.len() <= exact_lcs.len());
            }
            for p in &out.patterns {
                tally(8, segments_in_order(p, out.basis.as_bytes()) && segments_in_order(p, out.consensus.as_bytes()));
            }
            for p in &star.patterns {
                tally(8, segments_in_order(p, star.basis.as_deref().unwrap_or("").as_bytes()));
            }
        }

        let once = reduce_template(&d, &alphabet_supersequence(&d))?;
        tally(9, reduce_template(&d, &once)? == Sequence::anon(once.symbols.clone()));

        let s: Vec<u8> = (0..rng.gen_range(0..=max_len.min(8)))
            .map(|_| alphabet.symbols()[rng.gen_range(0..alphabet.size())])
            .collect();
        let text: Vec<u8> = (0..rng.gen_range(0..=5))
            .map(|_| {
                if rng.gen_bool(0.4) {
                    WILDCARD
                } else {
                    alphabet.symbols()[rng.gen_range(0..alphabet.size())]
                }
            })
            .collect();
        tally(10, Pattern::from_bytes(&text).matches(&s) == glob_member(&text, &s));
    }
    Ok(rows)
}

pub fn eval_table(rows: &[EvalRow]) -> String {
    let mut out = String::from("check\tcases\tviolations\tresult\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            r.check,
            r.cases,
            r.violations,
            if r.pass() { "PASS" } else { "FAIL" }
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glob_member_examples() {
        assert!(glob_member(b"*", b""));
        assert!(glob_member(b"A*B", b"AXXB"));
        assert!(!glob_member(b"A*B", b"AXXBA"));
        assert!(glob_member(b"", b""));
        assert!(!glob_member(b"", b"A"));
    }

    #[test]
    fn eval_passes_and_respects_limits() {
        let rows = eval_suite(8, 40, 3).unwrap();
        assert!(rows.iter().all(EvalRow::pass), "{}", eval_table(&rows));
        assert!(rows.iter().all(|r| r.cases > 0));
        assert!(matches!(eval_suite(13, 1, 0), Err(Error::OracleLimit { .. })));
    }

    #[test]
    fn single_setting_trend_passes() {
        let mut spec = TrendSpec::new(Base::Lcs, Axis::N, vec![5.0]);
        spec.k = 20;
        spec.replicates = 2;
        let r = run_trend(&spec).unwrap();
        assert_eq!(r.points.len(), 1);
        assert!(r.passed());
    }

    #[test]
    fn trend_is_seed_determined() {
        let mut spec = TrendSpec::new(Base::Scs, Axis::MinSensitivity, vec![1.0, 0.8]);
        spec.n = 5;
        spec.k = 20;
        spec.replicates = 3;
        let strip = |r: TrendResult| -> Vec<(f64, f64, f64)> {
            r.points.iter().map(|p| (p.setting, p.mean_ls, p.mean_sensitivity)).collect()
        };
        assert_eq!(strip(run_trend(&spec).unwrap()), strip(run_trend(&spec).unwrap()));
    }

    #[test]
    fn trend_rejects_bad_specs() {
        assert!(run_trend(&TrendSpec::new(Base::Lcs, Axis::N, vec![])).is_err());
        assert!(run_trend(&TrendSpec::new(Base::Lcs, Axis::N, vec![500.0])).is_err());
        assert!(run_trend(&TrendSpec::new(Base::Lcs, Axis::MinSensitivity, vec![1.2])).is_err());
    }
}
