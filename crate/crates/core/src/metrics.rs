//! Sensitivity, the language-size model, LS, and one-step maximality.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::pals_star::refinement_moves;
use crate::seq::{Dataset, Pattern};

/// Parameters of the language-size estimate for one pattern on one dataset.
///
/// The size is `|Σ|^(l − p)`. Each wildcard lying between literals stands for
/// a substring of about `(l − p) / q` symbols; that figure is reported but
/// does not enter the size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanguageModel {
    pub alphabet_size: usize,
    /// Mean length of the dataset sequences.
    pub avg_seq_len: f64,
    /// Non-wildcard characters in the pattern.
    pub literal_count: usize,
    pub star_count: usize,
}

impl LanguageModel {
    pub fn new(d: &Dataset, p: &Pattern) -> Self {
        LanguageModel {
            alphabet_size: d.alphabet().size(),
            avg_seq_len: d.avg_len(),
            literal_count: p.literal_count(),
            star_count: p.star_count(),
        }
    }

    /// `log10 |Σ|^(l − p)`, floored at 0 when `l < p`.
    pub fn log10_size(&self) -> f64 {
        let exponent = self.avg_seq_len - self.literal_count as f64;
        if exponent <= 0.0 {
            0.0
        } else {
            exponent * (self.alphabet_size as f64).log10()
        }
    }

    pub fn size(&self) -> f64 {
        let exponent = (self.avg_seq_len - self.literal_count as f64).max(0.0);
        (self.alphabet_size as f64).powf(exponent)
    }

    /// Average substitution length of one wildcard, `(l − p) / q`.
    pub fn substitution_length(&self) -> Option<f64> {
        (self.star_count > 0).then(|| (self.avg_seq_len - self.literal_count as f64).max(0.0) / self.star_count as f64)
    }
}

pub fn language_size_estimate(p: &Pattern, d: &Dataset) -> f64 {
    LanguageModel::new(d, p).size()
}

/// Which sequences are matched by at least one pattern.
pub fn coverage(d: &Dataset, ps: &[Pattern]) -> Vec<bool> {
    d.sequences()
        .iter()
        .map(|s| ps.iter().any(|p| p.matches(s.as_bytes())))
        .collect()
}

pub fn covered_count(d: &Dataset, ps: &[Pattern]) -> usize {
    coverage(d, ps).into_iter().filter(|&c| c).count()
}

/// Fraction of sequences covered by the pattern set.
pub fn sensitivity(d: &Dataset, ps: &[Pattern]) -> f64 {
    covered_count(d, ps) as f64 / d.len() as f64
}

/// `log10` of the summed language-size estimates.
fn log10_total_size(d: &Dataset, ps: &[Pattern]) -> f64 {
    let logs: Vec<f64> = ps.iter().map(|p| LanguageModel::new(d, p).log10_size()).collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return f64::NEG_INFINITY;
    }
    max + logs.iter().map(|x| 10f64.powf(x - max)).sum::<f64>().log10()
}

/// `−log10(specificity)` with specificity = covered / Σ size. Infinite when
/// nothing is covered.
pub fn ls_score(d: &Dataset, ps: &[Pattern]) -> f64 {
    ls_from_parts(d, ps, covered_count(d, ps))
}

pub(crate) fn ls_from_parts(d: &Dataset, ps: &[Pattern], covered: usize) -> f64 {
    if covered == 0 {
        return f64::INFINITY;
    }
    log10_total_size(d, ps) - (covered as f64).log10()
}

/// True iff no single refinement move yields a pattern covering exactly the
/// same sequences.
pub fn check_one_step_maximal(d: &Dataset, p: &Pattern) -> bool {
    let target = coverage(d, std::slice::from_ref(p));
    refinement_moves(p, d.alphabet().symbols())
        .into_iter()
        .all(|q| coverage(d, std::slice::from_ref(&q)) != target)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTiming {
    pub phase: String,
    pub secs: f64,
}

/// Patterns with their scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternReport {
    pub algorithm: String,
    pub patterns: Vec<Pattern>,
    pub sensitivity: f64,
    #[serde(with = "ls_serde")]
    pub ls: f64,
    /// Number of sequences covered.
    pub support: usize,
    /// The heuristic LCS or SCS the patterns were derived from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_secs: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phases: Vec<PhaseTiming>,
}

impl PatternReport {
    pub fn score(
        algorithm: impl Into<String>,
        d: &Dataset,
        patterns: Vec<Pattern>,
        basis: Option<String>,
    ) -> Self {
        let support = covered_count(d, &patterns);
        PatternReport {
            algorithm: algorithm.into(),
            sensitivity: support as f64 / d.len() as f64,
            ls: ls_from_parts(d, &patterns, support),
            support,
            patterns,
            basis,
            elapsed_secs: None,
            phases: Vec::new(),
        }
    }

    pub fn with_phases(mut self, phases: &[(&str, Duration)]) -> Self {
        self.phases = phases
            .iter()
            .map(|(name, t)| PhaseTiming {
                phase: (*name).to_string(),
                secs: t.as_secs_f64(),
            })
            .collect();
        self.elapsed_secs = Some(phases.iter().map(|(_, t)| t.as_secs_f64()).sum());
        self
    }

    /// Drops wall-clock fields so the report depends only on its inputs.
    pub fn without_timings(mut self) -> Self {
        self.elapsed_secs = None;
        self.phases.clear();
        self
    }
}

/// Finite LS values serialise as numbers; the no-coverage sentinel as "inf".
pub(crate) mod ls_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str("inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("bad LS value {t:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::Alphabet;

    fn ds(seqs: &[&str]) -> Dataset {
        Dataset::from_strs(seqs).unwrap()
    }

    fn pats(ps: &[&str]) -> Vec<Pattern> {
        ps.iter().map(|p| Pattern::parse(p)).collect()
    }

    #[test]
    fn sensitivity_examples() {
        let d = ds(&["ACGT", "CGGT", "CGTC"]);
        assert_eq!(sensitivity(&d, &pats(&["*CG*T*"])), 1.0);
        assert_eq!(sensitivity(&d, &pats(&["*"])), 1.0);
        assert_eq!(sensitivity(&ds(&["AA", "CC"]), &pats(&["A*"])), 0.5);
    }

    #[test]
    fn sensitivity_ignores_order_and_duplicates() {
        let d = ds(&["AA", "CC", "AC"]);
        let a = sensitivity(&d, &pats(&["A*", "*C"]));
        assert_eq!(a, sensitivity(&d, &pats(&["*C", "A*", "A*"])));
    }

    #[test]
    fn language_size_examples() {
        let d = Dataset::with_alphabet(Alphabet::dna(), &["ACGTACG"]).unwrap();
        assert_eq!(language_size_estimate(&Pattern::parse("*AC*T*"), &d), 256.0);
        assert_eq!(language_size_estimate(&Pattern::parse("*AC*"), &d), 1024.0);
        assert_eq!(language_size_estimate(&Pattern::parse("ACGTACG"), &d), 1.0);
        // pattern longer than the average sequence floors at 1
        assert_eq!(language_size_estimate(&Pattern::parse("ACGTACGTA"), &d), 1.0);
        let d2 = Dataset::with_alphabet(Alphabet::new(b"AB").unwrap(), &["ABA"]).unwrap();
        assert_eq!(language_size_estimate(&Pattern::star(), &d2), 8.0);
    }

    #[test]
    fn language_size_monotone_in_literals() {
        let d = Dataset::with_alphabet(Alphabet::dna(), &["ACGTACGTAC"]).unwrap();
        let mut prev = f64::INFINITY;
        for p in ["*", "*A*", "*A*C*", "*AC*G*", "*ACG*T*", "ACGT*A*"] {
            let s = language_size_estimate(&Pattern::parse(p), &d);
            assert!(s <= prev);
            prev = s;
        }
    }

    #[test]
    fn ls_examples() {
        let d = ds(&["ACGT", "CGGT", "CGTC"]);
        let ls = ls_score(&d, &pats(&["*CG*T*"]));
        assert!((ls - (-(0.75f64).log10())).abs() < 1e-12);
        assert!((ls - 0.1249).abs() < 1e-3);
        assert_eq!(ls_score(&ds(&["ACGT"]), &pats(&["ACGT"])), 0.0);
        let d = Dataset::with_alphabet(Alphabet::new(b"AB").unwrap(), &["AA"]).unwrap();
        assert!((ls_score(&d, &pats(&["*"])) - 4f64.log10()).abs() < 1e-12);
        assert_eq!(ls_score(&ds(&["AA"]), &pats(&["C"])), f64::INFINITY);
    }

    #[test]
    fn ls_sums_sizes_of_all_patterns() {
        let d = Dataset::with_alphabet(Alphabet::dna(), &["ACGT", "TTTT"]).unwrap();
        // sizes 4^(4-1) each, summed: 128; covered 2
        let ls = ls_score(&d, &pats(&["*A*", "*T*"]));
        assert!((ls - (128f64 / 2.0).log10()).abs() < 1e-9);
    }

    #[test]
    fn more_specific_with_same_coverage_lowers_ls() {
        let d = ds(&["ACGT", "CGGT", "CGTC"]);
        assert!(ls_score(&d, &pats(&["*CG*T*"])) < ls_score(&d, &pats(&["*C*T*"])));
    }

    #[test]
    fn one_step_maximality_examples() {
        assert!(check_one_step_maximal(&ds(&["AC"]), &Pattern::parse("AC")));
        assert!(!check_one_step_maximal(&ds(&["AA"]), &Pattern::star()));
        let d = ds(&["ACGT", "CGGT", "CTGC"]);
        assert!(check_one_step_maximal(&d, &Pattern::parse("*C*G*")));
        assert!(!check_one_step_maximal(&d, &Pattern::parse("*G*")));
        assert!(!check_one_step_maximal(&d, &Pattern::parse("*C*")));
    }

    #[test]
    fn infinite_ls_serialises_explicitly() {
        let d = ds(&["AA"]);
        let r = PatternReport::score("x", &d, pats(&["C"]), None);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"ls\":\"inf\""));
        let back: PatternReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.ls, f64::INFINITY);
    }
}
