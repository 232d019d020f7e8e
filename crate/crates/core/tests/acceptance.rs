//! Acceptance checks. Each test prints one PASS/FAIL line to stderr, which is
//! not captured by the test harness.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use ::pals::bench::{run_trend, segments_in_order, Axis, TrendSpec};
use ::pals::io::{generate, GeneratorSpec};
use ::pals::lcs::{heuristic_lcs, DepositionParams, HeuristicParams, HeuristicResult};
use ::pals::oracles::{brute_lcs, brute_scs, exact_lcs_pair, exact_scs_pair, OracleLimits};
use ::pals::pals::{pals, pals_lcs, pals_scs_from, pals_output, Base, PalsParams};
use ::pals::pals_star::{pals_star, pd_reachable, StarParams};
use ::pals::scs::{alphabet_supersequence, heuristic_scs, reduce_template, DEFAULT_POOL_SIZE};
use ::pals::seq::{is_subsequence, Alphabet, Dataset, Pattern, Sequence, Token};
use ::pals::transform::{refine, scs_to_lcs};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(criterion: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[acceptance] {criterion}: {verdict} ({detail})");
}

fn random_dataset(rng: &mut ChaCha8Rng, alphabet: &Alphabet, n_max: usize, k_max: usize) -> Dataset {
    let n = rng.gen_range(1..=n_max);
    let sym = alphabet.symbols();
    let seqs: Vec<Vec<u8>> = (0..n)
        .map(|_| {
            let len = rng.gen_range(0..=k_max);
            (0..len).map(|_| sym[rng.gen_range(0..sym.len())]).collect()
        })
        .collect();
    Dataset::with_alphabet(alphabet.clone(), &seqs).unwrap()
}

fn alphabet_for(i: usize) -> Alphabet {
    if i % 2 == 0 {
        Alphabet::new(b"AB").unwrap()
    } else {
        Alphabet::dna()
    }
}

/// The instances shared by the oracle, lemma and refinement criteria.
fn oracle_instances() -> Vec<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    (0..200).map(|i| random_dataset(&mut rng, &alphabet_for(i), 3, 12)).collect()
}

#[test]
fn criterion_1_contract_suite() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut violations = 0;
    for i in 0..500 {
        let d = random_dataset(&mut rng, &alphabet_for(i), 8, 40);
        let lcs = heuristic_lcs(&d, &DepositionParams::default().with_seed(i as u64));
        let scs = heuristic_scs(&d, DEFAULT_POOL_SIZE, i as u64);
        if !d.is_common_subsequence(lcs.value.as_bytes()) {
            violations += 1;
        }
        if !d.is_common_supersequence(scs.value.as_bytes()) {
            violations += 1;
        }
    }
    let elapsed = started.elapsed();
    let pass = violations == 0 && elapsed < Duration::from_secs(10);
    report(
        "criterion 1 contract suite",
        pass,
        &format!("500 datasets, {violations} violations, {elapsed:.2?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_2_oracle_sandwich() {
    let limits = OracleLimits::default();
    let mut violations = 0;
    for (i, d) in oracle_instances().iter().enumerate() {
        let lcs = heuristic_lcs(d, &DepositionParams::default().with_seed(i as u64));
        let scs = heuristic_scs(d, DEFAULT_POOL_SIZE, i as u64);
        let (lo, hi) = (brute_lcs(d, &limits).unwrap(), brute_scs(d, &limits).unwrap());
        let ok = lcs.len() <= lo.len() && hi.len() <= scs.len() && scs.len() <= alphabet_supersequence(d).len();
        violations += usize::from(!ok);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut identity = 0;
    for _ in 0..500 {
        let alphabet = alphabet_for(rng.gen_range(0..2));
        let mut draw = || -> Vec<u8> {
            let len = rng.gen_range(0..=30);
            (0..len).map(|_| alphabet.symbols()[rng.gen_range(0..alphabet.size())]).collect()
        };
        let (a, b) = (draw(), draw());
        let l = exact_lcs_pair(&a, &b);
        let s = exact_scs_pair(&a, &b);
        let ok = l.len() + s.len() == a.len() + b.len() && is_subsequence(&l, &a) && is_subsequence(&l, &b);
        identity += usize::from(!ok);
    }
    let pass = violations == 0 && identity == 0;
    report(
        "criterion 2 oracle sandwich",
        pass,
        &format!("200 instances, {violations} sandwich violations; 500 pairs, {identity} identity violations"),
    );
    assert!(pass);
}

#[test]
fn criterion_3_lemma_suite() {
    let limits = OracleLimits::default();
    let (mut cases, mut violations) = (0, 0);
    for (i, d) in oracle_instances().iter().enumerate() {
        let exact_lcs = brute_lcs(d, &limits).unwrap();
        let exact_scs = brute_scs(d, &limits).unwrap();
        let params = PalsParams::default().with_seed(i as u64);
        for base in [Base::Lcs, Base::Scs] {
            let out = pals_output(d, base, &params);
            let star = pals_star(d, base, &StarParams::default(), &params);
            let mut check = |p: &Pattern, hosts: &[&[u8]]| {
                let stripped = p.strip_wildcards();
                let ok = is_subsequence(&stripped, exact_scs.as_bytes())
                    && stripped.len() <= exact_lcs.len()
                    && hosts.iter().all(|h| segments_in_order(p, h));
                cases += 1;
                violations += usize::from(!ok);
            };
            for p in &out.patterns {
                check(p, &[out.basis.as_bytes(), out.consensus.as_bytes()]);
            }
            for p in &star.patterns {
                check(p, &[star.basis.as_deref().unwrap().as_bytes()]);
            }
        }
    }
    let pass = violations == 0;
    report(
        "criterion 3 lemma suite",
        pass,
        &format!("{cases} PALS/PALS* patterns, {violations} violations"),
    );
    assert!(pass);
}

#[test]
fn criterion_4_worked_examples() {
    let mut parts = Vec::new();

    let d = Dataset::from_strs(&["ACGT", "CGGT", "CGTC"]).unwrap();
    let r = pals_lcs(&d, &PalsParams::default());
    let a = r.patterns.iter().any(|p| p.strip_wildcards() == b"CGT");
    parts.push(("4a pals on {ACGT,CGGT,CGTC} gives stripped CGT", a, format!("{:?}", r.patterns)));

    let d = Dataset::from_strs(&["ACGT", "CGGT", "CTGC"]).unwrap();
    let out = pals_scs_from(&d, &Sequence::anon("ACTGGTC"), &DepositionParams::default()).unwrap();
    let b = out.patterns == vec![Pattern::parse("*C*G*")];
    parts.push(("4b pals_scs with SCS ACTGGTC gives *C*G*", b, format!("{:?}", out.patterns)));

    let scs = HeuristicResult {
        value: Sequence::anon("ACTGGTC"),
        algorithm: "fixture".into(),
        params: HeuristicParams::Construction,
        elapsed: Duration::ZERO,
    };
    let lcs = scs_to_lcs(&d, &scs);
    let direct_fixture = "G";
    let c = lcs.value.as_bytes() == b"CG" && lcs.len() > direct_fixture.len();
    parts.push(("4c scs_to_lcs gives CG, longer than G", c, lcs.value.as_str().to_string()));

    let sp = StarParams::new(0.66, 64).unwrap();
    let target = Pattern::parse("*CGT*");
    let dd = d
        .sequences()
        .iter()
        .filter(|s| target.matches(s.as_bytes()))
        .count();
    let reach = pd_reachable(&d, &Pattern::parse("*C*G*"), &target, &sp);
    parts.push((
        "4d pd_refine with one mismatch reaches *CGT* from *C*G*",
        reach,
        format!("*CGT* matches {dd} of {} sequences, support floor {}", d.len(), sp.support(d.len())),
    ));

    let pass = parts.iter().all(|p| p.1);
    let detail: Vec<String> = parts
        .iter()
        .map(|(name, ok, got)| format!("{name}: {} [{got}]", if *ok { "ok" } else { "FAIL" }))
        .collect();
    report("criterion 4 worked examples", pass, &detail.join("; "));
    for (name, ok, got) in &parts {
        assert!(ok, "{name}: got {got}");
    }
}

#[test]
fn criterion_5_sensitivity_reproduction() {
    let (mut runs, mut below) = (0, 0);
    for n in [10, 100] {
        let gen = GeneratorSpec::new(n, 100, Alphabet::dna(), 5, 10).unwrap();
        for (r, d) in generate(&gen).iter().enumerate() {
            let params = PalsParams::default().with_seed(r as u64);
            for base in [Base::Lcs, Base::Scs] {
                for sens in [
                    pals(d, base, &params).sensitivity,
                    pals_star(d, base, &StarParams::default(), &params).sensitivity,
                ] {
                    runs += 1;
                    below += usize::from(sens != 1.0);
                }
            }
        }
    }
    let pass = below == 0;
    report(
        "criterion 5 sensitivity reproduction",
        pass,
        &format!("{runs} PALS/PALS* runs at min_sensitivity 1, {below} below 100%"),
    );
    assert!(pass);
}

#[test]
fn criterion_6_trend_reproduction() {
    let groups: Vec<u64> = (1..=10).collect();
    let mut detail = Vec::new();
    let mut pass = true;
    for base in [Base::Lcs, Base::Scs] {
        let mut rising = 0;
        let mut falling = 0;
        let mut star_better = true;
        for &g in &groups {
            let mut spec = TrendSpec::new(base, Axis::N, vec![10.0, 100.0]);
            spec.seed = g;
            let r = run_trend(&spec).unwrap();
            rising += usize::from(r.points[1].mean_ls >= r.points[0].mean_ls);

            let mut spec = TrendSpec::new(base, Axis::MinSensitivity, vec![1.0, 0.9, 0.8]);
            spec.seed = g;
            let r = run_trend(&spec).unwrap();
            // points are sorted by setting: 0.8, 0.9, 1.0
            falling += usize::from(r.points.windows(2).all(|w| w[0].mean_ls <= w[1].mean_ls));
            star_better &= r.points.iter().all(|p| p.mean_ls <= p.mean_pals_ls.unwrap() + 1e-9);
        }
        let ok = rising >= 8 && falling == groups.len() && star_better;
        pass &= ok;
        detail.push(format!(
            "{base}: LS rises with n in {rising}/10 groups, falls with the floor in {falling}/10, PALS* <= PALS {star_better}"
        ));
    }
    report("criterion 6 trend reproduction", pass, &detail.join("; "));
    assert!(pass);
}

fn random_template(rng: &mut ChaCha8Rng, d: &Dataset) -> Sequence {
    // random interleaving of all sequences plus random extra symbols
    let mut cursors = vec![0usize; d.len()];
    let mut out = Vec::new();
    loop {
        let live: Vec<usize> = (0..d.len()).filter(|&i| cursors[i] < d.sequences()[i].len()).collect();
        if live.is_empty() {
            break;
        }
        if rng.gen_bool(0.2) {
            let sym = d.alphabet().symbols();
            out.push(sym[rng.gen_range(0..sym.len())]);
        }
        let i = live[rng.gen_range(0..live.len())];
        let c = d.sequences()[i].as_bytes()[cursors[i]];
        out.push(c);
        // every sequence whose next symbol is c advances with it
        for j in 0..d.len() {
            if d.sequences()[j].as_bytes().get(cursors[j]) == Some(&c) {
                cursors[j] += 1;
            }
        }
    }
    Sequence::anon(out)
}

#[test]
fn criterion_7_termination_and_monotonicity() {
    const ROUNDS: usize = 8;
    let mut bad = 0;
    let instances = oracle_instances();
    for (i, d) in instances.iter().enumerate() {
        let st = refine(d, ROUNDS, 3, i as u64);
        let mut ok = st.round >= 1 && st.round <= ROUNDS && st.history.len() == st.round;
        let mut prev = (0usize, usize::MAX);
        for h in &st.history {
            ok &= h.lcs_len >= prev.0 && h.scs_len <= prev.1;
            prev = (h.lcs_len, h.scs_len);
        }
        ok &= d.is_common_subsequence(st.best_lcs.value.as_bytes());
        ok &= d.is_common_supersequence(st.best_scs.value.as_bytes());
        bad += usize::from(!ok);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut not_idempotent = 0;
    for i in 0..200 {
        let d = random_dataset(&mut rng, &alphabet_for(i), 6, 20);
        let t = random_template(&mut rng, &d);
        assert!(d.is_common_supersequence(t.as_bytes()));
        let once = reduce_template(&d, &t).unwrap();
        let twice = reduce_template(&d, &once).unwrap();
        not_idempotent += usize::from(once.symbols != twice.symbols);
    }
    let pass = bad == 0 && not_idempotent == 0;
    report(
        "criterion 7 termination and monotonicity",
        pass,
        &format!(
            "{} refine runs, {bad} violations; 200 templates, {not_idempotent} non-idempotent reductions",
            instances.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_performance_sanity() {
    let mut detail = Vec::new();
    let mut pass = true;
    for (n, k, limit) in [(100, 1000, 60), (1000, 100, 30)] {
        let d = &generate(&GeneratorSpec::new(n, k, Alphabet::dna(), 8, 1).unwrap())[0];
        let started = Instant::now();
        let r = pals(d, Base::Lcs, &PalsParams::default());
        let elapsed = started.elapsed();
        let ok = elapsed < Duration::from_secs(limit) && r.sensitivity == 1.0;
        pass &= ok;
        detail.push(format!("n={n} k={k}: {elapsed:.2?} (limit {limit} s)"));
    }
    report("criterion 8 performance sanity", pass, &detail.join("; "));
    assert!(pass);
}

/// Backtracking membership test, written independently of the library
/// matcher.
fn member(p: &[u8], s: &[u8]) -> bool {
    match p.split_first() {
        None => s.is_empty(),
        Some((b'*', rest)) => (0..=s.len()).any(|i| member(rest, &s[i..])),
        Some((&c, rest)) => s.first() == Some(&c) && member(rest, &s[1..]),
    }
}

fn words(alphabet: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<u8>| {
                alphabet.iter().map(move |&c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn criterion_9_matcher_equivalence() {
    let strings = words(b"AB", 8);
    let segments: Vec<Vec<u8>> = words(b"AB", 3).into_iter().filter(|w| !w.is_empty()).collect();
    let mut patterns: BTreeSet<Vec<u8>> = BTreeSet::new();
    for count in 0..=3usize {
        let mut combos: Vec<Vec<&Vec<u8>>> = vec![Vec::new()];
        for _ in 0..count {
            combos = combos
                .iter()
                .flat_map(|c| {
                    segments.iter().map(move |s| {
                        let mut v = c.clone();
                        v.push(s);
                        v
                    })
                })
                .collect();
        }
        for combo in combos {
            for flanks in 0..4u8 {
                let mut tokens = Vec::new();
                if flanks & 1 != 0 {
                    tokens.push(Token::Star);
                }
                for (i, seg) in combo.iter().enumerate() {
                    if i > 0 {
                        tokens.push(Token::Star);
                    }
                    tokens.push(Token::Literal((*seg).clone()));
                }
                if flanks & 2 != 0 {
                    tokens.push(Token::Star);
                }
                patterns.insert(Pattern::from_tokens(tokens).to_bytes());
            }
        }
    }
    let mut mismatches = 0usize;
    for p in &patterns {
        let pat = Pattern::from_bytes(p);
        for s in &strings {
            mismatches += usize::from(pat.matches(s) != member(p, s));
        }
    }
    let pass = mismatches == 0;
    report(
        "criterion 9 matcher equivalence",
        pass,
        &format!(
            "{} patterns x {} strings, {mismatches} mismatches",
            patterns.len(),
            strings.len()
        ),
    );
    assert!(pass);
}
