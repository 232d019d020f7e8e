//! Command-line front end. `run` parses arguments, executes one verb and
//! writes its report; `main` only maps the outcome to an exit status.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use pals::bench::{eval_suite, eval_table, run_trend, Axis, TrendSpec};
use pals::io::{parse_fasta, read_fasta, to_fasta, GeneratorSpec, HeuristicEntry, RunReport};
use pals::lcs::{heuristic_lcs, heuristic_lcs_candidates, DepositionParams};
use pals::metrics::PatternReport;
use pals::pals::{pals, Base, MappingMode, PalsParams};
use pals::pals_star::{pals_star, StarParams};
use pals::scs::{run_scs, ScsAlgorithm, DEFAULT_POOL_SIZE};
use pals::transform::{lcs_to_scs_with, refine, scs_to_lcs};
use pals::{Alphabet, Dataset, Error};

#[derive(Debug, Parser)]
#[command(name = "pals", version, about = "Heuristic LCS/SCS of many sequences and the wildcard patterns built on them")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "PALS_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Declared alphabet, in tie-break order (inferred and sorted otherwise).
    #[arg(long, global = true)]
    pub alphabet: Option<String>,
    /// Report format (default json; `eval` defaults to its table).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timings; without this flag output depends only on
    /// the input, the seed and the flags.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    Lcs,
    Scs,
}

impl From<BaseArg> for Base {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::Lcs => Base::Lcs,
            BaseArg::Scs => Base::Scs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MappingArg {
    Aligned,
    PerSequence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScsAlgoArg {
    DepositionReduction,
    Alphabet,
    SumHeight,
    MinHeight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    N,
    K,
    MinSensitivity,
}

#[derive(Debug, Args)]
pub struct Input {
    /// FASTA file, or `-` for stdin.
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct HeuristicOpts {
    /// Deposition search window (default 2·|Σ|).
    #[arg(long)]
    pub window: Option<usize>,
    /// SCS template pool size.
    #[arg(long, default_value_t = DEFAULT_POOL_SIZE)]
    pub pool: usize,
}

impl HeuristicOpts {
    fn pals_params(&self, seed: u64) -> PalsParams {
        let mut p = PalsParams::default().with_seed(seed);
        p.lcs.window = self.window;
        p.pool_size = self.pool;
        p
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate random datasets as FASTA.
    Gen {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        replicates: usize,
    },
    /// Heuristic longest common subsequence.
    Lcs {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        opts: HeuristicOpts,
        /// Report the distinct results of this many consecutive seeds.
        #[arg(long, default_value_t = 1)]
        candidates: usize,
    },
    /// Heuristic shortest common supersequence.
    Scs {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        opts: HeuristicOpts,
        #[arg(long, value_enum, default_value_t = ScsAlgoArg::DepositionReduction)]
        algo: ScsAlgoArg,
    },
    /// Patterns from the heuristic LCS or SCS.
    Pals {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        opts: HeuristicOpts,
        #[arg(long, value_enum, default_value_t = BaseArg::Lcs)]
        base: BaseArg,
        #[arg(long, value_enum, default_value_t = MappingArg::Aligned)]
        mapping: MappingArg,
    },
    /// Patterns with fewer wildcards under a sensitivity floor.
    PalsStar {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        opts: HeuristicOpts,
        #[arg(long, value_enum, default_value_t = BaseArg::Lcs)]
        base: BaseArg,
        #[arg(long, default_value_t = 1.0)]
        min_sensitivity: f64,
        #[arg(long, default_value_t = 64)]
        max_rounds: usize,
        /// Let refinement leave the literal order of the generating LCS/SCS.
        #[arg(long)]
        free_order: bool,
    },
    /// Derive an LCS from the heuristic SCS, or an SCS from the heuristic LCS.
    Transform {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        opts: HeuristicOpts,
        #[arg(long, value_enum)]
        from: BaseArg,
    },
    /// Alternate both transforms while either result improves.
    Refine {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 10)]
        rounds: usize,
        #[arg(long, default_value_t = 3)]
        candidates: usize,
    },
    /// Check the heuristics against exact solvers on small random inputs.
    Eval {
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
    /// Mean LS and sensitivity along one axis over generated datasets.
    Bench {
        #[arg(long, value_enum, default_value_t = BaseArg::Lcs)]
        base: BaseArg,
        #[arg(long, value_enum, default_value_t = AxisArg::N)]
        axis: AxisArg,
        /// Comma-separated axis values.
        #[arg(long, value_delimiter = ',', required = true)]
        settings: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        replicates: usize,
        /// Run PALS* at this floor (the min-sensitivity axis always runs PALS*).
        #[arg(long)]
        min_sensitivity: Option<f64>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) => e.exit_code(),
            CliError::Core(_) => 1,
            CliError::Failed(_) => 1,
        }
    }
}

fn declared_alphabet(g: &Global) -> Result<Option<Alphabet>, CliError> {
    g.alphabet
        .as_deref()
        .map(|a| Alphabet::new(a.to_ascii_uppercase().as_bytes()))
        .transpose()
        .map_err(CliError::from)
}

fn load(input: &Path, g: &Global) -> Result<Dataset, CliError> {
    let alphabet = declared_alphabet(g)?;
    if input == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(Error::from)?;
        return Ok(parse_fasta(text.as_bytes(), Path::new("<stdin>"), alphabet.as_ref())?);
    }
    read_fasta(input, alphabet.as_ref()).map_err(|e| match e {
        Error::Io(io) => CliError::Failed(format!("{}: {io}", input.display())),
        e => e.into(),
    })
}

fn finish(report: PatternReport, timings: bool) -> PatternReport {
    if timings {
        report
    } else {
        report.without_timings()
    }
}

fn render(report: &RunReport, format: Option<Format>) -> Result<String, CliError> {
    Ok(match format.unwrap_or(Format::Json) {
        Format::Json => report.to_json()?,
        Format::Tsv => report.to_tsv(),
    })
}

fn emit(text: &str, g: &Global, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &g.out {
        Some(path) => std::fs::write(path, text).map_err(Error::from)?,
        None => stdout.write_all(text.as_bytes()).map_err(Error::from)?,
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the verb. Output
/// goes to `stdout` unless `--out` is given. Returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> Result<i32, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    execute(cli, stdout)
}

pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let g = &cli.global;
    let seed = g.seed;
    let text = match cli.command {
        Command::Gen { n, k, replicates } => {
            let alphabet = declared_alphabet(g)?.unwrap_or_else(Alphabet::dna);
            let spec = GeneratorSpec::new(n, k, alphabet, seed, replicates)?;
            pals::io::generate(&spec).iter().map(to_fasta).collect::<String>()
        }
        Command::Lcs { input, opts, candidates } => {
            let d = load(&input.input, g)?;
            let params = DepositionParams {
                window: opts.window,
                ..DepositionParams::default().with_seed(seed)
            };
            let mut report = RunReport::new("lcs", seed, &d);
            let results = if candidates > 1 {
                heuristic_lcs_candidates(&d, &params, candidates)
            } else {
                vec![heuristic_lcs(&d, &params)]
            };
            report.heuristics = results.iter().map(|r| HeuristicEntry::of(r, g.timings)).collect();
            render(&report, g.format)?
        }
        Command::Scs { input, opts, algo } => {
            let d = load(&input.input, g)?;
            let algo = match algo {
                ScsAlgoArg::DepositionReduction => ScsAlgorithm::DepositionReduction,
                ScsAlgoArg::Alphabet => ScsAlgorithm::Alphabet,
                ScsAlgoArg::SumHeight => ScsAlgorithm::SumHeight,
                ScsAlgoArg::MinHeight => ScsAlgorithm::MinHeight,
            };
            let mut report = RunReport::new("scs", seed, &d);
            report.heuristics.push(HeuristicEntry::of(&run_scs(&d, algo, opts.pool, seed), g.timings));
            render(&report, g.format)?
        }
        Command::Pals { input, opts, base, mapping } => {
            let d = load(&input.input, g)?;
            let mut params = opts.pals_params(seed);
            params.mapping = match mapping {
                MappingArg::Aligned => MappingMode::Aligned,
                MappingArg::PerSequence => MappingMode::PerSequence,
            };
            let mut report = RunReport::new("pals", seed, &d);
            report.patterns.push(finish(pals(&d, base.into(), &params), g.timings));
            render(&report, g.format)?
        }
        Command::PalsStar {
            input,
            opts,
            base,
            min_sensitivity,
            max_rounds,
            free_order,
        } => {
            let d = load(&input.input, g)?;
            let mut sp = StarParams::new(min_sensitivity, max_rounds)?;
            sp.keep_basis_order = !free_order;
            let mut report = RunReport::new("pals-star", seed, &d);
            report
                .patterns
                .push(finish(pals_star(&d, base.into(), &sp, &opts.pals_params(seed)), g.timings));
            render(&report, g.format)?
        }
        Command::Transform { input, opts, from } => {
            let d = load(&input.input, g)?;
            let params = opts.pals_params(seed);
            let mut report = RunReport::new("transform", seed, &d);
            let (source, derived) = match from {
                BaseArg::Scs => {
                    let scs = run_scs(&d, ScsAlgorithm::DepositionReduction, params.pool_size, seed);
                    let lcs = scs_to_lcs(&d, &scs);
                    (scs, lcs)
                }
                BaseArg::Lcs => {
                    let lcs = heuristic_lcs(&d, &params.lcs);
                    let scs = lcs_to_scs_with(&d, &lcs, params.pool_size, seed);
                    (lcs, scs)
                }
            };
            report.heuristics = vec![HeuristicEntry::of(&source, g.timings), HeuristicEntry::of(&derived, g.timings)];
            render(&report, g.format)?
        }
        Command::Refine { input, rounds, candidates } => {
            if rounds == 0 {
                return Err(CliError::Failed("--rounds must be at least 1".into()));
            }
            let d = load(&input.input, g)?;
            let state = refine(&d, rounds, candidates, seed);
            let mut report = RunReport::new("refine", seed, &d);
            report.heuristics = vec![
                HeuristicEntry::of(&state.best_lcs, g.timings),
                HeuristicEntry::of(&state.best_scs, g.timings),
            ];
            report.patterns.push(state.best_patterns.clone());
            report.refinement = Some(state);
            render(&report, g.format)?
        }
        Command::Eval { max_len, cases } => {
            let rows = eval_suite(max_len, cases, seed)?;
            let text = match g.format {
                Some(Format::Json) => serde_json::to_string_pretty(&rows).map_err(Error::from)? + "\n",
                _ => eval_table(&rows),
            };
            emit(&text, g, stdout)?;
            return Ok(if rows.iter().all(|r| r.pass()) { 0 } else { 1 });
        }
        Command::Bench {
            base,
            axis,
            settings,
            n,
            k,
            replicates,
            min_sensitivity,
        } => {
            let axis = match axis {
                AxisArg::N => Axis::N,
                AxisArg::K => Axis::K,
                AxisArg::MinSensitivity => Axis::MinSensitivity,
            };
            let mut spec = TrendSpec::new(base.into(), axis, settings);
            spec.n = n;
            spec.k = k;
            spec.replicates = replicates;
            spec.seed = seed;
            if let Some(alphabet) = declared_alphabet(g)? {
                spec.alphabet = alphabet;
            }
            if let Some(f) = min_sensitivity {
                spec.star = true;
                spec.min_sensitivity = f;
            }
            let mut result = run_trend(&spec)?;
            if !g.timings {
                result.points.iter_mut().for_each(|p| p.mean_time_secs = 0.0);
            }
            match g.format.unwrap_or(Format::Json) {
                Format::Json => serde_json::to_string_pretty(&result).map_err(Error::from)? + "\n",
                Format::Tsv => result.to_tsv(),
            }
        }
    };
    emit(&text, g, stdout)?;
    Ok(0)
}
