use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use blindfold_core::game::DEFAULT_STATE_CAP;
use blindfold_core::{
    build_certificate, decide, optimal_length, synthesize, GameSpec, GeneratorSet, Permutation,
    Strategy, VerifyOptions,
};
use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::CliError;
use crate::format::{self, CertificateFile, DecisionFile, StrategyFile, VerdictFile};
use crate::fuzz::{self, DEFAULT_SEED};
use crate::parallel::verify_parallel;
use crate::play;

#[derive(Debug, Parser)]
#[command(name = "blindfold", version, about = "Solve, verify and refute blindfolded counter games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["rotations", "gens"])))]
pub struct SpecArgs {
    /// Number of positions (required with --rotations)
    #[arg(short = 'n')]
    pub n: Option<usize>,
    /// Counter modulus
    #[arg(short = 'm')]
    pub m: u64,
    /// The table may rotate to any orientation
    #[arg(long)]
    pub rotations: bool,
    /// Permutations in image form, inline JSON or a file path; identity is implied
    #[arg(long)]
    pub gens: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the player can force a win
    Decide {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Write an optimal-length winning strategy
    Synth {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Check a strategy file against every start and adversary line
    Verify {
        strategy: PathBuf,
        /// Report a surviving start and adversary line when the strategy loses
        #[arg(long)]
        witness: bool,
        /// Largest m^n accepted
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        cap: u64,
        /// Worker threads, 0 for one per core
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Write an impossibility certificate and fuzz its adversary
    Refute {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
        /// Moves per fuzz case
        #[arg(long, default_value_t = 1000)]
        rounds: usize,
        /// Number of random move sequences
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Play the adversary against a strategy file
    Play {
        strategy: PathBuf,
        /// Start configuration, e.g. "1,0,1,1"; prompted for when absent
        #[arg(long)]
        start: Option<String>,
    },
    /// Time the verifier on a spec
    Bench {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        cap: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Seed for the random strategy used when the spec is unsolvable
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

impl SpecArgs {
    pub fn to_spec(&self) -> Result<GameSpec, CliError> {
        let gens = if self.rotations {
            let n = self
                .n
                .ok_or_else(|| CliError::Usage("--rotations needs -n".into()))?;
            GeneratorSet::rotations(n)
        } else {
            let raw = format::parse_generators(self.gens.as_deref().unwrap_or_default())?;
            let n = match (self.n, raw.first()) {
                (Some(n), _) => n,
                (None, Some(first)) => first.len(),
                (None, None) => return Err(CliError::Usage("empty --gens needs -n".into())),
            };
            let perms = raw
                .into_iter()
                .map(Permutation::new)
                .collect::<Result<Vec<_>, _>>()?;
            GeneratorSet::new(n, perms)?.with_identity()
        };
        Ok(GameSpec::new(self.m, gens)?)
    }
}

#[derive(Serialize)]
struct BenchReport {
    n: usize,
    m: u64,
    generators: usize,
    moves: usize,
    states: u64,
    threads: usize,
    wins: bool,
    seconds: f64,
    transitions: u64,
    transitions_per_second: f64,
    states_per_second: f64,
}

fn emit(doc: &impl Serialize, output: Option<&Path>, stdout: &mut impl Write) -> Result<(), CliError> {
    match output {
        Some(path) => format::write(path, doc),
        None => Ok(stdout.write_all(format::to_canonical(doc).as_bytes())?),
    }
}

fn execute(
    cli: Cli,
    stdin: &mut impl BufRead,
    stdout: &mut impl Write,
    stderr: &mut impl Write,
) -> Result<i32, CliError> {
    match cli.command {
        Command::Decide { spec } => {
            let verdict = decide(&spec.to_spec()?)?;
            emit(&DecisionFile::from(&verdict), None, stdout)?;
            Ok(if verdict.solvable { 0 } else { 1 })
        }
        Command::Synth { spec, output } => {
            let spec = spec.to_spec()?;
            if !decide(&spec)?.solvable {
                writeln!(stderr, "not solvable; run `blindfold refute` for a certificate")?;
                return Ok(1);
            }
            let syn = synthesize(&spec)?;
            emit(&StrategyFile::from_synthesis(&syn), output.as_deref(), stdout)?;
            Ok(0)
        }
        Command::Verify {
            strategy,
            witness,
            cap,
            threads,
            output,
        } => {
            let strategy = format::read::<StrategyFile>(&strategy)?.to_strategy()?;
            let opts = VerifyOptions {
                want_witness: witness,
                state_cap: cap,
                ..VerifyOptions::default()
            };
            let verdict = verify_parallel(&strategy, &opts, threads)?;
            emit(&VerdictFile::from(&verdict), output.as_deref(), stdout)?;
            Ok(if verdict.wins { 0 } else { 1 })
        }
        Command::Refute {
            spec,
            output,
            rounds,
            cases,
            seed,
        } => {
            let spec = spec.to_spec()?;
            let cert = match build_certificate(&spec) {
                Ok(c) => c,
                Err(blindfold_core::Error::Solvable) => {
                    writeln!(stderr, "solvable; run `blindfold synth` for a strategy")?;
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            };
            emit(&CertificateFile::from(&cert), output.as_deref(), stdout)?;
            match fuzz::fuzz_refutation(&spec, &cert, cases, rounds, seed) {
                Ok(r) => {
                    writeln!(stderr, "invariant held: {} cases x {} rounds", r.cases, r.rounds)?;
                    Ok(0)
                }
                Err(e @ blindfold_core::Error::InvariantBroken) => {
                    writeln!(stderr, "INVARIANT BROKEN: {e}")?;
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Play { strategy, start } => {
            let strategy = format::read::<StrategyFile>(&strategy)?.to_strategy()?;
            let spec = strategy.spec();
            let start = start
                .map(|s| play::parse_config(&s, spec.n(), spec.m()))
                .transpose()?;
            let trace = play::play(&strategy, start, stdin, stdout)?;
            Ok(if trace.won() { 0 } else { 1 })
        }
        Command::Bench {
            spec,
            cap,
            threads,
            seed,
        } => {
            let spec = spec.to_spec()?;
            let states = optimal_length(spec.n(), spec.m())? + 1;
            if states > cap {
                return Err(blindfold_core::Error::StateCapExceeded { cap }.into());
            }
            let strategy: Strategy = if decide(&spec)?.solvable {
                synthesize(&spec)?.strategy
            } else {
                let len = (states - 1) as usize;
                fuzz::random_strategy(&spec, len, &mut fuzz::case_rng(seed, 0))
            };
            let opts = VerifyOptions {
                state_cap: cap,
                ..VerifyOptions::default()
            };
            let exec = crate::parallel::Parallel::new(threads);
            let started = Instant::now();
            let verdict = blindfold_core::game::verify_with_executor(&strategy, &opts, &exec)?;
            let seconds = started.elapsed().as_secs_f64().max(1e-9);
            let report = BenchReport {
                n: spec.n(),
                m: spec.m(),
                generators: spec.gens().len(),
                moves: strategy.len(),
                states,
                threads: exec.threads(),
                wins: verdict.wins,
                seconds,
                transitions: verdict.transitions,
                transitions_per_second: verdict.transitions as f64 / seconds,
                states_per_second: verdict.transitions as f64 / spec.gens().len() as f64 / seconds,
            };
            emit(&report, None, stdout)?;
            Ok(0)
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code: 0 success, 1 negative outcome, 2 errors.
pub fn run<I, T>(args: I, stdin: &mut impl BufRead, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    match execute(cli, stdin, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
