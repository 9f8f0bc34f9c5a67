//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use floergrowth_core::groupring::DEFAULT_SEARCH_DEPTH;
use floergrowth_core::intmat::IntMatrix;
use num_bigint::BigUint;
use serde::Deserialize;

use crate::commands::{self, Outcome, PeriodicSource};
use crate::error::CliError;
use crate::input::{self, ClassInput, EndoInput, RepInput};
use crate::report::render_text;

pub const MAX_ITERATES: u32 = 64;
pub const MAX_ORDER: usize = 128;
pub const MAX_DEPTH: u32 = 16;
pub const THREADS_ENV: &str = "FLOERGROWTH_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "floergrowth",
    version,
    about = "Nielsen-Reidemeister invariants and Floer growth bounds for surface maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: OutputFormat,
    /// Exit with status 3 when a result is not certified.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Debug logging and timing on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Args)]
pub struct EndoArgs {
    /// Endomorphism file (JSON or TOML).
    #[arg(long)]
    pub endo: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fox Jacobian of an endomorphism, or the derivatives of one word.
    Fox {
        #[command(flatten)]
        endo: EndoArgs,
        #[arg(long)]
        word: Option<String>,
    },
    /// Reidemeister trace intervals for iterates 1..=N.
    Trace {
        #[command(flatten)]
        endo: EndoArgs,
        #[arg(long, default_value_t = 4)]
        n: u32,
        #[arg(long, default_value_t = DEFAULT_SEARCH_DEPTH)]
        depth: u32,
    },
    /// Twisted Lefschetz zeta function.
    ZetaTwisted {
        #[command(flatten)]
        endo: EndoArgs,
        /// Representation file; the trivial representation by default.
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        order: usize,
    },
    /// Lower and upper bounds for the growth rate.
    Bounds {
        #[command(flatten)]
        endo: EndoArgs,
        #[arg(long)]
        rep: Option<PathBuf>,
        /// Dimension sequence to estimate alongside the bounds.
        #[arg(long)]
        dims: Option<String>,
    },
    /// Growth rate of a sequence.
    Growth {
        /// Comma-separated terms.
        #[arg(long, conflicts_with = "input")]
        sequence: Option<String>,
        /// File holding a JSON/TOML array or `{dims = [...]}`.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Product formula for a periodic class.
    PeriodicZeta {
        #[arg(long)]
        period: u64,
        /// `d:dim` pairs for every divisor `d` of the period.
        #[arg(long, conflicts_with = "spec")]
        dims: Option<String>,
        /// Class spec file.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Also expand the series to this order.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Lefschetz and Nielsen numbers of a toral automorphism.
    Torus {
        /// Row-major entries, e.g. `2,1,1,1`.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, default_value_t = 8)]
        n: u32,
    },
    /// Floer dimensions of a reducible class from its components.
    Assemble {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 8)]
        iterates: u32,
    },
    /// Symplectic zeta series of a dimension sequence.
    Series {
        #[arg(long, conflicts_with = "input")]
        dims: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        order: usize,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

fn check_iterates(n: u32) -> Result<u32, CliError> {
    if n == 0 || n > MAX_ITERATES {
        return Err(CliError::Input(format!("iterate count {n} outside 1..={MAX_ITERATES}")));
    }
    Ok(n)
}

fn check_order(k: usize) -> Result<usize, CliError> {
    if k == 0 || k > MAX_ORDER {
        return Err(CliError::Input(format!("series order {k} outside 1..={MAX_ORDER}")));
    }
    Ok(k)
}

fn check_depth(d: u32) -> Result<u32, CliError> {
    if d > MAX_DEPTH {
        return Err(CliError::Input(format!("search depth {d} exceeds {MAX_DEPTH}")));
    }
    Ok(d)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SequenceFile {
    Bare(Vec<u64>),
    Named { dims: Vec<u64> },
}

fn sequence(inline: Option<&str>, file: Option<&PathBuf>) -> Result<Vec<BigUint>, CliError> {
    match (inline, file) {
        (Some(s), _) => input::parse_big_list(s),
        (None, Some(p)) => {
            let v = match input::read_file::<SequenceFile>(p)? {
                SequenceFile::Bare(v) | SequenceFile::Named { dims: v } => v,
            };
            Ok(v.into_iter().map(BigUint::from).collect())
        }
        (None, None) => Err(CliError::Input("a sequence is required (inline or --input)".into())),
    }
}

fn load_endo(args: &EndoArgs) -> Result<(floergrowth_core::freegroup::Endomorphism, EndoInput), CliError> {
    let e: EndoInput = input::read_file(&args.endo)?;
    Ok((e.endomorphism()?, e))
}

fn load_rep(path: Option<&PathBuf>) -> Result<Option<floergrowth_core::reptheory::Representation>, CliError> {
    path.map(|p| input::read_file::<RepInput>(p)?.representation())
        .transpose()
}

fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Fox { endo, word } => {
            let (f, _) = load_endo(endo)?;
            commands::fox(&f, word.as_deref())
        }
        Command::Trace { endo, n, depth } => {
            let (f, e) = load_endo(endo)?;
            commands::trace(&f, e.extra()?, check_iterates(*n)?, check_depth(*depth)?)
        }
        Command::ZetaTwisted { endo, rep, order } => {
            let (f, e) = load_endo(endo)?;
            commands::zeta_twisted(&f, e.extra()?, load_rep(rep.as_ref())?, check_order(*order)?)
        }
        Command::Bounds { endo, rep, dims } => {
            let (f, e) = load_endo(endo)?;
            let dims = dims
                .as_deref()
                .map(|s| Ok::<_, CliError>(input::parse_big_list(s)?.iter().map(big_to_f64).collect::<Vec<_>>()))
                .transpose()?;
            commands::bounds(&f, e.extra()?, load_rep(rep.as_ref())?, dims.as_deref())
        }
        Command::Growth { sequence: s, input } => {
            let seq = sequence(s.as_deref(), input.as_ref())?;
            check_order(seq.len())?;
            commands::growth(&seq)
        }
        Command::PeriodicZeta {
            period,
            dims,
            spec,
            order,
        } => {
            let order = order.map(check_order).transpose()?;
            match (dims, spec) {
                (Some(d), _) => {
                    commands::periodic(*period, PeriodicSource::Dims(&input::parse_divisor_dims(d)?), order)
                }
                (None, Some(p)) => {
                    let spec = input::read_file::<ClassInput>(p)?.class_spec()?;
                    commands::periodic(*period, PeriodicSource::Class(&spec), order)
                }
                (None, None) => Err(CliError::Input("--dims or --spec is required".into())),
            }
        }
        Command::Torus { matrix, n } => {
            let e = input::parse_int_list(matrix)?;
            if e.len() != 4 {
                return Err(CliError::Input(format!("--matrix needs 4 entries, got {}", e.len())));
            }
            commands::torus(&IntMatrix::from_i64(2, 2, &e), check_iterates(*n)?)
        }
        Command::Assemble { spec, iterates } => {
            let spec = input::read_file::<ClassInput>(spec)?.class_spec()?;
            commands::assemble(&spec, check_iterates(*iterates)?)
        }
        Command::Series { dims, input, order } => {
            let seq = sequence(dims.as_deref(), input.as_ref())?;
            commands::series(&seq, check_order(*order)?)
        }
    }
}

fn big_to_f64(x: &BigUint) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Fox { .. } => "fox",
        Command::Trace { .. } => "trace",
        Command::ZetaTwisted { .. } => "zeta-twisted",
        Command::Bounds { .. } => "bounds",
        Command::Growth { .. } => "growth",
        Command::PeriodicZeta { .. } => "periodic-zeta",
        Command::Torus { .. } => "torus",
        Command::Assemble { .. } => "assemble",
        Command::Series { .. } => "series",
    }
}

/// Caps the global rayon pool from `FLOERGROWTH_THREADS`; only the first call has an effect.
pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .is_err()
        {
            log::debug!("thread pool already initialised");
        }
    }
}

/// Runs one invocation without touching the process streams.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { crate::error::EXIT_INPUT } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Output {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    configure_threads();
    let start = Instant::now();
    let result = dispatch(&cli.command);
    let mut stderr = String::new();
    if cli.verbose {
        stderr.push_str(&format!(
            "{}: {:.3} ms\n",
            command_name(&cli.command),
            start.elapsed().as_secs_f64() * 1e3
        ));
    }
    match result {
        Ok(out) => {
            let stdout = match cli.format {
                OutputFormat::Json => serde_json::to_string_pretty(&out.report).expect("serializable") + "\n",
                OutputFormat::Text => render_text(&out.report),
            };
            let mut code = 0;
            if !out.uncertified.is_empty() {
                let err = CliError::Uncertified(out.uncertified.join("; "));
                stderr.push_str(&format!("warning: {err}\n"));
                if cli.strict {
                    code = err.exit_code();
                }
            }
            Output { code, stdout, stderr }
        }
        Err(e) => {
            stderr.push_str(&format!("error: {e}\n"));
            Output {
                code: e.exit_code(),
                stdout: String::new(),
                stderr,
            }
        }
    }
}

/// Whether `--verbose` appears before any `--`.
pub fn wants_verbose(args: &[OsString]) -> bool {
    args.iter()
        .take_while(|a| *a != "--")
        .any(|a| a == "--verbose" || a == "-v")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits() {
        assert!(check_iterates(64).is_ok());
        assert!(check_iterates(65).is_err());
        assert!(check_iterates(0).is_err());
        assert!(check_order(128).is_ok());
        assert!(check_order(129).is_err());
        assert!(check_depth(16).is_ok());
        assert!(check_depth(17).is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let out = run(["floergrowth", "nonsense"]);
        assert_eq!(out.code, 2);
        let out = run(["floergrowth", "torus", "--matrix", "2,1,1", "--n", "3"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("4 entries"));
        let out = run(["floergrowth", "torus", "--matrix", "2,1,1,1", "--n", "65"]);
        assert_eq!(out.code, 2);
    }

    #[test]
    fn help_exits_0() {
        let out = run(["floergrowth", "--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("zeta-twisted"));
    }
}
