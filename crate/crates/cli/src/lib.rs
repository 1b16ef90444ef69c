use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

mod commands;

use commands::Outcome;

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Exact computations in finitely generated nilpotent groups.
///
/// Every command except `extgcd` reads one input document (from FILE, or
/// standard input when FILE is omitted or `-`). Exit status is 0 for answers,
/// 1 for negative decision answers and 2 for input errors.
#[derive(Parser, Debug)]
#[command(name = "nilq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print a summary of the parsed presentation on standard error.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Args, Debug)]
struct Input {
    /// Input document; standard input when omitted.
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of every `word` line.
    Nf(Input),
    /// Whether the single `word` line is the identity.
    Wp(Input),
    /// Whether the `word` line lies in the `subgroup`.
    Member {
        #[command(flatten)]
        input: Input,
        /// Also print the element as a word over the subgroup generators.
        #[arg(long)]
        track: bool,
    },
    /// Full form of the `subgroup`.
    Fullform {
        #[command(flatten)]
        input: Input,
        /// Also print each row as a word over the subgroup generators.
        #[arg(long)]
        track: bool,
    },
    /// Nilpotent presentation of the `subgroup` on its full-form sequence.
    Subpresent(Input),
    /// Relator matrix of the group in full form.
    Quotpres(Input),
    /// Kernel of the homomorphism given by the `map` lines.
    Kernel(Input),
    /// A preimage of the `image` line under the `map` homomorphism.
    Preimage(Input),
    /// Generators of the centralizer of the `word` line.
    Centralizer(Input),
    /// Whether the two `word` lines g, h satisfy g = u^-1 h u, with u.
    Conj(Input),
    /// Whether the second `word` line is a power of the first.
    Power {
        #[command(flatten)]
        input: Input,
        /// Only accept exponents k = ALPHA + BETA·n.
        #[arg(long, num_args = 2, value_names = ["ALPHA", "BETA"], allow_negative_numbers = true)]
        progression: Option<Vec<BigInt>>,
    },
    /// Bounded Bézout coefficients of the given integers.
    Extgcd {
        #[arg(required = true, allow_negative_numbers = true)]
        values: Vec<BigInt>,
    },
    /// Uniform bound on the order of torsion elements.
    Torsionbound(Input),
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> Result<String, String> {
    match &input.file {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))
        }
        _ => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| format!("standard input: {e}"))?;
            Ok(text)
        }
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read, log: &mut String) -> Result<Outcome, String> {
    use Command::*;
    let verbose = cli.verbose;
    let mut doc = |input: &Input| -> Result<commands::Context, String> {
        commands::Context::load(&read_input(input, stdin)?, verbose, log)
    };
    match &cli.command {
        Nf(i) => commands::nf(&doc(i)?),
        Wp(i) => commands::wp(&doc(i)?),
        Member { input, track } => commands::member(&doc(input)?, *track),
        Fullform { input, track } => commands::fullform(&doc(input)?, *track),
        Subpresent(i) => commands::subpresent(&doc(i)?),
        Quotpres(i) => commands::quotpres(&doc(i)?),
        Kernel(i) => commands::kernel(&doc(i)?),
        Preimage(i) => commands::preimage(&doc(i)?),
        Centralizer(i) => commands::centralizer(&doc(i)?),
        Conj(i) => commands::conj(&doc(i)?),
        Power { input, progression } => {
            let prog = progression.as_ref().map(|v| (&v[0], &v[1]));
            commands::power(&doc(input)?, prog)
        }
        Extgcd { values } => Ok(commands::extgcd(values)),
        Torsionbound(i) => commands::torsionbound(&doc(i)?),
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if !e.use_stderr() {
                // --help and --version
                return Output {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                };
            }
            let line = text.lines().next().unwrap_or_default();
            let line = line.strip_prefix("error: ").unwrap_or(line);
            return Output {
                code: 2,
                stdout: String::new(),
                stderr: format!("nilq: {line}\n"),
            };
        }
    };
    let mut stderr = String::new();
    match dispatch(&cli, stdin, &mut stderr) {
        Ok(outcome) => Output {
            code: if outcome.yes { 0 } else { 1 },
            stdout: outcome.text,
            stderr,
        },
        Err(msg) => {
            stderr.push_str(&format!("nilq: {msg}\n"));
            Output {
                code: 2,
                stdout: String::new(),
                stderr,
            }
        }
    }
}
