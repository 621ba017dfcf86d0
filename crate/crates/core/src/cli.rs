//! Command-line front end. `run` does all the work so it can be driven from
//! tests; `main` only wires up the process streams.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::chain::{derive_params, interval_layout, IntervalLayout, ProblemParams};
use crate::codec::{build_plan, decode, encode};
use crate::distances::{distance_profile, DistanceProfile};
use crate::error::Error;
use crate::field::{Codeword, MessageVector, PrimeField};
use crate::matrix::{build_air, MatrixFormat};
use crate::table::{plan_document, render_table};
use crate::verifier::{sweep_with, verify_instance_with, VerifyOptions, SWEEP_RANDOM_VECTORS};

#[derive(Debug, Parser)]
#[command(name = "air-index", version, about = "AIR-matrix index codes for symmetric neighboring interference")]
pub struct CommandConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Instance {
    /// Number of messages K.
    #[arg(value_name = "K")]
    pub messages: usize,
    /// Interfering messages after the demand, D.
    #[arg(value_name = "D")]
    pub after: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormatArg {
    Txt,
    Csv,
    Pbm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlanFormat {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Euclid chain and interval layout.
    Chain {
        #[command(flatten)]
        instance: Instance,
    },
    /// The K x (D+1) AIR matrix, streamed row by row.
    Matrix {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum, default_value = "txt")]
        format: MatrixFormatArg,
    },
    /// Down-distance, right-distance and r-th down-distances of a column.
    Profile {
        #[command(flatten)]
        instance: Instance,
        /// Column index.
        #[arg(long = "k", value_name = "COLUMN")]
        column: usize,
    },
    /// Decoding plan of every receiver.
    Plan {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum, default_value = "table")]
        format: PlanFormat,
    },
    /// Encode K symbols (one integer per line) into D+1 code symbols.
    Encode {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, default_value_t = 2)]
        field: u32,
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Defaults to standard output.
        #[arg(long = "out", value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Decode one receiver's message from code symbols and its side-information.
    Decode {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, default_value_t = 2)]
        field: u32,
        #[arg(long)]
        receiver: usize,
        /// D+1 code symbols, one per line.
        #[arg(long, value_name = "PATH")]
        code: PathBuf,
        /// Lines of "index value".
        #[arg(long, value_name = "PATH")]
        side: PathBuf,
    },
    /// Check one instance against the elimination oracle; JSON report.
    Verify {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        fields: Vec<u32>,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
        /// Random message vectors per field, besides the basis vectors.
        #[arg(long, default_value_t = VerifyOptions::default().random_vectors)]
        random: usize,
    },
    /// Verify every instance with 3 <= K <= kmax.
    Sweep {
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        fields: Vec<u32>,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = SWEEP_RANDOM_VECTORS)]
        random: usize,
        /// Worker threads; defaults to one per core.
        #[arg(long)]
        threads: Option<usize>,
    },
}

/// Why a command stopped early.
enum Failure {
    Usage(String),
    Verification,
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn params(i: Instance) -> std::result::Result<ProblemParams, Failure> {
    Ok(derive_params(i.messages, i.after)?)
}

fn field(p: u32) -> std::result::Result<PrimeField, Failure> {
    Ok(PrimeField::new(p)?)
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_symbol(path: &Path, line: usize, s: &str) -> std::result::Result<u32, Failure> {
    s.parse::<u32>()
        .map_err(|_| Failure::Usage(format!("{}:{line}: expected a non-negative integer, got {s:?}", path.display())))
}

fn read_symbols(path: &Path) -> std::result::Result<Vec<u32>, Failure> {
    let text = read_file(path)?;
    data_lines(&text).map(|(n, l)| parse_symbol(path, n, l)).collect()
}

fn read_side(path: &Path) -> std::result::Result<BTreeMap<usize, u32>, Failure> {
    let text = read_file(path)?;
    data_lines(&text)
        .map(|(n, l)| {
            let mut parts = l.split_whitespace();
            let (Some(i), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Failure::Usage(format!("{}:{n}: expected \"index value\"", path.display())));
            };
            let i = i
                .parse::<usize>()
                .map_err(|_| Failure::Usage(format!("{}:{n}: bad index {i:?}", path.display())))?;
            Ok((i, parse_symbol(path, n, v)?))
        })
        .collect()
}

#[derive(Serialize)]
struct ChainOutput<'a> {
    #[serde(flatten)]
    params: ProblemParams,
    lambda_minus1: usize,
    lambdas: &'a [usize],
    betas: &'a [usize],
    l: usize,
    gcd: usize,
    layout: IntervalLayout,
}

#[derive(Serialize)]
struct ProfileOutput {
    #[serde(flatten)]
    params: ProblemParams,
    #[serde(flatten)]
    profile: DistanceProfile,
}

#[derive(Serialize)]
struct DecodeOutput {
    #[serde(flatten)]
    params: ProblemParams,
    receiver: usize,
    field: u32,
    value: u32,
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Chain { instance } => {
            params(instance)?;
            let chain = crate::chain::compute_chain(instance.messages, instance.after)?;
            json_line(
                out,
                &ChainOutput {
                    params: chain.params,
                    lambda_minus1: chain.lambda_minus1,
                    lambdas: &chain.lambdas,
                    betas: &chain.betas,
                    l: chain.l,
                    gcd: chain.gcd(),
                    layout: interval_layout(&chain),
                },
            )
        }
        Command::Matrix { instance, format } => {
            params(instance)?;
            let m = build_air(instance.messages, instance.after)?;
            let format = match format {
                MatrixFormatArg::Txt => MatrixFormat::Txt,
                MatrixFormatArg::Csv => MatrixFormat::Csv,
                MatrixFormatArg::Pbm => MatrixFormat::Pbm,
            };
            let mut w = BufWriter::new(out);
            m.write(&mut w, format)?;
            w.flush()?;
            Ok(())
        }
        Command::Profile { instance, column } => {
            let p = params(instance)?;
            let m = build_air(instance.messages, instance.after)?;
            let profile = distance_profile(&m, column)?;
            json_line(out, &ProfileOutput { params: p, profile })
        }
        Command::Plan { instance, format } => {
            params(instance)?;
            let m = build_air(instance.messages, instance.after)?;
            let doc = plan_document(&m, &build_plan(&m)?)?;
            match format {
                PlanFormat::Json => json_line(out, &doc),
                PlanFormat::Table => Ok(out.write_all(render_table(&doc).as_bytes())?),
            }
        }
        Command::Encode {
            instance,
            field: p,
            input,
            output,
        } => {
            params(instance)?;
            let f = field(p)?;
            let m = build_air(instance.messages, instance.after)?;
            let x = MessageVector::new(read_symbols(&input)?, &f);
            let code = encode(&x, &m, &f)?;
            let mut text = String::new();
            for c in code.symbols() {
                text.push_str(&c.to_string());
                text.push('\n');
            }
            match output {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(())
        }
        Command::Decode {
            instance,
            field: p,
            receiver,
            code,
            side,
        } => {
            let params = params(instance)?;
            let f = field(p)?;
            let m = build_air(instance.messages, instance.after)?;
            let plan = build_plan(&m)?;
            let c = Codeword::new(read_symbols(&code)?, &f);
            let side = read_side(&side)?;
            let value = decode(receiver, &c, &side, &plan, &m, &f)?;
            json_line(
                out,
                &DecodeOutput {
                    params,
                    receiver,
                    field: p,
                    value,
                },
            )
        }
        Command::Verify {
            instance,
            fields,
            seed,
            random,
        } => {
            params(instance)?;
            for &p in &fields {
                field(p)?;
            }
            let opts = VerifyOptions {
                random_vectors: random,
                seed,
                ..VerifyOptions::default()
            };
            let report = verify_instance_with(instance.messages, instance.after, &fields, &opts)?;
            json_line(out, &report)?;
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Sweep {
            kmax,
            fields,
            seed,
            random,
            threads,
        } => {
            if kmax < 3 {
                return Err(Failure::Usage(format!("--kmax must be at least 3, got {kmax}")));
            }
            for &p in &fields {
                field(p)?;
            }
            let opts = VerifyOptions {
                random_vectors: random,
                seed,
                ..VerifyOptions::default()
            };
            let report = match threads {
                Some(0) => return Err(Failure::Usage("--threads must be positive".into())),
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Failure::Usage(e.to_string()))?
                    .install(|| sweep_with(kmax, &fields, &opts))?,
                None => sweep_with(kmax, &fields, &opts)?,
            };
            json_line(out, &report)?;
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status: 0 success, 1 verification failure,
/// 2 invalid arguments or input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CommandConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("error: invalid arguments");
            let _ = writeln!(err, "{first}");
            return 2;
        }
    };
    match dispatch(config.command, out) {
        Ok(()) => 0,
        Err(Failure::Verification) => {
            let _ = writeln!(err, "error: verification failed");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
