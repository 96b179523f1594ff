mod commands;
mod output;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polcoul::{Convention, Error, PhysicalParamsF64};

use crate::output::{flatten, Table};

#[derive(Parser, Debug)]
#[command(name = "polcoul", version, about = "Radial analysis of a polarizable scalar particle in a Coulomb field")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Turning points, regime label and classical motion intervals.
    Regimes(RegimesArgs),
    /// Energy at which the bare quartic first acquires a positive double root.
    Bifurcation(BifurcationArgs),
    /// Ritz minimum of the energy-equation root over the trial decay rate.
    Variational(VariationalArgs),
    /// Double confluent Heun parameters.
    Heun(HeunArgs),
    /// Numerical bound state f(r), C(r) from shooting.
    Wavefunction(ShootArgs),
    /// All fifteen field components built from the numerical C(r).
    Reconstruct(ReconstructArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 0.75)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub j: i64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub sigma: f64,
}

impl ParamArgs {
    pub fn params(&self) -> Result<PhysicalParamsF64, Failure> {
        if self.j < 0 {
            return Err(Failure::validation(format!("j must be a non-negative integer, got {}", self.j)));
        }
        let j = u32::try_from(self.j).map_err(|_| Failure::validation(format!("j = {} is too large", self.j)))?;
        Ok(PhysicalParamsF64::new(self.epsilon, self.mass, self.alpha, j, self.sigma)?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format; defaults to json for reports and csv for profiles.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the primary output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConventionArg {
    /// r² coefficient −J² = α² − j(j+1).
    #[value(alias = "section2")]
    Shifted,
    /// r² coefficient −j(j+1).
    #[value(alias = "section4")]
    Bare,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Shifted => Convention::CoulombShifted,
            ConventionArg::Bare => Convention::Bare,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignArg {
    #[value(name = "+", alias = "plus")]
    Plus,
    #[value(name = "-", alias = "minus")]
    Minus,
}

#[derive(Args, Debug)]
pub struct RegimesArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value = "shifted")]
    pub convention: ConventionArg,
    /// Also emit N samples of (r, P²(r)) as CSV.
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BifurcationArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Sign of e to search; both signs are tried when omitted.
    #[arg(long, value_enum, allow_hyphen_values = true)]
    pub sign: Option<SignArg>,
    /// Explicit search bracket in e.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub bracket: Option<Vec<f64>>,
    /// Emit N residual samples over [LO, HI] as CSV.
    #[arg(long, num_args = 3, value_names = ["LO", "HI", "N"], allow_negative_numbers = true)]
    pub scan: Option<Vec<String>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchArg {
    Root1,
    Root2,
}

#[derive(Args, Debug)]
pub struct VariationalArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value = "root2")]
    pub branch: BranchArg,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.05, 3.0])]
    pub kappa_range: Vec<f64>,
    /// Emit (kappa, eps1, eps2) as CSV.
    #[arg(long, conflicts_with = "wavefunction")]
    pub curves: bool,
    /// Emit (r, C, P²) of the optimal trial state as CSV.
    #[arg(long)]
    pub wavefunction: bool,
    /// Rows in the emitted table.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct HeunArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Branch of D = ±4A.
    #[arg(long, value_enum, default_value = "+", allow_hyphen_values = true)]
    pub sign: SignArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ShootArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Use this dimensionless energy instead of shooting for the eigenvalue.
    #[arg(long, allow_negative_numbers = true)]
    pub energy: Option<f64>,
    /// Energy bracket scanned for the lowest eigenvalue.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.05, 0.999])]
    pub bracket: Vec<f64>,
    /// Matching radius; defaults to the peak of the variational trial state.
    #[arg(long)]
    pub match_r: Option<f64>,
    /// Rows in the emitted profile.
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub shoot: ShootArgs,
    /// The (±) sign of the field-strength equations.
    #[arg(long, value_enum, default_value = "+", allow_hyphen_values = true)]
    pub sign: SignArg,
    /// Take the mass symbol as m = M instead of m = iM.
    #[arg(long)]
    pub real_mass: bool,
}

/// Failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const VALIDATION: u8 = 1;
    pub const DEGENERATE: u8 = 2;
    pub const NO_SOLUTION: u8 = 3;

    pub fn validation(message: impl Into<String>) -> Self {
        Self { code: Self::VALIDATION, message: message.into() }
    }

    pub fn no_solution(message: impl Into<String>) -> Self {
        Self { code: Self::NO_SOLUTION, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParams(_) | Error::Domain(_) => Self::VALIDATION,
            Error::MasslessShell { .. } | Error::DegenerateA => Self::DEGENERATE,
            _ => Self::NO_SOLUTION,
        };
        Self { code, message: e.to_string() }
    }
}

/// What a subcommand produced: a report and possibly a table.
pub struct Output {
    pub report: serde_json::Value,
    pub table: Option<Table>,
}

fn to_value<S: serde::Serialize>(s: &S) -> serde_json::Value {
    // round-trip through text so the fixed float formatting is what gets parsed
    let text = serde_json::to_string(s).expect("report serializes");
    serde_json::from_str(&text).expect("report reparses")
}

impl Output {
    pub fn report<S: serde::Serialize>(report: &S) -> Self {
        Self { report: to_value(report), table: None }
    }

    pub fn with_table(mut self, table: Option<Table>) -> Self {
        self.table = table;
        self
    }
}

fn write_json_fixed<W: Write>(mut w: W, value: &serde_json::Value) -> io::Result<()> {
    let mut text = String::new();
    write_fixed(value, 0, &mut text);
    text.push('\n');
    w.write_all(text.as_bytes())
}

fn write_fixed(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, val)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("key"));
                out.push_str(": ");
                write_fixed(val, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(a) if !a.is_empty() => {
            let flat = a.iter().all(|x| !x.is_object() && !x.is_array());
            if flat {
                out.push('[');
                for (i, x) in a.iter().enumerate() {
                    write_fixed(x, indent, out);
                    if i + 1 < a.len() {
                        out.push_str(", ");
                    }
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (i, x) in a.iter().enumerate() {
                    out.push_str(&pad(indent + 1));
                    write_fixed(x, indent + 1, out);
                    out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(indent));
                out.push(']');
            }
        }
        Value::Number(n) if n.is_f64() => {
            out.push_str(&output::fmt_f64(n.as_f64().unwrap_or(f64::NAN)).unwrap_or_else(|| "null".into()))
        }
        other => out.push_str(&serde_json::to_string(other).expect("scalar")),
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => File::create(p)
            .map(|f| Box::new(io::BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| Failure::validation(format!("cannot write {}: {e}", p.display()))),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn emit(out: Output, args: &OutputArgs) -> Result<(), Failure> {
    // a requested table is the primary output; the report then goes to stderr
    let format = args.format.unwrap_or(if out.table.is_some() { Format::Csv } else { Format::Json });
    let io_err = |e: io::Error| Failure::validation(format!("write failed: {e}"));
    let mut sink = open_out(&args.out)?;
    match (format, &out.table) {
        (Format::Csv, Some(table)) => {
            table.write_csv(&mut sink).map_err(|e| Failure::validation(format!("write failed: {e}")))?;
            write_json_fixed(io::stderr().lock(), &out.report).map_err(io_err)?;
        }
        (Format::Json, Some(table)) => {
            let mut doc = serde_json::Map::new();
            doc.insert("report".into(), out.report.clone());
            doc.insert("table".into(), to_value(table));
            write_json_fixed(&mut sink, &serde_json::Value::Object(doc)).map_err(io_err)?;
        }
        (Format::Csv, None) => {
            let mut rows = Vec::new();
            flatten(&out.report, "", &mut rows);
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut sink);
            let fail = |e: csv::Error| Failure::validation(format!("write failed: {e}"));
            w.write_record(["key", "value"]).map_err(fail)?;
            for (k, v) in rows {
                w.write_record([k, v]).map_err(fail)?;
            }
            w.flush().map_err(io_err)?;
        }
        (Format::Json, None) => write_json_fixed(&mut sink, &out.report).map_err(io_err)?,
    }
    sink.flush().map_err(io_err)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Regimes(a) => emit(commands::regimes(&a)?, &a.output),
        Command::Bifurcation(a) => emit(commands::bifurcation(&a)?, &a.output),
        Command::Variational(a) => emit(commands::variational(&a)?, &a.output),
        Command::Heun(a) => emit(commands::heun(&a)?, &a.output),
        Command::Wavefunction(a) => emit(commands::wavefunction(&a)?, &a.output),
        Command::Reconstruct(a) => emit(commands::reconstruct(&a)?, &a.shoot.output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Failure::VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
