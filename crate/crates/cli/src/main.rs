use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fete_expm::matfile::{format_matrix, parse_matrix};
use fete_expm::oracles::{expm_taylor_squaring, NamedMatrix};
use fete_expm::study::{self, SweepAxis, SweepSpec, DEFAULT_MAX_BASIS, DEFAULT_TOLERANCE};
use fete_expm::{expm_fete, ComplexMatrix, Error, DEFAULT_BASIS, DEFAULT_ELEMENTS};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

/// Matrix exponential by finite elements in time.
#[derive(Debug, Parser)]
#[command(name = "fete-expm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute exp(A) for a matrix file or a built-in matrix name.
    Expm {
        /// Matrix file, or one of unit2, m1, m2, m3, m4.
        matrix: String,
        #[arg(short = 'E', long = "elements", default_value_t = DEFAULT_ELEMENTS, value_parser = positive)]
        elements: usize,
        #[arg(short = 'm', long = "basis", default_value_t = DEFAULT_BASIS, value_parser = positive)]
        basis: usize,
        /// Write the result here instead of standard output.
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Minimum basis size per element count for a matrix with a known exponential.
    Table1 {
        which: Table1Matrix,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long = "max-basis", default_value_t = DEFAULT_MAX_BASIS, value_parser = positive)]
        max_basis: usize,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Vary the element count or basis size and report one entry per run.
    Sweep {
        matrix: String,
        /// One-based "row,col" of the reported entry.
        #[arg(long, value_parser = parse_entry)]
        entry: (usize, usize),
        #[arg(long, value_enum, default_value_t = Axis::Elements)]
        vary: Axis,
        /// Value held for the parameter that is not varied.
        #[arg(long, default_value_t = 8, value_parser = positive)]
        fixed: usize,
        /// "lo..hi" (inclusive) or a comma-separated list.
        #[arg(long, default_value = "5..40", value_parser = parse_range)]
        range: Values,
        #[arg(short, long)]
        output: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Table1Matrix {
    Unit2,
    M1,
    M2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Axis {
    Elements,
    Basis,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("expected a positive integer, got '{s}'")),
    }
}

fn parse_entry(s: &str) -> Result<(usize, usize), String> {
    let (i, j) = s.split_once(',').ok_or_else(|| format!("expected 'row,col', got '{s}'"))?;
    Ok((positive(i.trim())? - 1, positive(j.trim())? - 1))
}

// A bare Vec field would make the flag repeatable in clap.
#[derive(Clone, Debug)]
struct Values(Vec<usize>);

fn parse_range(s: &str) -> Result<Values, String> {
    let values = if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (positive(lo.trim())?, positive(hi.trim())?);
        if lo > hi {
            return Err(format!("empty range '{s}'"));
        }
        (lo..=hi).collect()
    } else {
        s.split(',').map(|v| positive(v.trim())).collect::<Result<Vec<_>, _>>()?
    };
    Ok(Values(values))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Input(_) => EXIT_PARSE,
            Failure::Numeric(_) => EXIT_NUMERIC,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Input(e.to_string()),
            Error::SingularMatrix { .. } | Error::NonFinite { .. } => Failure::Numeric(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Source {
    matrix: ComplexMatrix,
    named: Option<NamedMatrix>,
}

fn load_matrix(spec: &str) -> Result<Source, Failure> {
    let path = Path::new(spec);
    if !path.exists() {
        if let Some(named) = NamedMatrix::from_name(spec) {
            return Ok(Source {
                matrix: named.matrix(),
                named: Some(named),
            });
        }
    }
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{spec}: {e}")))?;
    let matrix = parse_matrix(&text).map_err(|e| match e {
        Error::Parse { .. } => Failure::Input(format!("{spec}: {e}")),
        other => Failure::from(other),
    })?;
    Ok(Source { matrix, named: None })
}

fn emit(output: Option<&str>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{path}: {e}"))),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Expm {
            matrix,
            elements,
            basis,
            output,
        } => {
            let source = load_matrix(&matrix)?;
            let report = expm_fete(&source.matrix, elements, basis)?;
            let comments = vec![format!(
                "exp({matrix}) elements={} basis={} max_residual={:e}",
                report.num_elements,
                report.num_basis,
                report.max_residual()
            )];
            emit(output.as_deref(), &format_matrix(&report.result, &comments))
        }
        Command::Table1 {
            which,
            tolerance,
            max_basis,
            output,
        } => {
            if !(tolerance > 0.0 && tolerance.is_finite()) {
                return Err(Failure::Usage(format!("tolerance must be positive, got {tolerance}")));
            }
            let named = match which {
                Table1Matrix::Unit2 => NamedMatrix::Unit2,
                Table1Matrix::M1 => NamedMatrix::M1,
                Table1Matrix::M2 => NamedMatrix::M2,
            };
            let rows = study::table1(named, tolerance, max_basis)?;
            emit(output.as_deref(), &study::table1_csv(&rows))
        }
        Command::Sweep {
            matrix,
            entry,
            vary,
            fixed,
            range,
            output,
        } => {
            let source = load_matrix(&matrix)?;
            let reference = match source.named.and_then(NamedMatrix::exact) {
                Some(exact) => exact.value,
                None => expm_taylor_squaring(&source.matrix)?,
            };
            let spec = SweepSpec {
                entry,
                vary: match vary {
                    Axis::Elements => SweepAxis::Elements,
                    Axis::Basis => SweepAxis::Basis,
                },
                fixed,
                values: range.0,
            };
            let rows = study::sweep(&source.matrix, &reference, &spec)?;
            emit(output.as_deref(), &study::sweep_csv(&rows))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
