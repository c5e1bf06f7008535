//! `dualcurve`: Frenet data, Bertrand and involute checks, and line
//! conversions for dual space curves.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 numeric error,
//! 3 a check ran and failed.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "dualcurve", version, about = "Differential geometry of dual space curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dual Frenet frame, curvature and torsion at evenly spaced parameters.
    Frenet(CurveArgs),
    /// Bertrand offsets and pair checks.
    #[command(subcommand)]
    Bertrand(BertrandCommand),
    /// Involutes of a curve, or the involute pair check with --c2.
    Involute(InvoluteArgs),
    /// Oriented lines and dual unit vectors.
    #[command(subcommand)]
    Study(StudyCommand),
    /// Positions of a curve at evenly spaced parameters.
    Sample(CurveArgs),
}

#[derive(Subcommand, Debug)]
enum BertrandCommand {
    /// Check a pair given by --curve2, or the offset by --lambda.
    Check(CheckArgs),
    /// Sample the offset curve alpha + lambda N.
    Offset(OffsetArgs),
}

#[derive(Subcommand, Debug)]
enum StudyCommand {
    /// Line through --point along --dir as a dual unit vector.
    ToDual(ToDualArgs),
    /// Dual unit vector --re + eps --du as a line.
    ToLine(ToLineArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Curve definition, e.g. "[cos(t), sin(t), 0]".
    #[arg(long, conflicts_with = "file")]
    curve: Option<String>,
    /// File holding one curve definition.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Start of the parameter range.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    from: f64,
    /// End of the parameter range.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    to: f64,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[command(flatten)]
    source: Source,
    /// Number of samples, ends included.
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    source: Source,
    /// Second curve of the candidate pair.
    #[arg(long, conflicts_with = "lambda", required_unless_present = "lambda")]
    curve2: Option<String>,
    /// Offset along the principal normal, a dual constant such as "1+eps*2".
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Number of samples.
    #[arg(long, default_value_t = dualcurve::tol::CHECK_SAMPLES)]
    n: usize,
    /// Pass/fail tolerance for every criterion.
    #[arg(long, env = "DUALCURVE_TOL")]
    tol: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct OffsetArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct InvoluteArgs {
    #[command(flatten)]
    source: Source,
    /// Involute constant, a dual constant; must exceed the base arc length.
    #[arg(long, allow_hyphen_values = true)]
    c: String,
    /// Second constant: check the two involutes as a Bertrand pair.
    #[arg(long, allow_hyphen_values = true)]
    c2: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, env = "DUALCURVE_TOL")]
    tol: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ToDualArgs {
    /// A point of the line, "x,y,z".
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, requires = "dir")]
    point: Option<[f64; 3]>,
    /// Direction of the line, "x,y,z".
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true, requires = "point")]
    dir: Option<[f64; 3]>,
    /// Verify the round trip; without --point/--dir, on 100 random lines.
    #[arg(long)]
    roundtrip: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ToLineArgs {
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    re: [f64; 3],
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    du: [f64; 3],
    #[command(flatten)]
    common: Common,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"))?;
        if !slot.is_finite() {
            return Err(format!("{p:?} is not finite"));
        }
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Frenet(a) => commands::frenet(&a),
        Command::Sample(a) => commands::sample(&a),
        Command::Bertrand(BertrandCommand::Check(a)) => commands::bertrand_check(&a),
        Command::Bertrand(BertrandCommand::Offset(a)) => commands::bertrand_offset(&a),
        Command::Involute(a) => commands::involute(&a),
        Command::Study(StudyCommand::ToDual(a)) => commands::to_dual(&a),
        Command::Study(StudyCommand::ToLine(a)) => commands::to_line(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
