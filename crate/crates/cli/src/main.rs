//! `boardflow`: stock-flow tables for editorial-board panels.
//!
//! Exit status is 0 on success, 1 when the input fails validation or a file
//! cannot be read or written, and 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use boardflow_core::ingest::Format;
use boardflow_core::report::{self, Command, IntervalMode, RunConfig, RunError, RunSettings};
use boardflow_core::{Execution, Scale, Year};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "boardflow",
    version,
    about = "Stock-flow analytics for editorial-board panels"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate the input without writing anything.
    Validate(InputArgs),
    /// Journal counts and journal rates.
    Demography(RunArgs),
    /// Seat stocks, flows and rates.
    Seats(RunArgs),
    /// Aggregate member flows and rates.
    Members(RunArgs),
    /// Per-journal member flows and rates.
    JournalLevel(RunArgs),
    /// Box-plot summaries of per-journal rates.
    Distributions(RunArgs),
    /// Every table plus report.json.
    All(RunArgs),
    /// Recompute a saved report.json from its input and compare.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Path to a report.json written by an earlier run.
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Panel file with year, journal_id and member_id columns.
    #[arg(long)]
    input: PathBuf,
    /// csv or json; guessed from the extension when omitted.
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output directory, created if missing.
    #[arg(long, default_value = "boardflow-out")]
    out: PathBuf,
    /// Extra intervals as FROM:TO, comma separated (e.g. 2006:2019).
    #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
    pairs: Vec<(Year, Year)>,
    /// Report only the --pairs intervals, not consecutive years.
    #[arg(long, requires = "pairs")]
    pairs_only: bool,
    /// Add a first row treating the first snapshot as flows from an empty system.
    #[arg(long)]
    include_genesis: bool,
    /// Print raw symmetric rates instead of normalized ones.
    #[arg(long)]
    raw: bool,
    /// Decimals in CSV tables.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(0..=12))]
    decimals: u8,
    /// Also write fig_*.svg charts.
    #[arg(long)]
    charts: bool,
    /// Run single-threaded.
    #[arg(long)]
    sequential: bool,
}

fn parse_pair(s: &str) -> Result<(Year, Year), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected FROM:TO, got '{s}'"))?;
    let year = |t: &str| {
        t.trim()
            .parse::<Year>()
            .map_err(|_| format!("'{t}' is not a year"))
    };
    Ok((year(a)?, year(b)?))
}

impl RunArgs {
    fn config(self) -> RunConfig {
        let mode = match (self.pairs.is_empty(), self.pairs_only) {
            (true, _) => IntervalMode::Adjacent,
            (false, false) => IntervalMode::AdjacentWithPairs(self.pairs),
            (false, true) => IntervalMode::Pairs(self.pairs),
        };
        let mut config = RunConfig::new(self.input.input, self.out);
        config.format = self.input.format;
        config.settings = RunSettings {
            mode,
            include_genesis: self.include_genesis,
            scale: if self.raw { Scale::Raw } else { Scale::Normalized },
            decimals: self.decimals,
        };
        config.charts = self.charts;
        config.exec = if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        };
        config
    }
}

fn report_error(input: &std::path::Path, err: &RunError) {
    match err {
        RunError::Validation(v) => eprint!("{}: {err}\n{v}", input.display()),
        _ => eprintln!("error: {err}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Validate(input) => {
            let mut config = RunConfig::new(&input.input, ".");
            config.format = input.format;
            return match report::run(&config, Command::Validate) {
                Ok(outcome) => {
                    print!("{}", outcome.validation);
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    report_error(&input.input, &e);
                    ExitCode::from(e.exit_code() as u8)
                }
            };
        }
        Cmd::Verify { input, report } => {
            return match report::verify(&input.input, input.format, &report) {
                Ok(v) if v.matches() => {
                    println!("{} matches a fresh computation", report.display());
                    ExitCode::SUCCESS
                }
                Ok(v) => {
                    eprintln!("{} differs in: {}", report.display(), v.mismatches.join(", "));
                    ExitCode::FAILURE
                }
                Err(e) => {
                    report_error(&input.input, &e);
                    ExitCode::from(e.exit_code() as u8)
                }
            };
        }
        Cmd::Demography(a) => (Command::Demography, a),
        Cmd::Seats(a) => (Command::Seats, a),
        Cmd::Members(a) => (Command::Members, a),
        Cmd::JournalLevel(a) => (Command::JournalLevel, a),
        Cmd::Distributions(a) => (Command::Distributions, a),
        Cmd::All(a) => (Command::All, a),
    };

    let config = args.config();
    match report::run(&config, command) {
        Ok(outcome) => {
            for w in &outcome.validation.warnings {
                eprintln!("warning: {w}");
            }
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            for path in &outcome.written {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            report_error(&config.input, &e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
