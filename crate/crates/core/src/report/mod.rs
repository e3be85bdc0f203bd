//! The end-to-end pipeline: ingest a panel file, compute every table, and write
//! CSV tables, a full-precision JSON bundle and optional SVG charts.
//!
//! Outputs are deterministic: identical input bytes and settings produce
//! byte-identical files. Files are staged in a temporary directory and renamed into
//! place only after every file has been rendered, so a failed run leaves nothing
//! behind.

mod svg;
mod tables;

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::distribution::{self, BoxplotSummary, Metric, Scale, QUARTILE_METHOD};
use crate::exec::Execution;
use crate::ingest::{self, Format};
use crate::journal_members::{self, JournalMemberCounts, JournalMemberRates, JournalMemberRecord};
use crate::journals::{self, JournalCounts, JournalRates};
use crate::members::{self, MemberCounts, MemberRates};
use crate::panel::{build_panel, Interval, Panel, PanelError, Year};
use crate::seats::{self, SeatFlows, SeatRates, YearStocks};
use crate::validation::ValidationReport;

pub use svg::render_charts;
pub use tables::{format_number, TableFile, TABLE_FILES};

pub const SCHEMA_VERSION: u32 = 1;
pub const REPORT_JSON: &str = "report.json";

/// Which intervals get a row in the interval tables.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "pairs")]
pub enum IntervalMode {
    /// Consecutive observation years only.
    #[default]
    Adjacent,
    /// Consecutive years, followed by extra (from, to) rows such as 2006-2019.
    AdjacentWithPairs(Vec<(Year, Year)>),
    /// Only the given (from, to) pairs.
    Pairs(Vec<(Year, Year)>),
}

/// Settings that shape the computed numbers and their rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSettings {
    pub mode: IntervalMode,
    pub include_genesis: bool,
    pub scale: Scale,
    pub decimals: u8,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            mode: IntervalMode::Adjacent,
            include_genesis: false,
            scale: Scale::Normalized,
            decimals: 3,
        }
    }
}

pub const MAX_DECIMALS: u8 = 12;

/// Files a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outputs {
    pub demography: bool,
    pub seats: bool,
    pub members: bool,
    pub journal_level: bool,
    pub distributions: bool,
    pub report_json: bool,
}

impl Outputs {
    pub const NONE: Outputs = Outputs {
        demography: false,
        seats: false,
        members: false,
        journal_level: false,
        distributions: false,
        report_json: false,
    };

    pub const ALL: Outputs = Outputs {
        demography: true,
        seats: true,
        members: true,
        journal_level: true,
        distributions: true,
        report_json: true,
    };

    fn wants(&self, file: TableFile) -> bool {
        match file {
            TableFile::Demography | TableFile::JournalRates => self.demography,
            TableFile::Stocks | TableFile::SeatFlows | TableFile::SeatRates => self.seats,
            TableFile::MemberDynamics => self.members,
            TableFile::JournalMemberRates => self.journal_level,
            TableFile::Distributions => self.distributions,
        }
    }
}

/// The pipeline subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Demography,
    Seats,
    Members,
    JournalLevel,
    Distributions,
    All,
}

impl Command {
    pub fn outputs(self) -> Outputs {
        let mut o = Outputs::NONE;
        match self {
            Command::Validate => {}
            Command::Demography => o.demography = true,
            Command::Seats => o.seats = true,
            Command::Members => o.members = true,
            Command::JournalLevel => o.journal_level = true,
            Command::Distributions => o.distributions = true,
            Command::All => o = Outputs::ALL,
        }
        o
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    /// Detected from the file extension when absent.
    pub format: Option<Format>,
    pub out_dir: PathBuf,
    pub settings: RunSettings,
    pub outputs: Outputs,
    pub charts: bool,
    pub exec: Execution,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            format: None,
            out_dir: out_dir.into(),
            settings: RunSettings::default(),
            outputs: Outputs::ALL,
            charts: false,
            exec: Execution::default(),
        }
    }

    fn input_format(&self) -> Format {
        self.format.unwrap_or_else(|| Format::from_path(&self.input))
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("input failed validation with {} error(s)", .0.errors.len())]
    Validation(ValidationReport),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Io { context: String, source: io::Error },
    #[error("malformed report file: {0}")]
    BadReport(String),
}

impl RunError {
    /// Process exit status: 1 for data and I/O failures, 2 for usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            _ => 1,
        }
    }

    fn io(context: impl Into<String>, source: io::Error) -> Self {
        RunError::Io {
            context: context.into(),
            source,
        }
    }
}

impl From<PanelError> for RunError {
    fn from(e: PanelError) -> Self {
        RunError::Config(e.to_string())
    }
}

/// Everything computed for one interval row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalResult {
    pub label: String,
    pub interval: Interval,
    pub journals: JournalCounts,
    pub journal_rates: JournalRates,
    pub seats: SeatFlows,
    pub seat_rates: SeatRates,
    pub members: MemberCounts,
    pub member_rates: MemberRates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JournalMemberRow {
    pub label: String,
    pub interval: Interval,
    pub journal_id: String,
    pub counts: JournalMemberCounts,
    pub rates: JournalMemberRates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub label: String,
    pub interval: Interval,
    pub metric: Metric,
    pub scale: Scale,
    pub summary: BoxplotSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub schema_version: u32,
    pub settings: RunSettings,
    /// SHA-256 of the canonical JSON form of `settings`.
    pub config_hash: String,
    pub input_sha256: String,
    pub rows_read: usize,
    pub rows_kept: usize,
    pub duplicates_dropped: usize,
    pub years: Vec<Year>,
    pub intervals: Vec<String>,
    pub quartile_method: String,
    pub columns: BTreeMap<String, Vec<String>>,
    pub notes: Vec<String>,
}

/// All computed tables at full precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub metadata: Metadata,
    pub intervals: Vec<IntervalResult>,
    pub stocks: Vec<YearStocks>,
    pub journal_members: Vec<JournalMemberRow>,
    pub distributions: Vec<DistributionRow>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn config_hash(settings: &RunSettings) -> String {
    let canonical = serde_json::to_vec(settings).expect("settings serialize");
    hex(&Sha256::digest(&canonical))
}

/// The interval rows a run reports, in table order.
pub fn run_intervals(panel: &Panel, settings: &RunSettings) -> Result<Vec<Interval>, PanelError> {
    let mut out = Vec::new();
    if settings.include_genesis {
        out.push(panel.genesis_interval());
    }
    let pairs: &[(Year, Year)] = match &settings.mode {
        IntervalMode::Adjacent => &[],
        IntervalMode::AdjacentWithPairs(p) => {
            out.extend(panel.adjacent_intervals());
            p
        }
        IntervalMode::Pairs(p) => p,
    };
    if settings.mode == IntervalMode::Adjacent {
        out.extend(panel.adjacent_intervals());
    }
    for &(from, to) in pairs {
        let interval = panel.interval(from, to)?;
        if !out.contains(&interval) {
            out.push(interval);
        }
    }
    Ok(out)
}

fn interval_result(panel: &Panel, interval: &Interval) -> Result<IntervalResult, PanelError> {
    let journal_flows = journals::journal_flows(panel, interval)?;
    let seat_flows = seats::seat_flows_for(panel, interval, &journal_flows)?;
    let member_flows = members::member_flows(panel, interval)?;
    Ok(IntervalResult {
        label: panel.interval_label(interval),
        interval: *interval,
        journal_rates: journals::journal_rates(&journal_flows.counts, interval),
        journals: journal_flows.counts,
        seat_rates: seats::seat_rates(&seat_flows, interval),
        seats: seat_flows,
        member_rates: members::member_rates(&member_flows.counts, &seat_flows, interval),
        members: member_flows.counts,
    })
}

fn journal_rows(
    panel: &Panel,
    interval: &Interval,
    records: &[JournalMemberRecord],
) -> Vec<JournalMemberRow> {
    let label = panel.interval_label(interval);
    records
        .iter()
        .map(|r| JournalMemberRow {
            label: label.clone(),
            interval: *interval,
            journal_id: panel.journal_name(r.journal).to_owned(),
            counts: r.counts,
            rates: r.rates,
        })
        .collect()
}

fn columns() -> BTreeMap<String, Vec<String>> {
    TABLE_FILES
        .iter()
        .map(|f| {
            (
                f.file_name().to_owned(),
                f.headers().iter().map(|h| (*h).to_owned()).collect(),
            )
        })
        .collect()
}

fn notes(settings: &RunSettings) -> Vec<String> {
    let mut notes = vec![
        format!("table rate cells hold the {} form of each rate", settings.scale.as_str()),
        "annualized member rates are indicative only: member flows between distant snapshots do not scale linearly with interval length".to_owned(),
        "destruction and exit rates are signed negative; turnover rates are positive".to_owned(),
        "aggregate coverage divides new members by gross seat creation; journal coverage divides system-new entrants by net board growth and is 0 when the board did not grow".to_owned(),
        "distributions cover adjacent intervals and every journal active at either endpoint".to_owned(),
    ];
    if settings.include_genesis {
        notes.push("the genesis row treats the first observation as flows from an empty system".to_owned());
    }
    notes
}

/// Computes the full bundle for a panel. Provenance fields of the metadata
/// (input digest and row counts) are left empty.
pub fn compute_bundle(
    panel: &Panel,
    settings: &RunSettings,
    exec: Execution,
) -> Result<ReportBundle, RunError> {
    if settings.decimals > MAX_DECIMALS {
        return Err(RunError::Config(format!(
            "decimals must be within 0..={MAX_DECIMALS}, got {}",
            settings.decimals
        )));
    }
    let intervals = run_intervals(panel, settings)?;
    let adjacent = panel.adjacent_intervals();

    let results = exec.try_map(&intervals, |iv| interval_result(panel, iv))?;
    let stocks = exec.try_map(panel.years(), |&y| seats::year_stocks(panel, y))?;

    // per-journal records for every interval that needs them
    let mut wanted = intervals.clone();
    for iv in &adjacent {
        if !wanted.contains(iv) {
            wanted.push(*iv);
        }
    }
    let records = exec.try_map(&wanted, |iv| {
        journal_members::all_journal_member_rates(panel, iv, Execution::Sequential)
    })?;
    let records_of = |iv: &Interval| -> &[JournalMemberRecord] {
        let i = wanted
            .iter()
            .position(|w| w == iv)
            .expect("interval was computed");
        &records[i]
    };

    let journal_members = intervals
        .iter()
        .flat_map(|iv| journal_rows(panel, iv, records_of(iv)))
        .collect();

    let mut distributions = Vec::with_capacity(adjacent.len() * Metric::ALL.len());
    for iv in &adjacent {
        for metric in Metric::ALL {
            let summary = distribution::summarize_records(records_of(iv), metric, settings.scale)
                .expect("every adjacent interval has at least one active journal");
            distributions.push(DistributionRow {
                label: panel.interval_label(iv),
                interval: *iv,
                metric,
                scale: settings.scale,
                summary,
            });
        }
    }

    Ok(ReportBundle {
        metadata: Metadata {
            tool: "boardflow".to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            schema_version: SCHEMA_VERSION,
            settings: settings.clone(),
            config_hash: config_hash(settings),
            input_sha256: String::new(),
            rows_read: 0,
            rows_kept: 0,
            duplicates_dropped: 0,
            years: panel.years().to_vec(),
            intervals: results.iter().map(|r| r.label.clone()).collect(),
            quartile_method: QUARTILE_METHOD.to_owned(),
            columns: columns(),
            notes: notes(settings),
        },
        intervals: results,
        stocks,
        journal_members,
        distributions,
    })
}

/// Reads, parses and validates the input file.
pub fn load_panel(input: &Path, format: Format) -> Result<(Panel, ValidationReport, String), RunError> {
    let bytes = fs::read(input).map_err(|e| RunError::io(input.display().to_string(), e))?;
    let digest = hex(&Sha256::digest(&bytes));
    let (rows, mut report) = match format {
        Format::Csv => ingest::parse_csv(bytes.as_slice()),
        Format::Json => ingest::parse_json(bytes.as_slice()),
    };
    if !report.is_ok() {
        return Err(RunError::Validation(report));
    }
    match build_panel(&rows) {
        Ok((panel, built)) => {
            report.absorb(built);
            Ok((panel, report, digest))
        }
        Err(built) => {
            report.absorb(built);
            Err(RunError::Validation(report))
        }
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub bundle: Option<ReportBundle>,
    pub validation: ValidationReport,
    pub written: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Renders the selected files in memory.
pub fn render_files(bundle: &ReportBundle, outputs: &Outputs) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    for file in TABLE_FILES {
        if outputs.wants(file) {
            files.push((file.file_name().to_owned(), tables::render(file, bundle)));
        }
    }
    if outputs.report_json {
        let mut json = serde_json::to_vec_pretty(bundle).expect("bundle serializes");
        json.push(b'\n');
        files.push((REPORT_JSON.to_owned(), json));
    }
    files
}

fn write_atomically(out_dir: &Path, files: &[(String, Vec<u8>)]) -> Result<Vec<PathBuf>, RunError> {
    fs::create_dir_all(out_dir).map_err(|e| RunError::io(out_dir.display().to_string(), e))?;
    let staging = tempfile::Builder::new()
        .prefix(".boardflow-staging-")
        .tempdir_in(out_dir)
        .map_err(|e| RunError::io("creating staging directory", e))?;
    for (name, bytes) in files {
        fs::write(staging.path().join(name), bytes).map_err(|e| RunError::io(name.clone(), e))?;
    }
    let mut written = Vec::with_capacity(files.len());
    for (name, _) in files {
        let target = out_dir.join(name);
        fs::rename(staging.path().join(name), &target)
            .map_err(|e| RunError::io(target.display().to_string(), e))?;
        written.push(target);
    }
    Ok(written)
}

pub fn run(config: &RunConfig, command: Command) -> Result<RunOutcome, RunError> {
    if config.settings.decimals > MAX_DECIMALS {
        return Err(RunError::Config(format!(
            "decimals must be within 0..={MAX_DECIMALS}, got {}",
            config.settings.decimals
        )));
    }
    let (panel, validation, digest) = load_panel(&config.input, config.input_format())?;
    if command == Command::Validate {
        return Ok(RunOutcome {
            bundle: None,
            validation,
            written: Vec::new(),
            warnings: Vec::new(),
        });
    }

    let mut bundle = compute_bundle(&panel, &config.settings, config.exec)?;
    bundle.metadata.input_sha256 = digest;
    bundle.metadata.rows_read = validation.rows_read;
    bundle.metadata.rows_kept = validation.rows_kept;
    bundle.metadata.duplicates_dropped = validation.duplicates_dropped;

    let mut files = render_files(&bundle, &command.outputs());
    let mut warnings = Vec::new();
    if config.charts {
        let charts = render_charts(&bundle);
        warnings.extend(charts.warnings);
        files.extend(charts.files);
    }
    let written = write_atomically(&config.out_dir, &files)?;
    Ok(RunOutcome {
        bundle: Some(bundle),
        validation,
        written,
        warnings,
    })
}

/// Result of checking a saved `report.json` against a fresh computation.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub mismatches: Vec<String>,
}

impl Verification {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Re-ingests the input under the settings recorded in `report_path` and compares
/// the recomputed bundle with the saved one.
pub fn verify(input: &Path, format: Option<Format>, report_path: &Path) -> Result<Verification, RunError> {
    let text = fs::read(report_path).map_err(|e| RunError::io(report_path.display().to_string(), e))?;
    let saved: ReportBundle =
        serde_json::from_slice(&text).map_err(|e| RunError::BadReport(e.to_string()))?;
    let format = format.unwrap_or_else(|| Format::from_path(input));
    let (panel, validation, digest) = load_panel(input, format)?;
    let mut fresh = compute_bundle(&panel, &saved.metadata.settings, Execution::default())?;
    fresh.metadata.input_sha256 = digest;
    fresh.metadata.rows_read = validation.rows_read;
    fresh.metadata.rows_kept = validation.rows_kept;
    fresh.metadata.duplicates_dropped = validation.duplicates_dropped;

    let mut mismatches = Vec::new();
    if saved.metadata != fresh.metadata {
        mismatches.push("metadata".to_owned());
    }
    if saved.intervals != fresh.intervals {
        mismatches.push("interval tables".to_owned());
    }
    if saved.stocks != fresh.stocks {
        mismatches.push("stocks".to_owned());
    }
    if saved.journal_members != fresh.journal_members {
        mismatches.push("journal member rates".to_owned());
    }
    if saved.distributions != fresh.distributions {
        mismatches.push("distributions".to_owned());
    }
    Ok(Verification { mismatches })
}
