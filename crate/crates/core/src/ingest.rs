//! Parsing of panel files into rows.
//!
//! Two formats are accepted: CSV with a header naming `year`, `journal_id` and
//! `member_id` (any order, extra columns ignored), and a JSON array of objects with
//! those keys. Malformed records are reported with their line number (CSV) or
//! 1-based element position (JSON) and never silently dropped.

use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::panel::Year;
use crate::validation::{IssueCode, ValidationReport};

pub const REQUIRED_COLUMNS: [&str; 3] = ["year", "journal_id", "member_id"];

/// Years outside this range are accepted with a warning.
pub const PLAUSIBLE_YEARS: std::ops::RangeInclusive<Year> = 1000..=3000;

/// One (year, journal, member) observation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InputRow {
    pub year: Year,
    pub journal_id: String,
    pub member_id: String,
}

impl InputRow {
    pub fn new(year: Year, journal_id: impl Into<String>, member_id: impl Into<String>) -> Self {
        InputRow {
            year,
            journal_id: journal_id.into(),
            member_id: member_id.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guesses the format from a file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown input format '{other}' (expected csv or json)")),
        }
    }
}

/// Reads and parses a panel file. I/O failures are reported as an `IO` error.
pub fn load(path: &Path, format: Format) -> (Vec<InputRow>, ValidationReport) {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) => {
            let mut report = ValidationReport::default();
            report.error(None, IssueCode::Io, format!("{}: {e}", path.display()));
            return (Vec::new(), report);
        }
    };
    let reader = BufReader::new(file);
    match format {
        Format::Csv => parse_csv(reader),
        Format::Json => parse_json(reader),
    }
}

fn check_ids(report: &mut ValidationReport, line: usize, journal_id: &str, member_id: &str) -> bool {
    let mut ok = true;
    for (name, value) in [("journal_id", journal_id), ("member_id", member_id)] {
        if value.is_empty() {
            report.error(Some(line), IssueCode::EmptyId, format!("{name} is empty"));
            ok = false;
        } else if value.chars().any(char::is_control) {
            report.error(
                Some(line),
                IssueCode::ControlCharacter,
                format!("{name} contains a control character"),
            );
            ok = false;
        }
    }
    ok
}

/// Warns once per file, at the first implausible year.
fn check_year_range(report: &mut ValidationReport, line: usize, year: Year) {
    if !PLAUSIBLE_YEARS.contains(&year) && !report.has_warning(IssueCode::YearOutOfRange) {
        report.warn(
            Some(line),
            IssueCode::YearOutOfRange,
            format!(
                "year {year} is outside {}..={}; later rows are not reported",
                PLAUSIBLE_YEARS.start(),
                PLAUSIBLE_YEARS.end()
            ),
        );
    }
}

pub fn parse_csv<R: Read>(input: R) -> (Vec<InputRow>, ValidationReport) {
    let mut report = ValidationReport::default();
    let mut rows = Vec::new();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input);

    let headers = match reader.headers() {
        Ok(h) => h.clone(),
        Err(e) => {
            report.error(Some(1), IssueCode::BadRecord, format!("unreadable header: {e}"));
            return (rows, report);
        }
    };
    let position = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (Some(year_col), Some(journal_col), Some(member_col)) =
        (position("year"), position("journal_id"), position("member_id"))
    else {
        let missing: Vec<&str> = REQUIRED_COLUMNS
            .iter()
            .copied()
            .filter(|c| position(c).is_none())
            .collect();
        report.error(
            Some(1),
            IssueCode::MissingColumn,
            format!("missing required column(s): {}", missing.join(", ")),
        );
        return (rows, report);
    };
    if headers.len() > REQUIRED_COLUMNS.len() {
        let extra: Vec<&str> = headers
            .iter()
            .filter(|h| !REQUIRED_COLUMNS.contains(&h.trim()))
            .collect();
        report.warn(
            Some(1),
            IssueCode::ExtraColumns,
            format!("ignoring column(s): {}", extra.join(", ")),
        );
    }

    let mut record = csv::StringRecord::new();
    loop {
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line() as usize);
                report.rows_read += 1;
                report.error(Some(line), IssueCode::BadRecord, e.to_string());
                if matches!(e.kind(), csv::ErrorKind::Io(_)) {
                    break;
                }
                continue;
            }
        }
        report.rows_read += 1;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let (Some(year), Some(journal_id), Some(member_id)) = (
            record.get(year_col),
            record.get(journal_col),
            record.get(member_col),
        ) else {
            report.error(
                Some(line),
                IssueCode::BadRecord,
                format!("expected {} fields, found {}", headers.len(), record.len()),
            );
            continue;
        };
        let year = match year.trim().parse::<Year>() {
            Ok(y) => y,
            Err(_) => {
                report.error(
                    Some(line),
                    IssueCode::BadYear,
                    format!("'{year}' is not an integer year"),
                );
                continue;
            }
        };
        if !check_ids(&mut report, line, journal_id, member_id) {
            continue;
        }
        check_year_range(&mut report, line, year);
        rows.push(InputRow::new(year, journal_id, member_id));
    }

    if report.rows_read == 0 {
        report.warn(None, IssueCode::Empty, "file holds no data rows");
    }
    report.rows_kept = rows.len();
    (rows, report)
}

pub fn parse_json<R: Read>(mut input: R) -> (Vec<InputRow>, ValidationReport) {
    let mut report = ValidationReport::default();
    let mut rows = Vec::new();
    let mut text = String::new();
    if let Err(e) = input.read_to_string(&mut text) {
        report.error(None, IssueCode::Io, e.to_string());
        return (rows, report);
    }
    let document: serde_json::Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            report.error(Some(e.line()), IssueCode::MalformedDocument, e.to_string());
            return (rows, report);
        }
    };
    let Some(items) = document.as_array() else {
        report.error(
            None,
            IssueCode::MalformedDocument,
            "top-level value must be an array",
        );
        return (rows, report);
    };

    let mut warned_extra = false;
    for (i, item) in items.iter().enumerate() {
        let pos = i + 1;
        report.rows_read += 1;
        let Some(obj) = item.as_object() else {
            report.error(Some(pos), IssueCode::BadRecord, "element is not an object");
            continue;
        };
        if !warned_extra && obj.keys().any(|k| !REQUIRED_COLUMNS.contains(&k.as_str())) {
            warned_extra = true;
            report.warn(
                Some(pos),
                IssueCode::ExtraColumns,
                "ignoring keys besides year, journal_id, member_id",
            );
        }
        let missing: Vec<&str> = REQUIRED_COLUMNS
            .iter()
            .copied()
            .filter(|k| !obj.contains_key(*k))
            .collect();
        if !missing.is_empty() {
            report.error(
                Some(pos),
                IssueCode::MissingColumn,
                format!("missing key(s): {}", missing.join(", ")),
            );
            continue;
        }
        let year = match obj["year"].as_i64().and_then(|y| Year::try_from(y).ok()) {
            Some(y) => y,
            None => {
                report.error(
                    Some(pos),
                    IssueCode::BadYear,
                    format!("{} is not an integer year", obj["year"]),
                );
                continue;
            }
        };
        let (Some(journal_id), Some(member_id)) = (obj["journal_id"].as_str(), obj["member_id"].as_str())
        else {
            report.error(
                Some(pos),
                IssueCode::EmptyId,
                "journal_id and member_id must be strings",
            );
            continue;
        };
        if !check_ids(&mut report, pos, journal_id, member_id) {
            continue;
        }
        check_year_range(&mut report, pos, year);
        rows.push(InputRow::new(year, journal_id, member_id));
    }

    if items.is_empty() {
        report.warn(None, IssueCode::Empty, "document holds no rows");
    }
    report.rows_kept = rows.len();
    (rows, report)
}

/// Writes rows in the canonical CSV layout `year,journal_id,member_id`.
pub fn write_csv<W: Write>(rows: &[InputRow], out: W) -> io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row).map_err(io::Error::other)?;
    }
    if rows.is_empty() {
        writer.write_record(REQUIRED_COLUMNS).map_err(io::Error::other)?;
    }
    writer.flush()
}

pub fn write_json<W: Write>(rows: &[InputRow], out: W) -> io::Result<()> {
    serde_json::to_writer(out, rows).map_err(io::Error::other)
}
