use std::fmt;

use serde::{Deserialize, Serialize};

/// Machine-readable code attached to every validation finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IssueCode {
    EmptyInput,
    Empty,
    Duplicate,
    BadYear,
    YearOutOfRange,
    EmptyId,
    ControlCharacter,
    MissingColumn,
    ExtraColumns,
    BadRecord,
    MalformedDocument,
    Io,
}

impl IssueCode {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueCode::EmptyInput => "EMPTY_INPUT",
            IssueCode::Empty => "EMPTY",
            IssueCode::Duplicate => "DUPLICATE",
            IssueCode::BadYear => "BAD_YEAR",
            IssueCode::YearOutOfRange => "YEAR_OUT_OF_RANGE",
            IssueCode::EmptyId => "EMPTY_ID",
            IssueCode::ControlCharacter => "CONTROL_CHARACTER",
            IssueCode::MissingColumn => "MISSING_COLUMN",
            IssueCode::ExtraColumns => "EXTRA_COLUMNS",
            IssueCode::BadRecord => "BAD_RECORD",
            IssueCode::MalformedDocument => "MALFORMED_DOCUMENT",
            IssueCode::Io => "IO",
        }
    }
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One finding. `row` is a 1-based line number for file input, or a 1-based
/// position in the row list for in-memory input; `None` for document-level issues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub row: Option<usize>,
    pub code: IssueCode,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.row {
            Some(row) => write!(f, "line {row}: {} {}", self.code, self.message),
            None => write!(f, "{} {}", self.code, self.message),
        }
    }
}

/// Errors, warnings and row counts from ingestion and panel construction.
///
/// A panel is only built when `errors` is empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
    pub rows_read: usize,
    pub rows_kept: usize,
    pub duplicates_dropped: usize,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn error(&mut self, row: Option<usize>, code: IssueCode, message: impl Into<String>) {
        self.errors.push(Issue {
            row,
            code,
            message: message.into(),
        });
    }

    pub fn warn(&mut self, row: Option<usize>, code: IssueCode, message: impl Into<String>) {
        self.warnings.push(Issue {
            row,
            code,
            message: message.into(),
        });
    }

    pub fn has_error(&self, code: IssueCode) -> bool {
        self.errors.iter().any(|i| i.code == code)
    }

    pub fn has_warning(&self, code: IssueCode) -> bool {
        self.warnings.iter().any(|i| i.code == code)
    }

    /// Folds the findings of a later stage into this report. Row counts are
    /// taken from `later`, which saw the rows this stage kept.
    pub fn absorb(&mut self, later: ValidationReport) {
        self.errors.extend(later.errors);
        self.warnings.extend(later.warnings);
        self.rows_kept = later.rows_kept;
        self.duplicates_dropped += later.duplicates_dropped;
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "rows read: {}, rows kept: {}, duplicates dropped: {}",
            self.rows_read, self.rows_kept, self.duplicates_dropped
        )?;
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}
