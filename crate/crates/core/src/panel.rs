//! The immutable panel model: observation years, per-year journal rosters and the
//! primitive queries every flow computation is built on.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::InputRow;
use crate::sets;
use crate::validation::{IssueCode, ValidationReport};

/// Calendar year of an observation.
pub type Year = i32;

/// Interned journal identifier. Ids are assigned in lexicographic order of the
/// journal names, so id order equals name order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JournalId(u32);

/// Interned member identifier, ordered like the member names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MemberId(u32);

impl JournalId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl MemberId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PanelError {
    #[error("year {0} is not an observation year")]
    UnknownYear(Year),
    #[error("journal {journal} is not active in {year}")]
    Inactive { year: Year, journal: String },
    #[error("journal {journal} is active in neither {from} nor {to}")]
    InactiveInInterval { journal: String, from: String, to: Year },
    #[error("interval {0}-{0} has zero length")]
    DegenerateInterval(Year),
    #[error("interval {from}-{to} runs backwards")]
    ReversedInterval { from: Year, to: Year },
}

impl PanelError {
    pub fn code(&self) -> &'static str {
        match self {
            PanelError::UnknownYear(_) => "UNKNOWN_YEAR",
            PanelError::Inactive { .. } | PanelError::InactiveInInterval { .. } => "INACTIVE",
            PanelError::DegenerateInterval(_) => "DEGENERATE_INTERVAL",
            PanelError::ReversedInterval { .. } => "REVERSED_INTERVAL",
        }
    }
}

/// One journal's board in one year. `members` is sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Board {
    pub journal: JournalId,
    pub members: Vec<MemberId>,
}

impl Board {
    pub fn size(&self) -> u64 {
        self.members.len() as u64
    }
}

/// All boards of one observation year.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Snapshot {
    boards: Vec<Board>,
    members: Vec<MemberId>,
}

static EMPTY_SNAPSHOT: Snapshot = Snapshot {
    boards: Vec::new(),
    members: Vec::new(),
};

impl Snapshot {
    /// The empty system, used as the previous snapshot of a genesis interval.
    pub fn empty() -> &'static Snapshot {
        &EMPTY_SNAPSHOT
    }

    /// Boards sorted by journal id.
    pub fn boards(&self) -> &[Board] {
        &self.boards
    }

    pub fn board(&self, journal: JournalId) -> Option<&Board> {
        self.boards
            .binary_search_by_key(&journal, |b| b.journal)
            .ok()
            .map(|i| &self.boards[i])
    }

    pub fn board_size(&self, journal: JournalId) -> u64 {
        self.board(journal).map_or(0, Board::size)
    }

    pub fn is_active(&self, journal: JournalId) -> bool {
        self.board(journal).is_some()
    }

    /// Journal ids, sorted.
    pub fn journals(&self) -> impl Iterator<Item = JournalId> + '_ {
        self.boards.iter().map(|b| b.journal)
    }

    pub fn journal_count(&self) -> u64 {
        self.boards.len() as u64
    }

    /// Union of all rosters, sorted.
    pub fn members(&self) -> &[MemberId] {
        &self.members
    }

    pub fn member_count(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn has_member(&self, member: MemberId) -> bool {
        sets::contains(&self.members, &member)
    }

    /// Total seats: the number of (journal, member) pairs.
    pub fn seats(&self) -> u64 {
        self.boards.iter().map(Board::size).sum()
    }
}

/// A span between two observation years, or the genesis span that precedes the
/// first observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    from_year: Option<Year>,
    to_year: Year,
    period_years: u32,
}

impl Interval {
    /// An interval between two calendar years, without checking them against a panel.
    pub fn between(from_year: Year, to_year: Year) -> Result<Self, PanelError> {
        match from_year.cmp(&to_year) {
            std::cmp::Ordering::Equal => Err(PanelError::DegenerateInterval(from_year)),
            std::cmp::Ordering::Greater => Err(PanelError::ReversedInterval {
                from: from_year,
                to: to_year,
            }),
            std::cmp::Ordering::Less => Ok(Interval {
                from_year: Some(from_year),
                to_year,
                period_years: (to_year - from_year) as u32,
            }),
        }
    }

    /// Flows into `to_year` from an empty system. `period_years` must be ≥ 1.
    pub fn genesis(to_year: Year, period_years: u32) -> Self {
        assert!(period_years >= 1, "genesis period must be at least one year");
        Interval {
            from_year: None,
            to_year,
            period_years,
        }
    }

    pub fn from_year(&self) -> Option<Year> {
        self.from_year
    }

    pub fn to_year(&self) -> Year {
        self.to_year
    }

    pub fn period_years(&self) -> u32 {
        self.period_years
    }

    pub fn is_genesis(&self) -> bool {
        self.from_year.is_none()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.from_year {
            Some(from) => write!(f, "{from}-{}", self.to_year),
            None => write!(f, "genesis-{}", self.to_year),
        }
    }
}

/// The longitudinal panel. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Panel {
    years: Vec<Year>,
    snapshots: Vec<Snapshot>,
    journal_names: Vec<String>,
    member_names: Vec<String>,
}

/// Builds a panel from (year, journal, member) rows.
///
/// Exact duplicate rows are dropped with a `DUPLICATE` warning. On success the
/// returned report carries the warnings; on failure it carries the errors.
pub fn build_panel(rows: &[InputRow]) -> Result<(Panel, ValidationReport), ValidationReport> {
    let mut report = ValidationReport {
        rows_read: rows.len(),
        ..Default::default()
    };
    if rows.is_empty() {
        report.error(None, IssueCode::EmptyInput, "no rows to build a panel from");
        return Err(report);
    }

    let mut seen: HashSet<(Year, &str, &str)> = HashSet::with_capacity(rows.len());
    let mut kept: Vec<&InputRow> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let line = Some(i + 1);
        if row.journal_id.is_empty() || row.member_id.is_empty() {
            report.error(
                line,
                IssueCode::EmptyId,
                "journal_id and member_id must be non-empty",
            );
            continue;
        }
        if seen.insert((row.year, &row.journal_id, &row.member_id)) {
            kept.push(row);
        } else {
            report.duplicates_dropped += 1;
            report.warn(
                line,
                IssueCode::Duplicate,
                format!(
                    "duplicate row ({}, {}, {}) dropped",
                    row.year, row.journal_id, row.member_id
                ),
            );
        }
    }
    report.rows_kept = kept.len();
    if !report.is_ok() {
        return Err(report);
    }

    let journal_names: Vec<String> = kept
        .iter()
        .map(|r| r.journal_id.as_str())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(str::to_owned)
        .collect();
    let member_names: Vec<String> = kept
        .iter()
        .map(|r| r.member_id.as_str())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(str::to_owned)
        .collect();
    let intern = |names: &[String], key: &str| -> u32 {
        names
            .binary_search_by(|n| n.as_str().cmp(key))
            .expect("name was collected above") as u32
    };

    let mut grouped: BTreeMap<Year, BTreeMap<JournalId, Vec<MemberId>>> = BTreeMap::new();
    for row in &kept {
        let journal = JournalId(intern(&journal_names, &row.journal_id));
        let member = MemberId(intern(&member_names, &row.member_id));
        grouped
            .entry(row.year)
            .or_default()
            .entry(journal)
            .or_default()
            .push(member);
    }

    let mut years = Vec::with_capacity(grouped.len());
    let mut snapshots = Vec::with_capacity(grouped.len());
    for (year, boards) in grouped {
        let boards: Vec<Board> = boards
            .into_iter()
            .map(|(journal, mut members)| {
                members.sort_unstable();
                Board { journal, members }
            })
            .collect();
        let mut members: Vec<MemberId> = boards.iter().flat_map(|b| b.members.iter().copied()).collect();
        members.sort_unstable();
        members.dedup();
        assert!(
            boards.iter().all(|b| !b.members.is_empty()),
            "every roster holds at least one member by construction"
        );
        years.push(year);
        snapshots.push(Snapshot { boards, members });
    }

    Ok((
        Panel {
            years,
            snapshots,
            journal_names,
            member_names,
        },
        report,
    ))
}

impl Panel {
    /// Observation years, strictly increasing.
    pub fn years(&self) -> &[Year] {
        &self.years
    }

    pub fn snapshot(&self, year: Year) -> Result<&Snapshot, PanelError> {
        self.years
            .binary_search(&year)
            .map(|i| &self.snapshots[i])
            .map_err(|_| PanelError::UnknownYear(year))
    }

    /// The (previous, current) snapshots of an interval. The previous snapshot of
    /// a genesis interval is the empty system.
    pub fn endpoints(&self, interval: &Interval) -> Result<(&Snapshot, &Snapshot), PanelError> {
        let prev = match interval.from_year {
            Some(year) => self.snapshot(year)?,
            None => Snapshot::empty(),
        };
        Ok((prev, self.snapshot(interval.to_year)?))
    }

    pub fn journal_id(&self, name: &str) -> Option<JournalId> {
        self.journal_names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| JournalId(i as u32))
    }

    pub fn member_id(&self, name: &str) -> Option<MemberId> {
        self.member_names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| MemberId(i as u32))
    }

    pub fn journal_name(&self, id: JournalId) -> &str {
        &self.journal_names[id.index()]
    }

    pub fn member_name(&self, id: MemberId) -> &str {
        &self.member_names[id.index()]
    }

    pub fn journal_names<'a>(&'a self, ids: &'a [JournalId]) -> Vec<&'a str> {
        ids.iter().map(|&j| self.journal_name(j)).collect()
    }

    pub fn member_names<'a>(&'a self, ids: &'a [MemberId]) -> Vec<&'a str> {
        ids.iter().map(|&m| self.member_name(m)).collect()
    }

    /// Every member seen in any year.
    pub fn all_member_count(&self) -> usize {
        self.member_names.len()
    }

    pub fn all_journal_count(&self) -> usize {
        self.journal_names.len()
    }

    /// Journals with a roster in `year`, sorted by name.
    pub fn journals_at(&self, year: Year) -> Result<BTreeSet<&str>, PanelError> {
        Ok(self
            .snapshot(year)?
            .journals()
            .map(|j| self.journal_name(j))
            .collect())
    }

    /// Union of all rosters in `year`.
    pub fn members_at(&self, year: Year) -> Result<BTreeSet<&str>, PanelError> {
        Ok(self
            .snapshot(year)?
            .members()
            .iter()
            .map(|&m| self.member_name(m))
            .collect())
    }

    pub fn board_size(&self, year: Year, journal: &str) -> Result<u64, PanelError> {
        let snapshot = self.snapshot(year)?;
        self.journal_id(journal)
            .and_then(|j| snapshot.board(j))
            .map(Board::size)
            .ok_or_else(|| PanelError::Inactive {
                year,
                journal: journal.to_owned(),
            })
    }

    /// An interval between two observation years, adjacent or not.
    pub fn interval(&self, from_year: Year, to_year: Year) -> Result<Interval, PanelError> {
        let interval = Interval::between(from_year, to_year)?;
        self.snapshot(from_year)?;
        self.snapshot(to_year)?;
        Ok(interval)
    }

    /// Intervals between consecutive observation years.
    pub fn adjacent_intervals(&self) -> Vec<Interval> {
        self.years
            .windows(2)
            .map(|w| Interval::between(w[0], w[1]).expect("years are strictly increasing"))
            .collect()
    }

    /// The genesis interval into the first observation year. Its period is the
    /// length of the first regular interval, or one year for single-year panels.
    pub fn genesis_interval(&self) -> Interval {
        let period = match self.years.as_slice() {
            [a, b, ..] => (b - a) as u32,
            _ => 1,
        };
        Interval::genesis(self.years[0], period)
    }

    /// True when the interval spans two consecutive observation years.
    pub fn is_adjacent(&self, interval: &Interval) -> bool {
        match interval.from_year {
            None => false,
            Some(from) => self
                .years
                .windows(2)
                .any(|w| w[0] == from && w[1] == interval.to_year),
        }
    }

    /// Row label of an interval in report tables: the end year for adjacent and
    /// genesis intervals, otherwise the two-digit form of both endpoints ("0619").
    pub fn interval_label(&self, interval: &Interval) -> String {
        match interval.from_year {
            Some(from) if !self.is_adjacent(interval) => {
                format!(
                    "{:02}{:02}",
                    from.rem_euclid(100),
                    interval.to_year.rem_euclid(100)
                )
            }
            _ => interval.to_year.to_string(),
        }
    }

    /// Journal ids active in either endpoint of the interval, sorted.
    pub fn journals_in_interval(&self, interval: &Interval) -> Result<Vec<JournalId>, PanelError> {
        let (prev, cur) = self.endpoints(interval)?;
        let mut ids: Vec<JournalId> = prev.journals().chain(cur.journals()).collect();
        ids.sort_unstable();
        ids.dedup();
        Ok(ids)
    }

    pub(crate) fn require_active_in_interval(
        &self,
        interval: &Interval,
        journal: JournalId,
    ) -> Result<(&Snapshot, &Snapshot), PanelError> {
        let (prev, cur) = self.endpoints(interval)?;
        if prev.is_active(journal) || cur.is_active(journal) {
            Ok((prev, cur))
        } else {
            Err(PanelError::InactiveInInterval {
                journal: self.journal_name(journal).to_owned(),
                from: interval
                    .from_year
                    .map_or_else(|| "genesis".to_owned(), |y| y.to_string()),
                to: interval.to_year,
            })
        }
    }
}
