//! CSV rendering of a [`ReportBundle`]. Headers are fixed per file; rates are
//! printed in the configured scale, rounded to the configured decimals.

use crate::distribution::Scale;
use crate::panel::Interval;
use crate::rates::RateRecord;

use super::ReportBundle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFile {
    Demography,
    JournalRates,
    Stocks,
    SeatFlows,
    SeatRates,
    MemberDynamics,
    JournalMemberRates,
    Distributions,
}

pub const TABLE_FILES: [TableFile; 8] = [
    TableFile::Demography,
    TableFile::JournalRates,
    TableFile::Stocks,
    TableFile::SeatFlows,
    TableFile::SeatRates,
    TableFile::MemberDynamics,
    TableFile::JournalMemberRates,
    TableFile::Distributions,
];

const INTERVAL_COLUMNS: [&str; 4] = ["label", "from_year", "to_year", "period_years"];

impl TableFile {
    pub fn file_name(self) -> &'static str {
        match self {
            TableFile::Demography => "demography.csv",
            TableFile::JournalRates => "journal_rates.csv",
            TableFile::Stocks => "stocks.csv",
            TableFile::SeatFlows => "seat_flows.csv",
            TableFile::SeatRates => "seat_rates.csv",
            TableFile::MemberDynamics => "member_dynamics.csv",
            TableFile::JournalMemberRates => "journal_member_rates.csv",
            TableFile::Distributions => "distributions.csv",
        }
    }

    pub fn headers(self) -> Vec<&'static str> {
        let tail: &[&str] = match self {
            TableFile::Stocks => {
                return vec![
                    "year",
                    "journals",
                    "seats",
                    "median_board_size",
                    "seats_per_journal",
                    "members",
                    "members_per_journal",
                    "seats_per_member",
                ]
            }
            TableFile::Demography => &[
                "journals_prev",
                "journals",
                "persistent",
                "created",
                "discontinued",
                "expanding",
                "stable",
                "contracting",
            ],
            TableFile::JournalRates => &["creation", "destruction", "net_growth", "persistence", "turnover"],
            TableFile::SeatFlows => &[
                "seats_prev",
                "seats",
                "created_expanding",
                "created_new",
                "created",
                "destroyed_contracting",
                "destroyed_exit",
                "destroyed",
                "net_change",
                "turnover",
                "average_seats",
            ],
            TableFile::SeatRates => &[
                "created_expanding",
                "created_new",
                "created",
                "destroyed_contracting",
                "destroyed_exit",
                "destroyed",
                "net_growth",
                "turnover",
            ],
            TableFile::MemberDynamics => &[
                "members_prev",
                "members",
                "retained",
                "new",
                "exited",
                "retention",
                "entry",
                "exit",
                "net_growth",
                "turnover",
                "coverage",
            ],
            TableFile::JournalMemberRates => &[
                "journal_id",
                "board_prev",
                "board",
                "retained",
                "new_journal",
                "new_system",
                "exit_journal",
                "exit_system",
                "growth",
                "entry",
                "system_entry",
                "exit",
                "turnover",
                "retention",
                "coverage",
                "board_contracted",
            ],
            TableFile::Distributions => &[
                "metric",
                "scale",
                "n",
                "min",
                "q1",
                "median",
                "q3",
                "max",
                "iqr",
                "whisker_low",
                "whisker_high",
                "skewness",
                "outliers",
            ],
        };
        INTERVAL_COLUMNS.iter().chain(tail).copied().collect()
    }
}

/// Fixed-point formatting that never prints a negative zero.
pub fn format_number(value: f64, decimals: u8) -> String {
    let s = format!("{:.*}", decimals as usize, value);
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_owned()
    } else {
        s
    }
}

struct Row {
    cells: Vec<String>,
    decimals: u8,
    scale: Scale,
}

impl Row {
    fn new(decimals: u8, scale: Scale) -> Self {
        Row {
            cells: Vec::new(),
            decimals,
            scale,
        }
    }

    fn interval(mut self, label: &str, interval: &Interval) -> Self {
        self.cells.push(label.to_owned());
        self.cells
            .push(interval.from_year().map(|y| y.to_string()).unwrap_or_default());
        self.cells.push(interval.to_year().to_string());
        self.cells.push(interval.period_years().to_string());
        self
    }

    fn text(mut self, s: impl ToString) -> Self {
        self.cells.push(s.to_string());
        self
    }

    fn num(mut self, v: f64) -> Self {
        self.cells.push(format_number(v, self.decimals));
        self
    }

    fn rate(self, r: &RateRecord) -> Self {
        let v = self.scale.pick(r);
        self.num(v)
    }
}

pub(super) fn render(file: TableFile, bundle: &ReportBundle) -> Vec<u8> {
    let settings = &bundle.metadata.settings;
    let (d, s) = (settings.decimals, settings.scale);
    let mut rows: Vec<Vec<String>> = Vec::new();
    match file {
        TableFile::Demography => {
            for r in &bundle.intervals {
                let c = &r.journals;
                let row = Row::new(d, s).interval(&r.label, &r.interval);
                rows.push(
                    row.text(c.prev)
                        .text(c.cur)
                        .text(c.persistent)
                        .text(c.created)
                        .text(c.discontinued)
                        .text(c.expanding)
                        .text(c.stable)
                        .text(c.contracting)
                        .cells,
                );
            }
        }
        TableFile::JournalRates => {
            for r in &bundle.intervals {
                let j = &r.journal_rates;
                let row = Row::new(d, s).interval(&r.label, &r.interval);
                rows.push(
                    row.rate(&j.creation)
                        .rate(&j.destruction)
                        .rate(&j.net_growth)
                        .rate(&j.persistence)
                        .rate(&j.turnover)
                        .cells,
                );
            }
        }
        TableFile::Stocks => {
            for y in &bundle.stocks {
                rows.push(
                    Row::new(d, s)
                        .text(y.year)
                        .text(y.journals)
                        .text(y.seats)
                        .num(y.median_board_size)
                        .num(y.seats_per_journal)
                        .text(y.members)
                        .num(y.members_per_journal)
                        .num(y.seats_per_member)
                        .cells,
                );
            }
        }
        TableFile::SeatFlows => {
            for r in &bundle.intervals {
                let f = &r.seats;
                let row = Row::new(d, s).interval(&r.label, &r.interval);
                rows.push(
                    row.text(f.seats_prev)
                        .text(f.seats_cur)
                        .text(f.created_expanding)
                        .text(f.created_new)
                        .text(f.created)
                        .text(f.destroyed_contracting)
                        .text(f.destroyed_exit)
                        .text(f.destroyed)
                        .text(f.net_change)
                        .text(f.turnover)
                        .num(f.average)
                        .cells,
                );
            }
        }
        TableFile::SeatRates => {
            for r in &bundle.intervals {
                let q = &r.seat_rates;
                let row = Row::new(d, s).interval(&r.label, &r.interval);
                rows.push(
                    row.rate(&q.created_expanding)
                        .rate(&q.created_new)
                        .rate(&q.created)
                        .rate(&q.destroyed_contracting)
                        .rate(&q.destroyed_exit)
                        .rate(&q.destroyed)
                        .rate(&q.net_growth)
                        .rate(&q.turnover)
                        .cells,
                );
            }
        }
        TableFile::MemberDynamics => {
            for r in &bundle.intervals {
                let (c, m) = (&r.members, &r.member_rates);
                let row = Row::new(d, s).interval(&r.label, &r.interval);
                rows.push(
                    row.text(c.prev)
                        .text(c.cur)
                        .text(c.retained)
                        .text(c.new)
                        .text(c.exited)
                        .rate(&m.retention)
                        .rate(&m.entry)
                        .rate(&m.exit)
                        .rate(&m.growth)
                        .rate(&m.turnover)
                        .num(m.coverage)
                        .cells,
                );
            }
        }
        TableFile::JournalMemberRates => {
            for r in &bundle.journal_members {
                let (c, m) = (&r.counts, &r.rates);
                let row = Row::new(d, s).interval(&r.label, &r.interval);
                rows.push(
                    row.text(&r.journal_id)
                        .text(c.prev)
                        .text(c.cur)
                        .text(c.retained)
                        .text(c.new_journal)
                        .text(c.new_system)
                        .text(c.exit_journal)
                        .text(c.exit_system)
                        .rate(&m.growth)
                        .rate(&m.entry)
                        .rate(&m.system_entry)
                        .rate(&m.exit)
                        .rate(&m.turnover)
                        .rate(&m.retention)
                        .num(m.coverage)
                        .text(m.board_contracted)
                        .cells,
                );
            }
        }
        TableFile::Distributions => {
            for r in &bundle.distributions {
                let b = &r.summary;
                let outliers: Vec<String> = b.outliers.iter().map(|&v| format_number(v, d)).collect();
                let row = Row::new(d, s).interval(&r.label, &r.interval);
                rows.push(
                    row.text(r.metric)
                        .text(r.scale.as_str())
                        .text(b.n)
                        .num(b.min)
                        .num(b.q1)
                        .num(b.median)
                        .num(b.q3)
                        .num(b.max)
                        .num(b.iqr)
                        .num(b.whisker_low)
                        .num(b.whisker_high)
                        .num(b.skewness)
                        .text(outliers.join(";"))
                        .cells,
                );
            }
        }
    }

    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(file.headers()).expect("write to memory");
    for row in rows {
        w.write_record(&row).expect("write to memory");
    }
    w.into_inner().expect("flush to memory")
}
