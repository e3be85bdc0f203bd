//! Per-journal member flows.
//!
//! An entrant to a journal may already sit on another board; only entrants absent
//! from every board at the start of the interval are new to the system. Likewise a
//! leaver exits the system only when it holds no seat anywhere at the end.

use serde::{Deserialize, Serialize};

use crate::exec::Execution;
use crate::panel::{Interval, JournalId, MemberId, Panel, PanelError};
use crate::rates::{average, make_rate, share, RateRecord};
use crate::sets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct JournalMemberCounts {
    /// Board size at the start (zero for a newly created journal).
    pub prev: u64,
    /// Board size at the end (zero for a discontinued journal).
    pub cur: u64,
    pub retained: u64,
    /// Entrants to this journal.
    pub new_journal: u64,
    /// Entrants absent from every board at the start.
    pub new_system: u64,
    /// Leavers of this journal.
    pub exit_journal: u64,
    /// Leavers absent from every board at the end.
    pub exit_system: u64,
}

impl JournalMemberCounts {
    pub fn average(&self) -> f64 {
        average(self.prev, self.cur)
    }

    pub fn board_change(&self) -> i64 {
        self.cur as i64 - self.prev as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JournalMemberFlows {
    pub journal: JournalId,
    pub counts: JournalMemberCounts,
    pub retained: Vec<MemberId>,
    pub new_journal: Vec<MemberId>,
    pub new_system: Vec<MemberId>,
    pub exit_journal: Vec<MemberId>,
    pub exit_system: Vec<MemberId>,
}

pub fn journal_member_flows(
    panel: &Panel,
    interval: &Interval,
    journal: JournalId,
) -> Result<JournalMemberFlows, PanelError> {
    let (prev, cur) = panel.require_active_in_interval(interval, journal)?;
    let before: &[MemberId] = prev.board(journal).map_or(&[], |b| &b.members);
    let after: &[MemberId] = cur.board(journal).map_or(&[], |b| &b.members);

    let retained = sets::intersection(after, before);
    let new_journal = sets::difference(after, before);
    let exit_journal = sets::difference(before, after);
    let new_system: Vec<MemberId> = new_journal
        .iter()
        .copied()
        .filter(|&m| !prev.has_member(m))
        .collect();
    let exit_system: Vec<MemberId> = exit_journal
        .iter()
        .copied()
        .filter(|&m| !cur.has_member(m))
        .collect();

    Ok(JournalMemberFlows {
        journal,
        counts: JournalMemberCounts {
            prev: before.len() as u64,
            cur: after.len() as u64,
            retained: retained.len() as u64,
            new_journal: new_journal.len() as u64,
            new_system: new_system.len() as u64,
            exit_journal: exit_journal.len() as u64,
            exit_system: exit_system.len() as u64,
        },
        retained,
        new_journal,
        new_system,
        exit_journal,
        exit_system,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JournalMemberRates {
    pub growth: RateRecord,
    pub entry: RateRecord,
    pub system_entry: RateRecord,
    /// Non-positive.
    pub exit: RateRecord,
    pub turnover: RateRecord,
    pub retention: RateRecord,
    /// System-new entrants per net seat added; zero unless the board grew.
    pub coverage: f64,
    /// The board shrank, so no created seats exist for `coverage` to cover.
    pub board_contracted: bool,
    pub degenerate: bool,
}

pub fn journal_member_rates(counts: &JournalMemberCounts, interval: &Interval) -> JournalMemberRates {
    let p = interval.period_years();
    let avg = counts.average();
    let change = counts.board_change();
    let growth = if avg > 0.0 { change as f64 / avg } else { 0.0 };
    let coverage = if change > 0 {
        counts.new_system as f64 / change as f64
    } else {
        0.0
    };
    JournalMemberRates {
        growth: make_rate(growth, p),
        entry: make_rate(share(counts.new_journal, avg), p),
        system_entry: make_rate(share(counts.new_system, avg), p),
        exit: make_rate(-share(counts.exit_journal, avg), p),
        turnover: make_rate(share(counts.new_journal + counts.exit_journal, avg), p),
        retention: make_rate(share(counts.retained, avg), p),
        coverage,
        board_contracted: change < 0,
        degenerate: avg == 0.0,
    }
}

/// Flows and rates of one journal over one interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JournalMemberRecord {
    pub journal: JournalId,
    pub counts: JournalMemberCounts,
    pub rates: JournalMemberRates,
}

/// One record per journal active at either endpoint, sorted by journal.
pub fn all_journal_member_rates(
    panel: &Panel,
    interval: &Interval,
    exec: Execution,
) -> Result<Vec<JournalMemberRecord>, PanelError> {
    let journals = panel.journals_in_interval(interval)?;
    exec.try_map(&journals, |&journal| {
        let flows = journal_member_flows(panel, interval, journal)?;
        Ok(JournalMemberRecord {
            journal,
            counts: flows.counts,
            rates: journal_member_rates(&flows.counts, interval),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::InputRow;
    use crate::panel::build_panel;
    use approx::assert_abs_diff_eq;

    fn panel(rows: &[(i32, &str, &str)]) -> Panel {
        let rows: Vec<_> = rows.iter().map(|&(y, j, m)| InputRow::new(y, j, m)).collect();
        build_panel(&rows).unwrap().0
    }

    fn micro() -> Panel {
        panel(&[
            (1, "A", "m1"),
            (1, "A", "m2"),
            (1, "B", "m3"),
            (2, "A", "m1"),
            (2, "A", "m4"),
            (2, "A", "m5"),
            (2, "C", "m6"),
        ])
    }

    #[test]
    fn micro_journal_a() {
        let p = micro();
        let iv = p.interval(1, 2).unwrap();
        let f = journal_member_flows(&p, &iv, p.journal_id("A").unwrap()).unwrap();
        assert_eq!(p.member_names(&f.retained), ["m1"]);
        assert_eq!(p.member_names(&f.new_journal), ["m4", "m5"]);
        assert_eq!(f.counts.new_system, 2);
        assert_eq!(p.member_names(&f.exit_journal), ["m2"]);
        assert_eq!(f.counts.exit_system, 1);

        let r = journal_member_rates(&f.counts, &iv);
        assert_abs_diff_eq!(r.growth.raw, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(r.entry.raw, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(r.system_entry.raw, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(r.exit.raw, -0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(r.turnover.raw, 1.2, epsilon = 1e-15);
        assert_abs_diff_eq!(r.retention.raw, 0.4, epsilon = 1e-15);
        assert_eq!(r.coverage, 2.0);
        assert!(!r.board_contracted);
    }

    #[test]
    fn micro_discontinued_and_new() {
        let p = micro();
        let iv = p.interval(1, 2).unwrap();
        let b = journal_member_flows(&p, &iv, p.journal_id("B").unwrap()).unwrap();
        assert_eq!(b.counts.cur, 0);
        assert_eq!(p.member_names(&b.exit_journal), ["m3"]);
        assert_eq!(b.counts.exit_system, 1);
        let rb = journal_member_rates(&b.counts, &iv);
        assert_eq!(rb.growth.raw, -2.0);
        assert!(rb.board_contracted);
        assert_eq!(rb.coverage, 0.0);

        let c = journal_member_flows(&p, &iv, p.journal_id("C").unwrap()).unwrap();
        let rc = journal_member_rates(&c.counts, &iv);
        assert_eq!(rc.growth.raw, 2.0);
        assert_eq!(rc.retention.raw, 0.0);
    }

    #[test]
    fn cross_journal_move_is_not_system_new() {
        let p = panel(&[(1, "A", "p"), (1, "B", "q"), (2, "A", "q"), (2, "B", "p")]);
        let iv = p.interval(1, 2).unwrap();
        let a = journal_member_flows(&p, &iv, p.journal_id("A").unwrap()).unwrap();
        assert_eq!(p.member_names(&a.new_journal), ["q"]);
        assert_eq!(a.counts.new_system, 0);
        assert_eq!(a.counts.exit_journal, 1);
        assert_eq!(a.counts.exit_system, 0);
    }

    #[test]
    fn all_records_cover_both_endpoints() {
        let p = micro();
        let iv = p.interval(1, 2).unwrap();
        let recs = all_journal_member_rates(&p, &iv, Execution::Sequential).unwrap();
        let names: Vec<_> = recs.iter().map(|r| p.journal_name(r.journal)).collect();
        assert_eq!(names, ["A", "B", "C"]);
        assert_eq!(
            recs,
            all_journal_member_rates(&p, &iv, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn full_replacement_and_fixed_point() {
        let p = panel(&[(1, "A", "a"), (1, "B", "b"), (2, "C", "c"), (2, "D", "d")]);
        let recs = all_journal_member_rates(&p, &p.interval(1, 2).unwrap(), Execution::Sequential).unwrap();
        assert!(recs.iter().all(|r| r.rates.growth.raw.abs() == 2.0));

        let p = panel(&[(1, "A", "a"), (1, "A", "b"), (2, "A", "a"), (2, "A", "b")]);
        let recs = all_journal_member_rates(&p, &p.interval(1, 2).unwrap(), Execution::Sequential).unwrap();
        assert!(recs
            .iter()
            .all(|r| r.rates.growth.raw == 0.0 && r.rates.retention.raw == 1.0));
    }

    #[test]
    fn genesis_entrants_are_all_system_new() {
        let p = micro();
        let g = p.genesis_interval();
        for r in all_journal_member_rates(&p, &g, Execution::Sequential).unwrap() {
            assert_eq!(r.counts.new_system, r.counts.new_journal);
            assert_eq!(r.rates.growth.raw, 2.0);
        }
    }

    #[test]
    fn inactive_journal_is_an_error() {
        let p = panel(&[(1, "A", "a"), (2, "A", "a"), (3, "B", "b")]);
        let err = journal_member_flows(&p, &p.interval(1, 2).unwrap(), p.journal_id("B").unwrap());
        assert_eq!(err.unwrap_err().code(), "INACTIVE");
    }
}
