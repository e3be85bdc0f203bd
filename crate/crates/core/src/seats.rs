//! Seat accounting. A seat is one filled board position; a journal's board size
//! is its roster length. Seat changes are attributed to four channels: expanding
//! and newly created journals create seats, contracting and discontinued journals
//! destroy them. Persistent journals with unchanged boards contribute to none.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::journals::JournalFlows;
use crate::panel::{Interval, JournalId, Panel, PanelError, Year};
use crate::rates::{average, make_rate, share, symmetric_rate, RateRecord};

/// Growth rate of one journal's board, in [-2, 2]. A journal absent at one
/// endpoint has size zero there, so start-ups score +2 and closures -2.
pub fn board_growth_rate(panel: &Panel, interval: &Interval, journal: JournalId) -> Result<f64, PanelError> {
    let (prev, cur) = panel.require_active_in_interval(interval, journal)?;
    Ok(symmetric_rate(prev.board_size(journal), cur.board_size(journal))
        .expect("journal is active at one endpoint"))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("stocks {prev} -> {cur} do not match creation {created} minus destruction {destroyed}")]
pub struct InconsistentStocks {
    pub prev: u64,
    pub cur: u64,
    pub created: u64,
    pub destroyed: u64,
}

/// Seat stocks and flows for one interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeatFlows {
    pub seats_prev: u64,
    pub seats_cur: u64,
    /// Seats added by expanding persistent journals.
    pub created_expanding: u64,
    /// All seats of newly created journals.
    pub created_new: u64,
    /// Gross creation.
    pub created: u64,
    /// Seats lost by contracting persistent journals.
    pub destroyed_contracting: u64,
    /// All seats of discontinued journals.
    pub destroyed_exit: u64,
    /// Gross destruction.
    pub destroyed: u64,
    pub net_change: i64,
    /// Gross turnover, creation plus destruction.
    pub turnover: u64,
    /// Average seat stock of the two endpoints.
    pub average: f64,
}

impl SeatFlows {
    /// Assembles flows from the four channel counts, checking that the stocks
    /// change by exactly creation minus destruction.
    pub fn from_channels(
        seats_prev: u64,
        seats_cur: u64,
        created_expanding: u64,
        created_new: u64,
        destroyed_contracting: u64,
        destroyed_exit: u64,
    ) -> Result<Self, InconsistentStocks> {
        let created = created_expanding + created_new;
        let destroyed = destroyed_contracting + destroyed_exit;
        let net_change = seats_cur as i64 - seats_prev as i64;
        if net_change != created as i64 - destroyed as i64 {
            return Err(InconsistentStocks {
                prev: seats_prev,
                cur: seats_cur,
                created,
                destroyed,
            });
        }
        Ok(SeatFlows {
            seats_prev,
            seats_cur,
            created_expanding,
            created_new,
            created,
            destroyed_contracting,
            destroyed_exit,
            destroyed,
            net_change,
            turnover: created + destroyed,
            average: average(seats_prev, seats_cur),
        })
    }
}

pub fn seat_flows(panel: &Panel, interval: &Interval) -> Result<SeatFlows, PanelError> {
    let journals = crate::journals::journal_flows(panel, interval)?;
    seat_flows_for(panel, interval, &journals)
}

/// Seat flows over an already computed journal partition.
pub fn seat_flows_for(
    panel: &Panel,
    interval: &Interval,
    journals: &JournalFlows,
) -> Result<SeatFlows, PanelError> {
    let (prev, cur) = panel.endpoints(interval)?;
    let created_new = journals.created.iter().map(|&j| cur.board_size(j)).sum();
    let destroyed_exit = journals.discontinued.iter().map(|&j| prev.board_size(j)).sum();
    let created_expanding = journals
        .expanding
        .iter()
        .map(|&j| cur.board_size(j) - prev.board_size(j))
        .sum();
    let destroyed_contracting = journals
        .contracting
        .iter()
        .map(|&j| prev.board_size(j) - cur.board_size(j))
        .sum();
    Ok(SeatFlows::from_channels(
        prev.seats(),
        cur.seats(),
        created_expanding,
        created_new,
        destroyed_contracting,
        destroyed_exit,
    )
    .expect("channels partition every board change"))
}

/// Seat rates over the average seat stock. Destruction rates are non-positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeatRates {
    pub created_expanding: RateRecord,
    pub created_new: RateRecord,
    pub created: RateRecord,
    pub destroyed_contracting: RateRecord,
    pub destroyed_exit: RateRecord,
    pub destroyed: RateRecord,
    pub net_growth: RateRecord,
    pub turnover: RateRecord,
    pub degenerate: bool,
}

pub fn seat_rates(flows: &SeatFlows, interval: &Interval) -> SeatRates {
    let p = interval.period_years();
    let z = flows.average;
    let net = if z > 0.0 { flows.net_change as f64 / z } else { 0.0 };
    SeatRates {
        created_expanding: make_rate(share(flows.created_expanding, z), p),
        created_new: make_rate(share(flows.created_new, z), p),
        created: make_rate(share(flows.created, z), p),
        destroyed_contracting: make_rate(-share(flows.destroyed_contracting, z), p),
        destroyed_exit: make_rate(-share(flows.destroyed_exit, z), p),
        destroyed: make_rate(-share(flows.destroyed, z), p),
        net_growth: make_rate(net, p),
        turnover: make_rate(share(flows.turnover, z), p),
        degenerate: z == 0.0,
    }
}

/// Cross-sectional stocks of one observation year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YearStocks {
    pub year: Year,
    pub journals: u64,
    pub seats: u64,
    pub median_board_size: f64,
    pub seats_per_journal: f64,
    pub members: u64,
    pub members_per_journal: f64,
    /// At least 1: every member holds at least one seat.
    pub seats_per_member: f64,
}

pub fn year_stocks(panel: &Panel, year: Year) -> Result<YearStocks, PanelError> {
    let snapshot = panel.snapshot(year)?;
    let mut sizes: Vec<u64> = snapshot.boards().iter().map(|b| b.size()).collect();
    sizes.sort_unstable();
    let journals = snapshot.journal_count();
    let seats = snapshot.seats();
    let members = snapshot.member_count();
    Ok(YearStocks {
        year,
        journals,
        seats,
        median_board_size: median_of_sorted(&sizes),
        seats_per_journal: share(seats, journals as f64),
        members,
        members_per_journal: share(members, journals as f64),
        seats_per_member: share(seats, members as f64),
    })
}

/// Median with the two middle values averaged at even counts.
fn median_of_sorted(sorted: &[u64]) -> f64 {
    match sorted.len() {
        0 => 0.0,
        n if n % 2 == 1 => sorted[n / 2] as f64,
        n => (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::InputRow;
    use crate::panel::build_panel;
    use approx::assert_abs_diff_eq;

    fn micro() -> Panel {
        let rows = [
            (1, "A", "m1"),
            (1, "A", "m2"),
            (1, "B", "m3"),
            (2, "A", "m1"),
            (2, "A", "m4"),
            (2, "A", "m5"),
            (2, "C", "m6"),
        ]
        .map(|(y, j, m)| InputRow::new(y, j, m));
        build_panel(&rows).unwrap().0
    }

    #[test]
    fn micro_board_growth() {
        let p = micro();
        let iv = p.interval(1, 2).unwrap();
        let id = |n| p.journal_id(n).unwrap();
        assert_abs_diff_eq!(board_growth_rate(&p, &iv, id("A")).unwrap(), 0.4, epsilon = 1e-15);
        assert_eq!(board_growth_rate(&p, &iv, id("B")).unwrap(), -2.0);
        assert_eq!(board_growth_rate(&p, &iv, id("C")).unwrap(), 2.0);
    }

    #[test]
    fn board_growth_needs_activity() {
        let rows = [(1, "A", "x"), (2, "A", "x"), (3, "B", "y")].map(|(y, j, m)| InputRow::new(y, j, m));
        let (p, _) = build_panel(&rows).unwrap();
        let err = board_growth_rate(&p, &p.interval(1, 2).unwrap(), p.journal_id("B").unwrap());
        assert_eq!(err.unwrap_err().code(), "INACTIVE");
    }

    #[test]
    fn micro_flows() {
        let p = micro();
        let f = seat_flows(&p, &p.interval(1, 2).unwrap()).unwrap();
        assert_eq!(
            (
                f.seats_prev,
                f.seats_cur,
                f.created_expanding,
                f.created_new,
                f.created
            ),
            (3, 4, 1, 1, 2)
        );
        assert_eq!(
            (
                f.destroyed_contracting,
                f.destroyed_exit,
                f.destroyed,
                f.net_change,
                f.turnover
            ),
            (0, 1, 1, 1, 3)
        );
        assert_eq!(f.average, 3.5);
    }

    #[test]
    fn micro_rates() {
        let p = micro();
        let iv = p.interval(1, 2).unwrap();
        let r = seat_rates(&seat_flows(&p, &iv).unwrap(), &iv);
        assert_abs_diff_eq!(r.net_growth.raw, 1.0 / 3.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.turnover.raw, 3.0 / 3.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.net_growth.raw, 0.2857, epsilon = 1e-4);
        assert_abs_diff_eq!(r.turnover.raw, 0.8571, epsilon = 1e-4);
    }

    #[test]
    fn postwar_decade_table_rates() {
        let f = SeatFlows::from_channels(1196, 2825, 718, 1068, 134, 23).unwrap();
        assert_eq!((f.created, f.destroyed), (1786, 157));
        let r = seat_rates(&f, &Interval::between(1946, 1956).unwrap());
        assert_abs_diff_eq!(r.created.normalized, 0.445, epsilon = 1e-3);
        assert_abs_diff_eq!(r.net_growth.normalized, 0.406, epsilon = 1e-3);
        assert_abs_diff_eq!(r.turnover.normalized, 0.484, epsilon = 1e-3);
    }

    #[test]
    fn inconsistent_channels_rejected() {
        assert!(SeatFlows::from_channels(10, 12, 1, 0, 0, 0).is_err());
    }

    #[test]
    fn degenerate_rates() {
        let f = SeatFlows::from_channels(0, 0, 0, 0, 0, 0).unwrap();
        let r = seat_rates(&f, &Interval::between(1, 2).unwrap());
        assert!(r.degenerate);
        assert_eq!(r.net_growth.raw, 0.0);
    }

    #[test]
    fn stocks_and_median() {
        let p = micro();
        let s1 = year_stocks(&p, 1).unwrap();
        assert_eq!((s1.journals, s1.seats, s1.members), (2, 3, 3));
        assert_eq!(s1.median_board_size, 1.5);
        let s2 = year_stocks(&p, 2).unwrap();
        assert_eq!(s2.median_board_size, 2.0);
        assert_eq!(s2.seats_per_member, 1.0);
        assert_eq!(median_of_sorted(&[4, 5, 6, 7]), 5.5);
        assert_eq!(median_of_sorted(&[3]), 3.0);
    }
}
