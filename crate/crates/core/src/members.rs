//! System-wide member flows. A member is new when absent from every board at the
//! start of the interval and exits when absent from every board at its end; moves
//! between journals leave the aggregate flows untouched.

use serde::{Deserialize, Serialize};

use crate::panel::{Interval, MemberId, Panel, PanelError};
use crate::rates::{average, make_rate, share, RateRecord};
use crate::seats::SeatFlows;
use crate::sets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MemberCounts {
    pub prev: u64,
    pub cur: u64,
    pub retained: u64,
    pub new: u64,
    pub exited: u64,
}

impl MemberCounts {
    pub fn average(&self) -> f64 {
        average(self.prev, self.cur)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberFlows {
    pub counts: MemberCounts,
    pub retained: Vec<MemberId>,
    pub new: Vec<MemberId>,
    pub exited: Vec<MemberId>,
}

pub fn member_flows(panel: &Panel, interval: &Interval) -> Result<MemberFlows, PanelError> {
    let (prev, cur) = panel.endpoints(interval)?;
    let retained = sets::intersection(cur.members(), prev.members());
    let new = sets::difference(cur.members(), prev.members());
    let exited = sets::difference(prev.members(), cur.members());
    Ok(MemberFlows {
        counts: MemberCounts {
            prev: prev.member_count(),
            cur: cur.member_count(),
            retained: retained.len() as u64,
            new: new.len() as u64,
            exited: exited.len() as u64,
        },
        retained,
        new,
        exited,
    })
}

/// Member rates over the average member stock, plus the share of gross seat
/// creation filled by new members.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MemberRates {
    pub growth: RateRecord,
    pub entry: RateRecord,
    /// Non-positive.
    pub exit: RateRecord,
    pub turnover: RateRecord,
    pub retention: RateRecord,
    /// New members per created seat; zero when no seat was created. Not clamped.
    pub coverage: f64,
    pub degenerate: bool,
}

pub fn member_rates(counts: &MemberCounts, seats: &SeatFlows, interval: &Interval) -> MemberRates {
    let p = interval.period_years();
    let avg = counts.average();
    let growth = if avg > 0.0 {
        (counts.cur as f64 - counts.prev as f64) / avg
    } else {
        0.0
    };
    let coverage = if seats.created > 0 {
        counts.new as f64 / seats.created as f64
    } else {
        0.0
    };
    MemberRates {
        growth: make_rate(growth, p),
        entry: make_rate(share(counts.new, avg), p),
        exit: make_rate(-share(counts.exited, avg), p),
        turnover: make_rate(share(counts.new + counts.exited, avg), p),
        retention: make_rate(share(counts.retained, avg), p),
        coverage,
        degenerate: avg == 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::InputRow;
    use crate::panel::build_panel;
    use crate::seats::seat_flows;
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
    fn micro_flows() {
        let p = micro();
        let f = member_flows(&p, &p.interval(1, 2).unwrap()).unwrap();
        assert_eq!((f.counts.prev, f.counts.cur), (3, 4));
        assert_eq!(p.member_names(&f.retained), ["m1"]);
        assert_eq!(p.member_names(&f.new), ["m4", "m5", "m6"]);
        assert_eq!(p.member_names(&f.exited), ["m2", "m3"]);
    }

    #[test]
    fn micro_rates() {
        let p = micro();
        let iv = p.interval(1, 2).unwrap();
        let f = member_flows(&p, &iv).unwrap();
        let r = member_rates(&f.counts, &seat_flows(&p, &iv).unwrap(), &iv);
        assert_abs_diff_eq!(r.growth.raw, 0.2857, epsilon = 1e-4);
        assert_abs_diff_eq!(r.entry.raw, 0.8571, epsilon = 1e-4);
        assert_abs_diff_eq!(r.exit.raw, -0.5714, epsilon = 1e-4);
        assert_abs_diff_eq!(r.turnover.raw, 1.4286, epsilon = 1e-4);
        assert_abs_diff_eq!(r.retention.raw, 0.2857, epsilon = 1e-4);
        assert_eq!(r.coverage, 1.5);
    }

    #[test]
    fn coverage_from_table_counts() {
        let seats = SeatFlows::from_channels(1196, 2825, 718, 1068, 134, 23).unwrap();
        let counts = MemberCounts {
            prev: 1074,
            cur: 2484,
            retained: 376,
            new: 2108,
            exited: 698,
        };
        let r = member_rates(&counts, &seats, &Interval::between(1946, 1956).unwrap());
        assert_abs_diff_eq!(r.coverage, 1.180, epsilon = 5e-4);
        assert_abs_diff_eq!(r.entry.normalized, 0.592, epsilon = 5e-4);
        assert_abs_diff_eq!(r.retention.normalized, 0.106, epsilon = 5e-4);

        let seats = SeatFlows::from_channels(129, 127, 7, 13, 21, 1).unwrap();
        let counts = MemberCounts {
            prev: 117,
            cur: 114,
            retained: 38,
            new: 76,
            exited: 79,
        };
        let r = member_rates(&counts, &seats, &Interval::between(1876, 1886).unwrap());
        assert_eq!(r.coverage, 3.8);
    }

    #[test]
    fn no_creation_means_zero_coverage() {
        let p = panel(&[(1, "A", "a"), (1, "A", "b"), (2, "A", "a")]);
        let iv = p.interval(1, 2).unwrap();
        let seats = seat_flows(&p, &iv).unwrap();
        assert_eq!(seats.created, 0);
        let r = member_rates(&member_flows(&p, &iv).unwrap().counts, &seats, &iv);
        assert_eq!(r.coverage, 0.0);
    }

    #[test]
    fn journal_moves_are_invisible() {
        let p = panel(&[(1, "A", "p"), (1, "B", "q"), (2, "A", "q"), (2, "B", "p")]);
        let f = member_flows(&p, &p.interval(1, 2).unwrap()).unwrap();
        assert_eq!(f.counts.retained, 2);
        assert_eq!(f.counts.new + f.counts.exited, 0);
    }
}
