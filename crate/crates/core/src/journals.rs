//! Journal demography: which journals were created, discontinued or persisted
//! over an interval, and the five journal rates.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::panel::{Interval, JournalId, Panel, PanelError};
use crate::rates::{average, make_rate, share, RateRecord};

/// Journal counts for one interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct JournalCounts {
    /// Active journals at the start.
    pub prev: u64,
    /// Active journals at the end.
    pub cur: u64,
    pub created: u64,
    pub discontinued: u64,
    pub persistent: u64,
    /// Persistent journals whose board grew.
    pub expanding: u64,
    /// Persistent journals whose board size is unchanged.
    pub stable: u64,
    /// Persistent journals whose board shrank.
    pub contracting: u64,
}

impl JournalCounts {
    pub fn average(&self) -> f64 {
        average(self.prev, self.cur)
    }
}

/// Journal counts together with the id sets they count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JournalFlows {
    pub counts: JournalCounts,
    pub created: Vec<JournalId>,
    pub discontinued: Vec<JournalId>,
    pub persistent: Vec<JournalId>,
    pub expanding: Vec<JournalId>,
    pub stable: Vec<JournalId>,
    pub contracting: Vec<JournalId>,
}

pub fn journal_flows(panel: &Panel, interval: &Interval) -> Result<JournalFlows, PanelError> {
    let (prev, cur) = panel.endpoints(interval)?;
    let mut flows = JournalFlows {
        counts: JournalCounts {
            prev: prev.journal_count(),
            cur: cur.journal_count(),
            ..Default::default()
        },
        created: Vec::new(),
        discontinued: Vec::new(),
        persistent: Vec::new(),
        expanding: Vec::new(),
        stable: Vec::new(),
        contracting: Vec::new(),
    };

    let (a, b) = (prev.boards(), cur.boards());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let order = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.journal.cmp(&y.journal),
            (Some(_), None) => Ordering::Less,
            (None, _) => Ordering::Greater,
        };
        match order {
            Ordering::Less => {
                flows.discontinued.push(a[i].journal);
                i += 1;
            }
            Ordering::Greater => {
                flows.created.push(b[j].journal);
                j += 1;
            }
            Ordering::Equal => {
                let journal = a[i].journal;
                flows.persistent.push(journal);
                match b[j].size().cmp(&a[i].size()) {
                    Ordering::Greater => flows.expanding.push(journal),
                    Ordering::Equal => flows.stable.push(journal),
                    Ordering::Less => flows.contracting.push(journal),
                }
                i += 1;
                j += 1;
            }
        }
    }

    let c = &mut flows.counts;
    c.created = flows.created.len() as u64;
    c.discontinued = flows.discontinued.len() as u64;
    c.persistent = flows.persistent.len() as u64;
    c.expanding = flows.expanding.len() as u64;
    c.stable = flows.stable.len() as u64;
    c.contracting = flows.contracting.len() as u64;
    Ok(flows)
}

/// The five journal rates over the average journal stock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JournalRates {
    pub creation: RateRecord,
    /// Non-positive.
    pub destruction: RateRecord,
    pub net_growth: RateRecord,
    pub persistence: RateRecord,
    pub turnover: RateRecord,
    /// Set when both stocks are zero; every rate is then zero.
    pub degenerate: bool,
}

pub fn journal_rates(counts: &JournalCounts, interval: &Interval) -> JournalRates {
    let p = interval.period_years();
    let avg = counts.average();
    let net = if avg > 0.0 {
        (counts.cur as f64 - counts.prev as f64) / avg
    } else {
        0.0
    };
    JournalRates {
        creation: make_rate(share(counts.created, avg), p),
        destruction: make_rate(-share(counts.discontinued, avg), p),
        net_growth: make_rate(net, p),
        persistence: make_rate(share(counts.persistent, avg), p),
        turnover: make_rate(share(counts.created + counts.discontinued, avg), p),
        degenerate: avg == 0.0,
    }
}
