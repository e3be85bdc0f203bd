//! Stock-flow accounting for longitudinal panels of editorial-board snapshots.
//!
//! A [`Panel`] holds one roster per (observation year, journal). From it the crate
//! derives three layers of flows between any two observation years:
//!
//! * journal demography ([`journals`]): created, discontinued and persistent journals;
//! * seats ([`seats`]): gross seat creation and destruction split by channel;
//! * members ([`members`], [`journal_members`]): entry, exit and retention, both
//!   system-wide and per journal.
//!
//! Every rate is a symmetric rate over the average stock of the two endpoints and is
//! carried as a [`RateRecord`] holding its raw, annualized and normalized forms.
//! [`report`] assembles the full table set and writes CSV, JSON and SVG outputs.

pub mod distribution;
pub mod exec;
pub mod ingest;
pub mod journal_members;
pub mod journals;
pub mod members;
pub mod panel;
pub mod rates;
pub mod report;
pub mod seats;
mod sets;
pub mod synth;
pub mod validation;

pub use distribution::{BoxplotSummary, Metric, Scale};
pub use exec::Execution;
pub use ingest::InputRow;
pub use journal_members::{JournalMemberFlows, JournalMemberRates};
pub use journals::{JournalCounts, JournalFlows, JournalRates};
pub use members::{MemberCounts, MemberFlows, MemberRates};
pub use panel::{build_panel, Interval, JournalId, MemberId, Panel, PanelError, Year};
pub use rates::{RateError, RateRecord};
pub use seats::{SeatFlows, SeatRates};
pub use validation::{Issue, IssueCode, ValidationReport};
