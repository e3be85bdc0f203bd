//! Test support: a brute-force oracle that materializes every set with `HashSet`
//! and counts by hand, plus random panel generators.
//!
//! Nothing here reuses crate internals beyond the public row type, so agreement
//! with the library is meaningful.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use boardflow_core::ingest::InputRow;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rosters = HashMap<String, HashSet<String>>;

/// Year -> journal -> roster, built by brute force.
pub struct Oracle {
    pub years: Vec<i32>,
    pub snapshots: HashMap<i32, Rosters>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct JournalTally {
    pub prev: u64,
    pub cur: u64,
    pub created: u64,
    pub discontinued: u64,
    pub persistent: u64,
    pub expanding: u64,
    pub stable: u64,
    pub contracting: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SeatTally {
    pub prev: u64,
    pub cur: u64,
    pub created_expanding: u64,
    pub created_new: u64,
    pub destroyed_contracting: u64,
    pub destroyed_exit: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MemberTally {
    pub prev: u64,
    pub cur: u64,
    pub retained: u64,
    pub new: u64,
    pub exited: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct JournalMemberTally {
    pub prev: u64,
    pub cur: u64,
    pub retained: u64,
    pub new_journal: u64,
    pub new_system: u64,
    pub exit_journal: u64,
    pub exit_system: u64,
}

impl Oracle {
    pub fn new(rows: &[InputRow]) -> Self {
        let mut snapshots: HashMap<i32, Rosters> = HashMap::new();
        for r in rows {
            snapshots
                .entry(r.year)
                .or_default()
                .entry(r.journal_id.clone())
                .or_default()
                .insert(r.member_id.clone());
        }
        let mut years: Vec<i32> = snapshots.keys().copied().collect();
        years.sort();
        Oracle { years, snapshots }
    }

    /// `None` stands for the empty system before the first observation.
    pub fn rosters(&self, year: Option<i32>) -> Rosters {
        year.map(|y| self.snapshots[&y].clone()).unwrap_or_default()
    }

    pub fn members(&self, year: Option<i32>) -> HashSet<String> {
        self.rosters(year).into_values().flatten().collect()
    }

    pub fn seats(&self, year: Option<i32>) -> u64 {
        self.rosters(year).values().map(|r| r.len() as u64).sum()
    }

    pub fn journals(&self, from: Option<i32>, to: i32) -> JournalTally {
        let a = self.rosters(from);
        let b = self.rosters(Some(to));
        let mut t = JournalTally {
            prev: a.len() as u64,
            cur: b.len() as u64,
            ..Default::default()
        };
        for (j, roster) in &b {
            match a.get(j) {
                None => t.created += 1,
                Some(old) => {
                    t.persistent += 1;
                    match roster.len().cmp(&old.len()) {
                        std::cmp::Ordering::Greater => t.expanding += 1,
                        std::cmp::Ordering::Equal => t.stable += 1,
                        std::cmp::Ordering::Less => t.contracting += 1,
                    }
                }
            }
        }
        t.discontinued = a.keys().filter(|j| !b.contains_key(*j)).count() as u64;
        t
    }

    pub fn seat_tally(&self, from: Option<i32>, to: i32) -> SeatTally {
        let a = self.rosters(from);
        let b = self.rosters(Some(to));
        let mut t = SeatTally {
            prev: self.seats(from),
            cur: self.seats(Some(to)),
            ..Default::default()
        };
        for (j, roster) in &b {
            let now = roster.len() as u64;
            match a.get(j) {
                None => t.created_new += now,
                Some(old) => {
                    let before = old.len() as u64;
                    if now > before {
                        t.created_expanding += now - before;
                    } else {
                        t.destroyed_contracting += before - now;
                    }
                }
            }
        }
        for (j, old) in &a {
            if !b.contains_key(j) {
                t.destroyed_exit += old.len() as u64;
            }
        }
        t
    }

    pub fn member_tally(&self, from: Option<i32>, to: i32) -> MemberTally {
        let a = self.members(from);
        let b = self.members(Some(to));
        MemberTally {
            prev: a.len() as u64,
            cur: b.len() as u64,
            retained: a.intersection(&b).count() as u64,
            new: b.difference(&a).count() as u64,
            exited: a.difference(&b).count() as u64,
        }
    }

    /// Journals active at either endpoint, sorted by name.
    pub fn journals_in(&self, from: Option<i32>, to: i32) -> Vec<String> {
        let mut all: BTreeSet<String> = self.rosters(from).into_keys().collect();
        all.extend(self.rosters(Some(to)).into_keys());
        all.into_iter().collect()
    }

    pub fn journal_member_tally(&self, from: Option<i32>, to: i32, journal: &str) -> JournalMemberTally {
        let empty = HashSet::new();
        let a_all = self.rosters(from);
        let b_all = self.rosters(Some(to));
        let a = a_all.get(journal).unwrap_or(&empty);
        let b = b_all.get(journal).unwrap_or(&empty);
        let system_a = self.members(from);
        let system_b = self.members(Some(to));
        JournalMemberTally {
            prev: a.len() as u64,
            cur: b.len() as u64,
            retained: a.intersection(b).count() as u64,
            new_journal: b.difference(a).count() as u64,
            new_system: b.difference(a).filter(|m| !system_a.contains(*m)).count() as u64,
            exit_journal: a.difference(b).count() as u64,
            exit_system: a.difference(b).filter(|m| !system_b.contains(*m)).count() as u64,
        }
    }
}

/// A raw symmetric rate computed straight from its definition.
pub fn sym(count: f64, prev: u64, cur: u64) -> f64 {
    let avg = (prev + cur) as f64 / 2.0;
    if avg == 0.0 {
        0.0
    } else {
        count / avg
    }
}

pub fn rows(raw: &[(i32, &str, &str)]) -> Vec<InputRow> {
    raw.iter().map(|&(y, j, m)| InputRow::new(y, j, m)).collect()
}

/// years {1, 2}; 1: A={m1,m2}, B={m3}; 2: A={m1,m4,m5}, C={m6}
pub fn micro() -> Vec<InputRow> {
    rows(&[
        (1, "A", "m1"),
        (1, "A", "m2"),
        (1, "B", "m3"),
        (2, "A", "m1"),
        (2, "A", "m4"),
        (2, "A", "m5"),
        (2, "C", "m6"),
    ])
}

/// MICRO plus year 3: A={m1,m4}, C={m6,m7}, B={m8}
pub fn micro3() -> Vec<InputRow> {
    let mut r = micro();
    r.extend(rows(&[
        (3, "A", "m1"),
        (3, "A", "m4"),
        (3, "C", "m6"),
        (3, "C", "m7"),
        (3, "B", "m8"),
    ]));
    r
}

pub fn micro3_csv() -> String {
    let mut s = String::from("year,journal_id,member_id\n");
    for r in micro3() {
        s.push_str(&format!("{},{},{}\n", r.year, r.journal_id, r.member_id));
    }
    s
}

/// A random panel of up to `max_years` years, `max_journals` journals and
/// `max_members` members. Journal activity and board sizes vary, so births,
/// deaths, gaps and interlocks all occur.
pub fn random_panel(seed: u64, max_years: i32, max_journals: u32, max_members: u32) -> Vec<InputRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let years = rng.gen_range(2..=max_years);
    let journals = rng.gen_range(1..=max_journals);
    let members = rng.gen_range(1..=max_members);
    let activity = rng.gen_range(0.2..0.95);
    let mut out = Vec::new();
    for y in 0..years {
        // spread years unevenly so intervals have different lengths
        let year = 1900 + y * 10 + rng.gen_range(0..3);
        for j in 0..journals {
            if !rng.gen_bool(activity) {
                continue;
            }
            let size = rng.gen_range(1..=members.min(12));
            for _ in 0..size {
                let m = rng.gen_range(0..members);
                out.push(InputRow::new(year, format!("j{j}"), format!("m{m}")));
            }
        }
    }
    if out.is_empty() {
        out.push(InputRow::new(1900, "j0", "m0"));
    }
    out
}

/// Proptest strategy: arbitrary small panels, duplicates included.
pub fn arb_rows() -> impl Strategy<Value = Vec<InputRow>> {
    prop::collection::vec((1..=5i32, 0..50u32, 0..200u32), 1..300).prop_map(|raw| {
        raw.into_iter()
            .map(|(y, j, m)| InputRow::new(2000 + y, format!("j{j:02}"), format!("m{m:03}")))
            .collect()
    })
}

fn close(what: &str, a: f64, b: f64) -> Result<(), String> {
    if (a - b).abs() <= 1e-12 {
        Ok(())
    } else {
        Err(format!("{what}: {a} != {b}"))
    }
}

fn ensure(what: &str, ok: bool) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.to_owned())
    }
}

fn rate_bounds(what: &str, r: &boardflow_core::RateRecord, p: u32) -> Result<(), String> {
    ensure(
        &format!("{what} raw in [-2, 2]: {}", r.raw),
        (-2.0..=2.0).contains(&r.raw),
    )?;
    ensure(
        &format!("{what} normalized in [-1, 1]"),
        (-1.0..=1.0).contains(&r.normalized),
    )?;
    ensure(
        &format!("{what} normalized is raw / 2"),
        r.normalized == r.raw / 2.0,
    )?;
    ensure(
        &format!("{what} annualized is raw / P"),
        r.annualized == r.raw / p as f64,
    )?;
    ensure(&format!("{what} period"), r.period_years == p)
}

/// Checks every stock identity, rate decomposition and bound on every interval
/// of the panel built from `rows`.
pub fn check_identities(rows: &[InputRow]) -> Result<(), String> {
    use boardflow_core::journal_members::all_journal_member_rates;
    use boardflow_core::{build_panel, journals, members, seats, Execution};

    let (panel, _) = build_panel(rows).map_err(|r| r.to_string())?;
    let mut intervals = vec![panel.genesis_interval()];
    intervals.extend(panel.adjacent_intervals());
    let years = panel.years();
    if years.len() > 2 {
        intervals.push(panel.interval(years[0], years[years.len() - 1]).unwrap());
    }

    for iv in &intervals {
        let p = iv.period_years();
        let jf = journals::journal_flows(&panel, iv).map_err(|e| e.to_string())?;
        let j = jf.counts;
        ensure(
            "J_t = J_t-1 + N - X",
            j.cur + j.discontinued == j.prev + j.created,
        )?;
        ensure("J_t = P + N", j.cur == j.persistent + j.created)?;
        ensure(
            "P = P+ + Ps + P-",
            j.persistent == j.expanding + j.stable + j.contracting,
        )?;
        let jr = journals::journal_rates(&j, iv);
        close(
            "J = N + X",
            jr.net_growth.raw,
            jr.creation.raw + jr.destruction.raw,
        )?;
        close("T = N - X", jr.turnover.raw, jr.creation.raw - jr.destruction.raw)?;
        for (name, r) in [
            ("creation", &jr.creation),
            ("destruction", &jr.destruction),
            ("net_growth", &jr.net_growth),
            ("persistence", &jr.persistence),
            ("turnover", &jr.turnover),
        ] {
            rate_bounds(name, r, p)?;
        }
        ensure("creation >= 0", jr.creation.raw >= 0.0)?;
        ensure("destruction <= 0", jr.destruction.raw <= 0.0)?;

        let s = seats::seat_flows_for(&panel, iv, &jf).map_err(|e| e.to_string())?;
        ensure(
            "S_t = S_t-1 + C - D",
            s.seats_cur + s.destroyed == s.seats_prev + s.created,
        )?;
        ensure("C = C+ + CN", s.created == s.created_expanding + s.created_new)?;
        ensure(
            "D = D- + DX",
            s.destroyed == s.destroyed_contracting + s.destroyed_exit,
        )?;
        ensure(
            "dS = C - D",
            s.net_change == s.created as i64 - s.destroyed as i64,
        )?;
        ensure("T = C + D", s.turnover == s.created + s.destroyed)?;
        let (prev, cur) = panel.endpoints(iv).unwrap();
        let board_sum: u64 = cur.boards().iter().map(|b| b.members.len() as u64).sum();
        ensure(
            "S_t is the sum of board sizes",
            board_sum == s.seats_cur && cur.seats() == s.seats_cur,
        )?;
        ensure("S_t-1 is the sum of board sizes", prev.seats() == s.seats_prev)?;
        let sr = seats::seat_rates(&s, iv);
        close("S = C + D", sr.net_growth.raw, sr.created.raw + sr.destroyed.raw)?;
        close(
            "C = C+ + CN (rates)",
            sr.created.raw,
            sr.created_expanding.raw + sr.created_new.raw,
        )?;
        close(
            "D = D- + DX (rates)",
            sr.destroyed.raw,
            sr.destroyed_contracting.raw + sr.destroyed_exit.raw,
        )?;
        close("Ts = C - D", sr.turnover.raw, sr.created.raw - sr.destroyed.raw)?;
        for (name, r) in [
            ("seat created_expanding", &sr.created_expanding),
            ("seat created_new", &sr.created_new),
            ("seat created", &sr.created),
            ("seat destroyed_contracting", &sr.destroyed_contracting),
            ("seat destroyed_exit", &sr.destroyed_exit),
            ("seat destroyed", &sr.destroyed),
            ("seat net_growth", &sr.net_growth),
            ("seat turnover", &sr.turnover),
        ] {
            rate_bounds(name, r, p)?;
        }

        let m = members::member_flows(&panel, iv)
            .map_err(|e| e.to_string())?
            .counts;
        ensure("M_t = M_t-1 + MN - MX", m.cur + m.exited == m.prev + m.new)?;
        ensure("M_t = MR + MN", m.cur == m.retained + m.new)?;
        ensure("M_t-1 = MR + MX", m.prev == m.retained + m.exited)?;
        ensure("M_t <= S_t", m.cur <= s.seats_cur)?;
        let mr = members::member_rates(&m, &s, iv);
        close("M = MN + MX", mr.growth.raw, mr.entry.raw + mr.exit.raw)?;
        close("TM = MN - MX", mr.turnover.raw, mr.entry.raw - mr.exit.raw)?;
        let avg = (m.prev + m.cur) as f64 / 2.0;
        if avg > 0.0 {
            close(
                "MR + MN = M / avg M",
                mr.retention.raw + mr.entry.raw,
                m.cur as f64 / avg,
            )?;
        }
        for (name, r) in [
            ("member growth", &mr.growth),
            ("member entry", &mr.entry),
            ("member exit", &mr.exit),
            ("member turnover", &mr.turnover),
            ("member retention", &mr.retention),
        ] {
            rate_bounds(name, r, p)?;
        }
        ensure("coverage >= 0", mr.coverage >= 0.0)?;

        let records =
            all_journal_member_rates(&panel, iv, Execution::Sequential).map_err(|e| e.to_string())?;
        let mut board_total = 0;
        for rec in &records {
            let c = rec.counts;
            board_total += c.cur;
            ensure("m_t = mR + mn", c.cur == c.retained + c.new_journal)?;
            ensure("m_t-1 = mR + mx", c.prev == c.retained + c.exit_journal)?;
            ensure("mN <= mn", c.new_system <= c.new_journal)?;
            ensure("mx-system <= mx", c.exit_system <= c.exit_journal)?;
            let r = rec.rates;
            close("m = mn + mx", r.growth.raw, r.entry.raw + r.exit.raw)?;
            close("Tm = mn - mx", r.turnover.raw, r.entry.raw - r.exit.raw)?;
            let javg = (c.prev + c.cur) as f64 / 2.0;
            close(
                "mR + mn = m / avg m",
                r.retention.raw + r.entry.raw,
                c.cur as f64 / javg,
            )?;
            ensure("system entry <= entry", r.system_entry.raw <= r.entry.raw)?;
            for (name, q) in [
                ("journal growth", &r.growth),
                ("journal entry", &r.entry),
                ("journal system_entry", &r.system_entry),
                ("journal exit", &r.exit),
                ("journal turnover", &r.turnover),
                ("journal retention", &r.retention),
            ] {
                rate_bounds(name, q, p)?;
            }
            ensure("journal coverage >= 0", r.coverage >= 0.0)?;
            ensure("contracted flag", r.board_contracted == (c.cur < c.prev))?;
        }
        ensure("sum of journal boards is S_t", board_total == s.seats_cur)?;
    }
    Ok(())
}
