//! Seeded generator of synthetic panels with realistic shape: a growing journal
//! population, journal births and closures, board growth, member retention and
//! members holding seats on several boards. Used for benchmarks, scale tests and
//! demos; the output is a plain row list like any ingested file.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::InputRow;
use crate::panel::Year;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub years: Vec<Year>,
    pub initial_journals: usize,
    /// Journal count targeted at the last observation year.
    pub final_journals: usize,
    pub initial_board_size: usize,
    pub final_board_size: usize,
    /// Probability that a journal survives one observation step.
    pub journal_survival: f64,
    /// Probability that a sitting member keeps their seat.
    pub member_retention: f64,
    /// Probability that a vacant seat goes to someone already on another board.
    pub interlock: f64,
    pub seed: u64,
}

impl SynthConfig {
    /// Decades 1866-2006 plus 2012 and 2019, growing to about 1,500 journals.
    pub fn goeld_like(seed: u64) -> Self {
        let mut years: Vec<Year> = (1866..=2006).step_by(10).collect();
        years.extend([2012, 2019]);
        SynthConfig {
            years,
            initial_journals: 6,
            final_journals: 1_515,
            initial_board_size: 12,
            final_board_size: 40,
            journal_survival: 0.95,
            member_retention: 0.55,
            interlock: 0.25,
            seed,
        }
    }
}

pub fn generate(config: &SynthConfig) -> Vec<InputRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let steps = config.years.len().max(2) - 1;
    let growth = (config.final_journals.max(1) as f64 / config.initial_journals.max(1) as f64)
        .powf(1.0 / steps as f64);

    let mut next_journal = 0usize;
    let mut next_member = 0usize;
    let mut boards: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut rows = Vec::new();

    for (step, &year) in config.years.iter().enumerate() {
        let progress = step as f64 / steps as f64;
        let typical_size = config.initial_board_size as f64
            + (config.final_board_size as f64 - config.initial_board_size as f64) * progress;
        let target = (config.initial_journals as f64 * growth.powi(step as i32)).round() as usize;

        let previously_seated: Vec<usize> = {
            let mut all: Vec<usize> = boards.iter().flat_map(|(_, m)| m.iter().copied()).collect();
            all.sort_unstable();
            all.dedup();
            all
        };

        if step > 0 {
            boards.retain(|_| rng.gen_bool(config.journal_survival));
        }
        let mut next_boards = Vec::with_capacity(target.max(boards.len()));
        for (journal, members) in boards.drain(..) {
            let factor = rng.gen_range(0.7..1.5);
            let size = ((members.len() as f64 * factor).round() as usize).max(1);
            let mut kept: Vec<usize> = members
                .into_iter()
                .filter(|_| rng.gen_bool(config.member_retention))
                .collect();
            kept.truncate(size);
            next_boards.push((journal, kept, size));
        }
        while next_boards.len() < target.max(1) {
            let size = ((typical_size * rng.gen_range(0.4..1.6)).round() as usize).max(1);
            next_boards.push((next_journal, Vec::new(), size));
            next_journal += 1;
        }

        for (journal, mut members, size) in next_boards {
            while members.len() < size {
                let candidate = if !previously_seated.is_empty() && rng.gen_bool(config.interlock) {
                    *previously_seated.choose(&mut rng).expect("non-empty")
                } else {
                    next_member += 1;
                    next_member - 1
                };
                if !members.contains(&candidate) {
                    members.push(candidate);
                }
            }
            for &m in &members {
                rows.push(InputRow::new(year, format!("J{journal:05}"), format!("M{m:07}")));
            }
            boards.push((journal, members));
        }
    }
    rows
}
