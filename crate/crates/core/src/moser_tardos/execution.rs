use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::event::EventSpec;
use super::space::{ResamplingTable, VariableSpace};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

/// Which occurring event to resample next.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    #[default]
    LowestIndex,
    RandomUniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub selection: Selection,
    pub max_steps: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { selection: Selection::LowestIndex, max_steps: DEFAULT_MAX_STEPS }
    }
}

/// One resampling: step `t` (from 1), the event, and the cursors of its scope
/// variables just before they were resampled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogStep {
    pub step: u64,
    pub event: usize,
    pub cursors: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionLog {
    pub seed: u64,
    pub selection: Selection,
    pub steps: Vec<LogStep>,
    pub final_assignment: Vec<u32>,
    /// No event occurs under `final_assignment`. False when `max_steps` ran out.
    pub terminated: bool,
}

impl ExecutionLog {
    /// Event labels `A^(1), A^(2), ...`.
    pub fn events(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|s| s.event)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExecutionStats {
    /// `N_A` for events `1..=m`, at index `A - 1`.
    pub resamples_per_event: Vec<u64>,
    pub total_resamples: u64,
    pub steps: u64,
}

/// A Moser-Tardos run that can be advanced one resampling at a time.
pub struct Execution<'a> {
    events: &'a [EventSpec],
    table: ResamplingTable,
    assignment: Vec<u32>,
    var_events: Vec<Vec<usize>>,
    bad: BTreeSet<usize>,
    selection: Selection,
    selector: ChaCha8Rng,
    steps: Vec<LogStep>,
    counts: Vec<u64>,
    buf: Vec<u32>,
}

impl<'a> Execution<'a> {
    /// Validates the instance and draws the initial assignment `X^(0)`.
    pub fn new(space: &VariableSpace, events: &'a [EventSpec], selection: Selection) -> Result<Self> {
        for (i, e) in events.iter().enumerate() {
            e.validate(i + 1, space)?;
        }
        let mut var_events = vec![Vec::new(); space.len()];
        for (i, e) in events.iter().enumerate() {
            for &v in e.scope() {
                var_events[v].push(i + 1);
            }
        }
        let mut table = ResamplingTable::new(space);
        let assignment = (0..space.len()).map(|v| table.next(v)).collect();
        let mut selector = ChaCha8Rng::seed_from_u64(space.seed());
        selector.set_stream(u64::MAX);
        let mut ex = Execution {
            events,
            table,
            assignment,
            var_events,
            bad: BTreeSet::new(),
            selection,
            selector,
            steps: Vec::new(),
            counts: vec![0; events.len()],
            buf: Vec::new(),
        };
        for id in 1..=events.len() {
            ex.refresh(id);
        }
        Ok(ex)
    }

    fn refresh(&mut self, id: usize) {
        if self.events[id - 1].is_bad_under(&self.assignment, &mut self.buf) {
            self.bad.insert(id);
        } else {
            self.bad.remove(&id);
        }
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// Events occurring under the current assignment, ascending.
    pub fn occurring(&self) -> impl Iterator<Item = usize> + '_ {
        self.bad.iter().copied()
    }

    pub fn is_done(&self) -> bool {
        self.bad.is_empty()
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps.len() as u64
    }

    pub fn table(&self) -> &ResamplingTable {
        &self.table
    }

    /// Resamples one occurring event and returns it, or `None` when no event occurs.
    pub fn step(&mut self) -> Option<usize> {
        let id = match self.selection {
            Selection::LowestIndex => *self.bad.iter().next()?,
            Selection::RandomUniform => {
                if self.bad.is_empty() {
                    return None;
                }
                let k = self.selector.gen_range(0..self.bad.len());
                *self.bad.iter().nth(k).expect("k < len")
            }
        };
        let scope = self.events[id - 1].scope();
        let cursors = scope.iter().map(|&v| self.table.cursor(v)).collect();
        for &v in scope {
            self.assignment[v] = self.table.next(v);
        }
        self.steps.push(LogStep { step: self.steps.len() as u64 + 1, event: id, cursors });
        self.counts[id - 1] += 1;
        let mut touched: Vec<usize> = scope.iter().flat_map(|&v| self.var_events[v].iter().copied()).collect();
        touched.sort_unstable();
        touched.dedup();
        for e in touched {
            self.refresh(e);
        }
        Some(id)
    }

    pub fn finish(self) -> (ExecutionLog, ExecutionStats) {
        let total = self.counts.iter().sum();
        let log = ExecutionLog {
            seed: self.table.seed(),
            selection: self.selection,
            terminated: self.bad.is_empty(),
            final_assignment: self.assignment,
            steps: self.steps,
        };
        let stats =
            ExecutionStats { steps: log.steps.len() as u64, resamples_per_event: self.counts, total_resamples: total };
        (log, stats)
    }
}

/// Runs the algorithm until no event occurs or `max_steps` resamplings
/// have been made; exhaustion shows up as `terminated == false`.
pub fn run(space: &VariableSpace, events: &[EventSpec], options: RunOptions) -> Result<(ExecutionLog, ExecutionStats)> {
    let mut ex = Execution::new(space, events, options.selection)?;
    while ex.steps_taken() < options.max_steps && ex.step().is_some() {}
    Ok(ex.finish())
}

/// The assignment in force just before step `t` (or the final one for
/// `t = len + 1`), rebuilt from the resampling table and the log prefix.
pub fn replay_assignment(
    space: &VariableSpace,
    events: &[EventSpec],
    log: &ExecutionLog,
    t: usize,
) -> Result<Vec<u32>> {
    if t == 0 || t > log.steps.len() + 1 {
        return Err(Error::InvalidInput(format!("step {t} outside 1..={}", log.steps.len() + 1)));
    }
    let table = ResamplingTable::new(&space.with_seed(log.seed));
    let mut reads = vec![0u64; space.len()];
    for s in &log.steps[..t - 1] {
        let e = events.get(s.event.wrapping_sub(1)).ok_or(Error::UnknownEvent(s.event))?;
        for &v in e.scope() {
            reads[v] += 1;
        }
    }
    Ok(reads.iter().enumerate().map(|(v, &r)| table.entry(v, r)).collect())
}
