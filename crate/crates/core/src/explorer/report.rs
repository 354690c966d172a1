//! Run reports and their files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::{trace_to_json, ExplorerError};
use crate::env::Action;
use crate::eval::{export_schedule, export_schedule_json, EpisodeOutcome, OutcomeKind};
use crate::geometry::Rational;
use crate::scop::Scop;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpisodeRecord {
    /// 1-based.
    pub index: usize,
    pub id: String,
    pub trace: Vec<Action>,
    pub outcome: EpisodeOutcome,
    pub wall_ms: u64,
}

impl EpisodeRecord {
    pub fn new(index: usize, id: String, trace: Vec<Action>, outcome: EpisodeOutcome, wall_ms: u64) -> Self {
        EpisodeRecord { index, id, trace, outcome, wall_ms }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub episodes: Vec<EpisodeRecord>,
    /// Best reward after each episode.
    pub best_so_far: Vec<Rational>,
}

impl RunReport {
    pub fn new(episodes: Vec<EpisodeRecord>) -> Self {
        let mut best_so_far: Vec<Rational> = Vec::with_capacity(episodes.len());
        for e in &episodes {
            let r = &e.outcome.reward;
            let next = match best_so_far.last() {
                Some(b) if b >= r => b.clone(),
                _ => r.clone(),
            };
            best_so_far.push(next);
        }
        RunReport { episodes, best_so_far }
    }

    /// Earliest episode with the highest reward.
    pub fn best(&self) -> Option<&EpisodeRecord> {
        self.episodes
            .iter()
            .fold(None, |best: Option<&EpisodeRecord>, e| match best {
                Some(b) if b.outcome.reward >= e.outcome.reward => Some(b),
                _ => Some(e),
            })
    }

    /// Best among legal complete episodes.
    pub fn best_legal(&self) -> Option<&EpisodeRecord> {
        self.episodes
            .iter()
            .filter(|e| e.outcome.kind == OutcomeKind::CompleteLegal)
            .fold(None, |best: Option<&EpisodeRecord>, e| match best {
                Some(b) if b.outcome.reward >= e.outcome.reward => Some(b),
                _ => Some(e),
            })
    }

    pub fn counts(&self) -> BTreeMap<&'static str, usize> {
        let mut out: BTreeMap<&'static str, usize> = [
            OutcomeKind::CompleteLegal,
            OutcomeKind::CompleteIllegal,
            OutcomeKind::Invalid,
            OutcomeKind::Incomplete,
        ]
        .into_iter()
        .map(|k| (k.name(), 0))
        .collect();
        for e in &self.episodes {
            *out.get_mut(e.outcome.kind.name()).expect("all kinds present") += 1;
        }
        out
    }
}

/// Run parameters recorded in `summary.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunSettings {
    pub scop: String,
    pub heuristic: String,
    pub bias: String,
    pub iterations: usize,
    pub seed: u64,
    pub coeff_max: u32,
    pub max_dims: usize,
    pub reward_mode: String,
    pub cost_model: String,
}

#[derive(Serialize)]
struct Summary<'a> {
    settings: &'a RunSettings,
    episodes: usize,
    outcomes: BTreeMap<&'static str, usize>,
    best_reward: Option<String>,
    best_reward_approx: Option<f64>,
    best_episode: Option<&'a str>,
    best_legal_episode: Option<&'a str>,
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), ExplorerError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| ExplorerError::Io { path, source })
}

fn csv_to_string(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(&r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

/// Writes `episodes.csv`, `best_so_far.csv`, `summary.json`,
/// `traces.jsonl` and, when a legal schedule was found,
/// `best_schedule.txt` and `best_schedule.json`.
pub fn emit_stats(report: &RunReport, settings: &RunSettings, scop: &Scop, dir: &Path) -> Result<(), ExplorerError> {
    fs::create_dir_all(dir).map_err(|source| ExplorerError::Io { path: dir.to_path_buf(), source })?;
    let episodes = csv_to_string(
        &["episode_id", "outcome", "reward", "trace_len", "wall_ms"],
        report.episodes.iter().map(|e| {
            vec![
                e.id.clone(),
                e.outcome.kind.name().to_string(),
                e.outcome.reward.to_string(),
                e.trace.len().to_string(),
                e.wall_ms.to_string(),
            ]
        }),
    );
    write(dir, "episodes.csv", &episodes)?;
    let best = csv_to_string(
        &["iteration", "best_reward"],
        report.best_so_far.iter().enumerate().map(|(i, b)| vec![(i + 1).to_string(), b.to_string()]),
    );
    write(dir, "best_so_far.csv", &best)?;

    let mut traces = String::new();
    for e in &report.episodes {
        let line = serde_json::json!({ "episode_id": e.id, "trace": trace_to_json(&e.trace) });
        traces.push_str(&line.to_string());
        traces.push('\n');
    }
    write(dir, "traces.jsonl", &traces)?;

    let best = report.best();
    let best_legal = report.best_legal();
    let summary = Summary {
        settings,
        episodes: report.episodes.len(),
        outcomes: report.counts(),
        best_reward: best.map(|e| e.outcome.reward.to_string()),
        best_reward_approx: best.and_then(|e| e.outcome.reward.to_f64()),
        best_episode: best.map(|e| e.id.as_str()),
        best_legal_episode: best_legal.map(|e| e.id.as_str()),
    };
    write(dir, "summary.json", &(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"))?;

    if let Some(schedule) = best_legal.and_then(|e| e.outcome.schedule.as_ref()) {
        write(dir, "best_schedule.txt", &export_schedule(schedule, scop)?)?;
        write(dir, "best_schedule.json", &export_schedule_json(schedule, scop)?)?;
    }
    Ok(())
}
