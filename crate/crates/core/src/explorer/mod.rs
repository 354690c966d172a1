//! Batch exploration: heuristic-driven episodes, replay of recorded traces,
//! and run statistics.

mod heuristics;
mod report;

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

pub use heuristics::{Heuristic, HeuristicKind, Probability};
pub use report::{emit_stats, EpisodeRecord, RunReport, RunSettings};

use crate::env::{Action, Engine, EnvError, Episode, Phase};
use crate::eval::{EpisodeOutcome, EvalError};

#[derive(Debug, Error)]
pub enum ExplorerError {
    #[error("step {step}: {source}")]
    Step { step: usize, source: EnvError },
    #[error("malformed trace: {0}")]
    Trace(String),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Steps after which an episode is cut off as incomplete.
pub const DEFAULT_STEP_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExploreConfig {
    pub heuristic: Heuristic,
    pub iterations: usize,
    pub seed: u64,
    pub step_cap: usize,
    /// Measure wall time per episode. Off by default so that reports are
    /// byte-identical across runs.
    pub timing: bool,
}

impl ExploreConfig {
    pub fn new(heuristic: Heuristic, iterations: usize, seed: u64) -> Self {
        ExploreConfig { heuristic, iterations, seed, step_cap: DEFAULT_STEP_CAP, timing: false }
    }
}

/// Generator for one phase of episode `index`: the seed and the episode
/// index fill the key, the phase selects the stream.
pub fn episode_rng(seed: u64, index: usize, phase: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(index as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(phase);
    rng
}

/// Runs one heuristic episode. Episode ids are `ep1`, `ep2`, ...
pub fn run_episode(engine: &Arc<Engine>, cfg: &ExploreConfig, index: usize) -> Result<EpisodeRecord, ExplorerError> {
    let start = cfg.timing.then(Instant::now);
    let id = format!("ep{}", index + 1);
    let mut ep = Episode::new(Arc::clone(engine), id.clone())?;
    let mut construction_rng = episode_rng(cfg.seed, index, 0);
    let mut exploration_rng = episode_rng(cfg.seed, index, 1);
    let mut steps = 0;
    while !ep.is_done() && steps < cfg.step_cap {
        let valid = ep.valid_actions();
        let rng = match ep.phase() {
            Phase::Construction => &mut construction_rng,
            _ => &mut exploration_rng,
        };
        let a = cfg.heuristic.choose(&valid, rng);
        ep.step(a).map_err(|source| ExplorerError::Step { step: steps, source })?;
        steps += 1;
    }
    let outcome = ep.outcome();
    let wall_ms = start.map_or(0, |t| t.elapsed().as_millis() as u64);
    Ok(EpisodeRecord::new(index + 1, id, ep.trace().to_vec(), outcome, wall_ms))
}

/// Runs `cfg.iterations` episodes in parallel; records are in episode order.
pub fn run_explore(engine: &Arc<Engine>, cfg: &ExploreConfig) -> Result<RunReport, ExplorerError> {
    let episodes = (0..cfg.iterations)
        .into_par_iter()
        .map(|i| run_episode(engine, cfg, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RunReport::new(episodes))
}

/// Parses a trace: a JSON array whose strings are action names and whose
/// integers are coefficient choices.
pub fn parse_trace(text: &str) -> Result<Vec<Action>, ExplorerError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ExplorerError::Trace(e.to_string()))?;
    let items = value.as_array().ok_or_else(|| ExplorerError::Trace("expected a JSON array".into()))?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            serde_json::Value::String(s) => s.parse().map_err(|e: EnvError| ExplorerError::Trace(format!("entry {i}: {e}"))),
            serde_json::Value::Number(n) => n
                .as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .map(Action::SelectCoeff)
                .ok_or_else(|| ExplorerError::Trace(format!("entry {i}: `{n}` is not a coefficient"))),
            other => Err(ExplorerError::Trace(format!("entry {i}: unexpected `{other}`"))),
        })
        .collect()
}

/// The trace as JSON: construction actions by name, coefficients as
/// integers.
pub fn trace_to_json(trace: &[Action]) -> serde_json::Value {
    serde_json::Value::Array(
        trace
            .iter()
            .map(|a| match a {
                Action::SelectCoeff(x) => serde_json::Value::from(*x),
                other => serde_json::Value::from(other.to_string()),
            })
            .collect(),
    )
}

#[derive(Clone, Debug)]
pub struct ReplayResult {
    pub outcome: EpisodeOutcome,
    pub episode: Episode,
}

/// Replays `trace` through both processes. A trace that stops early gives
/// an incomplete outcome.
pub fn replay_trace(engine: &Arc<Engine>, trace: &[Action], episode_id: &str) -> Result<ReplayResult, ExplorerError> {
    let mut ep = Episode::new(Arc::clone(engine), episode_id)?;
    for (step, &a) in trace.iter().enumerate() {
        ep.step(a).map_err(|source| ExplorerError::Step { step, source })?;
    }
    Ok(ReplayResult { outcome: ep.outcome(), episode: ep })
}
