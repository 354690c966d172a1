//! Combined episodes over both processes, and a reset/step environment
//! interface for agents.
//!
//! Actions share one alphabet: ids `0..3` are `next_dim`, `next_dep`,
//! `select_dep`, and id `3 + x` is `select_coeff{x}` for `x` in `0..=N`.
//! An episode starts in the construction phase. When every dependence is
//! assigned, the schedule space is built; an empty dimension ends the
//! episode as invalid, otherwise exploration starts. The last exploration
//! step materializes the schedule and computes the terminal reward. All
//! other steps earn 0.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::construction::{ConstructionAction, ConstructionConfig, ConstructionError, ConstructionState};
use crate::eval::{schedule_from_points, EpisodeOutcome, EvalError, OutcomeKind, RewardConfig, RewardModel};
use crate::exploration::{
    materialize_point, ExplorationConfig, ExplorationError, ExplorationState, Materialized, SlotLayout,
};
use crate::farkas::{FarkasError, ScheduleSpace, SpaceBuilder};
use crate::geometry::Rational;
use crate::scop::{Dependence, Scop};

/// Version of the observation and action encoding.
pub const ENV_INTERFACE_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvError {
    #[error("action `{action}` is masked in the current state")]
    Masked { action: Action },
    #[error("action id {id} is outside 0..{size}")]
    ActionOutOfRange { id: usize, size: usize },
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("episode is over")]
    Done,
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Exploration(#[from] ExplorationError),
    #[error(transparent)]
    Farkas(#[from] FarkasError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// One action of either phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Construction(ConstructionAction),
    SelectCoeff(u32),
}

impl Action {
    pub fn id(self) -> usize {
        match self {
            Action::Construction(a) => a.index(),
            Action::SelectCoeff(x) => 3 + x as usize,
        }
    }

    pub fn from_id(id: usize, coeff_max: u32) -> Result<Self, EnvError> {
        let size = action_space_size(coeff_max);
        match id {
            0..=2 => Ok(Action::Construction(ConstructionAction::ALL[id])),
            _ if id < size => Ok(Action::SelectCoeff((id - 3) as u32)),
            _ => Err(EnvError::ActionOutOfRange { id, size }),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Construction(a) => write!(f, "{a}"),
            Action::SelectCoeff(x) => write!(f, "select_coeff{x}"),
        }
    }
}

impl FromStr for Action {
    type Err = EnvError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(x) = s.strip_prefix("select_coeff") {
            return x.parse().map(Action::SelectCoeff).map_err(|_| EnvError::UnknownAction(s.to_string()));
        }
        s.parse().map(Action::Construction).map_err(|_| EnvError::UnknownAction(s.to_string()))
    }
}

/// `3 + (N + 1)`.
pub fn action_space_size(coeff_max: u32) -> usize {
    4 + coeff_max as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub coeff_max: u32,
    /// `2|D| + 2` when `None`.
    pub max_dims: Option<usize>,
    pub reward: RewardConfig,
}

impl EngineConfig {
    pub fn proxy(scop: &Scop) -> Self {
        EngineConfig { coeff_max: ExplorationConfig::DEFAULT_COEFF_MAX, max_dims: None, reward: RewardConfig::proxy(scop) }
    }
}

/// Everything episodes of one SCoP share: dependences, the memoized space
/// builder and the reward model.
#[derive(Debug)]
pub struct Engine {
    scop: Scop,
    builder: SpaceBuilder,
    reward: RewardModel,
    cons: ConstructionConfig,
    expl: ExplorationConfig,
}

impl Engine {
    pub fn new(scop: Scop, cfg: EngineConfig) -> Result<Self, EnvError> {
        let expl = ExplorationConfig::new(cfg.coeff_max)?;
        let builder = SpaceBuilder::for_scop(&scop);
        let deps = builder.dependences().to_vec();
        let cons = match cfg.max_dims {
            Some(m) => ConstructionConfig::new(m)?,
            None => ConstructionConfig::default_for(deps.len()),
        };
        let reward = RewardModel::new(scop.clone(), deps, cfg.reward)?;
        Ok(Engine { scop, builder, reward, cons, expl })
    }

    pub fn scop(&self) -> &Scop {
        &self.scop
    }

    pub fn dependences(&self) -> &[Dependence] {
        self.builder.dependences()
    }

    pub fn space_builder(&self) -> &SpaceBuilder {
        &self.builder
    }

    pub fn reward_model(&self) -> &RewardModel {
        &self.reward
    }

    pub fn construction_config(&self) -> &ConstructionConfig {
        &self.cons
    }

    pub fn exploration_config(&self) -> &ExplorationConfig {
        &self.expl
    }

    pub fn action_space_size(&self) -> usize {
        action_space_size(self.expl.coeff_max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Construction,
    Exploration,
    Done,
}

impl Phase {
    pub fn flag(self) -> i64 {
        match self {
            Phase::Construction => 0,
            Phase::Exploration => 1,
            Phase::Done => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExplorationPhase {
    pub space: ScheduleSpace,
    pub layout: SlotLayout,
    pub state: ExplorationState,
}

#[derive(Clone, Debug)]
enum State {
    Construction(ConstructionState),
    Exploration(ExplorationPhase),
    Done,
}

/// One episode through both processes.
#[derive(Clone, Debug)]
pub struct Episode {
    engine: Arc<Engine>,
    id: String,
    state: State,
    construction_final: Option<ConstructionState>,
    exploration_final: Option<ExplorationPhase>,
    trace: Vec<Action>,
    outcome: Option<EpisodeOutcome>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepResult {
    pub reward: Rational,
    pub done: bool,
}

impl Episode {
    /// Starts an episode. SCoPs without dependences skip construction and
    /// explore a single unconstrained dimension.
    pub fn new(engine: Arc<Engine>, id: impl Into<String>) -> Result<Self, EnvError> {
        let mut ep = Episode {
            engine,
            id: id.into(),
            state: State::Done,
            construction_final: None,
            exploration_final: None,
            trace: Vec::new(),
            outcome: None,
        };
        let n = ep.engine.dependences().len();
        if n == 0 {
            ep.realize(&ConstructionState { i_dim: 1, i_dep: 1, d: Vec::new() })?;
        } else {
            ep.state = State::Construction(ConstructionState::reset(n)?);
        }
        Ok(ep)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn engine(&self) -> &Arc<Engine> {
        &self.engine
    }

    pub fn phase(&self) -> Phase {
        match self.state {
            State::Construction(_) => Phase::Construction,
            State::Exploration(_) => Phase::Exploration,
            State::Done => Phase::Done,
        }
    }

    pub fn is_done(&self) -> bool {
        matches!(self.state, State::Done)
    }

    pub fn trace(&self) -> &[Action] {
        &self.trace
    }

    /// Current construction state, or the terminal one once construction
    /// has finished.
    pub fn construction_state(&self) -> Option<&ConstructionState> {
        match &self.state {
            State::Construction(s) => Some(s),
            _ => self.construction_final.as_ref(),
        }
    }

    pub fn exploration(&self) -> Option<&ExplorationPhase> {
        match &self.state {
            State::Exploration(e) => Some(e),
            _ => self.exploration_final.as_ref(),
        }
    }

    /// Outcome so far: incomplete until the episode is over.
    pub fn outcome(&self) -> EpisodeOutcome {
        self.outcome.clone().unwrap_or_else(EpisodeOutcome::incomplete)
    }

    pub fn is_valid(&self, a: Action) -> bool {
        match (&self.state, a) {
            (State::Construction(s), Action::Construction(c)) => s.is_allowed(c, self.engine.construction_config()),
            (State::Exploration(e), Action::SelectCoeff(x)) => {
                !e.state.is_terminal() && x <= self.engine.exploration_config().coeff_max
            }
            _ => false,
        }
    }

    pub fn valid_actions(&self) -> Vec<Action> {
        (0..self.engine.action_space_size())
            .map(|id| Action::from_id(id, self.engine.exploration_config().coeff_max).expect("in range"))
            .filter(|&a| self.is_valid(a))
            .collect()
    }

    /// Mask over the unified action ids.
    pub fn mask(&self) -> Vec<bool> {
        let n = self.engine.exploration_config().coeff_max;
        (0..self.engine.action_space_size())
            .map(|id| self.is_valid(Action::from_id(id, n).expect("in range")))
            .collect()
    }

    /// Raw state: the construction tuple or the slot vector (unfilled = -1).
    pub fn encode_state(&self) -> Vec<i64> {
        match &self.state {
            State::Construction(s) => s.encode(),
            State::Exploration(e) => e.state.encode(),
            State::Done => match &self.exploration_final {
                Some(e) => e.state.encode(),
                None => self.construction_final.as_ref().map(ConstructionState::encode).unwrap_or_default(),
            },
        }
    }

    pub fn step(&mut self, a: Action) -> Result<StepResult, EnvError> {
        if self.is_done() {
            return Err(EnvError::Done);
        }
        if !self.is_valid(a) {
            return Err(EnvError::Masked { action: a });
        }
        self.trace.push(a);
        match (&mut self.state, a) {
            (State::Construction(s), Action::Construction(c)) => {
                let next = s.step(c, self.engine.construction_config())?;
                if next.is_terminal() {
                    self.realize(&next)?;
                } else {
                    *s = next;
                }
            }
            (State::Exploration(e), Action::SelectCoeff(x)) => {
                e.state = e.state.step(x, self.engine.exploration_config())?;
                if e.state.is_terminal() {
                    self.finish_exploration()?;
                }
            }
            _ => unreachable!("checked by is_valid"),
        }
        let done = self.is_done();
        let reward = if done { self.outcome().reward } else { Rational::zero() };
        Ok(StepResult { reward, done })
    }

    pub fn step_id(&mut self, id: usize) -> Result<StepResult, EnvError> {
        let a = Action::from_id(id, self.engine.exploration_config().coeff_max)?;
        self.step(a)
    }

    fn realize(&mut self, terminal: &ConstructionState) -> Result<(), EnvError> {
        self.construction_final = Some(terminal.clone());
        let space = self.engine.space_builder().build(&terminal.assignment(), terminal.dimensions())?;
        if let Some(d) = space.first_empty_dimension() {
            self.state = State::Done;
            self.outcome = Some(self.engine.reward_model().invalid(format!("dimension {d} has no legal schedule")));
            return Ok(());
        }
        let layout = SlotLayout::for_space(&space)?;
        let state = ExplorationState::reset(&layout);
        let no_slots = state.is_terminal();
        self.state = State::Exploration(ExplorationPhase { space, layout, state });
        if no_slots {
            self.finish_exploration()?;
        }
        Ok(())
    }

    fn finish_exploration(&mut self) -> Result<(), EnvError> {
        let State::Exploration(e) = std::mem::replace(&mut self.state, State::Done) else {
            unreachable!("called in the exploration phase");
        };
        let model = self.engine.reward_model();
        let outcome = match materialize_point(&e.state, &e.layout, &e.space)? {
            Materialized::Invalid { dim } => model.invalid(format!("all vertex weights of dimension {dim} are zero")),
            Materialized::Point(p) => match schedule_from_points(&p, &e.space.layout) {
                Err(EvalError::Overflow(v)) => model.invalid(format!("coefficient {v} does not fit in 64 bits")),
                Err(err) => return Err(err.into()),
                Ok(schedule) => model.evaluate(schedule, &self.id)?,
            },
        };
        self.exploration_final = Some(e);
        self.outcome = Some(outcome);
        Ok(())
    }
}

/// Observation handed to agents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub phase: Phase,
    pub state: Vec<i64>,
    pub mask: Vec<bool>,
}

impl Observation {
    /// `[phase flag, state...]`.
    pub fn to_vector(&self) -> Vec<i64> {
        std::iter::once(self.phase.flag()).chain(self.state.iter().copied()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepInfo {
    pub outcome: OutcomeKind,
    /// Exact reward as `p/q` (or `p`).
    pub reward_exact: String,
    pub detail: Option<String>,
}

/// Static descriptors of the spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spaces {
    pub action_count: usize,
    pub action_names: Vec<String>,
    /// Length of the construction observation vector, phase flag included.
    pub construction_obs_len: usize,
    /// Bounds of every observation entry.
    pub obs_low: i64,
    pub obs_high: i64,
}

/// Reset/step environment over one engine.
#[derive(Debug)]
pub struct PolyEnv {
    engine: Arc<Engine>,
    episode: Episode,
    seed: u64,
    resets: u64,
}

impl PolyEnv {
    pub fn new(engine: Arc<Engine>) -> Result<Self, EnvError> {
        let episode = Episode::new(Arc::clone(&engine), "ep1")?;
        Ok(PolyEnv { engine, episode, seed: 0, resets: 0 })
    }

    pub fn from_scop(scop: Scop, cfg: EngineConfig) -> Result<Self, EnvError> {
        Self::new(Arc::new(Engine::new(scop, cfg)?))
    }

    pub fn engine(&self) -> &Arc<Engine> {
        &self.engine
    }

    pub fn episode(&self) -> &Episode {
        &self.episode
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn spaces(&self) -> Spaces {
        let n = self.engine.exploration_config().coeff_max;
        let deps = self.engine.dependences().len();
        let max_dims = self.engine.construction_config().max_dims;
        Spaces {
            action_count: self.engine.action_space_size(),
            action_names: (0..self.engine.action_space_size())
                .map(|id| Action::from_id(id, n).expect("in range").to_string())
                .collect(),
            construction_obs_len: 1 + 2 + deps,
            obs_low: -1,
            obs_high: [max_dims as i64, deps as i64, i64::from(n), 2].into_iter().max().expect("nonempty"),
        }
    }

    /// Starts a new episode. The environment itself is deterministic; the
    /// seed is recorded for agents that derive their own randomness from it.
    pub fn reset(&mut self, seed: Option<u64>) -> Result<Observation, EnvError> {
        if let Some(s) = seed {
            self.seed = s;
        }
        self.resets += 1;
        self.episode = Episode::new(Arc::clone(&self.engine), format!("ep{}", self.resets))?;
        Ok(self.observe())
    }

    pub fn observe(&self) -> Observation {
        Observation { phase: self.episode.phase(), state: self.episode.encode_state(), mask: self.episode.mask() }
    }

    /// Reward as a float; the exact value is in the info.
    pub fn step(&mut self, id: usize) -> Result<(Observation, f64, bool, StepInfo), EnvError> {
        let r = self.episode.step_id(id)?;
        let outcome = self.episode.outcome();
        let info = StepInfo { outcome: outcome.kind, reward_exact: r.reward.to_string(), detail: outcome.detail };
        Ok((self.observe(), r.reward.to_f64().unwrap_or(f64::NAN), r.done, info))
    }
}
