//! The schedule-space construction process.
//!
//! A state is `(i_dim, i_dep, d_1, ..., d_|D|)` where `d_j` is the dimension
//! that carries dependence `j` strongly (0 while unassigned). The agent walks
//! over dependences with `next_dep`, opens new dimensions with `next_dim`
//! and commits the current dependence to the current dimension with
//! `select_dep`. The episode ends once every dependence is assigned.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("a construction episode needs at least one dependence")]
    NoDependences,
    #[error("construction state is terminal")]
    Terminal,
    #[error("action `{action}` is not allowed in state {state}")]
    InvalidAction { action: ConstructionAction, state: ConstructionState },
    #[error("unknown construction action `{0}`")]
    UnknownAction(String),
    #[error("max_dims must be at least 1")]
    BadConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstructionAction {
    NextDim,
    NextDep,
    SelectDep,
}

impl ConstructionAction {
    pub const ALL: [ConstructionAction; 3] =
        [ConstructionAction::NextDim, ConstructionAction::NextDep, ConstructionAction::SelectDep];

    pub fn name(self) -> &'static str {
        match self {
            ConstructionAction::NextDim => "next_dim",
            ConstructionAction::NextDep => "next_dep",
            ConstructionAction::SelectDep => "select_dep",
        }
    }

    /// Position in [`ConstructionAction::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ConstructionAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstructionAction {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConstructionAction::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| ConstructionError::UnknownAction(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructionConfig {
    pub max_dims: usize,
}

impl ConstructionConfig {
    pub fn new(max_dims: usize) -> Result<Self, ConstructionError> {
        if max_dims == 0 {
            return Err(ConstructionError::BadConfig);
        }
        Ok(ConstructionConfig { max_dims })
    }

    /// `2|D| + 2` dimensions.
    pub fn default_for(num_deps: usize) -> Self {
        ConstructionConfig { max_dims: 2 * num_deps + 2 }
    }
}

/// Indices are 1-based, as in the textual form `(i_dim, i_dep, d_1, ...)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstructionState {
    pub i_dim: usize,
    pub i_dep: usize,
    pub d: Vec<usize>,
}

impl ConstructionState {
    pub fn reset(num_deps: usize) -> Result<Self, ConstructionError> {
        if num_deps == 0 {
            return Err(ConstructionError::NoDependences);
        }
        Ok(ConstructionState { i_dim: 1, i_dep: 1, d: vec![0; num_deps] })
    }

    pub fn is_terminal(&self) -> bool {
        self.d.iter().all(|&x| x > 0)
    }

    pub fn is_allowed(&self, a: ConstructionAction, cfg: &ConstructionConfig) -> bool {
        if self.is_terminal() {
            return false;
        }
        match a {
            ConstructionAction::NextDim => self.i_dim < cfg.max_dims,
            ConstructionAction::NextDep => self.d.contains(&0),
            ConstructionAction::SelectDep => self.d[self.i_dep - 1] == 0,
        }
    }

    pub fn valid_actions(&self, cfg: &ConstructionConfig) -> Result<Vec<ConstructionAction>, ConstructionError> {
        if self.is_terminal() {
            return Err(ConstructionError::Terminal);
        }
        Ok(ConstructionAction::ALL.into_iter().filter(|&a| self.is_allowed(a, cfg)).collect())
    }

    pub fn step(&self, a: ConstructionAction, cfg: &ConstructionConfig) -> Result<Self, ConstructionError> {
        if self.is_terminal() {
            return Err(ConstructionError::Terminal);
        }
        if !self.is_allowed(a, cfg) {
            return Err(ConstructionError::InvalidAction { action: a, state: self.clone() });
        }
        let mut next = self.clone();
        match a {
            ConstructionAction::NextDim => next.i_dim += 1,
            ConstructionAction::NextDep => {
                let unassigned = |k: &usize| self.d[k - 1] == 0;
                next.i_dep = (self.i_dep + 1..=self.d.len())
                    .find(unassigned)
                    .or_else(|| (1..=self.d.len()).find(unassigned))
                    .expect("mask guarantees an unassigned dependence");
            }
            ConstructionAction::SelectDep => next.d[self.i_dep - 1] = self.i_dim,
        }
        Ok(next)
    }

    /// Dependence id (1-based, matching the dependence order) to carrying
    /// dimension. Only meaningful for terminal states.
    pub fn assignment(&self) -> BTreeMap<usize, usize> {
        self.d.iter().enumerate().map(|(j, &x)| (j + 1, x)).collect()
    }

    /// Number of schedule dimensions of the resulting space.
    pub fn dimensions(&self) -> usize {
        self.i_dim
    }

    /// `[i_dim, i_dep, d_1, ...]`.
    pub fn encode(&self) -> Vec<i64> {
        [self.i_dim, self.i_dep].iter().chain(&self.d).map(|&x| x as i64).collect()
    }
}

impl fmt::Display for ConstructionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}", self.i_dim, self.i_dep)?;
        for x in &self.d {
            write!(f, ",{x}")?;
        }
        f.write_str(")")
    }
}

/// Applies `actions` from the initial state and returns every visited state,
/// the initial one included.
pub fn run_actions(
    num_deps: usize,
    actions: &[ConstructionAction],
    cfg: &ConstructionConfig,
) -> Result<Vec<ConstructionState>, ConstructionError> {
    let mut states = vec![ConstructionState::reset(num_deps)?];
    for &a in actions {
        let next = states.last().expect("nonempty").step(a, cfg)?;
        states.push(next);
    }
    Ok(states)
}
