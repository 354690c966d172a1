//! Episode outcomes and their rewards.
//!
//! A legal complete schedule earns a speedup-like reward: the identity
//! schedule's proxy cost divided by the candidate's, or a speedup measured
//! externally. Illegal schedules and invalid episodes earn a fixed negative
//! penalty; episodes that stop early earn 0.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::cost::{proxy_cost, CostConfig};
use super::legality::{check_legality, LegalityOptions, LegalityReport};
use super::EvalError;
use crate::geometry::Rational;
use crate::schedule::Schedule;
use crate::scop::{Dependence, ParamBinding, Scop};

/// Version of the proxy cost model, recorded in run summaries.
pub const COST_MODEL_VERSION: &str = "reuse-log2-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutcomeKind {
    CompleteLegal,
    CompleteIllegal,
    Invalid,
    Incomplete,
}

impl OutcomeKind {
    pub fn name(self) -> &'static str {
        match self {
            OutcomeKind::CompleteLegal => "complete_legal",
            OutcomeKind::CompleteIllegal => "complete_illegal",
            OutcomeKind::Invalid => "invalid",
            OutcomeKind::Incomplete => "incomplete",
        }
    }
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpisodeOutcome {
    pub kind: OutcomeKind,
    pub reward: Rational,
    pub schedule: Option<Schedule>,
    pub legality: Option<LegalityReport>,
    /// Why the episode is invalid or illegal.
    pub detail: Option<String>,
}

impl EpisodeOutcome {
    pub fn incomplete() -> Self {
        EpisodeOutcome { kind: OutcomeKind::Incomplete, reward: Rational::zero(), schedule: None, legality: None, detail: None }
    }

    pub fn invalid(penalty: &Rational, detail: impl Into<String>) -> Self {
        EpisodeOutcome {
            kind: OutcomeKind::Invalid,
            reward: penalty.clone(),
            schedule: None,
            legality: None,
            detail: Some(detail.into()),
        }
    }
}

/// One line of a measurement file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Measurement {
    Speedup(Rational),
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RewardMode {
    ProxyCost,
    /// Measured speedups keyed by episode id.
    External(BTreeMap<String, Measurement>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewardConfig {
    pub mode: RewardMode,
    pub invalid_penalty: Rational,
    /// Parameter values for the legality oracle.
    pub check_binding: ParamBinding,
    /// Parameter values for the proxy cost.
    pub cost_binding: ParamBinding,
    /// Reference schedule; the identity schedule when `None`.
    pub baseline: Option<Schedule>,
    pub cost: CostConfig,
}

impl RewardConfig {
    pub const DEFAULT_CHECK_PARAM: i64 = 5;
    pub const DEFAULT_COST_PARAM: i64 = 8;

    pub fn proxy(scop: &Scop) -> Self {
        RewardConfig {
            mode: RewardMode::ProxyCost,
            invalid_penalty: Rational::from_integer(BigInt::from(-1)),
            check_binding: ParamBinding::uniform(scop, Self::DEFAULT_CHECK_PARAM),
            cost_binding: ParamBinding::uniform(scop, Self::DEFAULT_COST_PARAM),
            baseline: None,
            cost: CostConfig::default(),
        }
    }

    pub fn external(scop: &Scop, measurements: BTreeMap<String, Measurement>) -> Self {
        RewardConfig { mode: RewardMode::External(measurements), ..Self::proxy(scop) }
    }
}

/// Evaluates complete schedules for one SCoP. The baseline cost is computed
/// once.
#[derive(Clone, Debug)]
pub struct RewardModel {
    scop: Scop,
    deps: Vec<Dependence>,
    cfg: RewardConfig,
    baseline_cost: Option<Rational>,
}

impl RewardModel {
    pub fn new(scop: Scop, deps: Vec<Dependence>, cfg: RewardConfig) -> Result<Self, EvalError> {
        if !cfg.invalid_penalty.is_negative() {
            return Err(EvalError::BadPenalty);
        }
        let baseline_cost = match cfg.mode {
            RewardMode::ProxyCost => {
                let baseline = cfg.baseline.clone().unwrap_or_else(|| scop.identity_schedule());
                Some(proxy_cost(&baseline, &scop, &cfg.cost_binding, &cfg.cost)?)
            }
            RewardMode::External(_) => None,
        };
        Ok(RewardModel { scop, deps, cfg, baseline_cost })
    }

    pub fn config(&self) -> &RewardConfig {
        &self.cfg
    }

    pub fn scop(&self) -> &Scop {
        &self.scop
    }

    pub fn dependences(&self) -> &[Dependence] {
        &self.deps
    }

    pub fn baseline_cost(&self) -> Option<&Rational> {
        self.baseline_cost.as_ref()
    }

    pub fn invalid(&self, detail: impl Into<String>) -> EpisodeOutcome {
        EpisodeOutcome::invalid(&self.cfg.invalid_penalty, detail)
    }

    pub fn check(&self, schedule: &Schedule) -> Result<LegalityReport, EvalError> {
        check_legality(schedule, &self.scop, &self.deps, &LegalityOptions::new(self.cfg.check_binding.clone()))
    }

    /// Outcome of a complete schedule produced by episode `episode_id`.
    pub fn evaluate(&self, schedule: Schedule, episode_id: &str) -> Result<EpisodeOutcome, EvalError> {
        let report = self.check(&schedule)?;
        if !report.legal {
            let detail = report.first_violation().map(|(dep, w)| format!("dependence {dep}: {w}"));
            return Ok(EpisodeOutcome {
                kind: OutcomeKind::CompleteIllegal,
                reward: self.cfg.invalid_penalty.clone(),
                schedule: Some(schedule),
                legality: Some(report),
                detail,
            });
        }
        let reward = match &self.cfg.mode {
            RewardMode::ProxyCost => {
                let cost = proxy_cost(&schedule, &self.scop, &self.cfg.cost_binding, &self.cfg.cost)?;
                let base = self.baseline_cost.clone().expect("proxy mode has a baseline");
                if cost.is_zero() {
                    Rational::from_integer(BigInt::from(1))
                } else {
                    base / cost
                }
            }
            RewardMode::External(m) => match m.get(episode_id) {
                None => return Err(EvalError::MissingMeasurement(episode_id.to_string())),
                Some(Measurement::Timeout) => Rational::zero(),
                Some(Measurement::Speedup(s)) => s.clone(),
            },
        };
        Ok(EpisodeOutcome {
            kind: OutcomeKind::CompleteLegal,
            reward,
            schedule: Some(schedule),
            legality: Some(report),
            detail: None,
        })
    }
}

/// Parses a decimal such as `140`, `140.0`, `1.5e2` into an exact rational.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], i32::from_str(&s[i + 1..]).ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n = BigInt::from_str(format!("{int}{frac}").trim_start_matches('0')).unwrap_or_default();
    let n = if neg { -n } else { n };
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Reads `episode-id speedup` lines; `#` starts a comment. A speedup of
/// `timeout` records a timed-out measurement.
pub fn import_measurement(text: &str) -> Result<BTreeMap<String, Measurement>, EvalError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| EvalError::Measurement { line, message };
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [id, value] = fields[..] else {
            return Err(err(format!("expected `episode-id speedup`, found `{content}`")));
        };
        let m = if value.eq_ignore_ascii_case("timeout") {
            Measurement::Timeout
        } else {
            let v = parse_decimal(value).ok_or_else(|| err(format!("`{value}` is not a number")))?;
            if !v.is_positive() {
                return Err(err(format!("speedup must be positive, found {value}")));
            }
            Measurement::Speedup(v)
        };
        if out.insert(id.to_string(), m).is_some() {
            return Err(err(format!("duplicate episode id `{id}`")));
        }
    }
    Ok(out)
}
