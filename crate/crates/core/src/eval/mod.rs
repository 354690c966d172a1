//! Schedules from points, legality verification, cost and reward.

mod cost;
mod export;
mod legality;
mod reward;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

pub use cost::{log2_fixed, proxy_cost, CostConfig, LOG2_FRACTION_BITS};
pub use export::{export_schedule, export_schedule_json, import_schedule, import_schedule_json, parse_schedule_any, ScheduleFile};
pub use legality::{check_legality, DependenceVerdict, DimCarry, LegalityOptions, LegalityReport, Violation};
pub use reward::{
    import_measurement, EpisodeOutcome, Measurement, OutcomeKind, RewardConfig, RewardMode, RewardModel,
    COST_MODEL_VERSION,
};

use crate::exploration::SchedulePoint;
use crate::farkas::CoefficientLayout;
use crate::geometry::GeometryError;
use crate::schedule::{Schedule, ScheduleError, StatementSchedule};
use crate::scop::{AffineExpr, ScopError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("point has {found} coefficients in dimension {dim}, layout expects {expected}")]
    PointWidth { dim: usize, expected: usize, found: usize },
    #[error("schedule coefficient {0} does not fit in 64 bits")]
    Overflow(BigInt),
    #[error("{count} statement instances exceed the cap of {cap}")]
    TooManyInstances { count: usize, cap: usize },
    #[error("schedule is illegal")]
    Illegal,
    #[error("symbolic check certified dependence {dep} but enumeration found a violation")]
    TierDisagreement { dep: usize },
    #[error("no measurement for episode `{0}`")]
    MissingMeasurement(String),
    #[error("measurement file, line {line}: {message}")]
    Measurement { line: usize, message: String },
    #[error("invalid_penalty must be negative")]
    BadPenalty,
    #[error("arithmetic overflow while evaluating a schedule")]
    ArithmeticOverflow,
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Scop(#[from] ScopError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Slices each dimension's coefficient vector into per-statement affine
/// forms over `(iters, params)` plus a constant.
pub fn schedule_from_points(point: &SchedulePoint, layout: &CoefficientLayout) -> Result<Schedule, EvalError> {
    for (d, p) in point.dims.iter().enumerate() {
        if p.len() != layout.n {
            return Err(EvalError::PointWidth { dim: d + 1, expected: layout.n, found: p.len() });
        }
    }
    let to_i64 = |x: &BigInt| x.to_i64().ok_or_else(|| EvalError::Overflow(x.clone()));
    let mut statements = Vec::with_capacity(layout.blocks.len());
    for b in &layout.blocks {
        let mut dims = Vec::with_capacity(point.dims.len());
        for p in &point.dims {
            let slice = &p[b.offset..b.offset + b.width()];
            let coeffs = slice[..b.width() - 1].iter().map(to_i64).collect::<Result<Vec<_>, _>>()?;
            dims.push(AffineExpr::new(coeffs, to_i64(&slice[b.width() - 1])?));
        }
        statements.push(StatementSchedule { statement: b.statement.clone(), iters: b.iter_names.clone(), dims });
    }
    Ok(Schedule { params: layout.params.clone(), statements })
}

/// Inverse of [`schedule_from_points`].
pub fn points_of(schedule: &Schedule, layout: &CoefficientLayout) -> Result<SchedulePoint, EvalError> {
    let k = schedule.k();
    let mut dims = vec![vec![BigInt::from(0); layout.n]; k];
    for b in &layout.blocks {
        let s = schedule
            .statement(&b.statement)
            .ok_or_else(|| ScheduleError::UnknownStatement(b.statement.clone()))?;
        for (d, e) in s.dims.iter().enumerate() {
            if e.coeffs.len() + 1 != b.width() {
                return Err(ScheduleError::FormWidth {
                    stmt: b.statement.clone(),
                    expected: b.width() - 1,
                    found: e.coeffs.len(),
                }
                .into());
            }
            for (k, &c) in e.coeffs.iter().enumerate() {
                dims[d][b.offset + k] = BigInt::from(c);
            }
            dims[d][b.constant_index()] = BigInt::from(e.constant);
        }
    }
    Ok(SchedulePoint { dims })
}
