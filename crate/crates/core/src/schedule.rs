//! Multi-dimensional affine schedules.

use thiserror::Error;

use crate::scop::{AffineExpr, Scop};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("schedule has {found} statements, SCoP has {expected}")]
    StatementCount { expected: usize, found: usize },
    #[error("statement `{stmt}`: expected {expected} dimensions, found {found}")]
    DimensionCount { stmt: String, expected: usize, found: usize },
    #[error("statement `{stmt}`: affine form has {found} coefficients, expected {expected}")]
    FormWidth { stmt: String, expected: usize, found: usize },
    #[error("unknown statement `{0}`")]
    UnknownStatement(String),
    #[error("schedule coefficient does not fit in 64 bits")]
    Overflow,
    #[error("cannot parse schedule: {0}")]
    Parse(String),
}

/// `Theta_S`: one affine form over `(iters, params, 1)` per schedule
/// dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StatementSchedule {
    pub statement: String,
    pub iters: Vec<String>,
    pub dims: Vec<AffineExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Schedule {
    pub params: Vec<String>,
    pub statements: Vec<StatementSchedule>,
}

impl Schedule {
    /// Builds a schedule for `scop` from per-statement rows, in statement
    /// order.
    pub fn from_rows(scop: &Scop, rows: Vec<Vec<AffineExpr>>) -> Result<Self, ScheduleError> {
        if rows.len() != scop.statements.len() {
            return Err(ScheduleError::StatementCount { expected: scop.statements.len(), found: rows.len() });
        }
        let k = rows.first().map_or(0, Vec::len);
        let np = scop.params.len();
        let mut statements = Vec::with_capacity(rows.len());
        for (s, dims) in scop.statements.iter().zip(rows) {
            if dims.len() != k {
                return Err(ScheduleError::DimensionCount { stmt: s.name.clone(), expected: k, found: dims.len() });
            }
            for e in &dims {
                if e.coeffs.len() != s.depth() + np {
                    return Err(ScheduleError::FormWidth {
                        stmt: s.name.clone(),
                        expected: s.depth() + np,
                        found: e.coeffs.len(),
                    });
                }
            }
            statements.push(StatementSchedule { statement: s.name.clone(), iters: s.iters.clone(), dims });
        }
        Ok(Schedule { params: scop.params.clone(), statements })
    }

    /// Number of schedule dimensions.
    pub fn k(&self) -> usize {
        self.statements.first().map_or(0, |s| s.dims.len())
    }

    pub fn statement(&self, name: &str) -> Option<&StatementSchedule> {
        self.statements.iter().find(|s| s.statement == name)
    }

    /// Checks that the schedule matches the statements of `scop`.
    pub fn check_against(&self, scop: &Scop) -> Result<(), ScheduleError> {
        if self.statements.len() != scop.statements.len() {
            return Err(ScheduleError::StatementCount { expected: scop.statements.len(), found: self.statements.len() });
        }
        let rows = scop
            .statements
            .iter()
            .map(|s| {
                self.statement(&s.name)
                    .map(|ss| ss.dims.clone())
                    .ok_or_else(|| ScheduleError::UnknownStatement(s.name.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Schedule::from_rows(scop, rows).map(|_| ())
    }

    /// Rows for `scop`'s statement order; the schedule may list statements
    /// in any order.
    pub fn rows_for(&self, scop: &Scop) -> Result<Vec<&[AffineExpr]>, ScheduleError> {
        self.check_against(scop)?;
        Ok(scop
            .statements
            .iter()
            .map(|s| self.statement(&s.name).expect("checked").dims.as_slice())
            .collect())
    }

    /// Multiplies dimension `dim` of every statement by `factor`.
    pub fn scale_dimension(&self, dim: usize, factor: i64) -> Schedule {
        let mut out = self.clone();
        for s in out.statements.iter_mut() {
            let e = &mut s.dims[dim];
            e.coeffs.iter_mut().for_each(|c| *c *= factor);
            e.constant *= factor;
        }
        out
    }
}

/// Timestamp of one instance: `point` is `(iters, params)`.
pub fn timestamp(dims: &[AffineExpr], point: &[i64]) -> Vec<i64> {
    dims.iter().map(|e| e.eval(point)).collect()
}
