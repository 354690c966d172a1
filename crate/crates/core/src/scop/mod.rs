//! Static control parts: statements with affine iteration domains and array
//! accesses, their syntactic `2d+1` positions, and dependence polyhedra.
//!
//! SCoPs are read from a JSON description (see [`parse_scop`]). Coefficient
//! vectors inside a statement are ordered iterators first, then parameters;
//! inside a dependence, source iterators, target iterators, then parameters.
//! Parameters are assumed nonnegative and the corresponding `p >= 0` rows are
//! added to every domain.

mod deps;
mod format;

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::geometry::{GeometryError, HPolyhedron, LinearConstraint};
use crate::schedule::Schedule;

pub use deps::compute_memory_dependences;
pub use format::{
    parse_scop, serialize_scop, AccessFile, AffineFile, ConstraintFile, DependenceFile, DomainFile, ScopFile, StatementFile,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScopError {
    #[error("malformed SCoP file: {0}")]
    Syntax(String),
    #[error("SCoP has no statements")]
    NoStatements,
    #[error("duplicate statement name `{0}`")]
    DuplicateStatement(String),
    #[error("duplicate symbol `{symbol}` in {context}")]
    DuplicateSymbol { context: String, symbol: String },
    #[error("{context}: expected {expected} coefficients, found {found}")]
    DimensionMismatch { context: String, expected: usize, found: usize },
    #[error("unknown statement `{0}`")]
    UnknownStatement(String),
    #[error("statement `{stmt}`: position must have length {expected} (2d+1), found {found}")]
    BadPosition { stmt: String, expected: usize, found: usize },
    #[error("statement `{stmt}`: odd position entries must be the loop depths 1..d")]
    BadDepthMarker { stmt: String },
    #[error("statements `{0}` and `{1}` have no syntactic order")]
    AmbiguousOrder(String, String),
    #[error("dependence {0} has an empty polyhedron")]
    EmptyDependence(usize),
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),
    #[error("parameter `{0}` must be bound to a nonnegative value")]
    NegativeParameter(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AccessKind {
    Read,
    Write,
}

/// `coeffs . (iters, params) + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineExpr {
    pub coeffs: Vec<i64>,
    pub constant: i64,
}

impl AffineExpr {
    pub fn new(coeffs: Vec<i64>, constant: i64) -> Self {
        AffineExpr { coeffs, constant }
    }

    pub fn zero(dim: usize) -> Self {
        AffineExpr { coeffs: vec![0; dim], constant: 0 }
    }

    pub fn eval(&self, point: &[i64]) -> i64 {
        self.coeffs.iter().zip(point).map(|(a, x)| a * x).sum::<i64>() + self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.coeffs.iter().all(|&c| c == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Access {
    pub array: String,
    pub kind: AccessKind,
    pub map: Vec<AffineExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub name: String,
    pub iters: Vec<String>,
    /// Over `iters ++ params`.
    pub domain: HPolyhedron,
    pub accesses: Vec<Access>,
    /// Syntactic `2d+1` position: textual positions at even indices, loop
    /// depths `1..d` at odd indices.
    pub position: Vec<i64>,
}

impl Statement {
    pub fn depth(&self) -> usize {
        self.iters.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dependence {
    /// 1-based, in dependence order.
    pub id: usize,
    pub source: String,
    pub target: String,
    /// Over `source iters ++ target iters ++ params`.
    pub polyhedron: HPolyhedron,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scop {
    pub name: String,
    pub params: Vec<String>,
    pub statements: Vec<Statement>,
    pub dependences: Vec<Dependence>,
}

impl Scop {
    pub fn statement(&self, name: &str) -> Option<&Statement> {
        self.statements.iter().find(|s| s.name == name)
    }

    pub fn statement_index(&self, name: &str) -> Option<usize> {
        self.statements.iter().position(|s| s.name == name)
    }

    /// Dependences from the file, or memory-based dependences when the file
    /// supplied none.
    pub fn dependences_or_computed(&self) -> Vec<Dependence> {
        if self.dependences.is_empty() {
            compute_memory_dependences(self)
        } else {
            self.dependences.clone()
        }
    }

    /// Fills `dependences` with the memory-based ones if empty.
    pub fn with_dependences(mut self) -> Self {
        if self.dependences.is_empty() {
            self.dependences = compute_memory_dependences(&self);
        }
        self
    }

    pub fn identity_schedule(&self) -> Schedule {
        identity_schedule(self)
    }

    pub(crate) fn validate(&self) -> Result<(), ScopError> {
        if self.statements.is_empty() {
            return Err(ScopError::NoStatements);
        }
        let mut params = HashSet::new();
        for p in &self.params {
            if !params.insert(p.as_str()) {
                return Err(ScopError::DuplicateSymbol { context: "params".into(), symbol: p.clone() });
            }
        }
        let mut names = HashSet::new();
        for s in &self.statements {
            if !names.insert(s.name.as_str()) {
                return Err(ScopError::DuplicateStatement(s.name.clone()));
            }
            let mut syms = HashSet::new();
            for it in &s.iters {
                if !syms.insert(it.as_str()) || params.contains(it.as_str()) {
                    return Err(ScopError::DuplicateSymbol { context: format!("statement `{}`", s.name), symbol: it.clone() });
                }
            }
            let d = s.depth();
            if s.position.len() != 2 * d + 1 {
                return Err(ScopError::BadPosition { stmt: s.name.clone(), expected: 2 * d + 1, found: s.position.len() });
            }
            if (1..=d).any(|m| s.position[2 * m - 1] != m as i64) {
                return Err(ScopError::BadDepthMarker { stmt: s.name.clone() });
            }
            let dim = d + self.params.len();
            if s.domain.dim() != dim {
                return Err(ScopError::DimensionMismatch {
                    context: format!("domain of `{}`", s.name),
                    expected: dim,
                    found: s.domain.dim(),
                });
            }
            for (k, a) in s.accesses.iter().enumerate() {
                for e in &a.map {
                    if e.coeffs.len() != dim {
                        return Err(ScopError::DimensionMismatch {
                            context: format!("access {k} of `{}` (to `{}`)", s.name, a.array),
                            expected: dim,
                            found: e.coeffs.len(),
                        });
                    }
                }
            }
        }
        for (i, a) in self.statements.iter().enumerate() {
            for b in &self.statements[i + 1..] {
                if deps::textual_order(a, b).is_none() {
                    return Err(ScopError::AmbiguousOrder(a.name.clone(), b.name.clone()));
                }
            }
        }
        for dep in &self.dependences {
            let src = self.statement(&dep.source).ok_or_else(|| ScopError::UnknownStatement(dep.source.clone()))?;
            let tgt = self.statement(&dep.target).ok_or_else(|| ScopError::UnknownStatement(dep.target.clone()))?;
            let dim = src.depth() + tgt.depth() + self.params.len();
            if dep.polyhedron.dim() != dim {
                return Err(ScopError::DimensionMismatch {
                    context: format!("dependence {}", dep.id),
                    expected: dim,
                    found: dep.polyhedron.dim(),
                });
            }
            if dep.polyhedron.is_empty() {
                return Err(ScopError::EmptyDependence(dep.id));
            }
        }
        Ok(())
    }
}

/// Concrete parameter values, used by oracles and the cost model.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamBinding(pub BTreeMap<String, i64>);

impl ParamBinding {
    /// Every parameter of `scop` bound to `value`.
    pub fn uniform(scop: &Scop, value: i64) -> Self {
        ParamBinding(scop.params.iter().map(|p| (p.clone(), value)).collect())
    }

    pub fn with(mut self, param: &str, value: i64) -> Self {
        self.0.insert(param.to_string(), value);
        self
    }

    /// Values in `scop.params` order.
    pub fn values(&self, scop: &Scop) -> Result<Vec<i64>, ScopError> {
        scop.params
            .iter()
            .map(|p| match self.0.get(p) {
                None => Err(ScopError::UnboundParameter(p.clone())),
                Some(&v) if v < 0 => Err(ScopError::NegativeParameter(p.clone())),
                Some(&v) => Ok(v),
            })
            .collect()
    }
}

/// Lifts a constraint over `iters ++ params` of one statement into a space
/// with `total` variables where the statement's iterators start at
/// `iter_offset` and the parameters at `param_offset`.
pub(crate) fn lift(
    c: &LinearConstraint,
    depth: usize,
    iter_offset: usize,
    param_offset: usize,
    total: usize,
) -> LinearConstraint {
    let mut coeffs = vec![0; total];
    for (k, &a) in c.coeffs().iter().enumerate() {
        let at = if k < depth { iter_offset + k } else { param_offset + (k - depth) };
        coeffs[at] += a;
    }
    LinearConstraint::new(coeffs, c.constant(), c.kind())
}

/// The schedule reproducing the original syntactic order: textual positions
/// at even dimensions, iterators at odd ones, padded with zeros to a common
/// dimensionality.
pub fn identity_schedule(scop: &Scop) -> Schedule {
    let k = scop.statements.iter().map(|s| s.position.len()).max().unwrap_or(1);
    let np = scop.params.len();
    let rows = scop
        .statements
        .iter()
        .map(|s| {
            let dim = s.depth() + np;
            (0..k)
                .map(|r| {
                    let mut e = AffineExpr::zero(dim);
                    if r % 2 == 0 {
                        e.constant = s.position.get(r).copied().unwrap_or(0);
                    } else if (r - 1) / 2 < s.depth() {
                        e.coeffs[(r - 1) / 2] = 1;
                    }
                    e
                })
                .collect()
        })
        .collect();
    Schedule::from_rows(scop, rows).expect("identity schedule has consistent shape")
}
