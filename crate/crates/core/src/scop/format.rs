//! JSON file format for SCoPs.
//!
//! ```json
//! { "name": "matvec", "params": ["N"],
//!   "statements": [
//!     { "name": "S", "iters": ["i"], "position": [0, 1, 0],
//!       "domain": { "constraints": [ {"coeffs": [1, 0], "const": 0, "kind": "ge"} ] },
//!       "accesses": [ {"array": "y", "kind": "write", "map": [ {"coeffs": [1, 0], "const": 0} ]} ] } ],
//!   "dependences": [ {"source": "S", "target": "T", "constraints": [ ... ]} ] }
//! ```
//!
//! `dependences` is optional; when absent the memory-based dependences are
//! computed on demand.

use serde::{Deserialize, Serialize};

use super::{Access, AccessKind, AffineExpr, Dependence, Scop, ScopError, Statement};
use crate::geometry::{ConstraintKind, HPolyhedron, LinearConstraint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintFile {
    pub coeffs: Vec<i64>,
    #[serde(rename = "const")]
    pub constant: i64,
    pub kind: ConstraintKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainFile {
    pub constraints: Vec<ConstraintFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineFile {
    pub coeffs: Vec<i64>,
    #[serde(rename = "const")]
    pub constant: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccessFile {
    pub array: String,
    pub kind: AccessKind,
    pub map: Vec<AffineFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatementFile {
    pub name: String,
    pub iters: Vec<String>,
    pub position: Vec<i64>,
    pub domain: DomainFile,
    #[serde(default)]
    pub accesses: Vec<AccessFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DependenceFile {
    pub source: String,
    pub target: String,
    pub constraints: Vec<ConstraintFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScopFile {
    pub name: String,
    #[serde(default)]
    pub params: Vec<String>,
    pub statements: Vec<StatementFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependences: Option<Vec<DependenceFile>>,
}

fn constraint_from_file(c: &ConstraintFile) -> LinearConstraint {
    LinearConstraint::new(c.coeffs.clone(), c.constant, c.kind)
}

fn constraint_to_file(c: &LinearConstraint) -> ConstraintFile {
    ConstraintFile { coeffs: c.coeffs().to_vec(), constant: c.constant(), kind: c.kind() }
}

fn polyhedron(vars: Vec<String>, rows: &[ConstraintFile], context: &str) -> Result<HPolyhedron, ScopError> {
    for c in rows {
        if c.coeffs.len() != vars.len() {
            return Err(ScopError::DimensionMismatch {
                context: context.to_string(),
                expected: vars.len(),
                found: c.coeffs.len(),
            });
        }
    }
    Ok(HPolyhedron::new(vars, rows.iter().map(constraint_from_file).collect())?)
}

impl ScopFile {
    pub fn into_scop(self) -> Result<Scop, ScopError> {
        let np = self.params.len();
        let mut statements = Vec::with_capacity(self.statements.len());
        for s in &self.statements {
            let vars: Vec<String> = s.iters.iter().chain(&self.params).cloned().collect();
            let mut domain = polyhedron(vars, &s.domain.constraints, &format!("domain of `{}`", s.name))?;
            for p in 0..np {
                let mut coeffs = vec![0; s.iters.len() + np];
                coeffs[s.iters.len() + p] = 1;
                domain.push(LinearConstraint::ge(coeffs, 0))?;
            }
            let accesses = s
                .accesses
                .iter()
                .map(|a| Access {
                    array: a.array.clone(),
                    kind: a.kind,
                    map: a.map.iter().map(|e| AffineExpr::new(e.coeffs.clone(), e.constant)).collect(),
                })
                .collect();
            statements.push(Statement {
                name: s.name.clone(),
                iters: s.iters.clone(),
                domain: domain.simplified(),
                accesses,
                position: s.position.clone(),
            });
        }
        let mut scop = Scop { name: self.name, params: self.params, statements, dependences: Vec::new() };
        // Statement checks come first so dependence lookups below are safe.
        scop.validate()?;
        for (k, d) in self.dependences.unwrap_or_default().iter().enumerate() {
            let src = scop.statement(&d.source).ok_or_else(|| ScopError::UnknownStatement(d.source.clone()))?;
            let tgt = scop.statement(&d.target).ok_or_else(|| ScopError::UnknownStatement(d.target.clone()))?;
            let vars: Vec<String> = src
                .iters
                .iter()
                .map(|v| format!("{}_{v}", src.name))
                .chain(tgt.iters.iter().map(|v| format!("{}'_{v}", tgt.name)))
                .chain(scop.params.iter().cloned())
                .collect();
            let poly = polyhedron(vars, &d.constraints, &format!("dependence {}", k + 1))?;
            scop.dependences.push(Dependence {
                id: k + 1,
                source: d.source.clone(),
                target: d.target.clone(),
                polyhedron: poly.simplified(),
            });
        }
        scop.validate()?;
        Ok(scop)
    }
}

impl From<&Scop> for ScopFile {
    fn from(scop: &Scop) -> Self {
        ScopFile {
            name: scop.name.clone(),
            params: scop.params.clone(),
            statements: scop
                .statements
                .iter()
                .map(|s| StatementFile {
                    name: s.name.clone(),
                    iters: s.iters.clone(),
                    position: s.position.clone(),
                    domain: DomainFile { constraints: s.domain.constraints().iter().map(constraint_to_file).collect() },
                    accesses: s
                        .accesses
                        .iter()
                        .map(|a| AccessFile {
                            array: a.array.clone(),
                            kind: a.kind,
                            map: a.map.iter().map(|e| AffineFile { coeffs: e.coeffs.clone(), constant: e.constant }).collect(),
                        })
                        .collect(),
                })
                .collect(),
            dependences: if scop.dependences.is_empty() {
                None
            } else {
                Some(
                    scop.dependences
                        .iter()
                        .map(|d| DependenceFile {
                            source: d.source.clone(),
                            target: d.target.clone(),
                            constraints: d.polyhedron.constraints().iter().map(constraint_to_file).collect(),
                        })
                        .collect(),
                )
            },
        }
    }
}

/// Parses and validates a SCoP description.
pub fn parse_scop(text: &str) -> Result<Scop, ScopError> {
    let file: ScopFile = serde_json::from_str(text).map_err(|e| ScopError::Syntax(e.to_string()))?;
    file.into_scop()
}

/// Canonical JSON form (pretty-printed).
pub fn serialize_scop(scop: &Scop) -> String {
    serde_json::to_string_pretty(&ScopFile::from(scop)).expect("SCoP files always serialize")
}
