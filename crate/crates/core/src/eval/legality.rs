//! Legality of a schedule with respect to dependence polyhedra.
//!
//! The verdict comes from enumeration: every lattice point `(s, t)` of every
//! dependence polyhedron, under a concrete parameter binding, must satisfy
//! `Theta_S(s) <<_lex Theta_T(t)`. Independently, for each dependence the
//! regions where the first `m - 1` dimensions tie and dimension `m` runs
//! backwards (or where all dimensions tie) are tested for rational
//! emptiness. Empty regions certify the dependence for every parameter
//! value; a violation found by enumeration on a certified dependence is
//! reported as an internal error.

use std::fmt;

use super::EvalError;
use crate::geometry::{bounded_lattice_points, LinearConstraint, DEFAULT_BOX_CAP};
use crate::schedule::Schedule;
use crate::scop::{AffineExpr, Dependence, ParamBinding, Scop};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegalityOptions {
    pub binding: ParamBinding,
    pub box_cap: u128,
    pub symbolic: bool,
}

impl LegalityOptions {
    pub fn new(binding: ParamBinding) -> Self {
        LegalityOptions { binding, box_cap: DEFAULT_BOX_CAP, symbolic: true }
    }
}

/// What one schedule dimension does to the instance pairs of a dependence
/// that are still tied on all earlier dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DimCarry {
    /// Every tied pair is ordered strictly.
    Strong,
    /// No tied pair is reversed, some stay tied.
    Weak,
    /// Some tied pair is reversed.
    Violated,
    /// No pair is tied any more.
    Done,
}

impl fmt::Display for DimCarry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DimCarry::Strong => "strong",
            DimCarry::Weak => "weak",
            DimCarry::Violated => "violated",
            DimCarry::Done => "done",
        })
    }
}

/// An instance pair executed in the wrong order (or at the same time).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub source_iters: Vec<i64>,
    pub target_iters: Vec<i64>,
    pub params: Vec<i64>,
    pub source_time: Vec<i128>,
    pub target_time: Vec<i128>,
    /// First dimension where the target runs earlier; `None` when the two
    /// timestamps are equal.
    pub dim: Option<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "source {:?} at {:?}, target {:?} at {:?}",
            self.source_iters, self.source_time, self.target_iters, self.target_time
        )?;
        match self.dim {
            Some(d) => write!(f, " (reversed at dimension {d})"),
            None => write!(f, " (same timestamp)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependenceVerdict {
    pub dep: usize,
    pub source: String,
    pub target: String,
    pub pairs: usize,
    /// Last dimension needed to separate all pairs (1-based); `None` when
    /// there are no pairs or some pair is never separated.
    pub carried_at: Option<usize>,
    pub per_dim: Vec<DimCarry>,
    pub violation: Option<Violation>,
    /// All violation regions are rationally empty.
    pub symbolic_certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegalityReport {
    pub legal: bool,
    pub dependences: Vec<DependenceVerdict>,
}

impl LegalityReport {
    pub fn verdict(&self, dep: usize) -> Option<&DependenceVerdict> {
        self.dependences.iter().find(|v| v.dep == dep)
    }

    pub fn first_violation(&self) -> Option<(usize, &Violation)> {
        self.dependences.iter().find_map(|v| v.violation.as_ref().map(|w| (v.dep, w)))
    }
}

impl fmt::Display for LegalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "legal: {}", self.legal)?;
        for v in &self.dependences {
            let dims: Vec<String> = v.per_dim.iter().map(ToString::to_string).collect();
            write!(f, "  dependence {} {} -> {}: {} pairs, [{}]", v.dep, v.source, v.target, v.pairs, dims.join(", "))?;
            if let Some(d) = v.carried_at {
                write!(f, ", carried at dimension {d}")?;
            }
            if v.symbolic_certified {
                write!(f, ", certified")?;
            }
            writeln!(f)?;
            if let Some(w) = &v.violation {
                writeln!(f, "    violation: {w}")?;
            }
        }
        Ok(())
    }
}

fn eval_wide(e: &AffineExpr, iters: &[i64], params: &[i64]) -> i128 {
    e.coeffs
        .iter()
        .zip(iters.iter().chain(params))
        .map(|(&a, &x)| a as i128 * x as i128)
        .sum::<i128>()
        + e.constant as i128
}

/// `Theta_T(t) - Theta_S(s)` for one dimension as a row over the dependence
/// variables `(s, t, params)`, or `None` on overflow.
fn difference_row(src: &AffineExpr, tgt: &AffineExpr, ds: usize, dt: usize, np: usize) -> Option<(Vec<i64>, i64)> {
    let mut row = vec![0i64; ds + dt + np];
    for (r, &c) in row.iter_mut().zip(&src.coeffs[..ds]) {
        *r = c.checked_neg()?;
    }
    row[ds..ds + dt].copy_from_slice(&tgt.coeffs[..dt]);
    for q in 0..np {
        row[ds + dt + q] = tgt.coeffs[dt + q].checked_sub(src.coeffs[ds + q])?;
    }
    Some((row, tgt.constant.checked_sub(src.constant)?))
}

fn symbolic_certificate(dep: &Dependence, src: &[AffineExpr], tgt: &[AffineExpr], ds: usize, dt: usize, np: usize) -> bool {
    let Some(rows) = src
        .iter()
        .zip(tgt)
        .map(|(a, b)| difference_row(a, b, ds, dt, np))
        .collect::<Option<Vec<_>>>()
    else {
        return false;
    };
    let k = rows.len();
    for m in 0..=k {
        let mut region = dep.polyhedron.clone();
        for (row, c) in &rows[..m] {
            region.push(LinearConstraint::eq(row.clone(), *c)).expect("dependence width");
        }
        if m < k {
            // -(delta) - 1 >= 0
            let (row, c) = &rows[m];
            let Some(neg) = row.iter().map(|x| x.checked_neg()).collect::<Option<Vec<_>>>() else {
                return false;
            };
            let Some(constant) = c.checked_neg().and_then(|x| x.checked_sub(1)) else {
                return false;
            };
            region.push(LinearConstraint::ge(neg, constant)).expect("dependence width");
        }
        if !region.is_empty() {
            return false;
        }
    }
    true
}

/// Checks `schedule` against `deps` (whose polyhedra are over `scop`'s
/// statements) by enumeration at `opts.binding`.
pub fn check_legality(
    schedule: &Schedule,
    scop: &Scop,
    deps: &[Dependence],
    opts: &LegalityOptions,
) -> Result<LegalityReport, EvalError> {
    let rows = schedule.rows_for(scop)?;
    let params = opts.binding.values(scop)?;
    let np = params.len();
    let k = schedule.k();
    let mut verdicts = Vec::with_capacity(deps.len());
    for dep in deps {
        let si = scop
            .statement_index(&dep.source)
            .ok_or_else(|| crate::scop::ScopError::UnknownStatement(dep.source.clone()))?;
        let ti = scop
            .statement_index(&dep.target)
            .ok_or_else(|| crate::scop::ScopError::UnknownStatement(dep.target.clone()))?;
        let (ds, dt) = (scop.statements[si].depth(), scop.statements[ti].depth());
        let (src, tgt) = (rows[si], rows[ti]);

        let certified = opts.symbolic && symbolic_certificate(dep, src, tgt, ds, dt, np);

        let fixed: Vec<(usize, i64)> = params.iter().enumerate().map(|(q, &v)| (ds + dt + q, v)).collect();
        let points = bounded_lattice_points(&dep.polyhedron.fix(&fixed)?, opts.box_cap)?;

        let mut per_dim = vec![DimCarry::Done; k];
        let mut tied = vec![0usize; k];
        let mut reversed = vec![false; k];
        let mut strict = vec![false; k];
        let mut carried_at = 0;
        let mut violation = None;
        for p in &points {
            let (s, t) = (&p[..ds], &p[ds..ds + dt]);
            let ts: Vec<i128> = src.iter().map(|e| eval_wide(e, s, &params)).collect();
            let tt: Vec<i128> = tgt.iter().map(|e| eval_wide(e, t, &params)).collect();
            let mut separated = None;
            for d in 0..k {
                match tt[d].cmp(&ts[d]) {
                    std::cmp::Ordering::Equal => tied[d] += 1,
                    std::cmp::Ordering::Greater => {
                        strict[d] = true;
                        separated = Some(Ok(d));
                        break;
                    }
                    std::cmp::Ordering::Less => {
                        reversed[d] = true;
                        separated = Some(Err(d));
                        break;
                    }
                }
            }
            let bad = match separated {
                Some(Ok(d)) => {
                    carried_at = carried_at.max(d + 1);
                    None
                }
                Some(Err(d)) => Some(Some(d + 1)),
                None => Some(None),
            };
            if let (Some(dim), None) = (bad, &violation) {
                violation = Some(Violation {
                    source_iters: s.to_vec(),
                    target_iters: t.to_vec(),
                    params: params.clone(),
                    source_time: ts,
                    target_time: tt,
                    dim,
                });
            }
        }
        for d in 0..k {
            per_dim[d] = if reversed[d] {
                DimCarry::Violated
            } else if tied[d] > 0 {
                DimCarry::Weak
            } else if strict[d] {
                DimCarry::Strong
            } else {
                DimCarry::Done
            };
        }
        if certified && violation.is_some() {
            return Err(EvalError::TierDisagreement { dep: dep.id });
        }
        verdicts.push(DependenceVerdict {
            dep: dep.id,
            source: dep.source.clone(),
            target: dep.target.clone(),
            pairs: points.len(),
            carried_at: if violation.is_none() && carried_at > 0 { Some(carried_at) } else { None },
            per_dim,
            violation,
            symbolic_certified: certified,
        });
    }
    Ok(LegalityReport { legal: verdicts.iter().all(|v| v.violation.is_none()), dependences: verdicts })
}
