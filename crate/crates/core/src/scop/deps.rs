//! Memory-based dependence analysis.
//!
//! Every ordered pair of accesses to the same array with at least one write
//! yields, for each way the source instance can precede the target instance
//! in the original `2d+1` order, one convex dependence polyhedron
//! `{(s, t, p) : s in D_src, t in D_tgt, maps equal, s before t}`.

use std::collections::HashSet;

use super::{lift, AccessKind, Dependence, Scop, Statement};
use crate::geometry::{HPolyhedron, LinearConstraint};

/// Level (number of shared loops) at which `a` is textually before `b`,
/// `Some(Err(level))` when `b` is before `a`, `None` when the positions
/// never separate.
pub(super) fn textual_order(a: &Statement, b: &Statement) -> Option<Result<usize, usize>> {
    let common = a.position.len().min(b.position.len());
    for idx in (0..common).step_by(2) {
        let level = idx / 2;
        match a.position[idx].cmp(&b.position[idx]) {
            std::cmp::Ordering::Less => return Some(Ok(level)),
            std::cmp::Ordering::Greater => return Some(Err(level)),
            std::cmp::Ordering::Equal => {}
        }
    }
    None
}

/// Precedence disjuncts over `(src iters, tgt iters, params)`: pairs of
/// (depth, rows). Depth `m <= shared loops` is carried by loop `m`; the
/// loop-independent disjunct has depth `shared + 1`.
fn precedence_disjuncts(src: &Statement, tgt: &Statement, np: usize) -> Vec<(usize, Vec<LinearConstraint>)> {
    let ds = src.depth();
    let total = ds + tgt.depth() + np;
    let common = src.position.len().min(tgt.position.len());
    let mut eqs: Vec<LinearConstraint> = Vec::new();
    let mut out = Vec::new();
    for idx in 0..common {
        if idx % 2 == 0 {
            match src.position[idx].cmp(&tgt.position[idx]) {
                std::cmp::Ordering::Less => {
                    out.push((idx / 2 + 1, eqs.clone()));
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        } else {
            let m = idx.div_ceil(2);
            let (s, t) = (m - 1, ds + m - 1);
            let mut strict = vec![0; total];
            strict[t] = 1;
            strict[s] = -1;
            let mut rows = eqs.clone();
            rows.push(LinearConstraint::ge(strict, -1));
            out.push((m, rows));
            let mut eq = vec![0; total];
            eq[s] = 1;
            eq[t] = -1;
            eqs.push(LinearConstraint::eq(eq, 0));
        }
    }
    out
}

struct Candidate {
    source: String,
    target: String,
    depth: usize,
    accesses: (usize, usize),
    polyhedron: HPolyhedron,
}

/// Computes the memory-based dependences of `scop`, sorted by
/// (source name, target name, depth, access pair) and numbered from 1.
pub fn compute_memory_dependences(scop: &Scop) -> Vec<Dependence> {
    let np = scop.params.len();
    let mut candidates = Vec::new();
    for src in &scop.statements {
        for tgt in &scop.statements {
            let ds = src.depth();
            let total = ds + tgt.depth() + np;
            let vars: Vec<String> = src
                .iters
                .iter()
                .map(|v| format!("{}_{v}", src.name))
                .chain(tgt.iters.iter().map(|v| format!("{}'_{v}", tgt.name)))
                .chain(scop.params.iter().cloned())
                .collect();
            let mut base = HPolyhedron::universe(vars);
            for c in src.domain.constraints() {
                base.push(lift(c, ds, 0, ds + tgt.depth(), total)).expect("lifted dims");
            }
            for c in tgt.domain.constraints() {
                base.push(lift(c, tgt.depth(), ds, ds + tgt.depth(), total)).expect("lifted dims");
            }
            let disjuncts = precedence_disjuncts(src, tgt, np);
            for (x, ax) in src.accesses.iter().enumerate() {
                for (y, ay) in tgt.accesses.iter().enumerate() {
                    if ax.array != ay.array
                        || (ax.kind == AccessKind::Read && ay.kind == AccessKind::Read)
                        || ax.map.len() != ay.map.len()
                    {
                        continue;
                    }
                    let mut with_maps = base.clone();
                    for (ex, ey) in ax.map.iter().zip(&ay.map) {
                        let mut coeffs = vec![0; total];
                        for (k, &a) in ex.coeffs.iter().enumerate() {
                            let at = if k < ds { k } else { ds + tgt.depth() + (k - ds) };
                            coeffs[at] += a;
                        }
                        for (k, &a) in ey.coeffs.iter().enumerate() {
                            let at = if k < tgt.depth() { ds + k } else { ds + tgt.depth() + (k - tgt.depth()) };
                            coeffs[at] -= a;
                        }
                        with_maps
                            .push(LinearConstraint::eq(coeffs, ex.constant - ey.constant))
                            .expect("map dims");
                    }
                    for (depth, rows) in &disjuncts {
                        let mut p = with_maps.clone();
                        for r in rows {
                            p.push(r.clone()).expect("precedence dims");
                        }
                        let p = p.simplified();
                        if p.is_empty() {
                            continue;
                        }
                        candidates.push(Candidate {
                            source: src.name.clone(),
                            target: tgt.name.clone(),
                            depth: *depth,
                            accesses: (x, y),
                            polyhedron: p,
                        });
                    }
                }
            }
        }
    }
    candidates.sort_by(|a, b| {
        (&a.source, &a.target, a.depth, a.accesses).cmp(&(&b.source, &b.target, b.depth, b.accesses))
    });
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in candidates {
        if !seen.insert((c.source.clone(), c.target.clone(), c.polyhedron.canonical_key())) {
            continue;
        }
        out.push(Dependence {
            id: out.len() + 1,
            source: c.source,
            target: c.target,
            polyhedron: c.polyhedron,
        });
    }
    out
}
