//! Independent oracles shared by the integration tests: random SCoPs,
//! brute-force dependences and legality over concrete instances, and
//! brute-force vertex and ray enumeration.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use polygym::geometry::{ConstraintKind, HPolyhedron};
use polygym::schedule::Schedule;
use polygym::scop::{
    parse_scop, AccessFile, AccessKind, AffineFile, ConstraintFile, DomainFile, Scop, ScopFile, StatementFile,
};

pub fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))).expect("data file")
}

pub fn matvec() -> Scop {
    parse_scop(&data("matvec.json")).expect("matvec parses")
}

pub fn selfdep() -> Scop {
    parse_scop(&data("selfdep.json")).expect("selfdep parses")
}

// ---------------------------------------------------------------------------
// Random SCoPs

#[derive(Clone, Copy, Debug)]
enum Lower {
    Zero,
    Outer,
}

#[derive(Clone, Copy, Debug)]
enum Upper {
    /// `i <= param - 1 + c`
    Param(usize, i64),
    /// `i <= outer`
    Outer,
}

fn random_loop<R: Rng>(rng: &mut R, level: usize, np: usize) -> (Lower, Upper) {
    let lower = if level > 0 && rng.random_ratio(1, 3) { Lower::Outer } else { Lower::Zero };
    let upper = if level > 0 && matches!(lower, Lower::Zero) && rng.random_ratio(1, 4) {
        Upper::Outer
    } else {
        Upper::Param(rng.random_range(0..np), rng.random_range(-1..=1))
    };
    (lower, upper)
}

fn loop_rows(loops: &[(Lower, Upper)], np: usize) -> Vec<ConstraintFile> {
    let d = loops.len();
    let mut rows = Vec::new();
    for (k, &(lo, up)) in loops.iter().enumerate() {
        let mut c = vec![0; d + np];
        c[k] = 1;
        if let Lower::Outer = lo {
            c[k - 1] = -1;
        }
        rows.push(ConstraintFile { coeffs: c, constant: 0, kind: ConstraintKind::Ineq });
        let mut c = vec![0; d + np];
        c[k] = -1;
        let constant = match up {
            Upper::Param(p, off) => {
                c[d + p] = 1;
                off - 1
            }
            Upper::Outer => {
                c[k - 1] = 1;
                0
            }
        };
        rows.push(ConstraintFile { coeffs: c, constant, kind: ConstraintKind::Ineq });
    }
    rows
}

/// A random valid SCoP: one or two parameters, one or two statements of
/// depth at most two, accesses to a 1-d array `a` and a 2-d array `b`.
pub fn random_scop<R: Rng>(rng: &mut R) -> Scop {
    let np = rng.random_range(1..=2);
    let params: Vec<String> = ["N", "M"][..np].iter().map(|s| s.to_string()).collect();
    let ns = rng.random_range(1..=2);
    let depths: Vec<usize> = (0..ns).map(|_| rng.random_range(0..=2)).collect();
    let shared = if ns == 2 { rng.random_range(0..=depths[0].min(depths[1])) } else { 0 };
    let outer: Vec<(Lower, Upper)> = (0..shared).map(|l| random_loop(rng, l, np)).collect();
    let mut statements = Vec::new();
    for (s, &d) in depths.iter().enumerate() {
        let loops: Vec<(Lower, Upper)> =
            (0..d).map(|l| if l < shared { outer[l] } else { random_loop(rng, l, np) }).collect();
        let mut position = Vec::with_capacity(2 * d + 1);
        for l in 0..=d {
            position.push(if l == shared && s == 1 { 1 } else { 0 });
            if l < d {
                position.push(l as i64 + 1);
            }
        }
        let naccesses = rng.random_range(1..=3);
        let accesses = (0..naccesses)
            .map(|_| {
                let (array, dims) = if rng.random_bool(0.5) { ("a", 1) } else { ("b", 2) };
                let map = (0..dims)
                    .map(|_| {
                        let mut coeffs = vec![0; d + np];
                        if d > 0 && rng.random_ratio(3, 4) {
                            coeffs[rng.random_range(0..d)] = if rng.random_ratio(4, 5) { 1 } else { -1 };
                        }
                        AffineFile { coeffs, constant: rng.random_range(-1..=1) }
                    })
                    .collect();
                let kind = if rng.random_bool(0.5) { AccessKind::Write } else { AccessKind::Read };
                AccessFile { array: array.to_string(), kind, map }
            })
            .collect();
        statements.push(StatementFile {
            name: format!("S{s}"),
            iters: (0..d).map(|l| format!("i{l}")).collect(),
            position,
            domain: DomainFile { constraints: loop_rows(&loops, np) },
            accesses,
        });
    }
    ScopFile { name: "random".into(), params, statements, dependences: None }
        .into_scop()
        .expect("generated SCoP is valid")
}

// ---------------------------------------------------------------------------
// Brute-force instances and dependences

fn eval_row(coeffs: &[i64], constant: i64, point: &[i64]) -> i64 {
    coeffs.iter().zip(point).map(|(a, x)| a * x).sum::<i64>() + constant
}

/// Statement instances at the parameter values `params`, found by scanning
/// a box large enough for the generated SCoPs and matvec.
pub fn instances(scop: &Scop, stmt: usize, params: &[i64]) -> Vec<Vec<i64>> {
    let s = &scop.statements[stmt];
    let r = params.iter().copied().max().unwrap_or(0) + 3;
    let d = s.depth();
    let mut out = Vec::new();
    let mut point = vec![-r; d];
    loop {
        let full: Vec<i64> = point.iter().chain(params).copied().collect();
        let inside = s.domain.constraints().iter().all(|c| {
            let v = eval_row(c.coeffs(), c.constant(), &full);
            match c.kind() {
                ConstraintKind::Ineq => v >= 0,
                ConstraintKind::Eq => v == 0,
            }
        });
        if inside {
            out.push(point.clone());
        }
        let mut k = d;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if point[k] < r {
                point[k] += 1;
                break;
            }
            point[k] = -r;
        }
    }
}

/// Original execution order key: textual positions interleaved with the
/// iterator values.
fn original_time(scop: &Scop, stmt: usize, iters: &[i64]) -> Vec<i64> {
    let s = &scop.statements[stmt];
    let mut t = Vec::new();
    for (k, &p) in s.position.iter().enumerate() {
        t.push(if k % 2 == 0 { p } else { iters[k / 2] });
    }
    t
}

/// Strict lexicographic order over the common prefix. Distinct statements
/// always differ within it, and instances of one statement have equal
/// lengths.
fn before(a: &[i64], b: &[i64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x < y;
        }
    }
    false
}

pub type Pair = (String, Vec<i64>, String, Vec<i64>);

/// Every (source instance, target instance) pair that touches the same
/// array cell, with at least one write, source first in the original
/// order.
pub fn brute_force_dependences(scop: &Scop, params: &[i64]) -> BTreeSet<Pair> {
    let insts: Vec<Vec<Vec<i64>>> = (0..scop.statements.len()).map(|s| instances(scop, s, params)).collect();
    let mut out = BTreeSet::new();
    for (a, sa) in scop.statements.iter().enumerate() {
        for (b, sb) in scop.statements.iter().enumerate() {
            for ia in &insts[a] {
                let ta = original_time(scop, a, ia);
                let fa: Vec<i64> = ia.iter().chain(params).copied().collect();
                for ib in &insts[b] {
                    let tb = original_time(scop, b, ib);
                    if !before(&ta, &tb) {
                        continue;
                    }
                    let fb: Vec<i64> = ib.iter().chain(params).copied().collect();
                    let conflict = sa.accesses.iter().any(|x| {
                        sb.accesses.iter().any(|y| {
                            x.array == y.array
                                && (x.kind == AccessKind::Write || y.kind == AccessKind::Write)
                                && x.map.len() == y.map.len()
                                && x.map
                                    .iter()
                                    .zip(&y.map)
                                    .all(|(ex, ey)| ex.eval(&fa) == ey.eval(&fb))
                        })
                    });
                    if conflict {
                        out.insert((sa.name.clone(), ia.clone(), sb.name.clone(), ib.clone()));
                    }
                }
            }
        }
    }
    out
}

fn schedule_time(schedule: &Schedule, stmt: &str, full: &[i64]) -> Vec<i128> {
    let s = schedule.statement(stmt).expect("scheduled statement");
    s.dims
        .iter()
        .map(|e| {
            e.coeffs.iter().zip(full).map(|(&a, &x)| a as i128 * x as i128).sum::<i128>() + e.constant as i128
        })
        .collect()
}

/// Checks that `schedule` executes every pair of `pairs` in order. Returns
/// the first offending pair.
pub fn check_pairs(schedule: &Schedule, pairs: &BTreeSet<Pair>, params: &[i64]) -> Result<(), Pair> {
    for p in pairs {
        let (ts, tt) = pair_times(schedule, p, params);
        if !first_strict(&ts, &tt).is_some_and(|(_, less)| less) {
            return Err(p.clone());
        }
    }
    Ok(())
}

/// First dimension (1-based) where the timestamps differ, and whether the
/// first one is smaller there.
pub fn first_strict(a: &[i128], b: &[i128]) -> Option<(usize, bool)> {
    a.iter().zip(b).enumerate().find(|(_, (x, y))| x != y).map(|(k, (x, y))| (k + 1, x < y))
}

pub fn pair_times(schedule: &Schedule, p: &Pair, params: &[i64]) -> (Vec<i128>, Vec<i128>) {
    let fs: Vec<i64> = p.1.iter().chain(params).copied().collect();
    let ft: Vec<i64> = p.3.iter().chain(params).copied().collect();
    (schedule_time(schedule, &p.0, &fs), schedule_time(schedule, &p.2, &ft))
}

// ---------------------------------------------------------------------------
// Brute-force generators

pub type Q = BigRational;

fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

/// Inequality rows `a.x + c >= 0`, equalities split in two.
pub fn inequality_rows(h: &HPolyhedron) -> Vec<(Vec<i64>, i64)> {
    let mut rows = Vec::new();
    for c in h.constraints() {
        rows.push((c.coeffs().to_vec(), c.constant()));
        if c.kind() == ConstraintKind::Eq {
            rows.push((c.coeffs().iter().map(|x| -x).collect(), -c.constant()));
        }
    }
    rows
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<Q>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn matrix_rank(rows: &[Vec<i64>], d: usize) -> usize {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    rref(&mut m, d).len()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

fn satisfies(rows: &[(Vec<i64>, i64)], x: &[Q]) -> bool {
    rows.iter().all(|(a, c)| {
        let v: Q = a.iter().zip(x).map(|(&ai, xi)| q(ai) * xi).sum::<Q>() + q(*c);
        !v.is_negative()
    })
}

/// Vertices of a pointed polyhedron: feasible unique solutions of every
/// choice of `d` tight rows.
pub fn brute_force_vertices(h: &HPolyhedron) -> BTreeSet<Vec<Q>> {
    let d = h.dim();
    let rows = inequality_rows(h);
    let mut out = BTreeSet::new();
    if d == 0 {
        if rows.iter().all(|(_, c)| *c >= 0) {
            out.insert(Vec::new());
        }
        return out;
    }
    for sub in subsets(rows.len(), d) {
        let mut m: Vec<Vec<Q>> = sub
            .iter()
            .map(|&i| rows[i].0.iter().map(|&x| q(x)).chain(std::iter::once(q(-rows[i].1))).collect())
            .collect();
        let piv = rref(&mut m, d);
        if piv.len() < d {
            continue;
        }
        let x: Vec<Q> = (0..d).map(|c| m[c][d].clone()).collect();
        if satisfies(&rows, &x) {
            out.insert(x);
        }
    }
    out
}

fn primitive(v: Vec<Q>) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| x / &g).collect()
}

/// Extreme rays of the recession cone of a pointed polyhedron: directions
/// spanned by `d - 1` tight homogeneous rows, kept when the direction or
/// its negation stays in the cone.
pub fn brute_force_rays(h: &HPolyhedron) -> BTreeSet<Vec<BigInt>> {
    let d = h.dim();
    let cone: Vec<(Vec<i64>, i64)> = inequality_rows(h).into_iter().map(|(a, _)| (a, 0)).collect();
    let mut out = BTreeSet::new();
    if d == 0 {
        return out;
    }
    for sub in subsets(cone.len(), d - 1) {
        let mut m: Vec<Vec<Q>> = sub.iter().map(|&i| cone[i].0.iter().map(|&x| q(x)).collect()).collect();
        let piv = rref(&mut m, d);
        if piv.len() != d - 1 {
            continue;
        }
        let free = (0..d).find(|c| !piv.contains(c)).expect("one free column");
        let mut r = vec![Q::zero(); d];
        r[free] = Q::one();
        for (row, &p) in piv.iter().enumerate() {
            r[p] = -m[row][free].clone();
        }
        for dir in [r.clone(), r.iter().map(|x| -x).collect::<Vec<Q>>()] {
            if satisfies(&cone, &dir) {
                out.insert(primitive(dir));
            }
        }
    }
    out
}
