//! A cache-locality proxy cost for schedules.
//!
//! Instances are executed in lexicographic timestamp order (ties broken by
//! statement order, then iteration vector) and their accesses replayed in
//! declaration order. Each array is laid out row-major over the index range
//! actually touched, aligned to a cache line, with fixed-size elements. The
//! cost is `sum log2(1 + r)` over accesses, where `r` is the number of
//! distinct lines touched since the previous access to the same line (the
//! total footprint for a first access). Logarithms are computed in fixed
//! point so that the cost is an exact rational.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use super::EvalError;
use crate::geometry::{bounded_lattice_points, Rational, DEFAULT_BOX_CAP};
use crate::schedule::Schedule;
use crate::scop::{ParamBinding, Scop};

pub const LOG2_FRACTION_BITS: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CostConfig {
    pub line_bytes: u64,
    pub element_bytes: u64,
    pub max_instances: usize,
}

impl Default for CostConfig {
    fn default() -> Self {
        CostConfig { line_bytes: 64, element_bytes: 8, max_instances: 1_000_000 }
    }
}

/// `floor(log2(x) * 2^16)` for `x >= 1`, by repeated squaring of the
/// normalized mantissa.
pub fn log2_fixed(x: u64) -> u64 {
    assert!(x >= 1, "log2 of zero");
    let int = 63 - u64::from(x.leading_zeros());
    // mantissa in [1, 2) with 62 fractional bits
    const ONE: u128 = 1 << 62;
    let mut m: u128 = if int >= 62 { (x as u128) >> (int - 62) } else { (x as u128) << (62 - int) };
    let mut frac = 0u64;
    for _ in 0..LOG2_FRACTION_BITS {
        m = (m * m) >> 62;
        frac <<= 1;
        if m >= 2 * ONE {
            m >>= 1;
            frac |= 1;
        }
    }
    (int << LOG2_FRACTION_BITS) | frac
}

struct Fenwick(Vec<i64>);

impl Fenwick {
    fn add(&mut self, mut i: usize, v: i64) {
        i += 1;
        while i < self.0.len() {
            self.0[i] += v;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over `0..i`.
    fn prefix(&self, mut i: usize) -> i64 {
        let mut s = 0;
        while i > 0 {
            s += self.0[i];
            i -= i & i.wrapping_neg();
        }
        s
    }
}

/// Proxy cost of executing `scop` under `schedule` at `binding`. Lower is
/// better; the value is a multiple of `2^-16`.
pub fn proxy_cost(schedule: &Schedule, scop: &Scop, binding: &ParamBinding, cfg: &CostConfig) -> Result<Rational, EvalError> {
    let rows = schedule.rows_for(scop)?;
    let params = binding.values(scop)?;

    // (timestamp, statement, iterations)
    let mut instances: Vec<(Vec<i128>, usize, Vec<i64>)> = Vec::new();
    for (si, s) in scop.statements.iter().enumerate() {
        let fixed: Vec<(usize, i64)> = params.iter().enumerate().map(|(q, &v)| (s.depth() + q, v)).collect();
        let points = bounded_lattice_points(&s.domain.fix(&fixed)?, DEFAULT_BOX_CAP)?;
        if instances.len() + points.len() > cfg.max_instances {
            return Err(EvalError::TooManyInstances { count: instances.len() + points.len(), cap: cfg.max_instances });
        }
        for p in points {
            let full: Vec<i64> = p.iter().chain(&params).copied().collect();
            let t = rows[si]
                .iter()
                .map(|e| {
                    e.coeffs.iter().zip(&full).map(|(&a, &x)| a as i128 * x as i128).sum::<i128>() + e.constant as i128
                })
                .collect();
            instances.push((t, si, p));
        }
    }
    instances.sort();

    let eval_index = |coeffs: &[i64], constant: i64, iters: &[i64]| -> Result<i64, EvalError> {
        let v = coeffs.iter().zip(iters.iter().chain(&params)).map(|(&a, &x)| a as i128 * x as i128).sum::<i128>()
            + constant as i128;
        i64::try_from(v).map_err(|_| EvalError::ArithmeticOverflow)
    };

    // Index ranges per array.
    let mut ranges: BTreeMap<&str, Vec<(i64, i64)>> = BTreeMap::new();
    let mut trace: Vec<(&str, Vec<i64>)> = Vec::new();
    for (_, si, iters) in &instances {
        for a in &scop.statements[*si].accesses {
            let idx = a
                .map
                .iter()
                .map(|e| eval_index(&e.coeffs, e.constant, iters))
                .collect::<Result<Vec<_>, _>>()?;
            let r = ranges.entry(a.array.as_str()).or_insert_with(|| idx.iter().map(|&x| (x, x)).collect());
            for (b, &x) in r.iter_mut().zip(&idx) {
                b.0 = b.0.min(x);
                b.1 = b.1.max(x);
            }
            trace.push((a.array.as_str(), idx));
        }
    }

    // Line-aligned base address of each array, in name order.
    let mut base: HashMap<&str, u64> = HashMap::new();
    let mut next_line = 0u64;
    for (name, r) in &ranges {
        base.insert(name, next_line);
        let elements: u64 = r.iter().map(|&(lo, hi)| (hi - lo + 1) as u64).product();
        next_line += (elements * cfg.element_bytes).div_ceil(cfg.line_bytes);
    }
    let line_of = |array: &str, idx: &[i64]| -> u64 {
        let r = &ranges[array];
        let mut linear = 0u64;
        for (&x, &(lo, hi)) in idx.iter().zip(r) {
            linear = linear * (hi - lo + 1) as u64 + (x - lo) as u64;
        }
        base[array] + linear * cfg.element_bytes / cfg.line_bytes
    };

    let lines: Vec<u64> = trace.iter().map(|(a, idx)| line_of(a, idx)).collect();
    let footprint = {
        let mut l = lines.clone();
        l.sort_unstable();
        l.dedup();
        l.len() as u64
    };
    let mut last: HashMap<u64, usize> = HashMap::new();
    let mut marks = Fenwick(vec![0; lines.len() + 1]);
    let mut total: u128 = 0;
    for (now, &line) in lines.iter().enumerate() {
        let distance = match last.get(&line) {
            None => footprint,
            Some(&prev) => {
                let d = marks.prefix(now) - marks.prefix(prev + 1);
                marks.add(prev, -1);
                d as u64
            }
        };
        marks.add(now, 1);
        last.insert(line, now);
        total += u128::from(log2_fixed(1 + distance));
    }
    Ok(Rational::new(BigInt::from(total), BigInt::from(1u64 << LOG2_FRACTION_BITS)))
}
