//! Incremental double description (Chernikova) on homogeneous cones.
//!
//! The cone is `{y : a_k . y >= 0 (k inequality), a_k . y = 0 (k equality)}`.
//! Processing starts from the whole space (every unit vector a line) and
//! intersects one constraint at a time. While some line is not orthogonal to
//! the constraint, that line is used as a pivot and the step costs nothing;
//! afterwards the classical ray split with a combinatorial adjacency test
//! takes over.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{combine, dot, make_primitive};

#[derive(Clone, Debug)]
pub(crate) struct Row {
    pub coeffs: Vec<BigInt>,
    pub equality: bool,
}

impl Row {
    pub fn ge(coeffs: Vec<BigInt>) -> Self {
        Row { coeffs, equality: false }
    }

    pub fn eq(coeffs: Vec<BigInt>) -> Self {
        Row { coeffs, equality: true }
    }
}

/// Lineality basis plus extreme rays (modulo the lineality space).
#[derive(Clone, Debug, Default)]
pub(crate) struct ConeGenerators {
    pub lines: Vec<Vec<BigInt>>,
    pub rays: Vec<Vec<BigInt>>,
}

struct Ray {
    v: Vec<BigInt>,
    zeros: FixedBitSet,
}

pub(crate) fn double_description(dim: usize, rows: &[Row]) -> ConeGenerators {
    let nrows = rows.len();
    let mut lines: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut processed = FixedBitSet::with_capacity(nrows);

    let order = (0..nrows)
        .filter(|&k| rows[k].equality)
        .chain((0..nrows).filter(|&k| !rows[k].equality));

    for k in order {
        let row = &rows[k];
        debug_assert_eq!(row.coeffs.len(), dim);
        let a = &row.coeffs;

        if let Some(p) = lines.iter().position(|l| !dot(a, l).is_zero()) {
            let mut pivot = lines.remove(p);
            let mut ap = dot(a, &pivot);
            if ap.is_negative() {
                pivot.iter_mut().for_each(|x| *x = -&*x);
                ap = -ap;
            }
            for l in lines.iter_mut() {
                let al = dot(a, l);
                if !al.is_zero() {
                    *l = combine(&ap, l, &al, &pivot);
                }
            }
            for r in rays.iter_mut() {
                let ar = dot(a, &r.v);
                if !ar.is_zero() {
                    r.v = combine(&ap, &r.v, &ar, &pivot);
                }
                r.zeros.insert(k);
            }
            if !row.equality {
                make_primitive(&mut pivot);
                rays.push(Ray { v: pivot, zeros: processed.clone() });
            }
            processed.insert(k);
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();

        // An adjacent pair spans a 2-face, so it shares at least
        // dim - #lines - 2 tight constraints.
        let threshold = dim.saturating_sub(lines.len() + 2);
        let mut created = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[n].zeros);
                if common.count_ones(..) < threshold {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(i, r)| i != p && i != n && common.is_subset(&r.zeros));
                if blocked {
                    continue;
                }
                // values[p] > 0 > values[n]: the combination is tight on row k.
                let v = combine(&values[p], &rays[n].v, &values[n], &rays[p].v);
                common.insert(k);
                created.push(Ray { v, zeros: common });
            }
        }

        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (r, val) in rays.into_iter().zip(&values) {
            if val.is_zero() {
                let mut r = r;
                r.zeros.insert(k);
                kept.push(r);
            } else if val.is_positive() && !row.equality {
                kept.push(r);
            }
        }
        kept.extend(created);
        rays = kept;
        processed.insert(k);
    }

    ConeGenerators {
        lines,
        rays: rays.into_iter().map(|r| r.v).collect(),
    }
}
