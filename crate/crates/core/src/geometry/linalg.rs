//! Small exact linear-algebra helpers shared by the geometry kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Divides `v` by the gcd of its entries. The sign is preserved.
pub(crate) fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        *x /= &g;
    }
}

/// `alpha * u - beta * w`, reduced to a primitive vector.
pub(crate) fn combine(alpha: &BigInt, u: &[BigInt], beta: &BigInt, w: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = u
        .iter()
        .zip(w)
        .map(|(x, y)| alpha * x - beta * y)
        .collect();
    make_primitive(&mut out);
    out
}

pub(crate) fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Least common multiple of the denominators of `v` (1 for an empty vector).
pub(crate) fn common_denominator(v: &[BigRational]) -> BigInt {
    v.iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector by a positive factor so that it becomes a
/// primitive integer vector with the same direction.
pub(crate) fn primitive_direction(v: &[BigRational]) -> Vec<BigInt> {
    let l = common_denominator(v);
    let mut out: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    make_primitive(&mut out);
    out
}

/// Reduced row echelon form of the span of `rows`. Returns `(pivot column,
/// row)` pairs with a 1 in the pivot column and zeros in all other pivot
/// columns. Rows of zero are discarded.
pub(crate) fn rref(rows: &[Vec<BigInt>], ncols: usize) -> Vec<(usize, Vec<BigRational>)> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(sel) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, sel);
        let inv = m[rank][col].recip();
        for x in m[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    m.truncate(rank);
    pivots.into_iter().zip(m).collect()
}

/// Rank of an integer matrix.
pub fn rank(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    rref(rows, ncols).len()
}

/// Subtracts the lineality components of `v` so that it vanishes on every
/// pivot column of `basis` (as produced by [`rref`]).
pub(crate) fn reduce_by_basis(v: &[BigInt], basis: &[(usize, Vec<BigRational>)]) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = v.iter().cloned().map(BigRational::from_integer).collect();
    for (p, row) in basis {
        if out[*p].is_zero() {
            continue;
        }
        let f = out[*p].clone();
        for (x, b) in out.iter_mut().zip(row) {
            *x -= &f * b;
        }
    }
    out
}
