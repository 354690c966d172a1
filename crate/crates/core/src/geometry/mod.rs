//! Exact rational polyhedra.
//!
//! Constraint-form polyhedra ([`HPolyhedron`]) and their generator form
//! ([`GeneratorSet`]: vertices plus rays, lines already split into opposite
//! rays). Conversion goes through a double-description kernel working on
//! big integers, so nothing here ever touches floating point.

mod dd;
mod linalg;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use linalg::rank;
pub(crate) use dd::{double_description, Row};

pub type Rational = BigRational;

/// Default cap on the number of box points visited by
/// [`enumerate_lattice_points`].
pub const DEFAULT_BOX_CAP: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for ambient dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("enumeration box has {volume} points, above the cap of {cap}")]
    BoxTooLarge { volume: u128, cap: u128 },
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("integer overflow converting an exact value to i64")]
    Overflow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstraintKind {
    /// `coeffs . x + constant >= 0`
    #[serde(rename = "ge")]
    Ineq,
    /// `coeffs . x + constant = 0`
    #[serde(rename = "eq")]
    Eq,
}

/// One affine constraint, kept normalized: the gcd of all coefficients and
/// the constant is 1, and equalities have a positive leading entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearConstraint {
    coeffs: Vec<i64>,
    constant: i64,
    kind: ConstraintKind,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<i64>, constant: i64, kind: ConstraintKind) -> Self {
        let mut c = LinearConstraint { coeffs, constant, kind };
        c.normalize();
        c
    }

    pub fn ge(coeffs: Vec<i64>, constant: i64) -> Self {
        Self::new(coeffs, constant, ConstraintKind::Ineq)
    }

    pub fn eq(coeffs: Vec<i64>, constant: i64) -> Self {
        Self::new(coeffs, constant, ConstraintKind::Eq)
    }

    fn normalize(&mut self) {
        let g = self
            .coeffs
            .iter()
            .fold(self.constant.unsigned_abs(), |acc, &x| acc.gcd(&x.unsigned_abs()));
        if g > 1 {
            let g = g as i64;
            self.coeffs.iter_mut().for_each(|x| *x /= g);
            self.constant /= g;
        }
        if self.kind == ConstraintKind::Eq {
            let lead = self
                .coeffs
                .iter()
                .copied()
                .chain(std::iter::once(self.constant))
                .find(|&x| x != 0);
            if lead.is_some_and(|x| x < 0) {
                self.coeffs.iter_mut().for_each(|x| *x = -*x);
                self.constant = -self.constant;
            }
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn constant(&self) -> i64 {
        self.constant
    }

    pub fn kind(&self) -> ConstraintKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_equality(&self) -> bool {
        self.kind == ConstraintKind::Eq
    }

    /// `coeffs . x + constant` at an integer point.
    pub fn eval(&self, point: &[i64]) -> i128 {
        self.coeffs
            .iter()
            .zip(point)
            .map(|(&a, &x)| a as i128 * x as i128)
            .sum::<i128>()
            + self.constant as i128
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::from_integer(BigInt::from(self.constant));
        for (&a, x) in self.coeffs.iter().zip(point) {
            if a != 0 {
                acc += x * Rational::from_integer(BigInt::from(a));
            }
        }
        acc
    }

    fn holds(&self, value: &Rational) -> bool {
        match self.kind {
            ConstraintKind::Ineq => !value.is_negative(),
            ConstraintKind::Eq => value.is_zero(),
        }
    }

    pub fn satisfied_by(&self, point: &[i64]) -> bool {
        let v = self.eval(point);
        match self.kind {
            ConstraintKind::Ineq => v >= 0,
            ConstraintKind::Eq => v == 0,
        }
    }

    /// True when the constraint holds for every point (e.g. `0 >= -2`).
    pub fn is_trivially_true(&self) -> bool {
        self.coeffs.iter().all(|&x| x == 0)
            && match self.kind {
                ConstraintKind::Ineq => self.constant >= 0,
                ConstraintKind::Eq => self.constant == 0,
            }
    }

    /// The two inequalities equivalent to this constraint (one for an
    /// inequality).
    pub fn as_inequalities(&self) -> Vec<LinearConstraint> {
        match self.kind {
            ConstraintKind::Ineq => vec![self.clone()],
            ConstraintKind::Eq => vec![
                LinearConstraint::ge(self.coeffs.clone(), self.constant),
                LinearConstraint::ge(self.coeffs.iter().map(|x| -x).collect(), -self.constant),
            ],
        }
    }

    fn homogenized(&self) -> Row {
        let coeffs = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.constant))
            .map(|&x| BigInt::from(x))
            .collect();
        Row { coeffs, equality: self.is_equality() }
    }
}

/// A rational polyhedron in constraint form over named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolyhedron {
    variables: Vec<String>,
    constraints: Vec<LinearConstraint>,
}

impl HPolyhedron {
    pub fn new(
        variables: Vec<String>,
        constraints: Vec<LinearConstraint>,
    ) -> Result<Self, GeometryError> {
        for c in &constraints {
            if c.dim() != variables.len() {
                return Err(GeometryError::DimensionMismatch {
                    expected: variables.len(),
                    found: c.dim(),
                });
            }
        }
        Ok(HPolyhedron { variables, constraints })
    }

    pub fn universe(variables: Vec<String>) -> Self {
        HPolyhedron { variables, constraints: Vec::new() }
    }

    /// Unnamed variables `x0, x1, ...`.
    pub fn anonymous(dim: usize, constraints: Vec<LinearConstraint>) -> Result<Self, GeometryError> {
        Self::new((0..dim).map(|i| format!("x{i}")).collect(), constraints)
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn push(&mut self, c: LinearConstraint) -> Result<(), GeometryError> {
        if c.dim() != self.dim() {
            return Err(GeometryError::DimensionMismatch { expected: self.dim(), found: c.dim() });
        }
        self.constraints.push(c);
        Ok(())
    }

    pub fn with(mut self, c: LinearConstraint) -> Result<Self, GeometryError> {
        self.push(c)?;
        Ok(self)
    }

    /// Drops trivially true rows and repeated rows, keeping first occurrences.
    pub fn simplified(&self) -> Self {
        let mut seen = std::collections::HashSet::new();
        let constraints = self
            .constraints
            .iter()
            .filter(|c| !c.is_trivially_true())
            .filter(|c| seen.insert((*c).clone()))
            .cloned()
            .collect();
        HPolyhedron { variables: self.variables.clone(), constraints }
    }

    /// Row set in a canonical order; two polyhedra with equal keys have the
    /// same constraint set.
    pub fn canonical_key(&self) -> Vec<LinearConstraint> {
        let mut rows: Vec<_> = self.simplified().constraints;
        rows.sort();
        rows
    }

    /// Intersection with another polyhedron over the same variables.
    pub fn intersect(&self, other: &HPolyhedron) -> Result<Self, GeometryError> {
        if other.dim() != self.dim() {
            return Err(GeometryError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let mut out = self.clone();
        out.constraints.extend(other.constraints.iter().cloned());
        Ok(out)
    }

    /// Substitutes fixed integer values for some variables and removes them.
    pub fn fix(&self, assignments: &[(usize, i64)]) -> Result<Self, GeometryError> {
        for &(i, _) in assignments {
            if i >= self.dim() {
                return Err(GeometryError::IndexOutOfRange { index: i, dim: self.dim() });
            }
        }
        let fixed: std::collections::HashMap<usize, i64> = assignments.iter().copied().collect();
        let keep: Vec<usize> = (0..self.dim()).filter(|i| !fixed.contains_key(i)).collect();
        let mut constraints = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            let mut constant = c.constant as i128;
            for (&i, &v) in &fixed {
                constant += c.coeffs[i] as i128 * v as i128;
            }
            let constant = i64::try_from(constant).map_err(|_| GeometryError::Overflow)?;
            let coeffs = keep.iter().map(|&i| c.coeffs[i]).collect();
            constraints.push(LinearConstraint::new(coeffs, constant, c.kind));
        }
        Ok(HPolyhedron {
            variables: keep.iter().map(|&i| self.variables[i].clone()).collect(),
            constraints,
        })
    }

    pub fn contains(&self, point: &[Rational]) -> Result<bool, GeometryError> {
        self.check_dim(point.len())?;
        Ok(self.constraints.iter().all(|c| c.holds(&c.eval_rational(point))))
    }

    pub fn contains_integer(&self, point: &[i64]) -> Result<bool, GeometryError> {
        self.check_dim(point.len())?;
        Ok(self.constraints.iter().all(|c| c.satisfied_by(point)))
    }

    fn check_dim(&self, found: usize) -> Result<(), GeometryError> {
        if found != self.dim() {
            return Err(GeometryError::DimensionMismatch { expected: self.dim(), found });
        }
        Ok(())
    }

    /// Rational emptiness.
    pub fn is_empty(&self) -> bool {
        chernikova(self).is_empty()
    }

    /// Integer box enclosing every vertex. `Ok(None)` for the empty
    /// polyhedron, an error when the polyhedron has rays.
    pub fn bounding_box(&self) -> Result<Option<Vec<(i64, i64)>>, GeometryError> {
        let g = chernikova(self);
        if g.is_empty() {
            return Ok(None);
        }
        if !g.rays.is_empty() {
            return Err(GeometryError::Unbounded);
        }
        let mut bounds = Vec::with_capacity(self.dim());
        for d in 0..self.dim() {
            let lo = g.vertices.iter().map(|v| v[d].floor()).min().expect("nonempty");
            let hi = g.vertices.iter().map(|v| v[d].ceil()).max().expect("nonempty");
            let lo = lo.to_integer().to_i64().ok_or(GeometryError::Overflow)?;
            let hi = hi.to_integer().to_i64().ok_or(GeometryError::Overflow)?;
            bounds.push((lo, hi));
        }
        Ok(Some(bounds))
    }
}

impl fmt::Display for HPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{ [{}] : ", self.variables.join(", "))?;
        for (k, c) in self.constraints.iter().enumerate() {
            if k > 0 {
                write!(f, " and ")?;
            }
            let mut first = true;
            for (&a, name) in c.coeffs.iter().zip(&self.variables) {
                if a == 0 {
                    continue;
                }
                write_term(f, a, Some(name), first)?;
                first = false;
            }
            if c.constant != 0 || first {
                write_term(f, c.constant, None, first)?;
            }
            match c.kind {
                ConstraintKind::Ineq => write!(f, " >= 0")?,
                ConstraintKind::Eq => write!(f, " = 0")?,
            }
        }
        write!(f, " }}")
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, a: i64, name: Option<&String>, first: bool) -> fmt::Result {
    let sign = if a < 0 { "-" } else if first { "" } else { "+" };
    match (a.unsigned_abs(), name) {
        (1, Some(n)) => write!(f, "{sign}{n}"),
        (m, Some(n)) => write!(f, "{sign}{m}{n}"),
        (m, None) => write!(f, "{sign}{m}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Vertex,
    Ray,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator<'a> {
    Vertex(&'a [Rational]),
    Ray(&'a [BigInt]),
}

impl Generator<'_> {
    pub fn kind(&self) -> GeneratorKind {
        match self {
            Generator::Vertex(_) => GeneratorKind::Vertex,
            Generator::Ray(_) => GeneratorKind::Ray,
        }
    }
}

/// Vertices and rays of a polyhedron: its points are the convex
/// combinations of the vertices plus nonnegative combinations of the rays.
///
/// Canonical form: vertices before rays, each sorted lexicographically, no
/// duplicates, rays primitive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<Rational>>,
    pub rays: Vec<Vec<BigInt>>,
}

impl GeneratorSet {
    pub fn empty(ambient_dim: usize) -> Self {
        GeneratorSet { ambient_dim, vertices: Vec::new(), rays: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Generator<'_>> {
        self.vertices
            .iter()
            .map(|v| Generator::Vertex(v))
            .chain(self.rays.iter().map(|r| Generator::Ray(r)))
    }

    fn canonicalize(&mut self) {
        self.vertices.sort();
        self.vertices.dedup();
        self.rays.retain(|r| !linalg::is_zero_vec(r));
        for r in self.rays.iter_mut() {
            linalg::make_primitive(r);
        }
        self.rays.sort();
        self.rays.dedup();
        if self.vertices.is_empty() {
            self.rays.clear();
        }
    }

    /// Point `sum(l_i v_i) / sum(l_i) + sum(a_j r_j)`. `None` when the vertex
    /// weights sum to zero.
    pub fn combine(&self, vertex_weights: &[BigInt], ray_weights: &[BigInt]) -> Option<Vec<Rational>> {
        assert_eq!(vertex_weights.len(), self.vertices.len());
        assert_eq!(ray_weights.len(), self.rays.len());
        let total: BigInt = vertex_weights.iter().sum();
        if total.is_zero() {
            return None;
        }
        let mut p = vec![Rational::zero(); self.ambient_dim];
        for (w, v) in vertex_weights.iter().zip(&self.vertices) {
            if w.is_zero() {
                continue;
            }
            let w = Rational::new(w.clone(), total.clone());
            for (x, y) in p.iter_mut().zip(v) {
                *x += &w * y;
            }
        }
        for (w, r) in ray_weights.iter().zip(&self.rays) {
            if w.is_zero() {
                continue;
            }
            for (x, y) in p.iter_mut().zip(r) {
                *x += Rational::from_integer(w * y);
            }
        }
        Some(p)
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "(empty)");
        }
        for v in &self.vertices {
            let cs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            writeln!(f, "vertex ({})", cs.join(", "))?;
        }
        for r in &self.rays {
            let cs: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "ray    ({})", cs.join(", "))?;
        }
        Ok(())
    }
}

/// Generators of `h` (Chernikova / double description).
///
/// The lineality space, when present, is spanned by its reduced row echelon
/// basis; every other generator is reduced to vanish on the basis pivot
/// columns, and each basis line is emitted as two opposite rays.
pub fn chernikova(h: &HPolyhedron) -> GeneratorSet {
    let rows: Vec<Row> = h.constraints.iter().map(LinearConstraint::homogenized).collect();
    generators_from_homogeneous(h.dim(), rows)
}

/// `rows` act on `(x, t)` with `t` the homogenizing coordinate last.
pub(crate) fn generators_from_homogeneous(dim: usize, mut rows: Vec<Row>) -> GeneratorSet {
    let mut t_row = vec![BigInt::zero(); dim + 1];
    t_row[dim] = BigInt::one();
    rows.push(Row::ge(t_row));
    let cone = double_description(dim + 1, &rows);

    let basis = linalg::rref(&cone.lines, dim + 1);
    let mut out = GeneratorSet::empty(dim);
    for y in &cone.rays {
        let reduced = linalg::reduce_by_basis(y, &basis);
        let t = reduced[dim].clone();
        if t.is_positive() {
            out.vertices.push(reduced[..dim].iter().map(|x| x / &t).collect());
        } else if let Some(r) = nonzero_direction(&reduced[..dim]) {
            out.rays.push(r);
        }
    }
    if out.vertices.is_empty() {
        return GeneratorSet::empty(dim);
    }
    for (_, line) in &basis {
        debug_assert!(line[dim].is_zero());
        let l = linalg::primitive_direction(&line[..dim]);
        out.rays.push(l.iter().map(|x| -x).collect());
        out.rays.push(l);
    }
    out.canonicalize();
    out
}

fn nonzero_direction(v: &[Rational]) -> Option<Vec<BigInt>> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    Some(linalg::primitive_direction(v))
}

/// Restricts every generator to `keep` (in that order). Zero rays are
/// dropped and duplicates merged.
pub fn project_generators(g: &GeneratorSet, keep: &[usize]) -> Result<GeneratorSet, GeometryError> {
    if let Some(&bad) = keep.iter().find(|&&i| i >= g.ambient_dim) {
        return Err(GeometryError::IndexOutOfRange { index: bad, dim: g.ambient_dim });
    }
    let mut out = GeneratorSet {
        ambient_dim: keep.len(),
        vertices: g.vertices.iter().map(|v| keep.iter().map(|&i| v[i].clone()).collect()).collect(),
        rays: g.rays.iter().map(|r| keep.iter().map(|&i| r[i].clone()).collect()).collect(),
    };
    out.canonicalize();
    Ok(out)
}

/// Constraint rows (over `(x, t)`, homogenized) of the polyhedron generated
/// by `g`: equalities from the lineality of the polar cone, inequalities
/// from its extreme rays.
fn facets_of(g: &GeneratorSet) -> Vec<Row> {
    let n = g.ambient_dim;
    let mut polar_rows = Vec::with_capacity(g.vertices.len() + g.rays.len());
    for v in &g.vertices {
        let l = linalg::common_denominator(v);
        let mut row: Vec<BigInt> = v
            .iter()
            .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
            .collect();
        row.push(l);
        polar_rows.push(Row::ge(row));
    }
    for r in &g.rays {
        let mut row = r.clone();
        row.push(BigInt::zero());
        polar_rows.push(Row::ge(row));
    }
    let polar = double_description(n + 1, &polar_rows);
    polar
        .lines
        .into_iter()
        .map(Row::eq)
        .chain(polar.rays.into_iter().map(Row::ge))
        .collect()
}

/// Removes redundant generators: returns the canonical generators of the
/// same polyhedron.
pub fn minimize_generators(g: &GeneratorSet) -> GeneratorSet {
    if g.is_empty() {
        return g.clone();
    }
    generators_from_homogeneous(g.ambient_dim, facets_of(g))
}

/// Integer points of `h` inside `bounds`, in lexicographic order.
pub fn enumerate_lattice_points(
    h: &HPolyhedron,
    bounds: &[(i64, i64)],
) -> Result<Vec<Vec<i64>>, GeometryError> {
    enumerate_lattice_points_capped(h, bounds, DEFAULT_BOX_CAP)
}

pub fn enumerate_lattice_points_capped(
    h: &HPolyhedron,
    bounds: &[(i64, i64)],
    cap: u128,
) -> Result<Vec<Vec<i64>>, GeometryError> {
    if bounds.len() != h.dim() {
        return Err(GeometryError::DimensionMismatch { expected: h.dim(), found: bounds.len() });
    }
    if bounds.iter().any(|&(lo, hi)| lo > hi) {
        return Ok(Vec::new());
    }
    let volume = bounds.iter().try_fold(1u128, |acc, &(lo, hi)| {
        acc.checked_mul((hi as i128 - lo as i128 + 1) as u128)
    });
    match volume {
        Some(v) if v <= cap => {}
        Some(v) => return Err(GeometryError::BoxTooLarge { volume: v, cap }),
        None => return Err(GeometryError::BoxTooLarge { volume: u128::MAX, cap }),
    }
    let mut out = Vec::new();
    let mut point: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    if h.dim() == 0 {
        if h.contains_integer(&point)? {
            out.push(point);
        }
        return Ok(out);
    }
    loop {
        if h.constraints.iter().all(|c| c.satisfied_by(&point)) {
            out.push(point.clone());
        }
        // odometer, last coordinate fastest
        let mut d = h.dim();
        loop {
            if d == 0 {
                return Ok(out);
            }
            d -= 1;
            if point[d] < bounds[d].1 {
                point[d] += 1;
                break;
            }
            point[d] = bounds[d].0;
        }
    }
}

/// Every integer point of a bounded polyhedron, in lexicographic order,
/// using the vertex bounding box as the enumeration window.
pub fn bounded_lattice_points(h: &HPolyhedron, cap: u128) -> Result<Vec<Vec<i64>>, GeometryError> {
    match h.bounding_box()? {
        None => Ok(Vec::new()),
        Some(bounds) => enumerate_lattice_points_capped(h, &bounds, cap),
    }
}

/// Multiplies `v` by the least common denominator of its entries.
pub fn lcd_scale(v: &[Rational]) -> Vec<BigInt> {
    let l = linalg::common_denominator(v);
    v.iter()
        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
        .collect()
}

/// Convenience: integer vector to rationals.
pub fn to_rationals(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn unit_square() -> HPolyhedron {
        HPolyhedron::anonymous(
            2,
            vec![
                LinearConstraint::ge(vec![1, 0], 0),
                LinearConstraint::ge(vec![0, 1], 0),
                LinearConstraint::ge(vec![-1, 0], 1),
                LinearConstraint::ge(vec![0, -1], 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn constraints_are_normalized() {
        let c = LinearConstraint::ge(vec![2, 4], -6);
        assert_eq!(c.coeffs(), &[1, 2]);
        assert_eq!(c.constant(), -3);
        let e = LinearConstraint::eq(vec![-2, 2], 0);
        assert_eq!(e.coeffs(), &[1, -1]);
    }

    #[test]
    fn unit_square_vertices() {
        let g = chernikova(&unit_square());
        assert_eq!(
            g.vertices,
            vec![to_rationals(&[0, 0]), to_rationals(&[0, 1]), to_rationals(&[1, 0]), to_rationals(&[1, 1])]
        );
        assert!(g.rays.is_empty());
    }

    #[test]
    fn half_line() {
        let h = HPolyhedron::anonymous(1, vec![LinearConstraint::ge(vec![1], 0)]).unwrap();
        let g = chernikova(&h);
        assert_eq!(g.vertices, vec![to_rationals(&[0])]);
        assert_eq!(g.rays, vec![ints(&[1])]);
    }

    #[test]
    fn free_line_is_split() {
        let g = chernikova(&HPolyhedron::anonymous(1, vec![]).unwrap());
        assert_eq!(g.vertices, vec![to_rationals(&[0])]);
        assert_eq!(g.rays, vec![ints(&[-1]), ints(&[1])]);
    }

    #[test]
    fn infeasible_is_empty() {
        let h = HPolyhedron::anonymous(
            1,
            vec![LinearConstraint::ge(vec![1], -1), LinearConstraint::ge(vec![-1], 0)],
        )
        .unwrap();
        let g = chernikova(&h);
        assert!(g.is_empty());
        assert!(g.rays.is_empty());
        assert!(h.is_empty());
    }

    #[test]
    fn no_constraints_is_not_empty() {
        assert!(!HPolyhedron::anonymous(2, vec![]).unwrap().is_empty());
    }

    #[test]
    fn lineality_representatives_vanish_on_pivots() {
        // {x + y >= 1} in the plane: line (1,-1), vertex reduced to x = 0.
        let h = HPolyhedron::anonymous(2, vec![LinearConstraint::ge(vec![1, 1], -1)]).unwrap();
        let g = chernikova(&h);
        assert_eq!(g.vertices, vec![to_rationals(&[0, 1])]);
        assert_eq!(g.rays, vec![ints(&[-1, 1]), ints(&[0, 1]), ints(&[1, -1])]);
    }

    #[test]
    fn contains_examples() {
        let sq = unit_square();
        assert!(sq.contains(&[rational(1, 2), rational(1, 2)]).unwrap());
        assert!(!sq.contains(&to_rationals(&[2, 0])).unwrap());
        let half = HPolyhedron::anonymous(1, vec![LinearConstraint::ge(vec![1], 0)]).unwrap();
        assert!(half.contains(&to_rationals(&[0])).unwrap());
        assert_eq!(
            sq.contains(&to_rationals(&[0])),
            Err(GeometryError::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn projection_examples() {
        let g = chernikova(&unit_square());
        let p = project_generators(&g, &[0]).unwrap();
        assert_eq!(p.vertices, vec![to_rationals(&[0]), to_rationals(&[1])]);
        assert!(p.rays.is_empty());
        assert_eq!(project_generators(&g, &[0, 1]).unwrap(), g);

        let cone = GeneratorSet {
            ambient_dim: 2,
            vertices: vec![to_rationals(&[0, 0])],
            rays: vec![ints(&[0, 1])],
        };
        let p = project_generators(&cone, &[0]).unwrap();
        assert_eq!(p.vertices, vec![to_rationals(&[0])]);
        assert!(p.rays.is_empty());
        assert_eq!(
            project_generators(&cone, &[2]),
            Err(GeometryError::IndexOutOfRange { index: 2, dim: 2 })
        );
    }

    #[test]
    fn projection_matches_projected_h_form() {
        // Square projected to x equals the segment [0, 1].
        let g = chernikova(&unit_square());
        let p = minimize_generators(&project_generators(&g, &[0]).unwrap());
        let seg = HPolyhedron::anonymous(
            1,
            vec![LinearConstraint::ge(vec![1], 0), LinearConstraint::ge(vec![-1], 1)],
        )
        .unwrap();
        assert_eq!(p, chernikova(&seg));
    }

    #[test]
    fn minimize_drops_interior_generators() {
        let g = GeneratorSet {
            ambient_dim: 1,
            vertices: vec![to_rationals(&[0]), to_rationals(&[1]), to_rationals(&[2])],
            rays: vec![ints(&[1]), ints(&[2])],
        };
        let m = minimize_generators(&g);
        assert_eq!(m.vertices, vec![to_rationals(&[0])]);
        assert_eq!(m.rays, vec![ints(&[1])]);
    }

    #[test]
    fn lattice_points_of_square() {
        let pts = enumerate_lattice_points(&unit_square(), &[(-1, 2), (-1, 2)]).unwrap();
        assert_eq!(pts, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn lattice_points_of_empty() {
        let h = HPolyhedron::anonymous(
            1,
            vec![LinearConstraint::ge(vec![1], -1), LinearConstraint::ge(vec![-1], 0)],
        )
        .unwrap();
        assert!(enumerate_lattice_points(&h, &[(-5, 5)]).unwrap().is_empty());
    }

    #[test]
    fn box_cap_is_enforced() {
        let h = HPolyhedron::anonymous(2, vec![]).unwrap();
        let err = enumerate_lattice_points_capped(&h, &[(0, 99), (0, 99)], 1000).unwrap_err();
        assert_eq!(err, GeometryError::BoxTooLarge { volume: 10_000, cap: 1000 });
    }

    #[test]
    fn lcd_scale_examples() {
        assert_eq!(lcd_scale(&[rational(1, 2), rational(1, 3)]), ints(&[3, 2]));
        assert_eq!(lcd_scale(&to_rationals(&[0, 0, 3])), ints(&[0, 0, 3]));
        assert_eq!(lcd_scale(&[rational(5, 4), rational(1, 2), rational(1, 1)]), ints(&[5, 2, 4]));
    }

    #[test]
    fn fix_substitutes_values() {
        // 0 <= i <= N - 1 with N = 5
        let h = HPolyhedron::new(
            vec!["i".into(), "N".into()],
            vec![LinearConstraint::ge(vec![1, 0], 0), LinearConstraint::ge(vec![-1, 1], -1)],
        )
        .unwrap();
        let f = h.fix(&[(1, 5)]).unwrap();
        assert_eq!(f.variables(), &["i".to_string()]);
        assert_eq!(f.bounding_box().unwrap(), Some(vec![(0, 4)]));
    }

    #[test]
    fn display_is_readable() {
        let h = HPolyhedron::new(
            vec!["i".into(), "N".into()],
            vec![LinearConstraint::ge(vec![-1, 1], -1)],
        )
        .unwrap();
        assert_eq!(h.to_string(), "{ [i, N] : -i+N-1 >= 0 }");
    }
}
