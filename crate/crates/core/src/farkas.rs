//! Legality polytopes of schedule coefficients via the affine form of
//! Farkas' lemma.
//!
//! For a dependence `e : S -> T` with polyhedron `P_e = {z : A z + b >= 0}`
//! and a carrying offset `delta` (1 strong, 0 weak), the affine function
//! `Theta_T(t) - Theta_S(s) - delta` is nonnegative on `P_e` iff it equals
//! `lambda_0 + sum_k lambda_k (A_k z + b_k)` for some `lambda >= 0`.
//! Matching coefficients of every variable and of the constant gives linear
//! equalities over `(schedule coefficients, lambda)`. The multipliers are
//! removed by running Chernikova in the extended space and dropping their
//! coordinates from the generators.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::geometry::{
    chernikova, minimize_generators, project_generators, GeneratorSet, HPolyhedron, LinearConstraint,
};
use crate::scop::{Dependence, Scop};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FarkasError {
    #[error("dependence {0} has an empty polyhedron")]
    EmptyDependence(usize),
    #[error("dependence {id} refers to unknown statement `{stmt}`")]
    UnknownStatement { id: usize, stmt: String },
    #[error("dependence {id} is not assigned to a dimension in 1..={k}")]
    Unassigned { id: usize, k: usize },
    #[error("assignment names dependence {0}, which does not exist")]
    UnknownDependence(usize),
    #[error("a schedule space needs at least one dimension")]
    NoDimensions,
}

/// Coefficients owned by one statement: one per iterator, one per parameter
/// and a constant, starting at `offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatementBlock {
    pub statement: String,
    pub iter_names: Vec<String>,
    pub offset: usize,
    pub iters: usize,
    pub params: usize,
}

impl StatementBlock {
    pub fn width(&self) -> usize {
        self.iters + self.params + 1
    }

    pub fn iter_index(&self, k: usize) -> usize {
        self.offset + k
    }

    pub fn param_index(&self, q: usize) -> usize {
        self.offset + self.iters + q
    }

    pub fn constant_index(&self) -> usize {
        self.offset + self.iters + self.params
    }
}

/// Coordinate convention of schedule-coefficient vectors, shared by every
/// schedule dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientLayout {
    pub params: Vec<String>,
    pub blocks: Vec<StatementBlock>,
    pub n: usize,
    pub names: Vec<String>,
}

impl CoefficientLayout {
    pub fn block(&self, statement: &str) -> Option<&StatementBlock> {
        self.blocks.iter().find(|b| b.statement == statement)
    }
}

pub fn make_layout(scop: &Scop) -> CoefficientLayout {
    let np = scop.params.len();
    let mut blocks = Vec::with_capacity(scop.statements.len());
    let mut names = Vec::new();
    let mut offset = 0;
    for s in &scop.statements {
        let b = StatementBlock {
            statement: s.name.clone(),
            iter_names: s.iters.clone(),
            offset,
            iters: s.depth(),
            params: np,
        };
        names.extend(s.iters.iter().map(|v| format!("{}.{v}", s.name)));
        names.extend(scop.params.iter().map(|p| format!("{}.{p}", s.name)));
        names.push(format!("{}.1", s.name));
        offset += b.width();
        blocks.push(b);
    }
    CoefficientLayout { params: scop.params.clone(), blocks, n: offset, names }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Carry {
    /// `Theta_S <= Theta_T`
    Weak,
    /// `Theta_S < Theta_T`
    Strong,
}

impl Carry {
    pub fn delta(self) -> i64 {
        match self {
            Carry::Weak => 0,
            Carry::Strong => 1,
        }
    }
}

/// Schedule coefficients followed by Farkas multipliers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasSystem {
    pub base: HPolyhedron,
    pub multiplier_count: usize,
    pub coeff_indices: Vec<usize>,
}

impl FarkasSystem {
    pub fn variable_count(&self) -> usize {
        self.base.dim()
    }
}

/// Rows of `P_e` as inequalities; equalities become two opposite rows so
/// that every multiplier is sign-constrained.
pub fn dependence_rows(dep: &Dependence) -> Vec<LinearConstraint> {
    dep.polyhedron
        .simplified()
        .constraints()
        .iter()
        .flat_map(LinearConstraint::as_inequalities)
        .collect()
}

struct Block {
    /// equalities over (coefficients ++ local multipliers), constant last
    equalities: Vec<(Vec<i64>, i64)>,
    multipliers: usize,
}

fn farkas_block(dep: &Dependence, carry: Carry, layout: &CoefficientLayout) -> Result<Block, FarkasError> {
    let unknown = |stmt: &str| FarkasError::UnknownStatement { id: dep.id, stmt: stmt.to_string() };
    let src = layout.block(&dep.source).ok_or_else(|| unknown(&dep.source))?;
    let tgt = layout.block(&dep.target).ok_or_else(|| unknown(&dep.target))?;
    if dep.polyhedron.is_empty() {
        return Err(FarkasError::EmptyDependence(dep.id));
    }
    let rows = dependence_rows(dep);
    let (ds, dt, np) = (src.iters, tgt.iters, src.params);
    let n = layout.n;
    let m = rows.len() + 1;
    let width = n + m;
    let mut equalities = Vec::with_capacity(ds + dt + np + 1);

    // lambda_0 sits at n, lambda_k at n + k.
    for var in 0..ds + dt + np {
        let mut eq = vec![0i64; width];
        if var < ds {
            eq[src.iter_index(var)] -= 1;
        } else if var < ds + dt {
            eq[tgt.iter_index(var - ds)] += 1;
        } else {
            let q = var - ds - dt;
            eq[tgt.param_index(q)] += 1;
            eq[src.param_index(q)] -= 1;
        }
        for (k, r) in rows.iter().enumerate() {
            eq[n + 1 + k] -= r.coeffs()[var];
        }
        equalities.push((eq, 0));
    }
    let mut eq = vec![0i64; width];
    eq[tgt.constant_index()] += 1;
    eq[src.constant_index()] -= 1;
    eq[n] -= 1;
    for (k, r) in rows.iter().enumerate() {
        eq[n + 1 + k] -= r.constant();
    }
    equalities.push((eq, -carry.delta()));
    Ok(Block { equalities, multipliers: m })
}

/// The Farkas system of one dependence at one carrying strength.
pub fn legality_system(dep: &Dependence, carry: Carry, layout: &CoefficientLayout) -> Result<FarkasSystem, FarkasError> {
    combined_system(&[(dep, carry)], layout)
}

/// Conjunction of several Farkas systems over shared schedule coefficients
/// and disjoint multiplier blocks.
pub fn combined_system(parts: &[(&Dependence, Carry)], layout: &CoefficientLayout) -> Result<FarkasSystem, FarkasError> {
    let n = layout.n;
    let blocks = parts
        .iter()
        .map(|(d, c)| farkas_block(d, *c, layout))
        .collect::<Result<Vec<_>, _>>()?;
    let total_mult: usize = blocks.iter().map(|b| b.multipliers).sum();
    let dim = n + total_mult;
    let mut names = layout.names.clone();
    let mut constraints = Vec::new();
    let mut offset = n;
    for (b, (dep, _)) in blocks.iter().zip(parts) {
        for k in 0..b.multipliers {
            names.push(format!("lambda{}_{k}", dep.id));
        }
        for (eq, constant) in &b.equalities {
            let mut coeffs = vec![0; dim];
            coeffs[..n].copy_from_slice(&eq[..n]);
            coeffs[offset..offset + b.multipliers].copy_from_slice(&eq[n..]);
            constraints.push(LinearConstraint::eq(coeffs, *constant));
        }
        for k in 0..b.multipliers {
            let mut coeffs = vec![0; dim];
            coeffs[offset + k] = 1;
            constraints.push(LinearConstraint::ge(coeffs, 0));
        }
        offset += b.multipliers;
    }
    let base = HPolyhedron::new(names, constraints).expect("consistent widths");
    Ok(FarkasSystem { base, multiplier_count: total_mult, coeff_indices: (0..n).collect() })
}

/// Generators of the coefficients that carry `strong` strongly and `weak`
/// weakly. With no dependences at all this is the whole coefficient space.
/// An empty result means no schedule dimension satisfies the request.
pub fn dimension_generators(
    strong: &[&Dependence],
    weak: &[&Dependence],
    layout: &CoefficientLayout,
) -> Result<GeneratorSet, FarkasError> {
    let parts: Vec<(&Dependence, Carry)> = strong
        .iter()
        .map(|d| (*d, Carry::Strong))
        .chain(weak.iter().map(|d| (*d, Carry::Weak)))
        .collect();
    let system = combined_system(&parts, layout)?;
    let extended = chernikova(&system.base);
    let projected = project_generators(&extended, &system.coeff_indices).expect("coefficient indices in range");
    Ok(minimize_generators(&projected))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionSpace {
    /// 1-based.
    pub index: usize,
    pub strong_ids: BTreeSet<usize>,
    pub weak_ids: BTreeSet<usize>,
    pub generators: Arc<GeneratorSet>,
}

/// Per-dimension generator sets of a multi-dimensional schedule space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleSpace {
    pub dims: Vec<DimensionSpace>,
    pub layout: CoefficientLayout,
    /// dependence id -> dimension carrying it strongly
    pub dependence_assignment: BTreeMap<usize, usize>,
}

impl ScheduleSpace {
    /// False when some dimension has no legal coefficients.
    pub fn is_valid(&self) -> bool {
        self.dims.iter().all(|d| !d.generators.is_empty())
    }

    pub fn first_empty_dimension(&self) -> Option<usize> {
        self.dims.iter().find(|d| d.generators.is_empty()).map(|d| d.index)
    }

    pub fn k(&self) -> usize {
        self.dims.len()
    }

    /// `(vertices, rays)` per dimension.
    pub fn generator_counts(&self) -> Vec<(usize, usize)> {
        self.dims.iter().map(|d| (d.generators.vertices.len(), d.generators.rays.len())).collect()
    }
}

type CacheKey = (Vec<usize>, Vec<usize>);

/// Builds schedule spaces for one SCoP, memoizing dimension polytopes by
/// their (strong, weak) dependence sets. Safe to share between threads.
#[derive(Debug)]
pub struct SpaceBuilder {
    layout: CoefficientLayout,
    deps: Vec<Dependence>,
    cache: RwLock<HashMap<CacheKey, Arc<GeneratorSet>>>,
}

impl SpaceBuilder {
    pub fn new(layout: CoefficientLayout, deps: Vec<Dependence>) -> Self {
        SpaceBuilder { layout, deps, cache: RwLock::new(HashMap::new()) }
    }

    pub fn for_scop(scop: &Scop) -> Self {
        Self::new(make_layout(scop), scop.dependences_or_computed())
    }

    pub fn layout(&self) -> &CoefficientLayout {
        &self.layout
    }

    pub fn dependences(&self) -> &[Dependence] {
        &self.deps
    }

    fn dep(&self, id: usize) -> Result<&Dependence, FarkasError> {
        self.deps.iter().find(|d| d.id == id).ok_or(FarkasError::UnknownDependence(id))
    }

    pub fn dimension(&self, strong: &BTreeSet<usize>, weak: &BTreeSet<usize>) -> Result<Arc<GeneratorSet>, FarkasError> {
        let key = (strong.iter().copied().collect::<Vec<_>>(), weak.iter().copied().collect::<Vec<_>>());
        if let Some(g) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(g));
        }
        let strong_deps = strong.iter().map(|&i| self.dep(i)).collect::<Result<Vec<_>, _>>()?;
        let weak_deps = weak.iter().map(|&i| self.dep(i)).collect::<Result<Vec<_>, _>>()?;
        let g = Arc::new(dimension_generators(&strong_deps, &weak_deps, &self.layout)?);
        log::debug!(
            "dimension polytope strong={:?} weak={:?}: {} vertices, {} rays",
            key.0,
            key.1,
            g.vertices.len(),
            g.rays.len()
        );
        self.cache.write().expect("cache lock").insert(key, Arc::clone(&g));
        Ok(g)
    }

    /// Dimension `d` carries `{e : assignment(e) = d}` strongly and
    /// `{e : assignment(e) > d}` weakly; dependences carried earlier impose
    /// nothing.
    pub fn build(&self, assignment: &BTreeMap<usize, usize>, k: usize) -> Result<ScheduleSpace, FarkasError> {
        if k == 0 {
            return Err(FarkasError::NoDimensions);
        }
        for &id in assignment.keys() {
            self.dep(id)?;
        }
        for dep in &self.deps {
            match assignment.get(&dep.id) {
                Some(&d) if (1..=k).contains(&d) => {}
                _ => return Err(FarkasError::Unassigned { id: dep.id, k }),
            }
        }
        let mut dims = Vec::with_capacity(k);
        for d in 1..=k {
            let strong: BTreeSet<usize> = assignment.iter().filter(|(_, &v)| v == d).map(|(&e, _)| e).collect();
            let weak: BTreeSet<usize> = assignment.iter().filter(|(_, &v)| v > d).map(|(&e, _)| e).collect();
            let generators = self.dimension(&strong, &weak)?;
            dims.push(DimensionSpace { index: d, strong_ids: strong, weak_ids: weak, generators });
        }
        Ok(ScheduleSpace { dims, layout: self.layout.clone(), dependence_assignment: assignment.clone() })
    }
}

pub fn build_schedule_space(
    assignment: &BTreeMap<usize, usize>,
    deps: &[Dependence],
    layout: &CoefficientLayout,
    k: usize,
) -> Result<ScheduleSpace, FarkasError> {
    SpaceBuilder::new(layout.clone(), deps.to_vec()).build(assignment, k)
}
