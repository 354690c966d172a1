//! The schedule-space exploration process.
//!
//! Given a schedule space, the agent picks one weight in `0..=N` per
//! generator slot, dimension by dimension: vertex weights first (only for
//! dimensions with two or more vertices), then ray weights. The filled
//! state is turned into one integer coefficient vector per dimension.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::farkas::ScheduleSpace;
use crate::geometry::{lcd_scale, GeneratorKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExplorationError {
    #[error("coeff_max must be at least 1")]
    BadConfig,
    #[error("schedule space has no legal point in dimension {0}")]
    InvalidSpace(usize),
    #[error("exploration state is terminal")]
    Terminal,
    #[error("exploration state is not terminal ({0} slots left)")]
    NotTerminal(usize),
    #[error("coefficient {value} is outside 0..={max}")]
    OutOfRange { value: u32, max: u32 },
    #[error("state has {found} slots, layout expects {expected}")]
    LayoutMismatch { expected: usize, found: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExplorationConfig {
    pub coeff_max: u32,
}

impl ExplorationConfig {
    pub const DEFAULT_COEFF_MAX: u32 = 3;

    pub fn new(coeff_max: u32) -> Result<Self, ExplorationError> {
        if coeff_max == 0 {
            return Err(ExplorationError::BadConfig);
        }
        Ok(ExplorationConfig { coeff_max })
    }
}

impl Default for ExplorationConfig {
    fn default() -> Self {
        ExplorationConfig { coeff_max: Self::DEFAULT_COEFF_MAX }
    }
}

/// One selectable weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    /// 1-based schedule dimension.
    pub dim: usize,
    pub kind: GeneratorKind,
    /// Index into the dimension's vertices or rays.
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionSlots {
    pub vertex_slots: usize,
    pub ray_slots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotLayout {
    pub dims: Vec<DimensionSlots>,
    pub slots: Vec<Slot>,
}

impl SlotLayout {
    pub fn for_space(space: &ScheduleSpace) -> Result<Self, ExplorationError> {
        if let Some(d) = space.first_empty_dimension() {
            return Err(ExplorationError::InvalidSpace(d));
        }
        let mut dims = Vec::with_capacity(space.k());
        let mut slots = Vec::new();
        for dim in &space.dims {
            let g = &dim.generators;
            let vertex_slots = if g.vertices.len() >= 2 { g.vertices.len() } else { 0 };
            slots.extend((0..vertex_slots).map(|index| Slot { dim: dim.index, kind: GeneratorKind::Vertex, index }));
            slots.extend((0..g.rays.len()).map(|index| Slot { dim: dim.index, kind: GeneratorKind::Ray, index }));
            dims.push(DimensionSlots { vertex_slots, ray_slots: g.rays.len() });
        }
        Ok(SlotLayout { dims, slots })
    }

    pub fn total_slots(&self) -> usize {
        self.slots.len()
    }
}

/// Filled weights followed by unfilled ones (`None`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExplorationState {
    pub values: Vec<Option<u32>>,
}

impl ExplorationState {
    pub fn reset(layout: &SlotLayout) -> Self {
        ExplorationState { values: vec![None; layout.total_slots()] }
    }

    /// Index of the first unfilled slot.
    pub fn cursor(&self) -> usize {
        self.values.iter().position(Option::is_none).unwrap_or(self.values.len())
    }

    pub fn remaining(&self) -> usize {
        self.values.len() - self.cursor()
    }

    pub fn is_terminal(&self) -> bool {
        self.cursor() == self.values.len()
    }

    pub fn step(&self, x: u32, cfg: &ExplorationConfig) -> Result<Self, ExplorationError> {
        if x > cfg.coeff_max {
            return Err(ExplorationError::OutOfRange { value: x, max: cfg.coeff_max });
        }
        let c = self.cursor();
        if c == self.values.len() {
            return Err(ExplorationError::Terminal);
        }
        let mut next = self.clone();
        next.values[c] = Some(x);
        Ok(next)
    }

    /// Unfilled slots become -1.
    pub fn encode(&self) -> Vec<i64> {
        self.values.iter().map(|v| v.map_or(-1, i64::from)).collect()
    }
}

impl fmt::Display for ExplorationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.map_or("_".to_string(), |x| x.to_string())).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// One integer coefficient vector per schedule dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SchedulePoint {
    pub dims: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Materialized {
    Point(SchedulePoint),
    /// Every vertex weight of the given (1-based) dimension is zero.
    Invalid { dim: usize },
}

/// Combines the chosen weights into integer schedule points.
///
/// Per dimension: the single vertex, or the weighted mean of the vertices,
/// plus the weighted sum of the rays, scaled by the least common
/// denominator of the result.
pub fn materialize_point(
    state: &ExplorationState,
    layout: &SlotLayout,
    space: &ScheduleSpace,
) -> Result<Materialized, ExplorationError> {
    if state.values.len() != layout.total_slots() {
        return Err(ExplorationError::LayoutMismatch { expected: layout.total_slots(), found: state.values.len() });
    }
    if !state.is_terminal() {
        return Err(ExplorationError::NotTerminal(state.remaining()));
    }
    let mut values = state.values.iter().map(|v| BigInt::from(v.expect("terminal")));
    let mut dims = Vec::with_capacity(space.k());
    for (dim, slots) in space.dims.iter().zip(&layout.dims) {
        let g = &dim.generators;
        let vertex_weights: Vec<BigInt> = if slots.vertex_slots == 0 {
            vec![BigInt::from(1); g.vertices.len()]
        } else {
            values.by_ref().take(slots.vertex_slots).collect()
        };
        let ray_weights: Vec<BigInt> = values.by_ref().take(slots.ray_slots).collect();
        match g.combine(&vertex_weights, &ray_weights) {
            Some(p) => dims.push(lcd_scale(&p)),
            None => return Ok(Materialized::Invalid { dim: dim.index }),
        }
    }
    Ok(Materialized::Point(SchedulePoint { dims }))
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};
    use std::sync::Arc;

    use super::*;
    use crate::farkas::{make_layout, DimensionSpace};
    use crate::geometry::{to_rationals, GeneratorSet};
    use crate::scop::parse_scop;

    fn space_of(gens: Vec<GeneratorSet>) -> ScheduleSpace {
        let scop = parse_scop(
            r#"{"name":"t","statements":[{"name":"S","iters":[],"position":[0],"domain":{"constraints":[]}}]}"#,
        )
        .unwrap();
        ScheduleSpace {
            dims: gens
                .into_iter()
                .enumerate()
                .map(|(i, g)| DimensionSpace {
                    index: i + 1,
                    strong_ids: BTreeSet::new(),
                    weak_ids: BTreeSet::new(),
                    generators: Arc::new(g),
                })
                .collect(),
            layout: make_layout(&scop),
            dependence_assignment: BTreeMap::new(),
        }
    }

    fn gens(vertices: &[&[i64]], rays: &[&[i64]]) -> GeneratorSet {
        let dim = vertices.first().map_or(0, |v| v.len());
        GeneratorSet {
            ambient_dim: dim,
            vertices: vertices.iter().map(|v| to_rationals(v)).collect(),
            rays: rays.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        }
    }

    fn fill(layout: &SlotLayout, xs: &[u32]) -> ExplorationState {
        let cfg = ExplorationConfig::new(3).unwrap();
        xs.iter().fold(ExplorationState::reset(layout), |s, &x| s.step(x, &cfg).unwrap())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn slot_counts() {
        let two = space_of(vec![gens(&[&[0, 0], &[1, 0]], &[])]);
        assert_eq!(SlotLayout::for_space(&two).unwrap().total_slots(), 2);
        let one = space_of(vec![gens(&[&[0]], &[&[1]])]);
        assert_eq!(SlotLayout::for_space(&one).unwrap().total_slots(), 1);
        let empty = space_of(vec![gens(&[&[0]], &[]), GeneratorSet::empty(1)]);
        assert_eq!(SlotLayout::for_space(&empty), Err(ExplorationError::InvalidSpace(2)));
    }

    #[test]
    fn stepping() {
        let space = space_of(vec![gens(&[&[0]], &[&[1], &[-1]])]);
        let layout = SlotLayout::for_space(&space).unwrap();
        let cfg = ExplorationConfig::new(3).unwrap();
        let s = ExplorationState::reset(&layout);
        assert!(!s.is_terminal());
        let s = s.step(0, &cfg).unwrap();
        assert_eq!(s.values, vec![Some(0), None]);
        assert_eq!(s.encode(), vec![0, -1]);
        assert_eq!(s.step(4, &cfg), Err(ExplorationError::OutOfRange { value: 4, max: 3 }));
        let s = s.step(3, &cfg).unwrap();
        assert!(s.is_terminal());
        assert_eq!(s.step(0, &cfg), Err(ExplorationError::Terminal));
    }

    #[test]
    fn single_vertex_plus_scaled_ray() {
        let e3 = [0, 0, 1, 0, 0, 0, 0];
        let space = space_of(vec![gens(&[&e3], &[&e3])]);
        let layout = SlotLayout::for_space(&space).unwrap();
        let out = materialize_point(&fill(&layout, &[2]), &layout, &space).unwrap();
        assert_eq!(out, Materialized::Point(SchedulePoint { dims: vec![ints(&[0, 0, 3, 0, 0, 0, 0])] }));
    }

    #[test]
    fn vertex_mean_is_lcd_scaled() {
        let space = space_of(vec![gens(&[&[0, 0], &[1, 0]], &[])]);
        let layout = SlotLayout::for_space(&space).unwrap();
        let out = materialize_point(&fill(&layout, &[1, 1]), &layout, &space).unwrap();
        assert_eq!(out, Materialized::Point(SchedulePoint { dims: vec![ints(&[1, 0])] }));
        let out = materialize_point(&fill(&layout, &[0, 0]), &layout, &space).unwrap();
        assert_eq!(out, Materialized::Invalid { dim: 1 });
    }

    #[test]
    fn zero_weights_at_origin() {
        let space = space_of(vec![gens(&[&[0, 0]], &[&[1, 0]]), gens(&[&[0, 0]], &[&[0, 1]])]);
        let layout = SlotLayout::for_space(&space).unwrap();
        let out = materialize_point(&fill(&layout, &[0, 0]), &layout, &space).unwrap();
        assert_eq!(out, Materialized::Point(SchedulePoint { dims: vec![ints(&[0, 0]), ints(&[0, 0])] }));
        let partial = ExplorationState::reset(&layout);
        assert_eq!(materialize_point(&partial, &layout, &space), Err(ExplorationError::NotTerminal(2)));
    }
}
