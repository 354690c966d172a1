//! Builds the matvec space for the assignment S -> T at dimension 4 and
//! T -> T at dimension 3, fills the coefficient slots from a list of
//! weights, and prints the resulting schedule.
//!
//! Run with `cargo run --example exploration_trace [weight ...]`. Missing
//! weights are taken as 0.

use std::collections::BTreeMap;

use polygym::eval::{export_schedule, schedule_from_points};
use polygym::exploration::{materialize_point, ExplorationConfig, ExplorationState, Materialized, SlotLayout};
use polygym::farkas::SpaceBuilder;
use polygym::scop::parse_scop;

fn main() -> anyhow::Result<()> {
    let weights: Vec<u32> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let scop = parse_scop(include_str!("../data/matvec.json"))?;
    let builder = SpaceBuilder::for_scop(&scop);
    let space = builder.build(&BTreeMap::from([(1, 4), (2, 3)]), 4)?;
    let layout = SlotLayout::for_space(&space)?;
    let cfg = ExplorationConfig::new(3)?;
    println!("slots per dimension: {:?}", layout.dims.iter().map(|d| d.vertex_slots + d.ray_slots).collect::<Vec<_>>());

    let mut state = ExplorationState::reset(&layout);
    for i in 0..layout.total_slots() {
        state = state.step(weights.get(i).copied().unwrap_or(0), &cfg)?;
    }
    println!("state: {state}");
    match materialize_point(&state, &layout, &space)? {
        Materialized::Invalid { dim } => println!("invalid: no vertex weight in dimension {dim}"),
        Materialized::Point(p) => {
            for (d, row) in p.dims.iter().enumerate() {
                let row: Vec<String> = row.iter().map(ToString::to_string).collect();
                println!("p_{} = ({})", d + 1, row.join(","));
            }
            print!("{}", export_schedule(&schedule_from_points(&p, builder.layout())?, &scop)?);
        }
    }
    Ok(())
}
