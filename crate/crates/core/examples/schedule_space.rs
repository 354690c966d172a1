//! Builds the matvec schedule space for a fixed dependence assignment and
//! prints the generators of every dimension.
//!
//! Run with `cargo run --example schedule_space [scop.json] [dep=dim ...]`.

use std::collections::BTreeMap;

use polygym::farkas::{combined_system, Carry, SpaceBuilder};
use polygym::scop::parse_scop;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/matvec.json").to_string());
    let scop = parse_scop(&std::fs::read_to_string(&path)?)?;
    let builder = SpaceBuilder::for_scop(&scop);
    let deps = builder.dependences();
    for d in deps {
        println!("dependence {}: {} -> {}  {}", d.id, d.source, d.target, d.polyhedron);
    }

    let mut assignment: BTreeMap<usize, usize> = args
        .map(|a| {
            let (e, d) = a.split_once('=').expect("expected dep=dim");
            (e.parse().expect("dependence id"), d.parse().expect("dimension"))
        })
        .collect();
    if assignment.is_empty() {
        // S -> T carried by dimension 4 and T -> T by dimension 3.
        assignment = deps.iter().map(|d| (d.id, if d.source == d.target { 3 } else { 4 })).collect();
    }
    let k = assignment.values().copied().max().unwrap_or(1);

    let parts: Vec<_> = deps.iter().map(|d| (d, Carry::Weak)).collect();
    let one_dim = combined_system(&parts, builder.layout())?;
    println!(
        "one-dimensional Farkas system: {} variables ({} coefficients, {} multipliers)",
        one_dim.variable_count(),
        builder.layout().n,
        one_dim.multiplier_count
    );

    let space = builder.build(&assignment, k)?;
    println!("coefficients: {}", builder.layout().names.join(", "));
    for dim in &space.dims {
        println!(
            "dimension {} (strong {:?}, weak {:?}): {} vertices, {} rays",
            dim.index,
            dim.strong_ids,
            dim.weak_ids,
            dim.generators.vertices.len(),
            dim.generators.rays.len()
        );
        println!("{}", dim.generators);
    }
    Ok(())
}
