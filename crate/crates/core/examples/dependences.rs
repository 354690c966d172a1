//! Computes memory-based dependences of a SCoP and lists their instance
//! pairs for a small parameter value.
//!
//! Run with `cargo run --example dependences [scop.json] [N]`.

use polygym::geometry::{bounded_lattice_points, DEFAULT_BOX_CAP};
use polygym::scop::{compute_memory_dependences, parse_scop};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/matvec.json").to_string());
    let n: i64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(2);
    let scop = parse_scop(&std::fs::read_to_string(&path)?)?;
    for dep in compute_memory_dependences(&scop) {
        println!("dependence {}: {} -> {}", dep.id, dep.source, dep.target);
        println!("  {}", dep.polyhedron);
        let dim = dep.polyhedron.dim();
        let fixed: Vec<(usize, i64)> = (dim - scop.params.len()..dim).map(|i| (i, n)).collect();
        let pairs = bounded_lattice_points(&dep.polyhedron.fix(&fixed)?, DEFAULT_BOX_CAP)?;
        let src_depth = scop.statement(&dep.source).map_or(0, |s| s.depth());
        println!("  {} instance pairs at N = {n}", pairs.len());
        for p in pairs {
            println!("    {}{:?} -> {}{:?}", dep.source, &p[..src_depth], dep.target, &p[src_depth..dim - scop.params.len()]);
        }
    }
    Ok(())
}
