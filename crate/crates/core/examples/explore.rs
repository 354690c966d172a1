//! Runs a batch of heuristic episodes on matvec and prints the outcome
//! counts and the best schedule.
//!
//! Run with `cargo run --example explore [heuristic] [episodes] [seed]`.

use std::sync::Arc;

use polygym::env::{Engine, EngineConfig};
use polygym::eval::export_schedule;
use polygym::explorer::{run_explore, ExploreConfig, Heuristic, HeuristicKind};
use polygym::scop::parse_scop;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: HeuristicKind = args.next().as_deref().unwrap_or("bias_coeff_0").parse().map_err(anyhow::Error::msg)?;
    let episodes: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(200);
    let seed: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0);

    let scop = parse_scop(include_str!("../data/matvec.json"))?;
    let engine = Arc::new(Engine::new(scop.clone(), EngineConfig::proxy(&scop))?);
    let report = run_explore(&engine, &ExploreConfig::new(Heuristic::new(kind), episodes, seed))?;
    for (kind, n) in report.counts() {
        println!("{kind}: {n}");
    }
    let checkpoints = [1, 10, 100, episodes];
    for &i in checkpoints.iter().filter(|&&i| i <= episodes) {
        println!("best after {i:>4} episodes: {}", report.best_so_far[i - 1]);
    }
    if let Some(best) = report.best_legal() {
        println!("best legal episode {} (reward {}):", best.id, best.outcome.reward);
        if let Some(s) = &best.outcome.schedule {
            print!("{}", export_schedule(s, &scop)?);
        }
    }
    Ok(())
}
