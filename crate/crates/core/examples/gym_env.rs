//! Drives the reset/step environment with unified action ids, the way an
//! agent would, picking the highest valid id at every step.
//!
//! Run with `cargo run --example gym_env`.

use polygym::env::{EngineConfig, PolyEnv};
use polygym::scop::parse_scop;

fn main() -> anyhow::Result<()> {
    let scop = parse_scop(include_str!("../data/matvec.json"))?;
    let mut env = PolyEnv::from_scop(scop.clone(), EngineConfig::proxy(&scop))?;
    let spaces = env.spaces();
    println!("actions: {}", spaces.action_names.join(", "));
    let mut obs = env.reset(Some(0))?;
    println!("reset: {:?}", obs.to_vector());
    loop {
        let id = obs.mask.iter().rposition(|&m| m).expect("some action is valid");
        let (next, reward, done, info) = env.step(id)?;
        println!("{:<14} -> {:?} reward {reward}", spaces.action_names[id], next.to_vector());
        obs = next;
        if done {
            println!("done: {} with reward {}", info.outcome, info.reward_exact);
            break;
        }
    }
    Ok(())
}
