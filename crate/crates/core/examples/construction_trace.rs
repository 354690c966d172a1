//! Walks the schedule space construction process along a fixed action
//! sequence and prints every state with its valid actions.
//!
//! Run with `cargo run --example construction_trace [action ...]`.

use polygym::construction::{ConstructionAction, ConstructionConfig, ConstructionState};

fn main() -> anyhow::Result<()> {
    use ConstructionAction::*;
    let args: Vec<String> = std::env::args().skip(1).collect();
    let actions: Vec<ConstructionAction> = if args.is_empty() {
        vec![NextDim, NextDep, NextDim, NextDep, NextDep, SelectDep, NextDim, NextDep, SelectDep]
    } else {
        args.iter().map(|a| a.parse()).collect::<Result<_, _>>()?
    };
    // matvec has two dependences: S -> T and T -> T.
    let cfg = ConstructionConfig::default_for(2);
    let mut state = ConstructionState::reset(2)?;
    println!("{state}");
    for a in actions {
        let valid: Vec<&str> = state.valid_actions(&cfg)?.into_iter().map(ConstructionAction::name).collect();
        state = state.step(a, &cfg)?;
        println!("  {a:<10} -> {state}   (valid before: {})", valid.join(", "));
    }
    if state.is_terminal() {
        println!("terminal: {} dimensions, assignment {:?}", state.dimensions(), state.assignment());
    } else {
        println!("not terminal");
    }
    Ok(())
}
