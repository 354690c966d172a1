//! Checks the identity schedule and a two-dimensional alternative for
//! matvec and prints how each dependence is carried.
//!
//! Run with `cargo run --example legality [schedule]`, where a schedule is
//! written like `S[i] -> [i, 0]; T[i,j] -> [i+j, i+1]`.

use polygym::eval::{check_legality, export_schedule, import_schedule, LegalityOptions};
use polygym::scop::{parse_scop, ParamBinding};

fn main() -> anyhow::Result<()> {
    let scop = parse_scop(include_str!("../data/matvec.json"))?;
    let deps = scop.dependences_or_computed();
    let opts = LegalityOptions::new(ParamBinding::uniform(&scop, 5));
    let mut schedules = vec![("identity".to_string(), scop.identity_schedule())];
    let text = std::env::args().nth(1).unwrap_or_else(|| "S[i] -> [i, 0]; T[i,j] -> [i+j, i+1]".into());
    schedules.push((text.clone(), import_schedule(&text, &scop)?));
    // Reversing the inner loop breaks both dependences.
    schedules.push(("inner loop reversed".into(), import_schedule("S[i] -> [i, 0]; T[i,j] -> [i, -j]", &scop)?));
    for (name, s) in schedules {
        println!("== {name}");
        print!("{}", export_schedule(&s, &scop)?);
        print!("{}", check_legality(&s, &scop, &deps, &opts)?);
    }
    Ok(())
}
