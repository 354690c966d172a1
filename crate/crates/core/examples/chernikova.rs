//! Converts a few constraint systems into vertices and rays.
//!
//! Run with `cargo run --example chernikova`.

use polygym::geometry::{chernikova, HPolyhedron, LinearConstraint};

fn show(title: &str, constraints: Vec<LinearConstraint>, dim: usize) -> anyhow::Result<()> {
    let h = HPolyhedron::anonymous(dim, constraints)?;
    let g = chernikova(&h);
    println!("{title}");
    println!("  constraints: {h}");
    if g.is_empty() {
        println!("  empty");
    } else {
        println!("  {} vertices, {} rays", g.vertices.len(), g.rays.len());
        println!("{g}");
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    // 0 <= x, y <= 1
    show(
        "unit square",
        vec![
            LinearConstraint::ge(vec![1, 0], 0),
            LinearConstraint::ge(vec![-1, 0], 1),
            LinearConstraint::ge(vec![0, 1], 0),
            LinearConstraint::ge(vec![0, -1], 1),
        ],
        2,
    )?;
    // x, y, z >= 0 and x + y + z <= 1
    show(
        "standard simplex",
        vec![
            LinearConstraint::ge(vec![1, 0, 0], 0),
            LinearConstraint::ge(vec![0, 1, 0], 0),
            LinearConstraint::ge(vec![0, 0, 1], 0),
            LinearConstraint::ge(vec![-1, -1, -1], 1),
        ],
        3,
    )?;
    // x >= 1 and y free
    show("half plane", vec![LinearConstraint::ge(vec![1, 0], -1)], 2)?;
    // x >= 1 and x <= 0
    show(
        "infeasible",
        vec![LinearConstraint::ge(vec![1], -1), LinearConstraint::ge(vec![-1], 0)],
        1,
    )?;
    Ok(())
}
