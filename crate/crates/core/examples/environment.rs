//! Load an environment file and inspect its generator rays.
//!
//! cargo run --example environment -- [path/to/env.json]

use tether_cover::environment::{classify_homotopy_relevant, load_environment, serialize_environment};

fn main() -> tether_cover::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/two_obstacles.json").into());
    let venv = load_environment(&std::fs::read_to_string(&path)?)?;
    println!("{} obstacles, {} homotopy-relevant: {:?}", venv.env.obstacles.len(), venv.m(), classify_homotopy_relevant(&venv.env));
    println!("anchor {} tether length {}", venv.env.anchor, venv.env.tether_length);
    for (i, g) in venv.generators()?.iter().enumerate() {
        println!("s{}: obstacle {} ray from {} towards {}", i + 1, g.obstacle_id, g.origin, g.direction);
    }
    println!("canonical form:\n{}", serialize_environment(&venv.env));
    Ok(())
}
