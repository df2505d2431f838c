//! Truncated universal cover for growing tether lengths.

use tether_cover::cover::build_with_length;
use tether_cover::environment::{single_obstacle_environment, validate};

fn main() -> tether_cover::Result<()> {
    let venv = validate(single_obstacle_environment(12.0))?;
    for l in [6.0, 8.0, 12.0, 16.0, 24.0] {
        let c = build_with_length(&venv, l)?;
        let s = c.stats();
        let layers: Vec<String> = c.layers().iter().map(|(sig, t)| format!("\"{sig}\":{}", t.len())).collect();
        println!(
            "l {l:>4}: {} vertices {} edges {} triangles, V-E+F {}, tree {}, layers {}",
            s.vertices,
            s.edges,
            s.triangles,
            c.euler_characteristic(),
            c.dual_is_spanning_tree(),
            layers.join(" ")
        );
    }
    let c = build_with_length(&venv, 12.0)?;
    print!("{}", c.dump());
    Ok(())
}
