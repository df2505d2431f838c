//! Homotopy classes in which a point is reachable, as the tether grows.

use tether_cover::cover::build_with_length;
use tether_cover::environment::{single_obstacle_environment, validate};
use tether_cover::{rank_homotopy_classes, Point};

fn main() -> tether_cover::Result<()> {
    let venv = validate(single_obstacle_environment(12.0))?;
    let p = Point::new(8., 5.);
    for l in [6.0, 7.0, 10.0, 12.0, 16.0, 20.0, 24.0] {
        let c = build_with_length(&venv, l)?;
        let ranked = rank_homotopy_classes(&c, p)?;
        let text: Vec<String> = ranked.iter().map(|(s, d)| format!("\"{s}\" {d:.4}")).collect();
        println!("l {l:>4}: {} classes  {}", ranked.len(), text.join(", "));
    }
    Ok(())
}
