//! Homotopy signatures of paths and the free-group operations on them.

use tether_cover::environment::{single_obstacle_environment, validate};
use tether_cover::{signature_of_path, Point, Polyline, Signature};

fn path(pts: &[(f64, f64)]) -> Polyline {
    Polyline::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
}

fn main() -> tether_cover::Result<()> {
    let venv = validate(single_obstacle_environment(20.0))?;
    let gens = venv.generators()?;
    let below = path(&[(2., 5.), (5., 3.), (8., 5.)]);
    let above = path(&[(2., 5.), (5., 7.), (8., 5.)]);
    let loop_once = above.concat(&below.reversed());
    for (name, p) in [("below", &below), ("above", &above), ("above then back below", &loop_once)] {
        println!("{name:>22}: \"{}\"", signature_of_path(p, &gens)?);
    }
    let a = Signature::reduce(&[1, 2, -1], 2)?;
    let b = Signature::reduce(&[1, -2], 2)?;
    println!("\"{a}\" . \"{b}\" = \"{}\"", a.concat(&b));
    println!("inverse of \"{a}\" = \"{}\"", a.invert());
    Ok(())
}
