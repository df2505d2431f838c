//! Lifting tether configurations into the cover and projecting back.

use tether_cover::cover::build_with_length;
use tether_cover::environment::{single_obstacle_environment, validate};
use tether_cover::{Point, Polyline};

fn main() -> tether_cover::Result<()> {
    let venv = validate(single_obstacle_environment(12.0))?;
    let c = build_with_length(&venv, 12.0)?;
    let tethers = [
        vec![(2., 5.), (3., 2.), (8., 5.)],
        vec![(2., 5.), (2., 1.), (9., 2.), (8., 5.)],
        vec![(2., 5.), (3., 8.), (8., 5.)],
    ];
    for pts in tethers {
        let t = Polyline::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect())?;
        let lp = c.lift_path(&t)?;
        println!("tether ending at {} lifts to copy {} in layer \"{}\"", c.project_point(&lp)?, lp.copy, c.triangles[lp.copy].signature);
    }
    let goal = Point::new(8., 5.);
    for lp in c.preimage(goal)? {
        println!("preimage of {goal}: copy {} class \"{}\"", lp.copy, c.point_class(&lp)?);
    }
    let winding = Polyline::new(vec![Point::new(2., 5.), Point::new(3., 8.), Point::new(7., 8.), Point::new(8., 2.), Point::new(3., 2.), Point::new(3., 8.), Point::new(8., 5.)])?;
    match c.lift_path(&winding) {
        Ok(lp) => println!("winding tether lifts to copy {}", lp.copy),
        Err(e) => println!("winding tether: {e}"),
    }
    Ok(())
}
