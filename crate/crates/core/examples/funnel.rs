//! Shortest path inside a sleeve of triangles, below and above an obstacle.

use tether_cover::environment::{single_obstacle_environment, validate};
use tether_cover::triangulation::{funnel_shortest, sleeve_between, triangle_walk};
use tether_cover::{triangulate, Point, Polyline};

fn main() -> tether_cover::Result<()> {
    let venv = validate(single_obstacle_environment(12.0))?;
    let tri = triangulate(&venv)?;
    let (a, b) = (Point::new(2., 5.), Point::new(8., 5.));
    for (name, via) in [("below", Point::new(5., 2.)), ("above", Point::new(5., 8.))] {
        // the triangles crossed by a rough guide path form the sleeve
        let guide = Polyline::new(vec![a, via, b])?;
        let sleeve = sleeve_between(&tri, &triangle_walk(&tri, &guide)?)?;
        let taut = funnel_shortest(&tri, &sleeve, a, b)?;
        let pts: Vec<String> = taut.points.iter().map(|p| p.to_string()).collect();
        println!("{name}: {} triangles, length {:.6}, {}", sleeve.triangles.len(), taut.length(), pts.join(" -> "));
    }
    Ok(())
}
