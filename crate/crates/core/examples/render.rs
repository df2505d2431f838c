//! SVG panels for an environment, its triangulation, the cover layers and a plan.
//!
//! cargo run --example render -- [output directory]

use std::path::PathBuf;

use tether_cover::cover::build_with_length;
use tether_cover::environment::{single_obstacle_environment, validate};
use tether_cover::render::{render_environment, render_layers, render_plan_result, render_triangulation};
use tether_cover::{plan, PlanQuery, Point, Polyline};

fn main() -> tether_cover::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("tether-render"));
    std::fs::create_dir_all(&out)?;
    let venv = validate(single_obstacle_environment(16.0))?;
    let c = build_with_length(&venv, 16.0)?;
    let robot = Point::new(8., 5.);
    std::fs::write(out.join("environment.svg"), render_environment(&venv, &c.generators, Some(robot)))?;
    std::fs::write(out.join("triangulation.svg"), render_triangulation(&venv, &c.triangulation, &c.dual, &c.generators))?;
    std::fs::write(out.join("layers.svg"), render_layers(&venv, &c))?;
    let tether = Polyline::new(vec![Point::new(2., 5.), Point::new(4., 4.), Point::new(6., 4.), robot])?;
    for (i, r) in plan(&c, &PlanQuery { tether, goal: Point::new(5., 8.) })?.iter().enumerate() {
        std::fs::write(out.join(format!("plan_{}.svg", i + 1)), render_plan_result(&venv, &c.generators, r, i + 1))?;
    }
    println!("wrote panels to {}", out.display());
    Ok(())
}
