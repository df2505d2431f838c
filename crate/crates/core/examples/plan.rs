//! Ranked paths to a goal, one per feasible homotopy class, with the tether
//! each path leaves behind.

use tether_cover::cover::build_with_length;
use tether_cover::planner::plan_report;
use tether_cover::{load_environment, plan, PlanQuery, Point, Polyline};

fn main() -> tether_cover::Result<()> {
    let venv = load_environment(&std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/two_obstacles.json"))?)?;
    let c = build_with_length(&venv, venv.env.tether_length)?;
    let mut tether = Polyline::new(vec![venv.env.anchor])?;
    for goal in [Point::new(10.5, 6.0), Point::new(6.0, 1.0), Point::new(2.0, 8.5)] {
        let results = plan(&c, &PlanQuery { tether: tether.clone(), goal })?;
        println!("== goal {goal}");
        print!("{}", plan_report(&results));
        tether = results[0].resulting_tether.clone();
    }
    Ok(())
}
