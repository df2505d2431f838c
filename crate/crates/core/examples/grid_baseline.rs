//! Homotopy-augmented grid graph and its comparison with the cover.

use tether_cover::baseline::{build_grid_graph_with_length, compare, csv_header, grid_classes_at};
use tether_cover::environment::{random_environment, single_obstacle_environment, validate};
use tether_cover::Point;

fn main() -> tether_cover::Result<()> {
    let venv = validate(single_obstacle_environment(12.0))?;
    for res in [0.5, 0.25, 0.1] {
        let g = build_grid_graph_with_length(&venv, res, 12.0)?;
        let classes: Vec<String> = grid_classes_at(&g, Point::new(8.1, 5.1)).iter().map(|(s, d)| format!("\"{s}\" {d:.3}")).collect();
        println!("resolution {res}: {} nodes, {} edges, classes at (8.1, 5.1): {}", g.nodes.len(), g.edge_count, classes.join(", "));
    }
    let resolutions = [0.5, 0.25];
    println!("{}", csv_header(&resolutions));
    for m in [1, 2, 4] {
        let venv = validate(random_environment(m, 10.0, m as u64))?;
        for l in [10.0, 12.0] {
            println!("{}", compare(&venv, l, &resolutions, 30, 7)?.csv_row());
        }
    }
    Ok(())
}
