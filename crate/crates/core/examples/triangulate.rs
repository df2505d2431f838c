//! Constrained triangulation of the free space and its dual graph.

use tether_cover::{dual_graph, load_environment, triangulate};

fn main() -> tether_cover::Result<()> {
    let venv = load_environment(&std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/two_obstacles.json"))?)?;
    let tri = triangulate(&venv)?;
    println!(
        "{} vertices, {} edges ({} constrained), {} triangles, {} holes, V-E+F = {}",
        tri.vertices.len(),
        tri.edges.len(),
        tri.edges.iter().filter(|e| e.constrained).count(),
        tri.triangles.len(),
        tri.hole_count,
        tri.euler_characteristic()
    );
    let dual = dual_graph(&tri, venv.env.anchor, &venv.generators()?)?;
    println!("dual graph: {} edges, anchor in triangle {}", dual.edges.len(), dual.anchor_triangle);
    for &(t, u) in &dual.edges {
        let s = dual.edge_signature(t, u).unwrap();
        if !s.is_identity() {
            println!("  dual edge {t}-{u} crosses a generator: \"{s}\"");
        }
    }
    print!("{}", tri.dump());
    Ok(())
}
