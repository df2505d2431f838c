use serde::{Deserialize, Serialize};

use super::{funnel_shortest, Sleeve, Triangulation};
use crate::environment::Generator;
use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline, EPS};
use crate::homotopy::{signature_of_path, Signature};

/// Dual graph G′ with representative points and the signature of the
/// shortest path between the representatives of every adjacent pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualGraph {
    pub representatives: Vec<Point>,
    /// Pairs `(t, u)` with `t < u`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub anchor_triangle: usize,
    /// Anchor point as used by the model.
    pub anchor: Point,
    /// Original anchor when it had to be moved off a triangulation edge.
    pub anchor_adjustment: Option<Point>,
    /// Signature per entry of `edges`, from the lower id to the higher.
    edge_signatures: Vec<Signature>,
}

impl DualGraph {
    /// Signature of the shortest path from the representative of `t` to that
    /// of the adjacent triangle `u`.
    pub fn edge_signature(&self, t: usize, u: usize) -> Option<Signature> {
        let k = self.edges.binary_search(&(t.min(u), t.max(u))).ok()?;
        let s = &self.edge_signatures[k];
        Some(if t < u { s.clone() } else { s.invert() })
    }
}

fn on_any_ray(p: Point, generators: &[Generator]) -> bool {
    generators.iter().any(|g| g.contains(p))
}

/// Moves `p` by growing steps until it is strictly inside `t` and off every
/// ray. `dir` gives the step direction for each attempt.
fn nudge(tri: &Triangulation, t: usize, p: Point, generators: &[Generator], dir: impl Fn(Point) -> Point) -> Point {
    if tri.contains_strictly(t, p) && !on_any_ray(p, generators) {
        return p;
    }
    let d = dir(p);
    let mut step = 10.0 * EPS;
    for _ in 0..12 {
        let q = p + d.scale(step) ;
        if tri.contains_strictly(t, q) && !on_any_ray(q, generators) {
            return q;
        }
        step *= 10.0;
    }
    tri.centroid(t)
}

fn representative(tri: &Triangulation, t: usize, generators: &[Generator]) -> Point {
    let c = tri.centroid(t);
    let hit = generators.iter().find(|g| g.contains(c));
    match hit {
        None => c,
        Some(g) => {
            let d = g.direction.normalized();
            let left = Point::new(-d.y, d.x);
            let q = nudge(tri, t, c, generators, |_| left);
            if q == c {
                nudge(tri, t, c, generators, |_| left.scale(-1.0))
            } else {
                q
            }
        }
    }
}

/// Builds G′. The anchor's triangle is represented by the anchor itself,
/// moved slightly inside the lowest-id incident triangle if it lies on an
/// edge.
pub fn dual_graph(tri: &Triangulation, anchor: Point, generators: &[Generator]) -> Result<DualGraph> {
    let anchor_triangle = tri.locate(anchor).map_err(|_| Error::AnchorNotInFreeSpace)?;
    let mut representatives: Vec<Point> = (0..tri.triangles.len())
        .map(|t| representative(tri, t, generators))
        .collect();
    let centroid = tri.centroid(anchor_triangle);
    let used = nudge(tri, anchor_triangle, anchor, generators, |p| (centroid - p).normalized());
    if !tri.contains_strictly(anchor_triangle, used) {
        return Err(Error::AnchorNotInFreeSpace);
    }
    representatives[anchor_triangle] = used;

    let mut edges = Vec::new();
    let mut edge_signatures = Vec::new();
    for t in 0..tri.triangles.len() {
        for u in tri.adjacent(t) {
            if t < u {
                edges.push((t, u));
                let sleeve = Sleeve { triangles: vec![t, u] };
                let path = funnel_shortest(tri, &sleeve, representatives[t], representatives[u])?;
                edge_signatures.push(signature_of_path(&path, generators)?);
            }
        }
    }
    Ok(DualGraph {
        representatives,
        edges,
        anchor_triangle,
        anchor: used,
        anchor_adjustment: (used != anchor).then_some(anchor),
        edge_signatures,
    })
}

/// Signature of the straight segment from the representative of `t` to `p`
/// (a point of the closed triangle).
pub(crate) fn segment_signature(from: Point, p: Point, generators: &[Generator]) -> Result<Signature> {
    if from == p {
        return Ok(Signature::identity());
    }
    signature_of_path(&Polyline { points: vec![from, p] }, generators)
}
