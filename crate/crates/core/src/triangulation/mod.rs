//! Constrained triangulation of the free workspace, its dual graph, sleeves
//! and homotopic shortest paths.

mod dual;
mod funnel;
mod sleeve;

pub use dual::{dual_graph, DualGraph};
pub(crate) use dual::segment_signature;
pub use funnel::funnel_shortest;
pub use sleeve::{sleeve_between, triangle_walk, Portal, Sleeve};

use serde::{Deserialize, Serialize};
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation as _};
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::environment::ValidatedEnvironment;
use crate::error::{Error, Result};
use crate::geometry::{
    orient, point_in_polygon, point_strictly_inside_segment, Orientation, Point, PointLocation,
    EPS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    /// Part of an obstacle or workspace boundary.
    pub constrained: bool,
}

/// Triangulation of the free workspace. Triangles are counterclockwise;
/// `neighbors[t][j]` is the triangle across the edge
/// `(triangles[t][j], triangles[t][(j + 1) % 3])` unless that edge is
/// constrained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triangulation {
    pub vertices: Vec<Point>,
    pub edges: Vec<Edge>,
    pub triangles: Vec<[usize; 3]>,
    pub neighbors: Vec<[Option<usize>; 3]>,
    pub triangle_edges: Vec<[usize; 3]>,
    /// Obstacle holes in the free workspace.
    pub hole_count: usize,
    vertex_triangles: Vec<Vec<usize>>,
}

impl Triangulation {
    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.triangle_points(t);
        Point::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }

    /// Closed containment.
    pub fn contains(&self, t: usize, p: Point) -> bool {
        let [a, b, c] = self.triangle_points(t);
        orient(a, b, p) != Orientation::Cw
            && orient(b, c, p) != Orientation::Cw
            && orient(c, a, p) != Orientation::Cw
    }

    pub fn contains_strictly(&self, t: usize, p: Point) -> bool {
        let [a, b, c] = self.triangle_points(t);
        orient(a, b, p) == Orientation::Ccw
            && orient(b, c, p) == Orientation::Ccw
            && orient(c, a, p) == Orientation::Ccw
    }

    /// Triangles adjacent across non-constrained edges, ascending.
    pub fn adjacent(&self, t: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.neighbors[t].iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn are_adjacent(&self, t: usize, u: usize) -> bool {
        self.neighbors[t].contains(&Some(u))
    }

    /// The edge shared with neighbour `u`, as `(right, left)` vertex ids seen
    /// when moving from `t` into `u`.
    pub fn portal(&self, t: usize, u: usize) -> Option<Portal> {
        let j = self.neighbors[t].iter().position(|n| *n == Some(u))?;
        let tri = self.triangles[t];
        Some(Portal { right: tri[j], left: tri[(j + 1) % 3] })
    }

    pub fn triangles_at_vertex(&self, v: usize) -> &[usize] {
        &self.vertex_triangles[v]
    }

    /// V - E + F over the triangles.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Id of a triangle containing `p` (closed); the lowest id on ties.
    pub fn locate(&self, p: Point) -> Result<usize> {
        (0..self.triangles.len())
            .find(|&t| self.contains(t, p))
            .ok_or(Error::PointNotInFreeSpace(p.x, p.y))
    }

    /// Plain-text vertex, edge and triangle tables.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        writeln!(s, "vertices {}", self.vertices.len()).unwrap();
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(s, "v {i} {} {}", v.x, v.y).unwrap();
        }
        writeln!(s, "edges {}", self.edges.len()).unwrap();
        for (i, e) in self.edges.iter().enumerate() {
            writeln!(s, "e {i} {} {} {}", e.a, e.b, if e.constrained { "c" } else { "-" }).unwrap();
        }
        writeln!(s, "triangles {}", self.triangles.len()).unwrap();
        for (i, t) in self.triangles.iter().enumerate() {
            let n: Vec<String> = self.neighbors[i]
                .iter()
                .map(|n| n.map_or("-".to_string(), |x| x.to_string()))
                .collect();
            writeln!(s, "t {i} {} {} {} | {}", t[0], t[1], t[2], n.join(" ")).unwrap();
        }
        s
    }
}

fn split_boundary_segments(points: &[Point], polygons: &[&[Point]], id_of: &HashMap<[u64; 2], usize>) -> BTreeSet<(usize, usize)> {
    let key = |p: &Point| [p.x.to_bits(), p.y.to_bits()];
    let mut segs = BTreeSet::new();
    for poly in polygons {
        let n = poly.len();
        for i in 0..n {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            let mut on: Vec<(f64, usize)> = points
                .iter()
                .enumerate()
                .filter(|(_, r)| point_strictly_inside_segment(p, q, **r))
                .map(|(k, r)| ((*r - p).dot(q - p), k))
                .collect();
            on.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut chain = vec![id_of[&key(&p)]];
            chain.extend(on.into_iter().map(|(_, k)| k));
            chain.push(id_of[&key(&q)]);
            for w in chain.windows(2) {
                segs.insert((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
    }
    segs
}

/// Constrained Delaunay triangulation of the free workspace.
///
/// Vertices are the workspace and obstacle vertices, inserted in
/// lexicographic order; triangles inside obstacles or outside the workspace
/// are dropped by testing their centroid.
pub fn triangulate(venv: &ValidatedEnvironment) -> Result<Triangulation> {
    let mut pts: Vec<Point> = venv.vertices().collect();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if pts[j].x - pts[i].x > EPS {
                break;
            }
            if pts[i].dist(pts[j]) <= EPS {
                return Err(Error::DegenerateInput(format!("vertices {} and {} nearly coincide", pts[i], pts[j])));
            }
        }
    }
    let key = |p: &Point| [p.x.to_bits(), p.y.to_bits()];
    let id_of: HashMap<[u64; 2], usize> = pts.iter().enumerate().map(|(i, p)| (key(p), i)).collect();
    let mut polys: Vec<&[Point]> = vec![&venv.env.workspace.vertices];
    polys.extend(venv.env.obstacles.iter().map(|o| o.vertices.as_slice()));
    let segs = split_boundary_segments(&pts, &polys, &id_of);

    let mut cdt: ConstrainedDelaunayTriangulation<Point2<f64>> = ConstrainedDelaunayTriangulation::new();
    let mut handles = Vec::with_capacity(pts.len());
    let mut spade_to_id: HashMap<usize, usize> = HashMap::new();
    for (i, p) in pts.iter().enumerate() {
        let h = cdt
            .insert(Point2::new(p.x, p.y))
            .map_err(|e| Error::DegenerateInput(format!("{e:?}")))?;
        spade_to_id.insert(h.index(), i);
        handles.push(h);
    }
    if cdt.num_vertices() != pts.len() {
        return Err(Error::DegenerateInput("vertex merged during insertion".into()));
    }
    for &(a, b) in &segs {
        if !cdt.can_add_constraint(handles[a], handles[b]) {
            return Err(Error::DegenerateInput(format!("boundary edge {}-{} crosses another", pts[a], pts[b])));
        }
        cdt.add_constraint(handles[a], handles[b]);
        if !cdt.exists_constraint(handles[a], handles[b]) {
            return Err(Error::DegenerateInput(format!("boundary edge {}-{} was split", pts[a], pts[b])));
        }
    }

    let mut tris: Vec<[usize; 3]> = Vec::new();
    for f in cdt.inner_faces() {
        let vs = f.vertices();
        let ids = [
            spade_to_id[&vs[0].fix().index()],
            spade_to_id[&vs[1].fix().index()],
            spade_to_id[&vs[2].fix().index()],
        ];
        let (a, b, c) = (pts[ids[0]], pts[ids[1]], pts[ids[2]]);
        let ids = match orient(a, b, c) {
            Orientation::Ccw => ids,
            Orientation::Cw => [ids[0], ids[2], ids[1]],
            Orientation::Collinear => return Err(Error::DegenerateInput("flat triangle".into())),
        };
        let centroid = Point::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0);
        if point_in_polygon(centroid, &venv.env.workspace) != PointLocation::Inside {
            continue;
        }
        if venv
            .env
            .obstacles
            .iter()
            .any(|o| point_in_polygon(centroid, o) != PointLocation::Outside)
        {
            continue;
        }
        // Rotate so the smallest id comes first, keeping orientation.
        let k = (0..3).min_by_key(|&k| ids[k]).unwrap();
        tris.push([ids[k], ids[(k + 1) % 3], ids[(k + 2) % 3]]);
    }
    tris.sort_unstable();
    if tris.is_empty() {
        return Err(Error::DegenerateInput("free workspace has no area".into()));
    }

    // Keep only vertices used by free triangles.
    let mut remap = vec![usize::MAX; pts.len()];
    let mut vertices = Vec::new();
    let mut used = vec![false; pts.len()];
    for t in &tris {
        for &v in t {
            used[v] = true;
        }
    }
    for (i, p) in pts.iter().enumerate() {
        if used[i] {
            remap[i] = vertices.len();
            vertices.push(*p);
        }
    }
    let segs: BTreeSet<(usize, usize)> = segs
        .into_iter()
        .filter(|(a, b)| used[*a] && used[*b])
        .map(|(a, b)| (remap[a], remap[b]))
        .collect();
    for t in tris.iter_mut() {
        for v in t.iter_mut() {
            *v = remap[*v];
        }
    }

    let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for t in &tris {
        for j in 0..3 {
            let (a, b) = (t[j], t[(j + 1) % 3]);
            let k = (a.min(b), a.max(b));
            if let std::collections::hash_map::Entry::Vacant(e) = edge_ids.entry(k) {
                e.insert(usize::MAX);
                edges.push(k);
            }
        }
    }
    edges.sort_unstable();
    for (i, e) in edges.iter().enumerate() {
        edge_ids.insert(*e, i);
    }
    let edges: Vec<Edge> = edges
        .iter()
        .map(|&(a, b)| Edge { a, b, constrained: segs.contains(&(a, b)) })
        .collect();

    let mut by_edge: Vec<Vec<(usize, usize)>> = vec![Vec::new(); edges.len()];
    let mut triangle_edges = Vec::with_capacity(tris.len());
    for (ti, t) in tris.iter().enumerate() {
        let mut te = [0; 3];
        for j in 0..3 {
            let (a, b) = (t[j], t[(j + 1) % 3]);
            let e = edge_ids[&(a.min(b), a.max(b))];
            te[j] = e;
            by_edge[e].push((ti, j));
        }
        triangle_edges.push(te);
    }
    let mut neighbors = vec![[None; 3]; tris.len()];
    for (e, owners) in by_edge.iter().enumerate() {
        if owners.len() > 2 {
            return Err(Error::DegenerateInput(format!("edge {e} has {} triangles", owners.len())));
        }
        if owners.len() == 2 && !edges[e].constrained {
            let ((t0, j0), (t1, j1)) = (owners[0], owners[1]);
            neighbors[t0][j0] = Some(t1);
            neighbors[t1][j1] = Some(t0);
        }
    }
    let mut vertex_triangles = vec![Vec::new(); vertices.len()];
    for (ti, t) in tris.iter().enumerate() {
        for &v in t {
            vertex_triangles[v].push(ti);
        }
    }

    let components = count_components(&neighbors);
    if components != 1 {
        return Err(Error::Connectivity(components));
    }
    let chi = vertices.len() as i64 - edges.len() as i64 + tris.len() as i64;
    Ok(Triangulation {
        vertices,
        edges,
        triangles: tris,
        neighbors,
        triangle_edges,
        hole_count: (1 - chi).max(0) as usize,
        vertex_triangles,
    })
}

fn count_components(neighbors: &[[Option<usize>; 3]]) -> usize {
    let mut seen = vec![false; neighbors.len()];
    let mut count = 0;
    for s in 0..neighbors.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(t) = q.pop_front() {
            for n in neighbors[t].iter().flatten() {
                if !seen[*n] {
                    seen[*n] = true;
                    q.push_back(*n);
                }
            }
        }
    }
    count
}
