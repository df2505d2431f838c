//! Truncated universal cover of the free workspace, built as a simplicial
//! complex whose triangles are (base triangle, signature) copies.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::environment::{Generator, ValidatedEnvironment};
use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};
use crate::homotopy::{signature_of_path, Signature};
use crate::triangulation::{dual_graph, funnel_shortest, segment_signature, triangulate, DualGraph, Sleeve, Triangulation};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LiftedVertex {
    pub base_vertex: usize,
    pub signature: Signature,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedTriangle {
    pub base_triangle: usize,
    pub signature: Signature,
    /// Lifted vertex ids, in the base triangle's corner order.
    pub corners: [usize; 3],
    /// Copy through which this one was reached; `None` for the anchor copy.
    pub parent: Option<usize>,
    pub depth: usize,
}

/// A point of the cover: a triangle copy and a position inside its base
/// triangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedPoint {
    pub copy: usize,
    pub point: Point,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverComplex {
    pub triangulation: Triangulation,
    pub dual: DualGraph,
    pub generators: Vec<Generator>,
    pub tether_length: f64,
    pub vertices: Vec<LiftedVertex>,
    /// Lifted vertex id pairs `(a, b)` with `a < b`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub triangles: Vec<LiftedTriangle>,
    /// Copy id pairs sharing a lifted edge, sorted.
    pub dual_edges: Vec<(usize, usize)>,
    /// Absent when even the anchor's own triangle is out of reach.
    pub anchor_copy: Option<usize>,
    pub copies_by_base: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverStats {
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub layers: usize,
}

/// Builds the truncated cover for the environment's own tether length.
pub fn build_from_environment(venv: &ValidatedEnvironment) -> Result<CoverComplex> {
    build_with_length(venv, venv.env.tether_length)
}

pub fn build_with_length(venv: &ValidatedEnvironment, tether_length: f64) -> Result<CoverComplex> {
    let generators = venv.generators()?;
    let tri = triangulate(venv)?;
    let dual = dual_graph(&tri, venv.env.anchor, &generators)?;
    build_complex(tri, dual, generators, tether_length)
}

struct Candidate {
    triangle: usize,
    signature: Signature,
    parent: Option<usize>,
}

/// Breadth-first construction of the cover truncated at `tether_length`.
///
/// A triangle copy `(t, s)` is kept only if each of its three vertices is
/// reachable from the anchor within the tether length in the vertex's own
/// class. Neighbours are expanded in ascending triangle id order.
pub fn build_complex(tri: Triangulation, dual: DualGraph, generators: Vec<Generator>, tether_length: f64) -> Result<CoverComplex> {
    if !tether_length.is_finite() || tether_length <= 0.0 {
        return Err(Error::NonpositiveTether(tether_length));
    }
    let anchor = dual.anchor;
    let mut triangles: Vec<LiftedTriangle> = Vec::new();
    let mut vertices: Vec<LiftedVertex> = Vec::new();
    let mut vertex_ids: HashMap<LiftedVertex, usize> = HashMap::new();
    let mut closed: HashSet<(usize, Signature)> = HashSet::new();
    let mut distance_memo: HashMap<(usize, Signature), f64> = HashMap::new();
    let mut copies_by_base = vec![Vec::new(); tri.triangles.len()];
    let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();

    let mut open = VecDeque::from([Candidate { triangle: dual.anchor_triangle, signature: Signature::identity(), parent: None }]);
    while let Some(Candidate { triangle: t, signature: s, parent }) = open.pop_front() {
        if !closed.insert((t, s.clone())) {
            continue;
        }
        let mut sleeve = match parent {
            Some(p) => base_path_to_root(&triangles, p),
            None => Vec::new(),
        };
        sleeve.push(t);
        let sleeve = Sleeve { triangles: sleeve };
        let rep = dual.representatives[t];
        let mut corners = [0usize; 3];
        let mut lifted = Vec::with_capacity(3);
        let mut admitted = true;
        for &v in &tri.triangles[t] {
            let sv = s.concat(&segment_signature(rep, tri.vertices[v], &generators)?);
            let key = (v, sv.clone());
            let d = match distance_memo.get(&key) {
                Some(d) => *d,
                None => {
                    let d = funnel_shortest(&tri, &sleeve, anchor, tri.vertices[v])?.length();
                    distance_memo.insert(key, d);
                    d
                }
            };
            if d > tether_length {
                admitted = false;
                break;
            }
            lifted.push(LiftedVertex { base_vertex: v, signature: sv });
        }
        if !admitted {
            continue;
        }
        for (k, lv) in lifted.into_iter().enumerate() {
            corners[k] = *vertex_ids.entry(lv.clone()).or_insert_with(|| {
                vertices.push(lv);
                vertices.len() - 1
            });
        }
        for j in 0..3 {
            let (a, b) = (corners[j], corners[(j + 1) % 3]);
            edge_set.insert((a.min(b), a.max(b)));
        }
        let id = triangles.len();
        let depth = parent.map_or(0, |p| triangles[p].depth + 1);
        copies_by_base[t].push(id);
        triangles.push(LiftedTriangle { base_triangle: t, signature: s.clone(), corners, parent, depth });
        for u in tri.adjacent(t) {
            let su = s.concat(&dual.edge_signature(t, u).expect("adjacent triangles have a dual edge"));
            if !closed.contains(&(u, su.clone())) {
                open.push_back(Candidate { triangle: u, signature: su, parent: Some(id) });
            }
        }
    }

    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, c) in triangles.iter().enumerate() {
        for j in 0..3 {
            let (a, b) = (c.corners[j], c.corners[(j + 1) % 3]);
            by_edge.entry((a.min(b), a.max(b))).or_default().push(i);
        }
    }
    let mut dual_edges: Vec<(usize, usize)> = by_edge
        .values()
        .filter(|v| v.len() == 2)
        .map(|v| (v[0].min(v[1]), v[0].max(v[1])))
        .collect();
    dual_edges.sort_unstable();

    let anchor_copy = if triangles.is_empty() { None } else { Some(0) };
    Ok(CoverComplex {
        triangulation: tri,
        dual,
        generators,
        tether_length,
        vertices,
        edges: edge_set.into_iter().collect(),
        triangles,
        dual_edges,
        anchor_copy,
        copies_by_base,
    })
}

/// Base triangles from the anchor copy down to `copy`.
fn base_path_to_root(triangles: &[LiftedTriangle], copy: usize) -> Vec<usize> {
    let mut path = Vec::with_capacity(triangles[copy].depth + 1);
    let mut c = Some(copy);
    while let Some(i) = c {
        path.push(triangles[i].base_triangle);
        c = triangles[i].parent;
    }
    path.reverse();
    path
}

impl CoverComplex {
    pub fn stats(&self) -> CoverStats {
        CoverStats {
            vertices: self.vertices.len(),
            edges: self.edges.len(),
            triangles: self.triangles.len(),
            layers: self.layers().len(),
        }
    }

    /// Base triangle ids per signature.
    pub fn layers(&self) -> BTreeMap<Signature, Vec<usize>> {
        let mut out: BTreeMap<Signature, Vec<usize>> = BTreeMap::new();
        for c in &self.triangles {
            out.entry(c.signature.clone()).or_default().push(c.base_triangle);
        }
        for v in out.values_mut() {
            v.sort_unstable();
        }
        out
    }

    /// V - E + F of the lifted complex.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Whether the lifted dual graph is a spanning tree of the copies.
    pub fn dual_is_spanning_tree(&self) -> bool {
        let n = self.triangles.len();
        if n == 0 {
            return true;
        }
        if self.dual_edges.len() != n - 1 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.dual_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(c) = stack.pop() {
            for &d in &adj[c] {
                if !seen[d] {
                    seen[d] = true;
                    count += 1;
                    stack.push(d);
                }
            }
        }
        count == n
    }

    pub fn project_vertex(&self, id: usize) -> Result<Point> {
        self.vertices
            .get(id)
            .map(|v| self.triangulation.vertices[v.base_vertex])
            .ok_or_else(|| Error::ElementNotInComplex(format!("vertex {id}")))
    }

    pub fn project_triangle(&self, copy: usize) -> Result<usize> {
        self.triangles
            .get(copy)
            .map(|c| c.base_triangle)
            .ok_or_else(|| Error::ElementNotInComplex(format!("triangle copy {copy}")))
    }

    pub fn project_point(&self, p: &LiftedPoint) -> Result<Point> {
        self.project_triangle(p.copy)?;
        Ok(p.point)
    }

    pub fn find_copy(&self, base_triangle: usize, signature: &Signature) -> Option<usize> {
        self.copies_by_base
            .get(base_triangle)?
            .iter()
            .copied()
            .find(|&c| self.triangles[c].signature == *signature)
    }

    /// Signature of the layer containing the end of `path`, as used by the
    /// construction: the path's class extended to the representative point
    /// of the end triangle.
    pub fn layer_signature(&self, path: &Polyline) -> Result<(usize, Signature)> {
        let end = path.end();
        let t = self.triangulation.locate(end)?;
        let rep = self.dual.representatives[t];
        let start = self.dual.anchor;
        let mut pts = path.points.clone();
        if let Some(orig) = self.dual.anchor_adjustment {
            if pts[0] == orig {
                pts[0] = start;
            }
        }
        pts.push(rep);
        let full = Polyline::from_points_dedup(pts);
        Ok((t, signature_of_path(&full, &self.generators)?))
    }

    /// Lift of a path starting at the anchor.
    pub fn lift_path(&self, path: &Polyline) -> Result<LiftedPoint> {
        let start = path.start();
        if start != self.dual.anchor && Some(start) != self.dual.anchor_adjustment {
            return Err(Error::TetherInfeasible(format!("tether starts at {start}, not at the anchor")));
        }
        let (t, s) = self.layer_signature(path)?;
        let copy = self
            .find_copy(t, &s)
            .ok_or_else(|| Error::LiftExceedsTether(s.to_string()))?;
        Ok(LiftedPoint { copy, point: path.end() })
    }

    /// All lifts of `p`, one per copy of its triangle, ordered by copy id.
    pub fn preimage(&self, p: Point) -> Result<Vec<LiftedPoint>> {
        let t = self.triangulation.locate(p)?;
        Ok(self.copies_by_base[t].iter().map(|&copy| LiftedPoint { copy, point: p }).collect())
    }

    /// Homotopy class of paths from the anchor to a lifted point: the layer
    /// signature corrected by the segment from the triangle's representative.
    pub fn point_class(&self, p: &LiftedPoint) -> Result<Signature> {
        let base = self.project_triangle(p.copy)?;
        let rep = self.dual.representatives[base];
        Ok(self.triangles[p.copy].signature.concat(&segment_signature(rep, p.point, &self.generators)?))
    }

    pub fn anchor_point(&self) -> Option<LiftedPoint> {
        self.anchor_copy.map(|copy| LiftedPoint { copy, point: self.dual.anchor })
    }

    /// Copies along the unique tree path from `a` to `b`.
    pub fn tree_path(&self, a: usize, b: usize) -> Vec<usize> {
        let (mut x, mut y) = (a, b);
        let mut up = vec![];
        let mut down = vec![];
        while self.triangles[x].depth > self.triangles[y].depth {
            up.push(x);
            x = self.triangles[x].parent.unwrap();
        }
        while self.triangles[y].depth > self.triangles[x].depth {
            down.push(y);
            y = self.triangles[y].parent.unwrap();
        }
        while x != y {
            up.push(x);
            down.push(y);
            x = self.triangles[x].parent.unwrap();
            y = self.triangles[y].parent.unwrap();
        }
        up.push(x);
        up.extend(down.into_iter().rev());
        up
    }

    /// Shortest path between two lifted points, projected to the base space.
    pub fn shortest_in_cover(&self, a: &LiftedPoint, b: &LiftedPoint) -> Result<(Polyline, f64)> {
        self.project_triangle(a.copy)?;
        self.project_triangle(b.copy)?;
        let triangles = self.tree_path(a.copy, b.copy).into_iter().map(|c| self.triangles[c].base_triangle).collect();
        let path = funnel_shortest(&self.triangulation, &Sleeve { triangles }, a.point, b.point)?;
        let len = path.length();
        Ok((path, len))
    }

    /// Per-layer listing followed by the copy table.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let st = self.stats();
        writeln!(s, "tether_length {}", self.tether_length).unwrap();
        writeln!(s, "vertices {} edges {} triangles {} layers {}", st.vertices, st.edges, st.triangles, st.layers).unwrap();
        for (sig, ids) in self.layers() {
            let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
            writeln!(s, "layer \"{sig}\": {}", ids.join(" ")).unwrap();
        }
        for (i, c) in self.triangles.iter().enumerate() {
            let parent = c.parent.map_or("-".to_string(), |p| p.to_string());
            writeln!(
                s,
                "copy {i} base {} sig \"{}\" corners {} {} {} parent {parent}",
                c.base_triangle, c.signature, c.corners[0], c.corners[1], c.corners[2]
            )
            .unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::{single_obstacle_environment, validate, Environment};
    use crate::geometry::Polygon;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn sig(s: &str) -> Signature {
        s.parse().unwrap()
    }

    fn single(l: f64) -> CoverComplex {
        build_from_environment(&validate(single_obstacle_environment(l)).unwrap()).unwrap()
    }

    #[test]
    fn obstacle_free_cover_is_the_base() {
        let ws = Polygon::new(vec![p(0., 0.), p(10., 0.), p(10., 10.), p(0., 10.)]).unwrap();
        let venv = validate(Environment { workspace: ws, obstacles: vec![], anchor: p(5., 5.), tether_length: 20.0, generators: None }).unwrap();
        let c = build_from_environment(&venv).unwrap();
        assert_eq!(c.triangles.len(), c.triangulation.triangles.len());
        assert_eq!(c.stats().layers, 1);
        assert!(c.triangles.iter().all(|t| t.signature.is_identity()));
        assert_eq!(c.euler_characteristic(), 1);
        assert!(c.dual_is_spanning_tree());
    }

    #[test]
    fn anchor_copy_is_first() {
        let c = single(10.0);
        let a = c.anchor_point().unwrap();
        assert_eq!(a.point, p(2., 5.));
        assert!(c.triangles[a.copy].signature.is_identity());
        assert_eq!(c.triangles[a.copy].base_triangle, c.triangulation.locate(p(2., 5.)).unwrap());
        let pre = c.preimage(p(2., 5.)).unwrap();
        assert_eq!(pre.len(), 1);
        assert_eq!(pre[0].copy, a.copy);
    }

    #[test]
    fn simply_connected_at_several_lengths() {
        for l in [6.0, 7.0, 10.0, 15.0, 25.0] {
            let c = single(l);
            assert_eq!(c.euler_characteristic(), 1, "l = {l}");
            assert!(c.dual_is_spanning_tree(), "l = {l}");
        }
    }

    #[test]
    fn truncation_is_monotone() {
        let keys = |c: &CoverComplex| -> BTreeSet<(usize, Signature)> {
            c.triangles.iter().map(|t| (t.base_triangle, t.signature.clone())).collect()
        };
        let mut prev = keys(&single(6.0));
        for l in [7.0, 10.0, 14.0, 20.0] {
            let next = keys(&single(l));
            assert!(prev.is_subset(&next));
            prev = next;
        }
    }

    #[test]
    fn vertices_are_within_reach() {
        let c = single(12.0);
        let a = c.anchor_point().unwrap();
        for (i, v) in c.vertices.iter().enumerate() {
            let copy = c.triangles.iter().position(|t| t.corners.contains(&i)).unwrap();
            let b = LiftedPoint { copy, point: c.triangulation.vertices[v.base_vertex] };
            let (_, d) = c.shortest_in_cover(&a, &b).unwrap();
            assert!(d <= 12.0 + 1e-9);
        }
    }

    #[test]
    fn deterministic_build() {
        assert_eq!(single(15.0).dump(), single(15.0).dump());
    }

    #[test]
    fn constant_path_lifts_to_the_anchor_copy() {
        let c = single(10.0);
        let lp = c.lift_path(&Polyline::new(vec![p(2., 5.)]).unwrap()).unwrap();
        assert_eq!(Some(lp.copy), c.anchor_copy);
    }

    #[test]
    fn lifts_below_and_above_differ() {
        // The triangle holding (8,5) has a far corner at 11.45 in either class.
        let c = single(12.0);
        let below = Polyline::new(vec![p(2., 5.), p(3., 2.), p(7., 2.), p(8., 5.)]).unwrap();
        let above = Polyline::new(vec![p(2., 5.), p(3., 8.), p(7., 8.), p(8., 5.)]).unwrap();
        let lb = c.lift_path(&below).unwrap();
        let la = c.lift_path(&above).unwrap();
        assert_ne!(lb.copy, la.copy);
        assert_eq!(c.triangles[lb.copy].base_triangle, c.triangles[la.copy].base_triangle);
        let a = c.anchor_point().unwrap();
        let (pb, db) = c.shortest_in_cover(&a, &lb).unwrap();
        let (pa, da) = c.shortest_in_cover(&a, &la).unwrap();
        let expected = 2.0 * 5f64.sqrt() + 2.0;
        assert!((db - expected).abs() < 1e-9 && (da - expected).abs() < 1e-9);
        assert_eq!(pb.points[1], p(4., 4.));
        assert_eq!(pa.points[1], p(4., 6.));
        // Homotopic paths lift to the same copy.
        let below2 = Polyline::new(vec![p(2., 5.), p(2., 1.), p(9., 1.), p(8., 5.)]).unwrap();
        assert_eq!(c.lift_path(&below2).unwrap().copy, lb.copy);
    }

    #[test]
    fn double_winding_exceeds_a_short_tether() {
        let c = single(7.0);
        let wind = Polyline::new(vec![
            p(2., 5.), p(3., 2.), p(7., 2.), p(8., 8.), p(3., 8.), p(3., 2.), p(7., 2.), p(8., 8.), p(3., 8.), p(2.5, 5.),
        ])
        .unwrap();
        assert!(matches!(c.lift_path(&wind), Err(Error::LiftExceedsTether(_))));
    }

    #[test]
    fn projection_errors() {
        let c = single(10.0);
        assert!(matches!(c.project_triangle(10_000), Err(Error::ElementNotInComplex(_))));
        assert!(matches!(c.project_vertex(10_000), Err(Error::ElementNotInComplex(_))));
        let v = &c.vertices[0];
        assert_eq!(c.project_vertex(0).unwrap(), c.triangulation.vertices[v.base_vertex]);
    }

    #[test]
    fn layer_listing_has_identity_first() {
        let c = single(10.0);
        let layers = c.layers();
        assert_eq!(layers.keys().next(), Some(&sig("")));
        assert!(c.dump().contains("layer \"\":"));
    }
}
