//! Planar primitives and exact predicates.
//!
//! Orientation decisions go through Shewchuk's adaptive-precision `orient2d`,
//! so every combinatorial choice made downstream (side of a ray, containment
//! in a triangle, funnel turns) is exact for the floating point inputs given.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Tolerance used for snapping and point equality in I/O. Never used inside
/// predicates.
pub const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Point { x: v[0], y: v[1] }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        Point::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }

    /// Lexicographic total order on (x, y).
    pub fn lex_cmp(&self, o: &Point) -> std::cmp::Ordering {
        self.x.total_cmp(&o.x).then(self.y.total_cmp(&o.y))
    }

    pub fn approx_eq(&self, o: Point) -> bool {
        self.dist(o) <= EPS
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
            Orientation::Collinear => Orientation::Collinear,
        }
    }

    /// +1, -1 or 0.
    pub fn sign(self) -> i32 {
        match self {
            Orientation::Ccw => 1,
            Orientation::Cw => -1,
            Orientation::Collinear => 0,
        }
    }
}

fn coord(p: Point) -> robust::Coord<f64> {
    robust::Coord { x: p.x, y: p.y }
}

/// Sign of the signed area of the triangle `pqr`, evaluated exactly.
pub fn orient(p: Point, q: Point, r: Point) -> Orientation {
    let det = robust::orient2d(coord(p), coord(q), coord(r));
    if det > 0.0 {
        Orientation::Ccw
    } else if det < 0.0 {
        Orientation::Cw
    } else {
        Orientation::Collinear
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub p: Point,
    pub q: Point,
}

impl Segment {
    pub fn new(p: Point, q: Point) -> Result<Self> {
        if p == q {
            return Err(Error::DegenerateInput(format!("zero-length segment at {p}")));
        }
        Ok(Segment { p, q })
    }

    pub fn length(&self) -> f64 {
        self.p.dist(self.q)
    }

    pub fn midpoint(&self) -> Point {
        self.p.lerp(self.q, 0.5)
    }
}

/// `r` is collinear with `p`, `q` and inside their bounding box.
fn on_segment_collinear(p: Point, q: Point, r: Point) -> bool {
    r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
}

/// Whether `r` lies on the closed segment `pq`.
pub fn point_on_segment(p: Point, q: Point, r: Point) -> bool {
    orient(p, q, r) == Orientation::Collinear && on_segment_collinear(p, q, r)
}

/// Whether `r` lies strictly between `p` and `q` on the segment `pq`.
pub fn point_strictly_inside_segment(p: Point, q: Point, r: Point) -> bool {
    r != p && r != q && point_on_segment(p, q, r)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SegmentIntersection {
    None,
    /// Interiors cross at a single point.
    Proper(Point),
    /// The segments meet at a single point that is an endpoint of at least one.
    Touching(Point),
    /// Collinear with a shared piece of positive length.
    Overlap,
}

pub fn segment_intersection(s1: &Segment, s2: &Segment) -> SegmentIntersection {
    let (a, b, c, d) = (s1.p, s1.q, s2.p, s2.q);
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);

    if o1 == Orientation::Collinear && o2 == Orientation::Collinear {
        // Project onto the dominant axis of s1.
        let use_x = (b.x - a.x).abs() >= (b.y - a.y).abs();
        let key = |p: Point| if use_x { p.x } else { p.y };
        let (lo1, hi1) = minmax(key(a), key(b));
        let (lo2, hi2) = minmax(key(c), key(d));
        let lo = lo1.max(lo2);
        let hi = hi1.min(hi2);
        if lo > hi {
            return SegmentIntersection::None;
        }
        if lo == hi {
            let p = [a, b, c, d].into_iter().find(|p| key(*p) == lo).unwrap();
            return SegmentIntersection::Touching(p);
        }
        return SegmentIntersection::Overlap;
    }

    if o1 != o2
        && o3 != o4
        && o1 != Orientation::Collinear
        && o2 != Orientation::Collinear
        && o3 != Orientation::Collinear
        && o4 != Orientation::Collinear
    {
        return SegmentIntersection::Proper(line_intersection(a, b, c, d));
    }

    if o1 == Orientation::Collinear && on_segment_collinear(a, b, c) {
        return SegmentIntersection::Touching(c);
    }
    if o2 == Orientation::Collinear && on_segment_collinear(a, b, d) {
        return SegmentIntersection::Touching(d);
    }
    if o3 == Orientation::Collinear && on_segment_collinear(c, d, a) {
        return SegmentIntersection::Touching(a);
    }
    if o4 == Orientation::Collinear && on_segment_collinear(c, d, b) {
        return SegmentIntersection::Touching(b);
    }
    SegmentIntersection::None
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Intersection of the supporting lines of `ab` and `cd` (assumed non-parallel).
pub fn line_intersection(a: Point, b: Point, c: Point, d: Point) -> Point {
    let r = b - a;
    let s = d - c;
    let t = (c - a).cross(s) / r.cross(s);
    a + r.scale(t)
}

/// A path, stored as its vertex sequence. A single point is the constant path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<Point>,
}

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::DegenerateInput("empty polyline".into()));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::DegenerateInput(format!("non-finite point {p}")));
        }
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DegenerateInput("repeated consecutive polyline vertex".into()));
        }
        Ok(Polyline { points })
    }

    /// Builds a polyline dropping consecutive duplicates.
    pub fn from_points_dedup(points: impl IntoIterator<Item = Point>) -> Self {
        let mut out: Vec<Point> = Vec::new();
        for p in points {
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
        Polyline { points: out }
    }

    pub fn start(&self) -> Point {
        self.points[0]
    }

    pub fn end(&self) -> Point {
        *self.points.last().unwrap()
    }

    pub fn length(&self) -> f64 {
        polyline_length(self)
    }

    pub fn reversed(&self) -> Polyline {
        let mut pts = self.points.clone();
        pts.reverse();
        Polyline { points: pts }
    }

    /// Concatenation at a shared endpoint.
    pub fn concat(&self, other: &Polyline) -> Polyline {
        Polyline::from_points_dedup(self.points.iter().chain(other.points.iter()).copied())
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }
}

pub fn polyline_length(p: &Polyline) -> f64 {
    p.points.windows(2).fold(0.0, |acc, w| acc + w[0].dist(w[1]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointLocation {
    Inside,
    Outside,
    Boundary,
}

/// Simple polygon, counterclockwise, implicitly closed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<Point>,
}

impl Polygon {
    /// Validates simplicity and non-degeneracy, reorienting to counterclockwise.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() >= 2 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!("{} vertices, need at least 3", vertices.len())));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidPolygon(format!("non-finite vertex {p}")));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::InvalidPolygon(format!("repeated vertex {}", vertices[i])));
            }
        }
        let area = signed_area(&vertices);
        if area == 0.0 {
            return Err(Error::InvalidPolygon("zero area".into()));
        }
        let poly = Polygon { vertices };
        if !poly.is_simple() {
            return Err(Error::InvalidPolygon("self-intersecting boundary".into()));
        }
        let mut poly = poly;
        if area < 0.0 {
            poly.vertices.reverse();
        }
        Ok(poly)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices).abs()
    }

    pub fn centroid(&self) -> Point {
        let mut a = 0.0;
        let mut cx = 0.0;
        let mut cy = 0.0;
        for (p, q) in self.edges() {
            let c = p.cross(q);
            a += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        Point::new(cx / (3.0 * a), cy / (3.0 * a))
    }

    pub fn bbox(&self) -> (Point, Point) {
        bbox(self.vertices.iter().copied())
    }

    fn is_simple(&self) -> bool {
        let edges: Vec<(Point, Point)> = self.edges().collect();
        let n = edges.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let s1 = Segment { p: edges[i].0, q: edges[i].1 };
                let s2 = Segment { p: edges[j].0, q: edges[j].1 };
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                match segment_intersection(&s1, &s2) {
                    SegmentIntersection::None => {}
                    SegmentIntersection::Touching(p) if adjacent => {
                        // Only the shared vertex may touch.
                        let shared = if j == i + 1 { edges[i].1 } else { edges[i].0 };
                        if p != shared {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
        }
        true
    }
}

pub fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum::<f64>()
        / 2.0
}

pub fn bbox(points: impl Iterator<Item = Point>) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

/// Winding-number point location with an explicit boundary state.
pub fn point_in_polygon(p: Point, poly: &Polygon) -> PointLocation {
    let mut winding = 0i32;
    for (a, b) in poly.edges() {
        let o = orient(a, b, p);
        if o == Orientation::Collinear && on_segment_collinear(a, b, p) {
            return PointLocation::Boundary;
        }
        if a.y <= p.y {
            if b.y > p.y && o == Orientation::Ccw {
                winding += 1;
            }
        } else if b.y <= p.y && o == Orientation::Cw {
            winding -= 1;
        }
    }
    if winding != 0 {
        PointLocation::Inside
    } else {
        PointLocation::Outside
    }
}

/// Area of the intersection of a polygon with an axis-aligned rectangle
/// (Sutherland–Hodgman clipping against the convex rectangle).
pub fn polygon_rect_overlap_area(poly: &Polygon, lo: Point, hi: Point) -> f64 {
    let mut pts: Vec<Point> = poly.vertices.clone();
    // Each clip plane: keep points with inside(p) true.
    let planes: [(u8, f64); 4] = [(0, lo.x), (1, hi.x), (2, lo.y), (3, hi.y)];
    for (kind, v) in planes {
        if pts.is_empty() {
            break;
        }
        let inside = |p: &Point| match kind {
            0 => p.x >= v,
            1 => p.x <= v,
            2 => p.y >= v,
            _ => p.y <= v,
        };
        let cut = |a: Point, b: Point| -> Point {
            if kind < 2 {
                let t = (v - a.x) / (b.x - a.x);
                Point::new(v, a.y + t * (b.y - a.y))
            } else {
                let t = (v - a.y) / (b.y - a.y);
                Point::new(a.x + t * (b.x - a.x), v)
            }
        };
        let mut out = Vec::with_capacity(pts.len() + 4);
        let n = pts.len();
        for i in 0..n {
            let cur = pts[i];
            let prev = pts[(i + n - 1) % n];
            match (inside(&prev), inside(&cur)) {
                (true, true) => out.push(cur),
                (true, false) => out.push(cut(prev, cur)),
                (false, true) => {
                    out.push(cut(prev, cur));
                    out.push(cur);
                }
                (false, false) => {}
            }
        }
        pts = out;
    }
    if pts.len() < 3 {
        0.0
    } else {
        signed_area(&pts).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn unit_square() -> Polygon {
        Polygon::new(vec![p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]).unwrap()
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(p(0., 0.), p(1., 0.), p(0., 1.)), Orientation::Ccw);
        assert_eq!(orient(p(0., 0.), p(1., 0.), p(2., 0.)), Orientation::Collinear);
        assert_eq!(orient(p(0., 0.), p(0., 1.), p(1., 0.)), Orientation::Cw);
    }

    #[test]
    fn orient_is_exact_on_near_degenerate_input() {
        // Points on the diagonal, and one a few ulps off it.
        let a = p(0.5, 0.5);
        let b = p(12.0, 12.0);
        let c = p(24.0, 24.0);
        assert_eq!(orient(a, b, c), Orientation::Collinear);
        let c2 = p(24.0, 24.0 + f64::EPSILON * 16.0);
        assert_eq!(orient(a, b, c2), Orientation::Ccw);
    }

    #[test]
    fn segment_intersection_examples() {
        let s = |a: (f64, f64), b: (f64, f64)| Segment::new(p(a.0, a.1), p(b.0, b.1)).unwrap();
        assert_eq!(
            segment_intersection(&s((0., 0.), (2., 2.)), &s((0., 2.), (2., 0.))),
            SegmentIntersection::Proper(p(1., 1.))
        );
        assert_eq!(
            segment_intersection(&s((0., 0.), (1., 0.)), &s((2., 0.), (3., 0.))),
            SegmentIntersection::None
        );
        assert_eq!(
            segment_intersection(&s((0., 0.), (1., 1.)), &s((1., 1.), (2., 0.))),
            SegmentIntersection::Touching(p(1., 1.))
        );
        assert_eq!(
            segment_intersection(&s((0., 0.), (2., 0.)), &s((1., 0.), (3., 0.))),
            SegmentIntersection::Overlap
        );
        assert_eq!(
            segment_intersection(&s((0., 0.), (2., 0.)), &s((1., 0.), (1., 5.))),
            SegmentIntersection::Touching(p(1., 0.))
        );
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert!(Segment::new(p(1., 1.), p(1., 1.)).is_err());
    }

    #[test]
    fn polyline_length_examples() {
        let l = |v: Vec<Point>| polyline_length(&Polyline::new(v).unwrap());
        assert_eq!(l(vec![p(0., 0.), p(3., 4.)]), 5.0);
        assert_eq!(l(vec![p(0., 0.), p(1., 0.), p(1., 1.)]), 2.0);
        let got = l(vec![p(2., 5.), p(4., 4.), p(6., 4.), p(8., 5.)]);
        let brute = 5f64.sqrt() + 2.0 + 5f64.sqrt();
        assert!((got - brute).abs() < 1e-12);
        assert!((got - 6.4721).abs() < 1e-4);
    }

    #[test]
    fn point_in_polygon_examples() {
        let sq = unit_square();
        assert_eq!(point_in_polygon(p(0.5, 0.5), &sq), PointLocation::Inside);
        assert_eq!(point_in_polygon(p(2., 2.), &sq), PointLocation::Outside);
        assert_eq!(point_in_polygon(p(1., 0.5), &sq), PointLocation::Boundary);
        assert_eq!(point_in_polygon(p(0., 0.), &sq), PointLocation::Boundary);
        // Ray through a vertex must not double count.
        let diamond = Polygon::new(vec![p(0., -1.), p(1., 0.), p(0., 1.), p(-1., 0.)]).unwrap();
        assert_eq!(point_in_polygon(p(-2., 0.), &diamond), PointLocation::Outside);
        assert_eq!(point_in_polygon(p(0.5, 0.), &diamond), PointLocation::Inside);
    }

    #[test]
    fn polygon_is_reoriented_and_validated() {
        let cw = Polygon::new(vec![p(0., 0.), p(0., 1.), p(1., 1.), p(1., 0.)]).unwrap();
        assert!(signed_area(&cw.vertices) > 0.0);
        let bowtie = Polygon::new(vec![p(0., 0.), p(1., 1.), p(1., 0.), p(0., 1.)]);
        assert!(matches!(bowtie, Err(Error::InvalidPolygon(_))));
        let flat = Polygon::new(vec![p(0., 0.), p(1., 0.), p(2., 0.)]);
        assert!(flat.is_err());
    }

    #[test]
    fn overlap_area_against_rectangle() {
        let sq = Polygon::new(vec![p(4., 4.), p(6., 4.), p(6., 6.), p(4., 6.)]).unwrap();
        assert!((polygon_rect_overlap_area(&sq, p(5., 5.), p(7., 7.)) - 1.0).abs() < 1e-12);
        assert_eq!(polygon_rect_overlap_area(&sq, p(6., 4.), p(7., 5.)), 0.0);
        assert!((polygon_rect_overlap_area(&sq, p(0., 0.), p(10., 10.)) - 4.0).abs() < 1e-12);
    }
}
