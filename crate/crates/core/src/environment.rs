//! Workspace, obstacles, anchor, tether length and the generator rays that
//! define homotopy signatures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    point_in_polygon, point_on_segment, segment_intersection, Point, PointLocation, Polygon,
    Segment, SegmentIntersection,
};

#[derive(Clone, Debug, PartialEq)]
pub struct Environment {
    pub workspace: Polygon,
    pub obstacles: Vec<Polygon>,
    pub anchor: Point,
    pub tether_length: f64,
    /// Explicit generator rays; overrides [`compute_generators`] when present.
    pub generators: Option<Vec<GeneratorSpec>>,
}

/// A user-supplied generator ray, before validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub obstacle: usize,
    pub origin: Point,
    pub direction: Point,
}

/// Ray `origin + t * direction, t >= 0` anchored inside an obstacle.
///
/// All crossing tests use the segment `origin -> far`, where `far` is the ray's
/// exit point from the workspace bounding box inflated by one unit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub obstacle_id: usize,
    pub origin: Point,
    pub direction: Point,
    pub far: Point,
}

impl Generator {
    pub fn segment(&self) -> Segment {
        Segment { p: self.origin, q: self.far }
    }

    /// Whether `p` lies on the clipped ray.
    pub fn contains(&self, p: Point) -> bool {
        point_on_segment(self.origin, self.far, p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidatedEnvironment {
    pub env: Environment,
    /// Indices of obstacles that can be encircled by a loop in the free space.
    pub relevant: Vec<usize>,
    explicit_generators: Option<Vec<Generator>>,
}

impl ValidatedEnvironment {
    pub fn m(&self) -> usize {
        self.relevant.len()
    }

    /// Explicit generators if the document supplied them, otherwise the
    /// deterministic construction.
    pub fn generators(&self) -> Result<Vec<Generator>> {
        match &self.explicit_generators {
            Some(g) => Ok(g.clone()),
            None => compute_generators(self),
        }
    }

    /// All polygon vertices of the environment.
    pub fn vertices(&self) -> impl Iterator<Item = Point> + '_ {
        self.env
            .workspace
            .vertices
            .iter()
            .chain(self.env.obstacles.iter().flat_map(|o| o.vertices.iter()))
            .copied()
    }
}

fn polygons_intersect(a: &Polygon, b: &Polygon) -> bool {
    for (p, q) in a.edges() {
        for (r, s) in b.edges() {
            if segment_intersection(&Segment { p, q }, &Segment { p: r, q: s })
                != SegmentIntersection::None
            {
                return true;
            }
        }
    }
    point_in_polygon(a.vertices[0], b) != PointLocation::Outside
        || point_in_polygon(b.vertices[0], a) != PointLocation::Outside
}

fn contained_in(inner: &Polygon, outer: &Polygon) -> bool {
    if inner
        .vertices
        .iter()
        .any(|v| point_in_polygon(*v, outer) == PointLocation::Outside)
    {
        return false;
    }
    for (p, q) in inner.edges() {
        for (r, s) in outer.edges() {
            if let SegmentIntersection::Proper(_) =
                segment_intersection(&Segment { p, q }, &Segment { p: r, q: s })
            {
                return false;
            }
        }
        if point_in_polygon(p.lerp(q, 0.5), outer) == PointLocation::Outside {
            return false;
        }
    }
    true
}

pub fn validate(env: Environment) -> Result<ValidatedEnvironment> {
    if !(env.tether_length.is_finite() && env.tether_length > 0.0) {
        return Err(Error::NonpositiveTether(env.tether_length));
    }
    if !env.anchor.is_finite() {
        return Err(Error::Parse("non-finite anchor".into()));
    }
    for (i, o) in env.obstacles.iter().enumerate() {
        if !contained_in(o, &env.workspace) {
            return Err(Error::ObstacleOutsideWorkspace(i));
        }
    }
    for i in 0..env.obstacles.len() {
        for j in (i + 1)..env.obstacles.len() {
            if polygons_intersect(&env.obstacles[i], &env.obstacles[j]) {
                return Err(Error::OverlappingObstacles(i, j));
            }
        }
    }
    if point_in_polygon(env.anchor, &env.workspace) == PointLocation::Outside {
        return Err(Error::AnchorOutsideWorkspace);
    }
    for (i, o) in env.obstacles.iter().enumerate() {
        if point_in_polygon(env.anchor, o) != PointLocation::Outside {
            return Err(Error::AnchorInObstacle(i));
        }
    }
    let relevant = classify_homotopy_relevant(&env);
    let mut venv = ValidatedEnvironment { env, relevant, explicit_generators: None };
    if let Some(specs) = venv.env.generators.clone() {
        venv.explicit_generators = Some(validate_generators(&venv, &specs)?);
    }
    Ok(venv)
}

/// Obstacles whose closure does not meet the workspace boundary.
pub fn classify_homotopy_relevant(env: &Environment) -> Vec<usize> {
    env.obstacles
        .iter()
        .enumerate()
        .filter(|(_, o)| !polygon_touches_boundary(o, &env.workspace))
        .map(|(i, _)| i)
        .collect()
}

fn polygon_touches_boundary(o: &Polygon, w: &Polygon) -> bool {
    for (p, q) in o.edges() {
        for (r, s) in w.edges() {
            if segment_intersection(&Segment { p, q }, &Segment { p: r, q: s })
                != SegmentIntersection::None
            {
                return true;
            }
        }
    }
    false
}

fn clip_box(venv: &ValidatedEnvironment) -> (Point, Point) {
    let (lo, hi) = venv.env.workspace.bbox();
    (Point::new(lo.x - 1.0, lo.y - 1.0), Point::new(hi.x + 1.0, hi.y + 1.0))
}

/// Exit point of the ray from the box `[lo, hi]` (origin assumed inside).
fn clip_ray(origin: Point, dir: Point, lo: Point, hi: Point) -> Point {
    let mut t = f64::INFINITY;
    if dir.x > 0.0 {
        t = t.min((hi.x - origin.x) / dir.x);
    } else if dir.x < 0.0 {
        t = t.min((lo.x - origin.x) / dir.x);
    }
    if dir.y > 0.0 {
        t = t.min((hi.y - origin.y) / dir.y);
    } else if dir.y < 0.0 {
        t = t.min((lo.y - origin.y) / dir.y);
    }
    origin + dir.scale(t)
}

/// A point strictly inside the polygon: the area centroid when it is inside,
/// otherwise the midpoint of the longest vertical chord through the interior.
pub fn interior_point(poly: &Polygon) -> Point {
    let c = poly.centroid();
    if point_in_polygon(c, poly) == PointLocation::Inside {
        return c;
    }
    let mut xs: Vec<f64> = vec![c.x];
    let mut vx: Vec<f64> = poly.vertices.iter().map(|v| v.x).collect();
    vx.sort_by(f64::total_cmp);
    vx.dedup();
    xs.extend(vx.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    for x in xs {
        if poly.vertices.iter().any(|v| v.x == x) {
            continue;
        }
        let mut ys: Vec<f64> = poly
            .edges()
            .filter(|(p, q)| (p.x < x) != (q.x < x))
            .map(|(p, q)| p.y + (x - p.x) / (q.x - p.x) * (q.y - p.y))
            .collect();
        ys.sort_by(f64::total_cmp);
        let best = ys
            .chunks_exact(2)
            .max_by(|a, b| (a[1] - a[0]).total_cmp(&(b[1] - b[0])));
        if let Some(chord) = best {
            let m = Point::new(x, 0.5 * (chord[0] + chord[1]));
            if point_in_polygon(m, poly) == PointLocation::Inside {
                return m;
            }
        }
    }
    c
}

const ROTATION_STEP_DEG: f64 = 5.0;
const MAX_ROTATIONS: usize = 72;

/// One ray per homotopy-relevant obstacle, pointing up by default and rotated
/// counterclockwise in 5 degree steps until it is disjoint from the rays
/// already placed and passes through no environment vertex, the anchor, or
/// another obstacle's ray origin.
pub fn compute_generators(venv: &ValidatedEnvironment) -> Result<Vec<Generator>> {
    let (lo, hi) = clip_box(venv);
    let origins: Vec<Point> = venv
        .relevant
        .iter()
        .map(|&i| interior_point(&venv.env.obstacles[i]))
        .collect();
    let vertices: Vec<Point> = venv.vertices().collect();
    let mut out: Vec<Generator> = Vec::with_capacity(origins.len());
    for (k, &obstacle_id) in venv.relevant.iter().enumerate() {
        let origin = origins[k];
        let mut placed = None;
        for step in 0..MAX_ROTATIONS {
            let theta = (step as f64 * ROTATION_STEP_DEG).to_radians();
            let direction = if step == 0 {
                Point::new(0.0, 1.0)
            } else {
                Point::new(-theta.sin(), theta.cos())
            };
            let far = clip_ray(origin, direction, lo, hi);
            let g = Generator { obstacle_id, origin, direction, far };
            let blocked = out
                .iter()
                .any(|o| segment_intersection(&g.segment(), &o.segment()) != SegmentIntersection::None)
                || vertices.iter().any(|v| g.contains(*v))
                || g.contains(venv.env.anchor)
                || origins.iter().enumerate().any(|(j, p)| j != k && g.contains(*p));
            if !blocked {
                placed = Some(g);
                break;
            }
        }
        out.push(placed.ok_or(Error::GeneratorConstructionFailed(obstacle_id))?);
    }
    Ok(out)
}

fn validate_generators(venv: &ValidatedEnvironment, specs: &[GeneratorSpec]) -> Result<Vec<Generator>> {
    let (lo, hi) = clip_box(venv);
    let vertices: Vec<Point> = venv.vertices().collect();
    if specs.len() != venv.relevant.len() {
        return Err(Error::InvalidGenerator(format!(
            "{} generators given for {} homotopy-relevant obstacles",
            specs.len(),
            venv.relevant.len()
        )));
    }
    let mut out: Vec<Generator> = Vec::new();
    for s in specs {
        if !venv.relevant.contains(&s.obstacle) {
            return Err(Error::InvalidGenerator(format!("obstacle {} is not homotopy-relevant", s.obstacle)));
        }
        if out.iter().any(|g| g.obstacle_id == s.obstacle) {
            return Err(Error::InvalidGenerator(format!("duplicate generator for obstacle {}", s.obstacle)));
        }
        if point_in_polygon(s.origin, &venv.env.obstacles[s.obstacle]) != PointLocation::Inside {
            return Err(Error::InvalidGenerator(format!("origin {} not strictly inside obstacle", s.origin)));
        }
        let n = s.direction.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidGenerator("zero direction".into()));
        }
        let direction = s.direction.scale(1.0 / n);
        let g = Generator {
            obstacle_id: s.obstacle,
            origin: s.origin,
            direction,
            far: clip_ray(s.origin, direction, lo, hi),
        };
        if out
            .iter()
            .any(|o| segment_intersection(&g.segment(), &o.segment()) != SegmentIntersection::None)
        {
            return Err(Error::InvalidGenerator(format!("ray of obstacle {} intersects another ray", s.obstacle)));
        }
        if vertices.iter().any(|v| g.contains(*v)) || g.contains(venv.env.anchor) {
            return Err(Error::InvalidGenerator(format!(
                "ray of obstacle {} passes through a vertex or the anchor",
                s.obstacle
            )));
        }
        out.push(g);
    }
    // Order generators by obstacle index so signature letters are stable.
    out.sort_by_key(|g| g.obstacle_id);
    Ok(out)
}

/// On-disk environment document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentDoc {
    pub workspace: Vec<Point>,
    #[serde(default)]
    pub obstacles: Vec<Vec<Point>>,
    pub anchor: Point,
    pub tether_length: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<GeneratorSpec>>,
}

impl EnvironmentDoc {
    pub fn into_environment(self) -> Result<Environment> {
        let workspace = Polygon::new(self.workspace)?;
        let obstacles = self
            .obstacles
            .into_iter()
            .map(Polygon::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(Environment {
            workspace,
            obstacles,
            anchor: self.anchor,
            tether_length: self.tether_length,
            generators: self.generators,
        })
    }
}

impl From<&Environment> for EnvironmentDoc {
    fn from(env: &Environment) -> Self {
        EnvironmentDoc {
            workspace: env.workspace.vertices.clone(),
            obstacles: env.obstacles.iter().map(|o| o.vertices.clone()).collect(),
            anchor: env.anchor,
            tether_length: env.tether_length,
            generators: env.generators.clone(),
        }
    }
}

/// Parses and validates an environment document.
pub fn load_environment(text: &str) -> Result<ValidatedEnvironment> {
    let doc: EnvironmentDoc = serde_json::from_str(text)?;
    validate(doc.into_environment()?)
}

/// Canonical serialization (counterclockwise polygons).
pub fn serialize_environment(env: &Environment) -> String {
    serde_json::to_string_pretty(&EnvironmentDoc::from(env)).expect("environment serializes")
}

fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Polygon {
    Polygon::new(vec![
        Point::new(x0, y0),
        Point::new(x1, y0),
        Point::new(x1, y1),
        Point::new(x0, y1),
    ])
    .expect("valid rectangle")
}

/// Random 10x10 environment with `m` interior quadrilateral obstacles,
/// reproducible from `seed`.
pub fn random_environment(m: usize, tether_length: f64, seed: u64) -> Environment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = 10.0;
    let margin = 0.6;
    let mut placed: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut obstacles = Vec::new();
    let mut attempts = 0;
    while obstacles.len() < m {
        attempts += 1;
        assert!(attempts < 100_000, "cannot place {m} obstacles");
        let w = rng.gen_range(0.6..1.6);
        let h = rng.gen_range(0.6..1.6);
        let x0 = rng.gen_range(margin..size - margin - w);
        let y0 = rng.gen_range(margin..size - margin - h);
        let (x1, y1) = (x0 + w, y0 + h);
        if placed
            .iter()
            .any(|&(a, b, c, d)| x0 < c + margin && a < x1 + margin && y0 < d + margin && b < y1 + margin)
        {
            continue;
        }
        placed.push((x0, y0, x1, y1));
        // Jitter corners inward to get general-position quadrilaterals.
        let j = |r: &mut ChaCha8Rng| r.gen_range(0.0..0.25);
        let quad = Polygon::new(vec![
            Point::new(x0 + j(&mut rng) * w, y0 + j(&mut rng) * h),
            Point::new(x1 - j(&mut rng) * w, y0 + j(&mut rng) * h),
            Point::new(x1 - j(&mut rng) * w, y1 - j(&mut rng) * h),
            Point::new(x0 + j(&mut rng) * w, y1 - j(&mut rng) * h),
        ])
        .expect("jittered rectangle stays simple");
        obstacles.push(quad);
    }
    let anchor = loop {
        let p = Point::new(rng.gen_range(0.3..size - 0.3), rng.gen_range(0.3..size - 0.3));
        if placed
            .iter()
            .all(|&(a, b, c, d)| p.x < a - 0.2 || p.x > c + 0.2 || p.y < b - 0.2 || p.y > d + 0.2)
        {
            break p;
        }
    };
    Environment {
        workspace: rect(0.0, 0.0, size, size),
        obstacles,
        anchor,
        tether_length,
        generators: None,
    }
}

/// Random star-shaped obstacle-free workspace around (0, 0).
pub fn random_star_workspace(vertex_count: usize, seed: u64) -> Environment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // one jittered angle per sector keeps every gap below pi, so the polygon
    // is star-shaped around the origin
    let n = vertex_count.max(4);
    let sector = std::f64::consts::TAU / n as f64;
    let angles: Vec<f64> = (0..n).map(|i| (i as f64 + rng.gen_range(0.1..0.9)) * sector).collect();
    let vertices: Vec<Point> = angles
        .iter()
        .map(|a| {
            let r = rng.gen_range(2.0..6.0);
            Point::new(r * a.cos(), r * a.sin())
        })
        .collect();
    let workspace = Polygon::new(vertices).expect("star polygon is simple");
    Environment {
        workspace,
        obstacles: vec![],
        anchor: Point::new(0.0, 0.0),
        tether_length: 1.0,
        generators: None,
    }
}

/// The 10x10 workspace with the square obstacle [4,6]^2 and anchor (2,5).
pub fn single_obstacle_environment(tether_length: f64) -> Environment {
    Environment {
        workspace: rect(0.0, 0.0, 10.0, 10.0),
        obstacles: vec![rect(4.0, 4.0, 6.0, 6.0)],
        anchor: Point::new(2.0, 5.0),
        tether_length,
        generators: None,
    }
}
