#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use tether_cover::environment::{validate, Environment};
use tether_cover::geometry::{Point, Polygon};
use tether_cover::ValidatedEnvironment;

pub fn q(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite")
}

/// Sign of the exact determinant of (b - a, c - a).
pub fn exact_orient(a: Point, b: Point, c: Point) -> i32 {
    let l = (b.x - a.x) * (c.y - a.y);
    let r = (b.y - a.y) * (c.x - a.x);
    let det = l - r;
    if det.abs() > 1e-14 * (l.abs() + r.abs()) {
        return if det > 0.0 { 1 } else { -1 };
    }
    rational_orient(a, b, c)
}

pub fn rational_orient(a: Point, b: Point, c: Point) -> i32 {
    let (ax, ay, bx, by, cx, cy) = (q(a.x), q(a.y), q(b.x), q(b.y), q(c.x), q(c.y));
    let d = (bx - &ax) * (cy - &ay) - (by - &ay) * (cx - ax);
    if d.is_zero() {
        0
    } else if d.is_positive() {
        1
    } else {
        -1
    }
}

fn exact_between(a: Point, b: Point, c: Point) -> bool {
    // c collinear with a-b: inside the closed box
    let within = |p: f64, q1: f64, r: f64| p.min(q1) <= r && r <= p.max(q1);
    within(a.x, b.x, c.x) && within(a.y, b.y, c.y)
}

/// Exact test that segments ab and cd cross at a single interior point of both.
pub fn proper_crossing(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = exact_orient(a, b, c);
    let o2 = exact_orient(a, b, d);
    let o3 = exact_orient(c, d, a);
    let o4 = exact_orient(c, d, b);
    o1 * o2 < 0 && o3 * o4 < 0
}

pub fn on_segment(a: Point, b: Point, c: Point) -> bool {
    exact_orient(a, b, c) == 0 && exact_between(a, b, c)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Inside,
    Boundary,
    Outside,
}

pub fn locate(p: Point, poly: &[Point]) -> Side {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if on_segment(a, b, p) {
            return Side::Boundary;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    if inside {
        Side::Inside
    } else {
        Side::Outside
    }
}

/// Closed free region: workspace minus open obstacles, cut by slits that a
/// path may not cross.
pub struct Domain {
    pub workspace: Vec<Point>,
    pub obstacles: Vec<Vec<Point>>,
    pub slits: Vec<(Point, Point)>,
}

impl Domain {
    pub fn from_env(env: &Environment) -> Self {
        Domain {
            workspace: env.workspace.vertices.clone(),
            obstacles: env.obstacles.iter().map(|o| o.vertices.clone()).collect(),
            slits: vec![],
        }
    }

    fn edges(&self) -> Vec<(Point, Point)> {
        let mut out = Vec::new();
        for poly in std::iter::once(&self.workspace).chain(self.obstacles.iter()) {
            for i in 0..poly.len() {
                out.push((poly[i], poly[(i + 1) % poly.len()]));
            }
        }
        out.extend(self.slits.iter().copied());
        out
    }

    pub fn vertices(&self) -> Vec<Point> {
        let mut v: Vec<Point> = self.workspace.clone();
        for o in &self.obstacles {
            v.extend(o.iter().copied());
        }
        v
    }

    pub fn contains(&self, p: Point) -> bool {
        locate(p, &self.workspace) != Side::Outside
            && self.obstacles.iter().all(|o| locate(p, o) != Side::Inside)
    }

    /// Whether the closed segment pq stays in the free region.
    pub fn visible(&self, p: Point, r: Point) -> bool {
        let edges = self.edges();
        if edges.iter().any(|&(a, b)| proper_crossing(p, r, a, b)) {
            return false;
        }
        let len2 = (r.x - p.x).powi(2) + (r.y - p.y).powi(2);
        let mut ts = vec![0.0, 1.0];
        for v in self.vertices() {
            if on_segment(p, r, v) {
                ts.push(((v.x - p.x) * (r.x - p.x) + (v.y - p.y) * (r.y - p.y)) / len2);
            }
        }
        ts.sort_by(f64::total_cmp);
        ts.windows(2).all(|w| w[1] - w[0] < 1e-15 || self.contains(p.lerp(r, 0.5 * (w[0] + w[1]))))
    }

    /// Dijkstra over the visibility graph of `a`, `b` and all polygon vertices.
    pub fn shortest(&self, a: Point, b: Point) -> Option<(f64, Vec<Point>)> {
        let mut nodes = vec![a, b];
        nodes.extend(self.vertices());
        let n = nodes.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut prev = vec![usize::MAX; n];
        let mut done = vec![false; n];
        dist[0] = 0.0;
        for _ in 0..n {
            let u = (0..n).filter(|&i| !done[i]).min_by(|&i, &j| dist[i].total_cmp(&dist[j]))?;
            if dist[u].is_infinite() {
                return None;
            }
            done[u] = true;
            if u == 1 {
                break;
            }
            for v in 0..n {
                if done[v] || !self.visible(nodes[u], nodes[v]) {
                    continue;
                }
                let d = dist[u] + nodes[u].dist(nodes[v]);
                if d < dist[v] {
                    dist[v] = d;
                    prev[v] = u;
                }
            }
        }
        let mut path = vec![b];
        let mut k = 1;
        while k != 0 {
            k = prev[k];
            path.push(nodes[k]);
        }
        path.reverse();
        Some((dist[1], path))
    }
}

pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Polygon {
    Polygon::new(vec![Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)]).unwrap()
}

pub fn poly(pts: &[(f64, f64)]) -> Polygon {
    Polygon::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
}

/// Hand-built environments with one or two interior obstacles.
pub fn small_environments(l: f64) -> Vec<ValidatedEnvironment> {
    let envs = vec![
        Environment {
            workspace: rect(0., 0., 10., 10.),
            obstacles: vec![rect(4., 4., 6., 6.)],
            anchor: Point::new(2., 5.),
            tether_length: l,
            generators: None,
        },
        Environment {
            workspace: rect(0., 0., 10., 10.),
            obstacles: vec![poly(&[(3.2, 3.1), (6.9, 3.6), (4.7, 6.8)])],
            anchor: Point::new(1.3, 1.7),
            tether_length: l,
            generators: None,
        },
        Environment {
            workspace: rect(0., 0., 10., 10.),
            obstacles: vec![poly(&[(3.1, 2.2), (7.3, 2.4), (7.1, 7.6), (5.9, 7.4), (6.0, 3.6), (3.0, 3.4)])],
            anchor: Point::new(8.6, 5.1),
            tether_length: l,
            generators: None,
        },
        Environment {
            workspace: rect(0., 0., 10., 10.),
            obstacles: vec![rect(2.1, 3.9, 3.8, 6.2), rect(6.3, 3.7, 7.9, 6.1)],
            anchor: Point::new(5.1, 1.2),
            tether_length: l,
            generators: None,
        },
        Environment {
            workspace: poly(&[(0., 0.), (10., 0.), (10., 7.), (6., 10.), (0., 10.)]),
            obstacles: vec![poly(&[(1.9, 2.1), (4.2, 1.8), (3.6, 4.3)]), poly(&[(5.6, 5.2), (7.7, 4.9), (7.2, 7.1), (5.3, 6.8)])],
            anchor: Point::new(1.1, 8.2),
            tether_length: l,
            generators: None,
        },
    ];
    envs.into_iter().map(|e| validate(e).unwrap()).collect()
}

/// Triangle path between two triangles in the dual adjacency (BFS, lowest id first).
pub fn dual_path(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = BTreeMap::new();
    prev.insert(from, from);
    let mut queue = VecDeque::from([from]);
    while let Some(t) = queue.pop_front() {
        if t == to {
            break;
        }
        for &u in &adj[t] {
            if let std::collections::btree_map::Entry::Vacant(e) = prev.entry(u) {
                e.insert(t);
                queue.push_back(u);
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(prev[path.last().unwrap()]);
    }
    path.reverse();
    path
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-12)
}
