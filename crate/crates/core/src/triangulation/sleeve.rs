use std::collections::{HashMap, VecDeque};

use super::Triangulation;
use crate::error::{Error, Result};
use crate::geometry::{orient, point_strictly_inside_segment, Orientation, Point, Polyline};

/// Shared edge between consecutive sleeve triangles, as vertex ids seen when
/// walking forward.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Portal {
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sleeve {
    pub triangles: Vec<usize>,
}

impl Sleeve {
    /// Single-triangle sleeve.
    pub fn single(t: usize) -> Self {
        Sleeve { triangles: vec![t] }
    }

    pub fn reversed(&self) -> Self {
        Sleeve { triangles: self.triangles.iter().rev().copied().collect() }
    }

    pub fn first(&self) -> usize {
        self.triangles[0]
    }

    pub fn last(&self) -> usize {
        *self.triangles.last().unwrap()
    }

    pub fn portals(&self, tri: &Triangulation) -> Result<Vec<Portal>> {
        self.triangles
            .windows(2)
            .map(|w| {
                tri.portal(w[0], w[1])
                    .ok_or_else(|| Error::SleeveInvalid(format!("triangles {} and {} are not adjacent", w[0], w[1])))
            })
            .collect()
    }

    /// Boundary of the sleeve polygon, counterclockwise. Vertices may repeat
    /// when the sleeve overlaps itself in the plane.
    pub fn polygon(&self, tri: &Triangulation) -> Result<Vec<Point>> {
        let first = self.first();
        if self.triangles.len() == 1 {
            return Ok(tri.triangle_points(first).to_vec());
        }
        let portals = self.portals(tri)?;
        let opposite = |t: usize, p: &Portal| {
            *tri.triangles[t].iter().find(|v| **v != p.left && **v != p.right).unwrap()
        };
        let mut ids = vec![opposite(first, &portals[0])];
        let mut rights: Vec<usize> = portals.iter().map(|p| p.right).collect();
        rights.dedup();
        ids.extend(rights);
        ids.push(opposite(self.last(), portals.last().unwrap()));
        let mut lefts: Vec<usize> = portals.iter().map(|p| p.left).collect();
        lefts.dedup();
        ids.extend(lefts.into_iter().rev());
        Ok(ids.into_iter().map(|v| tri.vertices[v]).collect())
    }
}

/// Sleeve along a dual path, with immediate backtracks `(t, u, t)` collapsed.
pub fn sleeve_between(tri: &Triangulation, dual_path: &[usize]) -> Result<Sleeve> {
    if dual_path.is_empty() {
        return Err(Error::SleeveInvalid("empty dual path".into()));
    }
    for &t in dual_path {
        if t >= tri.triangles.len() {
            return Err(Error::SleeveInvalid(format!("no triangle {t}")));
        }
    }
    for w in dual_path.windows(2) {
        if !tri.are_adjacent(w[0], w[1]) {
            return Err(Error::NotASleeve(w[0], w[1]));
        }
    }
    let mut stack: Vec<usize> = Vec::with_capacity(dual_path.len());
    for &t in dual_path {
        if stack.len() >= 2 && stack[stack.len() - 2] == t {
            stack.pop();
        } else {
            stack.push(t);
        }
    }
    Ok(Sleeve { triangles: stack })
}

/// Whether the direction `u -> q` enters triangle `t` at its corner `u`.
fn wedge_contains(tri: &Triangulation, t: usize, u: usize, q: Point) -> bool {
    let v = tri.triangles[t];
    let k = v.iter().position(|x| *x == u).unwrap();
    let (pu, pa, pb) = (tri.vertices[u], tri.vertices[v[(k + 1) % 3]], tri.vertices[v[(k + 2) % 3]]);
    orient(pu, pa, q) != Orientation::Cw && orient(pu, pb, q) != Orientation::Ccw
}

/// Breadth-first walk around vertex `u` from `start` to the triangle whose
/// corner at `u` contains the direction towards `q`. Returns the triangles
/// after `start`.
fn fan_walk(tri: &Triangulation, start: usize, u: usize, q: Point) -> Option<Vec<usize>> {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    parent.insert(start, start);
    while let Some(t) = queue.pop_front() {
        if wedge_contains(tri, t, u, q) {
            let mut path = vec![t];
            let mut c = t;
            while c != start {
                c = parent[&c];
                path.push(c);
            }
            path.pop();
            path.reverse();
            return Some(path);
        }
        for n in tri.adjacent(t) {
            if tri.triangles[n].contains(&u) && !parent.contains_key(&n) {
                parent.insert(n, t);
                queue.push_back(n);
            }
        }
    }
    None
}

/// Triangles visited by a polyline, in order, starting with the triangle
/// located at its first point. Consecutive entries are adjacent.
pub fn triangle_walk(tri: &Triangulation, path: &Polyline) -> Result<Vec<usize>> {
    let mut cur = tri.locate(path.start())?;
    let mut seq = vec![cur];
    for (k, (p0, q)) in path.segments().enumerate() {
        let mut p = p0;
        let mut guard = 0usize;
        loop {
            guard += 1;
            if guard > 4 * tri.triangles.len() + 16 {
                return Err(Error::PathLeavesFreeSpace(k));
            }
            if tri.contains(cur, q) {
                break;
            }
            let corners = tri.triangles[cur];
            if let Some(&u) = corners.iter().find(|v| tri.vertices[**v] == p) {
                let steps = fan_walk(tri, cur, u, q).ok_or(Error::PathLeavesFreeSpace(k))?;
                if let Some(&last) = steps.last() {
                    cur = last;
                    seq.extend(steps);
                }
                if tri.contains(cur, q) {
                    break;
                }
            }
            if let Some(&u) = corners
                .iter()
                .find(|v| point_strictly_inside_segment(p, q, tri.vertices[**v]))
            {
                let steps = fan_walk(tri, cur, u, q).ok_or(Error::PathLeavesFreeSpace(k))?;
                if let Some(&last) = steps.last() {
                    cur = last;
                    seq.extend(steps);
                }
                p = tri.vertices[u];
                continue;
            }
            let v = tri.triangles[cur];
            let exit = (0..3).find(|&j| {
                orient(p, q, tri.vertices[v[j]]) == Orientation::Cw
                    && orient(p, q, tri.vertices[v[(j + 1) % 3]]) == Orientation::Ccw
            });
            match exit.and_then(|j| tri.neighbors[cur][j]) {
                Some(n) => {
                    cur = n;
                    seq.push(n);
                }
                None => return Err(Error::PathLeavesFreeSpace(k)),
            }
        }
    }
    Ok(seq)
}
