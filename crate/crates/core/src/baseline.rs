//! Homotopy-augmented grid graph: an 8-connected occupancy grid whose nodes
//! are (cell, signature) pairs, expanded by Dijkstra up to the tether length.
//! Used as a benchmark opponent and as an independent reachability oracle.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cover::{build_with_length, CoverComplex};
use crate::environment::{Generator, ValidatedEnvironment};
use crate::error::{Error, Result};
use crate::geometry::{point_in_polygon, polygon_rect_overlap_area, Point, PointLocation};
use crate::homotopy::{crossing_letter_left_biased, Signature};
use crate::planner::rank_homotopy_classes;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridNode {
    pub cell: (usize, usize),
    pub signature: Signature,
    /// Shortest distance from the anchor node.
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridGraph {
    pub resolution: f64,
    /// Lower-left corner of cell (0, 0).
    pub origin: Point,
    pub nx: usize,
    pub ny: usize,
    pub free: Vec<bool>,
    pub nodes: Vec<GridNode>,
    /// Undirected edges between expanded nodes.
    pub edge_count: usize,
    pub anchor_node: usize,
    pub tether_length: f64,
}

impl GridGraph {
    pub fn cell_of(&self, p: Point) -> Option<(usize, usize)> {
        let i = ((p.x - self.origin.x) / self.resolution).floor();
        let j = ((p.y - self.origin.y) / self.resolution).floor();
        if i < 0.0 || j < 0.0 || i >= self.nx as f64 || j >= self.ny as f64 {
            return None;
        }
        Some((i as usize, j as usize))
    }

    pub fn center(&self, cell: (usize, usize)) -> Point {
        cell_center(self.origin, self.resolution, cell)
    }

    pub fn is_free(&self, cell: (usize, usize)) -> bool {
        self.free[cell.1 * self.nx + cell.0]
    }
}

fn cell_center(origin: Point, res: f64, (i, j): (usize, usize)) -> Point {
    Point::new(origin.x + (i as f64 + 0.5) * res, origin.y + (j as f64 + 0.5) * res)
}

fn occupancy(venv: &ValidatedEnvironment, origin: Point, res: f64, nx: usize, ny: usize) -> Vec<bool> {
    let cell_area = res * res;
    let tol = 1e-9 * cell_area;
    let mut free = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let lo = Point::new(origin.x + i as f64 * res, origin.y + j as f64 * res);
            let hi = Point::new(lo.x + res, lo.y + res);
            let inside = polygon_rect_overlap_area(&venv.env.workspace, lo, hi) >= cell_area - tol;
            free[j * nx + i] = inside
                && venv
                    .env
                    .obstacles
                    .iter()
                    .all(|o| polygon_rect_overlap_area(o, lo, hi) <= tol);
        }
    }
    free
}

/// Signature change of a move between two cell centres. Centres on a ray's
/// supporting line count as lying on its left.
fn move_word(a: Point, b: Point, generators: &[Generator]) -> Vec<i32> {
    let mut hits: Vec<(f64, i32)> = Vec::new();
    for (k, g) in generators.iter().enumerate() {
        if let Some(letter) = crossing_letter_left_biased(a, b, g, k as i32 + 1) {
            let mid = (g.origin - a).cross(g.far - g.origin) / (b - a).cross(g.far - g.origin);
            hits.push((mid, letter));
        }
    }
    hits.sort_by(|x, y| x.0.total_cmp(&y.0));
    hits.into_iter().map(|h| h.1).collect()
}

const MOVES: [(i64, i64); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];

/// Dijkstra expansion from the anchor cell with an identity signature; nodes
/// farther than the tether length are not created. Diagonal moves need both
/// adjacent orthogonal cells free.
pub fn build_grid_graph(venv: &ValidatedEnvironment, resolution: f64) -> Result<GridGraph> {
    build_grid_graph_with_length(venv, resolution, venv.env.tether_length)
}

pub fn build_grid_graph_with_length(venv: &ValidatedEnvironment, resolution: f64, tether_length: f64) -> Result<GridGraph> {
    if !resolution.is_finite() || resolution <= 0.0 {
        return Err(Error::Parse(format!("resolution {resolution} must be positive")));
    }
    let generators = venv.generators()?;
    let (lo, hi) = venv.env.workspace.bbox();
    let nx = ((hi.x - lo.x) / resolution).ceil().max(1.0) as usize;
    let ny = ((hi.y - lo.y) / resolution).ceil().max(1.0) as usize;
    let free = occupancy(venv, lo, resolution, nx, ny);
    let mut g = GridGraph {
        resolution,
        origin: lo,
        nx,
        ny,
        free,
        nodes: Vec::new(),
        edge_count: 0,
        anchor_node: 0,
        tether_length,
    };
    let start = g.cell_of(venv.env.anchor).ok_or(Error::AnchorCellBlocked)?;
    if !g.is_free(start) {
        return Err(Error::AnchorCellBlocked);
    }

    let mut ids: HashMap<(usize, usize, Signature), usize> = HashMap::new();
    let mut done: Vec<bool> = Vec::new();
    let mut heap = BinaryHeap::new();
    ids.insert((start.0, start.1, Signature::identity()), 0);
    g.nodes.push(GridNode { cell: start, signature: Signature::identity(), distance: 0.0 });
    done.push(false);
    heap.push(Reverse((OrdF64(0.0), 0usize)));
    let diag = resolution * std::f64::consts::SQRT_2;
    let mut edges = 0usize;
    while let Some(Reverse((OrdF64(d), id))) = heap.pop() {
        if done[id] || d > g.nodes[id].distance {
            continue;
        }
        done[id] = true;
        let (ci, cj) = g.nodes[id].cell;
        let here = g.center((ci, cj));
        let sig = g.nodes[id].signature.clone();
        for (di, dj) in MOVES {
            let (ni, nj) = (ci as i64 + di, cj as i64 + dj);
            if ni < 0 || nj < 0 || ni >= nx as i64 || nj >= ny as i64 {
                continue;
            }
            let next = (ni as usize, nj as usize);
            if !g.is_free(next) {
                continue;
            }
            if di != 0 && dj != 0 && !(g.is_free((next.0, cj)) && g.is_free((ci, next.1))) {
                continue;
            }
            let w = if di != 0 && dj != 0 { diag } else { resolution };
            let nd = d + w;
            if nd > tether_length {
                continue;
            }
            let there = g.center(next);
            let word = move_word(here, there, &generators);
            let nsig = if word.is_empty() { sig.clone() } else { sig.concat(&Signature::reduce(&word, generators.len())?) };
            let key = (next.0, next.1, nsig);
            match ids.get(&key) {
                Some(&k) => {
                    if !done[k] {
                        edges += 1;
                        if nd < g.nodes[k].distance {
                            g.nodes[k].distance = nd;
                            heap.push(Reverse((OrdF64(nd), k)));
                        }
                    }
                }
                None => {
                    let k = g.nodes.len();
                    g.nodes.push(GridNode { cell: next, signature: key.2.clone(), distance: nd });
                    done.push(false);
                    ids.insert(key, k);
                    edges += 1;
                    heap.push(Reverse((OrdF64(nd), k)));
                }
            }
        }
    }
    g.edge_count = edges;
    Ok(g)
}

#[derive(Clone, Copy, Debug)]
struct OrdF64(f64);

impl PartialEq for OrdF64 {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Signatures of all nodes in the cell containing `p`.
pub fn grid_reachable_signatures(g: &GridGraph, p: Point) -> BTreeSet<Signature> {
    let Some(cell) = g.cell_of(p) else {
        return BTreeSet::new();
    };
    g.nodes.iter().filter(|n| n.cell == cell).map(|n| n.signature.clone()).collect()
}

/// Grid signatures with their node distances for the cell containing `p`.
pub fn grid_classes_at(g: &GridGraph, p: Point) -> Vec<(Signature, f64)> {
    let Some(cell) = g.cell_of(p) else {
        return Vec::new();
    };
    g.nodes.iter().filter(|n| n.cell == cell).map(|n| (n.signature.clone(), n.distance)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub resolution: f64,
    pub nodes: usize,
    pub time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub m: usize,
    pub tether_length: f64,
    pub cover_triangles: usize,
    pub cover_time_s: f64,
    pub grids: Vec<GridRow>,
    /// Share of sampled points, away from the length frontier, where the
    /// cover and the finest grid report the same classes.
    pub agreement_pct: f64,
    pub agreement_samples: usize,
}

pub const CSV_HEADER: &str = "m,l,bar_T2_count,bar_T_time_s,grid_nodes_r0.5,grid_time_r0.5_s,grid_nodes_r0.25,grid_time_r0.25_s,agreement_pct";

impl ComparisonReport {
    /// One CSV row. Grid columns follow the order of the requested
    /// resolutions.
    pub fn csv_row(&self) -> String {
        let mut s = String::new();
        write!(s, "{},{},{},{:.6}", self.m, self.tether_length, self.cover_triangles, self.cover_time_s).unwrap();
        for g in &self.grids {
            write!(s, ",{},{:.6}", g.nodes, g.time_s).unwrap();
        }
        write!(s, ",{:.2}", self.agreement_pct).unwrap();
        s
    }
}

/// CSV header for a resolution list.
pub fn csv_header(resolutions: &[f64]) -> String {
    let mut s = String::from("m,l,bar_T2_count,bar_T_time_s");
    for r in resolutions {
        write!(s, ",grid_nodes_r{r},grid_time_r{r}_s").unwrap();
    }
    s.push_str(",agreement_pct");
    s
}

/// Median wall time of `f`, repeated while the total stays short.
fn timed<T>(mut f: impl FnMut() -> Result<T>) -> Result<(T, f64)> {
    let t0 = Instant::now();
    let out = f()?;
    let first = t0.elapsed().as_secs_f64();
    if first > 0.2 {
        return Ok((out, first));
    }
    let mut times = vec![first];
    for _ in 0..4 {
        let t = Instant::now();
        f()?;
        times.push(t.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    Ok((out, times[times.len() / 2]))
}

/// Builds the cover and one grid graph per resolution and compares sizes,
/// build times and the classes reported at `samples` random free points.
/// Points with a class length within two grid diagonals of the tether
/// length are skipped.
pub fn compare(venv: &ValidatedEnvironment, tether_length: f64, resolutions: &[f64], samples: usize, seed: u64) -> Result<ComparisonReport> {
    let (cover, cover_time_s) = timed(|| build_with_length(venv, tether_length))?;
    let mut grids = Vec::new();
    let mut finest: Option<GridGraph> = None;
    for &r in resolutions {
        let (g, t) = timed(|| build_grid_graph_with_length(venv, r, tether_length))?;
        grids.push(GridRow { resolution: r, nodes: g.nodes.len(), time_s: t });
        if finest.as_ref().is_none_or(|f| r < f.resolution) {
            finest = Some(g);
        }
    }
    let (agreement_pct, agreement_samples) = match &finest {
        Some(g) => agreement(venv, &cover, g, samples, seed)?,
        None => (100.0, 0),
    };
    Ok(ComparisonReport {
        m: venv.m(),
        tether_length,
        cover_triangles: cover.triangles.len(),
        cover_time_s,
        grids,
        agreement_pct,
        agreement_samples,
    })
}

/// Random points of the free space whose grid cell is free.
pub fn sample_free_points(venv: &ValidatedEnvironment, g: &GridGraph, n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = venv.env.workspace.bbox();
    let mut out = Vec::with_capacity(n);
    let mut tries = 0;
    while out.len() < n && tries < 1000 * n.max(1) {
        tries += 1;
        let p = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if point_in_polygon(p, &venv.env.workspace) != PointLocation::Inside {
            continue;
        }
        if venv.env.obstacles.iter().any(|o| point_in_polygon(p, o) != PointLocation::Outside) {
            continue;
        }
        if g.cell_of(p).is_some_and(|c| g.is_free(c)) {
            out.push(p);
        }
    }
    out
}

fn agreement(venv: &ValidatedEnvironment, cover: &CoverComplex, g: &GridGraph, samples: usize, seed: u64) -> Result<(f64, usize)> {
    let band = 2.0 * g.resolution * std::f64::consts::SQRT_2;
    let l = cover.tether_length;
    let mut used = 0;
    let mut agree = 0;
    for p in sample_free_points(venv, g, samples, seed) {
        let ranked = rank_homotopy_classes(cover, p)?;
        let grid = grid_classes_at(g, p);
        let near = |d: f64| (d - l).abs() < band;
        if ranked.iter().any(|(_, d)| near(*d)) || grid.iter().any(|(_, d)| near(*d)) {
            continue;
        }
        used += 1;
        let a: BTreeSet<Signature> = ranked.into_iter().map(|x| x.0).collect();
        let b: BTreeSet<Signature> = grid.into_iter().map(|x| x.0).collect();
        if a == b {
            agree += 1;
        }
    }
    let pct = if used == 0 { 100.0 } else { 100.0 * agree as f64 / used as f64 };
    Ok((pct, used))
}
