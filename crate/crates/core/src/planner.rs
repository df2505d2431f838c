//! Path planning on the cover: ranked paths to a goal in every tether-feasible
//! homotopy class, with the tether configuration each one produces.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::str::FromStr;

use petgraph::algo::astar;
use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};

use crate::cover::{CoverComplex, LiftedPoint};
use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};
use crate::homotopy::Signature;
use crate::triangulation::{funnel_shortest, sleeve_between, triangle_walk, Triangulation};

const LENGTH_TIE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanQuery {
    /// Current tether, from the anchor to the robot.
    pub tether: Polyline,
    pub goal: Point,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub path: Polyline,
    pub path_length: f64,
    pub goal_signature: Signature,
    pub resulting_tether: Polyline,
    pub resulting_tether_length: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SearchMode {
    Primal,
    #[default]
    Dual,
}

impl FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primal" => Ok(SearchMode::Primal),
            "dual" => Ok(SearchMode::Dual),
            _ => Err(Error::Parse(format!("unknown search mode {s:?}"))),
        }
    }
}

fn by_length_then_signature(a: (f64, &Signature), b: (f64, &Signature)) -> Ordering {
    if (a.0 - b.0).abs() <= LENGTH_TIE {
        a.1.cmp(b.1)
    } else {
        a.0.total_cmp(&b.0)
    }
}

/// Paths from the robot to every lift of the goal, shortest first.
pub fn plan(c: &CoverComplex, q: &PlanQuery) -> Result<Vec<PlanResult>> {
    let robot = c.lift_path(&q.tether).map_err(|e| match e {
        Error::LiftExceedsTether(s) => Error::TetherInfeasible(format!("tether class \"{s}\" is outside the cover")),
        other => other,
    })?;
    let anchor = c.anchor_point().ok_or_else(|| Error::TetherInfeasible("empty cover".into()))?;
    let goals = c
        .preimage(q.goal)
        .map_err(|_| Error::GoalUnreachable(q.goal.x, q.goal.y))?;
    if goals.is_empty() {
        return Err(Error::GoalUnreachable(q.goal.x, q.goal.y));
    }
    let mut results = Vec::with_capacity(goals.len());
    for g in goals {
        let (path, path_length) = c.shortest_in_cover(&robot, &g)?;
        let (resulting_tether, resulting_tether_length) = c.shortest_in_cover(&anchor, &g)?;
        if resulting_tether_length > c.tether_length + LENGTH_TIE {
            continue;
        }
        results.push(PlanResult {
            path,
            path_length,
            goal_signature: c.triangles[g.copy].signature.clone(),
            resulting_tether,
            resulting_tether_length,
        });
    }
    if results.is_empty() {
        return Err(Error::GoalUnreachable(q.goal.x, q.goal.y));
    }
    results.sort_by(|a, b| by_length_then_signature((a.path_length, &a.goal_signature), (b.path_length, &b.goal_signature)));
    Ok(results)
}

/// Homotopy classes in which `p` can be reached, with their taut tether
/// lengths, shortest first.
pub fn rank_homotopy_classes(c: &CoverComplex, p: Point) -> Result<Vec<(Signature, f64)>> {
    let lifts = c.preimage(p)?;
    let Some(anchor) = c.anchor_point() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::with_capacity(lifts.len());
    for lp in lifts {
        let (_, len) = c.shortest_in_cover(&anchor, &lp)?;
        out.push((c.point_class(&lp)?, len));
    }
    out.sort_by(|a, b| by_length_then_signature((a.1, &a.0), (b.1, &b.0)));
    Ok(out)
}

/// Taut tether after dragging `tether` along `path`.
pub fn resulting_tether(tri: &Triangulation, tether: &Polyline, path: &Polyline) -> Result<Polyline> {
    let joined = Polyline::from_points_dedup(tether.points.iter().chain(path.points.iter()).copied());
    let walk = triangle_walk(tri, &joined)?;
    let sleeve = sleeve_between(tri, &walk)?;
    funnel_shortest(tri, &sleeve, joined.start(), joined.end())
}

/// Path between two lifted points. `Dual` follows the tree of triangle copies
/// and pulls the path taut; `Primal` runs A* over the lifted vertices and
/// edges, entering and leaving through the corners of the end copies.
pub fn search_on_graph(c: &CoverComplex, mode: SearchMode, from: &LiftedPoint, to: &LiftedPoint) -> Result<Polyline> {
    match mode {
        SearchMode::Dual => Ok(c.shortest_in_cover(from, to)?.0),
        SearchMode::Primal => primal_search(c, from, to),
    }
}

fn primal_search(c: &CoverComplex, from: &LiftedPoint, to: &LiftedPoint) -> Result<Polyline> {
    c.project_triangle(from.copy)?;
    c.project_triangle(to.copy)?;
    if from.copy == to.copy && from.point == to.point {
        return Ok(Polyline { points: vec![from.point] });
    }
    let n = c.vertices.len();
    let pos = |i: usize| -> Point {
        if i < n {
            c.triangulation.vertices[c.vertices[i].base_vertex]
        } else if i == n {
            from.point
        } else {
            to.point
        }
    };
    let mut g: UnGraph<(), f64> = UnGraph::with_capacity(n + 2, c.edges.len() + 8);
    for _ in 0..n + 2 {
        g.add_node(());
    }
    for &(a, b) in &c.edges {
        g.add_edge(NodeIndex::new(a), NodeIndex::new(b), pos(a).dist(pos(b)));
    }
    for &k in &c.triangles[from.copy].corners {
        g.add_edge(NodeIndex::new(n), NodeIndex::new(k), from.point.dist(pos(k)));
    }
    for &k in &c.triangles[to.copy].corners {
        g.add_edge(NodeIndex::new(n + 1), NodeIndex::new(k), to.point.dist(pos(k)));
    }
    if from.copy == to.copy {
        g.add_edge(NodeIndex::new(n), NodeIndex::new(n + 1), from.point.dist(to.point));
    }
    let goal = NodeIndex::new(n + 1);
    let (_, nodes) = astar(&g, NodeIndex::new(n), |v| v == goal, |e| *e.weight(), |v| pos(v.index()).dist(to.point))
        .ok_or_else(|| Error::ElementNotInComplex("endpoints are not connected".into()))?;
    Ok(Polyline::from_points_dedup(nodes.into_iter().map(|v| pos(v.index()))))
}

fn points_text(p: &Polyline) -> String {
    p.points.iter().map(|q| format!("{},{}", q.x, q.y)).collect::<Vec<_>>().join(";")
}

/// Ranked plan entries as a plain-text report.
pub fn plan_report(results: &[PlanResult]) -> String {
    let mut s = String::new();
    writeln!(s, "results {}", results.len()).unwrap();
    for (i, r) in results.iter().enumerate() {
        writeln!(s, "rank {}", i + 1).unwrap();
        writeln!(s, "  signature \"{}\"", r.goal_signature).unwrap();
        writeln!(s, "  path_length {:.9}", r.path_length).unwrap();
        writeln!(s, "  resulting_tether_length {:.9}", r.resulting_tether_length).unwrap();
        writeln!(s, "  path {}", points_text(&r.path)).unwrap();
        writeln!(s, "  tether {}", points_text(&r.resulting_tether)).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::build_from_environment;
    use crate::environment::{single_obstacle_environment, validate};
    use crate::homotopy::signature_of_path;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn single(l: f64) -> CoverComplex {
        build_from_environment(&validate(single_obstacle_environment(l)).unwrap()).unwrap()
    }

    fn at_anchor() -> Polyline {
        Polyline::new(vec![p(2., 5.)]).unwrap()
    }

    #[test]
    fn goal_at_robot_has_zero_length() {
        let c = single(12.0);
        let tether = Polyline::new(vec![p(2., 5.), p(3., 2.)]).unwrap();
        let r = plan(&c, &PlanQuery { tether: tether.clone(), goal: p(3., 2.) }).unwrap();
        assert_eq!(r[0].path_length, 0.0);
        assert_eq!(r[0].resulting_tether, Polyline::new(vec![p(2., 5.), p(3., 2.)]).unwrap());
    }

    #[test]
    fn two_classes_to_the_far_side() {
        let c = single(12.0);
        let r = plan(&c, &PlanQuery { tether: at_anchor(), goal: p(8., 5.) }).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].goal_signature, Signature::identity());
        assert_eq!(r[1].goal_signature.letters(), &[1]);
        let expected = 2.0 * 5f64.sqrt() + 2.0;
        for x in &r {
            assert!((x.path_length - expected).abs() < 1e-9);
            assert!(x.resulting_tether_length <= 12.0 + 1e-9);
        }
    }

    #[test]
    fn goal_in_obstacle_is_unreachable() {
        let c = single(12.0);
        assert_eq!(plan(&c, &PlanQuery { tether: at_anchor(), goal: p(5., 5.) }), Err(Error::GoalUnreachable(5., 5.)));
    }

    #[test]
    fn infeasible_tether() {
        let c = single(7.0);
        let tether = Polyline::new(vec![p(2., 5.), p(3., 2.), p(7., 2.), p(7., 8.), p(3., 8.), p(3., 3.)]).unwrap();
        assert!(matches!(plan(&c, &PlanQuery { tether, goal: p(1., 1.) }), Err(Error::TetherInfeasible(_))));
    }

    #[test]
    fn rank_at_anchor() {
        let c = single(10.0);
        assert_eq!(rank_homotopy_classes(&c, p(2., 5.)).unwrap(), vec![(Signature::identity(), 0.0)]);
        assert!(matches!(rank_homotopy_classes(&c, p(5., 5.)), Err(Error::PointNotInFreeSpace(..))));
    }

    #[test]
    fn longer_tether_adds_winding_classes() {
        let c = single(20.0);
        let r = rank_homotopy_classes(&c, p(8., 5.)).unwrap();
        assert!(r.len() > 2);
        let direct = 2.0 * 5f64.sqrt() + 2.0;
        assert!(r[..2].iter().all(|(_, l)| (l - direct).abs() < 1e-9));
        assert!(r[2..].iter().all(|(_, l)| *l > direct + 1.0 && *l <= 20.0));
        for w in r.windows(2) {
            assert!(w[0].1 <= w[1].1 + LENGTH_TIE);
        }
    }

    #[test]
    fn resulting_tether_examples() {
        let c = single(20.0);
        let tri = &c.triangulation;
        let straight = resulting_tether(tri, &Polyline::new(vec![p(1., 1.), p(2., 1.)]).unwrap(), &Polyline::new(vec![p(2., 1.), p(3., 1.)]).unwrap()).unwrap();
        assert_eq!(straight.points, vec![p(1., 1.), p(3., 1.)]);
        // Below the obstacle, then back over the top.
        let tether = Polyline::new(vec![p(2., 5.), p(3., 2.), p(8., 2.), p(8., 5.)]).unwrap();
        let back = Polyline::new(vec![p(8., 5.), p(8., 8.), p(3., 8.)]).unwrap();
        let taut = resulting_tether(tri, &tether, &back).unwrap();
        assert_eq!(taut.points, vec![p(2., 5.), p(4., 4.), p(6., 4.), p(6., 6.), p(3., 8.)]);
        let same = resulting_tether(tri, &taut, &Polyline::new(vec![p(3., 8.)]).unwrap()).unwrap();
        assert_eq!(same, taut);
    }

    #[test]
    fn plan_tether_matches_dragged_tether() {
        let c = single(15.0);
        let tether = Polyline::new(vec![p(2., 5.), p(3., 2.), p(7., 2.)]).unwrap();
        for r in plan(&c, &PlanQuery { tether: tether.clone(), goal: p(5., 8.5) }).unwrap() {
            let dragged = resulting_tether(&c.triangulation, &tether, &r.path).unwrap();
            assert!((dragged.length() - r.resulting_tether_length).abs() < 1e-9);
            let s = signature_of_path(&r.resulting_tether, &c.generators).unwrap();
            assert_eq!(s, signature_of_path(&dragged, &c.generators).unwrap());
        }
    }

    #[test]
    fn dual_is_no_longer_than_primal() {
        let c = single(15.0);
        let a = c.anchor_point().unwrap();
        for g in c.preimage(p(8., 5.)).unwrap() {
            let d = search_on_graph(&c, SearchMode::Dual, &a, &g).unwrap();
            let pr = search_on_graph(&c, SearchMode::Primal, &a, &g).unwrap();
            assert!(d.length() <= pr.length() + 1e-9);
        }
        let same = search_on_graph(&c, SearchMode::Primal, &a, &a).unwrap();
        assert_eq!(same.points.len(), 1);
    }

    #[test]
    fn report_lists_every_rank() {
        let c = single(12.0);
        let r = plan(&c, &PlanQuery { tether: at_anchor(), goal: p(8., 5.) }).unwrap();
        let text = plan_report(&r);
        assert!(text.starts_with("results 2\n"));
        assert!(text.contains("rank 2\n  signature \"s1\""));
    }
}
