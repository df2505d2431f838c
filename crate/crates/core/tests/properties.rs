//! Randomized invariants across the pipeline.

mod common;

use proptest::prelude::*;

use common::{rational_orient, Domain};
use tether_cover::cover::{build_with_length, LiftedPoint};
use tether_cover::environment::{load_environment, random_environment, serialize_environment, single_obstacle_environment, validate};
use tether_cover::geometry::{
    orient, point_in_polygon, polyline_length, segment_intersection, Point, PointLocation, Polyline, Segment,
    SegmentIntersection,
};
use tether_cover::homotopy::signature_of_path;
use tether_cover::planner::{plan, resulting_tether, PlanQuery};
use tether_cover::triangulation::{funnel_shortest, sleeve_between, triangulate};

fn coord() -> impl Strategy<Value = f64> {
    // small dyadic grid makes collinear and coincident cases common
    prop_oneof![(-8i32..8).prop_map(|v| v as f64 * 0.5), -10.0..10.0f64]
}

fn point() -> impl Strategy<Value = Point> {
    (coord(), coord()).prop_map(|(x, y)| Point::new(x, y))
}

fn in_box() -> impl Strategy<Value = Point> {
    (0.05..9.95f64, 0.05..9.95f64).prop_map(|(x, y)| Point::new(x, y))
}

fn kind(i: SegmentIntersection) -> u8 {
    match i {
        SegmentIntersection::None => 0,
        SegmentIntersection::Proper(_) => 1,
        SegmentIntersection::Touching(_) => 2,
        SegmentIntersection::Overlap => 3,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn orient_is_antisymmetric(a in point(), b in point(), c in point()) {
        let o = orient(a, b, c);
        prop_assert_eq!(orient(b, a, c), o.reversed());
        prop_assert_eq!(orient(a, c, b), o.reversed());
        prop_assert_eq!(orient(c, b, a), o.reversed());
    }

    #[test]
    fn orient_matches_rational_arithmetic(a in point(), b in point(), t in -3.0..3.0f64, e in -1e-12..1e-12f64) {
        // nearly collinear third point
        let c = Point::new(a.x + t * (b.x - a.x) + e, a.y + t * (b.y - a.y));
        prop_assert_eq!(orient(a, b, c).sign(), rational_orient(a, b, c));
        prop_assert_eq!(orient(a, b, b).sign(), 0);
    }

    #[test]
    fn segment_intersection_is_symmetric(a in point(), b in point(), c in point(), d in point()) {
        prop_assume!(a != b && c != d);
        let s1 = Segment::new(a, b).unwrap();
        let s2 = Segment::new(c, d).unwrap();
        prop_assert_eq!(kind(segment_intersection(&s1, &s2)), kind(segment_intersection(&s2, &s1)));
        prop_assert_eq!(kind(segment_intersection(&s1, &s2)), kind(segment_intersection(&Segment::new(b, a).unwrap(), &s2)));
    }

    #[test]
    fn polyline_length_is_rigid_and_additive(pts in prop::collection::vec(point(), 1..8), more in prop::collection::vec(point(), 0..6), angle in 0.0..6.3f64, shift in point()) {
        let p = Polyline::from_points_dedup(pts);
        let (s, c) = angle.sin_cos();
        let moved = Polyline::from_points_dedup(p.points.iter().map(|q| Point::new(c * q.x - s * q.y + shift.x, s * q.x + c * q.y + shift.y)));
        prop_assert!((polyline_length(&p) - polyline_length(&moved)).abs() <= 1e-9 * (1.0 + polyline_length(&p)));
        let mut tail = vec![p.end()];
        tail.extend(more);
        let q = Polyline::from_points_dedup(tail);
        let joined = p.concat(&q);
        prop_assert!((joined.length() - p.length() - q.length()).abs() <= 1e-9 * (1.0 + joined.length()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn signature_is_a_homomorphism_and_reverses(m in 1usize..5, seed in 0u64..50, p in prop::collection::vec(in_box(), 2..6), q in prop::collection::vec(in_box(), 1..6)) {
        let venv = validate(random_environment(m, 10.0, seed)).unwrap();
        let gens = venv.generators().unwrap();
        let first = Polyline::new(p).unwrap();
        let mut rest = vec![first.end()];
        rest.extend(q);
        let second = Polyline::new(rest).unwrap();
        let a = signature_of_path(&first, &gens).unwrap();
        let b = signature_of_path(&second, &gens).unwrap();
        prop_assert_eq!(signature_of_path(&first.concat(&second), &gens).unwrap(), a.concat(&b));
        prop_assert_eq!(signature_of_path(&first.reversed(), &gens).unwrap(), a.invert());
    }

    #[test]
    fn generators_are_disjoint_rays_from_obstacle_interiors(m in 0usize..9, seed in 0u64..1000) {
        let venv = validate(random_environment(m, 10.0, seed)).unwrap();
        prop_assert!(venv.m() <= venv.env.obstacles.len());
        let gens = venv.generators().unwrap();
        prop_assert_eq!(gens.len(), venv.m());
        for (i, g) in gens.iter().enumerate() {
            prop_assert_eq!(point_in_polygon(g.origin, &venv.env.obstacles[g.obstacle_id]), PointLocation::Inside);
            for h in &gens[i + 1..] {
                prop_assert_eq!(segment_intersection(&g.segment(), &h.segment()), SegmentIntersection::None);
            }
        }
    }

    #[test]
    fn serialization_round_trips(m in 0usize..9, seed in 0u64..1000, l in 1.0..30.0f64) {
        let venv = validate(random_environment(m, l, seed)).unwrap();
        let text = serialize_environment(&venv.env);
        let back = load_environment(&text).unwrap();
        prop_assert_eq!(&back.env, &venv.env);
        prop_assert_eq!(serialize_environment(&back.env), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn triangulation_topology(m in 0usize..9, seed in 0u64..1000) {
        let venv = validate(random_environment(m, 10.0, seed)).unwrap();
        let tri = triangulate(&venv).unwrap();
        prop_assert_eq!(tri.euler_characteristic(), 1 - venv.env.obstacles.len() as i64);
        for poly in std::iter::once(&venv.env.workspace).chain(venv.env.obstacles.iter()) {
            for (p, q) in poly.edges() {
                let hits = tri
                    .edges
                    .iter()
                    .filter(|e| {
                        let (a, b) = (tri.vertices[e.a], tri.vertices[e.b]);
                        (a == p && b == q) || (a == q && b == p)
                    })
                    .collect::<Vec<_>>();
                prop_assert_eq!(hits.len(), 1);
                prop_assert!(hits[0].constrained);
            }
        }
    }

    #[test]
    fn funnel_beats_random_sleeve_paths(m in 0usize..5, seed in 0u64..500, walk in prop::collection::vec(any::<prop::sample::Index>(), 1..12), cuts in prop::collection::vec(prop::collection::vec(0.0..1.0f64, 12), 100)) {
        let venv = validate(random_environment(m, 10.0, seed)).unwrap();
        let tri = triangulate(&venv).unwrap();
        // random walk in the dual graph, collapsed to a sleeve
        let mut path = vec![tri.locate(venv.env.anchor).unwrap()];
        for step in &walk {
            let adj = tri.adjacent(*path.last().unwrap());
            path.push(adj[step.index(adj.len())]);
        }
        let sleeve = sleeve_between(&tri, &path).unwrap();
        let a = tri.centroid(sleeve.first());
        let b = tri.centroid(sleeve.last());
        let best = funnel_shortest(&tri, &sleeve, a, b).unwrap();
        prop_assert_eq!(best.start(), a);
        prop_assert_eq!(best.end(), b);

        let back = funnel_shortest(&tri, &sleeve.reversed(), b, a).unwrap().reversed();
        prop_assert_eq!(back.points.len(), best.points.len());
        for (u, v) in back.points.iter().zip(best.points.iter()) {
            prop_assert!(u.dist(*v) <= 1e-12);
        }

        // polylines through random points on each portal stay inside the sleeve
        let portals = sleeve.portals(&tri).unwrap();
        for cut in &cuts {
            let mut pts = vec![a];
            pts.extend(portals.iter().zip(cut.iter().cycle()).map(|(pt, &t)| tri.vertices[pt.left].lerp(tri.vertices[pt.right], t)));
            pts.push(b);
            let other = Polyline::from_points_dedup(pts);
            prop_assert!(best.length() <= other.length() + 1e-9);
        }
    }

    #[test]
    fn cover_invariants(m in 0usize..4, seed in 0u64..200, l1 in 4.0..12.0f64, dl in 0.0..4.0f64) {
        let venv = validate(random_environment(m, l1, seed)).unwrap();
        let small = build_with_length(&venv, l1).unwrap();
        let large = build_with_length(&venv, l1 + dl).unwrap();
        prop_assert_eq!(small.dump(), build_with_length(&venv, l1).unwrap().dump());
        for t in &small.triangles {
            prop_assert!(large.find_copy(t.base_triangle, &t.signature).is_some());
        }
        if let Some(anchor) = small.anchor_point() {
            prop_assert_eq!(small.euler_characteristic(), 1);
            prop_assert!(small.dual_is_spanning_tree());
            for (copy, t) in small.triangles.iter().enumerate() {
                for &v in &t.corners {
                    let point = small.project_vertex(v).unwrap();
                    let (_, d) = small.shortest_in_cover(&anchor, &LiftedPoint { copy, point }).unwrap();
                    prop_assert!(d <= l1 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn plans_keep_tether_signature(m in 1usize..4, seed in 0u64..200, goals in prop::collection::vec(in_box(), 1..4)) {
        let venv = validate(random_environment(m, 14.0, seed)).unwrap();
        let c = build_with_length(&venv, 14.0).unwrap();
        let domain = Domain::from_env(&venv.env);
        let mut tether = Polyline::new(vec![venv.env.anchor]).unwrap();
        for goal in goals {
            if !domain.contains(goal) {
                continue;
            }
            let Ok(results) = plan(&c, &PlanQuery { tether: tether.clone(), goal }) else { continue };
            for r in &results {
                prop_assert!(r.resulting_tether_length <= 14.0 + 1e-9);
                prop_assert_eq!(r.path.start(), tether.end());
                prop_assert_eq!(r.path.end(), goal);
                let dragged = signature_of_path(&tether.concat(&r.path), &c.generators).unwrap();
                prop_assert_eq!(signature_of_path(&r.resulting_tether, &c.generators).unwrap(), dragged);
                let again = resulting_tether(&c.triangulation, &tether, &r.path).unwrap();
                prop_assert!((again.length() - r.resulting_tether_length).abs() <= 1e-9);
            }
            for w in results.windows(2) {
                prop_assert!(w[0].path_length <= w[1].path_length + 1e-9);
            }
            tether = results[0].resulting_tether.clone();
        }
    }
}

#[test]
fn homotopic_paths_lift_together() {
    let venv = validate(single_obstacle_environment(12.0)).unwrap();
    let c = build_with_length(&venv, 12.0).unwrap();
    let path = |pts: &[(f64, f64)]| Polyline::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap();
    let below_a = c.lift_path(&path(&[(2., 5.), (2., 2.), (8., 2.), (8., 5.)])).unwrap();
    let below_b = c.lift_path(&path(&[(2., 5.), (3.5, 3.), (6.5, 1.), (9., 3.), (8., 5.)])).unwrap();
    let above = c.lift_path(&path(&[(2., 5.), (3., 8.), (7., 8.), (8., 5.)])).unwrap();
    assert_eq!(below_a.copy, below_b.copy);
    assert_ne!(below_a.copy, above.copy);
    for lp in [below_a, below_b, above] {
        assert_eq!(c.project_point(&lp).unwrap(), Point::new(8., 5.));
    }
    let gens = venv.generators().unwrap();
    let over = signature_of_path(&path(&[(2., 5.), (5., 7.), (8., 5.)]), &gens).unwrap();
    let under = signature_of_path(&path(&[(2., 5.), (5., 3.), (8., 5.)]), &gens).unwrap();
    assert_ne!(over, under);
}
