use super::{Sleeve, Triangulation};
use crate::error::{Error, Result};
use crate::geometry::{orient, point_on_segment, Orientation, Point, Polyline};

/// Positive when `c` is counterclockwise of `a -> b`.
fn side(a: Point, b: Point, c: Point) -> i32 {
    orient(a, b, c).sign()
}

/// Whether `c` is strictly on the `sign` side of ray `a -> b`, or on the ray
/// itself when `sign` is zero-inclusive.
fn beyond(a: Point, b: Point, c: Point, sign: i32) -> bool {
    let s = side(a, b, c);
    s == sign || (s == 0 && (b - a).dot(c - a ) > 0.0)
}

/// Shortest path from `a` to `b` inside the sleeve polygon (funnel
/// algorithm). `a` must lie in the first triangle and `b` in the last.
pub fn funnel_shortest(tri: &Triangulation, sleeve: &Sleeve, a: Point, b: Point) -> Result<Polyline> {
    if sleeve.triangles.is_empty() {
        return Err(Error::SleeveInvalid("empty sleeve".into()));
    }
    if !tri.contains(sleeve.first(), a) {
        return Err(Error::SleeveInvalid(format!("start {a} is not in triangle {}", sleeve.first())));
    }
    if !tri.contains(sleeve.last(), b) {
        return Err(Error::SleeveInvalid(format!("end {b} is not in triangle {}", sleeve.last())));
    }
    let mut portals: Vec<(Point, Point)> = vec![(a, a)];
    portals.extend(
        sleeve
            .portals(tri)?
            .into_iter()
            .map(|p| (tri.vertices[p.left], tri.vertices[p.right])),
    );
    portals.push((b, b));

    let mut path = vec![a];
    let mut apex = a;
    let (mut left, mut right) = (a, a);
    let (mut left_i, mut right_i) = (0usize, 0usize);
    let mut i = 1;
    while i < portals.len() {
        let (l, r) = portals[i];
        // Tighten the right side.
        if r != right && (apex == right || beyond(apex, right, r, 1)) {
            if apex == right || !beyond(apex, left, r, 1) {
                right = r;
                right_i = i;
            } else {
                path.push(left);
                apex = left;
                right = apex;
                right_i = left_i;
                i = left_i + 1;
                continue;
            }
        }
        // Tighten the left side.
        if l != left && (apex == left || beyond(apex, left, l, -1)) {
            if apex == left || !beyond(apex, right, l, -1) {
                left = l;
                left_i = i;
            } else {
                path.push(right);
                apex = right;
                left = apex;
                left_i = right_i;
                i = right_i + 1;
                continue;
            }
        }
        i += 1;
    }
    path.push(b);
    Ok(simplify(path))
}

/// Removes repeated points and vertices lying on the segment between their
/// neighbours.
fn simplify(points: Vec<Point>) -> Polyline {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for p in points {
        if out.last() == Some(&p) {
            continue;
        }
        while out.len() >= 2 {
            let (u, w) = (out[out.len() - 2], out[out.len() - 1]);
            if orient(u, w, p) == Orientation::Collinear && point_on_segment(u, p, w) {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    Polyline { points: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::{single_obstacle_environment, validate};
    use crate::triangulation::{sleeve_between, triangle_walk, triangulate};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn setup() -> Triangulation {
        triangulate(&validate(single_obstacle_environment(10.0)).unwrap()).unwrap()
    }

    fn sleeve_along(t: &Triangulation, pts: &[Point]) -> Sleeve {
        let walk = triangle_walk(t, &Polyline::new(pts.to_vec()).unwrap()).unwrap();
        sleeve_between(t, &walk).unwrap()
    }

    #[test]
    fn below_the_obstacle() {
        let t = setup();
        let s = sleeve_along(&t, &[p(2., 5.), p(3., 2.), p(7., 2.), p(8., 5.)]);
        let path = funnel_shortest(&t, &s, p(2., 5.), p(8., 5.)).unwrap();
        assert_eq!(path.points, vec![p(2., 5.), p(4., 4.), p(6., 4.), p(8., 5.)]);
        assert!((path.length() - (2.0 * 5f64.sqrt() + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn above_the_obstacle() {
        let t = setup();
        let s = sleeve_along(&t, &[p(2., 5.), p(3., 8.), p(7., 8.), p(8., 5.)]);
        let path = funnel_shortest(&t, &s, p(2., 5.), p(8., 5.)).unwrap();
        assert_eq!(path.points, vec![p(2., 5.), p(4., 6.), p(6., 6.), p(8., 5.)]);
    }

    #[test]
    fn visible_endpoints_give_a_segment() {
        let t = setup();
        let s = sleeve_along(&t, &[p(1., 1.), p(9., 1.)]);
        let path = funnel_shortest(&t, &s, p(1., 1.), p(9., 1.)).unwrap();
        assert_eq!(path.points, vec![p(1., 1.), p(9., 1.)]);
    }

    #[test]
    fn around_one_corner() {
        let t = setup();
        let s = sleeve_along(&t, &[p(2., 5.), p(2., 2.), p(5., 3.5)]);
        let path = funnel_shortest(&t, &s, p(3., 5.), p(5., 3.5)).unwrap();
        assert_eq!(path.points, vec![p(3., 5.), p(4., 4.), p(5., 3.5)]);
    }

    #[test]
    fn reversal_symmetry() {
        let t = setup();
        let s = sleeve_along(&t, &[p(2., 5.), p(3., 2.), p(7., 2.), p(8., 5.)]);
        let fwd = funnel_shortest(&t, &s, p(2., 5.), p(8., 5.)).unwrap();
        let bwd = funnel_shortest(&t, &s.reversed(), p(8., 5.), p(2., 5.)).unwrap();
        assert_eq!(fwd, bwd.reversed());
    }

    #[test]
    fn endpoints_outside_the_sleeve() {
        let t = setup();
        let s = Sleeve::single(t.locate(p(1., 1.)).unwrap());
        assert!(matches!(funnel_shortest(&t, &s, p(1., 1.), p(9., 9.)), Err(Error::SleeveInvalid(_))));
    }

    #[test]
    fn constant_path() {
        let t = setup();
        let s = Sleeve::single(t.locate(p(1., 1.)).unwrap());
        let path = funnel_shortest(&t, &s, p(1., 1.), p(1., 1.)).unwrap();
        assert_eq!(path.points, vec![p(1., 1.)]);
        assert_eq!(path.length(), 0.0);
    }
}
