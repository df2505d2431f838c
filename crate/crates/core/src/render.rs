//! SVG panels: environment, triangulation with its dual graph, cover layers
//! and plan results.

use std::fmt::Write as _;

use crate::cover::CoverComplex;
use crate::environment::{Generator, ValidatedEnvironment};
use crate::geometry::{Point, Polygon, Polyline};
use crate::planner::PlanResult;
use crate::triangulation::{DualGraph, Triangulation};

const PANEL: f64 = 320.0;
const MARGIN: f64 = 12.0;

/// Maps workspace coordinates into one panel, y pointing up.
struct Frame {
    lo: Point,
    scale: f64,
    ox: f64,
    oy: f64,
}

impl Frame {
    fn new(venv: &ValidatedEnvironment, ox: f64, oy: f64) -> Self {
        let (lo, hi) = venv.env.workspace.bbox();
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
        Frame { lo, scale: (PANEL - 2.0 * MARGIN) / span, ox: ox + MARGIN, oy: oy + PANEL - MARGIN }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (self.ox + (p.x - self.lo.x) * self.scale, self.oy - (p.y - self.lo.y) * self.scale)
    }

    fn points(&self, pts: &[Point]) -> String {
        pts.iter()
            .map(|p| {
                let (x, y) = self.map(*p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn polygon(&self, s: &mut String, poly: &Polygon, style: &str) {
        writeln!(s, r#"<polygon points="{}" {style}/>"#, self.points(&poly.vertices)).unwrap();
    }

    fn polyline(&self, s: &mut String, line: &Polyline, style: &str) {
        writeln!(s, r#"<polyline points="{}" fill="none" {style}/>"#, self.points(&line.points)).unwrap();
    }

    fn line(&self, s: &mut String, a: Point, b: Point, style: &str) {
        let (x1, y1) = self.map(a);
        let (x2, y2) = self.map(b);
        writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" {style}/>"#).unwrap();
    }

    fn dot(&self, s: &mut String, p: Point, r: f64, fill: &str) {
        let (x, y) = self.map(p);
        writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{r}" fill="{fill}"/>"#).unwrap();
    }

    fn caption(&self, s: &mut String, text: &str) {
        writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="11">{}</text>"#, self.ox, self.oy - PANEL + 2.0 * MARGIN - 2.0, escape(text)).unwrap();
    }
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn document(width: f64, height: f64, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn base(f: &Frame, s: &mut String, venv: &ValidatedEnvironment) {
    f.polygon(s, &venv.env.workspace, r#"fill="none" stroke="black" stroke-width="1.5""#);
    for o in &venv.env.obstacles {
        f.polygon(s, o, r##"fill="#888" stroke="black" stroke-width="1""##);
    }
}

fn generators(f: &Frame, s: &mut String, gens: &[Generator]) {
    for g in gens {
        f.line(s, g.origin, g.far, r##"stroke="#c33" stroke-width="1" stroke-dasharray="4 3""##);
    }
}

/// Obstacles, dashed generator rays, the anchor and an optional robot.
pub fn render_environment(venv: &ValidatedEnvironment, gens: &[Generator], robot: Option<Point>) -> String {
    let f = Frame::new(venv, 0.0, 0.0);
    let mut s = String::new();
    base(&f, &mut s, venv);
    generators(&f, &mut s, gens);
    f.dot(&mut s, venv.env.anchor, 4.0, "blue");
    if let Some(r) = robot {
        f.dot(&mut s, r, 4.0, "green");
    }
    document(PANEL, PANEL, &s)
}

/// Triangulation edges, constrained edges bold, and the dual graph.
pub fn render_triangulation(venv: &ValidatedEnvironment, tri: &Triangulation, dual: &DualGraph, gens: &[Generator]) -> String {
    let f = Frame::new(venv, 0.0, 0.0);
    let mut s = String::new();
    base(&f, &mut s, venv);
    for e in &tri.edges {
        let style = if e.constrained { r#"stroke="black" stroke-width="2""# } else { r##"stroke="#999" stroke-width="0.7""## };
        f.line(&mut s, tri.vertices[e.a], tri.vertices[e.b], style);
    }
    for &(a, b) in &dual.edges {
        f.line(&mut s, dual.representatives[a], dual.representatives[b], r##"stroke="#36c" stroke-width="0.7""##);
    }
    for r in &dual.representatives {
        f.dot(&mut s, *r, 2.0, "#36c");
    }
    generators(&f, &mut s, gens);
    f.dot(&mut s, dual.anchor, 4.0, "blue");
    document(PANEL, PANEL, &s)
}

/// One panel per signature layer, with that layer's triangles filled.
pub fn render_layers(venv: &ValidatedEnvironment, c: &CoverComplex) -> String {
    let layers = c.layers();
    let n = layers.len().max(1);
    let cols = (n as f64).sqrt().ceil() as usize;
    let rows = n.div_ceil(cols);
    let mut s = String::new();
    for (k, (sig, tris)) in layers.iter().enumerate() {
        let f = Frame::new(venv, (k % cols) as f64 * PANEL, (k / cols) as f64 * PANEL);
        for &t in tris {
            let pts = c.triangulation.triangle_points(t);
            writeln!(s, r##"<polygon points="{}" fill="#9cf" stroke="#369" stroke-width="0.5"/>"##, f.points(&pts)).unwrap();
        }
        base(&f, &mut s, venv);
        generators(&f, &mut s, &c.generators);
        f.dot(&mut s, c.dual.anchor, 3.0, "blue");
        let label = if sig.is_identity() { "layer (identity)".to_string() } else { format!("layer {sig}") };
        f.caption(&mut s, &label);
    }
    document(cols as f64 * PANEL, rows as f64 * PANEL, &s)
}

/// A plan result: the path, the tether it leaves behind, and their lengths.
pub fn render_plan_result(venv: &ValidatedEnvironment, gens: &[Generator], r: &PlanResult, rank: usize) -> String {
    let f = Frame::new(venv, 0.0, 0.0);
    let mut s = String::new();
    base(&f, &mut s, venv);
    generators(&f, &mut s, gens);
    f.polyline(&mut s, &r.resulting_tether, r##"stroke="#c60" stroke-width="2" stroke-dasharray="6 3""##);
    f.polyline(&mut s, &r.path, r##"stroke="#093" stroke-width="2""##);
    f.dot(&mut s, venv.env.anchor, 4.0, "blue");
    f.dot(&mut s, r.path.start(), 4.0, "green");
    f.dot(&mut s, r.path.end(), 4.0, "red");
    f.caption(
        &mut s,
        &format!("#{rank} class \"{}\" path {:.3} tether {:.3}", r.goal_signature, r.path_length, r.resulting_tether_length),
    );
    document(PANEL, PANEL, &s)
}
