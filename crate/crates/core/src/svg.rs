//! Deterministic SVG 1.1 drawings of polygons, configurations, dual scenes
//! and extended covers. Coordinates are the only lossy step: each is
//! rounded to 12 significant digits.

use crate::construction::{Configuration, Provenance, WedgeKind};
use crate::duality::{Bands, DualScene};
use crate::extension::ExtendedCover;
use crate::geom::{clip_to_wedge, realize_homothet, BasePolygon, Point2, Rect, Wedge};
use crate::prep::Quad;
use crate::rational::{self, Rational};
use std::fmt::Write;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const A_COLOR: &str = "#c0392b";
const B_COLOR: &str = "#2471a3";

/// `v` with 12 significant digits, shortest form.
pub fn num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".into();
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap();
    let s = format!("{rounded}");
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

struct Canvas {
    x0: f64,
    y1: f64,
    scale: f64,
    view: Rect,
    body: String,
}

impl Canvas {
    /// Fits `view` into the square canvas, y axis pointing up.
    fn new(view: Rect) -> Self {
        let (x0, y0) = (rational::to_f64(&view.x0), rational::to_f64(&view.y0));
        let (x1, y1) = (rational::to_f64(&view.x1), rational::to_f64(&view.y1));
        let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
        Canvas { x0, y1, scale: (SIZE - 2.0 * MARGIN) / span, view, body: String::new() }
    }

    fn map(&self, p: &Point2) -> (String, String) {
        let (x, y) = p.to_f64();
        (num(MARGIN + (x - self.x0) * self.scale), num(MARGIN + (self.y1 - y) * self.scale))
    }

    fn points(&self, poly: &[Point2]) -> String {
        poly.iter()
            .map(|p| {
                let (x, y) = self.map(p);
                format!("{x},{y}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn polygon(&mut self, poly: &[Point2], style: &str) {
        let pts = self.points(poly);
        writeln!(self.body, "<polygon points=\"{pts}\" {style}/>").unwrap();
    }

    fn wedge(&mut self, w: &Wedge, color: &str) {
        let clipped = clip_to_wedge(&self.view.corners(), w);
        if clipped.len() >= 3 {
            self.polygon(&clipped, &format!("fill=\"{color}\" fill-opacity=\"0.12\" stroke=\"{color}\" stroke-width=\"1\""));
        }
        let (x, y) = self.map(&w.apex);
        writeln!(self.body, "<circle cx=\"{x}\" cy=\"{y}\" r=\"3\" fill=\"{color}\"/>").unwrap();
    }

    fn cross(&mut self, p: &Point2, color: &str) {
        let (x, y) = p.to_f64();
        let cx = MARGIN + (x - self.x0) * self.scale;
        let cy = MARGIN + (self.y1 - y) * self.scale;
        let d = 5.0;
        writeln!(
            self.body,
            "<path d=\"M{} {}L{} {}M{} {}L{} {}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            num(cx - d),
            num(cy - d),
            num(cx + d),
            num(cy + d),
            num(cx - d),
            num(cy + d),
            num(cx + d),
            num(cy - d)
        )
        .unwrap();
    }

    fn label(&mut self, p: &Point2, text: &str) {
        let (x, y) = self.map(p);
        writeln!(self.body, "<text x=\"{x}\" y=\"{y}\" font-size=\"12\" font-family=\"sans-serif\">{text}</text>")
            .unwrap();
    }

    fn hline(&mut self, y: &Rational, color: &str) {
        let a = Point2::new(self.view.x0.clone(), y.clone());
        let b = Point2::new(self.view.x1.clone(), y.clone());
        let (ax, ay) = self.map(&a);
        let (bx, by) = self.map(&b);
        writeln!(
            self.body,
            "<line x1=\"{ax}\" y1=\"{ay}\" x2=\"{bx}\" y2=\"{by}\" stroke=\"{color}\" stroke-dasharray=\"6 4\"/>"
        )
        .unwrap();
    }

    fn finish(self, title: &str) -> String {
        let s = num(SIZE);
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n\
             <title>{title}</title>\n<rect width=\"{s}\" height=\"{s}\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

/// Bounding box grown by `pad` times its larger side.
fn padded(points: &[Point2], pad: Rational) -> Rect {
    let r = Rect::bounding(points).unwrap_or_else(|| Rect::new(-rational::one(), -rational::one(), rational::one(), rational::one()));
    let w = (&r.x1 - &r.x0).max(&r.y1 - &r.y0);
    let w = if w == rational::zero() { rational::one() } else { w };
    let p = w * pad;
    Rect::new(&r.x0 - &p, &r.y0 - &p, &r.x1 + &p, &r.y1 + &p)
}

const SHAPE_STYLE: &str = "fill=\"#5d6d7e\" fill-opacity=\"0.25\" stroke=\"#2c3e50\" stroke-width=\"1\"";

/// `S` inside its quadrilateral `Q`, with the four marked vertices.
pub fn render_polygon(base: &BasePolygon, quad: &Quad, labels: bool) -> String {
    let qv = quad.vertices();
    let mut c = Canvas::new(padded(&qv, rational::rat(1, 10)));
    c.polygon(&qv, "fill=\"none\" stroke=\"#7f8c8d\" stroke-width=\"1.5\" stroke-dasharray=\"5 3\"");
    c.polygon(&base.vertices, SHAPE_STYLE);
    let o = &base.center;
    let (x, y) = c.map(o);
    writeln!(c.body, "<circle cx=\"{x}\" cy=\"{y}\" r=\"3\" fill=\"black\"/>").unwrap();
    for (p, name) in [(&quad.v_a, "v_a"), (&quad.v_b, "v_b"), (&quad.v_l, "v_l"), (&quad.v_r, "v_r")] {
        let (x, y) = c.map(p);
        writeln!(c.body, "<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"#8e44ad\"/>").unwrap();
        c.label(p, name);
    }
    if labels {
        c.label(o, "o");
        for (i, v) in base.vertices.iter().enumerate() {
            c.label(v, &format!("{}", i + 1));
        }
    }
    c.finish("S and Q")
}

fn connector_index(p: &Provenance) -> Option<usize> {
    match p {
        Provenance::Step { connector, .. } => Some(*connector),
        Provenance::Base { .. } => None,
    }
}

/// Homothets, clipped wedges and apices of one configuration.
pub fn render_configuration(config: &Configuration, base: &BasePolygon, labels: bool) -> String {
    let polys: Vec<Vec<Point2>> = config.homothets.iter().map(|h| realize_homothet(h, base)).collect();
    let mut key: Vec<Point2> = polys.iter().flatten().cloned().collect();
    key.extend(config.a_wedges.iter().chain(&config.b_wedges).map(|w| w.apex.clone()));
    let mut c = Canvas::new(padded(&key, rational::rat(1, 4)));
    for w in &config.a_wedges {
        c.wedge(w, A_COLOR);
    }
    for w in &config.b_wedges {
        c.wedge(w, B_COLOR);
    }
    let conn = connector_index(&config.provenance);
    for (i, p) in polys.iter().enumerate() {
        let style = if Some(i) == conn {
            "fill=\"#e67e22\" fill-opacity=\"0.4\" stroke=\"#a04000\" stroke-width=\"1\""
        } else {
            SHAPE_STYLE
        };
        c.polygon(p, style);
    }
    if labels {
        for (i, h) in config.homothets.iter().enumerate() {
            c.label(&h.anchor, &format!("{i}"));
        }
        for (kind, ws) in [(WedgeKind::A, &config.a_wedges), (WedgeKind::B, &config.b_wedges)] {
            let tag = if kind == WedgeKind::A { "a" } else { "b" };
            for (i, w) in ws.iter().enumerate() {
                c.label(&w.apex, &format!("{tag}{i}"));
            }
        }
    }
    c.finish(&format!("T({},{})", config.k, config.l))
}

fn dual_layer(c: &mut Canvas, scene: &DualScene, bands: Option<&Bands>, base: &BasePolygon, labels: bool) {
    for h in &scene.inflated {
        c.polygon(&realize_homothet(h, base), "fill=\"#5d6d7e\" fill-opacity=\"0.15\" stroke=\"#2c3e50\" stroke-width=\"1\"");
    }
    if let Some(b) = bands {
        c.hline(&b.line_a, A_COLOR);
        c.hline(&b.line_b, B_COLOR);
    }
    for (i, p) in scene.points.iter().enumerate() {
        let color = if p.kind == WedgeKind::A { A_COLOR } else { B_COLOR };
        c.cross(&p.q, color);
        if labels {
            c.label(&p.q, &format!("q{i}"));
        }
    }
}

/// Inflated homothets, witness points by type and the two band lines.
pub fn render_dual(scene: &DualScene, bands: Option<&Bands>, base: &BasePolygon, labels: bool) -> String {
    let mut key: Vec<Point2> = scene.inflated.iter().flat_map(|h| realize_homothet(h, base)).collect();
    key.extend(scene.points.iter().map(|p| p.q.clone()));
    let mut c = Canvas::new(padded(&key, rational::rat(1, 10)));
    dual_layer(&mut c, scene, bands, base, labels);
    c.finish(&format!("dual scene, m = {}", scene.m))
}

/// The dual scene, the avoiding translates and the verified region.
pub fn render_extension(cover: &ExtendedCover, scene: &DualScene, bands: Option<&Bands>, base: &BasePolygon, labels: bool) -> String {
    let r = &cover.params.region;
    let mut c = Canvas::new(padded(&r.corners(), rational::rat(1, 20)));
    for h in &cover.translates {
        c.polygon(&realize_homothet(h, base), "fill=\"#27ae60\" fill-opacity=\"0.04\" stroke=\"#1e8449\" stroke-width=\"0.3\"");
    }
    dual_layer(&mut c, scene, bands, base, labels);
    c.polygon(&r.corners(), "fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"");
    c.finish(&format!("extended cover, m = {}", cover.params.m))
}

/// `alpha S + p`, `-beta S + q`, the sum copy `(alpha + beta) S + p` and
/// the point `q`.
pub fn render_query(base: &BasePolygon, alpha: &Rational, beta: &Rational, p: &Point2, q: &Point2) -> String {
    let at = |vs: &[Point2], k: &Rational, o: &Point2| -> Vec<Point2> { vs.iter().map(|v| &v.scale(k) + o).collect() };
    let sum = at(&base.vertices, &(alpha + beta), p);
    let left = at(&base.vertices, alpha, p);
    let right = at(&base.reflected_vertices, beta, q);
    let mut key: Vec<Point2> = sum.iter().chain(&left).chain(&right).cloned().collect();
    key.push(q.clone());
    let mut c = Canvas::new(padded(&key, rational::rat(1, 10)));
    c.polygon(&sum, "fill=\"none\" stroke=\"#7f8c8d\" stroke-width=\"1.5\" stroke-dasharray=\"5 3\"");
    c.polygon(&left, &format!("fill=\"{A_COLOR}\" fill-opacity=\"0.25\" stroke=\"{A_COLOR}\" stroke-width=\"1\""));
    c.polygon(&right, &format!("fill=\"{B_COLOR}\" fill-opacity=\"0.25\" stroke=\"{B_COLOR}\" stroke-width=\"1\""));
    c.cross(q, "black");
    c.finish("query")
}
