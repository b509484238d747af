//! Plain-Rust bodies of the exported functions, testable off the browser.

use coverkit_core::construction;
use coverkit_core::duality::{self, DualityQuery};
use coverkit_core::geom::Point2;
use coverkit_core::hypergraph::{self, IncidenceHypergraph, Rule, WitnessSource};
use coverkit_core::prep::{presets, PreparedPolygon};
use coverkit_core::rational::{self, rat, Rational};
use coverkit_core::svg;
use serde::Serialize;

/// Largest `k` or `l` the page accepts; `T(4,4)` has 69 homothets.
pub const MAX_SIZE: usize = 4;
pub const MAX_M: usize = 3;
const EXHAUSTIVE_LIMIT: usize = 20;
const SAMPLES: u64 = 4096;

fn number(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn point(s: &str) -> Result<Point2, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y but got `{s}`"))?;
    Ok(Point2::new(number(x)?, number(y)?))
}

/// `preset:NAME`, or vertices written `x,y` separated by spaces or `;`.
pub fn polygon(text: &str) -> Result<PreparedPolygon, String> {
    let text = text.trim();
    let vertices = match text.strip_prefix("preset:") {
        Some(name) => presets::by_name(name).ok_or_else(|| format!("unknown preset `{name}`"))?,
        None => text
            .split(|c: char| c == ';' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(point)
            .collect::<Result<_, _>>()?,
    };
    PreparedPolygon::new(&vertices).map_err(|e| e.to_string())
}

fn size(name: &str, v: usize, max: usize) -> Result<(), String> {
    if v == 0 || v > max {
        return Err(format!("{name} must be between 1 and {max}"));
    }
    Ok(())
}

#[derive(Serialize)]
struct Property1 {
    mode: &'static str,
    colorings: u64,
    passed: bool,
}

#[derive(Serialize)]
struct ConfigurationView {
    svg: String,
    homothets: usize,
    a_wedges: usize,
    b_wedges: usize,
    property1: Property1,
}

pub fn build_configuration(polygon_text: &str, k: usize, l: usize, labels: bool) -> Result<String, String> {
    size("k", k, MAX_SIZE)?;
    size("l", l, MAX_SIZE)?;
    let p = polygon(polygon_text)?;
    let built = construction::build(&p, k, l, &rat(1, 64)).map_err(|e| e.to_string())?;
    let c = &built.config;
    let h = IncidenceHypergraph::from_configuration(c, &p.normalized);
    let property1 = if c.homothets.len() <= EXHAUSTIVE_LIMIT {
        let r = hypergraph::check_all_colorings(&h, Rule::RedAOrBlueB, EXHAUSTIVE_LIMIT).map_err(|e| e.to_string())?;
        Property1 { mode: "exhaustive", colorings: r.colorings, passed: r.passed() }
    } else {
        let r = hypergraph::sample_colorings(&h, Rule::RedAOrBlueB, WitnessSource::Certificate(c), SAMPLES, 1);
        Property1 { mode: "certificate", colorings: r.colorings, passed: r.passed() }
    };
    let view = ConfigurationView {
        svg: svg::render_configuration(c, &p.normalized, labels),
        homothets: c.homothets.len(),
        a_wedges: c.a_wedges.len(),
        b_wedges: c.b_wedges.len(),
        property1,
    };
    Ok(serde_json::to_string(&view).unwrap())
}

#[derive(Serialize)]
struct DualView {
    svg: String,
    inflated: usize,
    points: usize,
    attempts: Vec<String>,
    nondecomposable: bool,
}

pub fn dual_scene(polygon_text: &str, m: usize, epsilon: &str, labels: bool) -> Result<String, String> {
    size("m", m, MAX_M)?;
    let p = polygon(polygon_text)?;
    let eps = number(epsilon)?;
    let d = duality::dualize_with_retry(&p, m, &rat(1, 64), Some(&eps), duality::MAX_RETRIES).map_err(|e| e.to_string())?;
    let bands = duality::validate_bands(&d.scene, &p.height()).map_err(|e| e.to_string())?;
    let report = hypergraph::verify_nondecomposable_dual(&d.scene, &p.normalized, hypergraph::DEFAULT_CAP)
        .map_err(|e| e.to_string())?;
    let attempts = d
        .attempts
        .iter()
        .map(|a| format!("delta {}: {}", rational::format(&a.delta), a.error.as_deref().unwrap_or("ok")))
        .collect();
    let view = DualView {
        svg: svg::render_dual(&d.scene, Some(&bands), &p.normalized, labels),
        inflated: d.scene.inflated.len(),
        points: d.scene.points.len(),
        attempts,
        nondecomposable: report.passed(),
    };
    Ok(serde_json::to_string(&view).unwrap())
}

#[derive(Serialize)]
struct QueryView {
    svg: String,
    contains: bool,
    intersect: bool,
}

/// `alpha, beta >= 0` and points written `x,y`.
pub fn query(polygon_text: &str, alpha: &str, beta: &str, p: &str, q: &str) -> Result<String, String> {
    let s = polygon(polygon_text)?;
    let query = DualityQuery { alpha: number(alpha)?, beta: number(beta)?, p: point(p)?, q: point(q)? };
    if query.alpha < rational::zero() || query.beta < rational::zero() {
        return Err("alpha and beta must be nonnegative".into());
    }
    let (contains, intersect) = duality::statement1_holds(&query, &s.normalized);
    let svg = svg::render_query(&s.normalized, &query.alpha, &query.beta, &query.p, &query.q);
    Ok(serde_json::to_string(&QueryView { svg, contains, intersect }).unwrap())
}
