//! Polygon arguments: `preset:NAME` or a JSON file of vertices.

use coverkit_core::geom::Point2;
use coverkit_core::prep::presets;
use coverkit_core::rational::{self, Rational};
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(untagged)]
enum Coord {
    Text(String),
    Number(serde_json::Number),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VertexFile {
    Bare(Vec<[Coord; 2]>),
    Wrapped { vertices: Vec<[Coord; 2]> },
}

fn coord(c: &Coord) -> Result<Rational, String> {
    // Plain JSON numbers arrive as f64; their shortest decimal form is
    // read back exactly.
    let s = match c {
        Coord::Text(s) => s.clone(),
        Coord::Number(n) => match n.as_i64() {
            Some(i) => i.to_string(),
            None => n.as_f64().map(|f| f.to_string()).unwrap_or_default(),
        },
    };
    rational::parse(&s).map_err(|e| e.to_string())
}

pub fn parse_vertices(json: &str) -> Result<Vec<Point2>, String> {
    let file: VertexFile =
        serde_json::from_str(json).map_err(|e| format!("expected a list of [x, y] pairs: {e}"))?;
    let list = match file {
        VertexFile::Bare(v) | VertexFile::Wrapped { vertices: v } => v,
    };
    list.iter().map(|[x, y]| Ok(Point2::new(coord(x)?, coord(y)?))).collect()
}

pub fn load(spec: &str) -> Result<Vec<Point2>, String> {
    if let Some(name) = spec.strip_prefix("preset:") {
        return presets::by_name(name)
            .ok_or_else(|| format!("unknown preset `{name}`; known: {}", presets::NAMES.join(", ")));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?;
    parse_vertices(&text).map_err(|e| format!("{spec}: {e}"))
}
