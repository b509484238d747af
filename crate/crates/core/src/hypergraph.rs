//! Incidence hypergraphs and the two-coloring checks.
//!
//! Vertices are homothets; every wedge (or dual point) contributes the edge
//! of homothets it meets. A coloring is a bit mask with bit `i` set when
//! vertex `i` is red.

use crate::construction::{self, BaseRow, Configuration, Provenance, WedgeKind};
use crate::duality::{self, DualScene};
use crate::geom::BasePolygon;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest vertex count accepted by exhaustive enumeration.
pub const DEFAULT_CAP: usize = 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("TooLarge: {n} vertices exceeds the exhaustive cap of {cap}; use certificate mode")]
    TooLarge { n: usize, cap: usize },
    #[error("CertificateFailure: {0}")]
    CertificateFailure(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    WedgeBased,
    PointBased,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceHypergraph {
    pub n_vertices: usize,
    pub a_edges: Vec<Vec<usize>>,
    pub b_edges: Vec<Vec<usize>>,
    pub source: Source,
}

impl IncidenceHypergraph {
    pub fn from_configuration(c: &Configuration, base: &BasePolygon) -> Self {
        let t = construction::incidence_table(c, base);
        Self { n_vertices: c.homothets.len(), a_edges: t.a_sets, b_edges: t.b_sets, source: Source::WedgeBased }
    }

    /// Edges in the order of the scene's points, split by type tag and
    /// indexed by source wedge.
    pub fn from_scene(scene: &DualScene, base: &BasePolygon) -> Self {
        let inc = duality::point_incidences(scene, base);
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (p, set) in scene.points.iter().zip(inc) {
            let list = if p.kind == WedgeKind::A { &mut a } else { &mut b };
            if list.len() <= p.wedge {
                list.resize(p.wedge + 1, Vec::new());
            }
            list[p.wedge] = set;
        }
        Self { n_vertices: scene.inflated.len(), a_edges: a, b_edges: b, source: Source::PointBased }
    }

    pub fn edges(&self, kind: WedgeKind) -> &[Vec<usize>] {
        match kind {
            WedgeKind::A => &self.a_edges,
            WedgeKind::B => &self.b_edges,
        }
    }

    /// Labeled edge sets, ignoring how they were obtained.
    pub fn same_edges(&self, other: &IncidenceHypergraph) -> bool {
        self.n_vertices == other.n_vertices && self.a_edges == other.a_edges && self.b_edges == other.b_edges
    }
}

/// A coloring over any number of vertices; `true` is red.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring(pub Vec<bool>);

impl Coloring {
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Coloring((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn is_red(&self, v: usize) -> bool {
        self.0[v]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub side: WedgeKind,
    pub edge: usize,
}

/// What counts as a witness edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// An all-red `a`-edge or an all-blue `b`-edge.
    RedAOrBlueB,
    /// Any edge of the given size whose vertices share a color.
    Monochromatic { size: usize },
}

/// Checks one witness against the hypergraph under `rule`.
pub fn validate_witness(h: &IncidenceHypergraph, coloring: &Coloring, w: Witness, rule: Rule) -> bool {
    let Some(edge) = h.edges(w.side).get(w.edge) else {
        return false;
    };
    match rule {
        Rule::RedAOrBlueB => {
            let want_red = w.side == WedgeKind::A;
            edge.iter().all(|&v| coloring.is_red(v) == want_red)
        }
        Rule::Monochromatic { size } => {
            edge.len() == size
                && edge.first().is_some_and(|&f| edge.iter().all(|&v| coloring.is_red(v) == coloring.is_red(f)))
        }
    }
}

struct Masks {
    a: Vec<u64>,
    b: Vec<u64>,
    full: u64,
}

fn masks(h: &IncidenceHypergraph, rule: Rule) -> Masks {
    let to_mask = |e: &Vec<usize>| e.iter().fold(0u64, |m, &v| m | 1 << v);
    let keep = |e: &&Vec<usize>| match rule {
        Rule::RedAOrBlueB => true,
        Rule::Monochromatic { size } => e.len() == size,
    };
    Masks {
        a: h.a_edges.iter().filter(keep).map(to_mask).collect(),
        b: h.b_edges.iter().filter(keep).map(to_mask).collect(),
        full: if h.n_vertices == 64 { u64::MAX } else { (1u64 << h.n_vertices) - 1 },
    }
}

fn has_witness(m: &Masks, rule: Rule, red: u64) -> bool {
    let blue = !red & m.full;
    match rule {
        Rule::RedAOrBlueB => m.a.iter().any(|&e| e & !red == 0) || m.b.iter().any(|&e| e & !blue == 0),
        Rule::Monochromatic { .. } => m
            .a
            .iter()
            .chain(&m.b)
            .any(|&e| e & red == e || e & blue == e),
    }
}

/// Lowest-index witness, `a`-side first.
pub fn find_witness(h: &IncidenceHypergraph, coloring: &Coloring, rule: Rule) -> Option<Witness> {
    for side in [WedgeKind::A, WedgeKind::B] {
        for edge in 0..h.edges(side).len() {
            let w = Witness { side, edge };
            if validate_witness(h, coloring, w, rule) {
                return Some(w);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub colorings: u64,
    /// Lowest coloring mask without a witness.
    pub counterexample: Option<u64>,
}

impl EnumerationReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Tries all `2^n` colorings. The mask space is cut into fixed chunks that
/// run in parallel; the smallest failing mask is reported.
pub fn check_all_colorings(h: &IncidenceHypergraph, rule: Rule, cap: usize) -> Result<EnumerationReport, HypergraphError> {
    let n = h.n_vertices;
    if n > cap.min(63) {
        return Err(HypergraphError::TooLarge { n, cap });
    }
    let m = masks(h, rule);
    let total = 1u64 << n;
    const CHUNK: u64 = 1 << 14;
    let chunks = total.div_ceil(CHUNK);
    let counterexample = (0..chunks)
        .into_par_iter()
        .filter_map(|c| {
            let end = ((c + 1) * CHUNK).min(total);
            (c * CHUNK..end).find(|&red| !has_witness(&m, rule, red))
        })
        .min();
    Ok(EnumerationReport { colorings: total, counterexample })
}

/// Witness found by replaying the recursion: at each step the connector's
/// color decides which part to descend into.
pub fn certificate_witness(c: &Configuration, coloring: &Coloring) -> Witness {
    descend(&c.provenance, coloring)
}

fn descend(node: &Provenance, coloring: &Coloring) -> Witness {
    match node {
        Provenance::Step { left, right, connector, .. } => {
            if coloring.is_red(*connector) {
                descend(right, coloring)
            } else {
                descend(left, coloring)
            }
        }
        Provenance::Base { row, homothets, a, b, .. } => {
            // The shared wedge meets every copy; single wedge j meets copy j.
            let (shared_side, shared_red, single_side, singles) = match row {
                BaseRow::ARow => (WedgeKind::A, true, WedgeKind::B, b),
                BaseRow::BRow => (WedgeKind::B, false, WedgeKind::A, a),
            };
            let shared_edge = match row {
                BaseRow::ARow => a.start,
                BaseRow::BRow => b.start,
            };
            match homothets.clone().position(|v| coloring.is_red(v) != shared_red) {
                None => Witness { side: shared_side, edge: shared_edge },
                Some(j) => Witness { side: single_side, edge: singles.start + j },
            }
        }
    }
}

/// Certificate witness, rechecked against the geometric hypergraph.
pub fn certified_witness(
    c: &Configuration,
    h: &IncidenceHypergraph,
    coloring: &Coloring,
) -> Result<Witness, HypergraphError> {
    let w = certificate_witness(c, coloring);
    let size = match w.side {
        WedgeKind::A => c.k,
        WedgeKind::B => c.l,
    };
    let ok = validate_witness(h, coloring, w, Rule::RedAOrBlueB) && h.edges(w.side)[w.edge].len() == size;
    if ok {
        Ok(w)
    } else {
        Err(HypergraphError::CertificateFailure(format!("{w:?} is not monochromatic in the required color")))
    }
}

/// Where sampled colorings get their witness from.
#[derive(Debug, Clone, Copy)]
pub enum WitnessSource<'a> {
    /// Scan the hypergraph's edges.
    Search,
    /// Replay the recursion of this configuration.
    Certificate(&'a Configuration),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleReport {
    pub colorings: u64,
    /// Witnesses found and re-validated against the hypergraph.
    pub validated: u64,
    pub first_failure: Option<Coloring>,
}

impl SampleReport {
    pub fn passed(&self) -> bool {
        self.validated == self.colorings
    }
}

fn witness_for(h: &IncidenceHypergraph, coloring: &Coloring, rule: Rule, source: WitnessSource) -> bool {
    match source {
        WitnessSource::Search => find_witness(h, coloring, rule).is_some(),
        WitnessSource::Certificate(c) => {
            let w = certificate_witness(c, coloring);
            let size = if w.side == WedgeKind::A { c.k } else { c.l };
            validate_witness(h, coloring, w, rule) && h.edges(w.side)[w.edge].len() == size
        }
    }
}

/// Checks `samples` colorings, or all of them when there are no more than
/// `samples`. Random colorings come from per-batch seeded streams.
pub fn sample_colorings(h: &IncidenceHypergraph, rule: Rule, source: WitnessSource, samples: u64, seed: u64) -> SampleReport {
    const BATCH: u64 = 1024;
    let n = h.n_vertices;
    let all = n < 63 && (1u64 << n) <= samples;
    let total = if all { 1u64 << n } else { samples };
    let results: Vec<(u64, Option<Coloring>)> = (0..total.div_ceil(BATCH))
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ b.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let mut ok = 0;
            let mut first = None;
            for i in b * BATCH..((b + 1) * BATCH).min(total) {
                let col = if all { Coloring::from_mask(i, n) } else { Coloring((0..n).map(|_| rng.gen()).collect()) };
                if witness_for(h, &col, rule, source) {
                    ok += 1;
                } else if first.is_none() {
                    first = Some(col);
                }
            }
            (ok, first)
        })
        .collect();
    SampleReport {
        colorings: total,
        validated: results.iter().map(|r| r.0).sum(),
        first_failure: results.into_iter().find_map(|r| r.1),
    }
}

/// Every coloring of the inflated homothets leaves some point in exactly
/// `m` homothets of one color.
pub fn verify_nondecomposable_dual(
    scene: &DualScene,
    base: &BasePolygon,
    cap: usize,
) -> Result<EnumerationReport, HypergraphError> {
    let h = IncidenceHypergraph::from_scene(scene, base);
    check_all_colorings(&h, Rule::Monochromatic { size: scene.m }, cap)
}
