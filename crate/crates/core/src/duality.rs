//! From wedges to witness points.
//!
//! Each wedge of a configuration is replaced by a unit translate of `-S`
//! whose designated vertex sits at the apex, then by the anchor `q` of that
//! translate. Each homothet `eps*S(p)` becomes `(1+eps)*S(p)`. Because
//! `(a+b)*S(p)` contains `q` exactly when `a*S(p)` meets `-b*S(q)`, the
//! point/homothet incidences of the result are the wedge/homothet incidences
//! of the configuration. Everything is rechecked rather than inherited.

use crate::construction::{self, Built, Configuration, ConstructionError, WedgeKind};
use crate::geom::{
    point_in_polygon, polygon_relation, polygons_intersect, realize_homothet, BasePolygon, Homothet, Point2,
    Relation,
};
use crate::prep::{PreparedPolygon, WedgeTemplateSet};
use crate::rational::{self, int, one, Rational};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default number of `delta` halvings before giving up.
pub const MAX_RETRIES: u32 = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualityError {
    #[error("IncidenceDrift: {kind:?}-wedge {wedge} meets {wedge_set:?} but its -S copy meets {copy_set:?}")]
    IncidenceDrift { kind: WedgeKind, wedge: usize, wedge_set: Vec<usize>, copy_set: Vec<usize> },
    #[error("point {0} has a different incidence set than its wedge")]
    PointMismatch(usize),
    #[error("scale band: homothet {index} has scale {scale}, outside [1-eps, 1+eps] for eps = {epsilon}")]
    ScaleBand { index: usize, scale: String, epsilon: String },
    #[error("BandViolation: {0}")]
    BandViolation(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("gave up after {attempts} attempts; last error: {last}")]
    RetriesExhausted { attempts: usize, last: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityQuery {
    pub alpha: Rational,
    pub beta: Rational,
    pub p: Point2,
    pub q: Point2,
}

/// Vertices of `scale * X + anchor`; `scale` may be zero.
fn scaled(vertices: &[Point2], scale: &Rational, anchor: &Point2) -> Vec<Point2> {
    vertices.iter().map(|v| &v.scale(scale) + anchor).collect()
}

/// Both sides of the containment/intersection equivalence, each computed
/// by its own predicate.
pub fn statement1_holds(query: &DualityQuery, s: &BasePolygon) -> (bool, bool) {
    assert!(!query.alpha.is_negative() && !query.beta.is_negative(), "scales must be nonnegative");
    let sum = &query.alpha + &query.beta;
    let lhs = point_in_polygon(&query.q, &scaled(&s.vertices, &sum, &query.p));
    let left = scaled(&s.vertices, &query.alpha, &query.p);
    let right = scaled(&s.reflected_vertices, &query.beta, &query.q);
    let rhs = polygons_intersect(&left, &right);
    (lhs, rhs)
}

/// Random rational in `[lo, hi]` with denominator at most 12. Small
/// denominators make boundary contacts common.
fn random_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Rational {
    let d = rng.gen_range(1..=12i64);
    Rational::new((rng.gen_range(lo * d..=hi * d)).into(), d.into())
}

/// A query with `alpha, beta` in `[0, 2]` and `p, q` in `[-3, 3]^2`.
pub fn random_query<R: Rng>(rng: &mut R) -> DualityQuery {
    let pt = |rng: &mut R| Point2::new(random_rational(rng, -3, 3), random_rational(rng, -3, 3));
    DualityQuery {
        alpha: random_rational(rng, 0, 2),
        beta: random_rational(rng, 0, 2),
        p: pt(rng),
        q: pt(rng),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statement1Report {
    pub samples: usize,
    pub mismatches: usize,
    /// Queries with both sides true.
    pub positives: usize,
    pub first_mismatch: Option<String>,
}

/// Evaluates `samples` seeded random queries in parallel batches.
pub fn check_statement1(s: &BasePolygon, samples: usize, seed: u64) -> Statement1Report {
    const BATCH: usize = 1000;
    let batches = samples.div_ceil(BATCH);
    let results: Vec<(usize, usize, Option<String>)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (b as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let n = BATCH.min(samples - b * BATCH);
            let mut bad = 0;
            let mut pos = 0;
            let mut first = None;
            for _ in 0..n {
                let q = random_query(&mut rng);
                let (l, r) = statement1_holds(&q, s);
                if l != r {
                    bad += 1;
                    first.get_or_insert_with(|| format!("{q:?}"));
                }
                if l && r {
                    pos += 1;
                }
            }
            (bad, pos, first)
        })
        .collect();
    Statement1Report {
        samples,
        mismatches: results.iter().map(|r| r.0).sum(),
        positives: results.iter().map(|r| r.1).sum(),
        first_mismatch: results.into_iter().find_map(|r| r.2),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualPoint {
    pub q: Point2,
    pub kind: WedgeKind,
    /// Index into the source configuration's wedge list of that kind.
    pub wedge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualScene {
    pub inflated: Vec<Homothet>,
    pub points: Vec<DualPoint>,
    pub m: usize,
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
}

impl DualScene {
    pub fn points_of(&self, kind: WedgeKind) -> impl Iterator<Item = &DualPoint> {
        self.points.iter().filter(move |p| p.kind == kind)
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Unit translates of `-S`, one per wedge (`a`-wedges first), each with the
/// wedge's vertex `-s_i` at the apex. Fails if any copy meets a different
/// set of homothets than its wedge, or decides a contact by tangency.
pub fn wedges_to_neg_copies(c: &Configuration, base: &BasePolygon) -> Result<Vec<(WedgeKind, Homothet)>, DualityError> {
    let table = construction::incidence_table(c, base);
    let polys: Vec<Vec<Point2>> = c.homothets.iter().map(|h| realize_homothet(h, base)).collect();
    let mut out = Vec::new();
    for (kind, wedges, sets) in [
        (WedgeKind::A, &c.a_wedges, &table.a_sets),
        (WedgeKind::B, &c.b_wedges, &table.b_sets),
    ] {
        for (wi, w) in wedges.iter().enumerate() {
            let copy = Homothet::reflected(one(), &w.apex + &base.vertices[w.vertex_index]);
            let region = realize_homothet(&copy, base);
            let mut hit = Vec::new();
            let mut tangent = false;
            for (hi, poly) in polys.iter().enumerate() {
                match polygon_relation(&region, poly) {
                    Relation::Overlapping => hit.push(hi),
                    Relation::Touching => {
                        tangent = true;
                        hit.push(hi);
                    }
                    Relation::Disjoint => {}
                }
            }
            if tangent || sorted(hit.clone()) != sorted(sets[wi].clone()) {
                return Err(DualityError::IncidenceDrift {
                    kind,
                    wedge: wi,
                    wedge_set: sets[wi].clone(),
                    copy_set: hit,
                });
            }
            out.push((kind, copy));
        }
    }
    Ok(out)
}

/// The dual scene of a configuration with `k = l = m`.
pub fn dualize(c: &Configuration, base: &BasePolygon, delta: &Rational) -> Result<DualScene, DualityError> {
    let copies = wedges_to_neg_copies(c, base)?;
    let inflated: Vec<Homothet> =
        c.homothets.iter().map(|h| Homothet::new(&h.scale + one(), h.anchor.clone())).collect();
    let n_a = c.a_wedges.len();
    let points: Vec<DualPoint> = copies
        .into_iter()
        .enumerate()
        .map(|(i, (kind, h))| DualPoint { q: h.anchor, kind, wedge: if i < n_a { i } else { i - n_a } })
        .collect();
    let scene = DualScene { inflated, points, m: c.k, delta: delta.clone() };
    let table = construction::incidence_table(c, base);
    let dual = point_incidences(&scene, base);
    for (i, p) in scene.points.iter().enumerate() {
        let expected = match p.kind {
            WedgeKind::A => &table.a_sets[p.wedge],
            WedgeKind::B => &table.b_sets[p.wedge],
        };
        if &dual[i] != expected {
            return Err(DualityError::PointMismatch(i));
        }
    }
    Ok(scene)
}

/// For each point, the sorted indices of inflated homothets containing it.
pub fn point_incidences(scene: &DualScene, base: &BasePolygon) -> Vec<Vec<usize>> {
    let polys: Vec<Vec<Point2>> = scene.inflated.iter().map(|h| realize_homothet(h, base)).collect();
    scene
        .points
        .iter()
        .map(|p| (0..polys.len()).filter(|&i| point_in_polygon(&p.q, &polys[i])).collect())
        .collect()
}

/// True iff every scale lies in `[1 - eps, 1 + eps]`.
pub fn verify_scale_band<'a>(scales: impl IntoIterator<Item = &'a Rational>, epsilon: &Rational) -> bool {
    let lo = one() - epsilon;
    let hi = one() + epsilon;
    scales.into_iter().all(|s| *s >= lo && *s <= hi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bands {
    #[serde(with = "rational::serde_str")]
    pub line_a: Rational,
    #[serde(with = "rational::serde_str")]
    pub line_b: Rational,
    #[serde(with = "rational::serde_str")]
    pub max_deviation: Rational,
    #[serde(with = "rational::serde_str")]
    pub gap_error: Rational,
}

/// Fits the two horizontal lines through the mean heights of the `a`- and
/// `b`-points and checks them against `delta` and the vertical extent
/// `|v_a.y - v_b.y|` of the normalized polygon.
pub fn validate_bands(scene: &DualScene, vertical_extent: &Rational) -> Result<Bands, DualityError> {
    let mean = |kind| -> Result<(Rational, Rational), DualityError> {
        let ys: Vec<Rational> = scene.points_of(kind).map(|p| p.q.y.clone()).collect();
        if ys.is_empty() {
            return Err(DualityError::BandViolation(format!("no {kind:?} points")));
        }
        let line = ys.iter().fold(Rational::zero(), |a, y| a + y) / int(ys.len() as i64);
        let dev = ys.iter().map(|y| (y - &line).abs()).max().unwrap();
        Ok((line, dev))
    };
    let (line_a, dev_a) = mean(WedgeKind::A)?;
    let (line_b, dev_b) = mean(WedgeKind::B)?;
    let max_deviation = dev_a.max(dev_b);
    if max_deviation > scene.delta {
        return Err(DualityError::BandViolation(format!(
            "a point is {} away from its line, delta is {}",
            rational::to_f64(&max_deviation),
            rational::to_f64(&scene.delta)
        )));
    }
    let gap_error = ((&line_a - &line_b).abs() - vertical_extent).abs();
    if gap_error > &scene.delta * int(2) {
        return Err(DualityError::BandViolation(format!(
            "band gap is off by {}",
            rational::to_f64(&gap_error)
        )));
    }
    Ok(Bands { line_a, line_b, max_deviation, gap_error })
}

/// One step of the retry loop, kept for reporting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct DualBuild {
    pub built: Built,
    pub scene: DualScene,
    pub attempts: Vec<Attempt>,
}

impl DualBuild {
    pub fn templates(&self) -> &WedgeTemplateSet {
        &self.built.templates
    }
}

/// Builds `T(m,m)` and its dual, halving `delta` whenever construction,
/// dualization or the optional scale band fails.
pub fn dualize_with_retry(
    prepared: &PreparedPolygon,
    m: usize,
    delta: &Rational,
    epsilon: Option<&Rational>,
    max_retries: u32,
) -> Result<DualBuild, DualityError> {
    let mut delta = delta.clone();
    let mut attempts = Vec::new();
    for _ in 0..=max_retries {
        let outcome = construction::build(prepared, m, m, &delta).map_err(DualityError::from).and_then(|built| {
            let scene = dualize(&built.config, &prepared.normalized, &delta)?;
            if let Some(eps) = epsilon {
                if let Some((index, h)) =
                    scene.inflated.iter().enumerate().find(|(_, h)| !verify_scale_band([&h.scale], eps))
                {
                    return Err(DualityError::ScaleBand {
                        index,
                        scale: rational::format(&h.scale),
                        epsilon: rational::format(eps),
                    });
                }
            }
            Ok((built, scene))
        });
        match outcome {
            Ok((built, scene)) => {
                attempts.push(Attempt { delta: delta.clone(), error: None });
                return Ok(DualBuild { built, scene, attempts });
            }
            Err(e) => {
                attempts.push(Attempt { delta: delta.clone(), error: Some(e.to_string()) });
                delta /= int(2);
            }
        }
    }
    Err(DualityError::RetriesExhausted {
        attempts: attempts.len(),
        last: attempts.last().and_then(|a| a.error.clone()).unwrap_or_default(),
    })
}
