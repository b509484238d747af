//! Completing the dual scene to an `m`-fold cover of a bounded region.
//!
//! Translates of `(1-eps)S` are laid out on a lattice, those containing a
//! witness point are dropped, and a few translates hugging each witness
//! point from outside are added. The depth of the whole family is then
//! checked exactly; every deficient face found gets new avoiding
//! translates, and the check is repeated.

use crate::duality::DualScene;
use crate::geom::{orient, point_in_polygon, polygon_relation, realize_homothet, BasePolygon, Homothet, Point2, Rect};
use crate::rational::{self, int, one, rat, Rational};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Leaf size of the depth quadtree, in polygons crossing the cell.
const LEAF_POLYGONS: usize = 6;
const MAX_LEVEL: u32 = 48;
/// Deficient faces remembered per scan.
const MAX_DEFICITS: usize = 4096;
pub const DEFAULT_ROUNDS: usize = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("RegionEmpty")]
    RegionEmpty,
    #[error("epsilon must lie strictly between 0 and 1")]
    EpsilonOutOfRange,
    #[error("depth {depth} < {m} at ({x}, {y}) after {rounds} repair rounds")]
    Deficient { depth: usize, m: usize, x: String, y: String, rounds: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionParams {
    #[serde(with = "rational::serde_str")]
    pub epsilon: Rational,
    pub region: Rect,
    pub m: usize,
    #[serde(with = "rational::serde_str")]
    pub line_a: Rational,
    #[serde(with = "rational::serde_str")]
    pub line_b: Rational,
    /// Let repair translates shrink below `1-eps`, down to `delta/8`, when
    /// no full-size translate fits. Breaks the scale band; off by default.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub scale_free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    /// Exact when below the target depth, otherwise a certified lower bound.
    pub min_depth: usize,
    pub witness_point: Point2,
    pub cells_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedCover {
    pub translates: Vec<Homothet>,
    pub report: CoverageReport,
    pub params: ExtensionParams,
    pub rounds: usize,
}

/// Lower bound for the inradius of `S` about its center: the distance to
/// each edge line, with the Euclidean edge length replaced by the larger
/// L1 length.
pub fn inradius_lower_bound(base: &BasePolygon) -> Rational {
    let n = base.len();
    (0..n)
        .map(|i| {
            let a = base.vertex(i);
            let b = base.vertex(i + 1);
            orient(a, b, &base.center).abs() / (b - a).norm_l1()
        })
        .min()
        .unwrap()
}

fn ceil_sqrt(m: usize) -> usize {
    (1..).find(|r| r * r >= m).unwrap()
}

/// Lattice pitch: a power of two small enough that every translate holds
/// at least `m` lattice points of the dual lattice around any point.
pub fn lattice_pitch(base: &BasePolygon, epsilon: &Rational, m: usize) -> Rational {
    let r = inradius_lower_bound(base) * (one() - epsilon);
    rational::dyadic_floor(&(r * rat(7, 5) / int(ceil_sqrt(m) as i64)))
}

fn poly_of(h: &Homothet, base: &BasePolygon) -> Vec<Point2> {
    realize_homothet(h, base)
}

fn avoids(poly: &[Point2], points: &[Point2]) -> bool {
    points.iter().all(|q| !point_in_polygon(q, poly))
}

/// Lattice translates of `(1-eps)S` over the region grown by one diameter,
/// minus those containing a witness point, plus eight translates around
/// each witness point that stop short of it.
pub fn generate_avoiding_translates(scene: &DualScene, base: &BasePolygon, params: &ExtensionParams) -> Vec<Homothet> {
    let scale = one() - &params.epsilon;
    let points: Vec<Point2> = scene.points.iter().map(|p| p.q.clone()).collect();
    let pitch = lattice_pitch(base, &params.epsilon, params.m);
    let shape = Rect::bounding(&base.vertices.iter().map(|v| v.scale(&scale)).collect::<Vec<_>>()).unwrap();
    let r = &params.region;
    let range = |lo: Rational, hi: Rational| -> std::ops::RangeInclusive<i64> {
        let a = (lo / &pitch).floor().to_integer();
        let b = (hi / &pitch).ceil().to_integer();
        i64::try_from(a).unwrap()..=i64::try_from(b).unwrap()
    };
    let xs = range(&r.x0 - &shape.x1, &r.x1 - &shape.x0);
    let ys = range(&r.y0 - &shape.y1, &r.y1 - &shape.y0);
    let mut out = Vec::new();
    for j in ys {
        for i in xs.clone() {
            let h = Homothet::new(scale.clone(), Point2::new(&pitch * int(i), &pitch * int(j)));
            if avoids(&poly_of(&h, base), &points) {
                out.push(h);
            }
        }
    }
    let nudge = &scene.delta / int(4);
    let dirs = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];
    for q in &points {
        for (dx, dy) in dirs {
            let u = Point2::from_ints(dx, dy);
            // Support vertex of the translate facing back towards q.
            let v = base.vertices.iter().min_by(|a, b| u.dot(a).cmp(&u.dot(b))).unwrap();
            let anchor = &(q + &u.scale(&nudge)) - &v.scale(&scale);
            let h = Homothet::new(scale.clone(), anchor);
            if avoids(&poly_of(&h, base), &points) {
                out.push(h);
            }
        }
    }
    out
}

/// Float filter threshold for orientation values. Coordinates stay within
/// a few units, so rounding error is many orders below this.
const FILTER: f64 = 1e-9;


struct Indexed {
    poly: Vec<Point2>,
    approx: Vec<(f64, f64)>,
    /// `(x0, y0, x1, y1)` of the float vertices.
    fbox: (f64, f64, f64, f64),
}

fn index(polys: &[Vec<Point2>]) -> Vec<Indexed> {
    polys
        .iter()
        .map(|p| {
            let approx: Vec<(f64, f64)> = p.iter().map(Point2::to_f64).collect();
            let fbox = approx.iter().fold((f64::MAX, f64::MAX, f64::MIN, f64::MIN), |b, v| {
                (b.0.min(v.0), b.1.min(v.1), b.2.max(v.0), b.3.max(v.1))
            });
            Indexed { poly: p.clone(), approx, fbox }
        })
        .collect()
}

impl Indexed {
    /// Closed containment, decided in floats when the float verdict is
    /// unambiguous.
    fn contains(&self, q: &Point2, qf: (f64, f64)) -> bool {
        let n = self.approx.len();
        let mut sure_inside = true;
        for i in 0..n {
            let (ax, ay) = self.approx[i];
            let (bx, by) = self.approx[(i + 1) % n];
            let o = (bx - ax) * (qf.1 - ay) - (by - ay) * (qf.0 - ax);
            if o > FILTER {
                return false;
            }
            if o > -FILTER {
                sure_inside = false;
            }
        }
        sure_inside || point_in_polygon(q, &self.poly)
    }

    /// Whether the polygon meets the closed rectangle: a float
    /// separating-axis test with a margin, exact when it is inconclusive.
    fn meets(&self, corners: &[(f64, f64); 4], cell_poly: &[Point2]) -> bool {
        let n = self.approx.len();
        let axes = (0..n)
            .map(|i| {
                let (ax, ay) = self.approx[i];
                let (bx, by) = self.approx[(i + 1) % n];
                (ay - by, bx - ax)
            })
            .chain([(1.0, 0.0), (0.0, 1.0)]);
        let mut sure = true;
        for (nx, ny) in axes {
            let proj = |pts: &mut dyn Iterator<Item = &(f64, f64)>| {
                pts.fold((f64::MAX, f64::MIN), |(lo, hi), p| {
                    let v = nx * p.0 + ny * p.1;
                    (lo.min(v), hi.max(v))
                })
            };
            let (plo, phi) = proj(&mut self.approx.iter());
            let (clo, chi) = proj(&mut corners.iter());
            let overlap = phi.min(chi) - plo.max(clo);
            if overlap < -FILTER {
                return false;
            }
            if overlap <= FILTER {
                sure = false;
            }
        }
        sure || polygon_relation(&self.poly, cell_poly).meets()
    }
}

#[derive(Debug, Clone)]
struct Deficit {
    point: Point2,
    depth: usize,
}

#[derive(Debug, Clone)]
struct Scan {
    min_depth: usize,
    witness: Point2,
    cells: usize,
    deficits: Vec<Deficit>,
}

impl Scan {
    fn merge(mut self, other: Scan) -> Scan {
        if other.min_depth < self.min_depth {
            self.min_depth = other.min_depth;
            self.witness = other.witness;
        }
        self.cells += other.cells;
        let room = MAX_DEFICITS.saturating_sub(self.deficits.len());
        self.deficits.extend(other.deficits.into_iter().take(room));
        self
    }
}

fn rect_poly(r: &Rect) -> Vec<Point2> {
    r.corners().to_vec()
}

fn half(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

/// Quadtree over the region. A cell inside at least `m` polygons is done;
/// a cell crossed by few polygons is swept exactly; otherwise it splits.
fn scan_cell(items: &[Indexed], cell: Rect, base_count: usize, cand: Vec<usize>, m: usize, level: u32) -> Scan {
    let corners = cell.corners();
    let approx = corners.clone().map(|c| c.to_f64());
    let (fx0, fy0) = (rational::to_f64(&cell.x0), rational::to_f64(&cell.y0));
    let (fx1, fy1) = (rational::to_f64(&cell.x1), rational::to_f64(&cell.y1));
    let cell_poly = rect_poly(&cell);
    let mut inside = base_count;
    let mut partial = Vec::new();
    for i in cand {
        let it = &items[i];
        let (bx0, by0, bx1, by1) = it.fbox;
        if bx0 > fx1 + FILTER || bx1 < fx0 - FILTER || by0 > fy1 + FILTER || by1 < fy0 - FILTER {
            continue;
        }
        if corners.iter().zip(&approx).all(|(c, cf)| it.contains(c, *cf)) {
            inside += 1;
        } else if it.meets(&approx, &cell_poly) {
            partial.push(i);
        }
    }
    if inside >= m {
        return Scan { min_depth: inside, witness: cell.center(), cells: 1, deficits: Vec::new() };
    }
    if partial.len() <= LEAF_POLYGONS || level >= MAX_LEVEL {
        let polys: Vec<&[Point2]> = partial.iter().map(|&i| items[i].poly.as_slice()).collect();
        return sweep(&cell, &polys, inside, m);
    }
    let mx = half(&cell.x0, &cell.x1);
    let my = half(&cell.y0, &cell.y1);
    let children = [
        Rect::new(cell.x0.clone(), my.clone(), mx.clone(), cell.y1.clone()),
        Rect::new(mx.clone(), my.clone(), cell.x1.clone(), cell.y1.clone()),
        Rect::new(cell.x0.clone(), cell.y0.clone(), mx.clone(), my.clone()),
        Rect::new(mx, cell.y0.clone(), cell.x1.clone(), my),
    ];
    let scans: Vec<Scan> = if level < 3 {
        children
            .into_par_iter()
            .map(|c| scan_cell(items, c, inside, partial.clone(), m, level + 1))
            .collect()
    } else {
        children.into_iter().map(|c| scan_cell(items, c, inside, partial.clone(), m, level + 1)).collect()
    };
    let mut it = scans.into_iter();
    let first = it.next().unwrap();
    let mut s = it.fold(first, Scan::merge);
    s.cells += 1;
    s
}

fn edges(poly: &[Point2]) -> impl Iterator<Item = (&Point2, &Point2)> {
    (0..poly.len()).map(move |i| (&poly[i], &poly[(i + 1) % poly.len()]))
}

/// `x` of the crossing of segments `ab` and `cd`, if they cross at a single
/// point.
fn crossing_x(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> Option<Rational> {
    let r = b - a;
    let s = d - c;
    let den = r.cross(&s);
    if den.is_zero() {
        return None;
    }
    let t = (c - a).cross(&s) / &den;
    let u = (c - a).cross(&r) / &den;
    let zero = Rational::zero();
    (t >= zero && t <= one() && u >= zero && u <= one()).then(|| &a.x + &r.x * &t)
}

/// `y` range of a convex polygon on the vertical line at `x`, where `x` is
/// not the abscissa of any vertex.
fn vertical_section(poly: &[Point2], x: &Rational) -> Option<(Rational, Rational)> {
    let mut ys = Vec::with_capacity(2);
    for (a, b) in edges(poly) {
        let (lo, hi) = if a.x < b.x { (a, b) } else { (b, a) };
        if &lo.x < x && x < &hi.x {
            ys.push(&lo.y + (&hi.y - &lo.y) * (x - &lo.x) / (&hi.x - &lo.x));
        }
    }
    let lo = ys.iter().min()?.clone();
    let hi = ys.iter().max()?.clone();
    Some((lo, hi))
}

/// Exact minimum depth over a closed cell. Event abscissae are the cell
/// sides, vertices, edge crossings and crossings with the cell's top and
/// bottom; inside each slab no face appears or vanishes, so sampling the
/// middle line visits every open face. Points on face boundaries are in
/// every polygon of some adjacent face, so open faces give the minimum.
fn sweep(cell: &Rect, polys: &[&[Point2]], base_count: usize, m: usize) -> Scan {
    let inside_x = |x: &Rational| &cell.x0 < x && x < &cell.x1;
    let mut xs = vec![cell.x0.clone(), cell.x1.clone()];
    let top = (Point2::new(cell.x0.clone(), cell.y1.clone()), Point2::new(cell.x1.clone(), cell.y1.clone()));
    let bottom = (Point2::new(cell.x0.clone(), cell.y0.clone()), Point2::new(cell.x1.clone(), cell.y0.clone()));
    for (pi, p) in polys.iter().enumerate() {
        xs.extend(p.iter().map(|v| v.x.clone()).filter(|x| inside_x(x)));
        for (a, b) in edges(p) {
            for side in [&top, &bottom] {
                xs.extend(crossing_x(a, b, &side.0, &side.1).filter(|x| inside_x(x)));
            }
            for q in &polys[pi + 1..] {
                for (c, d) in edges(q) {
                    xs.extend(crossing_x(a, b, c, d).filter(|x| inside_x(x)));
                }
            }
        }
    }
    xs.sort();
    xs.dedup();
    let mut best: Option<(usize, Point2)> = None;
    let mut deficits = Vec::new();
    for w in xs.windows(2) {
        let xm = half(&w[0], &w[1]);
        let sections: Vec<(Rational, Rational)> = polys.iter().filter_map(|p| vertical_section(p, &xm)).collect();
        let mut ys = vec![cell.y0.clone(), cell.y1.clone()];
        for (lo, hi) in &sections {
            for y in [lo, hi] {
                if &cell.y0 < y && y < &cell.y1 {
                    ys.push(y.clone());
                }
            }
        }
        ys.sort();
        ys.dedup();
        for g in ys.windows(2) {
            let depth = base_count + sections.iter().filter(|(lo, hi)| lo <= &g[0] && hi >= &g[1]).count();
            if best.as_ref().is_none_or(|(d, _)| depth < *d) {
                best = Some((depth, Point2::new(xm.clone(), half(&g[0], &g[1]))));
            }
            if depth < m && deficits.len() < MAX_DEFICITS {
                deficits.push(Deficit { point: Point2::new(xm.clone(), half(&g[0], &g[1])), depth });
            }
        }
    }
    let (min_depth, witness) = best.unwrap();
    Scan { min_depth, witness, cells: 1, deficits }
}

fn scan(polys: &[Vec<Point2>], region: &Rect, m: usize) -> Result<Scan, ExtensionError> {
    if region.is_empty() {
        return Err(ExtensionError::RegionEmpty);
    }
    let items = index(polys);
    Ok(scan_cell(&items, region.clone(), 0, (0..items.len()).collect(), m, 0))
}

/// Minimum coverage depth over the closed region, refined until it is
/// either exact or at least `m`.
pub fn verify_depth(polys: &[Vec<Point2>], region: &Rect, m: usize) -> Result<CoverageReport, ExtensionError> {
    let s = scan(polys, region, m)?;
    Ok(CoverageReport { min_depth: s.min_depth, witness_point: s.witness, cells_checked: s.cells })
}

/// Snap to the dyadic grid of step `res`.
fn snap(p: &Point2, res: &Rational) -> Point2 {
    let r = |v: &Rational| (v / res).round() * res;
    Point2::new(r(&p.x), r(&p.y))
}

/// Signed clearance of `q` from a clockwise polygon: positive outside,
/// negative inside, scaled per edge by its L1 length.
fn clearance(poly: &[Point2], q: &Point2) -> Rational {
    edges(poly).map(|(a, b)| orient(a, b, q) / (b - a).norm_l1()).max().unwrap()
}

/// Translates of `scale*S` containing `z` and avoiding `points`, best
/// margin first.
fn covering_candidates(base: &BasePolygon, scale: &Rational, z: &Point2, points: &[Point2]) -> Vec<(Rational, Homothet)> {
    let n = base.len();
    let mut spots = vec![Point2::origin()];
    for i in 0..n {
        let v = base.vertex(i);
        let mid = (v + base.vertex(i + 1)).scale(&rat(1, 2));
        for k in [1u32, 3, 5, 7, 10, 14, 20, 28, 40] {
            let keep = one() - rational::pow2_inv(k);
            spots.push(v.scale(&keep));
            spots.push(mid.scale(&keep));
        }
    }
    let mut out: Vec<(Rational, Homothet)> = Vec::new();
    for c in spots {
        let anchor = z - &c.scale(scale);
        let poly = realize_homothet(&Homothet::new(scale.clone(), anchor.clone()), base);
        let depth_in = -clearance(&poly, z);
        let away = points.iter().map(|q| clearance(&poly, q)).min().unwrap_or_else(one);
        let margin = depth_in.min(away);
        if !margin.is_positive() {
            continue;
        }
        let res = rational::dyadic_floor(&margin) / int(2);
        let h = Homothet::new(scale.clone(), snap(&anchor, &res));
        let poly = realize_homothet(&h, base);
        if point_in_polygon(z, &poly) && avoids(&poly, points) {
            out.push((margin, h));
        }
    }
    out.sort_by(|a, b| b.0.cmp(&a.0));
    out.dedup_by(|a, b| a.1 == b.1);
    out
}

/// Lattice, filter, hug, then repair until the family together with the
/// inflated homothets covers the region `m` times.
pub fn extend(
    scene: &DualScene,
    base: &BasePolygon,
    params: &ExtensionParams,
    max_rounds: usize,
) -> Result<ExtendedCover, ExtensionError> {
    if !params.epsilon.is_positive() || params.epsilon >= one() {
        return Err(ExtensionError::EpsilonOutOfRange);
    }
    if params.region.is_empty() {
        return Err(ExtensionError::RegionEmpty);
    }
    let scale = one() - &params.epsilon;
    let points: Vec<Point2> = scene.points.iter().map(|p| p.q.clone()).collect();
    let inflated: Vec<Vec<Point2>> = scene.inflated.iter().map(|h| poly_of(h, base)).collect();
    let mut translates = generate_avoiding_translates(scene, base, params);
    let mut rounds = 0;
    loop {
        let mut polys = inflated.clone();
        polys.extend(translates.iter().map(|h| poly_of(h, base)));
        let s = scan(&polys, &params.region, params.m)?;
        if s.min_depth >= params.m {
            let report = CoverageReport { min_depth: s.min_depth, witness_point: s.witness, cells_checked: s.cells };
            return Ok(ExtendedCover { translates, report, params: params.clone(), rounds });
        }
        if rounds == max_rounds {
            return Err(ExtensionError::Deficient {
                depth: s.min_depth,
                m: params.m,
                x: rational::format(&s.witness.x),
                y: rational::format(&s.witness.y),
                rounds,
            });
        }
        rounds += 1;
        let mut added: Vec<Vec<Point2>> = Vec::new();
        for d in &s.deficits {
            let have = d.depth + added.iter().filter(|p| point_in_polygon(&d.point, p)).count();
            if have >= params.m {
                continue;
            }
            let mut cands = covering_candidates(base, &scale, &d.point, &points);
            let mut small = scale.clone();
            while params.scale_free && cands.len() < params.m - have && small > &scene.delta / int(8) {
                small = (small / int(2)).max(&scene.delta / int(8));
                cands.extend(covering_candidates(base, &small, &d.point, &points));
            }
            for (_, h) in cands.into_iter().take(params.m - have) {
                added.push(poly_of(&h, base));
                translates.push(h);
            }
        }
        if added.is_empty() {
            return Err(ExtensionError::Deficient {
                depth: s.min_depth,
                m: params.m,
                x: rational::format(&s.witness.x),
                y: rational::format(&s.witness.y),
                rounds,
            });
        }
    }
}

/// Minimum depth over `n` random dyadic points of the region, with the
/// point attaining it.
pub fn sample_min_depth(polys: &[Vec<Point2>], region: &Rect, n: usize, seed: u64) -> (usize, Point2) {
    let items = index(polys);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits = 1i64 << 24;
    let pts: Vec<Point2> = (0..n)
        .map(|_| {
            let fx = rat(rng.gen_range(0..=bits), bits);
            let fy = rat(rng.gen_range(0..=bits), bits);
            Point2::new(&region.x0 + (&region.x1 - &region.x0) * fx, &region.y0 + (&region.y1 - &region.y0) * fy)
        })
        .collect();
    pts.into_par_iter()
        .map(|p| {
            let pf = p.to_f64();
            let d = items
                .iter()
                .filter(|it| {
                    let (x0, y0, x1, y1) = it.fbox;
                    pf.0 >= x0 - FILTER && pf.0 <= x1 + FILTER && pf.1 >= y0 - FILTER && pf.1 <= y1 + FILTER
                })
                .filter(|it| it.contains(&p, pf))
                .count();
            (d, p)
        })
        .min_by(|a, b| a.0.cmp(&b.0))
        .unwrap_or((usize::MAX, Point2::origin()))
}

/// True iff no translate contains any of the points.
pub fn all_avoid(translates: &[Homothet], base: &BasePolygon, points: &[Point2]) -> bool {
    translates.iter().all(|h| avoids(&poly_of(h, base), points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::BasePolygon;

    fn diamond() -> BasePolygon {
        BasePolygon::from_clockwise(vec![
            Point2::from_ints(0, 1),
            Point2::from_ints(1, 0),
            Point2::from_ints(0, -1),
            Point2::from_ints(-1, 0),
        ])
    }

    fn square(x0: i64, y0: i64, x1: i64, y1: i64) -> Rect {
        Rect::new(int(x0), int(y0), int(x1), int(y1))
    }

    #[test]
    fn single_translate_covers_inner_region() {
        let s = diamond();
        let p = realize_homothet(&Homothet::new(int(4), Point2::origin()), &s);
        let r = verify_depth(&[p], &square(-1, -1, 1, 1), 1).unwrap();
        assert!(r.min_depth >= 1);
    }

    #[test]
    fn gap_between_translates() {
        let s = diamond();
        let a = realize_homothet(&Homothet::new(one(), Point2::from_ints(-2, 0)), &s);
        let b = realize_homothet(&Homothet::new(one(), Point2::from_ints(2, 0)), &s);
        let r = verify_depth(&[a, b], &square(-2, -1, 2, 1), 1).unwrap();
        assert_eq!(r.min_depth, 0);
        let w = &r.witness_point;
        assert!(w.x > int(-1) && w.x < int(1) || w.y.abs() > rat(1, 2));
    }

    #[test]
    fn touching_counts_on_shared_boundary() {
        // Two squares-as-diamonds sharing an edge still cover the edge.
        let s = diamond();
        let a = realize_homothet(&Homothet::new(one(), Point2::origin()), &s);
        let r = verify_depth(&[a], &Rect::new(rat(-1, 4), rat(-1, 4), rat(1, 4), rat(1, 4)), 1).unwrap();
        assert_eq!(r.min_depth, 1);
    }

    #[test]
    fn sweep_matches_samples() {
        let s = diamond();
        let polys: Vec<Vec<Point2>> = [(0, 0, 2), (1, 1, 1), (-1, 0, 1), (0, -2, 2)]
            .iter()
            .map(|&(x, y, sc)| realize_homothet(&Homothet::new(int(sc), Point2::from_ints(x, y)), &s))
            .collect();
        let region = square(-2, -2, 2, 2);
        for m in 1..4 {
            let r = verify_depth(&polys, &region, m).unwrap();
            let (d, _) = sample_min_depth(&polys, &region, 2000, 7);
            assert!(d >= r.min_depth, "m={m}: sample {d} < reported {}", r.min_depth);
            if r.min_depth < m {
                let at = polys.iter().filter(|p| point_in_polygon(&r.witness_point, p)).count();
                assert_eq!(at, r.min_depth);
            }
        }
    }

    #[test]
    fn empty_region() {
        assert_eq!(verify_depth(&[], &square(0, 0, 0, 1), 1).unwrap_err(), ExtensionError::RegionEmpty);
    }

    #[test]
    fn scale_free_fills_gaps_between_dense_points() {
        use crate::construction::WedgeKind;
        use crate::duality::DualPoint;
        // Points every 1/2: no translate of (9/10)S avoids them all.
        let points = (-6..=6)
            .flat_map(|i| (-6..=6).map(move |j| Point2::new(rat(i, 2), rat(j, 2))))
            .map(|q| DualPoint { q, kind: WedgeKind::A, wedge: 0 })
            .collect();
        let scene = DualScene { inflated: Vec::new(), points, m: 1, delta: rat(1, 64) };
        let mut params = ExtensionParams {
            epsilon: rat(1, 10),
            region: Rect::new(rat(1, 8), rat(1, 8), rat(3, 8), rat(3, 8)),
            m: 1,
            line_a: rational::zero(),
            line_b: rational::zero(),
            scale_free: false,
        };
        let s = diamond();
        assert!(matches!(extend(&scene, &s, &params, 4), Err(ExtensionError::Deficient { .. })));
        params.scale_free = true;
        let cover = extend(&scene, &s, &params, DEFAULT_ROUNDS).unwrap();
        assert!(cover.report.min_depth >= 1);
        let pts: Vec<Point2> = scene.points.iter().map(|p| p.q.clone()).collect();
        assert!(all_avoid(&cover.translates, &s, &pts));
        assert!(cover.translates.iter().all(|h| h.scale <= rat(9, 10) && h.scale >= rat(1, 512)));
        assert!(cover.translates.iter().any(|h| h.scale < rat(9, 10)));
    }

    #[test]
    fn pitch_for_diamond() {
        assert_eq!(lattice_pitch(&diamond(), &rat(1, 10), 2), rat(1, 4));
        assert_eq!(lattice_pitch(&diamond(), &rat(1, 10), 1), rat(1, 2));
    }
}
