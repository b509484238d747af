//! Input validation and normalization of the base polygon.
//!
//! A direction `d` that is parallel to no side and whose two touching
//! vertices are non-adjacent is mapped to the horizontal by a rational
//! shear. The normalized polygon has a unique top vertex `v_a`, a unique
//! bottom vertex `v_b`, and the quadrilateral `Q` cut out by the four sides
//! at `v_a` and `v_b` has its left vertex not lower than its right vertex.

use crate::geom::{is_strictly_convex_clockwise, line_intersection, orient, signed_area2, BasePolygon, Point2, Wedge};
use crate::rational::{self, int, one, zero, Rational};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrepError {
    #[error("TooFewSides: polygon has {0} sides, at least four are required")]
    TooFewSides(usize),
    #[error("NotConvex: polygon boundary is not a simple convex curve")]
    NotConvex,
    #[error("DegenerateVertex: vertex {0} repeats its neighbour or is collinear with them")]
    DegenerateVertex(usize),
    #[error("Unsupported: concave polygons are not handled")]
    Unsupported,
    #[error("NoValidDirection: every direction has adjacent extreme vertices")]
    NoValidDirection,
    #[error("UnboundedQ: the sides at the extreme vertices do not bound a quadrilateral")]
    UnboundedQ,
}

/// Rational 2x2 matrix acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearMap {
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
    #[serde(with = "rational::serde_str")]
    pub d: Rational,
}

impl LinearMap {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(one(), zero(), zero(), one())
    }

    pub fn scaling(s: Rational) -> Self {
        Self::new(s.clone(), zero(), zero(), s)
    }

    pub fn apply(&self, p: &Point2) -> Point2 {
        Point2::new(&self.a * &p.x + &self.b * &p.y, &self.c * &p.x + &self.d * &p.y)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap::new(
            &self.a * &other.a + &self.b * &other.c,
            &self.a * &other.b + &self.b * &other.d,
            &self.c * &other.a + &self.d * &other.c,
            &self.c * &other.b + &self.d * &other.d,
        )
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(LinearMap::new(&self.d / &det, -&self.b / &det, -&self.c / &det, &self.a / &det))
    }
}

/// The quadrilateral `Q` in clockwise order `v_a, v_r, v_b, v_l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quad {
    pub v_a: Point2,
    pub v_r: Point2,
    pub v_b: Point2,
    pub v_l: Point2,
}

impl Quad {
    pub fn vertices(&self) -> Vec<Point2> {
        vec![self.v_a.clone(), self.v_r.clone(), self.v_b.clone(), self.v_l.clone()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    /// Maps the validated polygon onto the normalized one.
    pub transform: LinearMap,
    pub inverse: LinearMap,
    /// The chosen direction `d = (1, slope)` in the validated frame.
    #[serde(with = "rational::serde_str")]
    pub slope: Rational,
    pub a_index: usize,
    pub b_index: usize,
    pub q: Quad,
    pub reflected_about_y: bool,
}

/// Which `-S` vertices carry the `E^a` and `E^b` wedges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WedgeAssignment {
    /// `E^a` at the vertex `-v_a` of `-S`, `E^b` at `-v_b`.
    Direct,
    /// `E^a` at `-v_b`, `E^b` at `-v_a`.
    Swapped,
}

impl WedgeAssignment {
    pub fn other(self) -> Self {
        match self {
            WedgeAssignment::Direct => WedgeAssignment::Swapped,
            WedgeAssignment::Swapped => WedgeAssignment::Direct,
        }
    }
}

/// The wedges `E^1..E^n` with apex at the origin, plus the designated pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeTemplateSet {
    pub templates: Vec<Wedge>,
    pub a_template: usize,
    pub b_template: usize,
    pub assignment: WedgeAssignment,
}

impl WedgeTemplateSet {
    pub fn a(&self) -> &Wedge {
        &self.templates[self.a_template]
    }

    pub fn b(&self) -> &Wedge {
        &self.templates[self.b_template]
    }
}

fn segments_intersect(p1: &Point2, p2: &Point2, q1: &Point2, q2: &Point2) -> bool {
    let on_seg = |a: &Point2, b: &Point2, c: &Point2| {
        c.x >= a.x.clone().min(b.x.clone())
            && c.x <= a.x.clone().max(b.x.clone())
            && c.y >= a.y.clone().min(b.y.clone())
            && c.y <= a.y.clone().max(b.y.clone())
    };
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1.is_positive() && d2.is_negative()) || (d1.is_negative() && d2.is_positive()))
        && ((d3.is_positive() && d4.is_negative()) || (d3.is_negative() && d4.is_positive()))
    {
        return true;
    }
    (d1.is_zero() && on_seg(q1, q2, p1))
        || (d2.is_zero() && on_seg(q1, q2, p2))
        || (d3.is_zero() && on_seg(p1, p2, q1))
        || (d4.is_zero() && on_seg(p1, p2, q2))
}

fn is_simple(poly: &[Point2]) -> bool {
    let n = poly.len();
    for i in 0..n {
        for j in (i + 1)..n {
            // Skip edges sharing a vertex.
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_intersect(&poly[i], &poly[(i + 1) % n], &poly[j], &poly[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

/// Power-of-two factor leaving the farthest vertex at distance in (1/2, 1].
fn unit_disc_factor(vertices: &[Point2]) -> Rational {
    let max = vertices.iter().map(|v| v.norm_sq()).max().unwrap();
    let mut s = one();
    while &max * &s * &s > one() {
        s /= int(2);
    }
    while &max * &s * &s * int(4) <= one() {
        s *= int(2);
    }
    s
}

/// Check and normalize a raw vertex list into a clockwise polygon with its
/// vertex centroid at the origin, rescaled into the unit disc.
pub fn validate_polygon(raw: &[Point2]) -> Result<BasePolygon, PrepError> {
    let n = raw.len();
    if n < 3 {
        return Err(PrepError::TooFewSides(n));
    }
    for i in 0..n {
        let prev = &raw[(i + n - 1) % n];
        let next = &raw[(i + 1) % n];
        if raw[i] == *next || orient(prev, &raw[i], next).is_zero() {
            return Err(PrepError::DegenerateVertex(i));
        }
    }
    if !is_simple(raw) {
        return Err(PrepError::NotConvex);
    }
    let turns: Vec<bool> = (0..n).map(|i| orient(&raw[i], &raw[(i + 1) % n], &raw[(i + 2) % n]).is_negative()).collect();
    if !(turns.iter().all(|&t| t) || turns.iter().all(|&t| !t)) {
        return Err(PrepError::Unsupported);
    }
    if n < 4 {
        return Err(PrepError::TooFewSides(n));
    }
    let mut verts = raw.to_vec();
    if signed_area2(&verts).is_positive() {
        verts.reverse();
    }
    let count = int(n as i64);
    let cx = verts.iter().fold(zero(), |acc, v| acc + &v.x) / &count;
    let cy = verts.iter().fold(zero(), |acc, v| acc + &v.y) / &count;
    let center = Point2::new(cx, cy);
    let centered: Vec<Point2> = verts.iter().map(|v| v - &center).collect();
    let s = unit_disc_factor(&centered);
    Ok(BasePolygon::from_clockwise(centered.iter().map(|v| v.scale(&s)).collect()))
}

fn extreme_indices(vertices: &[Point2]) -> (usize, usize) {
    let top = (0..vertices.len()).max_by(|&i, &j| vertices[i].y.cmp(&vertices[j].y)).unwrap();
    let bottom = (0..vertices.len()).min_by(|&i, &j| vertices[i].y.cmp(&vertices[j].y)).unwrap();
    (top, bottom)
}

fn adjacent(i: usize, j: usize, n: usize) -> bool {
    (i + 1) % n == j || (j + 1) % n == i
}

/// Build `Q` from the sides at `v_a` (top) and `v_b` (bottom).
pub fn compute_q(s: &BasePolygon, a: usize, b: usize) -> Result<Quad, PrepError> {
    let n = s.len();
    let v = |i: usize| s.vertex(i);
    let v_a = v(a);
    let v_b = v(b);
    // Right chain runs a -> b clockwise, left chain b -> a.
    let right = line_intersection(v_a, v(a + 1), v(b + n - 1), v_b).ok_or(PrepError::UnboundedQ)?;
    let left = line_intersection(v_b, v(b + 1), v(a + n - 1), v_a).ok_or(PrepError::UnboundedQ)?;
    // Each corner must lie beyond the far end of both sides it extends.
    let beyond = |from: &Point2, to: &Point2, x: &Point2| {
        let d = to - from;
        (x - from).dot(&d) >= d.dot(&d)
    };
    if !(beyond(v_a, v(a + 1), &right)
        && beyond(v_b, v(b + n - 1), &right)
        && beyond(v_b, v(b + 1), &left)
        && beyond(v_a, v(a + n - 1), &left))
    {
        return Err(PrepError::UnboundedQ);
    }
    let q = Quad { v_a: v_a.clone(), v_r: right, v_b: v_b.clone(), v_l: left };
    if !is_strictly_convex_clockwise(&q.vertices()) {
        return Err(PrepError::UnboundedQ);
    }
    Ok(q)
}

fn side_slopes(s: &BasePolygon) -> Vec<Rational> {
    let n = s.len();
    let mut slopes: Vec<Rational> = (0..n)
        .filter_map(|i| {
            let d = s.vertex(i + 1) - s.vertex(i);
            (!d.x.is_zero()).then(|| &d.y / &d.x)
        })
        .collect();
    slopes.sort();
    slopes.dedup();
    slopes
}

/// One representative slope per open interval between side slopes, in
/// deterministic order of increasing magnitude.
fn candidate_slopes(s: &BasePolygon) -> Vec<Rational> {
    let slopes = side_slopes(s);
    let mut out = Vec::new();
    if slopes.is_empty() {
        out.push(zero());
    } else {
        let first = &slopes[0];
        out.push(rational::simplest_between(&(first - (first.abs() + int(2))), first));
        for w in slopes.windows(2) {
            out.push(rational::simplest_between(&w[0], &w[1]));
        }
        let last = slopes.last().unwrap();
        out.push(rational::simplest_between(last, &(last + (last.abs() + int(2)))));
    }
    out.sort_by(|x, y| x.abs().cmp(&y.abs()).then_with(|| x.cmp(y)));
    out.dedup();
    out
}

fn apply_all(m: &LinearMap, pts: &[Point2]) -> Vec<Point2> {
    pts.iter().map(|p| m.apply(p)).collect()
}

/// Choose the direction and return the normalization plus the normalized polygon.
pub fn choose_direction(s: &BasePolygon) -> Result<(Normalization, BasePolygon), PrepError> {
    let n = s.len();
    for slope in candidate_slopes(s) {
        let shear = LinearMap::new(one(), zero(), -&slope, one());
        let sheared = apply_all(&shear, &s.vertices);
        let (top, bottom) = extreme_indices(&sheared);
        if adjacent(top, bottom, n) {
            continue;
        }
        let poly = BasePolygon::from_clockwise(sheared);
        let q = compute_q(&poly, top, bottom)?;
        let mut map = shear;
        let mut reflected = false;
        if q.v_l.y < q.v_r.y {
            map = LinearMap::new(int(-1), zero(), zero(), one()).compose(&map);
            reflected = true;
        }
        // Shrink or grow by a power of two back into the unit disc.
        let mut verts = apply_all(&map, &s.vertices);
        if reflected {
            verts.reverse();
        }
        let factor = unit_disc_factor(&verts);
        let rescaled = verts.iter().map(|v| v.scale(&factor)).collect();
        let map = LinearMap::scaling(factor).compose(&map);
        let normalized = BasePolygon::from_clockwise(rescaled);
        let (a_index, b_index) = extreme_indices(&normalized.vertices);
        let q = compute_q(&normalized, a_index, b_index)?;
        debug_assert!(q.v_l.y >= q.v_r.y);
        let inverse = map.inverse().expect("shear, reflection and scaling are invertible");
        return Ok((
            Normalization { transform: map, inverse, slope, a_index, b_index, q, reflected_about_y: reflected },
            normalized,
        ));
    }
    Err(PrepError::NoValidDirection)
}

/// Wedge of `-S` at each vertex, apex at the origin.
pub fn wedge_templates(s: &BasePolygon, norm: &Normalization, assignment: WedgeAssignment) -> WedgeTemplateSet {
    let n = s.len();
    let v = &s.reflected_vertices;
    let templates = (0..n)
        .map(|i| {
            let prev = &v[(i + n - 1) % n] - &v[i];
            let next = &v[(i + 1) % n] - &v[i];
            Wedge::new(Point2::origin(), prev, next, i).expect("strictly convex polygon has proper vertex cones")
        })
        .collect();
    let (a_template, b_template) = match assignment {
        WedgeAssignment::Direct => (norm.a_index, norm.b_index),
        WedgeAssignment::Swapped => (norm.b_index, norm.a_index),
    };
    WedgeTemplateSet { templates, a_template, b_template, assignment }
}

/// Validated input polygon together with everything derived from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreparedPolygon {
    pub input: Vec<Point2>,
    pub validated: BasePolygon,
    pub normalization: Normalization,
    pub normalized: BasePolygon,
}

impl PreparedPolygon {
    pub fn new(input: &[Point2]) -> Result<Self, PrepError> {
        let validated = validate_polygon(input)?;
        let (normalization, normalized) = choose_direction(&validated)?;
        Ok(Self { input: input.to_vec(), validated, normalization, normalized })
    }

    pub fn templates(&self, assignment: WedgeAssignment) -> WedgeTemplateSet {
        wedge_templates(&self.normalized, &self.normalization, assignment)
    }

    /// Vertical extent `Vert(v_a v_b)` of the normalized polygon.
    pub fn height(&self) -> Rational {
        self.normalized.max_y() - self.normalized.min_y()
    }
}

/// Built-in test polygons.
pub mod presets {
    use super::*;

    fn pts(coords: &[(i64, i64)]) -> Vec<Point2> {
        coords.iter().map(|&(x, y)| Point2::from_ints(x, y)).collect()
    }

    pub fn diamond() -> Vec<Point2> {
        pts(&[(0, 1), (1, 0), (0, -1), (-1, 0)])
    }

    /// Pentagon with small integer coordinates close to a regular one.
    pub fn pentagon() -> Vec<Point2> {
        pts(&[(0, 10), (10, 3), (6, -8), (-6, -8), (-10, 3)])
    }

    /// Asymmetric convex quadrilateral.
    pub fn trapezoid() -> Vec<Point2> {
        pts(&[(-2, 3), (4, 2), (5, -2), (-3, -1)])
    }

    pub fn square() -> Vec<Point2> {
        pts(&[(-1, 1), (1, 1), (1, -1), (-1, -1)])
    }

    pub fn by_name(name: &str) -> Option<Vec<Point2>> {
        match name {
            "diamond" => Some(diamond()),
            "pentagon" => Some(pentagon()),
            "trapezoid" => Some(trapezoid()),
            "square" => Some(square()),
            _ => None,
        }
    }

    pub const NAMES: [&str; 3] = ["diamond", "pentagon", "trapezoid"];
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{realize_homothet, Homothet};
    use crate::rational::rat;

    fn p(x: i64, y: i64) -> Point2 {
        Point2::from_ints(x, y)
    }

    #[test]
    fn square_accepted() {
        let s = validate_polygon(&presets::square()).unwrap();
        assert_eq!(s.len(), 4);
        assert!(is_strictly_convex_clockwise(&s.vertices));
        assert!(s.vertices.iter().all(|v| v.norm_sq() <= one()));
    }

    #[test]
    fn rejections() {
        assert_eq!(validate_polygon(&[p(0, 0), p(1, 0), p(0, 1)]), Err(PrepError::TooFewSides(3)));
        assert_eq!(validate_polygon(&[p(0, 0), p(1, 0)]), Err(PrepError::TooFewSides(2)));
        // Arrowhead: simple but concave.
        let arrow = [p(0, 0), p(2, 2), p(0, 1), p(-2, 2)];
        assert_eq!(validate_polygon(&arrow), Err(PrepError::Unsupported));
        // Bow-tie: self-intersecting.
        let bowtie = [p(0, 0), p(2, 2), p(2, 0), p(0, 2)];
        assert_eq!(validate_polygon(&bowtie), Err(PrepError::NotConvex));
        let collinear = [p(0, 0), p(1, 0), p(2, 0), p(1, 1)];
        assert_eq!(validate_polygon(&collinear), Err(PrepError::DegenerateVertex(1)));
    }

    #[test]
    fn counter_clockwise_input_is_reoriented() {
        let mut ccw = presets::diamond();
        ccw.reverse();
        let s = validate_polygon(&ccw).unwrap();
        assert!(is_strictly_convex_clockwise(&s.vertices));
    }

    #[test]
    fn diamond_direction_is_horizontal() {
        let s = validate_polygon(&presets::diamond()).unwrap();
        let (norm, out) = choose_direction(&s).unwrap();
        assert_eq!(norm.slope, zero());
        assert_eq!(norm.transform, LinearMap::identity());
        assert!(!norm.reflected_about_y);
        assert_eq!(out.vertices[norm.a_index], p(0, 1));
        assert_eq!(out.vertices[norm.b_index], p(0, -1));
        assert_eq!(norm.q.v_l, p(-1, 0));
        assert_eq!(norm.q.v_r, p(1, 0));
        assert_eq!(norm.q.vertices(), out.vertices);
    }

    #[test]
    fn square_needs_a_tilted_direction() {
        let s = validate_polygon(&presets::square()).unwrap();
        let (norm, out) = choose_direction(&s).unwrap();
        // Side slopes are 0 only (vertical sides have none): the interval
        // representatives are -1 and 1, the former comes first.
        assert_eq!(norm.slope, int(-1));
        let n = out.len();
        assert!(!adjacent(norm.a_index, norm.b_index, n));
        for i in 0..n {
            assert_ne!(out.vertex(i).y, out.vertex(i + 1).y, "no horizontal side");
        }
        assert!(norm.q.v_l.y >= norm.q.v_r.y);
    }

    #[test]
    fn pentagon_every_interval_checked() {
        // Exhaustive check over all candidate intervals: with five vertices the
        // unique extremes are never adjacent.
        let s = validate_polygon(&presets::pentagon()).unwrap();
        for slope in candidate_slopes(&s) {
            let shear = LinearMap::new(one(), zero(), -&slope, one());
            let sheared = apply_all(&shear, &s.vertices);
            let (t, b) = extreme_indices(&sheared);
            assert!(!adjacent(t, b, 5), "slope {slope}");
        }
        let (norm, _) = choose_direction(&s).unwrap();
        assert!(norm.q.v_l.y >= norm.q.v_r.y);
    }

    #[test]
    fn q_contains_s() {
        for raw in [presets::trapezoid(), presets::pentagon(), presets::diamond()] {
            let prepared = PreparedPolygon::new(&raw).unwrap();
            let q = prepared.normalization.q.vertices();
            for v in &prepared.normalized.vertices {
                assert!(crate::geom::point_in_polygon(v, &q));
            }
            assert_eq!(q.len(), 4);
        }
        // For any quadrilateral the four extended sides are its own sides.
        let t = PreparedPolygon::new(&presets::trapezoid()).unwrap();
        let mut q = t.normalization.q.vertices();
        let start = q.iter().position(|v| *v == t.normalized.vertices[0]).unwrap();
        q.rotate_left(start);
        assert_eq!(q, t.normalized.vertices);
        // The pentagon's Q is strictly larger (areas are negative when clockwise).
        let pent = PreparedPolygon::new(&presets::pentagon()).unwrap();
        let q = pent.normalization.q.vertices();
        assert!(signed_area2(&q) < signed_area2(&pent.normalized.vertices));
    }

    #[test]
    fn choose_direction_is_deterministic() {
        let s = validate_polygon(&presets::trapezoid()).unwrap();
        assert_eq!(choose_direction(&s).unwrap(), choose_direction(&s).unwrap());
    }

    #[test]
    fn diamond_templates() {
        let prepared = PreparedPolygon::new(&presets::diamond()).unwrap();
        let t = prepared.templates(WedgeAssignment::Direct);
        // -S has the same vertices; index 0 is (0,1)... of S, i.e. (0,-1) of -S.
        let top_of_minus_s = prepared.normalized.reflected_vertices.iter().position(|v| *v == p(0, 1)).unwrap();
        let w = &t.templates[top_of_minus_s];
        let dirs = [w.dir_prev.clone(), w.dir_next.clone()];
        assert!(dirs.contains(&p(1, -1)) && dirs.contains(&p(-1, -1)));
        // E^a and E^b are point reflections of each other.
        let (a, b) = (t.a(), t.b());
        assert_eq!(-&a.dir_prev, b.dir_prev);
        assert_eq!(-&a.dir_next, b.dir_next);
    }

    #[test]
    fn pentagon_templates_pairwise_distinct() {
        let prepared = PreparedPolygon::new(&presets::pentagon()).unwrap();
        let t = prepared.templates(WedgeAssignment::Direct);
        assert_eq!(t.templates.len(), 5);
        for i in 0..5 {
            for j in (i + 1)..5 {
                let (a, b) = (&t.templates[i], &t.templates[j]);
                let same = a.dir_prev.cross(&b.dir_prev).is_zero() && a.dir_next.cross(&b.dir_next).is_zero();
                assert!(!same, "templates {i} and {j} coincide");
            }
        }
    }

    #[test]
    fn normalization_commutes_with_homothets() {
        let prepared = PreparedPolygon::new(&presets::trapezoid()).unwrap();
        let l = &prepared.normalization.transform;
        let base = &prepared.validated;
        let mapped_base = BasePolygon::from_clockwise({
            let mut v = apply_all(l, &base.vertices);
            if prepared.normalization.reflected_about_y {
                v.reverse();
            }
            v
        });
        let h = Homothet::new(rat(3, 7), Point2::new(rat(1, 3), rat(-2, 5)));
        let mut lhs = apply_all(l, &realize_homothet(&h, base));
        if prepared.normalization.reflected_about_y {
            lhs.reverse();
        }
        let rhs = realize_homothet(&Homothet::new(h.scale.clone(), l.apply(&h.anchor)), &mapped_base);
        assert_eq!(lhs, rhs);
        assert_eq!(l.compose(&prepared.normalization.inverse), LinearMap::identity());
    }
}
