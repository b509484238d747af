//! Exact planar kernel: points, convex polygons, homothets, wedges and the
//! closed-set predicates between them.
//!
//! Every region is closed. "Intersects" includes touching and "contains"
//! includes the boundary. Polygons are stored clockwise.

use crate::rational::{self, int, zero, Rational};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point2 {
    #[serde(with = "rational::serde_str")]
    pub x: Rational,
    #[serde(with = "rational::serde_str")]
    pub y: Rational,
}

/// Directions share the point representation.
pub type Vec2 = Point2;

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        Self::new(zero(), zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn cross(&self, other: &Vec2) -> Rational {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn dot(&self, other: &Vec2) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn scale(&self, s: &Rational) -> Point2 {
        Point2::new(&self.x * s, &self.y * s)
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(&self) -> Vec2 {
        Point2::new(-&self.y, self.x.clone())
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    /// `|x| + |y|`, an upper bound on the Euclidean norm.
    pub fn norm_l1(&self) -> Rational {
        self.x.abs() + self.y.abs()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rational::to_f64(&self.x), rational::to_f64(&self.y))
    }
}

impl<'a> Add<&'a Point2> for &'a Point2 {
    type Output = Point2;
    fn add(self, o: &Point2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl<'a> Sub<&'a Point2> for &'a Point2 {
    type Output = Point2;
    fn sub(self, o: &Point2) -> Point2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for &Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-&self.x, -&self.y)
    }
}

impl Mul<&Rational> for &Point2 {
    type Output = Point2;
    fn mul(self, s: &Rational) -> Point2 {
        self.scale(s)
    }
}

/// Twice the signed area of triangle `abc`; negative for a clockwise turn.
pub fn orient(a: &Point2, b: &Point2, c: &Point2) -> Rational {
    (b - a).cross(&(c - a))
}

/// Signed doubled area of a polygon (negative when clockwise).
pub fn signed_area2(poly: &[Point2]) -> Rational {
    let n = poly.len();
    (0..n).fold(zero(), |acc, i| acc + poly[i].cross(&poly[(i + 1) % n]))
}

/// How two closed convex sets meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// Positive separation.
    Disjoint,
    /// The closed sets meet but their interiors do not.
    Touching,
    /// The interiors share a point.
    Overlapping,
}

impl Relation {
    pub fn meets(self) -> bool {
        self != Relation::Disjoint
    }

    /// True unless the verdict rests on a tangency.
    pub fn is_strict(self) -> bool {
        self != Relation::Touching
    }
}

/// The convex polygon `S` the whole construction is built from, with its
/// center at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePolygon {
    pub vertices: Vec<Point2>,
    pub center: Point2,
    /// Vertices of `-S`; index `i` is the reflection of `vertices[i]`, and
    /// point reflection keeps the clockwise order.
    pub reflected_vertices: Vec<Point2>,
}

impl BasePolygon {
    /// Wraps already-validated clockwise vertices around the origin.
    pub fn from_clockwise(vertices: Vec<Point2>) -> Self {
        let reflected_vertices = vertices.iter().map(|v| -v).collect();
        Self { vertices, center: Point2::origin(), reflected_vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Point2 {
        &self.vertices[i % self.len()]
    }

    pub fn min_y(&self) -> Rational {
        self.vertices.iter().map(|v| v.y.clone()).min().unwrap()
    }

    pub fn max_y(&self) -> Rational {
        self.vertices.iter().map(|v| v.y.clone()).max().unwrap()
    }
}

/// `scale * X + anchor` where `X` is `S` or `-S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Homothet {
    #[serde(with = "rational::serde_str")]
    pub scale: Rational,
    pub anchor: Point2,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reflected: bool,
}

impl Homothet {
    pub fn new(scale: Rational, anchor: Point2) -> Self {
        assert!(scale.is_positive(), "homothet scale must be positive");
        Self { scale, anchor, reflected: false }
    }

    pub fn reflected(scale: Rational, anchor: Point2) -> Self {
        assert!(scale.is_positive(), "homothet scale must be positive");
        Self { scale, anchor, reflected: true }
    }

    /// Image of a point of the base polygon's frame.
    pub fn map(&self, p: &Point2) -> Point2 {
        &p.scale(&self.scale) + &self.anchor
    }
}

/// Vertex list of the realized homothet, in the base's (clockwise) order.
pub fn realize_homothet(h: &Homothet, base: &BasePolygon) -> Vec<Point2> {
    let src = if h.reflected { &base.reflected_vertices } else { &base.vertices };
    src.iter().map(|v| h.map(v)).collect()
}

/// Closed convex cone `apex + {s*dir_prev + t*dir_next | s, t >= 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Wedge {
    pub apex: Point2,
    pub dir_prev: Vec2,
    pub dir_next: Vec2,
    pub vertex_index: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("wedge directions are parallel or zero")]
    DegenerateWedge,
    #[error("negative scale factor")]
    NegativeScale,
}

impl Wedge {
    pub fn new(apex: Point2, dir_prev: Vec2, dir_next: Vec2, vertex_index: usize) -> Result<Self, GeomError> {
        if dir_prev.cross(&dir_next).is_zero() {
            return Err(GeomError::DegenerateWedge);
        }
        Ok(Self { apex, dir_prev, dir_next, vertex_index })
    }

    pub fn translated_to(&self, apex: Point2) -> Wedge {
        Wedge { apex, ..self.clone() }
    }

    /// Inward normals `n` with `n . (z - apex) >= 0` describing the cone.
    pub fn inward_normals(&self) -> [Vec2; 2] {
        let c = self.dir_prev.cross(&self.dir_next);
        // perp(d) . z = cross(d, z); the sign of `c` says which side holds the other ray.
        let mut a = self.dir_prev.perp();
        let mut b = self.dir_next.perp();
        if c.is_negative() {
            a = -&a;
        } else {
            b = -&b;
        }
        [a, b]
    }

    pub fn contains(&self, q: &Point2) -> bool {
        let d = q - &self.apex;
        self.inward_normals().iter().all(|n| !n.dot(&d).is_negative())
    }
}

/// Axis-aligned rational rectangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    #[serde(with = "rational::serde_str")]
    pub x0: Rational,
    #[serde(with = "rational::serde_str")]
    pub y0: Rational,
    #[serde(with = "rational::serde_str")]
    pub x1: Rational,
    #[serde(with = "rational::serde_str")]
    pub y1: Rational,
}

impl Rect {
    pub fn new(x0: Rational, y0: Rational, x1: Rational, y1: Rational) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn is_empty(&self) -> bool {
        self.x0 >= self.x1 || self.y0 >= self.y1
    }

    pub fn contains(&self, p: &Point2) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn bounding(points: &[Point2]) -> Option<Rect> {
        let first = points.first()?;
        let mut r = Rect::new(first.x.clone(), first.y.clone(), first.x.clone(), first.y.clone());
        for p in &points[1..] {
            if p.x < r.x0 {
                r.x0 = p.x.clone();
            }
            if p.x > r.x1 {
                r.x1 = p.x.clone();
            }
            if p.y < r.y0 {
                r.y0 = p.y.clone();
            }
            if p.y > r.y1 {
                r.y1 = p.y.clone();
            }
        }
        Some(r)
    }

    pub fn center(&self) -> Point2 {
        Point2::new((&self.x0 + &self.x1) / int(2), (&self.y0 + &self.y1) / int(2))
    }

    pub fn overlaps(&self, o: &Rect) -> bool {
        self.x0 <= o.x1 && o.x0 <= self.x1 && self.y0 <= o.y1 && o.y0 <= self.y1
    }

    pub fn corners(&self) -> [Point2; 4] {
        [
            Point2::new(self.x0.clone(), self.y1.clone()),
            Point2::new(self.x1.clone(), self.y1.clone()),
            Point2::new(self.x1.clone(), self.y0.clone()),
            Point2::new(self.x0.clone(), self.y0.clone()),
        ]
    }
}

fn is_point_set(poly: &[Point2]) -> bool {
    poly.iter().all(|p| *p == poly[0])
}

/// Closed, boundary-inclusive containment in a clockwise convex polygon.
pub fn point_in_polygon(q: &Point2, poly: &[Point2]) -> bool {
    point_polygon_relation(q, poly).meets()
}

/// `Overlapping` for interior points, `Touching` on the boundary.
pub fn point_polygon_relation(q: &Point2, poly: &[Point2]) -> Relation {
    if is_point_set(poly) {
        return if poly[0] == *q { Relation::Touching } else { Relation::Disjoint };
    }
    let n = poly.len();
    let mut on_edge = false;
    for i in 0..n {
        let o = orient(&poly[i], &poly[(i + 1) % n], q);
        if o.is_positive() {
            return Relation::Disjoint;
        }
        if o.is_zero() {
            on_edge = true;
        }
    }
    if on_edge {
        Relation::Touching
    } else {
        Relation::Overlapping
    }
}

fn projection(poly: &[Point2], axis: &Vec2) -> (Rational, Rational) {
    let mut lo = axis.dot(&poly[0]);
    let mut hi = lo.clone();
    for p in &poly[1..] {
        let v = axis.dot(p);
        if v < lo {
            lo = v;
        } else if v > hi {
            hi = v;
        }
    }
    (lo, hi)
}

fn edge_normals<'a>(poly: &'a [Point2]) -> impl Iterator<Item = Vec2> + 'a {
    let n = poly.len();
    (0..n).filter_map(move |i| {
        let e = &poly[(i + 1) % n] - &poly[i];
        (!e.is_zero()).then(|| e.perp())
    })
}

/// Separating-axis classification of two convex polygons. A polygon may
/// degenerate to a single point (scale zero).
pub fn polygon_relation(p: &[Point2], q: &[Point2]) -> Relation {
    if is_point_set(p) && is_point_set(q) {
        return if p[0] == q[0] { Relation::Touching } else { Relation::Disjoint };
    }
    let mut touching = false;
    for axis in edge_normals(p).chain(edge_normals(q)) {
        let (plo, phi) = projection(p, &axis);
        let (qlo, qhi) = projection(q, &axis);
        if phi < qlo || qhi < plo {
            return Relation::Disjoint;
        }
        if phi == qlo || qhi == plo {
            touching = true;
        }
    }
    if touching || is_point_set(p) || is_point_set(q) {
        Relation::Touching
    } else {
        Relation::Overlapping
    }
}

pub fn polygons_intersect(p: &[Point2], q: &[Point2]) -> bool {
    polygon_relation(p, q).meets()
}

/// Separating-axis classification of a closed cone against a convex polygon.
pub fn wedge_relation(w: &Wedge, poly: &[Point2]) -> Relation {
    let mut touching = false;
    let axes = edge_normals(poly).chain([w.dir_prev.perp(), w.dir_next.perp()]);
    for axis in axes {
        let (plo, phi) = projection(poly, &axis);
        let a = axis.dot(&w.apex);
        let s1 = axis.dot(&w.dir_prev);
        let s2 = axis.dot(&w.dir_next);
        // Cone projection is [a, +inf), (-inf, a], a single point or the whole line.
        let bounded_above = !s1.is_positive() && !s2.is_positive();
        let bounded_below = !s1.is_negative() && !s2.is_negative();
        if bounded_above {
            if a < plo {
                return Relation::Disjoint;
            }
            if a == plo {
                touching = true;
            }
        }
        if bounded_below {
            if phi < a {
                return Relation::Disjoint;
            }
            if phi == a {
                touching = true;
            }
        }
    }
    if touching || is_point_set(poly) {
        Relation::Touching
    } else {
        Relation::Overlapping
    }
}

pub fn wedge_intersects_polygon(w: &Wedge, poly: &[Point2]) -> bool {
    wedge_relation(w, poly).meets()
}

/// Starting index of the canonical rotation: lowest `y`, then lowest `x`.
fn lowest_index(poly: &[Point2]) -> usize {
    (0..poly.len())
        .min_by(|&i, &j| poly[i].y.cmp(&poly[j].y).then_with(|| poly[i].x.cmp(&poly[j].x)))
        .unwrap()
}

/// Rotation of a polygon starting at its lowest-then-leftmost vertex, with
/// collinear and repeated vertices removed.
pub fn canonical_cycle(poly: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = Vec::with_capacity(poly.len());
    for p in poly {
        if pts.last() != Some(p) {
            pts.push(p.clone());
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    if pts.len() < 3 {
        return pts;
    }
    let mut changed = true;
    while changed && pts.len() >= 3 {
        changed = false;
        let n = pts.len();
        for i in 0..n {
            let (a, b, c) = (&pts[(i + n - 1) % n], &pts[i], &pts[(i + 1) % n]);
            if orient(a, b, c).is_zero() {
                pts.remove(i);
                changed = true;
                break;
            }
        }
    }
    let start = lowest_index(&pts);
    pts.rotate_left(start);
    pts
}

// Half-plane class of an edge direction for angular sorting: 0 for angles in
// [0, pi), 1 for [pi, 2pi).
fn half(v: &Vec2) -> u8 {
    if v.y.is_positive() || (v.y.is_zero() && v.x.is_positive()) {
        0
    } else {
        1
    }
}

fn angle_cmp(a: &Vec2, b: &Vec2) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| zero().cmp(&a.cross(b)))
}

/// Minkowski sum of two convex polygons by merging their edge sequences in
/// angular order. Result is clockwise in canonical rotation.
pub fn minkowski_sum(p: &[Point2], q: &[Point2]) -> Vec<Point2> {
    let p = counter_clockwise_canonical(p);
    let q = counter_clockwise_canonical(q);
    if p.len() == 1 {
        return to_clockwise(q.iter().map(|v| v + &p[0]).collect());
    }
    if q.len() == 1 {
        return to_clockwise(p.iter().map(|v| v + &q[0]).collect());
    }
    let edges = |poly: &[Point2]| -> Vec<Vec2> {
        let n = poly.len();
        (0..n).map(|i| &poly[(i + 1) % n] - &poly[i]).collect()
    };
    let (ep, eq) = (edges(&p), edges(&q));
    let mut out = vec![&p[0] + &q[0]];
    let (mut i, mut j) = (0, 0);
    while i < ep.len() || j < eq.len() {
        let step = if i == ep.len() {
            let e = eq[j].clone();
            j += 1;
            e
        } else if j == eq.len() {
            let e = ep[i].clone();
            i += 1;
            e
        } else {
            match angle_cmp(&ep[i], &eq[j]) {
                Ordering::Less => {
                    i += 1;
                    ep[i - 1].clone()
                }
                Ordering::Greater => {
                    j += 1;
                    eq[j - 1].clone()
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    &ep[i - 1] + &eq[j - 1]
                }
            }
        };
        let next = out.last().unwrap() + &step;
        out.push(next);
    }
    out.pop();
    to_clockwise(out)
}

// Counter-clockwise copy starting at the lowest-then-leftmost vertex, so
// the edge angles increase monotonically from [0, 2pi).
fn counter_clockwise_canonical(poly: &[Point2]) -> Vec<Point2> {
    let mut c = canonical_cycle(poly);
    if c.len() >= 3 && signed_area2(&c).is_negative() {
        c.reverse();
        let s = lowest_index(&c);
        c.rotate_left(s);
    }
    c
}

fn to_clockwise(mut ccw: Vec<Point2>) -> Vec<Point2> {
    ccw.reverse();
    canonical_cycle(&ccw)
}

/// `alpha*S + beta*S` via [`minkowski_sum`], independent of the scaling
/// identity it is used to check.
pub fn minkowski_scale_sum(s: &BasePolygon, alpha: &Rational, beta: &Rational) -> Result<Vec<Point2>, GeomError> {
    if alpha.is_negative() || beta.is_negative() {
        return Err(GeomError::NegativeScale);
    }
    let a: Vec<Point2> = s.vertices.iter().map(|v| v.scale(alpha)).collect();
    let b: Vec<Point2> = s.vertices.iter().map(|v| v.scale(beta)).collect();
    Ok(minkowski_sum(&a, &b))
}

/// Clip a convex polygon to the closed half-plane `n . z >= c`.
pub fn clip_half_plane(poly: &[Point2], n: &Vec2, c: &Rational) -> Vec<Point2> {
    let m = poly.len();
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..m {
        let a = &poly[i];
        let b = &poly[(i + 1) % m];
        let fa = n.dot(a) - c;
        let fb = n.dot(b) - c;
        if !fa.is_negative() {
            out.push(a.clone());
        }
        if (fa.is_negative() && fb.is_positive()) || (fa.is_positive() && fb.is_negative()) {
            let t = &fa / (&fa - &fb);
            out.push(a + &(b - a).scale(&t));
        }
    }
    out
}

/// Intersection of a convex polygon with a wedge, by clipping against the
/// wedge's two bounding half-planes.
pub fn clip_to_wedge(poly: &[Point2], w: &Wedge) -> Vec<Point2> {
    let [n1, n2] = w.inward_normals();
    let c1 = n1.dot(&w.apex);
    let c2 = n2.dot(&w.apex);
    let first = clip_half_plane(poly, &n1, &c1);
    clip_half_plane(&first, &n2, &c2)
}

/// Intersection point of lines `a1 + t*(a2-a1)` and `b1 + u*(b2-b1)`.
pub fn line_intersection(a1: &Point2, a2: &Point2, b1: &Point2, b2: &Point2) -> Option<Point2> {
    let da = a2 - a1;
    let db = b2 - b1;
    let den = da.cross(&db);
    if den.is_zero() {
        return None;
    }
    let t = (b1 - a1).cross(&db) / den;
    Some(a1 + &da.scale(&t))
}

pub fn is_strictly_convex_clockwise(poly: &[Point2]) -> bool {
    let n = poly.len();
    n >= 3 && (0..n).all(|i| orient(&poly[i], &poly[(i + 1) % n], &poly[(i + 2) % n]).is_negative())
}
