//! Recursive construction of the configurations `T(k,l)`.
//!
//! `T(k,1)` and `T(1,l)` are horizontal rows of small copies of `S`. For
//! `k, l >= 2`, `T(k,l-1)` is placed with its disc centered at `(0,0)`,
//! `T(k-1,l)` with its disc centered at `(1, 3*delta)`, and a connector
//! copy `S'` is added between them that meets every `b`-wedge of the left
//! part and every `a`-wedge of the right part and no other wedge. The result
//! is shrunk back into a disc of radius `delta`.
//!
//! Every placement is accepted only after exact verification, and only if
//! no incidence is decided by tangency.

use crate::geom::{realize_homothet, wedge_relation, BasePolygon, Homothet, Point2, Relation, Wedge};
use crate::prep::{PreparedPolygon, WedgeAssignment, WedgeTemplateSet};
use crate::rational::{self, int, one, rat, zero, Rational};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::ops::Range;
use thiserror::Error;

/// Longest run of scale halvings in the base-row search.
pub const BASE_HALVINGS: u32 = 60;
/// Dyadic subdivision depth of the connector anchor sweep.
pub const CONNECTOR_DEPTH: u32 = 12;
/// Largest disc radius used inside the recursion. Larger requested radii
/// are reached by one final rescale.
pub fn working_delta() -> Rational {
    rat(1, 64)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("SearchExhausted while building T({k},{l}): {detail}")]
    SearchExhausted { k: usize, l: usize, detail: String },
    #[error("configuration sizes must be positive, got ({0},{1})")]
    InvalidSize(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WedgeKind {
    A,
    B,
}

/// `T(k,1)` has one `a`-wedge and `k` single-copy `b`-wedges; `T(1,l)` the
/// other way round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseRow {
    ARow,
    BRow,
}

/// Recursion tree. Ranges index into the owning configuration's lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Base {
        k: usize,
        l: usize,
        row: BaseRow,
        homothets: Range<usize>,
        a: Range<usize>,
        b: Range<usize>,
    },
    Step {
        k: usize,
        l: usize,
        /// `T(k, l-1)`.
        left: Box<Provenance>,
        /// `T(k-1, l)`.
        right: Box<Provenance>,
        connector: usize,
        homothets: Range<usize>,
        a: Range<usize>,
        b: Range<usize>,
    },
}

fn shift(r: &Range<usize>, by: usize) -> Range<usize> {
    r.start + by..r.end + by
}

impl Provenance {
    pub fn k(&self) -> usize {
        match self {
            Provenance::Base { k, .. } | Provenance::Step { k, .. } => *k,
        }
    }

    pub fn l(&self) -> usize {
        match self {
            Provenance::Base { l, .. } | Provenance::Step { l, .. } => *l,
        }
    }

    pub fn homothets(&self) -> &Range<usize> {
        match self {
            Provenance::Base { homothets, .. } | Provenance::Step { homothets, .. } => homothets,
        }
    }

    pub fn a_range(&self) -> &Range<usize> {
        match self {
            Provenance::Base { a, .. } | Provenance::Step { a, .. } => a,
        }
    }

    pub fn b_range(&self) -> &Range<usize> {
        match self {
            Provenance::Base { b, .. } | Provenance::Step { b, .. } => b,
        }
    }

    fn shifted(&self, dh: usize, da: usize, db: usize) -> Provenance {
        match self {
            Provenance::Base { k, l, row, homothets, a, b } => Provenance::Base {
                k: *k,
                l: *l,
                row: *row,
                homothets: shift(homothets, dh),
                a: shift(a, da),
                b: shift(b, db),
            },
            Provenance::Step { k, l, left, right, connector, homothets, a, b } => Provenance::Step {
                k: *k,
                l: *l,
                left: Box::new(left.shifted(dh, da, db)),
                right: Box::new(right.shifted(dh, da, db)),
                connector: connector + dh,
                homothets: shift(homothets, dh),
                a: shift(a, da),
                b: shift(b, db),
            },
        }
    }

    /// Number of nodes in the tree.
    pub fn node_count(&self) -> usize {
        match self {
            Provenance::Base { .. } => 1,
            Provenance::Step { left, right, .. } => 1 + left.node_count() + right.node_count(),
        }
    }
}

/// The triple `(X, E^a, E^b)` together with its enclosing disc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub k: usize,
    pub l: usize,
    pub homothets: Vec<Homothet>,
    pub a_wedges: Vec<Wedge>,
    pub b_wedges: Vec<Wedge>,
    pub disc_center: Point2,
    #[serde(with = "rational::serde_str")]
    pub disc_radius: Rational,
    pub provenance: Provenance,
}

impl Configuration {
    pub fn wedges(&self, kind: WedgeKind) -> &[Wedge] {
        match kind {
            WedgeKind::A => &self.a_wedges,
            WedgeKind::B => &self.b_wedges,
        }
    }

    /// Every point whose position matters for the disc: realized vertices
    /// and wedge apices.
    fn key_points(&self, base: &BasePolygon) -> Vec<Point2> {
        let mut pts: Vec<Point2> = self.homothets.iter().flat_map(|h| realize_homothet(h, base)).collect();
        pts.extend(self.a_wedges.iter().chain(&self.b_wedges).map(|w| w.apex.clone()));
        pts
    }

    /// Image under `z -> factor * (z - from) + to`. Wedge directions are
    /// unchanged since cones are scale invariant.
    pub fn transformed(&self, factor: &Rational, from: &Point2, to: &Point2) -> Configuration {
        let map = |z: &Point2| &(z - from).scale(factor) + to;
        Configuration {
            k: self.k,
            l: self.l,
            homothets: self
                .homothets
                .iter()
                .map(|h| Homothet { scale: &h.scale * factor, anchor: map(&h.anchor), reflected: h.reflected })
                .collect(),
            a_wedges: self.a_wedges.iter().map(|w| w.translated_to(map(&w.apex))).collect(),
            b_wedges: self.b_wedges.iter().map(|w| w.translated_to(map(&w.apex))).collect(),
            disc_center: map(&self.disc_center),
            disc_radius: &self.disc_radius * factor,
            provenance: self.provenance.clone(),
        }
    }

    pub fn translated_to(&self, center: &Point2) -> Configuration {
        self.transformed(&one(), &self.disc_center.clone(), center)
    }

    /// True iff every realized vertex and apex lies in the closed disc.
    pub fn inside_disc(&self, base: &BasePolygon) -> bool {
        let r2 = &self.disc_radius * &self.disc_radius;
        self.key_points(base).iter().all(|p| (p - &self.disc_center).norm_sq() <= r2)
    }
}

/// Uniform power-of-two homothety moving everything into the disc of
/// radius `delta` around `target`. The old center is the bounding-box
/// center of all key points.
pub fn rescale_to_disc(c: &Configuration, base: &BasePolygon, target: &Point2, delta: &Rational) -> Configuration {
    let pts = c.key_points(base);
    let center = crate::geom::Rect::bounding(&pts).expect("nonempty configuration").center();
    let reach = pts.iter().map(|p| (p - &center).norm_l1()).max().unwrap();
    let factor = if reach.is_zero() { one() } else { rational::dyadic_floor(&(delta / &reach)) };
    let mut out = c.transformed(&factor, &center, target);
    out.disc_center = target.clone();
    out.disc_radius = delta.clone();
    out
}

/// The incidence pattern of a configuration, decided exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceTable {
    /// For each `a`-wedge, the indices of homothets it meets.
    pub a_sets: Vec<Vec<usize>>,
    pub b_sets: Vec<Vec<usize>>,
    /// Wedge/homothet pairs decided by tangency.
    pub tangencies: Vec<(WedgeKind, usize, usize)>,
}

pub fn incidence_table(c: &Configuration, base: &BasePolygon) -> IncidenceTable {
    let polys: Vec<Vec<Point2>> = c.homothets.iter().map(|h| realize_homothet(h, base)).collect();
    let mut tangencies = Vec::new();
    let mut sets = |kind: WedgeKind, wedges: &[Wedge]| -> Vec<Vec<usize>> {
        wedges
            .iter()
            .enumerate()
            .map(|(wi, w)| {
                let mut hit = Vec::new();
                for (hi, poly) in polys.iter().enumerate() {
                    match wedge_relation(w, poly) {
                        Relation::Overlapping => hit.push(hi),
                        Relation::Touching => {
                            tangencies.push((kind, wi, hi));
                            hit.push(hi);
                        }
                        Relation::Disjoint => {}
                    }
                }
                hit
            })
            .collect()
    };
    let a_sets = sets(WedgeKind::A, &c.a_wedges);
    let b_sets = sets(WedgeKind::B, &c.b_wedges);
    IncidenceTable { a_sets, b_sets, tangencies }
}

/// Checks the edge-size law (`a`-wedges meet exactly `k` homothets, `b`-wedges
/// exactly `l`), the absence of tangencies, and the size law. Returns the
/// first violation found.
pub fn check_configuration(c: &Configuration, base: &BasePolygon) -> Result<IncidenceTable, String> {
    let expected = binomial(c.k + c.l, c.k) - 1;
    if c.homothets.len() != expected {
        return Err(format!("size law: {} homothets, expected {}", c.homothets.len(), expected));
    }
    let table = incidence_table(c, base);
    if let Some((kind, w, h)) = table.tangencies.first() {
        return Err(format!("{kind:?}-wedge {w} touches homothet {h} without overlapping"));
    }
    for (i, s) in table.a_sets.iter().enumerate() {
        if s.len() != c.k {
            return Err(format!("a-wedge {i} meets {} homothets, expected {}", s.len(), c.k));
        }
    }
    for (i, s) in table.b_sets.iter().enumerate() {
        if s.len() != c.l {
            return Err(format!("b-wedge {i} meets {} homothets, expected {}", s.len(), c.l));
        }
    }
    Ok(table)
}

pub fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Builds and memoizes configurations for one polygon, wedge assignment and
/// `delta`. Memoized entries are centered at the origin.
pub struct Constructor<'a> {
    base: &'a BasePolygon,
    templates: &'a WedgeTemplateSet,
    delta: Rational,
    memo: HashMap<(usize, usize), Configuration>,
}

impl<'a> Constructor<'a> {
    pub fn new(base: &'a BasePolygon, templates: &'a WedgeTemplateSet, delta: Rational) -> Self {
        assert!(delta.is_positive(), "delta must be positive");
        Self { base, templates, delta, memo: HashMap::new() }
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn build(&mut self, k: usize, l: usize) -> Result<Configuration, ConstructionError> {
        if k == 0 || l == 0 {
            return Err(ConstructionError::InvalidSize(k, l));
        }
        if let Some(c) = self.memo.get(&(k, l)) {
            return Ok(c.clone());
        }
        let c = if l == 1 {
            self.build_base(k, BaseRow::ARow)?
        } else if k == 1 {
            self.build_base(l, BaseRow::BRow)?
        } else {
            let left = self.build(k, l - 1)?;
            let right = self.build(k - 1, l)?;
            self.step(k, l, left, right)?
        };
        self.memo.insert((k, l), c.clone());
        Ok(c)
    }

    /// A horizontal row of `count` copies of scale `sigma` at unit spacing,
    /// one wedge meeting all of them and `count` wedges meeting one each.
    pub fn build_base(&self, count: usize, row: BaseRow) -> Result<Configuration, ConstructionError> {
        let (k, l) = match row {
            BaseRow::ARow => (count, 1),
            BaseRow::BRow => (1, count),
        };
        let (single_t, multi_t) = match row {
            BaseRow::ARow => (self.templates.a(), self.templates.b()),
            BaseRow::BRow => (self.templates.b(), self.templates.a()),
        };
        let anchors: Vec<Point2> = (0..count).map(|j| Point2::from_ints(j as i64, 0)).collect();
        let mut last_problem = String::new();
        for halving in 0..BASE_HALVINGS {
            let sigma = rat(1, 4) * rational::pow2_inv(halving);
            let homothets: Vec<Homothet> = anchors.iter().map(|p| Homothet::new(sigma.clone(), p.clone())).collect();
            let polys: Vec<Vec<Point2>> = homothets.iter().map(|h| realize_homothet(h, self.base)).collect();
            // Each multi wedge sits at the anchor (an interior point) of its copy.
            let multi: Vec<Wedge> = anchors.iter().map(|p| multi_t.translated_to(p.clone())).collect();
            let multi_ok = multi.iter().enumerate().all(|(j, w)| {
                polys.iter().enumerate().all(|(i, poly)| {
                    let r = wedge_relation(w, poly);
                    if i == j {
                        r == Relation::Overlapping
                    } else {
                        r == Relation::Disjoint
                    }
                })
            });
            if !multi_ok {
                last_problem = format!("scale {sigma}: a single-copy wedge meets a neighbour");
                continue;
            }
            let single = single_t.translated_to(self.common_apex(single_t, &homothets));
            if !polys.iter().all(|poly| wedge_relation(&single, poly) == Relation::Overlapping) {
                last_problem = format!("scale {sigma}: the common wedge misses a copy");
                continue;
            }
            let (a_wedges, b_wedges) = match row {
                BaseRow::ARow => (vec![single], multi),
                BaseRow::BRow => (multi, vec![single]),
            };
            let provenance = Provenance::Base {
                k,
                l,
                row,
                homothets: 0..count,
                a: 0..a_wedges.len(),
                b: 0..b_wedges.len(),
            };
            let raw = Configuration {
                k,
                l,
                homothets,
                a_wedges,
                b_wedges,
                disc_center: Point2::origin(),
                disc_radius: one(),
                provenance,
            };
            let c = rescale_to_disc(&raw, self.base, &Point2::origin(), &self.delta);
            check_configuration(&c, self.base).map_err(|detail| ConstructionError::SearchExhausted { k, l, detail })?;
            return Ok(c);
        }
        Err(ConstructionError::SearchExhausted { k, l, detail: last_problem })
    }

    /// An apex strictly inside `h + K` for every homothet, where `K` is the
    /// reflected cone of `template`, so the wedge's interior reaches a vertex
    /// of each copy.
    fn common_apex(&self, template: &Wedge, homothets: &[Homothet]) -> Point2 {
        let s_i = &self.base.vertices[template.vertex_index];
        let [n1, n2] = template.inward_normals();
        // Wedge at c meets copy h (closed) iff n . c <= n . (anchor + scale*s_i) for both normals.
        let bound = |n: &Point2| homothets.iter().map(|h| n.dot(&h.map(s_i))).min().unwrap();
        let (c1, c2) = (bound(&n1), bound(&n2));
        let det = n1.cross(&n2);
        let corner = Point2::new((&c1 * &n2.y - &c2 * &n1.y) / &det, (&n1.x * &c2 - &n2.x * &c1) / &det);
        let inward = &template.dir_prev + &template.dir_next;
        &corner - &inward
    }

    fn step(
        &self,
        k: usize,
        l: usize,
        left: Configuration,
        right: Configuration,
    ) -> Result<Configuration, ConstructionError> {
        let left = left.translated_to(&Point2::origin());
        let right_center = Point2::new(one(), int(3) * &self.delta);
        let right = right.translated_to(&right_center);
        let connector = place_connector(self.base, self.templates, &left, &right, &self.delta)
            .map_err(|detail| ConstructionError::SearchExhausted { k, l, detail })?;
        let (hl, al, bl) = (left.homothets.len(), left.a_wedges.len(), left.b_wedges.len());
        let mut homothets = left.homothets.clone();
        homothets.extend(right.homothets.iter().cloned());
        let connector_index = homothets.len();
        homothets.push(connector);
        let mut a_wedges = left.a_wedges.clone();
        a_wedges.extend(right.a_wedges.iter().cloned());
        let mut b_wedges = left.b_wedges.clone();
        b_wedges.extend(right.b_wedges.iter().cloned());
        let provenance = Provenance::Step {
            k,
            l,
            left: Box::new(left.provenance.clone()),
            right: Box::new(right.provenance.shifted(hl, al, bl)),
            connector: connector_index,
            homothets: 0..homothets.len(),
            a: 0..a_wedges.len(),
            b: 0..b_wedges.len(),
        };
        let assembled = Configuration {
            k,
            l,
            homothets,
            a_wedges,
            b_wedges,
            disc_center: Point2::origin(),
            disc_radius: one(),
            provenance,
        };
        let c = rescale_to_disc(&assembled, self.base, &Point2::origin(), &self.delta);
        check_configuration(&c, self.base).map_err(|detail| ConstructionError::SearchExhausted { k, l, detail })?;
        Ok(c)
    }
}

/// Open subsets of `(0, inf)` as sorted disjoint open intervals; `None`
/// marks an infinite upper end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct IntervalSet(Vec<(Rational, Option<Rational>)>);

impl IntervalSet {
    fn positive() -> Self {
        IntervalSet(vec![(zero(), None)])
    }

    fn empty() -> Self {
        IntervalSet(Vec::new())
    }

    fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for (a0, a1) in &self.0 {
            for (b0, b1) in &other.0 {
                let lo = a0.clone().max(b0.clone());
                let hi = match (a1, b1) {
                    (None, None) => None,
                    (Some(x), None) | (None, Some(x)) => Some(x.clone()),
                    (Some(x), Some(y)) => Some(x.clone().min(y.clone())),
                };
                if hi.as_ref().is_none_or(|h| &lo < h) {
                    out.push((lo, hi));
                }
            }
        }
        out.sort();
        IntervalSet(out)
    }

    fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut all: Vec<_> = self.0.iter().chain(&other.0).cloned().collect();
        all.sort();
        let mut out: Vec<(Rational, Option<Rational>)> = Vec::new();
        for (lo, hi) in all {
            if let Some(last) = out.last_mut() {
                // Open intervals sharing only an endpoint stay separate.
                let overlaps = last.1.as_ref().is_none_or(|h| &lo < h);
                if overlaps {
                    last.1 = match (&last.1, &hi) {
                        (None, _) | (_, None) => None,
                        (Some(x), Some(y)) => Some(x.clone().max(y.clone())),
                    };
                    continue;
                }
            }
            out.push((lo, hi));
        }
        IntervalSet(out)
    }

    /// `{eps > 0 : eps * b - a > 0}` (or `< 0` when `negative`).
    fn linear(a: &Rational, b: &Rational, negative: bool) -> IntervalSet {
        let (a, b) = if negative { (-a, -b) } else { (a.clone(), b.clone()) };
        if b.is_zero() {
            return if a.is_negative() { Self::positive() } else { Self::empty() };
        }
        let root = &a / &b;
        if b.is_positive() {
            IntervalSet(vec![(root.max(zero()), None)])
        } else if root.is_positive() {
            IntervalSet(vec![(zero(), Some(root))])
        } else {
            Self::empty()
        }
    }

    /// A short dyadic from the middle half of the widest component; bounded
    /// components are preferred.
    fn pick(&self) -> Option<Rational> {
        let bounded = self
            .0
            .iter()
            .filter_map(|(lo, hi)| hi.as_ref().map(|h| (lo.clone(), h.clone())))
            .max_by(|x, y| (&x.1 - &x.0).cmp(&(&y.1 - &y.0)));
        let (lo, hi) = match bounded {
            Some(b) => b,
            None => {
                let (lo, _) = self.0.first()?;
                (lo.clone(), lo * int(2) + one())
            }
        };
        let quarter = (&hi - &lo) / int(4);
        Some(rational::dyadic_between(&(&lo + &quarter), &(&hi - &quarter)))
    }
}

/// Scales `eps` for which a wedge at `apex` strictly meets (or strictly
/// misses) `eps * S + anchor`.
///
/// The wedge meets the copy iff `apex` lies in `anchor + eps*s_i + K_i`,
/// where `K_i` is the tangent cone of `S` at its vertex `s_i`; with the
/// wedge's inward normals `n` that is `n . (apex - anchor) <= eps * (n . s_i)`.
fn scale_window(base: &BasePolygon, wedge: &Wedge, anchor: &Point2, must_meet: bool) -> IntervalSet {
    let s_i = &base.vertices[wedge.vertex_index];
    let offset = &wedge.apex - anchor;
    let mut acc = if must_meet { IntervalSet::positive() } else { IntervalSet::empty() };
    for n in wedge.inward_normals() {
        let a = n.dot(&offset);
        let b = n.dot(s_i);
        if must_meet {
            acc = acc.intersect(&IntervalSet::linear(&a, &b, false));
        } else {
            acc = acc.union(&IntervalSet::linear(&a, &b, true));
        }
    }
    acc
}

/// Dyadic fractions of `(0, 1)` in breadth-first order: 1/2, 1/4, 3/4, ...
fn dyadic_fractions(depth: u32) -> impl Iterator<Item = Rational> {
    (1..=depth).flat_map(|level| {
        let den = 1i64 << level;
        (1..den).step_by(2).map(move |num| rat(num, den))
    })
}

/// Find `S' = eps * S(p)` with `p` on the segment between the two disc
/// centers, meeting all left `b`-wedges and right `a`-wedges and missing all
/// left `a`-wedges and right `b`-wedges, every verdict strict.
pub fn place_connector(
    base: &BasePolygon,
    _templates: &WedgeTemplateSet,
    left: &Configuration,
    right: &Configuration,
    _delta: &Rational,
) -> Result<Homothet, String> {
    let from = &left.disc_center;
    let dir = &right.disc_center - from;
    let constraints: Vec<(&Wedge, bool)> = left
        .b_wedges
        .iter()
        .map(|w| (w, true))
        .chain(right.a_wedges.iter().map(|w| (w, true)))
        .chain(left.a_wedges.iter().map(|w| (w, false)))
        .chain(right.b_wedges.iter().map(|w| (w, false)))
        .collect();
    let mut first_violation: Option<String> = None;
    for t in dyadic_fractions(CONNECTOR_DEPTH) {
        let anchor = from + &dir.scale(&t);
        let mut window = IntervalSet::positive();
        for (w, meet) in &constraints {
            window = window.intersect(&scale_window(base, w, &anchor, *meet));
            if window.0.is_empty() {
                break;
            }
        }
        let Some(eps) = window.pick() else {
            first_violation.get_or_insert_with(|| format!("no connector scale works at anchor fraction {t}"));
            continue;
        };
        let candidate = Homothet::new(eps, anchor);
        let poly = realize_homothet(&candidate, base);
        let violation = constraints.iter().enumerate().find_map(|(i, (w, meet))| {
            let r = wedge_relation(w, &poly);
            let ok = if *meet { r == Relation::Overlapping } else { r == Relation::Disjoint };
            (!ok).then(|| format!("connector predicate {i} ({}) decided {r:?}", if *meet { "meet" } else { "miss" }))
        });
        match violation {
            None => return Ok(candidate),
            Some(v) => {
                first_violation.get_or_insert(v);
            }
        }
    }
    Err(first_violation.unwrap_or_else(|| "no connector candidates".into()))
}

/// Result of building `T(k,l)` end to end for a prepared polygon.
#[derive(Debug, Clone)]
pub struct Built {
    pub config: Configuration,
    pub templates: WedgeTemplateSet,
    pub delta: Rational,
}

/// Pick the wedge assignment by trying `T(2,2)` with the direct assignment
/// and then the swapped one. `T(2,2)` is the first configuration that needs
/// a connector, so it is the first place the two can differ.
pub fn select_assignment(prepared: &PreparedPolygon, delta: &Rational) -> Result<WedgeAssignment, ConstructionError> {
    let mut first_err = None;
    for assignment in [WedgeAssignment::Direct, WedgeAssignment::Swapped] {
        let templates = prepared.templates(assignment);
        let inner = delta.clone().min(working_delta());
        match Constructor::new(&prepared.normalized, &templates, inner).build(2, 2) {
            Ok(_) => return Ok(assignment),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap())
}

pub fn build(prepared: &PreparedPolygon, k: usize, l: usize, delta: &Rational) -> Result<Built, ConstructionError> {
    let assignment = select_assignment(prepared, delta)?;
    build_with(prepared, assignment, k, l, delta)
}

pub fn build_with(
    prepared: &PreparedPolygon,
    assignment: WedgeAssignment,
    k: usize,
    l: usize,
    delta: &Rational,
) -> Result<Built, ConstructionError> {
    let templates = prepared.templates(assignment);
    let inner = delta.clone().min(working_delta());
    let mut config = Constructor::new(&prepared.normalized, &templates, inner.clone()).build(k, l)?;
    if &inner != delta {
        config = rescale_to_disc(&config, &prepared.normalized, &Point2::origin(), delta);
        check_configuration(&config, &prepared.normalized)
            .map_err(|detail| ConstructionError::SearchExhausted { k, l, detail })?;
    }
    Ok(Built { config, templates, delta: delta.clone() })
}
