use coverkit_core::construction::{self, incidence_table, rescale_to_disc, Configuration};
use coverkit_core::duality::{statement1_holds, DualityQuery};
use coverkit_core::geom::{
    canonical_cycle, clip_half_plane, clip_to_wedge, minkowski_scale_sum, point_in_polygon, polygon_relation,
    realize_homothet, wedge_relation, Point2,
};
use coverkit_core::hypergraph::{certified_witness, Coloring, IncidenceHypergraph};
use coverkit_core::prep::{presets, PreparedPolygon, WedgeAssignment};
use coverkit_core::rational::{self, rat, Rational};
use proptest::prelude::*;
use std::sync::OnceLock;

fn prepared(i: usize) -> &'static PreparedPolygon {
    static P: OnceLock<Vec<PreparedPolygon>> = OnceLock::new();
    &P.get_or_init(|| {
        presets::NAMES.iter().map(|n| PreparedPolygon::new(&presets::by_name(n).unwrap()).unwrap()).collect()
    })[i]
}

fn t33(i: usize) -> &'static Configuration {
    static C: OnceLock<Vec<Configuration>> = OnceLock::new();
    &C.get_or_init(|| (0..3).map(|i| construction::build(prepared(i), 3, 3, &rat(1, 64)).unwrap().config).collect())[i]
}

fn ratio(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (1i64..=12).prop_flat_map(move |d| (lo * d..=hi * d).prop_map(move |n| rat(n, d)))
}

fn point(r: i64) -> impl Strategy<Value = Point2> {
    (ratio(-r, r), ratio(-r, r)).prop_map(|(x, y)| Point2::new(x, y))
}

/// Closed convex polygons meet iff clipping one by every edge half-plane of
/// the other leaves something.
fn clip_oracle(p: &[Point2], q: &[Point2]) -> bool {
    let mut rest = p.to_vec();
    for i in 0..q.len() {
        let a = &q[i];
        let b = &q[(i + 1) % q.len()];
        // Clockwise: the interior lies right of a -> b.
        let n = Point2::new(&b.y - &a.y, &a.x - &b.x);
        let c = n.dot(a);
        rest = clip_half_plane(&rest, &n, &c);
        if rest.is_empty() {
            return false;
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scaling_is_minkowski_additive(i in 0usize..3, a in ratio(0, 3), b in ratio(0, 3)) {
        prop_assume!(a > rational::zero() || b > rational::zero());
        let s = &prepared(i).normalized;
        let sum = minkowski_scale_sum(s, &a, &b).unwrap();
        let direct: Vec<Point2> = s.vertices.iter().map(|v| v.scale(&(&a + &b))).collect();
        prop_assert_eq!(canonical_cycle(&sum), canonical_cycle(&direct));
    }

    #[test]
    fn statement1_sides_agree(i in 0usize..3, alpha in ratio(0, 2), beta in ratio(0, 2), p in point(3), q in point(3)) {
        let s = &prepared(i).normalized;
        let (lhs, rhs) = statement1_holds(&DualityQuery { alpha, beta, p, q }, s);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn separating_axes_match_clipping(
        i in 0usize..3,
        j in 0usize..3,
        sa in ratio(1, 2),
        sb in ratio(1, 2),
        pa in point(3),
        pb in point(3),
        flip in any::<bool>(),
    ) {
        let h = |k: usize, s: Rational, p: Point2, reflected: bool| {
            let base = &prepared(k).normalized;
            let h = if reflected {
                coverkit_core::geom::Homothet::reflected(s, p)
            } else {
                coverkit_core::geom::Homothet::new(s, p)
            };
            realize_homothet(&h, base)
        };
        let p = h(i, sa, pa, false);
        let q = h(j, sb, pb, flip);
        prop_assert_eq!(polygon_relation(&p, &q).meets(), clip_oracle(&p, &q));
        prop_assert_eq!(polygon_relation(&p, &q), polygon_relation(&q, &p));
    }

    #[test]
    fn wedge_test_matches_clipping(i in 0usize..3, t in 0usize..5, apex in point(2), s in ratio(1, 2), at in point(2)) {
        let prep = prepared(i);
        let templates = prep.templates(WedgeAssignment::Direct);
        let w = templates.templates[t % templates.templates.len()].translated_to(apex);
        let poly = realize_homothet(&coverkit_core::geom::Homothet::new(s, at), &prep.normalized);
        prop_assert_eq!(wedge_relation(&w, &poly).meets(), !clip_to_wedge(&poly, &w).is_empty());
    }

    #[test]
    fn point_membership_is_affine_invariant(i in 0usize..3, q in point(2), s in ratio(1, 4), shift in point(4)) {
        let base = &prepared(i).normalized;
        let moved = |z: &Point2| &z.scale(&s) + &shift;
        let poly: Vec<Point2> = base.vertices.iter().map(moved).collect();
        prop_assert_eq!(point_in_polygon(&q, &base.vertices), point_in_polygon(&moved(&q), &poly));
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = rat(n, d);
        prop_assert_eq!(rational::parse(&rational::format(&r)).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rescaling_keeps_incidences(i in 0usize..3, target in point(8), e in 3u32..12) {
        let c = t33(i);
        let base = &prepared(i).normalized;
        let delta = rational::pow2_inv(e);
        let moved = rescale_to_disc(c, base, &target, &delta);
        prop_assert!(moved.inside_disc(base));
        let (a, b) = (incidence_table(c, base), incidence_table(&moved, base));
        prop_assert_eq!(a.a_sets, b.a_sets);
        prop_assert_eq!(a.b_sets, b.b_sets);
        prop_assert!(b.tangencies.is_empty());
    }

    #[test]
    fn certificate_holds_on_random_colorings(i in 0usize..3, mask in 0u64..(1 << 19)) {
        let c = t33(i);
        let h = IncidenceHypergraph::from_configuration(c, &prepared(i).normalized);
        prop_assert!(certified_witness(c, &h, &Coloring::from_mask(mask, 19)).is_ok());
    }
}
