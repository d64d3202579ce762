use proptest::prelude::*;

use birthgrowth::convex::{ConvexBody, Direction, DirectionGrid, Point};
use birthgrowth::engine::{
    base_partition, lower_sum, refinement_chain, upper_sum, BirthEvent, BirthSchedule, Partition,
    Refinement,
};
use birthgrowth::growth::{GrowthProcess, TimeInterval};
use birthgrowth::region::Region;

fn point(r: f64) -> impl Strategy<Value = Point> {
    (-r..r, -r..r).prop_map(|(x, y)| Point::new(x, y))
}

fn polygon() -> impl Strategy<Value = ConvexBody> {
    (point(5.0), prop::collection::vec(point(3.0), 1..10)).prop_map(|(c, pts)| {
        ConvexBody::hull(&pts.into_iter().map(|p| p + c).collect::<Vec<_>>()).unwrap()
    })
}

fn grain() -> impl Strategy<Value = ConvexBody> {
    prop::collection::vec(point(1.5), 1..8).prop_map(|mut pts| {
        pts.push(Point::ORIGIN);
        ConvexBody::hull(&pts).unwrap()
    })
}

fn brute_support(b: &ConvexBody, u: Direction) -> f64 {
    b.vertices()
        .iter()
        .map(|v| v.dot(u.vector()))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Piecewise growth on [0, 1] with the given interior cuts.
fn piecewise(cuts: Vec<f64>, pieces: Vec<ConvexBody>) -> GrowthProcess {
    let mut bp = vec![0.0];
    let mut cuts = cuts;
    cuts.sort_by(f64::total_cmp);
    bp.extend(cuts.into_iter().filter(|&c| c > 0.0 && c < 1.0));
    bp.push(1.0);
    bp.dedup();
    let pieces: Vec<ConvexBody> = pieces.into_iter().cycle().take(bp.len() - 1).collect();
    let all: Vec<Point> = pieces.iter().flat_map(|p| p.vertices().to_vec()).collect();
    GrowthProcess::piecewise(bp, pieces, None, ConvexBody::hull(&all).unwrap()).unwrap()
}

fn growth() -> impl Strategy<Value = GrowthProcess> {
    (
        prop::collection::vec(0.0..1.0f64, 0..4),
        prop::collection::vec(grain(), 1..4),
    )
        .prop_map(|(cuts, pieces)| piecewise(cuts, pieces))
}

fn schedule() -> impl Strategy<Value = BirthSchedule> {
    prop::collection::vec((0.0..1.0f64, point(6.0), prop::bool::ANY), 0..6).prop_map(|raw| {
        let events = raw
            .into_iter()
            .map(|(time, p, at_start)| BirthEvent {
                time: if at_start { 0.0 } else { time },
                germ: ConvexBody::point(p),
            })
            .collect();
        BirthSchedule::new(0.0, 1.0, events).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_is_additive_under_minkowski_sum(a in polygon(), b in polygon(), theta in 0.0..std::f64::consts::TAU) {
        let u = Direction::from_angle(theta);
        let s = a.minkowski_sum(&b);
        prop_assert!((brute_support(&s, u) - brute_support(&a, u) - brute_support(&b, u)).abs() <= 1e-9);
    }

    #[test]
    fn minkowski_sum_commutes(a in polygon(), b in polygon()) {
        prop_assert!(a.minkowski_sum(&b).hausdorff(&b.minkowski_sum(&a)) <= 1e-9);
    }

    #[test]
    fn exact_grid_recovers_hausdorff(a in polygon(), b in polygon()) {
        let d = a.hausdorff_dual(&b, &DirectionGrid::exact_for(&a, &b)).unwrap();
        prop_assert!((a.hausdorff(&b) - d).abs() <= 1e-8);
    }

    #[test]
    fn hausdorff_is_symmetric_and_vanishes_on_self(a in polygon(), b in polygon()) {
        prop_assert_eq!(a.hausdorff(&b), b.hausdorff(&a));
        prop_assert!(a.hausdorff(&a) <= 1e-12);
    }

    #[test]
    fn constant_integral_is_scaled_body(k in grain(), a in 0.0..2.0f64, len in 0.0..2.0f64) {
        let g = GrowthProcess::constant(k.clone(), 0.0, 4.0).unwrap();
        let i = g.aumann_integral(TimeInterval::new(a, a + len).unwrap()).unwrap();
        prop_assert!(i.hausdorff(&k.scale(len).unwrap()) <= 1e-9);
    }

    #[test]
    fn integral_grows_with_interval(g in growth(), mut ts in prop::collection::vec(0.0..=1.0f64, 4)) {
        ts.sort_by(f64::total_cmp);
        let inner = g.aumann_integral(TimeInterval::new(ts[1], ts[2]).unwrap()).unwrap();
        let outer = g.aumann_integral(TimeInterval::new(ts[0], ts[3]).unwrap()).unwrap();
        prop_assert!(outer.contains_convex(&inner));
    }

    #[test]
    fn region_union_contains_both(a in polygon(), b in polygon(), c in polygon()) {
        let r = Region::from_components(vec![a.clone()]);
        let s = Region::from_components(vec![b, c]);
        let u = r.union(&s);
        prop_assert!(r.is_subset(&u, 0.0).unwrap());
        prop_assert!(s.is_subset(&u, 0.0).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lower_sum_sits_inside_upper_sum(b in schedule(), g in growth(), depth in 0usize..4) {
        let mut pi = base_partition(&b, &g, 1.0).unwrap();
        for _ in 0..depth {
            pi = pi.refine();
        }
        let lower = lower_sum(&b, &g, &pi).unwrap();
        let upper = upper_sum(&b, &g, &pi).unwrap();
        prop_assert!(lower.is_subset(&upper, 1e-9).unwrap());
    }

    #[test]
    fn refinement_tightens_both_sums(b in schedule(), g in growth()) {
        let base = base_partition(&b, &g, 1.0).unwrap();
        let chain = refinement_chain(&b, &g, base, 3, Refinement::Dyadic, 1e-12, 1e-6).unwrap();
        for w in chain.windows(2) {
            prop_assert!(w[0].lower.is_subset(&w[1].lower, 1e-9).unwrap());
            prop_assert!(w[1].upper.is_subset(&w[0].upper, 1e-9).unwrap());
            prop_assert!(w[1].gap.value <= w[1].bound);
        }
    }

    #[test]
    fn arbitrary_partitions_keep_the_sandwich(b in schedule(), g in growth(), mut cuts in prop::collection::vec(0.0..1.0f64, 0..6)) {
        cuts.sort_by(f64::total_cmp);
        let pi = Partition::through(0.0, 1.0, cuts).unwrap();
        let lower = lower_sum(&b, &g, &pi).unwrap();
        let upper = upper_sum(&b, &g, &pi).unwrap();
        prop_assert!(lower.is_subset(&upper, 1e-9).unwrap());
    }
}
