use cubik::collapse::collapse_all;
use cubik::generators::{hypercube, lshape, strip};
use cubik::hyperconvex::{
    ball_of_gcuboid, gcuboid_intersect, gcuboid_validate, property_p_check, GeneralizedCuboid,
    Interval, PropertyP,
};
use cubik::metric::{distance, PNorm};
use cubik::{CubeComplex, PointLocation};
use proptest::prelude::*;

fn interval() -> impl Strategy<Value = Interval> {
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(a, b)| (a.min(b), a.max(b)))
}

fn boxes(dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<Interval>>> {
    prop::collection::vec(prop::collection::vec(interval(), dim), 2..=max)
}

fn overlap(a: &[Interval], b: &[Interval]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.0.max(y.0) <= x.1.min(y.1))
}

/// A box placed in one maximal cube of `c`.
fn placed(c: &CubeComplex, which: usize, b: &[Interval]) -> GeneralizedCuboid {
    let m = c.maximal()[which % c.maximal().len()];
    GeneralizedCuboid::from_box(c, m, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn boxes_in_a_cube_are_helly(bs in boxes(3, 5)) {
        let q = hypercube(3).unwrap();
        let xs: Vec<_> = bs.iter().map(|b| placed(&q, 0, b)).collect();
        let pairwise = (0..bs.len()).all(|i| (i + 1..bs.len()).all(|j| overlap(&bs[i], &bs[j])));
        let total = gcuboid_intersect(&q, &xs);
        prop_assert_eq!(pairwise, total.cuboid().is_some());
        if let Some(x) = total.cuboid() {
            let w = x.witness(&q).unwrap();
            prop_assert!(xs.iter().all(|y| y.contains(&q, &w)));
        }
    }

    #[test]
    fn property_p_on_planar_complexes(bs in boxes(2, 4), cubes in prop::collection::vec(0usize..3, 4), l in any::<bool>()) {
        let c = if l { lshape() } else { strip() };
        let xs: Vec<_> = bs.iter().zip(&cubes).map(|(b, &k)| placed(&c, k, b)).collect();
        match property_p_check(&c, &xs) {
            PropertyP::PrecondFailed { .. } => {}
            PropertyP::Holds { witness } => prop_assert!(xs.iter().all(|x| x.contains(&c, &witness))),
            PropertyP::Fails => prop_assert!(false, "pairwise meeting cuboids with empty intersection"),
        }
    }

    #[test]
    fn strip_balls_match_distances(
        x in (0usize..2, 0.0..=1.0f64, 0.0..=1.0f64),
        y in (0usize..2, 0.0..=1.0f64, 0.0..=1.0f64),
        r in 0.0..2.0f64,
    ) {
        let c = strip();
        let d = collapse_all(&c).unwrap();
        let p = c.canonical_point(&PointLocation::new(c.maximal()[x.0], vec![x.1, x.2])).unwrap();
        let q = c.canonical_point(&PointLocation::new(c.maximal()[y.0], vec![y.1, y.2])).unwrap();
        let ball = ball_of_gcuboid(&c, &d, &GeneralizedCuboid::point(&c, &p).unwrap(), r).unwrap();
        prop_assert!(gcuboid_validate(&c, &ball).valid);
        prop_assert!(ball.contains(&c, &p));
        let (dist, _) = distance(&c, &p, &q, PNorm::Inf).unwrap();
        if (dist - r).abs() > 1e-6 {
            prop_assert_eq!(ball.contains(&c, &q), dist < r);
        }
    }
}
