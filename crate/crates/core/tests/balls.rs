mod common;

use common::{ball_cases, check_ball};
use cubik::hyperconvex::{ball_of_gcuboid, gcuboid_validate};

#[test]
fn balls_match_distance_threshold() {
    for (i, bc) in ball_cases().iter().enumerate() {
        let t = std::time::Instant::now();
        let (checked, bad, _) = check_ball(bc, 500, i as u64);
        eprintln!(
            "{}: {} vertices, {checked} checked, {:?}",
            bc.name,
            bc.c.num_vertices(),
            t.elapsed()
        );
        assert!(
            bad.is_empty(),
            "{}: {} disagreements, first {}",
            bc.name,
            bad.len(),
            bad[0]
        );
    }
}

#[test]
fn balls_are_generalized_cuboids() {
    for bc in ball_cases() {
        let b = ball_of_gcuboid(&bc.c, &bc.d, &bc.x, bc.r).unwrap();
        let v = gcuboid_validate(&bc.c, &b);
        assert!(v.valid, "{}: {:?}", bc.name, v.failures);
    }
}

#[test]
fn random_boxes_and_radii() {
    use common::{random_point, BallCase};
    use cubik::generators::random_collapsible_with;
    use cubik::hyperconvex::GeneralizedCuboid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for seed in 0..16u64 {
        let (c, d) = random_collapsible_with(seed, 10, 3, Some(2)).unwrap();
        let m = c.maximal()[rng.random_range(0..c.maximal().len())];
        let x = if seed % 2 == 0 {
            let b = (0..c.cube(m).dim())
                .map(|_| {
                    let (s, t): (f64, f64) =
                        (rng.random_range(0.0..=1.0), rng.random_range(0.0..=1.0));
                    (s.min(t), s.max(t))
                })
                .collect::<Vec<_>>();
            GeneralizedCuboid::from_box(&c, m, &b)
        } else {
            GeneralizedCuboid::point(&c, &random_point(&c, &mut rng)).unwrap()
        };
        let r = rng.random_range(0.0..2.5);
        let bc = BallCase {
            name: format!("seed {seed}"),
            c,
            d,
            x,
            r,
        };
        let b = ball_of_gcuboid(&bc.c, &bc.d, &bc.x, bc.r).unwrap();
        assert!(gcuboid_validate(&bc.c, &b).valid, "{}", bc.name);
        let (_, bad, _) = check_ball(&bc, 300, seed);
        assert!(
            bad.is_empty(),
            "{} r={r}: {} disagreements, first {}",
            bc.name,
            bad.len(),
            bad[0]
        );
    }
}
