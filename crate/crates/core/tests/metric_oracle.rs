use cubik::generators::{hypercube, lshape, random_collapsible_with, strip, tricorner};
use cubik::metric::{distance, GridOracle, PNorm};
use cubik::{CubeComplex, PointLocation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(c: &CubeComplex, rng: &mut ChaCha8Rng) -> PointLocation {
    let m = c.maximal()[rng.random_range(0..c.maximal().len())];
    let coords = (0..c.cube(m).dim())
        .map(|_| rng.random_range(0.0..=1.0))
        .collect();
    c.canonical_point(&PointLocation::new(m, coords)).unwrap()
}

fn compare(name: &str, c: &CubeComplex, pairs: usize, k: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(PointLocation, PointLocation)> = (0..pairs)
        .map(|_| (random_point(c, &mut rng), random_point(c, &mut rng)))
        .collect();
    for p in PNorm::all_exact() {
        let oracle = GridOracle::new(c, p, k);
        for (a, b) in &pts {
            let (d, _) = distance(c, a, b, p).unwrap();
            let o = oracle.distance(a, b);
            assert!(
                d <= o + 1e-9,
                "{name} p={p}: solver {d} above oracle {o} for {a:?} {b:?}"
            );
            assert!(
                o - d <= 2.0 / k as f64 + 1e-6,
                "{name} p={p}: solver {d} oracle {o} for {a:?} {b:?}"
            );
        }
    }
}

#[test]
fn small_corpus_matches_oracle() {
    compare("square", &hypercube(2).unwrap(), 20, 32, 1);
    compare("strip", &strip(), 20, 32, 2);
    compare("lshape", &lshape(), 20, 32, 3);
    compare("tricorner", &tricorner(), 20, 32, 4);
}

#[test]
fn cube_matches_oracle() {
    compare("Q3", &hypercube(3).unwrap(), 20, 32, 5);
}

#[test]
fn random_collapsible_matches_oracle() {
    let (c, _) = random_collapsible_with(7, 20, 3, Some(2)).unwrap();
    compare("random", &c, 20, 32, 6);
}
