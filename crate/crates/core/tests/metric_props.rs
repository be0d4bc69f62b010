mod common;

use common::random_point;
use cubik::generators::{
    grid, hypercube, lshape, random_collapsible, random_collapsible_with, strip, tree,
};
use cubik::hyperplanes::separating_hyperplanes;
use cubik::metric::{distance, distance_with, DistanceOptions, PNorm};
use cubik::{CubeComplex, PointLocation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus() -> Vec<(&'static str, CubeComplex)> {
    vec![
        ("strip", strip()),
        ("lshape", lshape()),
        ("Q3", hypercube(3).unwrap()),
        ("grid", grid(2, 3).unwrap()),
        (
            "random",
            random_collapsible_with(5, 12, 3, Some(2)).unwrap().0,
        ),
    ]
}

#[test]
fn symmetry_and_triangle_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (name, c) in corpus() {
        for _ in 0..8 {
            let (a, b, x) = (
                random_point(&c, &mut rng),
                random_point(&c, &mut rng),
                random_point(&c, &mut rng),
            );
            for p in PNorm::all_exact() {
                let ab = distance(&c, &a, &b, p).unwrap().0;
                let ba = distance(&c, &b, &a, p).unwrap().0;
                assert_eq!(ab.to_bits(), ba.to_bits(), "{name} p={p}");
                let ax = distance(&c, &a, &x, p).unwrap().0;
                let xb = distance(&c, &x, &b, p).unwrap().0;
                assert!(ab <= ax + xb + 1e-8, "{name} p={p}: {ab} > {ax} + {xb}");
            }
        }
    }
}

#[test]
fn distances_decrease_in_p() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for (name, c) in corpus() {
        for _ in 0..10 {
            let (a, b) = (random_point(&c, &mut rng), random_point(&c, &mut rng));
            let d = |p| distance(&c, &a, &b, p).unwrap().0;
            let (inf, two, one, three) = (
                d(PNorm::Inf),
                d(PNorm::Two),
                d(PNorm::One),
                d(PNorm::P(3.0)),
            );
            assert!(
                inf <= three + 1e-9 && three <= two + 1e-9 && two <= one + 1e-9,
                "{name}: {inf} {three} {two} {one}"
            );
        }
    }
}

#[test]
fn vertex_l1_is_graph_distance_and_separation() {
    let complexes = vec![
        strip(),
        lshape(),
        hypercube(3).unwrap(),
        grid(2, 2).unwrap(),
        tree(&[0, 0, 1, 1]).unwrap(),
        random_collapsible(8, 6, 2).unwrap().0,
    ];
    for c in complexes {
        let g = c.graph();
        let ids = c.vertex_ids().to_vec();
        for (i, &u) in ids.iter().enumerate() {
            let bfs = g.bfs(i);
            for (j, &v) in ids.iter().enumerate().skip(i + 1) {
                let (pu, pv) = (c.vertex_point(u).unwrap(), c.vertex_point(v).unwrap());
                let d = distance(&c, &pu, &pv, PNorm::One).unwrap().0;
                assert!(
                    (d - bfs[j] as f64).abs() <= 1e-9,
                    "{u}-{v}: {d} vs {}",
                    bfs[j]
                );
                assert_eq!(
                    separating_hyperplanes(&c, u, v).unwrap().len(),
                    bfs[j] as usize
                );
            }
        }
    }
}

#[test]
fn doubling_the_gallery_cap_changes_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let wide = DistanceOptions {
        cap_factor: 2.0,
        ..Default::default()
    };
    for (name, c) in corpus() {
        for _ in 0..6 {
            let (a, b) = (random_point(&c, &mut rng), random_point(&c, &mut rng));
            for p in PNorm::all_exact() {
                let d1 = distance(&c, &a, &b, p).unwrap().0;
                let d2 = distance_with(&c, &a, &b, p, &wide).unwrap().0;
                assert!(
                    d1 - d2 <= 1e-7,
                    "{name} p={p}: cap x2 improves {d1} to {d2}"
                );
            }
        }
    }
}

/// A point `(y, t)` of the prism cube `m`, base face `q` on the old vertices.
fn prism_point(c: &CubeComplex, m: usize, new: &[u32], y: &[f64], t: f64) -> PointLocation {
    let cube = c.cube(m);
    let old: Vec<u32> = cube
        .corners()
        .iter()
        .copied()
        .filter(|v| !new.contains(v))
        .collect();
    let q = c.find(&old).unwrap();
    let low_new = new.contains(&cube.corner(0));
    let axis = (0..cube.dim())
        .find(|&l| new.contains(&cube.corner(1 << l)) != low_new)
        .unwrap();
    let mut x = c.chart(q, m).unwrap().embed_point(y);
    x[axis] = if low_new { 1.0 - t } else { t };
    c.canonical_point(&PointLocation::new(m, x)).unwrap()
}

#[test]
fn prism_distance_is_max_of_parts() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for seed in 0..6 {
        let (c, d) = random_collapsible_with(seed, 8, 2, Some(2)).unwrap();
        let step = &d.steps[0];
        for pairs in &step.vertex_map {
            let new: Vec<u32> = pairs.iter().map(|p| p.1).collect();
            let cubes: Vec<usize> = c
                .maximal()
                .iter()
                .copied()
                .filter(|&m| c.corner_set(m).iter().any(|v| new.contains(v)))
                .collect();
            for _ in 0..4 {
                let (m1, m2) = (
                    cubes[rng.random_range(0..cubes.len())],
                    cubes[rng.random_range(0..cubes.len())],
                );
                let pick = |m: usize, rng: &mut ChaCha8Rng| {
                    let k = c.cube(m).dim() - 1;
                    (
                        (0..k)
                            .map(|_| rng.random_range(0.0..=1.0))
                            .collect::<Vec<f64>>(),
                        rng.random_range(0.0..=1.0),
                    )
                };
                let ((y1, t1), (y2, t2)) = (pick(m1, &mut rng), pick(m2, &mut rng));
                let a = prism_point(&c, m1, &new, &y1, t1);
                let b = prism_point(&c, m2, &new, &y2, t2);
                let (ya, yb) = (
                    prism_point(&c, m1, &new, &y1, 0.0),
                    prism_point(&c, m2, &new, &y2, 0.0),
                );
                let whole = distance(&c, &a, &b, PNorm::Inf).unwrap().0;
                let base = distance(&c, &ya, &yb, PNorm::Inf).unwrap().0;
                assert!(
                    (whole - base.max((t1 - t2).abs())).abs() <= 1e-7,
                    "seed {seed}: {whole} vs {base}, {t1} {t2}"
                );
            }
        }
    }
}
