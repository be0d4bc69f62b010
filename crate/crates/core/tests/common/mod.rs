#![allow(dead_code)]

use cubik::collapse::{collapse_all, Decomposition};
use cubik::generators::{hypercube, lshape, path, random_collapsible_with, strip};
use cubik::hyperconvex::{ball_of_gcuboid, GeneralizedCuboid};
use cubik::metric::{region_distance, DistanceOptions, PNorm, Region};
use cubik::{CubeComplex, PointLocation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_point(c: &CubeComplex, rng: &mut ChaCha8Rng) -> PointLocation {
    let m = c.maximal()[rng.random_range(0..c.maximal().len())];
    let coords = (0..c.cube(m).dim())
        .map(|_| rng.random_range(0.0..=1.0))
        .collect();
    c.canonical_point(&PointLocation::new(m, coords)).unwrap()
}

#[derive(Debug)]
pub struct BallCase {
    pub name: String,
    pub c: CubeComplex,
    pub d: Decomposition,
    pub x: GeneralizedCuboid,
    pub r: f64,
}

fn case(
    name: &str,
    c: CubeComplex,
    d: Option<Decomposition>,
    x: GeneralizedCuboid,
    r: f64,
) -> BallCase {
    let d = d.unwrap_or_else(|| collapse_all(&c).unwrap());
    BallCase {
        name: name.into(),
        c,
        d,
        x,
        r,
    }
}

fn vertex(c: &CubeComplex, v: u32) -> GeneralizedCuboid {
    GeneralizedCuboid::point(c, &c.vertex_point(v).unwrap()).unwrap()
}

/// Ten ball cases: points, boxes and points deep inside prisms.
pub fn ball_cases() -> Vec<BallCase> {
    let mut out = Vec::new();
    let seg = path(1);
    let mid =
        GeneralizedCuboid::point(&seg, &PointLocation::new(seg.maximal()[0], vec![0.5])).unwrap();
    out.push(case("segment midpoint", seg, None, mid, 0.3));
    let sq = hypercube(2).unwrap();
    let x = vertex(&sq, 0);
    out.push(case("square corner", sq, None, x, 0.5));
    let s = strip();
    let x = vertex(&s, 0);
    out.push(case("strip corner", s, None, x, 1.5));
    let s = strip();
    let right = s.find(&[1, 2, 4, 5]).unwrap();
    let x = GeneralizedCuboid {
        boxes: [(right, vec![(0.6, 0.8), (0.1, 0.3)])].into(),
    };
    out.push(case("strip box", s, None, x, 0.45));
    let l = lshape();
    let p = PointLocation::new(l.find(&[1, 2, 4, 5]).unwrap(), vec![0.7, 0.2]);
    let x = GeneralizedCuboid::point(&l, &p).unwrap();
    out.push(case("L-shape point", l, None, x, 1.3));
    let q = hypercube(3).unwrap();
    let x = GeneralizedCuboid::point(&q, &PointLocation::new(q.maximal()[0], vec![0.2, 0.9, 0.5]))
        .unwrap();
    out.push(case("Q3 point", q, None, x, 0.35));
    let p3 = path(3);
    let x = vertex(&p3, 3);
    out.push(case("path end", p3, None, x, 2.4));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (seed, r) in [(3u64, 0.8), (11, 1.7), (21, 0.6)] {
        let (c, d) = random_collapsible_with(seed, 12, 3, Some(2)).unwrap();
        let p = random_point(&c, &mut rng);
        let x = GeneralizedCuboid::point(&c, &p).unwrap();
        out.push(case(&format!("random {seed}"), c, Some(d), x, r));
    }
    out
}

/// Samples `n` points; returns (checked, disagreements, skipped in the band).
pub fn check_ball(bc: &BallCase, n: usize, seed: u64) -> (usize, Vec<String>, usize) {
    let ball = ball_of_gcuboid(&bc.c, &bc.d, &bc.x, bc.r).unwrap();
    let target = bc.x.to_region();
    let opts = DistanceOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut checked, mut skipped, mut bad) = (0, 0, Vec::new());
    for _ in 0..n {
        let p = random_point(&bc.c, &mut rng);
        let d = region_distance(
            &bc.c,
            &Region::point(&bc.c, &p).unwrap(),
            &target,
            PNorm::Inf,
            &opts,
        )
        .unwrap()
        .length;
        if (d - bc.r).abs() <= 1e-6 {
            skipped += 1;
            continue;
        }
        checked += 1;
        if (d <= bc.r) != ball.contains(&bc.c, &p) {
            bad.push(format!("{p:?}: d = {d}, r = {}", bc.r));
        }
    }
    (checked, bad, skipped)
}

/// Backtracking graph isomorphism test (small graphs).
pub fn isomorphic(g: &cubik::Graph, h: &cubik::Graph) -> bool {
    let n = g.len();
    if n != h.len() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut gd: Vec<usize> = (0..n).map(|u| g.neighbors(u).len()).collect();
    let mut hd: Vec<usize> = (0..n).map(|u| h.neighbors(u).len()).collect();
    let (gdeg, hdeg) = (gd.clone(), hd.clone());
    gd.sort_unstable();
    hd.sort_unstable();
    if gd != hd {
        return false;
    }
    let adj = |x: &cubik::Graph, a: usize, b: usize| x.neighbors(a).contains(&b);
    fn extend(
        u: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(usize, usize, &[usize]) -> bool,
    ) -> bool {
        if u == map.len() {
            return true;
        }
        for v in 0..used.len() {
            if !used[v] && ok(u, v, &map[..u]) {
                map[u] = v;
                used[v] = true;
                if extend(u + 1, map, used, ok) {
                    return true;
                }
                used[v] = false;
            }
        }
        false
    }
    let ok = |u: usize, v: usize, prefix: &[usize]| {
        gdeg[u] == hdeg[v]
            && prefix
                .iter()
                .enumerate()
                .all(|(w, &x)| adj(g, u, w) == adj(h, v, x))
    };
    extend(0, &mut vec![0; n], &mut vec![false; n], &ok)
}
