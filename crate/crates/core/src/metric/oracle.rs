//! Lattice Dijkstra: an independent upper bound on ℓp distances.
//!
//! Every maximal cube is sampled at spacing `1/k`; lattice points on shared
//! faces are identified through their canonical face coordinates. Edges join
//! points of one cube whose integer offsets lie in a small stencil. Every
//! edge is a straight segment inside a cube, so the result never
//! underestimates the true distance.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::complex::{canonicalize, spread, CubeComplex, CubeId, PointLocation};

use super::norm::PNorm;

/// A face seen from one cube: the face id and its axis map.
type FaceChart = (CubeId, Vec<(usize, bool)>);

struct Dist(f64, u32);

impl PartialEq for Dist {
    fn eq(&self, o: &Self) -> bool {
        self.0.total_cmp(&o.0).is_eq() && self.1 == o.1
    }
}
impl Eq for Dist {}
impl PartialOrd for Dist {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Dist {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&o.0).then(self.1.cmp(&o.1))
    }
}

pub struct GridOracle<'a> {
    c: &'a CubeComplex,
    p: PNorm,
    k: usize,
    radius: i64,
    /// Per maximal cube (by position in `c.maximal()`): lattice index → node.
    ids: Vec<Vec<u32>>,
    /// Per node: every (maximal cube position, lattice index) it appears as.
    reps: Vec<Vec<(usize, u32)>>,
    /// Per dimension: stencil offsets with their edge weights.
    stencils: HashMap<usize, Vec<(Vec<i64>, f64)>>,
}

fn decode(mut flat: usize, d: usize, k: usize) -> Vec<i64> {
    (0..d)
        .map(|_| {
            let v = flat % (k + 1);
            flat /= k + 1;
            v as i64
        })
        .collect()
}

fn encode(v: &[i64], k: usize) -> usize {
    v.iter().rev().fold(0, |acc, &x| acc * (k + 1) + x as usize)
}

impl<'a> GridOracle<'a> {
    /// Stencil radius 1 for p ∈ {1, ∞}, where axis and diagonal steps are
    /// exact; radius 3 otherwise (up to dimension 3).
    pub fn new(c: &'a CubeComplex, p: PNorm, k: usize) -> Self {
        assert!(k >= 2, "grid oracle needs k >= 2");
        let radius = match p {
            PNorm::One | PNorm::Inf => 1,
            _ if c.dim() <= 3 => 3,
            _ => 1,
        };
        let mut keys: HashMap<(CubeId, Vec<u16>), u32> = HashMap::new();
        let mut ids = Vec::new();
        let mut reps: Vec<Vec<(usize, u32)>> = Vec::new();
        let mut stencils = HashMap::new();
        for (mi, &m) in c.maximal().iter().enumerate() {
            let cube = c.cube(m);
            let d = cube.dim();
            stencils
                .entry(d)
                .or_insert_with(|| stencil(d, radius, p, k));
            let mut faces: HashMap<(usize, usize), FaceChart> = HashMap::new();
            let total = (k + 1).pow(d as u32);
            let mut local = Vec::with_capacity(total);
            for flat in 0..total {
                let v = decode(flat, d, k);
                let (mut base, mut free) = (0usize, 0usize);
                for (l, &x) in v.iter().enumerate() {
                    if x == k as i64 {
                        base |= 1 << l;
                    } else if x > 0 {
                        free |= 1 << l;
                    }
                }
                let (face, transform) = faces.entry((base, free)).or_insert_with(|| {
                    let raw: Vec<_> = (0..1usize << free.count_ones())
                        .map(|t| cube.corner(base | spread(t, free)))
                        .collect();
                    let (corners, transform) = canonicalize(&raw);
                    let axes: Vec<usize> = (0..d).filter(|l| free >> l & 1 == 1).collect();
                    let transform = transform.into_iter().map(|(a, r)| (axes[a], r)).collect();
                    (c.find(&corners).expect("faces are stored"), transform)
                });
                let coords: Vec<u16> = transform
                    .iter()
                    .map(|&(l, r)| {
                        if r {
                            (k as i64 - v[l]) as u16
                        } else {
                            v[l] as u16
                        }
                    })
                    .collect();
                let next = reps.len() as u32;
                let id = *keys.entry((*face, coords)).or_insert(next);
                if id == next {
                    reps.push(Vec::new());
                }
                reps[id as usize].push((mi, flat as u32));
                local.push(id);
            }
            ids.push(local);
        }
        GridOracle {
            c,
            p,
            k,
            radius,
            ids,
            reps,
            stencils,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.reps.len()
    }

    /// Lattice neighbours of an endpoint, in every maximal cube holding it.
    fn attach(&self, x: &PointLocation) -> Vec<(u32, f64)> {
        let k = self.k as f64;
        let mut out = Vec::new();
        for (mi, &m) in self.c.maximal().iter().enumerate() {
            let Some(y) = self.c.point_in(x, m) else {
                continue;
            };
            let ranges: Vec<(i64, i64)> = y
                .iter()
                .map(|&t| {
                    let s = ((t * k).floor() as i64 - self.radius).max(0);
                    let e = ((t * k).ceil() as i64 + self.radius).min(self.k as i64);
                    (s, e)
                })
                .collect();
            let mut v: Vec<i64> = ranges.iter().map(|r| r.0).collect();
            loop {
                let w = self
                    .p
                    .norm(v.iter().zip(&y).map(|(&a, &t)| a as f64 / k - t));
                out.push((self.ids[mi][encode(&v, self.k)], w));
                let mut l = 0;
                while l < v.len() && v[l] == ranges[l].1 {
                    v[l] = ranges[l].0;
                    l += 1;
                }
                if l == v.len() {
                    break;
                }
                v[l] += 1;
            }
        }
        out
    }

    /// Upper bounds on the distance from `a` to every lattice node.
    pub fn field(&self, a: &PointLocation) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.reps.len()];
        let mut heap = BinaryHeap::new();
        for (id, w) in self.attach(a) {
            if w < dist[id as usize] {
                dist[id as usize] = w;
                heap.push(Reverse(Dist(w, id)));
            }
        }
        while let Some(Reverse(Dist(du, u))) = heap.pop() {
            if du <= dist[u as usize] {
                self.relax(u, du, &mut dist, &mut heap);
            }
        }
        dist
    }

    /// Location of lattice node `id`.
    pub fn node_location(&self, id: usize) -> PointLocation {
        let (mi, flat) = self.reps[id][0];
        let m = self.c.maximal()[mi];
        let k = self.k as f64;
        let coords = decode(flat as usize, self.c.cube(m).dim(), self.k)
            .iter()
            .map(|&v| v as f64 / k)
            .collect();
        self.c
            .canonical_point(&PointLocation::new(m, coords))
            .expect("lattice point")
    }

    fn relax(&self, u: u32, du: f64, dist: &mut [f64], heap: &mut BinaryHeap<Reverse<Dist>>) {
        for &(mi, flat) in &self.reps[u as usize] {
            let d = self.c.cube(self.c.maximal()[mi]).dim();
            let v = decode(flat as usize, d, self.k);
            for (off, w) in &self.stencils[&d] {
                let mut nv = v.clone();
                let mut ok = true;
                for l in 0..d {
                    nv[l] += off[l];
                    ok &= (0..=self.k as i64).contains(&nv[l]);
                }
                if !ok {
                    continue;
                }
                let t = self.ids[mi][encode(&nv, self.k)];
                let nd = du + w;
                if nd < dist[t as usize] {
                    dist[t as usize] = nd;
                    heap.push(Reverse(Dist(nd, t)));
                }
            }
        }
    }

    /// Shortest lattice path length; infinite when unreachable.
    pub fn distance(&self, a: &PointLocation, b: &PointLocation) -> f64 {
        let mut direct = f64::INFINITY;
        for &m in self.c.maximal() {
            if let (Some(x), Some(y)) = (self.c.point_in(a, m), self.c.point_in(b, m)) {
                direct = direct.min(self.p.dist(&x, &y));
            }
        }
        let n = self.reps.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        for (id, w) in self.attach(a) {
            if w < dist[id as usize] {
                dist[id as usize] = w;
                heap.push(Reverse(Dist(w, id)));
            }
        }
        let exits: HashMap<u32, f64> =
            self.attach(b)
                .into_iter()
                .fold(HashMap::new(), |mut acc, (id, w)| {
                    let e = acc.entry(id).or_insert(w);
                    *e = e.min(w);
                    acc
                });
        let mut best = direct;
        while let Some(Reverse(Dist(du, u))) = heap.pop() {
            if du >= best {
                break;
            }
            if du > dist[u as usize] {
                continue;
            }
            if let Some(&w) = exits.get(&u) {
                best = best.min(du + w);
            }
            self.relax(u, du, &mut dist, &mut heap);
        }
        best
    }
}

fn stencil(d: usize, radius: i64, p: PNorm, k: usize) -> Vec<(Vec<i64>, f64)> {
    let side = (2 * radius + 1) as usize;
    let mut out = Vec::new();
    for t in 0..side.pow(d as u32) {
        let off: Vec<i64> = decode_side(t, d, side)
            .into_iter()
            .map(|x| x - radius)
            .collect();
        if off.iter().all(|&x| x == 0) {
            continue;
        }
        let w = p.norm(off.iter().map(|&x| x as f64)) / k as f64;
        out.push((off, w));
    }
    out
}

fn decode_side(mut t: usize, d: usize, side: usize) -> Vec<i64> {
    (0..d)
        .map(|_| {
            let v = t % side;
            t /= side;
            v as i64
        })
        .collect()
}

/// One-shot oracle distance; see [`GridOracle`].
pub fn grid_oracle_distance(
    c: &CubeComplex,
    a: &PointLocation,
    b: &PointLocation,
    p: PNorm,
    k: usize,
) -> f64 {
    GridOracle::new(c, p, k).distance(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_diagonal_is_exact() {
        let sq = CubeComplex::from_cubes(&[0, 1, 2, 3], &[vec![0, 1, 2, 3]]).unwrap();
        let q = sq.find(&[0, 1, 2, 3]).unwrap();
        let d = grid_oracle_distance(
            &sq,
            &PointLocation::new(q, vec![0.0, 0.0]),
            &PointLocation::new(q, vec![1.0, 1.0]),
            PNorm::Inf,
            8,
        );
        assert_eq!(d, 1.0);
    }

    #[test]
    fn strip_euclidean() {
        let strip =
            CubeComplex::from_cubes(&[0, 1, 2, 3, 4, 5], &[vec![0, 1, 3, 4], vec![1, 2, 4, 5]])
                .unwrap();
        let o = GridOracle::new(&strip, PNorm::Two, 32);
        // shared vertices and edge points are identified
        assert_eq!(o.num_nodes(), 33 * 65);
        let d = o.distance(
            &strip.vertex_point(0).unwrap(),
            &strip.vertex_point(5).unwrap(),
        );
        assert!(d >= 5f64.sqrt() - 1e-12 && d < 5f64.sqrt() + 0.07, "{d}");
    }
}
