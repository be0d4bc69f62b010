//! Best-first gallery search for distances between points or box regions.
//!
//! Nodes are gallery prefixes `C_0..C_j`. A node's key is the least length
//! of a string from the start region to the face through which `C_j` was
//! entered, raised to the block bound `⌊j / (n+2)⌋` that every taut string
//! obeys. Prefixes that cannot carry a taut string are skipped, as are
//! prefixes strictly dominated by an earlier entry into the same cube.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::complex::{CubeComplex, CubeId, PointLocation, MAX_DIM};
use crate::graph::UNREACHABLE;

use super::bound::HyperplaneBound;
use super::norm::PNorm;
use super::solver::{Gallery, Site, SolverOptions};
use super::{MString, MetricError};

const BOX_TOL: f64 = 1e-12;
const DOMINANCE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
pub struct DistanceOptions {
    /// Multiplier on the segment cap `(n+2)(⌈U⌉+1)`.
    pub cap_factor: f64,
    /// Maximum number of gallery solves.
    pub max_evals: usize,
    pub solver: SolverOptions,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions {
            cap_factor: 1.0,
            max_evals: 1_000_000,
            solver: SolverOptions::default(),
        }
    }
}

/// A closed set: a union of boxes in maximal cubes (local coordinates).
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub boxes: Vec<(CubeId, Vec<(f64, f64)>)>,
}

impl Region {
    /// A single point, seen from every maximal cube containing it.
    pub fn point(c: &CubeComplex, p: &PointLocation) -> Result<Region, MetricError> {
        c.check_point(p)?;
        let boxes = c
            .maximal_cofaces(p.cube)
            .into_iter()
            .map(|m| {
                let x = c.point_in(p, m).expect("coface");
                (m, x.iter().map(|&v| (v, v)).collect())
            })
            .collect();
        Ok(Region { boxes })
    }

    fn boxes_in(&self, m: CubeId) -> impl Iterator<Item = &[(f64, f64)]> {
        self.boxes
            .iter()
            .filter(move |(k, _)| *k == m)
            .map(|(_, b)| b.as_slice())
    }
}

/// Result of a region search: length, gallery and site points.
#[derive(Debug, Clone)]
pub struct RegionPath {
    pub length: f64,
    pub cubes: Vec<CubeId>,
    pub sites: Vec<Site>,
    pub points: Vec<Vec<f64>>,
}

struct Node {
    key: f64,
    seq: u64,
    cubes: Vec<CubeId>,
    start: usize,
    points: Vec<Vec<f64>>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // reversed: BinaryHeap pops the smallest key, then the oldest node
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then(other.seq.cmp(&self.seq))
    }
}

fn box_within_face(c: &CubeComplex, b: &[(f64, f64)], face: CubeId, cube: CubeId) -> bool {
    let map = c.chart(face, cube).expect("face of cube");
    let free = map.free_mask();
    (0..b.len()).all(|l| {
        free >> l & 1 == 1 || {
            let v = map.fixed_value(l);
            (b[l].0 - v).abs() <= BOX_TOL && (b[l].1 - v).abs() <= BOX_TOL
        }
    })
}

/// Vertex-path length bound between the first boxes of two regions.
fn vertex_path_bound(
    c: &CubeComplex,
    a: &Region,
    b: &Region,
    p: PNorm,
) -> Result<f64, MetricError> {
    let near = |m: CubeId, bx: &[(f64, f64)]| {
        let x: Vec<f64> = bx.iter().map(|&(s, t)| 0.5 * (s + t)).collect();
        let idx = x
            .iter()
            .enumerate()
            .fold(0usize, |acc, (l, &v)| acc | usize::from(v >= 0.5) << l);
        let cost = p.norm(
            x.iter()
                .enumerate()
                .map(|(l, &v)| v - (idx >> l & 1) as f64),
        );
        (c.cube(m).corner(idx), cost)
    };
    let (ma, ba) = &a.boxes[0];
    let (mb, bb) = &b.boxes[0];
    let (va, ca) = near(*ma, ba);
    let (vb, cb) = near(*mb, bb);
    let g = c.graph();
    let d = g.bfs(g.pos(va).unwrap())[g.pos(vb).unwrap()];
    if d == UNREACHABLE {
        return Err(MetricError::Unreachable);
    }
    Ok(ca + d as f64 + cb)
}

fn segment_cap(n: usize, bound: f64, factor: f64) -> usize {
    (((n + 2) as f64) * (bound.ceil() + 1.0) * factor).ceil() as usize
}

/// Largest p-norm distance from `y` to a point of the box.
fn farthest(p: PNorm, y: &[f64], b: &[(f64, f64)]) -> f64 {
    p.norm(
        y.iter()
            .zip(b)
            .map(|(&v, &(s, t))| (v - s).abs().max((v - t).abs())),
    )
}

/// Distance between two regions, with the minimizing gallery.
pub fn region_distance(
    c: &CubeComplex,
    a: &Region,
    b: &Region,
    p: PNorm,
    opts: &DistanceOptions,
) -> Result<RegionPath, MetricError> {
    let n = c.dim();
    if n > MAX_DIM {
        return Err(MetricError::DimensionTooLarge(n));
    }
    if a.boxes.is_empty() || b.boxes.is_empty() {
        return Err(MetricError::Unreachable);
    }
    let bound_u = vertex_path_bound(c, a, b, p)?;
    let mut bound = HyperplaneBound::new(c, b, p);
    let mut best: Option<RegionPath> = None;
    let mut best_len = f64::INFINITY;
    let mut cap = segment_cap(n, bound_u, opts.cap_factor);
    let mut evals = 0usize;
    let mut seq = 0u64;
    let mut heap = BinaryHeap::new();
    // per cube: (reach cost, entry point in cube coordinates, prefix length)
    let mut entries: HashMap<CubeId, Vec<(f64, Vec<f64>, usize)>> = HashMap::new();
    for (s, (m, _)) in a.boxes.iter().enumerate() {
        heap.push(Node {
            key: 0.0,
            seq,
            cubes: vec![*m],
            start: s,
            points: Vec::new(),
        });
        seq += 1;
    }
    let block = |segments: usize| (segments / (n + 2)) as f64;

    while let Some(node) = heap.pop() {
        if node.key >= best_len {
            break;
        }
        let j = node.cubes.len() - 1;
        let last = node.cubes[j];
        let (m0, b0) = &a.boxes[node.start];
        let start = Site::from_box(*m0, b0);
        let entry_face = if j > 0 {
            c.meet(node.cubes[j - 1], last)
        } else {
            None
        };

        for bb in b.boxes_in(last) {
            if entry_face.is_some_and(|f| box_within_face(c, bb, f, last)) {
                continue;
            }
            let end = Site::from_box(last, bb);
            let g = Gallery::new(c, node.cubes.clone(), start.clone(), end)
                .expect("gallery cubes meet");
            let mut init = g.initial_points();
            init[..node.points.len()].clone_from_slice(&node.points);
            let (len, pts) = g.solve(p, Some(init), &opts.solver);
            evals += 1;
            if len < best_len {
                best_len = len;
                cap = cap.min(segment_cap(n, len, opts.cap_factor));
                best = Some(RegionPath {
                    length: len,
                    cubes: g.cubes.clone(),
                    sites: g.sites.clone(),
                    points: pts,
                });
            }
        }
        if node.cubes.len() >= cap {
            continue;
        }
        for (nb, face) in c.maximal_neighbors(last) {
            let entry_inside = match entry_face {
                Some(f) => c.is_face_of(f, nb),
                None => box_within_face(c, b0, face, last),
            };
            if entry_inside || (j > 0 && c.is_face_of(face, node.cubes[j - 1])) {
                continue;
            }
            let g = Gallery::new(c, node.cubes.clone(), start.clone(), Site::whole(c, face))
                .expect("gallery cubes meet");
            let mut init = g.initial_points();
            init[..node.points.len()].clone_from_slice(&node.points);
            let (cost, pts) = g.solve(p, Some(init), &opts.solver);
            evals += 1;
            if evals > opts.max_evals {
                return Err(MetricError::BudgetExceeded(opts.max_evals));
            }
            let rest = bound.as_mut().map_or(0.0, |h| h.remainder(face));
            let key = (cost + rest).max(node.key).max(block(node.cubes.len()));
            if key >= best_len {
                continue;
            }
            let map = c.chart(face, nb).expect("face of neighbour");
            let y = map.embed_point(pts.last().unwrap());
            let face_box = map.embed_box(&vec![(0.0, 1.0); map.face_dim()]);
            let seen = entries.entry(nb).or_default();
            let segs = node.cubes.len();
            if seen.iter().any(|(c1, y1, l1)| {
                *l1 <= segs && cost >= c1 + farthest(p, y1, &face_box) + DOMINANCE_MARGIN
            }) {
                continue;
            }
            seen.push((cost, y, segs));
            let mut cubes = node.cubes.clone();
            cubes.push(nb);
            heap.push(Node {
                key,
                seq,
                cubes,
                start: node.start,
                points: pts,
            });
            seq += 1;
        }
        if evals > opts.max_evals {
            return Err(MetricError::BudgetExceeded(opts.max_evals));
        }
    }
    best.ok_or(MetricError::Unreachable)
}

fn point_order(a: &PointLocation, b: &PointLocation) -> Ordering {
    a.cube.cmp(&b.cube).then_with(|| {
        a.coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// ℓp distance and a realizing string, with default options.
pub fn distance(
    c: &CubeComplex,
    a: &PointLocation,
    b: &PointLocation,
    p: PNorm,
) -> Result<(f64, MString), MetricError> {
    distance_with(c, a, b, p, &DistanceOptions::default())
}

pub fn distance_with(
    c: &CubeComplex,
    a: &PointLocation,
    b: &PointLocation,
    p: PNorm,
    opts: &DistanceOptions,
) -> Result<(f64, MString), MetricError> {
    let a = c.canonical_point(a)?;
    let b = c.canonical_point(b)?;
    if point_order(&a, &b) == Ordering::Greater {
        let (d, s) = distance_with(c, &b, &a, p, opts)?;
        return Ok((d, s.reversed()));
    }
    let path = region_distance(c, &Region::point(c, &a)?, &Region::point(c, &b)?, p, opts)?;
    let last = path.sites.len() - 1;
    let mut points = Vec::with_capacity(path.sites.len());
    for (i, (site, x)) in path.sites.iter().zip(&path.points).enumerate() {
        points.push(if i == 0 {
            a.clone()
        } else if i == last {
            b.clone()
        } else {
            c.canonical_point(&PointLocation::new(site.cube, x.clone()))?
        });
    }
    Ok((
        path.length,
        MString {
            points,
            carriers: path.cubes,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_and_strip() {
        let sq = CubeComplex::from_cubes(&[0, 1, 2, 3], &[vec![0, 1, 2, 3]]).unwrap();
        let q = sq.find(&[0, 1, 2, 3]).unwrap();
        let (d, s) = distance(
            &sq,
            &PointLocation::new(q, vec![0.0, 0.0]),
            &PointLocation::new(q, vec![1.0, 1.0]),
            PNorm::Inf,
        )
        .unwrap();
        assert_eq!(d, 1.0);
        assert_eq!(s.m(), 1);

        let strip =
            CubeComplex::from_cubes(&[0, 1, 2, 3, 4, 5], &[vec![0, 1, 3, 4], vec![1, 2, 4, 5]])
                .unwrap();
        let a = strip.vertex_point(0).unwrap();
        let b = strip.vertex_point(5).unwrap();
        let (d2, s) = distance(&strip, &a, &b, PNorm::Two).unwrap();
        assert!((d2 - 5f64.sqrt()).abs() < 1e-9, "{d2}");
        assert_eq!(s.points[0], a);
        assert_eq!(s.points.last(), Some(&b));
        let (dinf, _) = distance(&strip, &a, &b, PNorm::Inf).unwrap();
        assert!((dinf - 2.0).abs() < 1e-12);
        let (d1, _) = distance(&strip, &b, &a, PNorm::One).unwrap();
        assert!((d1 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn path_graph_distance() {
        let path =
            CubeComplex::from_cubes(&[0, 1, 2, 3], &[vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        let e = path.find(&[0, 1]).unwrap();
        let f = path.find(&[2, 3]).unwrap();
        let (d, s) = distance(
            &path,
            &PointLocation::new(e, vec![0.25]),
            &PointLocation::new(f, vec![0.5]),
            PNorm::Two,
        )
        .unwrap();
        assert!((d - 2.25).abs() < 1e-12);
        assert_eq!(s.m(), 3);
    }

    #[test]
    fn disconnected() {
        let c = CubeComplex::from_cubes(&[0, 1, 2, 3], &[vec![0, 1], vec![2, 3]]).unwrap();
        let r = distance(
            &c,
            &c.vertex_point(0).unwrap(),
            &c.vertex_point(3).unwrap(),
            PNorm::One,
        );
        assert_eq!(r.unwrap_err(), MetricError::Unreachable);
    }
}
