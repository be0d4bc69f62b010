//! Finite cube complexes: canonical cubes, face closure, gluing validation
//! and point locations.
//!
//! A cube of dimension `k` is stored as its `2^k` corners, where corner `i`
//! sits at the binary word `i` (bit `l` is the coordinate along axis `l`).
//! The canonical form puts the minimum-id corner at index 0 and orders the
//! axes by ascending id of corner 0's neighbor along each axis. Every
//! combinatorial cube therefore has exactly one canonical corner array.

use std::collections::{BTreeSet, HashMap};

use crate::bitset::VertexSet;
use crate::graph::{Graph, GraphError, VertexId};

pub type CubeId = usize;

/// Largest supported cube dimension.
pub const MAX_DIM: usize = 16;

/// Tolerance used when snapping coordinates onto faces.
pub const SNAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComplexError {
    #[error("cube #{index} is not an induced hypercube: {reason}")]
    NotAHypercube { index: usize, reason: String },
    #[error("cubes {a:?} and {b:?} intersect in a non-face")]
    BadGluing { a: Vec<VertexId>, b: Vec<VertexId> },
    #[error("dangling vertex {0}")]
    DanglingVertex(VertexId),
    #[error("dimension {0} exceeds the supported maximum of 16")]
    DimensionTooLarge(usize),
    #[error("coordinate {value} outside [0,1]")]
    OutOfRange { value: f64 },
    #[error("unknown cube id {0}")]
    UnknownCube(CubeId),
    #[error("coordinate count {got} does not match cube dimension {dim}")]
    DimensionMismatch { got: usize, dim: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A canonicalized cube.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    corners: Vec<VertexId>,
}

impl Cube {
    pub fn dim(&self) -> usize {
        self.corners.len().trailing_zeros() as usize
    }

    pub fn corners(&self) -> &[VertexId] {
        &self.corners
    }

    pub fn corner(&self, i: usize) -> VertexId {
        self.corners[i]
    }

    /// Index of a corner in the binary-word order.
    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.corners.iter().position(|&c| c == v)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.corners.contains(&v)
    }

    /// Edges of the cube as `(min, max)` label pairs.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let k = self.dim();
        let mut out = Vec::new();
        for i in 0..self.corners.len() {
            for l in 0..k {
                let j = i ^ (1 << l);
                if i < j {
                    let (a, b) = (self.corners[i], self.corners[j]);
                    out.push((a.min(b), a.max(b)));
                }
            }
        }
        out
    }

    /// The index pattern of a corner subset if it forms a face:
    /// `(base index, free axis mask)`.
    pub fn face_pattern(&self, subset: &[VertexId]) -> Option<(usize, usize)> {
        if subset.is_empty() || !subset.len().is_power_of_two() {
            return None;
        }
        let mut and = usize::MAX;
        let mut or = 0usize;
        for &v in subset {
            let i = self.index_of(v)?;
            and &= i;
            or |= i;
        }
        let free = and ^ or;
        if 1usize << free.count_ones() != subset.len() {
            return None;
        }
        Some((and, free))
    }
}

/// Canonicalizes a corner array given in binary-word order.
///
/// Returns the canonical corners and, for each canonical axis, the
/// originating axis and whether it was reflected.
pub fn canonicalize(raw: &[VertexId]) -> (Vec<VertexId>, Vec<(usize, bool)>) {
    let k = raw.len().trailing_zeros() as usize;
    let i0 = (0..raw.len()).min_by_key(|&i| raw[i]).unwrap_or(0);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&l| raw[i0 ^ (1 << l)]);
    let mut corners = Vec::with_capacity(raw.len());
    for j in 0..raw.len() {
        let mut idx = i0;
        for (a, &l) in order.iter().enumerate() {
            if j >> a & 1 == 1 {
                idx ^= 1 << l;
            }
        }
        corners.push(raw[idx]);
    }
    let transform = order.iter().map(|&l| (l, i0 >> l & 1 == 1)).collect();
    (corners, transform)
}

/// Spreads the low bits of `t` onto the set bits of `mask`.
pub(crate) fn spread(t: usize, mask: usize) -> usize {
    let mut out = 0;
    let mut bit = 0;
    let mut m = mask;
    while m != 0 {
        let l = m.trailing_zeros();
        if t >> bit & 1 == 1 {
            out |= 1 << l;
        }
        bit += 1;
        m &= m - 1;
    }
    out
}

/// Chart relating a face to a cube that contains it.
///
/// Face axis `a` runs along cube axis `axes[a].0`, reflected when
/// `axes[a].1`. Cube axes not hit by the face are fixed at the matching bit
/// of `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisMap {
    pub base: usize,
    pub axes: Vec<(usize, bool)>,
    pub cube_dim: usize,
}

impl AxisMap {
    /// Relates canonical `face` corners to canonical `cube` corners.
    pub fn relate(face: &[VertexId], cube: &[VertexId]) -> Option<AxisMap> {
        let pos = |v: VertexId| cube.iter().position(|&c| c == v);
        let fk = face.len().trailing_zeros() as usize;
        let cube_dim = cube.len().trailing_zeros() as usize;
        let idx0 = pos(face[0])?;
        let mut axes = Vec::with_capacity(fk);
        for a in 0..fk {
            let d = pos(face[1 << a])? ^ idx0;
            if d.count_ones() != 1 {
                return None;
            }
            let l = d.trailing_zeros() as usize;
            axes.push((l, idx0 >> l & 1 == 1));
        }
        let map = AxisMap {
            base: idx0,
            axes,
            cube_dim,
        };
        for (j, &v) in face.iter().enumerate() {
            if pos(v)? != map.cube_index(j) {
                return None;
            }
        }
        Some(map)
    }

    pub fn face_dim(&self) -> usize {
        self.axes.len()
    }

    /// Cube index of face corner `j`.
    pub fn cube_index(&self, j: usize) -> usize {
        let mut idx = self.base;
        for (a, &(l, _)) in self.axes.iter().enumerate() {
            if j >> a & 1 == 1 {
                idx ^= 1 << l;
            }
        }
        idx
    }

    pub fn free_mask(&self) -> usize {
        self.axes.iter().fold(0, |m, &(l, _)| m | 1 << l)
    }

    /// Value of a fixed cube axis on the face.
    pub fn fixed_value(&self, l: usize) -> f64 {
        (self.base >> l & 1) as f64
    }

    pub fn embed_point(&self, x: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = (0..self.cube_dim).map(|l| self.fixed_value(l)).collect();
        for (a, &(l, r)) in self.axes.iter().enumerate() {
            out[l] = if r { 1.0 - x[a] } else { x[a] };
        }
        out
    }

    /// Face coordinates of a cube point lying on the face, if it does.
    pub fn restrict_point(&self, y: &[f64], tol: f64) -> Option<Vec<f64>> {
        let free = self.free_mask();
        for (l, &v) in y.iter().enumerate() {
            if free >> l & 1 == 0 && (v - self.fixed_value(l)).abs() > tol {
                return None;
            }
        }
        Some(
            self.axes
                .iter()
                .map(|&(l, r)| if r { 1.0 - y[l] } else { y[l] })
                .collect(),
        )
    }

    pub fn embed_box(&self, b: &[(f64, f64)]) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = (0..self.cube_dim)
            .map(|l| (self.fixed_value(l), self.fixed_value(l)))
            .collect();
        for (a, &(l, r)) in self.axes.iter().enumerate() {
            out[l] = if r {
                (1.0 - b[a].1, 1.0 - b[a].0)
            } else {
                b[a]
            };
        }
        out
    }

    /// Trace of a cube box on the face; `None` if they miss.
    pub fn restrict_box(&self, b: &[(f64, f64)], tol: f64) -> Option<Vec<(f64, f64)>> {
        let free = self.free_mask();
        for (l, &(s, t)) in b.iter().enumerate() {
            if free >> l & 1 == 0 {
                let v = self.fixed_value(l);
                if v < s - tol || v > t + tol {
                    return None;
                }
            }
        }
        Some(
            self.axes
                .iter()
                .map(|&(l, r)| {
                    if r {
                        (1.0 - b[l].1, 1.0 - b[l].0)
                    } else {
                        b[l]
                    }
                })
                .collect(),
        )
    }
}

/// A point of the geometric realization: a cube and local coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointLocation {
    pub cube: CubeId,
    pub coords: Vec<f64>,
}

impl PointLocation {
    pub fn new(cube: CubeId, coords: Vec<f64>) -> Self {
        PointLocation { cube, coords }
    }
}

/// Two maximal cubes meeting in a nonempty common face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubeAdjacency {
    pub a: CubeId,
    pub b: CubeId,
    pub face: CubeId,
}

#[derive(Clone)]
pub struct CubeComplex {
    graph: Graph,
    cubes: Vec<Cube>,
    sorted: Vec<Vec<VertexId>>,
    index: HashMap<Vec<VertexId>, CubeId>,
    vertex_cubes: Vec<Vec<CubeId>>,
    maximal: Vec<CubeId>,
    is_max: Vec<bool>,
    dim: usize,
}

impl std::fmt::Debug for CubeComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CubeComplex")
            .field("vertices", &self.graph.ids())
            .field("maximal", &self.maximal_corner_arrays())
            .finish()
    }
}

impl PartialEq for CubeComplex {
    fn eq(&self, other: &Self) -> bool {
        self.graph.ids() == other.graph.ids() && self.cubes == other.cubes
    }
}

impl CubeComplex {
    /// Builds and validates a complex from raw corner arrays.
    pub fn from_cubes(
        vertices: &[VertexId],
        raw_cubes: &[Vec<VertexId>],
    ) -> Result<Self, ComplexError> {
        let declared: BTreeSet<VertexId> = vertices.iter().copied().collect();
        if declared.len() != vertices.len() {
            let mut seen = BTreeSet::new();
            let dup = vertices
                .iter()
                .find(|v| !seen.insert(**v))
                .copied()
                .unwrap_or(0);
            return Err(GraphError::DuplicateVertex(dup).into());
        }
        let mut edges = Vec::new();
        for (index, raw) in raw_cubes.iter().enumerate() {
            let bad = |reason: &str| ComplexError::NotAHypercube {
                index,
                reason: reason.to_string(),
            };
            if raw.is_empty() || !raw.len().is_power_of_two() {
                return Err(bad("corner count is not a power of two"));
            }
            let k = raw.len().trailing_zeros() as usize;
            if k > MAX_DIM {
                return Err(ComplexError::DimensionTooLarge(k));
            }
            if let Some(&v) = raw.iter().find(|v| !declared.contains(v)) {
                return Err(ComplexError::DanglingVertex(v));
            }
            let distinct: BTreeSet<_> = raw.iter().collect();
            if distinct.len() != raw.len() {
                return Err(bad("repeated corner"));
            }
            for i in 0..raw.len() {
                for l in 0..k {
                    let j = i ^ (1 << l);
                    if i < j {
                        edges.push((raw[i], raw[j]));
                    }
                }
            }
        }
        let graph = Graph::new(vertices.iter().copied(), edges)?;
        if graph.len() > 1 {
            if let Some(p) = (0..graph.len()).find(|&p| graph.degree(p) == 0) {
                return Err(ComplexError::DanglingVertex(graph.id(p)));
            }
        }
        let mut canonical: Vec<Vec<VertexId>> = Vec::with_capacity(raw_cubes.len());
        let mut by_set: HashMap<Vec<VertexId>, usize> = HashMap::new();
        for (index, raw) in raw_cubes.iter().enumerate() {
            let k = raw.len().trailing_zeros() as usize;
            let pos: Vec<usize> = raw.iter().map(|&v| graph.pos(v).unwrap()).collect();
            let mut count = 0;
            for a in 0..pos.len() {
                for b in a + 1..pos.len() {
                    if graph.has_edge(pos[a], pos[b]) {
                        count += 1;
                    }
                }
            }
            if count != k << k >> 1 {
                return Err(ComplexError::NotAHypercube {
                    index,
                    reason: format!(
                        "induced subgraph has {count} edges, expected {}",
                        k << k >> 1
                    ),
                });
            }
            let (c, _) = canonicalize(raw);
            let mut key = c.clone();
            key.sort_unstable();
            match by_set.get(&key) {
                Some(&prev) if canonical[prev] != c => {
                    return Err(ComplexError::NotAHypercube {
                        index,
                        reason: "same corner set as another cube with a different structure".into(),
                    });
                }
                Some(_) => {}
                None => {
                    by_set.insert(key, canonical.len());
                    canonical.push(c);
                }
            }
        }
        let complex = Self::assemble(graph, canonical);
        complex.check_gluing()?;
        Ok(complex)
    }

    /// Assembles a complex from canonical cubes without validation; faces
    /// are added automatically.
    pub(crate) fn assemble(graph: Graph, cubes: Vec<Vec<VertexId>>) -> Self {
        let mut all: HashMap<Vec<VertexId>, Vec<VertexId>> = HashMap::new();
        for p in 0..graph.len() {
            all.insert(vec![graph.id(p)], vec![graph.id(p)]);
        }
        for (a, b) in graph.edges() {
            all.insert(vec![a, b], vec![a, b]);
        }
        for c in &cubes {
            let k = c.len().trailing_zeros() as usize;
            let mut key = c.clone();
            key.sort_unstable();
            if all.contains_key(&key) {
                continue;
            }
            let full = (1usize << k) - 1;
            // enumerate faces by free mask and base
            for free in 0..=full {
                let fixed = full & !free;
                let mut base = fixed;
                loop {
                    let raw: Vec<VertexId> = (0..1usize << free.count_ones())
                        .map(|t| c[base | spread(t, free)])
                        .collect();
                    let mut fkey = raw.clone();
                    fkey.sort_unstable();
                    all.entry(fkey).or_insert_with(|| canonicalize(&raw).0);
                    if base == 0 {
                        break;
                    }
                    base = (base - 1) & fixed;
                }
            }
        }
        let mut list: Vec<(usize, Vec<VertexId>, Vec<VertexId>)> =
            all.into_iter().map(|(key, c)| (c.len(), key, c)).collect();
        list.sort();
        let mut cubes_out = Vec::with_capacity(list.len());
        let mut sorted = Vec::with_capacity(list.len());
        let mut index = HashMap::with_capacity(list.len());
        let mut vertex_cubes = vec![Vec::new(); graph.len()];
        let mut dim = 0;
        for (id, (_, key, c)) in list.into_iter().enumerate() {
            for &v in &c {
                vertex_cubes[graph.pos(v).expect("cube corner is a vertex")].push(id);
            }
            dim = dim.max(c.len().trailing_zeros() as usize);
            index.insert(key.clone(), id);
            sorted.push(key);
            cubes_out.push(Cube { corners: c });
        }
        let mut is_max = vec![true; cubes_out.len()];
        for (id, cube) in cubes_out.iter().enumerate() {
            let v = graph.pos(cube.corners[0]).unwrap();
            for &other in &vertex_cubes[v] {
                if other != id
                    && cubes_out[other].corners.len() > cube.corners.len()
                    && is_sorted_subset(&sorted[id], &sorted[other])
                {
                    is_max[id] = false;
                    break;
                }
            }
        }
        let maximal = (0..cubes_out.len()).filter(|&i| is_max[i]).collect();
        CubeComplex {
            graph,
            cubes: cubes_out,
            sorted,
            index,
            vertex_cubes,
            maximal,
            is_max,
            dim,
        }
    }

    /// Gluing condition: any two maximal cubes meet in a common face or not at all.
    pub fn check_gluing(&self) -> Result<(), ComplexError> {
        for &a in &self.maximal {
            for b in self.maximal_neighbors_raw(a) {
                if b <= a {
                    continue;
                }
                let common = sorted_intersection(&self.sorted[a], &self.sorted[b]);
                let ok = self.index.contains_key(&common)
                    && self.cubes[a].face_pattern(&common).is_some()
                    && self.cubes[b].face_pattern(&common).is_some();
                if !ok {
                    return Err(ComplexError::BadGluing {
                        a: self.cubes[a].corners.clone(),
                        b: self.cubes[b].corners.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    fn maximal_neighbors_raw(&self, a: CubeId) -> Vec<CubeId> {
        let mut out: Vec<CubeId> = self.cubes[a]
            .corners
            .iter()
            .flat_map(|&v| {
                self.vertex_cubes[self.graph.pos(v).unwrap()]
                    .iter()
                    .copied()
            })
            .filter(|&c| self.is_max[c] && c != a)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Subcomplex induced on a set of vertex positions.
    pub fn induced(&self, keep: &VertexSet) -> CubeComplex {
        let graph = self.graph.induced(keep);
        let cubes = self
            .maximal
            .iter()
            .flat_map(|&m| {
                // maximal cubes of the induced complex are faces of old maximal cubes
                self.faces_within(m, keep)
            })
            .collect();
        Self::assemble(graph, cubes)
    }

    /// Largest faces of cube `m` whose corners all lie in `keep`.
    fn faces_within(&self, m: CubeId, keep: &VertexSet) -> Vec<Vec<VertexId>> {
        let c = &self.cubes[m].corners;
        let inside: Vec<bool> = c
            .iter()
            .map(|&v| keep.contains(self.graph.pos(v).unwrap()))
            .collect();
        if inside.iter().all(|&b| b) {
            return vec![c.clone()];
        }
        let k = self.cubes[m].dim();
        let full = (1usize << k) - 1;
        let mut found: Vec<(usize, usize)> = Vec::new();
        // descending face dimension
        for fd in (0..k).rev() {
            for free in (0..=full).filter(|f: &usize| f.count_ones() as usize == fd) {
                let fixed = full & !free;
                let mut base = fixed;
                loop {
                    let all_in = (0..1usize << fd).all(|t| inside[base | spread(t, free)]);
                    let covered = found
                        .iter()
                        .any(|&(b2, f2)| free & !f2 == 0 && (base ^ b2) & !f2 == 0);
                    if all_in && !covered {
                        found.push((base, free));
                    }
                    if base == 0 {
                        break;
                    }
                    base = (base - 1) & fixed;
                }
            }
        }
        found
            .into_iter()
            .map(|(base, free)| {
                let raw: Vec<VertexId> = (0..1usize << free.count_ones())
                    .map(|t| c[base | spread(t, free)])
                    .collect();
                canonicalize(&raw).0
            })
            .collect()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        self.graph.ids()
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.len()
    }

    pub fn num_cubes(&self) -> usize {
        self.cubes.len()
    }

    pub fn cube(&self, id: CubeId) -> &Cube {
        &self.cubes[id]
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn cubes_of_dim(&self, k: usize) -> impl Iterator<Item = CubeId> + '_ {
        (0..self.cubes.len()).filter(move |&i| self.cubes[i].dim() == k)
    }

    pub fn count_of_dim(&self, k: usize) -> usize {
        self.cubes_of_dim(k).count()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn maximal(&self) -> &[CubeId] {
        &self.maximal
    }

    pub fn is_maximal(&self, id: CubeId) -> bool {
        self.is_max[id]
    }

    pub fn maximal_corner_arrays(&self) -> Vec<Vec<VertexId>> {
        self.maximal
            .iter()
            .map(|&m| self.cubes[m].corners.clone())
            .collect()
    }

    /// Corner arrays of every cube of dimension ≥ 1 in canonical order.
    pub fn all_corner_arrays(&self) -> Vec<Vec<VertexId>> {
        self.cubes
            .iter()
            .filter(|c| c.dim() > 0)
            .map(|c| c.corners.clone())
            .collect()
    }

    /// Cube with exactly this corner set (any order).
    pub fn find(&self, corners: &[VertexId]) -> Option<CubeId> {
        let mut key = corners.to_vec();
        key.sort_unstable();
        self.index.get(&key).copied()
    }

    pub fn vertex_cube(&self, v: VertexId) -> Option<CubeId> {
        self.find(&[v])
    }

    /// Sorted corner labels of a cube.
    pub fn corner_set(&self, id: CubeId) -> &[VertexId] {
        &self.sorted[id]
    }

    /// Whether cube `small` is a face of cube `big`.
    pub fn is_face_of(&self, small: CubeId, big: CubeId) -> bool {
        is_sorted_subset(&self.sorted[small], &self.sorted[big])
    }

    /// All cubes containing cube `q` (including `q`).
    pub fn cofaces(&self, q: CubeId) -> Vec<CubeId> {
        let v = self.graph.pos(self.cubes[q].corners[0]).unwrap();
        self.vertex_cubes[v]
            .iter()
            .copied()
            .filter(|&c| is_sorted_subset(&self.sorted[q], &self.sorted[c]))
            .collect()
    }

    pub fn maximal_cofaces(&self, q: CubeId) -> Vec<CubeId> {
        self.cofaces(q)
            .into_iter()
            .filter(|&c| self.is_max[c])
            .collect()
    }

    /// Cubes containing a vertex (by label).
    pub fn cubes_at(&self, v: VertexId) -> &[CubeId] {
        &self.vertex_cubes[self.graph.pos(v).expect("known vertex")]
    }

    /// Common face of two cubes, if they meet.
    pub fn meet(&self, a: CubeId, b: CubeId) -> Option<CubeId> {
        let common = sorted_intersection(&self.sorted[a], &self.sorted[b]);
        if common.is_empty() {
            None
        } else {
            self.index.get(&common).copied()
        }
    }

    /// Chart of `face` inside `cube`.
    pub fn chart(&self, face: CubeId, cube: CubeId) -> Option<AxisMap> {
        AxisMap::relate(&self.cubes[face].corners, &self.cubes[cube].corners)
    }

    /// Adjacent pairs of maximal cubes with their common face.
    pub fn cube_adjacency(&self) -> Vec<CubeAdjacency> {
        let mut out = Vec::new();
        for &a in &self.maximal {
            for b in self.maximal_neighbors_raw(a) {
                if a < b {
                    if let Some(face) = self.meet(a, b) {
                        out.push(CubeAdjacency { a, b, face });
                    }
                }
            }
        }
        out
    }

    /// Maximal neighbours of a maximal cube with the shared face.
    pub fn maximal_neighbors(&self, a: CubeId) -> Vec<(CubeId, CubeId)> {
        self.maximal_neighbors_raw(a)
            .into_iter()
            .filter_map(|b| self.meet(a, b).map(|f| (b, f)))
            .collect()
    }

    pub fn check_point(&self, p: &PointLocation) -> Result<(), ComplexError> {
        let cube = self
            .cubes
            .get(p.cube)
            .ok_or(ComplexError::UnknownCube(p.cube))?;
        if cube.dim() != p.coords.len() {
            return Err(ComplexError::DimensionMismatch {
                got: p.coords.len(),
                dim: cube.dim(),
            });
        }
        if let Some(&value) = p
            .coords
            .iter()
            .find(|&&x| !(-SNAP_TOL..=1.0 + SNAP_TOL).contains(&x) || x.is_nan())
        {
            return Err(ComplexError::OutOfRange { value });
        }
        Ok(())
    }

    /// Moves a point to the minimal face carrying it.
    pub fn canonical_point(&self, p: &PointLocation) -> Result<PointLocation, ComplexError> {
        self.check_point(p)?;
        let cube = &self.cubes[p.cube];
        let mut base = 0usize;
        let mut free = 0usize;
        for (l, &x) in p.coords.iter().enumerate() {
            if x <= SNAP_TOL {
            } else if x >= 1.0 - SNAP_TOL {
                base |= 1 << l;
            } else {
                free |= 1 << l;
            }
        }
        let raw: Vec<VertexId> = (0..1usize << free.count_ones())
            .map(|t| cube.corners[base | spread(t, free)])
            .collect();
        let free_axes: Vec<usize> = (0..cube.dim()).filter(|l| free >> l & 1 == 1).collect();
        let (corners, transform) = canonicalize(&raw);
        let id = self.find(&corners).expect("faces are stored");
        let coords = transform
            .iter()
            .map(|&(a, r)| {
                let x = p.coords[free_axes[a]];
                if r {
                    1.0 - x
                } else {
                    x
                }
            })
            .collect();
        Ok(PointLocation { cube: id, coords })
    }

    /// Coordinates of a point inside a cube containing its carrier.
    pub fn point_in(&self, p: &PointLocation, cube: CubeId) -> Option<Vec<f64>> {
        if p.cube == cube {
            return Some(p.coords.clone());
        }
        self.chart(p.cube, cube).map(|m| m.embed_point(&p.coords))
    }

    /// A vertex as a point.
    pub fn vertex_point(&self, v: VertexId) -> Option<PointLocation> {
        self.vertex_cube(v).map(|c| PointLocation {
            cube: c,
            coords: vec![],
        })
    }
}

pub(crate) fn is_sorted_subset(small: &[VertexId], big: &[VertexId]) -> bool {
    small.len() <= big.len() && small.iter().all(|v| big.binary_search(v).is_ok())
}

pub(crate) fn sorted_intersection(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    a.iter()
        .copied()
        .filter(|v| b.binary_search(v).is_ok())
        .collect()
}

/// Complex whose cubes are all induced hypercube subgraphs of `g`.
pub fn completion_from_graph(g: &Graph) -> CubeComplex {
    let mut found: HashMap<Vec<VertexId>, Vec<VertexId>> = HashMap::new();
    let mut layer: Vec<Vec<VertexId>> = g.ids().iter().map(|&v| vec![v]).collect();
    let mut k = 0;
    while !layer.is_empty() && k < MAX_DIM {
        let mut next: Vec<Vec<VertexId>> = Vec::new();
        for a in &layer {
            let apos: Vec<usize> = a.iter().map(|&v| g.pos(v).unwrap()).collect();
            for &w in g.neighbors(apos[0]) {
                if apos.contains(&w) {
                    continue;
                }
                let mut b = vec![usize::MAX; apos.len()];
                b[0] = w;
                extend_opposite(g, &apos, &mut b, 1, &mut |b: &[usize]| {
                    let mut raw: Vec<VertexId> = a.clone();
                    raw.extend(b.iter().map(|&p| g.id(p)));
                    let mut key = raw.clone();
                    key.sort_unstable();
                    if !found.contains_key(&key) && is_induced_cube(g, &raw) {
                        let c = canonicalize(&raw).0;
                        found.insert(key, c.clone());
                        next.push(c);
                    }
                });
            }
        }
        next.sort();
        layer = next;
        k += 1;
    }
    CubeComplex::assemble(g.clone(), found.into_values().collect())
}

fn extend_opposite(
    g: &Graph,
    a: &[usize],
    b: &mut Vec<usize>,
    i: usize,
    emit: &mut dyn FnMut(&[usize]),
) {
    if i == a.len() {
        emit(b);
        return;
    }
    let prev = b[i & (i - 1)];
    let candidates: Vec<usize> = g
        .neighbors(a[i])
        .iter()
        .copied()
        .filter(|&c| g.has_edge(c, prev) && !a.contains(&c) && !b[..i].contains(&c))
        .collect();
    for c in candidates {
        let ok = (0..usize::BITS as usize)
            .filter(|l| i >> l & 1 == 1)
            .all(|l| g.has_edge(c, b[i ^ (1 << l)]));
        if ok {
            b[i] = c;
            extend_opposite(g, a, b, i + 1, emit);
        }
    }
    b[i] = usize::MAX;
}

fn is_induced_cube(g: &Graph, raw: &[VertexId]) -> bool {
    let k = raw.len().trailing_zeros() as usize;
    let pos: Vec<usize> = raw.iter().map(|&v| g.pos(v).unwrap()).collect();
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            let adjacent = (i ^ j).count_ones() == 1;
            if g.has_edge(pos[i], pos[j]) != adjacent {
                return false;
            }
        }
    }
    k <= MAX_DIM
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> CubeComplex {
        CubeComplex::from_cubes(&[0, 1, 2, 3], &[vec![0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn canonical_form_is_unique() {
        // the same square written from different corners and axis orders
        let a = canonicalize(&[3, 1, 2, 0]).0;
        let b = canonicalize(&[0, 2, 1, 3]).0;
        let c = canonicalize(&[1, 0, 3, 2]).0;
        assert_eq!(a, vec![0, 1, 2, 3]);
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn single_square() {
        let c = square();
        assert_eq!(c.count_of_dim(0), 4);
        assert_eq!(c.count_of_dim(1), 4);
        assert_eq!(c.count_of_dim(2), 1);
        assert_eq!(c.maximal().len(), 1);
        // vertices come first and keep their order
        assert_eq!(c.vertex_cube(2), Some(2));
    }

    #[test]
    fn single_vertex_is_valid() {
        let c = CubeComplex::from_cubes(&[5], &[]).unwrap();
        assert_eq!(c.num_vertices(), 1);
        assert_eq!(c.dim(), 0);
        assert_eq!(c.maximal(), &[0]);
    }

    #[test]
    fn non_face_intersection_is_bad_gluing() {
        // squares 0-1-2-3 and 0-4-2-5 share the two opposite corners 0 and 2
        let err =
            CubeComplex::from_cubes(&[0, 1, 2, 3, 4, 5], &[vec![0, 1, 3, 2], vec![0, 4, 5, 2]])
                .unwrap_err();
        assert!(matches!(err, ComplexError::BadGluing { .. }), "{err:?}");
    }

    #[test]
    fn diagonal_makes_non_induced_square() {
        let err =
            CubeComplex::from_cubes(&[0, 1, 2, 3], &[vec![0, 1, 2, 3], vec![0, 3]]).unwrap_err();
        assert!(matches!(err, ComplexError::NotAHypercube { index: 0, .. }));
    }

    #[test]
    fn dangling_vertex() {
        let err = CubeComplex::from_cubes(&[0, 1, 2], &[vec![0, 1]]).unwrap_err();
        assert_eq!(err, ComplexError::DanglingVertex(2));
        let err = CubeComplex::from_cubes(&[0, 1], &[vec![0, 7]]).unwrap_err();
        assert_eq!(err, ComplexError::DanglingVertex(7));
    }

    #[test]
    fn boundary_point_drops_to_edge() {
        let c = square();
        let sq = c.find(&[0, 1, 2, 3]).unwrap();
        let p = c
            .canonical_point(&PointLocation::new(sq, vec![0.5, 0.0]))
            .unwrap();
        assert_eq!(c.cube(p.cube).corners(), &[0, 1]);
        assert_eq!(p.coords, vec![0.5]);
        let q = c
            .canonical_point(&PointLocation::new(sq, vec![0.3, 0.7]))
            .unwrap();
        assert_eq!(q, PointLocation::new(sq, vec![0.3, 0.7]));
        assert!(matches!(
            c.canonical_point(&PointLocation::new(sq, vec![1.5, 0.0])),
            Err(ComplexError::OutOfRange { .. })
        ));
    }

    #[test]
    fn shared_edge_from_both_sides() {
        // strip: squares [0,1,3,4] and [1,2,4,5]
        let c = CubeComplex::from_cubes(&[0, 1, 2, 3, 4, 5], &[vec![0, 1, 3, 4], vec![1, 2, 4, 5]])
            .unwrap();
        let left = c.find(&[0, 1, 3, 4]).unwrap();
        let right = c.find(&[1, 2, 4, 5]).unwrap();
        let a = c
            .canonical_point(&PointLocation::new(left, vec![1.0, 0.25]))
            .unwrap();
        let b = c
            .canonical_point(&PointLocation::new(right, vec![0.0, 0.25]))
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(c.cube(a.cube).corners(), &[1, 4]);
    }

    #[test]
    fn adjacency_via_edge_and_vertex() {
        let c = CubeComplex::from_cubes(
            &[0, 1, 2, 3, 4, 5, 6, 7, 8],
            &[vec![0, 1, 2, 3], vec![1, 4, 3, 5], vec![5, 6, 7, 8]],
        )
        .unwrap();
        let adj = c.cube_adjacency();
        assert_eq!(adj.len(), 2);
        let dims: Vec<usize> = adj.iter().map(|a| c.cube(a.face).dim()).collect();
        assert!(dims.contains(&1) && dims.contains(&0));
    }

    #[test]
    fn completion_of_four_cycle_and_tree() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c = completion_from_graph(&g);
        assert_eq!(c.count_of_dim(2), 1);
        let t = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let c = completion_from_graph(&t);
        assert_eq!(c.dim(), 1);
        assert_eq!(c.maximal().len(), 3);
    }

    #[test]
    fn chart_embeds_face() {
        let c = square();
        let sq = c.find(&[0, 1, 2, 3]).unwrap();
        let edge = c.find(&[1, 3]).unwrap();
        let m = c.chart(edge, sq).unwrap();
        assert_eq!(m.embed_point(&[0.25]), vec![1.0, 0.25]);
        assert_eq!(m.restrict_point(&[1.0, 0.4], 1e-12), Some(vec![0.4]));
        assert_eq!(m.restrict_point(&[0.5, 0.4], 1e-12), None);
    }
}
