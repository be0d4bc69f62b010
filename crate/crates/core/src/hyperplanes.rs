//! Hyperplanes (square-relation classes of edges), halfspaces, crossing
//! graph, width and extremality.

use std::collections::HashMap;

use crate::bitset::VertexSet;
use crate::coloring::{chromatic_exact, color_greedy, Coloring, ColoringError};
use crate::complex::CubeComplex;
use crate::graph::{Graph, GraphError, VertexId};
use crate::median::is_cat0;

pub type HyperplaneId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HyperplaneError {
    #[error("hyperplane {0} does not split the graph into exactly two components")]
    NotTwoComponents(HyperplaneId),
    #[error("complex is not CAT(0)")]
    NotCat0,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    pub id: HyperplaneId,
    /// Dual edges as `(min, max)` labels, ascending.
    pub dual_edges: Vec<(VertexId, VertexId)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub hyperplane: HyperplaneId,
    pub side: u8,
    pub vertices: Vec<VertexId>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Square-relation classes ordered by their minimum edge.
pub fn compute_hyperplanes(c: &CubeComplex) -> Vec<Hyperplane> {
    let edges = c.graph().edges();
    let index: HashMap<(VertexId, VertexId), usize> =
        edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let key = |a: VertexId, b: VertexId| index[&(a.min(b), a.max(b))];
    let mut uf = UnionFind::new(edges.len());
    for sq in c.cubes_of_dim(2) {
        let k = c.cube(sq).corners();
        uf.union(key(k[0], k[1]), key(k[2], k[3]));
        uf.union(key(k[0], k[2]), key(k[1], k[3]));
    }
    // edges are sorted, so the first edge seen in a class is its minimum
    let mut class_of_root: HashMap<usize, usize> = HashMap::new();
    let mut out: Vec<Hyperplane> = Vec::new();
    for (i, &e) in edges.iter().enumerate() {
        let r = uf.find(i);
        let id = *class_of_root.entry(r).or_insert_with(|| {
            out.push(Hyperplane {
                id: out.len(),
                dual_edges: Vec::new(),
            });
            out.len() - 1
        });
        out[id].dual_edges.push(e);
    }
    out
}

/// Hyperplanes of a complex with halfspace bitsets and crossing graph.
#[derive(Debug, Clone)]
pub struct HyperplaneSystem {
    pub hyperplanes: Vec<Hyperplane>,
    /// `sides[h][s]` are vertex positions of side `s`.
    sides: Vec<[VertexSet; 2]>,
    crossing: Graph,
    edge_class: HashMap<(VertexId, VertexId), HyperplaneId>,
    ids: Vec<VertexId>,
}

impl HyperplaneSystem {
    /// Builds the system without checking CAT(0); halfspaces must still be two components.
    pub fn new(c: &CubeComplex) -> Result<Self, HyperplaneError> {
        let g = c.graph();
        let hyperplanes = compute_hyperplanes(c);
        let mut sides = Vec::with_capacity(hyperplanes.len());
        let mut edge_class = HashMap::new();
        for h in &hyperplanes {
            let cut: Vec<(usize, usize)> = h
                .dual_edges
                .iter()
                .map(|&(a, b)| (g.pos(a).unwrap(), g.pos(b).unwrap()))
                .collect();
            let comps = g.components_without(&cut);
            if comps.len() != 2 {
                return Err(HyperplaneError::NotTwoComponents(h.id));
            }
            let first = cut[0].0.min(cut[0].1);
            let [a, b]: [VertexSet; 2] = comps.try_into().unwrap();
            sides.push(if a.contains(first) { [a, b] } else { [b, a] });
            for &e in &h.dual_edges {
                edge_class.insert(e, h.id);
            }
        }
        let mut crossings = Vec::new();
        for sq in c.cubes_of_dim(2) {
            let k = c.cube(sq).corners();
            let e = |a: VertexId, b: VertexId| edge_class[&(a.min(b), a.max(b))];
            let (h1, h2) = (e(k[0], k[1]), e(k[0], k[2]));
            if h1 != h2 {
                crossings.push((h1.min(h2) as u32, h1.max(h2) as u32));
            }
        }
        let crossing = Graph::from_edges(hyperplanes.len() as u32, &crossings)?;
        Ok(HyperplaneSystem {
            hyperplanes,
            sides,
            crossing,
            edge_class,
            ids: g.ids().to_vec(),
        })
    }

    /// Builds the system after confirming the complex is CAT(0).
    pub fn for_cat0(c: &CubeComplex) -> Result<Self, HyperplaneError> {
        if !is_cat0(c).is_cat0 {
            return Err(HyperplaneError::NotCat0);
        }
        Self::new(c)
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn side_set(&self, h: HyperplaneId, side: u8) -> &VertexSet {
        &self.sides[h][side as usize]
    }

    pub fn halfspace(&self, h: HyperplaneId, side: u8) -> Halfspace {
        Halfspace {
            hyperplane: h,
            side,
            vertices: self.side_set(h, side).iter().map(|p| self.ids[p]).collect(),
        }
    }

    pub fn halfspaces(&self, h: HyperplaneId) -> (Halfspace, Halfspace) {
        (self.halfspace(h, 0), self.halfspace(h, 1))
    }

    /// Hyperplane dual to an edge.
    pub fn class_of_edge(&self, a: VertexId, b: VertexId) -> Option<HyperplaneId> {
        self.edge_class.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn crossing_graph(&self) -> &Graph {
        &self.crossing
    }

    /// Longest chain of strictly nested halfspaces.
    pub fn width(&self) -> usize {
        let mut all: Vec<&VertexSet> = self.sides.iter().flat_map(|s| s.iter()).collect();
        all.sort_by_key(|s| s.count());
        let mut best = vec![1usize; all.len()];
        for i in 0..all.len() {
            for j in 0..i {
                if all[j].is_proper_subset(all[i]) {
                    best[i] = best[i].max(best[j] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }

    fn is_minimal(&self, h: HyperplaneId, side: u8) -> bool {
        let s = self.side_set(h, side);
        !self
            .sides
            .iter()
            .flat_map(|p| p.iter())
            .any(|t| t.is_proper_subset(s))
    }

    /// Extremal hyperplanes with their chosen minimal side.
    pub fn extremal(&self) -> Vec<(HyperplaneId, u8)> {
        let mut out = Vec::new();
        for h in 0..self.len() {
            let m = [self.is_minimal(h, 0), self.is_minimal(h, 1)];
            let side = match m {
                [true, true] => {
                    let key = |s: u8| (self.side_set(h, s).count(), self.side_set(h, s).first());
                    if key(1) < key(0) {
                        1
                    } else {
                        0
                    }
                }
                [true, false] => 0,
                [false, true] => 1,
                [false, false] => continue,
            };
            out.push((h, side));
        }
        out
    }

    /// Hyperplanes with `u` and `v` on opposite sides.
    pub fn separating(
        &self,
        u: VertexId,
        v: VertexId,
    ) -> Result<Vec<HyperplaneId>, HyperplaneError> {
        let pos = |x: VertexId| {
            self.ids
                .binary_search(&x)
                .map_err(|_| HyperplaneError::Graph(GraphError::UnknownVertex(x)))
        };
        let (pu, pv) = (pos(u)?, pos(v)?);
        Ok((0..self.len())
            .filter(|&h| self.sides[h][0].contains(pu) != self.sides[h][0].contains(pv))
            .collect())
    }

    pub fn color_greedy(&self) -> Coloring {
        color_greedy(&self.crossing)
    }

    pub fn chromatic_exact(&self, budget: u64) -> Result<(usize, Coloring), HyperplaneError> {
        Ok(chromatic_exact(&self.crossing, budget)?)
    }
}

pub fn halfspaces(
    c: &CubeComplex,
    h: HyperplaneId,
) -> Result<(Halfspace, Halfspace), HyperplaneError> {
    Ok(HyperplaneSystem::new(c)?.halfspaces(h))
}

pub fn crossing_graph(c: &CubeComplex) -> Result<Graph, HyperplaneError> {
    Ok(HyperplaneSystem::new(c)?.crossing)
}

pub fn width(c: &CubeComplex) -> Result<usize, HyperplaneError> {
    Ok(HyperplaneSystem::for_cat0(c)?.width())
}

pub fn extremal_hyperplanes(
    c: &CubeComplex,
) -> Result<Vec<(Hyperplane, Halfspace)>, HyperplaneError> {
    let sys = HyperplaneSystem::for_cat0(c)?;
    Ok(sys
        .extremal()
        .into_iter()
        .map(|(h, s)| (sys.hyperplanes[h].clone(), sys.halfspace(h, s)))
        .collect())
}

pub fn separating_hyperplanes(
    c: &CubeComplex,
    u: VertexId,
    v: VertexId,
) -> Result<Vec<HyperplaneId>, HyperplaneError> {
    HyperplaneSystem::for_cat0(c)?.separating(u, v)
}
