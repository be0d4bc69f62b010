//! Median-graph recognition, intervals, gates and convexity, plus the
//! combinatorial CAT(0) test for cube complexes.

use std::collections::HashMap;

use crate::bitset::VertexSet;
use crate::complex::{completion_from_graph, CubeComplex, CubeId};
use crate::graph::{DistanceMatrix, Graph, GraphError, VertexId, UNREACHABLE};

/// Graphs up to this size are judged by checking every triple.
pub const DIRECT_CHECK_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MedianError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph is not median")]
    NotMedian,
    #[error("vertex set does not induce a connected subgraph")]
    NotConnected,
    #[error("vertex set is not convex")]
    NotConvex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub u: VertexId,
    pub v: VertexId,
    pub members: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MedianOutcome {
    Unique(VertexId),
    NoMedian,
    MultipleMedians(Vec<VertexId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MedianWitness {
    Disconnected,
    /// A triple without a unique median, with the interval intersection.
    Triple([VertexId; 3], MedianOutcome),
}

/// Quadrangle condition failure: `v`, `w` at distance `k` from `u` share
/// the neighbour `x` at distance `k+1` but have no common neighbour at
/// distance `k-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadrangleWitness {
    pub u: VertexId,
    pub v: VertexId,
    pub w: VertexId,
    pub x: VertexId,
}

/// Triangle condition failure: adjacent `v`, `w` at equal distance from `u`
/// without a common neighbour one step closer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleConditionWitness {
    pub u: VertexId,
    pub v: VertexId,
    pub w: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K23 {
    pub hubs: [VertexId; 2],
    pub middles: [VertexId; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedianVerdict {
    pub is_median: bool,
    /// Whether every triple was checked (otherwise the characterization decided).
    pub direct: bool,
    pub witness: Option<MedianWitness>,
    pub triangle: Option<[VertexId; 3]>,
    pub quadrangle: Option<QuadrangleWitness>,
    pub k23: Option<K23>,
    pub triangle_condition: Option<TriangleConditionWitness>,
}

fn pos_of(g: &Graph, v: VertexId) -> Result<usize, MedianError> {
    g.pos(v)
        .ok_or(MedianError::Graph(GraphError::UnknownVertex(v)))
}

/// `I(u,v)` via two BFS sweeps.
pub fn interval(g: &Graph, u: VertexId, v: VertexId) -> Result<Interval, MedianError> {
    let (pu, pv) = (pos_of(g, u)?, pos_of(g, v)?);
    let du = g.bfs(pu);
    let dv = g.bfs(pv);
    let d = du[pv];
    let members = if d == UNREACHABLE {
        Vec::new()
    } else {
        (0..g.len())
            .filter(|&z| du[z] != UNREACHABLE && dv[z] != UNREACHABLE && du[z] + dv[z] == d)
            .map(|z| g.id(z))
            .collect()
    };
    Ok(Interval { u, v, members })
}

fn outcome(found: Vec<VertexId>) -> MedianOutcome {
    match found.len() {
        0 => MedianOutcome::NoMedian,
        1 => MedianOutcome::Unique(found[0]),
        _ => MedianOutcome::MultipleMedians(found),
    }
}

/// Intersection of the three pairwise intervals.
pub fn median_point(
    g: &Graph,
    x: VertexId,
    y: VertexId,
    z: VertexId,
) -> Result<MedianOutcome, MedianError> {
    let ps = [pos_of(g, x)?, pos_of(g, y)?, pos_of(g, z)?];
    let d: Vec<Vec<u32>> = ps.iter().map(|&p| g.bfs(p)).collect();
    let between = |a: usize, b: usize, m: usize| {
        let (da, db) = (d[a][m], d[b][m]);
        da != UNREACHABLE && db != UNREACHABLE && da + db == d[a][ps[b]]
    };
    let found = (0..g.len())
        .filter(|&m| between(0, 1, m) && between(1, 2, m) && between(2, 0, m))
        .map(|m| g.id(m))
        .collect();
    Ok(outcome(found))
}

fn triple_medians(
    dm: &DistanceMatrix,
    members: &[usize],
    x: usize,
    y: usize,
    z: usize,
) -> Vec<usize> {
    let (dxy, dxz, dyz) = (dm.get(x, y), dm.get(x, z), dm.get(y, z));
    let s = dxz + dyz - dxy;
    if s % 2 == 1 {
        return Vec::new();
    }
    // members of I(x,y) at exactly this distance from z are the medians
    let t = s / 2;
    members
        .iter()
        .copied()
        .filter(|&m| dm.get(z, m) == t)
        .collect()
}

/// Median recognition with diagnostics.
pub fn is_median(g: &Graph) -> MedianVerdict {
    let n = g.len();
    let connected = g.is_connected();
    let triangle = g.has_triangle();
    let k23 = find_k23(g);
    let (quadrangle, triangle_condition) = if connected {
        condition_witnesses(g)
    } else {
        (None, None)
    };
    let mut verdict = MedianVerdict {
        is_median: false,
        direct: n <= DIRECT_CHECK_LIMIT,
        witness: None,
        triangle,
        quadrangle,
        k23,
        triangle_condition,
    };
    if !connected {
        verdict.witness = Some(MedianWitness::Disconnected);
        return verdict;
    }
    if verdict.direct {
        verdict.witness = direct_triple_check(g);
        verdict.is_median = verdict.witness.is_none();
    } else {
        verdict.is_median =
            verdict.triangle.is_none() && verdict.quadrangle.is_none() && verdict.k23.is_none();
    }
    verdict
}

fn direct_triple_check(g: &Graph) -> Option<MedianWitness> {
    let n = g.len();
    let dm = g.distance_matrix();
    let mut members = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            members.clear();
            members.extend((0..n).filter(|&m| dm.between(x, m, y)));
            for z in y + 1..n {
                let found = triple_medians(&dm, &members, x, y, z);
                if found.len() != 1 {
                    let labels = found.iter().map(|&m| g.id(m)).collect();
                    return Some(MedianWitness::Triple(
                        [g.id(x), g.id(y), g.id(z)],
                        outcome(labels),
                    ));
                }
            }
        }
    }
    None
}

/// Two vertices with at least three common neighbours.
pub fn find_k23(g: &Graph) -> Option<K23> {
    let n = g.len();
    let mut common = vec![0u32; n];
    let mut touched = Vec::new();
    for a in 0..n {
        for &m in g.neighbors(a) {
            for &b in g.neighbors(m) {
                if b > a {
                    if common[b] == 0 {
                        touched.push(b);
                    }
                    common[b] += 1;
                }
            }
        }
        let hit = touched.iter().copied().filter(|&b| common[b] >= 3).min();
        for &b in &touched {
            common[b] = 0;
        }
        touched.clear();
        if let Some(b) = hit {
            let mids: Vec<usize> = g
                .neighbors(a)
                .iter()
                .copied()
                .filter(|&m| g.has_edge(m, b))
                .take(3)
                .collect();
            return Some(K23 {
                hubs: [g.id(a), g.id(b)],
                middles: [g.id(mids[0]), g.id(mids[1]), g.id(mids[2])],
            });
        }
    }
    None
}

/// Quadrangle and triangle condition checks, one BFS per base vertex.
fn condition_witnesses(g: &Graph) -> (Option<QuadrangleWitness>, Option<TriangleConditionWitness>) {
    let mut quad = None;
    let mut tri = None;
    for u in 0..g.len() {
        let d = g.bfs(u);
        let closer = |a: usize, b: usize, level: u32| {
            g.neighbors(a)
                .iter()
                .any(|&c| d[c] + 1 == level && g.has_edge(c, b))
        };
        for x in 0..g.len() {
            if quad.is_none() && d[x] >= 2 {
                let below: Vec<usize> = g
                    .neighbors(x)
                    .iter()
                    .copied()
                    .filter(|&v| d[v] + 1 == d[x])
                    .collect();
                'pairs: for (i, &v) in below.iter().enumerate() {
                    for &w in &below[i + 1..] {
                        if !closer(v, w, d[v]) {
                            quad = Some(QuadrangleWitness {
                                u: g.id(u),
                                v: g.id(v),
                                w: g.id(w),
                                x: g.id(x),
                            });
                            break 'pairs;
                        }
                    }
                }
            }
            if tri.is_none() && d[x] >= 1 {
                for &w in g.neighbors(x) {
                    if w > x && d[w] == d[x] && !closer(x, w, d[x]) {
                        tri = Some(TriangleConditionWitness {
                            u: g.id(u),
                            v: g.id(x),
                            w: g.id(w),
                        });
                        break;
                    }
                }
            }
        }
        if quad.is_some() && tri.is_some() {
            break;
        }
    }
    (quad, tri)
}

/// A graph known to be median, with its distance matrix.
#[derive(Debug, Clone)]
pub struct MedianGraph {
    graph: Graph,
    dm: DistanceMatrix,
}

impl MedianGraph {
    pub fn new(g: &Graph) -> Result<Self, MedianError> {
        if !is_median(g).is_median {
            return Err(MedianError::NotMedian);
        }
        Ok(Self::assume_median(g))
    }

    /// Skips the median check; the caller vouches for it.
    pub fn assume_median(g: &Graph) -> Self {
        MedianGraph {
            graph: g.clone(),
            dm: g.distance_matrix(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.dm
    }

    pub fn set_of(&self, labels: &[VertexId]) -> Result<VertexSet, MedianError> {
        Ok(self.graph.set_of(labels)?)
    }

    /// 2-convexity of a connected vertex set (positions).
    pub fn is_convex_set(&self, s: &VertexSet) -> Result<bool, MedianError> {
        if s.is_empty() || !self.graph.is_connected_subset(s) {
            return Err(MedianError::NotConnected);
        }
        let members: Vec<usize> = s.iter().collect();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                if self.dm.get(x, y) == 2 {
                    let escapes = self
                        .graph
                        .neighbors(x)
                        .iter()
                        .any(|&m| self.graph.has_edge(m, y) && !s.contains(m));
                    if escapes {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn is_convex(&self, s: &[VertexId]) -> Result<bool, MedianError> {
        self.is_convex_set(&self.set_of(s)?)
    }

    /// Gate map onto a convex set given by positions.
    pub fn gate_map_set(&self, a: &VertexSet) -> Result<GateMap, MedianError> {
        match self.is_convex_set(a) {
            Ok(true) => {}
            Ok(false) | Err(MedianError::NotConnected) => return Err(MedianError::NotConvex),
            Err(e) => return Err(e),
        }
        let g = &self.graph;
        let members: Vec<usize> = a.iter().collect();
        let mut gates = Vec::with_capacity(g.len());
        for x in 0..g.len() {
            let best = members.iter().map(|&m| self.dm.get(x, m)).min().unwrap();
            let nearest: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&m| self.dm.get(x, m) == best)
                .collect();
            if nearest.len() != 1 {
                return Err(MedianError::NotConvex);
            }
            let gate = nearest[0];
            if !members
                .iter()
                .all(|&b| self.dm.get(x, b) == best + self.dm.get(gate, b))
            {
                return Err(MedianError::NotConvex);
            }
            gates.push(gate);
        }
        Ok(GateMap {
            target: g.labels(a),
            gate: (0..g.len()).map(|x| (g.id(x), g.id(gates[x]))).collect(),
        })
    }

    pub fn gate_map(&self, a: &[VertexId]) -> Result<GateMap, MedianError> {
        self.gate_map_set(&self.set_of(a)?)
    }

    pub fn median(&self, x: VertexId, y: VertexId, z: VertexId) -> Result<VertexId, MedianError> {
        let g = &self.graph;
        let (px, py, pz) = (pos_of(g, x)?, pos_of(g, y)?, pos_of(g, z)?);
        let members: Vec<usize> = (0..g.len())
            .filter(|&m| self.dm.between(px, m, py))
            .collect();
        let found = triple_medians(&self.dm, &members, px, py, pz);
        if found.len() == 1 {
            Ok(g.id(found[0]))
        } else {
            Err(MedianError::NotMedian)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateMap {
    pub target: Vec<VertexId>,
    pub gate: HashMap<VertexId, VertexId>,
}

impl GateMap {
    pub fn gate_of(&self, v: VertexId) -> Option<VertexId> {
        self.gate.get(&v).copied()
    }

    /// Image of a vertex set under the gate map (sorted, deduplicated).
    pub fn image(&self, vs: &[VertexId]) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = vs.iter().filter_map(|v| self.gate_of(*v)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

pub fn is_convex(g: &Graph, s: &[VertexId]) -> Result<bool, MedianError> {
    MedianGraph::new(g)?.is_convex(s)
}

pub fn gate_map(g: &Graph, a: &[VertexId]) -> Result<GateMap, MedianError> {
    MedianGraph::new(g)?.gate_map(a)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkVerdict {
    pub holds: bool,
    /// The common cube and the three offending cubes.
    pub witness: Option<(CubeId, [CubeId; 3])>,
}

/// Three `(n+2)`-cubes around an `n`-cube that pairwise share `(n+1)`-faces
/// must span an `(n+3)`-cube.
pub fn link_condition_check(c: &CubeComplex) -> LinkVerdict {
    for q in 0..c.num_cubes() {
        let n = c.cube(q).dim();
        if n + 2 > c.dim() {
            continue;
        }
        let cof = c.cofaces(q);
        let big: Vec<CubeId> = cof
            .iter()
            .copied()
            .filter(|&b| c.cube(b).dim() == n + 2)
            .collect();
        let top: Vec<CubeId> = cof
            .iter()
            .copied()
            .filter(|&b| c.cube(b).dim() == n + 3)
            .collect();
        let shares = |a: CubeId, b: CubeId| c.meet(a, b).is_some_and(|f| c.cube(f).dim() == n + 1);
        for i in 0..big.len() {
            for j in i + 1..big.len() {
                if !shares(big[i], big[j]) {
                    continue;
                }
                let ab = c.meet(big[i], big[j]).unwrap();
                for k in j + 1..big.len() {
                    if !shares(big[i], big[k]) || !shares(big[j], big[k]) {
                        continue;
                    }
                    if c.meet(ab, big[k]) != Some(q) {
                        continue;
                    }
                    let spanned = top
                        .iter()
                        .any(|&t| [big[i], big[j], big[k]].iter().all(|&b| c.is_face_of(b, t)));
                    if !spanned {
                        return LinkVerdict {
                            holds: false,
                            witness: Some((q, [big[i], big[j], big[k]])),
                        };
                    }
                }
            }
        }
    }
    LinkVerdict {
        holds: true,
        witness: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cat0Reason {
    /// An induced hypercube of the graph is not filled; carries its corners.
    MissingCubes(Vec<VertexId>),
    GraphNotMedian(Box<MedianVerdict>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cat0Verdict {
    pub is_cat0: bool,
    pub reason: Option<Cat0Reason>,
}

/// Complete graph-wise and median.
pub fn is_cat0(c: &CubeComplex) -> Cat0Verdict {
    let full = completion_from_graph(c.graph());
    if full != *c {
        let missing = full
            .cubes()
            .iter()
            .find(|q| c.find(q.corners()).is_none())
            .map(|q| q.corners().to_vec())
            .unwrap_or_default();
        return Cat0Verdict {
            is_cat0: false,
            reason: Some(Cat0Reason::MissingCubes(missing)),
        };
    }
    let verdict = is_median(c.graph());
    if !verdict.is_median {
        return Cat0Verdict {
            is_cat0: false,
            reason: Some(Cat0Reason::GraphNotMedian(Box::new(verdict))),
        };
    }
    Cat0Verdict {
        is_cat0: true,
        reason: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3() -> Graph {
        let mut e = Vec::new();
        for v in 0..8u32 {
            for l in 0..3 {
                let w = v ^ (1 << l);
                if v < w {
                    e.push((v, w));
                }
            }
        }
        Graph::from_edges(8, &e).unwrap()
    }

    fn k23() -> Graph {
        Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (4, 1), (4, 2), (4, 3)]).unwrap()
    }

    #[test]
    fn intervals() {
        let p = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(interval(&p, 0, 2).unwrap().members, vec![0, 1, 2]);
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(interval(&c4, 0, 2).unwrap().members, vec![0, 1, 2, 3]);
        // 000 to 110 in Q3
        assert_eq!(
            interval(&q3(), 0b000, 0b110).unwrap().members,
            vec![0b000, 0b010, 0b100, 0b110]
        );
        assert!(interval(&p, 0, 9).is_err());
    }

    #[test]
    fn medians_in_q3_and_k23() {
        assert_eq!(
            median_point(&q3(), 0b000, 0b110, 0b011).unwrap(),
            MedianOutcome::Unique(0b010)
        );
        // the three degree-2 vertices see both hubs as medians
        assert_eq!(
            median_point(&k23(), 1, 2, 3).unwrap(),
            MedianOutcome::MultipleMedians(vec![0, 4])
        );
        // hubs with a middle vertex have that middle vertex as unique median
        assert_eq!(
            median_point(&k23(), 0, 4, 1).unwrap(),
            MedianOutcome::Unique(1)
        );
    }

    #[test]
    fn median_verdicts() {
        let v = is_median(&k23());
        assert!(!v.is_median);
        let k = v.k23.unwrap();
        assert_eq!(k.hubs, [0, 4]);
        assert_eq!(k.middles, [1, 2, 3]);
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(is_median(&c4).is_median);
        assert!(is_median(&q3()).is_median);
    }

    #[test]
    fn q3_minus_corner_has_empty_median() {
        let g = q3();
        let keep = VertexSet::from_positions(8, 0..7);
        let t = g.induced(&keep);
        assert_eq!(
            median_point(&t, 0b110, 0b101, 0b011).unwrap(),
            MedianOutcome::NoMedian
        );
        let v = is_median(&t);
        assert!(!v.is_median);
        assert!(v.quadrangle.is_some());
    }

    #[test]
    fn convexity_and_gates() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(is_convex(&c4, &[0, 1]), Ok(true));
        assert_eq!(is_convex(&c4, &[0, 2]), Err(MedianError::NotConnected));
        assert_eq!(is_convex(&c4, &[0, 1, 2]), Ok(false));
        assert_eq!(is_convex(&k23(), &[0]), Err(MedianError::NotMedian));
        let gm = gate_map(&c4, &[0, 1]).unwrap();
        assert_eq!(gm.gate_of(2), Some(1));
        assert_eq!(gm.gate_of(3), Some(0));
        let id = gate_map(&c4, &[0, 1, 2, 3]).unwrap();
        assert!((0..4).all(|v| id.gate_of(v) == Some(v)));
        assert_eq!(gate_map(&c4, &[0, 1, 2]), Err(MedianError::NotConvex));
    }
}
