//! Simple undirected graphs with arbitrary `u32` vertex labels.
//!
//! Labels are authoritative; algorithms work on dense positions `0..len()`
//! (positions follow ascending label order).

use std::collections::{HashMap, VecDeque};

use crate::bitset::VertexSet;

pub type VertexId = u32;

pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge references undeclared vertex {0}")]
    UnknownVertex(VertexId),
    #[error("loop at vertex {0}")]
    Loop(VertexId),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<VertexId>,
    pos: HashMap<VertexId, usize>,
    adj: Vec<Vec<usize>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.ids)
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// Builds a simple graph. Repeated edges are merged.
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut ids: Vec<VertexId> = vertices.into_iter().collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0]));
        }
        let pos: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (a, b) in edges {
            let pa = *pos.get(&a).ok_or(GraphError::UnknownVertex(a))?;
            let pb = *pos.get(&b).ok_or(GraphError::UnknownVertex(b))?;
            if pa == pb {
                return Err(GraphError::Loop(a));
            }
            adj[pa].push(pb);
            adj[pb].push(pa);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { ids, pos, adj })
    }

    /// Graph with vertices `0..n` and the given edges.
    pub fn from_edges(n: u32, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        Self::new(0..n, edges.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, pos: usize) -> VertexId {
        self.ids[pos]
    }

    pub fn pos(&self, id: VertexId) -> Option<usize> {
        self.pos.get(&id).copied()
    }

    pub fn neighbors(&self, pos: usize) -> &[usize] {
        &self.adj[pos]
    }

    pub fn degree(&self, pos: usize) -> usize {
        self.adj[pos].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn has_edge_ids(&self, a: VertexId, b: VertexId) -> bool {
        match (self.pos(a), self.pos(b)) {
            (Some(pa), Some(pb)) => self.has_edge(pa, pb),
            _ => false,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as label pairs `(min, max)` in ascending order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (a, list) in self.adj.iter().enumerate() {
            for &b in list {
                if a < b {
                    out.push((self.ids[a], self.ids[b]));
                }
            }
        }
        out
    }

    /// BFS distances from `src` (positions); unreachable vertices get [`UNREACHABLE`].
    pub fn bfs(&self, src: usize) -> Vec<u32> {
        self.bfs_multi(&[src])
    }

    pub fn bfs_multi(&self, sources: &[usize]) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.bfs(0).iter().all(|&d| d != UNREACHABLE)
    }

    /// Whether the subgraph induced on `set` is connected (empty sets count as connected).
    pub fn is_connected_subset(&self, set: &VertexSet) -> bool {
        let Some(start) = set.first() else {
            return true;
        };
        let mut seen = VertexSet::new(self.len());
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if set.contains(w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.count() == set.count()
    }

    pub fn distance_matrix(&self) -> DistanceMatrix {
        let n = self.len();
        let mut d = Vec::with_capacity(n * n);
        for s in 0..n {
            d.extend(self.bfs(s));
        }
        DistanceMatrix { n, d }
    }

    /// Induced subgraph on the given positions.
    pub fn induced(&self, set: &VertexSet) -> Graph {
        let ids: Vec<VertexId> = set.iter().map(|p| self.ids[p]).collect();
        let edges = self
            .edges()
            .into_iter()
            .filter(|&(a, b)| set.contains(self.pos[&a]) && set.contains(self.pos[&b]));
        Graph::new(ids, edges).expect("induced subgraph of a valid graph")
    }

    /// Connected components after deleting the given edges (position pairs).
    pub fn components_without(&self, removed: &[(usize, usize)]) -> Vec<VertexSet> {
        let cut: std::collections::HashSet<(usize, usize)> =
            removed.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let mut comp = vec![usize::MAX; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut set = VertexSet::new(self.len());
            comp[s] = id;
            set.insert(s);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX && !cut.contains(&(u.min(w), u.max(w))) {
                        comp[w] = id;
                        set.insert(w);
                        stack.push(w);
                    }
                }
            }
            out.push(set);
        }
        out
    }

    /// Positions → labels for a vertex set.
    pub fn labels(&self, set: &VertexSet) -> Vec<VertexId> {
        set.iter().map(|p| self.ids[p]).collect()
    }

    /// Labels → vertex set; unknown labels are reported.
    pub fn set_of(&self, labels: &[VertexId]) -> Result<VertexSet, GraphError> {
        let mut s = VertexSet::new(self.len());
        for &l in labels {
            s.insert(self.pos(l).ok_or(GraphError::UnknownVertex(l))?);
        }
        Ok(s)
    }

    pub fn has_triangle(&self) -> Option<[VertexId; 3]> {
        for a in 0..self.len() {
            for &b in &self.adj[a] {
                if b <= a {
                    continue;
                }
                for &c in &self.adj[b] {
                    if c > b && self.has_edge(a, c) {
                        return Some([self.ids[a], self.ids[b], self.ids[c]]);
                    }
                }
            }
        }
        None
    }

    pub fn diameter(&self) -> u32 {
        (0..self.len()).flat_map(|s| self.bfs(s)).max().unwrap_or(0)
    }
}

/// Dense all-pairs BFS distances.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.d[a * self.n + b]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Whether `z` lies on a shortest `a`–`b` path.
    pub fn between(&self, a: usize, z: usize, b: usize) -> bool {
        self.get(a, z) + self.get(z, b) == self.get(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_unknown() {
        assert_eq!(Graph::from_edges(2, &[(0, 0)]), Err(GraphError::Loop(0)));
        assert_eq!(
            Graph::from_edges(2, &[(0, 5)]),
            Err(GraphError::UnknownVertex(5))
        );
    }

    #[test]
    fn sparse_labels() {
        let g = Graph::new([10, 3, 7], [(3, 7), (7, 10)]).unwrap();
        assert_eq!(g.ids(), &[3, 7, 10]);
        assert_eq!(g.bfs(0), vec![0, 1, 2]);
        assert!(g.is_connected());
        assert_eq!(g.edges(), vec![(3, 7), (7, 10)]);
    }

    #[test]
    fn components_after_cut() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let comps = g.components_without(&[(1, 2)]);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].iter().collect::<Vec<_>>(), vec![0, 1]);
    }
}
