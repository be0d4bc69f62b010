//! Vertex colorings of small graphs (used on crossing graphs).

use crate::graph::Graph;

/// Default node budget for [`chromatic_exact`].
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColoringError {
    #[error("exact coloring exceeded the node budget of {0}")]
    TooLarge(u64),
}

/// Colors `1..=num_colors`, indexed by vertex position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<usize>,
    pub num_colors: usize,
}

impl Coloring {
    pub fn is_valid(&self, g: &Graph) -> bool {
        self.colors.len() == g.len()
            && self
                .colors
                .iter()
                .all(|&c| (1..=self.num_colors).contains(&c))
            && (0..g.len()).all(|a| {
                g.neighbors(a)
                    .iter()
                    .all(|&b| self.colors[a] != self.colors[b])
            })
    }

    /// Vertex positions with the given color.
    pub fn class(&self, color: usize) -> Vec<usize> {
        (0..self.colors.len())
            .filter(|&v| self.colors[v] == color)
            .collect()
    }
}

/// Smallest-last (degeneracy) order, first vertex to color first.
fn smallest_last_order(g: &Graph) -> Vec<usize> {
    let n = g.len();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .unwrap();
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    order.reverse();
    order
}

pub fn color_greedy(g: &Graph) -> Coloring {
    let mut colors = vec![0usize; g.len()];
    let mut num_colors = 0;
    for v in smallest_last_order(g) {
        let mut c = 1;
        while g.neighbors(v).iter().any(|&w| colors[w] == c) {
            c += 1;
        }
        colors[v] = c;
        num_colors = num_colors.max(c);
    }
    Coloring { colors, num_colors }
}

fn greedy_clique(g: &Graph) -> usize {
    let mut best = usize::from(!g.is_empty());
    for s in 0..g.len() {
        let mut clique = vec![s];
        let mut cands: Vec<usize> = g.neighbors(s).to_vec();
        cands.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
        for v in cands {
            if clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

struct Search<'a> {
    g: &'a Graph,
    colors: Vec<usize>,
    best: Coloring,
    lower: usize,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self, colored: usize, used: usize) -> Result<(), ColoringError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(ColoringError::TooLarge(self.budget));
        }
        if self.best.num_colors <= self.lower {
            return Ok(());
        }
        let n = self.g.len();
        if colored == n {
            if used < self.best.num_colors {
                self.best = Coloring {
                    colors: self.colors.clone(),
                    num_colors: used,
                };
            }
            return Ok(());
        }
        // DSatur choice: most distinct neighbour colors, then highest degree
        let mut pick = usize::MAX;
        let mut key = (0usize, 0usize);
        for v in (0..n).filter(|&v| self.colors[v] == 0) {
            let mut seen: Vec<usize> = self
                .g
                .neighbors(v)
                .iter()
                .map(|&w| self.colors[w])
                .filter(|&c| c > 0)
                .collect();
            seen.sort_unstable();
            seen.dedup();
            let k = (seen.len(), self.g.degree(v));
            if pick == usize::MAX || k > key {
                pick = v;
                key = k;
            }
        }
        let limit = (used + 1).min(self.best.num_colors - 1);
        for c in 1..=limit {
            if self.g.neighbors(pick).iter().any(|&w| self.colors[w] == c) {
                continue;
            }
            self.colors[pick] = c;
            self.run(colored + 1, used.max(c))?;
            self.colors[pick] = 0;
            if self.best.num_colors <= self.lower {
                break;
            }
        }
        Ok(())
    }
}

/// Exact chromatic number by DSatur branch and bound.
pub fn chromatic_exact(g: &Graph, budget: u64) -> Result<(usize, Coloring), ColoringError> {
    let greedy = color_greedy(g);
    if g.is_empty() {
        return Ok((0, greedy));
    }
    let mut s = Search {
        g,
        colors: vec![0; g.len()],
        lower: greedy_clique(g),
        best: greedy,
        nodes: 0,
        budget,
    };
    s.run(0, 0)?;
    Ok((s.best.num_colors, s.best))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(chromatic_exact(&k3, DEFAULT_NODE_BUDGET).unwrap().0, 3);
        let empty = Graph::from_edges(4, &[]).unwrap();
        assert_eq!(color_greedy(&empty).num_colors, 1);
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let (k, col) = chromatic_exact(&c5, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(k, 3);
        assert!(col.is_valid(&c5));
    }

    #[test]
    fn budget_is_enforced() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        // clique bound 2 forces a search that cannot finish in one node
        assert_eq!(chromatic_exact(&c5, 1), Err(ColoringError::TooLarge(1)));
    }
}
