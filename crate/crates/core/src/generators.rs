//! Standard and random test complexes.
//!
//! Random generators use ChaCha8 seeded with `seed_from_u64`, so corpora are
//! reproducible on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::collapse::{expand_step, CollapseStep, Decomposition, RemovedHalfspace};
use crate::complex::{completion_from_graph, CubeComplex, MAX_DIM};
use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("{0} is randomized and needs a seed")]
    MissingSeed(String),
    #[error("unknown generator {0:?}")]
    UnknownKind(String),
}

fn build(vertices: impl IntoIterator<Item = VertexId>, cubes: &[Vec<VertexId>]) -> CubeComplex {
    let v: Vec<VertexId> = vertices.into_iter().collect();
    CubeComplex::from_cubes(&v, cubes).expect("generator output is a valid complex")
}

/// Path with `n` edges on vertices `0..=n`.
pub fn path(n: usize) -> CubeComplex {
    let n = n as VertexId;
    build(0..=n, &(0..n).map(|i| vec![i, i + 1]).collect::<Vec<_>>())
}

/// Tree where vertex `i + 1` hangs off `parents[i]`.
pub fn tree(parents: &[VertexId]) -> Result<CubeComplex, GenError> {
    for (i, &p) in parents.iter().enumerate() {
        if p as usize > i {
            return Err(GenError::BadParams(format!(
                "parent {p} of vertex {} is not an earlier vertex",
                i + 1
            )));
        }
    }
    let edges: Vec<Vec<VertexId>> = parents
        .iter()
        .enumerate()
        .map(|(i, &p)| vec![p, i as VertexId + 1])
        .collect();
    Ok(build(0..=parents.len() as VertexId, &edges))
}

/// Uniform random recursive tree on `n` vertices.
pub fn random_tree(n: usize, seed: u64) -> Result<CubeComplex, GenError> {
    if n == 0 {
        return Err(GenError::BadParams(
            "a tree needs at least one vertex".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parents: Vec<VertexId> = (1..n as u64)
        .map(|i| rng.random_range(0..i) as VertexId)
        .collect();
    tree(&parents)
}

/// The `n`-cube; vertex ids are the binary words.
pub fn hypercube(n: usize) -> Result<CubeComplex, GenError> {
    if n > MAX_DIM {
        return Err(GenError::BadParams(format!(
            "dimension {n} exceeds {MAX_DIM}"
        )));
    }
    let corners: Vec<VertexId> = (0..1u32 << n).collect();
    Ok(build(corners.clone(), &[corners]))
}

/// `a × b` grid of squares; vertex `(i, j)` has id `i·(b+1) + j`.
pub fn grid(a: usize, b: usize) -> Result<CubeComplex, GenError> {
    if a == 0 || b == 0 {
        return Err(GenError::BadParams("grid sides must be positive".into()));
    }
    let id = |i: usize, j: usize| (i * (b + 1) + j) as VertexId;
    let mut squares = Vec::new();
    for i in 0..a {
        for j in 0..b {
            squares.push(vec![id(i, j), id(i, j + 1), id(i + 1, j), id(i + 1, j + 1)]);
        }
    }
    Ok(build(0..id(a, b) + 1, &squares))
}

/// Two squares side by side: `grid(1, 2)`.
pub fn strip() -> CubeComplex {
    grid(1, 2).unwrap()
}

/// `grid(2, 2)` without its top-right square (vertex 8 dropped).
pub fn lshape() -> CubeComplex {
    build(
        0..8,
        &[vec![0, 1, 3, 4], vec![1, 2, 4, 5], vec![3, 4, 6, 7]],
    )
}

/// `K_{2,3}` with hubs 0, 4 and middles 1, 2, 3.
pub fn k23() -> Graph {
    Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (4, 1), (4, 2), (4, 3)]).unwrap()
}

/// Three squares of `Q3` around vertex 0; vertex 7 is missing.
pub fn tricorner() -> CubeComplex {
    build(
        0..7,
        &[vec![0, 1, 2, 3], vec![0, 1, 4, 5], vec![0, 2, 4, 6]],
    )
}

/// Boundary of a square: a 4-cycle of edges with no 2-cell.
pub fn hollow_square() -> CubeComplex {
    build(0..4, &[vec![0, 1], vec![1, 3], vec![3, 2], vec![2, 0]])
}

/// All cliques of `g` (positions), including the empty one, ordered by
/// size and then lexicographically. Clique `i` is vertex `i` of
/// [`simplex_graph`].
pub fn cliques(g: &Graph) -> Vec<Vec<usize>> {
    let mut all = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for q in &layer {
            let from = q.last().map_or(0, |&v| v + 1);
            for v in from..g.len() {
                if q.iter().all(|&u| g.has_edge(u, v)) {
                    let mut r = q.clone();
                    r.push(v);
                    next.push(r);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// Cube completion of the graph of cliques, adjacent when they differ by
/// one vertex.
pub fn simplex_graph(g: &Graph) -> CubeComplex {
    let qs = cliques(g);
    let index: std::collections::HashMap<&[usize], usize> = qs
        .iter()
        .enumerate()
        .map(|(i, q)| (q.as_slice(), i))
        .collect();
    let mut edges = Vec::new();
    for (i, q) in qs.iter().enumerate() {
        for k in 0..q.len() {
            let mut r = q.clone();
            r.remove(k);
            edges.push((index[r.as_slice()] as VertexId, i as VertexId));
        }
    }
    completion_from_graph(&Graph::from_edges(qs.len() as VertexId, &edges).unwrap())
}

/// Mycielski graph: `v ↦ i`, shadow `v' ↦ n + i`, apex `w ↦ 2n`.
pub fn mycielski(g: &Graph) -> Graph {
    let n = g.len() as VertexId;
    let mut edges = Vec::new();
    for a in 0..g.len() {
        for &b in g.neighbors(a) {
            let (a, b) = (a as VertexId, b as VertexId);
            if a < b {
                edges.push((a, b));
            }
            edges.push((n + a, b));
        }
        edges.push((n + a as VertexId, 2 * n));
    }
    Graph::from_edges(2 * n + 1, &edges).unwrap()
}

/// `M_1 = K_2`, `M_{k+1} = mycielski(M_k)`.
pub fn mycielski_chain(n: usize) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::BadParams("the chain starts at M_1".into()));
    }
    let mut g = Graph::from_edges(2, &[(0, 1)]).unwrap();
    for _ in 1..n {
        g = mycielski(&g);
    }
    Ok(g)
}

/// Random regularly collapsible complex grown from vertex 0.
///
/// Each step expands along up to `max_cuboids` pairwise disjoint faces of
/// dimension below `max_face_dim` (unbounded when `None`). Returns the
/// complex and its decomposition in collapse order.
pub fn random_collapsible_with(
    seed: u64,
    steps: usize,
    max_cuboids: usize,
    max_face_dim: Option<usize>,
) -> Result<(CubeComplex, Decomposition), GenError> {
    if max_cuboids == 0 {
        return Err(GenError::BadParams(
            "need at least one cuboid per step".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = build([0], &[]);
    let mut record = Vec::with_capacity(steps);
    for _ in 0..steps {
        let want = rng.random_range(1..=max_cuboids as u64) as usize;
        let mut faces: Vec<usize> = (0..c.num_cubes())
            .filter(|&k| {
                let d = c.cube(k).dim();
                max_face_dim.is_none_or(|m| d < m) && d < MAX_DIM
            })
            .collect();
        faces.shuffle(&mut rng);
        let mut used: Vec<VertexId> = Vec::new();
        let mut cuboids: Vec<Vec<VertexId>> = Vec::new();
        for k in faces {
            if cuboids.len() == want {
                break;
            }
            let vs = c.corner_set(k);
            if vs.iter().all(|v| !used.contains(v)) {
                used.extend_from_slice(vs);
                cuboids.push(vs.to_vec());
            }
        }
        let mut next = c.vertex_ids().last().map_or(0, |&v| v + 1);
        let mut step = CollapseStep {
            removed: Vec::new(),
            cuboids: Vec::new(),
            vertex_map: Vec::new(),
        };
        for l in &cuboids {
            let pairs: Vec<(VertexId, VertexId)> = l
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, next + i as VertexId))
                .collect();
            next += l.len() as VertexId;
            step.removed.push(RemovedHalfspace {
                hyperplane: None,
                vertices: pairs.iter().map(|p| p.1).collect(),
            });
            step.cuboids.push(l.clone());
            step.vertex_map.push(pairs);
        }
        c = expand_step(&c, &cuboids).expect("faces are cuboids");
        record.push(step);
    }
    record.reverse();
    Ok((
        c,
        Decomposition {
            steps: record,
            base: 0,
        },
    ))
}

/// [`random_collapsible_with`] without a face-dimension limit.
pub fn random_collapsible(
    seed: u64,
    steps: usize,
    max_cuboids: usize,
) -> Result<(CubeComplex, Decomposition), GenError> {
    random_collapsible_with(seed, steps, max_cuboids, None)
}

/// Optional knobs for [`named`]; absent values take small defaults.
#[derive(Debug, Clone, Copy, Default)]
pub struct GenParams {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub seed: Option<u64>,
    pub steps: Option<usize>,
    pub cuboids: Option<usize>,
}

/// Generator kinds accepted by [`named`].
pub const KINDS: [&str; 11] = [
    "path",
    "tree",
    "hypercube",
    "grid",
    "k23",
    "tricorner",
    "hollow_square",
    "strip",
    "lshape",
    "simplex",
    "random_collapsible",
];

/// Builds a generator by name. `simplex` is the simplex-graph complex of
/// the Mycielski graph `M_n`; `random_collapsible` also returns its
/// decomposition.
pub fn named(kind: &str, p: &GenParams) -> Result<(CubeComplex, Option<Decomposition>), GenError> {
    let seed = || p.seed.ok_or_else(|| GenError::MissingSeed(kind.into()));
    let c = match kind {
        "path" => path(p.n.unwrap_or(1)),
        "tree" => random_tree(p.n.unwrap_or(8), seed()?)?,
        "hypercube" => hypercube(p.n.unwrap_or(2))?,
        "grid" => {
            let a = p.n.unwrap_or(2);
            grid(a, p.m.unwrap_or(a))?
        }
        "k23" => completion_from_graph(&k23()),
        "tricorner" => tricorner(),
        "hollow_square" => hollow_square(),
        "strip" => strip(),
        "lshape" => lshape(),
        "simplex" => simplex_graph(&mycielski_chain(p.n.unwrap_or(2))?),
        "random_collapsible" => {
            let (c, d) = random_collapsible(seed()?, p.steps.unwrap_or(8), p.cuboids.unwrap_or(2))?;
            return Ok((c, Some(d)));
        }
        _ => return Err(GenError::UnknownKind(kind.into())),
    };
    Ok((c, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::verify_decomposition;
    use crate::median::{is_cat0, is_median, link_condition_check};

    #[test]
    fn generators_by_name() {
        for kind in KINDS {
            let p = GenParams {
                seed: Some(1),
                steps: Some(3),
                ..GenParams::default()
            };
            let (c, d) = named(kind, &p).unwrap();
            assert!(c.num_vertices() > 0);
            assert_eq!(d.is_some(), kind == "random_collapsible");
        }
        assert_eq!(
            named("tree", &GenParams::default()),
            Err(GenError::MissingSeed("tree".into()))
        );
        assert!(matches!(
            named("torus", &GenParams::default()),
            Err(GenError::UnknownKind(_))
        ));
    }

    #[test]
    fn standard_shapes() {
        assert_eq!(path(3).num_vertices(), 4);
        assert_eq!(hypercube(3).unwrap().dim(), 3);
        assert_eq!(grid(2, 3).unwrap().count_of_dim(2), 6);
        assert_eq!(
            strip().maximal_corner_arrays(),
            vec![vec![0, 1, 3, 4], vec![1, 2, 4, 5]]
        );
        assert!(!is_median(&k23()).is_median);
        let t = tricorner();
        assert_eq!(t.num_vertices(), 7);
        assert!(!link_condition_check(&t).holds);
        assert!(!is_cat0(&hollow_square()).is_cat0);
        assert!(is_cat0(&lshape()).is_cat0);
        assert!(tree(&[0, 0, 5]).is_err());
        assert_eq!(random_tree(10, 3).unwrap(), random_tree(10, 3).unwrap());
    }

    #[test]
    fn simplex_graph_of_an_edge_is_a_square() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let c = simplex_graph(&k2);
        assert_eq!(c.maximal_corner_arrays(), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn mycielski_sizes() {
        let m2 = mycielski_chain(2).unwrap();
        assert_eq!((m2.len(), m2.edge_count()), (5, 5));
        let m3 = mycielski_chain(3).unwrap();
        assert_eq!((m3.len(), m3.edge_count()), (11, 20));
        assert!(m3.has_triangle().is_none());
    }

    #[test]
    fn random_collapsible_small() {
        let (c0, d0) = random_collapsible(1, 0, 3).unwrap();
        assert_eq!((c0.num_vertices(), d0.steps.len()), (1, 0));
        let (c1, _) = random_collapsible(1, 1, 3).unwrap();
        assert_eq!(c1.maximal_corner_arrays(), vec![vec![0, 1]]);
        for seed in 0..5 {
            let (c, d) = random_collapsible(seed, 8, 3).unwrap();
            assert!(is_cat0(&c).is_cat0, "seed {seed}");
            assert!(verify_decomposition(&c, &d).valid, "seed {seed}");
            assert_eq!(random_collapsible(seed, 8, 3).unwrap().0, c);
        }
    }
}
