//! Regular collapse of CAT(0) cube complexes and the inverse expansion.
//!
//! A collapse round removes pairwise disjoint minimal halfspaces; each
//! removed halfspace projects (via gates across its dual edges) onto a
//! cuboid of the remaining complex. Expansion glues prisms `L × [0,1]`
//! back onto those cuboids, always at the `0` end.

use std::collections::{BTreeSet, HashMap};

use crate::coloring::Coloring;
use crate::complex::{canonicalize, CubeComplex};
use crate::graph::{Graph, GraphError, VertexId};
use crate::hyperplanes::{HyperplaneError, HyperplaneId, HyperplaneSystem};
use crate::median::is_cat0;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CollapseError {
    #[error("complex is not CAT(0)")]
    NotCat0,
    #[error("hyperplane {0} is not extremal")]
    NotExtremal(HyperplaneId),
    #[error("hyperplanes {0} and {1} are not disjoint")]
    NotDisjoint(HyperplaneId, HyperplaneId),
    #[error("cuboid #{cuboid} is not a cuboid: {reason}")]
    NotACuboid {
        cuboid: usize,
        /// The cube whose intersection with the cuboid is not a face.
        cube: Option<Vec<VertexId>>,
        reason: String,
    },
    #[error("new vertex {0} collides with an existing vertex")]
    Overlap(VertexId),
    #[error(transparent)]
    Hyperplane(#[from] HyperplaneError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovedHalfspace {
    /// Hyperplane id in the complex the step was taken from (absent when loaded from a file).
    pub hyperplane: Option<HyperplaneId>,
    pub vertices: Vec<VertexId>,
}

/// One collapse round. Entry `i` of each list belongs to the same hyperplane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseStep {
    pub removed: Vec<RemovedHalfspace>,
    /// Cuboid vertex sets in the reduced complex, sorted.
    pub cuboids: Vec<Vec<VertexId>>,
    /// Per cuboid, `(gate, removed vertex)` pairs sorted by gate.
    pub vertex_map: Vec<Vec<(VertexId, VertexId)>>,
}

/// Steps in collapse order; the last step leaves `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub steps: Vec<CollapseStep>,
    pub base: VertexId,
}

impl Decomposition {
    /// Steps in expansion order.
    pub fn expansion_order(&self) -> impl Iterator<Item = &CollapseStep> {
        self.steps.iter().rev()
    }
}

/// Collapses a disjoint class of extremal hyperplanes.
pub fn multicollapse_round(
    c: &CubeComplex,
    class: &[HyperplaneId],
) -> Result<(CubeComplex, CollapseStep), CollapseError> {
    if !is_cat0(c).is_cat0 {
        return Err(CollapseError::NotCat0);
    }
    let sys = HyperplaneSystem::new(c)?;
    let extremal: HashMap<HyperplaneId, u8> = sys.extremal().into_iter().collect();
    let mut chosen = Vec::with_capacity(class.len());
    for &h in class {
        let side = *extremal.get(&h).ok_or(CollapseError::NotExtremal(h))?;
        chosen.push((h, side));
    }
    for (i, &(a, sa)) in chosen.iter().enumerate() {
        for &(b, sb) in &chosen[i + 1..] {
            let crossing = sys.crossing_graph().has_edge(a, b);
            if a == b || crossing || !sys.side_set(a, sa).is_disjoint(sys.side_set(b, sb)) {
                return Err(CollapseError::NotDisjoint(a, b));
            }
        }
    }
    Ok(collapse_unchecked(c, &sys, &chosen))
}

fn collapse_unchecked(
    c: &CubeComplex,
    sys: &HyperplaneSystem,
    chosen: &[(HyperplaneId, u8)],
) -> (CubeComplex, CollapseStep) {
    let g = c.graph();
    let mut keep = sys.side_set(0, 0).clone();
    keep.union_with(sys.side_set(0, 1));
    let mut step = CollapseStep {
        removed: Vec::new(),
        cuboids: Vec::new(),
        vertex_map: Vec::new(),
    };
    for &(h, side) in chosen {
        let removed = sys.side_set(h, side);
        keep.intersect_with(&removed.complement());
        let mut pairs: Vec<(VertexId, VertexId)> = sys.hyperplanes[h]
            .dual_edges
            .iter()
            .map(|&(a, b)| {
                if removed.contains(g.pos(a).unwrap()) {
                    (b, a)
                } else {
                    (a, b)
                }
            })
            .collect();
        pairs.sort_unstable();
        step.removed.push(RemovedHalfspace {
            hyperplane: Some(h),
            vertices: g.labels(removed),
        });
        step.cuboids.push(pairs.iter().map(|p| p.0).collect());
        step.vertex_map.push(pairs);
    }
    (c.induced(&keep), step)
}

/// Collapses a CAT(0) complex down to a single vertex.
pub fn collapse_all(c: &CubeComplex) -> Result<Decomposition, CollapseError> {
    if !is_cat0(c).is_cat0 {
        return Err(CollapseError::NotCat0);
    }
    let mut cur = c.clone();
    let mut steps = Vec::new();
    while cur.num_vertices() > 1 {
        let sys = HyperplaneSystem::new(&cur)?;
        let extremal = sys.extremal();
        let coloring = sys.color_greedy();
        let color = extremal
            .iter()
            .map(|&(h, _)| coloring.colors[h])
            .min()
            .expect("finite CAT(0) complexes have extremal hyperplanes");
        let class: Vec<(HyperplaneId, u8)> = extremal
            .into_iter()
            .filter(|&(h, _)| coloring.colors[h] == color)
            .collect();
        let (next, step) = collapse_unchecked(&cur, &sys, &class);
        steps.push(step);
        cur = next;
    }
    Ok(Decomposition {
        steps,
        base: cur.vertex_ids()[0],
    })
}

/// Checks that each vertex set is a connected subcomplex meeting every
/// maximal cube in a face.
fn check_cuboids(c: &CubeComplex, cuboids: &[Vec<VertexId>]) -> Result<(), CollapseError> {
    let g = c.graph();
    for (i, l) in cuboids.iter().enumerate() {
        let bad = |reason: &str, cube: Option<Vec<VertexId>>| CollapseError::NotACuboid {
            cuboid: i,
            cube,
            reason: reason.to_string(),
        };
        if l.is_empty() {
            return Err(bad("empty", None));
        }
        let set = g.set_of(l)?;
        if set.count() != l.len() {
            return Err(bad("repeated vertex", None));
        }
        if !g.is_connected_subset(&set) {
            return Err(bad("not connected", None));
        }
        for &m in c.maximal() {
            let cube = c.cube(m);
            let common: Vec<VertexId> = cube
                .corners()
                .iter()
                .copied()
                .filter(|&v| set.contains(g.pos(v).unwrap()))
                .collect();
            if !common.is_empty() && cube.face_pattern(&common).is_none() {
                return Err(bad(
                    "meets a cube in a non-face",
                    Some(cube.corners().to_vec()),
                ));
            }
        }
    }
    Ok(())
}

/// Glues a prism onto each cuboid; `new_ids[i][j]` is the partner of the
/// `j`-th smallest vertex of cuboid `i`.
fn expand_with_ids(
    c: &CubeComplex,
    cuboids: &[Vec<VertexId>],
    new_ids: &[Vec<VertexId>],
) -> Result<CubeComplex, CollapseError> {
    check_cuboids(c, cuboids)?;
    let g = c.graph();
    let mut vertices: BTreeSet<VertexId> = g.ids().iter().copied().collect();
    let mut edges = g.edges();
    let mut cubes = c.maximal_corner_arrays();
    for (l, fresh) in cuboids.iter().zip(new_ids) {
        let mut sorted = l.clone();
        sorted.sort_unstable();
        let partner: HashMap<VertexId, VertexId> =
            sorted.iter().copied().zip(fresh.iter().copied()).collect();
        for &v in &sorted {
            let w = partner[&v];
            if !vertices.insert(w) {
                return Err(CollapseError::Overlap(w));
            }
            edges.push((v, w));
        }
        for q in c.cubes() {
            if q.dim() > 0 && q.corners().iter().all(|v| partner.contains_key(v)) {
                edges.extend(
                    q.edges()
                        .into_iter()
                        .map(|(a, b)| (partner[&a], partner[&b])),
                );
                let mut raw = q.corners().to_vec();
                raw.extend(q.corners().iter().map(|v| partner[v]));
                cubes.push(canonicalize(&raw).0);
            }
        }
    }
    let graph = Graph::new(vertices, edges)?;
    Ok(CubeComplex::assemble(graph, cubes))
}

/// Expands along the given cuboids with fresh ids: one new vertex per
/// cuboid vertex, numbered from `max id + 1` in cuboid order and ascending
/// vertex order.
pub fn expand_step(
    c: &CubeComplex,
    cuboids: &[Vec<VertexId>],
) -> Result<CubeComplex, CollapseError> {
    let mut next = c.vertex_ids().last().map_or(0, |&v| v + 1);
    let new_ids: Vec<Vec<VertexId>> = cuboids
        .iter()
        .map(|l| {
            let ids = (next..next + l.len() as VertexId).collect();
            next += l.len() as VertexId;
            ids
        })
        .collect();
    expand_with_ids(c, cuboids, &new_ids)
}

fn recorded_ids(step: &CollapseStep) -> Vec<Vec<VertexId>> {
    step.vertex_map
        .iter()
        .map(|m| m.iter().map(|p| p.1).collect())
        .collect()
}

/// Replays a decomposition with fresh ids. Returns the rebuilt complex and
/// the map from its vertex ids to the ids recorded in the decomposition.
pub fn expand_all(
    d: &Decomposition,
) -> Result<(CubeComplex, HashMap<VertexId, VertexId>), CollapseError> {
    let mut cur = CubeComplex::from_cubes(&[0], &[]).expect("single vertex");
    let mut to_orig: HashMap<VertexId, VertexId> = HashMap::from([(0, d.base)]);
    let mut from_orig: HashMap<VertexId, VertexId> = HashMap::from([(d.base, 0)]);
    for step in d.expansion_order() {
        let mut cuboids = Vec::with_capacity(step.cuboids.len());
        for l in &step.cuboids {
            let mapped: Option<Vec<VertexId>> =
                l.iter().map(|v| from_orig.get(v).copied()).collect();
            cuboids.push(mapped.ok_or(CollapseError::NotACuboid {
                cuboid: cuboids.len(),
                cube: None,
                reason: "references a vertex not yet present".into(),
            })?);
        }
        let mut next = cur.vertex_ids().last().map_or(0, |&v| v + 1);
        let mut new_ids = Vec::with_capacity(cuboids.len());
        for (l, pairs) in cuboids.iter().zip(&step.vertex_map) {
            // pairs are sorted by recorded gate id; fresh ids follow the current ids
            let mut order: Vec<(VertexId, VertexId)> = pairs
                .iter()
                .map(|&(gate, new)| (from_orig[&gate], new))
                .collect();
            order.sort_unstable();
            if order.len() != l.len() {
                return Err(CollapseError::NotACuboid {
                    cuboid: new_ids.len(),
                    cube: None,
                    reason: "vertex map size mismatch".into(),
                });
            }
            let mut fresh = Vec::with_capacity(order.len());
            for &(_, orig) in &order {
                if from_orig.insert(orig, next).is_some() {
                    return Err(CollapseError::Overlap(orig));
                }
                to_orig.insert(next, orig);
                fresh.push(next);
                next += 1;
            }
            new_ids.push(fresh);
        }
        cur = expand_with_ids(&cur, &cuboids, &new_ids)?;
    }
    Ok((cur, to_orig))
}

/// [`expand_all`] with the vertex ids recorded in `d`.
pub fn expand_relabeled(d: &Decomposition) -> Result<CubeComplex, CollapseError> {
    let (built, to_orig) = expand_all(d)?;
    let mut vertices: Vec<VertexId> = built.vertex_ids().iter().map(|v| to_orig[v]).collect();
    vertices.sort_unstable();
    let cubes: Vec<Vec<VertexId>> = built
        .maximal_corner_arrays()
        .iter()
        .map(|q| q.iter().map(|v| to_orig[v]).collect())
        .collect();
    Ok(CubeComplex::from_cubes(&vertices, &cubes).expect("relabelling keeps a valid complex"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionFailure {
    NotACuboid { step: usize, error: CollapseError },
    Overlap { step: usize, vertex: VertexId },
    NotIsomorphic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionVerdict {
    pub valid: bool,
    pub failure: Option<DecompositionFailure>,
}

/// Replays `d` with its recorded ids and compares the result with `c`.
/// Step indices in failures count in expansion order.
pub fn verify_decomposition(c: &CubeComplex, d: &Decomposition) -> DecompositionVerdict {
    let fail = |f| DecompositionVerdict {
        valid: false,
        failure: Some(f),
    };
    let mut cur = CubeComplex::from_cubes(&[d.base], &[]).expect("single vertex");
    for (k, step) in d.expansion_order().enumerate() {
        let consistent = step.vertex_map.len() == step.cuboids.len()
            && step.cuboids.iter().zip(&step.vertex_map).all(|(l, m)| {
                let mut l2 = l.clone();
                l2.sort_unstable();
                l2 == m.iter().map(|p| p.0).collect::<Vec<_>>()
            });
        if !consistent {
            let error = CollapseError::NotACuboid {
                cuboid: 0,
                cube: None,
                reason: "vertex map does not match cuboid".into(),
            };
            return fail(DecompositionFailure::NotACuboid { step: k, error });
        }
        match expand_with_ids(&cur, &step.cuboids, &recorded_ids(step)) {
            Ok(next) => cur = next,
            Err(CollapseError::Overlap(vertex)) => {
                return fail(DecompositionFailure::Overlap { step: k, vertex })
            }
            Err(error) => return fail(DecompositionFailure::NotACuboid { step: k, error }),
        }
    }
    if cur != *c {
        return fail(DecompositionFailure::NotIsomorphic);
    }
    DecompositionVerdict {
        valid: true,
        failure: None,
    }
}

/// Colors each hyperplane of `c` by the expansion step that created it.
pub fn decomposition_coloring(sys: &HyperplaneSystem, d: &Decomposition) -> Coloring {
    let mut colors = vec![0; sys.len()];
    for (k, step) in d.expansion_order().enumerate() {
        for &(gate, new) in step.vertex_map.iter().flatten() {
            if let Some(h) = sys.class_of_edge(gate, new) {
                if colors[h] == 0 {
                    colors[h] = k + 1;
                }
            }
        }
    }
    Coloring {
        colors,
        num_colors: d.steps.len(),
    }
}
