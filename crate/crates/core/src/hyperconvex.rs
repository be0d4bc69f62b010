//! Generalized cuboids, ℓ∞ balls along a collapse decomposition, property (P)
//! and hyperconvexity probes.
//!
//! A generalized cuboid stores one box per maximal cube it meets, in that
//! cube's local coordinates. Traces on smaller cubes are read off through
//! any maximal coface.

use std::collections::{BTreeMap, HashMap};

use crate::collapse::{verify_decomposition, Decomposition};
use crate::complex::{ComplexError, CubeComplex, CubeId, PointLocation};
use crate::graph::VertexId;
use crate::metric::{
    distance, region_distance, DistanceOptions, GridOracle, MetricError, PNorm, Region,
};

/// Slack when reading a box trace on a face.
const TRACE_TOL: f64 = 1e-9;
/// Boxes on a shared face count as equal within this.
const FACE_TOL: f64 = 1e-9;
/// Admissibility slack `d(x_i, x_j) ≤ r_i + r_j`.
const ADMIT_TOL: f64 = 1e-9;

pub type Interval = (f64, f64);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HyperconvexError {
    #[error("decomposition does not rebuild the complex: {0}")]
    NotCollapsible(String),
    #[error("radius must be a non-negative number, got {0}")]
    BadRadius(f64),
    #[error("{centers} centers but {radii} radii")]
    LengthMismatch { centers: usize, radii: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GeneralizedCuboid {
    pub boxes: BTreeMap<CubeId, Vec<Interval>>,
}

fn trace_in(
    c: &CubeComplex,
    boxes: &BTreeMap<CubeId, Vec<Interval>>,
    q: CubeId,
) -> Option<Vec<Interval>> {
    if let Some(b) = boxes.get(&q) {
        return Some(b.clone());
    }
    boxes
        .iter()
        .filter(|(&m, _)| c.is_face_of(q, m))
        .find_map(|(&m, b)| c.chart(q, m)?.restrict_box(b, TRACE_TOL))
}

fn meet_box(a: &[Interval], b: &[Interval]) -> Option<Vec<Interval>> {
    a.iter()
        .zip(b)
        .map(|(&(s1, t1), &(s2, t2))| {
            let (s, t) = (s1.max(s2), t1.min(t2));
            (s <= t + TRACE_TOL).then(|| (s.min(t), t))
        })
        .collect()
}

fn intersect_maps(
    a: &BTreeMap<CubeId, Vec<Interval>>,
    b: &BTreeMap<CubeId, Vec<Interval>>,
) -> BTreeMap<CubeId, Vec<Interval>> {
    a.iter()
        .filter_map(|(&m, x)| b.get(&m).and_then(|y| meet_box(x, y)).map(|z| (m, z)))
        .collect()
}

impl GeneralizedCuboid {
    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// A box on any cube, spread to every maximal coface.
    pub fn from_box(c: &CubeComplex, q: CubeId, b: &[Interval]) -> GeneralizedCuboid {
        let boxes = c
            .maximal_cofaces(q)
            .into_iter()
            .map(|m| (m, c.chart(q, m).expect("coface").embed_box(b)))
            .collect();
        GeneralizedCuboid { boxes }
    }

    pub fn point(c: &CubeComplex, p: &PointLocation) -> Result<GeneralizedCuboid, ComplexError> {
        let p = c.canonical_point(p)?;
        let b: Vec<Interval> = p.coords.iter().map(|&x| (x, x)).collect();
        Ok(Self::from_box(c, p.cube, &b))
    }

    /// The whole complex.
    pub fn whole(c: &CubeComplex) -> GeneralizedCuboid {
        let boxes = c
            .maximal()
            .iter()
            .map(|&m| (m, vec![(0.0, 1.0); c.cube(m).dim()]))
            .collect();
        GeneralizedCuboid { boxes }
    }

    /// Trace on cube `q` in its own coordinates.
    pub fn trace(&self, c: &CubeComplex, q: CubeId) -> Option<Vec<Interval>> {
        trace_in(c, &self.boxes, q)
    }

    pub fn contains(&self, c: &CubeComplex, p: &PointLocation) -> bool {
        let Ok(p) = c.canonical_point(p) else {
            return false;
        };
        self.trace(c, p.cube).is_some_and(|b| {
            b.iter()
                .zip(&p.coords)
                .all(|(&(s, t), &x)| s - TRACE_TOL <= x && x <= t + TRACE_TOL)
        })
    }

    pub fn to_region(&self) -> Region {
        Region {
            boxes: self.boxes.iter().map(|(&m, b)| (m, b.clone())).collect(),
        }
    }

    /// Centre of the first box.
    pub fn witness(&self, c: &CubeComplex) -> Option<PointLocation> {
        let (&m, b) = self.boxes.iter().next()?;
        let p = PointLocation::new(m, b.iter().map(|&(s, t)| 0.5 * (s + t)).collect());
        Some(c.canonical_point(&p).expect("box inside its cube"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GcuboidFailure {
    Empty,
    UnknownCube(CubeId),
    NotMaximal(CubeId),
    BadBox(CubeId),
    /// The traces of two boxes on their common face differ.
    FaceMismatch {
        a: CubeId,
        b: CubeId,
    },
    Disconnected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GcuboidVerdict {
    pub valid: bool,
    pub failures: Vec<GcuboidFailure>,
}

fn same_box(a: &[Interval], b: &[Interval]) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x.0 - y.0).abs() <= FACE_TOL && (x.1 - y.1).abs() <= FACE_TOL)
}

pub fn gcuboid_validate(c: &CubeComplex, x: &GeneralizedCuboid) -> GcuboidVerdict {
    let mut failures = Vec::new();
    if x.is_empty() {
        failures.push(GcuboidFailure::Empty);
    }
    for (&m, b) in &x.boxes {
        if m >= c.num_cubes() {
            failures.push(GcuboidFailure::UnknownCube(m));
        } else if !c.is_maximal(m) {
            failures.push(GcuboidFailure::NotMaximal(m));
        } else if b.len() != c.cube(m).dim()
            || b.iter().any(|&(s, t)| !(0.0 <= s && s <= t && t <= 1.0))
        {
            failures.push(GcuboidFailure::BadBox(m));
        }
    }
    if !failures.is_empty() {
        return GcuboidVerdict {
            valid: false,
            failures,
        };
    }
    let ids: Vec<CubeId> = x.boxes.keys().copied().collect();
    let pos: HashMap<CubeId, usize> = ids.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for adj in c.cube_adjacency() {
        let ta = x
            .boxes
            .get(&adj.a)
            .map(|b| c.chart(adj.face, adj.a).unwrap().restrict_box(b, TRACE_TOL));
        let tb = x
            .boxes
            .get(&adj.b)
            .map(|b| c.chart(adj.face, adj.b).unwrap().restrict_box(b, TRACE_TOL));
        let consistent = match (&ta, &tb) {
            (Some(Some(p)), Some(Some(q))) => same_box(p, q),
            (Some(Some(_)), _) | (_, Some(Some(_))) => false,
            _ => true,
        };
        if !consistent {
            failures.push(GcuboidFailure::FaceMismatch { a: adj.a, b: adj.b });
        }
        if let (Some(Some(p)), Some(Some(q))) = (&ta, &tb) {
            if meet_box(p, q).is_some() {
                let (i, j) = (
                    root(&mut parent, pos[&adj.a]),
                    root(&mut parent, pos[&adj.b]),
                );
                parent[i] = j;
            }
        }
    }
    let r0 = root(&mut parent, 0);
    if (1..ids.len()).any(|i| root(&mut parent, i) != r0) {
        failures.push(GcuboidFailure::Disconnected);
    }
    GcuboidVerdict {
        valid: failures.is_empty(),
        failures,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Intersection {
    Empty,
    Cuboid(GeneralizedCuboid),
    /// Nonempty, but the pieces do not form a connected set.
    Disconnected(GeneralizedCuboid),
}

impl Intersection {
    pub fn cuboid(&self) -> Option<&GeneralizedCuboid> {
        match self {
            Intersection::Empty => None,
            Intersection::Cuboid(x) | Intersection::Disconnected(x) => Some(x),
        }
    }
}

pub fn gcuboid_intersect(c: &CubeComplex, xs: &[GeneralizedCuboid]) -> Intersection {
    let Some((first, rest)) = xs.split_first() else {
        return Intersection::Cuboid(GeneralizedCuboid::whole(c));
    };
    let boxes = rest
        .iter()
        .fold(first.boxes.clone(), |acc, x| intersect_maps(&acc, &x.boxes));
    let out = GeneralizedCuboid { boxes };
    if out.is_empty() {
        Intersection::Empty
    } else if gcuboid_validate(c, &out)
        .failures
        .contains(&GcuboidFailure::Disconnected)
    {
        Intersection::Disconnected(out)
    } else {
        Intersection::Cuboid(out)
    }
}

type Boxes = BTreeMap<CubeId, Vec<Interval>>;

/// A maximal cube of a stage that lies in a prism `L_i × I`.
struct Prism {
    cuboid: usize,
    /// Face on the old vertices.
    base: CubeId,
    axis: usize,
    /// New vertices sit at coordinate 1 of `axis`.
    new_high: bool,
}

/// The complexes `C_0 ⊂ C_1 ⊂ … ⊂ C_S = c` of a decomposition, all read in
/// the cube ids of `c`. `C_0` is the base vertex.
struct Stages<'a> {
    c: &'a CubeComplex,
    level: HashMap<VertexId, usize>,
    cuboid_of: HashMap<VertexId, usize>,
    /// `[stage][cuboid]`: gate ↦ new vertex.
    partner: Vec<Vec<HashMap<VertexId, VertexId>>>,
    cube_level: Vec<usize>,
    maximal: Vec<Vec<CubeId>>,
    opts: DistanceOptions,
}

impl<'a> Stages<'a> {
    fn new(c: &'a CubeComplex, d: &Decomposition) -> Result<Self, HyperconvexError> {
        let v = verify_decomposition(c, d);
        if !v.valid {
            return Err(HyperconvexError::NotCollapsible(format!("{:?}", v.failure)));
        }
        let mut level = HashMap::from([(d.base, 0)]);
        let mut cuboid_of = HashMap::new();
        let mut partner = Vec::new();
        for (s, step) in d.expansion_order().enumerate() {
            let mut maps = Vec::new();
            for (i, pairs) in step.vertex_map.iter().enumerate() {
                for &(_, new) in pairs {
                    level.insert(new, s + 1);
                    cuboid_of.insert(new, i);
                }
                maps.push(pairs.iter().copied().collect());
            }
            partner.push(maps);
        }
        let cube_level: Vec<usize> = (0..c.num_cubes())
            .map(|q| c.corner_set(q).iter().map(|v| level[v]).max().unwrap_or(0))
            .collect();
        let maximal = (0..=partner.len())
            .map(|k| {
                (0..c.num_cubes())
                    .filter(|&q| {
                        cube_level[q] <= k
                            && c.cofaces(q).iter().all(|&f| f == q || cube_level[f] > k)
                    })
                    .collect()
            })
            .collect();
        Ok(Stages {
            c,
            level,
            cuboid_of,
            partner,
            cube_level,
            maximal,
            opts: DistanceOptions::default(),
        })
    }

    fn top(&self) -> usize {
        self.partner.len()
    }

    fn prism(&self, m: CubeId) -> Prism {
        let k = self.cube_level[m];
        let cube = self.c.cube(m);
        let is_new = |v: VertexId| self.level[&v] == k;
        let low_new = is_new(cube.corner(0));
        let axis = (0..cube.dim())
            .find(|&l| is_new(cube.corner(1 << l)) != low_new)
            .expect("prism axis");
        let old: Vec<VertexId> = cube
            .corners()
            .iter()
            .copied()
            .filter(|&v| !is_new(v))
            .collect();
        let first_new = *cube.corners().iter().find(|&&v| is_new(v)).unwrap();
        Prism {
            cuboid: self.cuboid_of[&first_new],
            base: self.c.find(&old).expect("prism base"),
            axis,
            new_high: !low_new,
        }
    }

    /// Base box and height interval of a prism cube box.
    fn split(&self, m: CubeId, p: &Prism, b: &[Interval]) -> (Vec<Interval>, Interval) {
        let map = self.c.chart(p.base, m).expect("base face");
        let base = map
            .axes
            .iter()
            .map(|&(l, r)| {
                if r {
                    (1.0 - b[l].1, 1.0 - b[l].0)
                } else {
                    b[l]
                }
            })
            .collect();
        let t = b[p.axis];
        (
            base,
            if p.new_high {
                t
            } else {
                (1.0 - t.1, 1.0 - t.0)
            },
        )
    }

    fn lift(&self, m: CubeId, p: &Prism, base: &[Interval], (t0, t1): Interval) -> Vec<Interval> {
        let mut out = self.c.chart(p.base, m).expect("base face").embed_box(base);
        out[p.axis] = if p.new_high {
            (t0, t1)
        } else {
            (1.0 - t1, 1.0 - t0)
        };
        out
    }

    /// Cuboid `i` of `stage`, as boxes on the maximal cubes of that stage.
    fn cuboid_boxes(&self, stage: usize, i: usize) -> Boxes {
        let gates = &self.partner[stage][i];
        let mut out = Boxes::new();
        for &n in &self.maximal[stage] {
            let f: Vec<VertexId> = self
                .c
                .corner_set(n)
                .iter()
                .copied()
                .filter(|v| gates.contains_key(v))
                .collect();
            if f.is_empty() {
                continue;
            }
            let f = self.c.find(&f).expect("cuboid traces are faces");
            let full = vec![(0.0, 1.0); self.c.cube(f).dim()];
            out.insert(n, self.c.chart(f, n).expect("face").embed_box(&full));
        }
        out
    }

    /// Boxes of any stage spread to the maximal cubes of `c`.
    fn region(&self, b: &Boxes) -> Region {
        let mut boxes = Vec::new();
        for (&q, x) in b {
            for m in self.c.maximal_cofaces(q) {
                boxes.push((m, self.c.chart(q, m).expect("coface").embed_box(x)));
            }
        }
        Region { boxes }
    }

    fn gap(&self, a: &Boxes, b: &Boxes) -> Result<f64, HyperconvexError> {
        Ok(region_distance(
            self.c,
            &self.region(a),
            &self.region(b),
            PNorm::Inf,
            &self.opts,
        )?
        .length)
    }

    /// Closed ℓ∞ ball of radius `r` around `x` inside `C_k`.
    fn ball(&self, k: usize, x: &Boxes, r: f64) -> Result<Boxes, HyperconvexError> {
        if x.is_empty() {
            return Ok(Boxes::new());
        }
        if k == 0 {
            return Ok(self.maximal[0].iter().map(|&v| (v, Vec::new())).collect());
        }
        let c = self.c;
        let below = k - 1;
        let xc: Boxes = self.maximal[below]
            .iter()
            .filter_map(|&n| trace_in(c, x, n).map(|b| (n, b)))
            .collect();
        let mut heights: BTreeMap<usize, Interval> = BTreeMap::new();
        for (&m, b) in x {
            if self.cube_level[m] == k {
                let p = self.prism(m);
                let (_, t) = self.split(m, &p, b);
                let e = heights.entry(p.cuboid).or_insert(t);
                *e = (e.0.min(t.0), e.1.max(t.1));
            }
        }
        let mut gaps: HashMap<usize, f64> = HashMap::new();
        let mut gap_to = |i: usize| -> Result<f64, HyperconvexError> {
            if let Some(&g) = gaps.get(&i) {
                return Ok(g);
            }
            let g = self.gap(x, &self.cuboid_boxes(below, i))?;
            gaps.insert(i, g);
            Ok(g)
        };
        let mut out = Boxes::new();
        if !xc.is_empty() {
            let inner = self.ball(below, &xc, r)?;
            for &m in &self.maximal[k] {
                if self.cube_level[m] < k {
                    if let Some(b) = trace_in(c, &inner, m) {
                        out.insert(m, b);
                    }
                    continue;
                }
                let p = self.prism(m);
                let top = match heights.get(&p.cuboid) {
                    Some(&(_, t)) => (t + r).min(1.0),
                    None => {
                        let r0 = gap_to(p.cuboid)?;
                        if r0 > r {
                            continue;
                        }
                        (r - r0).min(1.0)
                    }
                };
                if let Some(b) = trace_in(c, &inner, p.base) {
                    out.insert(m, self.lift(m, &p, &b, (0.0, top)));
                }
            }
            return Ok(out);
        }
        // x lies in one prism, above its base
        let (&i0, &(s, t)) = heights.iter().next().expect("x meets a prism");
        let gates = &self.partner[below][i0];
        let mut y = Boxes::new();
        for &n in &self.maximal[below] {
            let f: Vec<VertexId> = c
                .corner_set(n)
                .iter()
                .copied()
                .filter(|v| gates.contains_key(v))
                .collect();
            if f.is_empty() {
                continue;
            }
            let mut pc = f.clone();
            pc.extend(f.iter().map(|v| gates[v]));
            let (f, pq) = (
                c.find(&f).expect("face"),
                c.find(&pc).expect("prism over a face"),
            );
            if let Some(b) = trace_in(c, x, pq) {
                let p = self.prism(pq);
                let (base, _) = self.split(pq, &p, &b);
                y.insert(n, c.chart(f, n).expect("face").embed_box(&base));
            }
        }
        let around_y = self.ball(below, &y, r)?;
        let inner = if r >= s {
            let near_l = self.ball(below, &self.cuboid_boxes(below, i0), r - s)?;
            intersect_maps(&around_y, &near_l)
        } else {
            Boxes::new()
        };
        for &m in &self.maximal[k] {
            if self.cube_level[m] < k {
                if let Some(b) = trace_in(c, &inner, m) {
                    out.insert(m, b);
                }
                continue;
            }
            let p = self.prism(m);
            let (src, range) = if p.cuboid == i0 {
                (&around_y, ((s - r).max(0.0), (t + r).min(1.0)))
            } else {
                if inner.is_empty() {
                    continue;
                }
                let r0 = gap_to(p.cuboid)?;
                if r0 > r {
                    continue;
                }
                (&inner, (0.0, (r - r0).min(1.0)))
            };
            if let Some(b) = trace_in(c, src, p.base) {
                out.insert(m, self.lift(m, &p, &b, range));
            }
        }
        Ok(out)
    }
}

/// Closed ℓ∞ ball `{p : d∞(p, X) ≤ r}`, built stage by stage along `d`.
pub fn ball_of_gcuboid(
    c: &CubeComplex,
    d: &Decomposition,
    x: &GeneralizedCuboid,
    r: f64,
) -> Result<GeneralizedCuboid, HyperconvexError> {
    if !r.is_finite() || r < 0.0 {
        return Err(HyperconvexError::BadRadius(r));
    }
    let st = Stages::new(c, d)?;
    Ok(GeneralizedCuboid {
        boxes: st.ball(st.top(), &x.boxes, r)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum PropertyP {
    /// Members `pair.0` and `pair.1` are disjoint.
    PrecondFailed {
        pair: (usize, usize),
    },
    Holds {
        witness: PointLocation,
    },
    /// Pairwise intersections are nonempty but the total one is empty.
    Fails,
}

pub fn property_p_check(c: &CubeComplex, xs: &[GeneralizedCuboid]) -> PropertyP {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if intersect_maps(&xs[i].boxes, &xs[j].boxes).is_empty() {
                return PropertyP::PrecondFailed { pair: (i, j) };
            }
        }
    }
    match gcuboid_intersect(c, xs).cuboid().and_then(|x| x.witness(c)) {
        Some(witness) => PropertyP::Holds { witness },
        None => PropertyP::Fails,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeVerdict {
    NotAdmissible {
        pair: (usize, usize),
        distance: f64,
    },
    CommonPointFound(PointLocation),
    /// No common point on the lattice of spacing `1/k` or by local descent.
    NoCommonPointAtResolution(usize),
}

/// Looks for a point in all closed ℓ∞ balls `B(centers[i], radii[i])`.
///
/// With a decomposition the balls are built exactly and intersected;
/// otherwise lattice points of spacing `1/k` are scanned using grid-oracle
/// upper bounds, then the best one is refined by pattern search on exact
/// distances.
pub fn hyperconvexity_probe(
    c: &CubeComplex,
    centers: &[PointLocation],
    radii: &[f64],
    k: usize,
    decomposition: Option<&Decomposition>,
) -> Result<ProbeVerdict, HyperconvexError> {
    if centers.len() != radii.len() {
        return Err(HyperconvexError::LengthMismatch {
            centers: centers.len(),
            radii: radii.len(),
        });
    }
    if let Some(&r) = radii.iter().find(|r| !r.is_finite() || **r < 0.0) {
        return Err(HyperconvexError::BadRadius(r));
    }
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            let (d, _) = distance(c, &centers[i], &centers[j], PNorm::Inf)?;
            if d > radii[i] + radii[j] + ADMIT_TOL {
                return Ok(ProbeVerdict::NotAdmissible {
                    pair: (i, j),
                    distance: d,
                });
            }
        }
    }
    match centers {
        [] => return Ok(ProbeVerdict::NoCommonPointAtResolution(k)),
        [p] => return Ok(ProbeVerdict::CommonPointFound(c.canonical_point(p)?)),
        _ => {}
    }
    if let Some(d) = decomposition {
        let balls = centers
            .iter()
            .zip(radii)
            .map(|(p, &r)| ball_of_gcuboid(c, d, &GeneralizedCuboid::point(c, p)?, r))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(match property_p_check(c, &balls) {
            PropertyP::Holds { witness } => ProbeVerdict::CommonPointFound(witness),
            _ => ProbeVerdict::NoCommonPointAtResolution(k),
        });
    }
    let oracle = GridOracle::new(c, PNorm::Inf, k);
    let fields: Vec<Vec<f64>> = centers.iter().map(|p| oracle.field(p)).collect();
    let excess = |node: usize| {
        fields
            .iter()
            .zip(radii)
            .map(|(f, r)| f[node] - r)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let (best, score) = (0..oracle.num_nodes())
        .map(|u| (u, excess(u)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty lattice");
    let start = oracle.node_location(best);
    if score <= 0.0 {
        return Ok(ProbeVerdict::CommonPointFound(start));
    }
    match descend(c, centers, radii, &start, 1.0 / k as f64)? {
        Some(p) => Ok(ProbeVerdict::CommonPointFound(p)),
        None => Ok(ProbeVerdict::NoCommonPointAtResolution(k)),
    }
}

/// Pattern search on `max_i d(p, x_i) − r_i` inside maximal cubes holding `start`.
fn descend(
    c: &CubeComplex,
    centers: &[PointLocation],
    radii: &[f64],
    start: &PointLocation,
    step: f64,
) -> Result<Option<PointLocation>, HyperconvexError> {
    let excess = |p: &PointLocation| -> Result<f64, HyperconvexError> {
        let mut worst = f64::NEG_INFINITY;
        for (x, r) in centers.iter().zip(radii) {
            worst = worst.max(distance(c, p, x, PNorm::Inf)?.0 - r);
        }
        Ok(worst)
    };
    for m in c.maximal_cofaces(start.cube) {
        let mut y = c.point_in(start, m).expect("coface");
        let mut here = PointLocation::new(m, y.clone());
        let mut val = excess(&here)?;
        let mut h = step;
        while h > step / 64.0 && val > ADMIT_TOL {
            let mut moved = false;
            for l in 0..y.len() {
                for sign in [-1.0, 1.0] {
                    let mut z = y.clone();
                    z[l] = (z[l] + sign * h).clamp(0.0, 1.0);
                    let cand = PointLocation::new(m, z.clone());
                    let v = excess(&cand)?;
                    if v < val {
                        (y, here, val, moved) = (z, cand, v, true);
                    }
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        if val <= ADMIT_TOL {
            return Ok(Some(c.canonical_point(&here)?));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::collapse_all;
    use crate::generators::{hypercube, path, strip, tricorner};

    fn single(m: CubeId, b: &[Interval]) -> GeneralizedCuboid {
        GeneralizedCuboid {
            boxes: BTreeMap::from([(m, b.to_vec())]),
        }
    }

    fn close(a: &[Interval], b: &[Interval]) -> bool {
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(x, y)| (x.0 - y.0).abs() < 1e-7 && (x.1 - y.1).abs() < 1e-7)
    }

    #[test]
    fn validation_examples() {
        let sq = hypercube(2).unwrap();
        let m = sq.maximal()[0];
        assert!(gcuboid_validate(&sq, &single(m, &[(0.2, 0.4), (0.0, 1.0)])).valid);
        let v = GeneralizedCuboid::point(&sq, &sq.vertex_point(3).unwrap()).unwrap();
        assert!(gcuboid_validate(&sq, &v).valid);

        let s = strip();
        let (a, b) = (
            s.find(&[0, 1, 3, 4]).unwrap(),
            s.find(&[1, 2, 4, 5]).unwrap(),
        );
        let x = GeneralizedCuboid {
            boxes: BTreeMap::from([
                (a, vec![(0.0, 0.3), (0.0, 0.2)]),
                (b, vec![(0.7, 1.0), (0.5, 1.0)]),
            ]),
        };
        let v = gcuboid_validate(&s, &x);
        assert!(!v.valid && v.failures.contains(&GcuboidFailure::Disconnected));
        let touching = GeneralizedCuboid {
            boxes: BTreeMap::from([
                (a, vec![(0.5, 1.0), (0.0, 0.2)]),
                (b, vec![(0.0, 0.4), (0.0, 0.2)]),
            ]),
        };
        assert!(gcuboid_validate(&s, &touching).valid);
    }

    #[test]
    fn intersection_examples() {
        let sq = hypercube(2).unwrap();
        let m = sq.maximal()[0];
        let xs = [
            single(m, &[(0.0, 0.5), (0.2, 0.9)]),
            single(m, &[(0.3, 1.0), (0.0, 0.5)]),
            single(m, &[(0.1, 0.4), (0.4, 1.0)]),
        ];
        match gcuboid_intersect(&sq, &xs) {
            Intersection::Cuboid(x) => assert!(close(&x.boxes[&m], &[(0.3, 0.4), (0.4, 0.5)])),
            other => panic!("{other:?}"),
        }
        let x = single(m, &[(0.0, 0.2), (0.0, 0.2)]);
        assert_eq!(
            gcuboid_intersect(&sq, &[x.clone(), single(m, &[(0.5, 0.7), (0.0, 0.2)])]),
            Intersection::Empty
        );
        assert_eq!(
            gcuboid_intersect(&sq, &[GeneralizedCuboid::whole(&sq), x.clone()]),
            Intersection::Cuboid(x)
        );
        assert!(matches!(
            property_p_check(&sq, &xs),
            PropertyP::Holds { .. }
        ));
    }

    #[test]
    fn segment_and_square_balls() {
        let seg = path(1);
        let d = collapse_all(&seg).unwrap();
        let e = seg.maximal()[0];
        let mid = GeneralizedCuboid::point(&seg, &PointLocation::new(e, vec![0.5])).unwrap();
        let b = ball_of_gcuboid(&seg, &d, &mid, 0.3).unwrap();
        assert!(close(&b.boxes[&e], &[(0.2, 0.8)]), "{b:?}");

        let sq = hypercube(2).unwrap();
        let d = collapse_all(&sq).unwrap();
        let m = sq.maximal()[0];
        let corner = GeneralizedCuboid::point(&sq, &sq.vertex_point(0).unwrap()).unwrap();
        let b = ball_of_gcuboid(&sq, &d, &corner, 0.5).unwrap();
        assert!(close(&b.boxes[&m], &[(0.0, 0.5), (0.0, 0.5)]), "{b:?}");
    }

    #[test]
    fn strip_ball() {
        let s = strip();
        let d = collapse_all(&s).unwrap();
        let x = GeneralizedCuboid::point(&s, &s.vertex_point(0).unwrap()).unwrap();
        let b = ball_of_gcuboid(&s, &d, &x, 1.5).unwrap();
        let (left, right) = (
            s.find(&[0, 1, 3, 4]).unwrap(),
            s.find(&[1, 2, 4, 5]).unwrap(),
        );
        assert!(close(&b.boxes[&left], &[(0.0, 1.0), (0.0, 1.0)]), "{b:?}");
        assert!(close(&b.boxes[&right], &[(0.0, 0.5), (0.0, 1.0)]), "{b:?}");
        assert!(gcuboid_validate(&s, &b).valid);
    }

    #[test]
    fn disjoint_pair_fails_precondition() {
        let sq = hypercube(2).unwrap();
        let m = sq.maximal()[0];
        let xs = [
            single(m, &[(0.0, 0.1), (0.0, 0.1)]),
            single(m, &[(0.0, 1.0), (0.0, 1.0)]),
            single(m, &[(0.9, 1.0), (0.0, 1.0)]),
        ];
        assert_eq!(
            property_p_check(&sq, &xs),
            PropertyP::PrecondFailed { pair: (0, 2) }
        );
    }

    #[test]
    fn tricorner_probe_finds_no_common_point() {
        let c = tricorner();
        let (a, cc) = (
            c.find(&[0, 1, 2, 3]).unwrap(),
            c.find(&[0, 2, 4, 6]).unwrap(),
        );
        let centers = [
            PointLocation::new(a, vec![1.0 / 16.0, 0.0]),
            PointLocation::new(cc, vec![3.0 / 16.0, 1.0 / 16.0]),
            PointLocation::new(cc, vec![1.0 / 16.0, 3.0 / 16.0]),
        ];
        let radii = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 16.0];
        let v = hyperconvexity_probe(&c, &centers, &radii, 128, None).unwrap();
        assert_eq!(v, ProbeVerdict::NoCommonPointAtResolution(128));
        let one = hyperconvexity_probe(&c, &centers[..1], &radii[..1], 8, None).unwrap();
        assert_eq!(
            one,
            ProbeVerdict::CommonPointFound(c.canonical_point(&centers[0]).unwrap())
        );
    }
}
