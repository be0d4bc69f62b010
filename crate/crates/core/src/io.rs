//! JSON formats: `cubecomplex/1`, `cubedecomp/1`, `hyperplanes/1` and
//! `gcuboid/1`.
//!
//! Cube ids in files are positions in the complex file's `cubes` list.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::collapse::{CollapseStep, Decomposition, RemovedHalfspace};
use crate::complex::{canonicalize, ComplexError, CubeComplex, CubeId, PointLocation};
use crate::graph::VertexId;
use crate::hyperconvex::GeneralizedCuboid;
use crate::hyperplanes::{HyperplaneError, HyperplaneSystem};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("expected format {expected:?}, found {found:?}")]
    Format {
        expected: &'static str,
        found: String,
    },
    #[error("cube #{0} is not listed in canonical corner order")]
    NonCanonical(usize),
    #[error("no cube #{0} in the complex file")]
    UnknownCube(usize),
    #[error("bad point {0:?}: expected c<index>:x,y,...")]
    BadPoint(String),
    #[error("step {step}: new_vertices do not match the cuboids")]
    BadStep { step: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}

fn check_format(found: &str, expected: &'static str) -> Result<(), IoError> {
    if found == expected {
        Ok(())
    } else {
        Err(IoError::Format {
            expected,
            found: found.into(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    format: String,
    vertices: Vec<VertexId>,
    cubes: Vec<Vec<VertexId>>,
}

/// A complex together with the cube list of its file.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDoc {
    pub complex: CubeComplex,
    /// File position ↦ cube id.
    pub cubes: Vec<CubeId>,
}

impl ComplexDoc {
    /// Lists the maximal cubes.
    pub fn new(complex: CubeComplex) -> ComplexDoc {
        let cubes = complex.maximal().to_vec();
        ComplexDoc { complex, cubes }
    }

    pub fn parse(text: &str) -> Result<ComplexDoc, IoError> {
        let f: ComplexFile = serde_json::from_str(text)?;
        check_format(&f.format, "cubecomplex/1")?;
        let complex = CubeComplex::from_cubes(&f.vertices, &f.cubes)?;
        for (i, raw) in f.cubes.iter().enumerate() {
            if canonicalize(raw).0 != *raw {
                return Err(IoError::NonCanonical(i));
            }
        }
        let cubes = f
            .cubes
            .iter()
            .map(|raw| complex.find(raw).expect("listed cube"))
            .collect();
        Ok(ComplexDoc { complex, cubes })
    }

    pub fn to_json(&self) -> String {
        let f = ComplexFile {
            format: "cubecomplex/1".into(),
            vertices: self.complex.vertex_ids().to_vec(),
            cubes: self
                .cubes
                .iter()
                .map(|&q| self.complex.cube(q).corners().to_vec())
                .collect(),
        };
        serde_json::to_string(&f).expect("serializable")
    }

    pub fn cube(&self, index: usize) -> Result<CubeId, IoError> {
        self.cubes
            .get(index)
            .copied()
            .ok_or(IoError::UnknownCube(index))
    }

    /// File position of a cube, if listed.
    pub fn index_of(&self, q: CubeId) -> Option<usize> {
        self.cubes.iter().position(|&c| c == q)
    }

    /// Parses `c<index>:x,y,...` (no coordinates for a vertex cube).
    pub fn point(&self, s: &str) -> Result<PointLocation, IoError> {
        let bad = || IoError::BadPoint(s.into());
        let (head, tail) = s.trim().split_once(':').ok_or_else(bad)?;
        let index: usize = head
            .strip_prefix('c')
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        let coords = if tail.trim().is_empty() {
            Vec::new()
        } else {
            tail.split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        };
        let p = PointLocation::new(self.cube(index)?, coords);
        Ok(self.complex.canonical_point(&p)?)
    }

    /// Inverse of [`ComplexDoc::point`], in a listed maximal cube with
    /// nine-decimal coordinates.
    pub fn format_point(&self, p: &PointLocation) -> Result<String, IoError> {
        let c = &self.complex;
        let (index, coords) = c
            .maximal_cofaces(p.cube)
            .into_iter()
            .find_map(|m| Some((self.index_of(m)?, c.point_in(p, m)?)))
            .ok_or(IoError::UnknownCube(p.cube))?;
        let coords: Vec<String> = coords.iter().map(|x| format!("{x:.9}")).collect();
        Ok(format!("c{index}:{}", coords.join(",")))
    }

    pub fn gcuboid_to_json(&self, x: &GeneralizedCuboid) -> Result<String, IoError> {
        let mut boxes = BTreeMap::new();
        for (&q, b) in &x.boxes {
            let i = self.index_of(q).ok_or(IoError::UnknownCube(q))?;
            boxes.insert(
                i.to_string(),
                b.iter().map(|&(s, t)| [s, t]).collect::<Vec<_>>(),
            );
        }
        Ok(json!({"format": "gcuboid/1", "boxes": boxes}).to_string())
    }

    pub fn parse_gcuboid(&self, text: &str) -> Result<GeneralizedCuboid, IoError> {
        #[derive(Deserialize)]
        struct File {
            format: String,
            boxes: BTreeMap<String, Vec<[f64; 2]>>,
        }
        let f: File = serde_json::from_str(text)?;
        check_format(&f.format, "gcuboid/1")?;
        let mut boxes = BTreeMap::new();
        for (k, b) in f.boxes {
            let i: usize = k
                .parse()
                .map_err(|_| IoError::Json(format!("cube key {k:?} is not an index")))?;
            boxes.insert(self.cube(i)?, b.into_iter().map(|[s, t]| (s, t)).collect());
        }
        Ok(GeneralizedCuboid { boxes })
    }
}

#[derive(Serialize, Deserialize)]
struct StepFile {
    cuboids: Vec<Vec<VertexId>>,
    new_vertices: Vec<(VertexId, VertexId)>,
}

#[derive(Serialize, Deserialize)]
struct DecompFile {
    format: String,
    base_vertex: VertexId,
    steps: Vec<StepFile>,
}

/// `cubedecomp/1`, steps in expansion order.
pub fn decomposition_to_json(d: &Decomposition) -> String {
    let steps = d
        .expansion_order()
        .map(|s| StepFile {
            cuboids: s.cuboids.clone(),
            new_vertices: s.vertex_map.concat(),
        })
        .collect();
    let f = DecompFile {
        format: "cubedecomp/1".into(),
        base_vertex: d.base,
        steps,
    };
    serde_json::to_string(&f).expect("serializable")
}

/// `new_vertices` is read cuboid by cuboid, `|L_i|` pairs each.
pub fn parse_decomposition(text: &str) -> Result<Decomposition, IoError> {
    let f: DecompFile = serde_json::from_str(text)?;
    check_format(&f.format, "cubedecomp/1")?;
    let mut steps = Vec::with_capacity(f.steps.len());
    for (k, s) in f.steps.into_iter().enumerate() {
        if s.new_vertices.len() != s.cuboids.iter().map(Vec::len).sum::<usize>() {
            return Err(IoError::BadStep { step: k });
        }
        let mut rest = s.new_vertices.as_slice();
        let mut vertex_map = Vec::with_capacity(s.cuboids.len());
        for l in &s.cuboids {
            let (block, tail) = rest.split_at(l.len());
            vertex_map.push(block.to_vec());
            rest = tail;
        }
        let removed = vertex_map
            .iter()
            .map(|m| RemovedHalfspace {
                hyperplane: None,
                vertices: m.iter().map(|p| p.1).collect(),
            })
            .collect();
        steps.push(CollapseStep {
            removed,
            cuboids: s.cuboids,
            vertex_map,
        });
    }
    steps.reverse();
    Ok(Decomposition {
        steps,
        base: f.base_vertex,
    })
}

/// `hyperplanes/1` report. Halfspaces are listed side 0 first; width and
/// the greedy coloring need a CAT(0) complex and are `null` otherwise.
pub fn hyperplane_report(c: &CubeComplex) -> Result<Value, HyperplaneError> {
    let sys = HyperplaneSystem::new(c)?;
    let cat0 = HyperplaneSystem::for_cat0(c).is_ok();
    let hs: Vec<Value> = sys
        .hyperplanes
        .iter()
        .map(|h| {
            let (a, b) = sys.halfspaces(h.id);
            json!({"id": h.id, "dual_edges": h.dual_edges, "halfspaces": [a.vertices, b.vertices]})
        })
        .collect();
    let g = sys.crossing_graph();
    let crossings: Vec<[usize; 2]> = (0..g.len())
        .flat_map(|u| {
            g.neighbors(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| [u, v])
        })
        .collect();
    let (width, coloring) = if cat0 {
        (json!(sys.width()), json!(sys.color_greedy().colors))
    } else {
        (Value::Null, Value::Null)
    };
    Ok(json!({
        "format": "hyperplanes/1",
        "hyperplanes": hs,
        "crossing_edges": crossings,
        "width": width,
        "coloring": coloring,
    }))
}
