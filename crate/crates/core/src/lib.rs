//! Cube complexes: median/CAT(0) checks, hyperplanes, collapsing
//! decompositions, ℓp metrics and hyperconvexity probes.

pub mod bitset;
pub mod collapse;
pub mod coloring;
pub mod complex;
pub mod generators;
pub mod graph;
pub mod hyperconvex;
pub mod hyperplanes;
pub mod io;
pub mod median;
pub mod metric;

pub use bitset::VertexSet;
pub use complex::{completion_from_graph, Cube, CubeComplex, CubeId, PointLocation};
pub use graph::{Graph, VertexId};
