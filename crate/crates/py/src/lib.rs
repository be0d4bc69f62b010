//! Python bindings. Complexes cross the boundary as `cubecomplex/1` JSON,
//! points as `c<index>:x,y,...` strings and other artifacts as their JSON
//! formats.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use cubik::collapse::{collapse_all, expand_relabeled, Decomposition};
use cubik::coloring::DEFAULT_NODE_BUDGET;
use cubik::generators::{named, GenParams};
use cubik::hyperconvex::{
    ball_of_gcuboid, hyperconvexity_probe, GeneralizedCuboid, HyperconvexError, ProbeVerdict,
};
use cubik::hyperplanes::{HyperplaneError, HyperplaneSystem};
use cubik::io::{decomposition_to_json, hyperplane_report, parse_decomposition, ComplexDoc};
use cubik::median::{is_cat0, is_median, link_condition_check};
use cubik::metric::{distance, MetricError, PNorm};

create_exception!(
    cubik_py,
    BudgetExceeded,
    PyRuntimeError,
    "A search or coloring ran out of budget."
);

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn metric_err(e: MetricError) -> PyErr {
    match e {
        MetricError::BudgetExceeded(_) => BudgetExceeded::new_err(e.to_string()),
        _ => value_err(e),
    }
}

fn hyperplane_err(e: HyperplaneError) -> PyErr {
    match e {
        HyperplaneError::Coloring(_) => BudgetExceeded::new_err(e.to_string()),
        _ => value_err(e),
    }
}

fn hyperconvex_err(e: HyperconvexError) -> PyErr {
    match e {
        HyperconvexError::Metric(m) => metric_err(m),
        _ => value_err(e),
    }
}

/// A finite cube complex.
#[pyclass(module = "cubik_py", frozen)]
struct Complex {
    doc: ComplexDoc,
}

impl Complex {
    fn decomposition(&self, text: Option<&str>) -> PyResult<Decomposition> {
        match text {
            Some(t) => parse_decomposition(t).map_err(value_err),
            None => collapse_all(&self.doc.complex).map_err(value_err),
        }
    }
}

#[pymethods]
impl Complex {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Complex> {
        Ok(Complex {
            doc: ComplexDoc::parse(text).map_err(value_err)?,
        })
    }

    fn to_json(&self) -> String {
        self.doc.to_json()
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.doc.complex.num_vertices()
    }

    #[getter]
    fn num_cubes(&self) -> usize {
        self.doc.complex.num_cubes()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.doc.complex.dim()
    }

    fn vertices(&self) -> Vec<u32> {
        self.doc.complex.vertex_ids().to_vec()
    }

    /// Listed cubes as corner arrays, in file order.
    fn cubes(&self) -> Vec<Vec<u32>> {
        self.doc
            .cubes
            .iter()
            .map(|&q| self.doc.complex.cube(q).corners().to_vec())
            .collect()
    }

    fn is_median(&self) -> bool {
        is_median(self.doc.complex.graph()).is_median
    }

    fn link_condition(&self) -> bool {
        link_condition_check(&self.doc.complex).holds
    }

    fn is_cat0(&self) -> bool {
        is_cat0(&self.doc.complex).is_cat0
    }

    /// The `hyperplanes/1` report as JSON.
    fn hyperplanes(&self) -> PyResult<String> {
        Ok(hyperplane_report(&self.doc.complex)
            .map_err(hyperplane_err)?
            .to_string())
    }

    fn width(&self) -> PyResult<usize> {
        Ok(HyperplaneSystem::for_cat0(&self.doc.complex)
            .map_err(hyperplane_err)?
            .width())
    }

    /// Colors `1..=k` of the hyperplanes, greedy or exact.
    #[pyo3(signature = (exact = false))]
    fn coloring(&self, exact: bool) -> PyResult<Vec<usize>> {
        let sys = HyperplaneSystem::for_cat0(&self.doc.complex).map_err(hyperplane_err)?;
        let col = if exact {
            sys.chromatic_exact(DEFAULT_NODE_BUDGET)
                .map_err(hyperplane_err)?
                .1
        } else {
            sys.color_greedy()
        };
        Ok(col.colors)
    }

    /// A `cubedecomp/1` collapse down to one vertex.
    fn collapse(&self) -> PyResult<String> {
        Ok(decomposition_to_json(
            &collapse_all(&self.doc.complex).map_err(value_err)?,
        ))
    }

    /// Distance between two points; `p` is "1", "2", "inf" or a number > 1.
    #[pyo3(signature = (a, b, p = "2"))]
    fn distance(&self, a: &str, b: &str, p: &str) -> PyResult<f64> {
        let norm: PNorm = p.parse().map_err(value_err)?;
        let a = self.doc.point(a).map_err(value_err)?;
        let b = self.doc.point(b).map_err(value_err)?;
        Ok(distance(&self.doc.complex, &a, &b, norm)
            .map_err(metric_err)?
            .0)
    }

    /// Closed ℓ∞ ball around a point, as `gcuboid/1` JSON.
    #[pyo3(signature = (center, radius, decomposition = None))]
    fn ball(&self, center: &str, radius: f64, decomposition: Option<&str>) -> PyResult<String> {
        let c = &self.doc.complex;
        let d = self.decomposition(decomposition)?;
        let x = GeneralizedCuboid::point(c, &self.doc.point(center).map_err(value_err)?)
            .map_err(value_err)?;
        let b = ball_of_gcuboid(c, &d, &x, radius).map_err(hyperconvex_err)?;
        self.doc.gcuboid_to_json(&b).map_err(value_err)
    }

    /// A common point of the ℓ∞ balls, or `None`.
    #[pyo3(signature = (centers, radii, grid = 8, decomposition = None))]
    fn common_point(
        &self,
        centers: Vec<String>,
        radii: Vec<f64>,
        grid: usize,
        decomposition: Option<&str>,
    ) -> PyResult<Option<String>> {
        if grid == 0 {
            return Err(PyValueError::new_err("grid must be positive"));
        }
        let c = &self.doc.complex;
        let points = centers
            .iter()
            .map(|s| self.doc.point(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(value_err)?;
        let d = decomposition
            .map(parse_decomposition)
            .transpose()
            .map_err(value_err)?;
        match hyperconvexity_probe(c, &points, &radii, grid, d.as_ref()).map_err(hyperconvex_err)? {
            ProbeVerdict::CommonPointFound(p) => {
                Ok(Some(self.doc.format_point(&p).map_err(value_err)?))
            }
            _ => Ok(None),
        }
    }

    fn __repr__(&self) -> String {
        let c = &self.doc.complex;
        format!(
            "Complex(vertices={}, cubes={}, dim={})",
            c.num_vertices(),
            c.num_cubes(),
            c.dim()
        )
    }
}

/// A named complex; `random_collapsible` and `tree` need `seed`.
#[pyfunction]
#[pyo3(signature = (kind, n = None, m = None, seed = None, steps = None, cuboids = None))]
fn generate(
    kind: &str,
    n: Option<usize>,
    m: Option<usize>,
    seed: Option<u64>,
    steps: Option<usize>,
    cuboids: Option<usize>,
) -> PyResult<Complex> {
    let (c, _) = named(
        kind,
        &GenParams {
            n,
            m,
            seed,
            steps,
            cuboids,
        },
    )
    .map_err(value_err)?;
    Ok(Complex {
        doc: ComplexDoc::new(c),
    })
}

/// Rebuilds a complex from `cubedecomp/1` JSON with its recorded ids.
#[pyfunction]
fn expand(decomposition: &str) -> PyResult<Complex> {
    let d = parse_decomposition(decomposition).map_err(value_err)?;
    Ok(Complex {
        doc: ComplexDoc::new(expand_relabeled(&d).map_err(value_err)?),
    })
}

#[pymodule]
fn cubik_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Complex>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    Ok(())
}
