//! ℓp string metrics on cube complexes: string lengths, taut strings,
//! gallery-based distances and a lattice oracle.

mod bound;
mod conic;
mod norm;
mod oracle;
mod search;
mod solver;
mod taut;

pub use norm::{BadNorm, PNorm};
pub use oracle::{grid_oracle_distance, GridOracle};
pub use search::{distance, distance_with, region_distance, DistanceOptions, Region};
pub use solver::{Gallery, Site, SolverOptions};
pub use taut::{is_taut, minimize_string, tauten, TautFailure, TautVerdict};

use crate::complex::{ComplexError, CubeComplex, CubeId, PointLocation};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("string segment {0} has no common cube")]
    BrokenString(usize),
    #[error("points lie in different components")]
    Unreachable,
    #[error("dimension {0} exceeds the supported maximum")]
    DimensionTooLarge(usize),
    #[error("gallery search exceeded its budget of {0} evaluations")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Points `x_0..x_m` with carrier cubes: `x_i, x_{i+1} ∈ carriers[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MString {
    pub points: Vec<PointLocation>,
    pub carriers: Vec<CubeId>,
}

impl MString {
    /// Number of segments.
    pub fn m(&self) -> usize {
        self.carriers.len()
    }

    pub fn reversed(&self) -> MString {
        let mut points = self.points.clone();
        points.reverse();
        let mut carriers = self.carriers.clone();
        carriers.reverse();
        MString { points, carriers }
    }

    /// Checks shape and that each carrier holds both ends of its segment.
    pub fn validate(&self, c: &CubeComplex) -> Result<(), MetricError> {
        if self.points.len() != self.carriers.len() + 1 {
            return Err(MetricError::BrokenString(self.carriers.len()));
        }
        let pts = self
            .points
            .iter()
            .map(|p| c.canonical_point(p))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, &k) in self.carriers.iter().enumerate() {
            if k >= c.num_cubes()
                || c.point_in(&pts[i], k).is_none()
                || c.point_in(&pts[i + 1], k).is_none()
            {
                return Err(MetricError::BrokenString(i));
            }
        }
        Ok(())
    }

    /// Length of segment `i`, measured in its carrier.
    pub fn segment_length(&self, c: &CubeComplex, p: PNorm, i: usize) -> Result<f64, MetricError> {
        let k = self.carriers[i];
        let a = locate(c, &self.points[i], k).ok_or(MetricError::BrokenString(i))?;
        let b = locate(c, &self.points[i + 1], k).ok_or(MetricError::BrokenString(i))?;
        Ok(p.dist(&a, &b))
    }
}

/// Coordinates in `cube`, going through the canonical form when the
/// point is stated in some other cube.
fn locate(c: &CubeComplex, p: &PointLocation, cube: CubeId) -> Option<Vec<f64>> {
    c.point_in(p, cube)
        .or_else(|| c.point_in(&c.canonical_point(p).ok()?, cube))
}

/// Sum of per-cube segment lengths.
pub fn string_length(c: &CubeComplex, s: &MString, p: PNorm) -> Result<f64, MetricError> {
    s.validate(c)?;
    (0..s.m()).map(|i| s.segment_length(c, p, i)).sum()
}

/// Cube-local distance between two points sharing a cube.
pub fn in_cube_distance(
    c: &CubeComplex,
    a: &PointLocation,
    b: &PointLocation,
    cube: CubeId,
    p: PNorm,
) -> Option<f64> {
    Some(p.dist(&locate(c, a, cube)?, &locate(c, b, cube)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths_of_simple_strings() {
        let sq = CubeComplex::from_cubes(&[0, 1, 2, 3], &[vec![0, 1, 2, 3]]).unwrap();
        let q = sq.find(&[0, 1, 2, 3]).unwrap();
        let pt = |x: f64, y: f64| PointLocation::new(q, vec![x, y]);
        let s = MString {
            points: vec![pt(0.0, 0.0), pt(1.0, 1.0)],
            carriers: vec![q],
        };
        assert_eq!(string_length(&sq, &s, PNorm::Inf).unwrap(), 1.0);
        let s = MString {
            points: vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0)],
            carriers: vec![q, q],
        };
        assert_eq!(string_length(&sq, &s, PNorm::Two).unwrap(), 2.0);

        let strip =
            CubeComplex::from_cubes(&[0, 1, 2, 3, 4, 5], &[vec![0, 1, 3, 4], vec![1, 2, 4, 5]])
                .unwrap();
        let (l, r) = (
            strip.find(&[0, 1, 3, 4]).unwrap(),
            strip.find(&[1, 2, 4, 5]).unwrap(),
        );
        let s = MString {
            points: vec![
                PointLocation::new(l, vec![0.0, 0.0]),
                PointLocation::new(l, vec![1.0, 0.5]),
                PointLocation::new(r, vec![1.0, 1.0]),
            ],
            carriers: vec![l, r],
        };
        assert_eq!(string_length(&strip, &s, PNorm::Inf).unwrap(), 2.0);
        let broken = MString {
            points: s.points.clone(),
            carriers: vec![r, r],
        };
        assert_eq!(
            string_length(&strip, &broken, PNorm::Inf),
            Err(MetricError::BrokenString(0))
        );
    }
}
