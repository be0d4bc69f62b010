//! Lower bounds on distances from hyperplane coordinates.
//!
//! Each hyperplane `H` gives a function `φ_H` equal to the coordinate dual
//! to `H` in cubes crossing it and to 0 or 1 elsewhere. Along any string,
//! `ℓ1 length ≥ Σ_H |Δφ_H|`, and `ℓp length ≥ n^(1/p − 1) · ℓ1 length` in
//! cubes of dimension at most `n`.

use std::collections::HashMap;

use crate::complex::{CubeComplex, CubeId};
use crate::hyperplanes::HyperplaneSystem;

use super::norm::PNorm;
use super::search::Region;

pub(super) struct HyperplaneBound<'a> {
    c: &'a CubeComplex,
    /// Per cube axis: hyperplane and whether corner 0 lies on side 1.
    axes: Vec<Vec<(usize, bool)>>,
    /// `[vertex position][hyperplane]`: on side 1.
    side: Vec<Vec<bool>>,
    target: Vec<(f64, f64)>,
    scale: f64,
    memo: HashMap<CubeId, f64>,
}

impl<'a> HyperplaneBound<'a> {
    /// `None` when some hyperplane does not split the complex in two or
    /// crosses a cube twice.
    pub(super) fn new(c: &'a CubeComplex, target: &Region, p: PNorm) -> Option<Self> {
        let sys = HyperplaneSystem::new(c).ok()?;
        let g = c.graph();
        let mut axes = Vec::with_capacity(c.num_cubes());
        for q in 0..c.num_cubes() {
            let cube = c.cube(q);
            let v0 = cube.corner(0);
            let mut row: Vec<(usize, bool)> = Vec::with_capacity(cube.dim());
            for l in 0..cube.dim() {
                let h = sys.class_of_edge(v0, cube.corner(1 << l))?;
                if row.iter().any(|&(k, _)| k == h) {
                    return None;
                }
                row.push((h, sys.side_set(h, 1).contains(g.pos(v0)?)));
            }
            axes.push(row);
        }
        let side = (0..c.num_vertices())
            .map(|v| {
                (0..sys.len())
                    .map(|h| sys.side_set(h, 1).contains(v))
                    .collect()
            })
            .collect();
        let inv_p = match p {
            PNorm::One => 1.0,
            PNorm::Two => 0.5,
            PNorm::Inf => 0.0,
            PNorm::P(x) => 1.0 / x,
        };
        let scale = (c.dim().max(1) as f64).powf(inv_p - 1.0);
        let mut out = HyperplaneBound {
            c,
            axes,
            side,
            target: Vec::new(),
            scale,
            memo: HashMap::new(),
        };
        let mut hull = vec![(f64::INFINITY, f64::NEG_INFINITY); sys.len()];
        for (m, b) in &target.boxes {
            for (h, (s, t)) in out.profile(*m, b).into_iter().enumerate() {
                hull[h] = (hull[h].0.min(s), hull[h].1.max(t));
            }
        }
        out.target = hull;
        Some(out)
    }

    fn profile(&self, q: CubeId, b: &[(f64, f64)]) -> Vec<(f64, f64)> {
        let v0 = self
            .c
            .graph()
            .pos(self.c.cube(q).corner(0))
            .expect("known vertex");
        let mut out: Vec<(f64, f64)> = self.side[v0]
            .iter()
            .map(|&s| if s { (1.0, 1.0) } else { (0.0, 0.0) })
            .collect();
        for (l, &(h, flip)) in self.axes[q].iter().enumerate() {
            out[h] = if flip {
                (1.0 - b[l].1, 1.0 - b[l].0)
            } else {
                b[l]
            };
        }
        out
    }

    /// Lower bound on the distance from any point of cube `q` to the target.
    pub(super) fn remainder(&mut self, q: CubeId) -> f64 {
        if let Some(&v) = self.memo.get(&q) {
            return v;
        }
        let full = vec![(0.0, 1.0); self.c.cube(q).dim()];
        let gap: f64 = self
            .profile(q, &full)
            .iter()
            .zip(&self.target)
            .map(|(&(s, t), &(u, v))| (u - t).max(s - v).max(0.0))
            .sum();
        let v = gap * self.scale;
        self.memo.insert(q, v);
        v
    }
}
