//! Break-point minimization along a fixed gallery of cubes.
//!
//! A gallery `C_0..C_m` carries `m + 2` sites: the start region (a box in
//! a face of `C_0`), the shared faces `C_{i-1} ∩ C_i`, and the end region
//! (a box in a face of `C_m`). One point is chosen per site; the string
//! length is the sum of the in-cube norms of consecutive differences. The
//! problem is convex, and is solved by cyclic block coordinate descent with
//! an exact minimizer per block.

use crate::complex::{AxisMap, CubeComplex, CubeId};

use super::norm::PNorm;

/// Convergence thresholds for the descent.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub length_tol: f64,
    pub move_tol: f64,
    pub max_sweeps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            length_tol: 1e-12,
            move_tol: 1e-9,
            max_sweeps: 10_000,
        }
    }
}

/// A box inside a cube, in that cube's coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Site {
    pub cube: CubeId,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Site {
    pub fn point(cube: CubeId, coords: Vec<f64>) -> Self {
        Site {
            cube,
            lo: coords.clone(),
            hi: coords,
        }
    }

    pub fn whole(c: &CubeComplex, cube: CubeId) -> Self {
        let k = c.cube(cube).dim();
        Site {
            cube,
            lo: vec![0.0; k],
            hi: vec![1.0; k],
        }
    }

    pub fn from_box(cube: CubeId, b: &[(f64, f64)]) -> Self {
        Site {
            cube,
            lo: b.iter().map(|x| x.0).collect(),
            hi: b.iter().map(|x| x.1).collect(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo.iter().zip(&self.hi).all(|(a, b)| a >= b)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    }

    pub fn as_box(&self) -> Vec<(f64, f64)> {
        self.lo
            .iter()
            .copied()
            .zip(self.hi.iter().copied())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Gallery {
    pub cubes: Vec<CubeId>,
    pub sites: Vec<Site>,
    pub(super) into_prev: Vec<Option<AxisMap>>,
    pub(super) into_next: Vec<Option<AxisMap>>,
}

/// Splits `‖emb(y) − t‖` into the norm `c` of the fixed-axis gaps and the
/// target `t'` for the free axes, in site coordinates.
fn split_target(norm: PNorm, map: &AxisMap, t: &[f64]) -> (f64, Vec<f64>) {
    let free = map.free_mask();
    let gaps = (0..map.cube_dim)
        .filter(|l| free >> l & 1 == 0)
        .map(|l| map.fixed_value(l) - t[l]);
    let c = norm.norm(gaps);
    let target = map
        .axes
        .iter()
        .map(|&(l, r)| if r { 1.0 - t[l] } else { t[l] })
        .collect();
    (c, target)
}

impl Gallery {
    /// Builds the gallery; `None` if consecutive cubes do not meet or an
    /// end site is not a face of its cube.
    pub fn new(c: &CubeComplex, cubes: Vec<CubeId>, start: Site, end: Site) -> Option<Gallery> {
        let m = cubes.len().checked_sub(1)?;
        let mut sites = Vec::with_capacity(m + 2);
        sites.push(start);
        for i in 1..=m {
            let face = c.meet(cubes[i - 1], cubes[i])?;
            sites.push(Site::whole(c, face));
        }
        sites.push(end);
        let mut into_prev = vec![None];
        let mut into_next = Vec::with_capacity(m + 2);
        for (i, s) in sites.iter().enumerate() {
            if i > 0 {
                into_prev.push(Some(c.chart(s.cube, cubes[i - 1])?));
            }
            if i <= m {
                into_next.push(Some(c.chart(s.cube, cubes[i])?));
            } else {
                into_next.push(None);
            }
        }
        Some(Gallery {
            cubes,
            sites,
            into_prev,
            into_next,
        })
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    /// Site `i`'s point in the coordinates of cube `C_{i-1}` (`prev`) or `C_i`.
    pub fn embed(&self, i: usize, x: &[f64], prev: bool) -> Vec<f64> {
        let map = if prev {
            &self.into_prev[i]
        } else {
            &self.into_next[i]
        };
        map.as_ref().expect("site touches that cube").embed_point(x)
    }

    pub fn segment_length(&self, norm: PNorm, points: &[Vec<f64>], i: usize) -> f64 {
        let a = self.embed(i, &points[i], false);
        let b = self.embed(i + 1, &points[i + 1], true);
        norm.dist(&a, &b)
    }

    pub fn length(&self, norm: PNorm, points: &[Vec<f64>]) -> f64 {
        (0..self.cubes.len())
            .map(|i| self.segment_length(norm, points, i))
            .sum()
    }

    /// Starting points: each site takes the projection of its predecessor.
    pub fn initial_points(&self) -> Vec<Vec<f64>> {
        let mut pts: Vec<Vec<f64>> = Vec::with_capacity(self.sites.len());
        pts.push(self.sites[0].center());
        for i in 1..self.sites.len() {
            let t = self.embed(i - 1, &pts[i - 1], false);
            let (_, target) = split_target(PNorm::Inf, self.into_prev[i].as_ref().unwrap(), &t);
            let s = &self.sites[i];
            pts.push(
                target
                    .iter()
                    .enumerate()
                    .map(|(a, &v)| v.clamp(s.lo[a], s.hi[a]))
                    .collect(),
            );
        }
        pts
    }

    fn block_terms(&self, norm: PNorm, points: &[Vec<f64>], i: usize) -> Vec<(f64, Vec<f64>)> {
        let mut terms = Vec::with_capacity(2);
        if i > 0 {
            let t = self.embed(i - 1, &points[i - 1], false);
            terms.push(split_target(norm, self.into_prev[i].as_ref().unwrap(), &t));
        }
        if i + 1 < self.sites.len() {
            let t = self.embed(i + 1, &points[i + 1], true);
            terms.push(split_target(norm, self.into_next[i].as_ref().unwrap(), &t));
        }
        terms
    }

    /// Minimizes the string length; returns the length and the site points.
    pub fn solve(
        &self,
        norm: PNorm,
        init: Option<Vec<Vec<f64>>>,
        opts: &SolverOptions,
    ) -> (f64, Vec<Vec<f64>>) {
        let movable: Vec<usize> = (0..self.sites.len())
            .filter(|&i| !self.sites[i].is_degenerate())
            .collect();
        // block descent alone can stall where break points coincide
        let global = if movable.len() > 1 {
            self.solve_conic(norm)
        } else {
            None
        };
        let mut pts = global.or(init).unwrap_or_else(|| self.initial_points());
        for (p, s) in pts.iter_mut().zip(&self.sites) {
            for ((x, &lo), &hi) in p.iter_mut().zip(&s.lo).zip(&s.hi) {
                *x = x.clamp(lo, hi);
            }
        }
        let mut len = self.length(norm, &pts);
        if movable.is_empty() {
            return (len, pts);
        }
        for sweep in 0..opts.max_sweeps {
            let mut moved = 0.0f64;
            let order: Box<dyn Iterator<Item = &usize>> = if sweep % 2 == 0 {
                Box::new(movable.iter())
            } else {
                Box::new(movable.iter().rev())
            };
            for &i in order {
                let terms = self.block_terms(norm, &pts, i);
                let s = &self.sites[i];
                let y = block_min(norm, &s.lo, &s.hi, &terms, &pts[i]);
                for (a, b) in y.iter().zip(&pts[i]) {
                    moved = moved.max((a - b).abs());
                }
                pts[i] = y;
            }
            let next = self.length(norm, &pts);
            let change = (len - next).abs();
            len = next;
            if change < opts.length_tol && moved < opts.move_tol {
                break;
            }
        }
        (len, pts)
    }
}

/// Exact minimizer of `Σ ‖(c_j, y − t_j)‖` over the box `[lo, hi]` for one
/// or two terms.
pub(crate) fn block_min(
    norm: PNorm,
    lo: &[f64],
    hi: &[f64],
    terms: &[(f64, Vec<f64>)],
    cur: &[f64],
) -> Vec<f64> {
    let k = lo.len();
    let clamp = |a: usize, v: f64| v.clamp(lo[a], hi[a]);
    match terms {
        [] => cur.to_vec(),
        [(_, t)] => (0..k).map(|a| clamp(a, t[a])).collect(),
        [(c1, a1), (c2, b1), ..] => match norm {
            PNorm::One => (0..k)
                .map(|a| {
                    let (u, v) = (a1[a].min(b1[a]), a1[a].max(b1[a]));
                    let (s, t) = (u.max(lo[a]), v.min(hi[a]));
                    if s <= t {
                        0.5 * (s + t)
                    } else {
                        clamp(a, u)
                    }
                })
                .collect(),
            PNorm::Inf => {
                let gap = |t: f64, a: usize| (lo[a] - t).max(t - hi[a]).max(0.0);
                let ra = (0..k).map(|a| gap(a1[a], a)).fold(*c1, f64::max);
                let rb = (0..k).map(|a| gap(b1[a], a)).fold(*c2, f64::max);
                let d = (0..k).map(|a| (a1[a] - b1[a]).abs()).fold(0.0, f64::max);
                let excess = (d - ra - rb).max(0.0);
                let (r1, r2) = (ra + 0.5 * excess, rb + 0.5 * excess);
                (0..k)
                    .map(|a| {
                        let s = (a1[a] - r1).max(b1[a] - r2).max(lo[a]);
                        let t = (a1[a] + r1).min(b1[a] + r2).min(hi[a]);
                        clamp(a, 0.5 * (s + t))
                    })
                    .collect()
            }
            PNorm::Two => {
                let mut y: Vec<f64> = (0..k).map(|a| clamp(a, cur[a])).collect();
                let mut d1: f64 = (0..k).map(|a| (y[a] - a1[a]).powi(2)).sum();
                let mut d2: f64 = (0..k).map(|a| (y[a] - b1[a]).powi(2)).sum();
                for _ in 0..500 {
                    let mut moved = 0.0f64;
                    for a in 0..k {
                        let e1 = (c1 * c1 + d1 - (y[a] - a1[a]).powi(2)).max(0.0).sqrt();
                        let e2 = (c2 * c2 + d2 - (y[a] - b1[a]).powi(2)).max(0.0).sqrt();
                        let t = if e1 + e2 == 0.0 {
                            0.5 * (a1[a] + b1[a])
                        } else {
                            a1[a] + (b1[a] - a1[a]) * e1 / (e1 + e2)
                        };
                        let t = clamp(a, t);
                        moved = moved.max((t - y[a]).abs());
                        d1 += (t - a1[a]).powi(2) - (y[a] - a1[a]).powi(2);
                        d2 += (t - b1[a]).powi(2) - (y[a] - b1[a]).powi(2);
                        y[a] = t;
                    }
                    if moved < 1e-15 {
                        break;
                    }
                    d1 = (0..k).map(|a| (y[a] - a1[a]).powi(2)).sum();
                    d2 = (0..k).map(|a| (y[a] - b1[a]).powi(2)).sum();
                }
                y
            }
            PNorm::P(p) => {
                let mut y: Vec<f64> = (0..k).map(|a| clamp(a, cur[a])).collect();
                for _ in 0..200 {
                    let mut moved = 0.0f64;
                    for a in 0..k {
                        let rest = |t: &[f64]| -> f64 {
                            (0..k)
                                .filter(|&b| b != a)
                                .map(|b| (y[b] - t[b]).abs().powf(p))
                                .sum()
                        };
                        let (s1, s2) = (c1.powf(p) + rest(a1), c2.powf(p) + rest(b1));
                        let f = |t: f64| {
                            (s1 + (t - a1[a]).abs().powf(p)).powf(1.0 / p)
                                + (s2 + (t - b1[a]).abs().powf(p)).powf(1.0 / p)
                        };
                        let t = golden_min(f, lo[a], hi[a]);
                        moved = moved.max((t - y[a]).abs());
                        y[a] = t;
                    }
                    if moved < 1e-13 {
                        break;
                    }
                }
                y
            }
        },
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..120 {
        if b - a < 1e-15 {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strip() -> CubeComplex {
        CubeComplex::from_cubes(&[0, 1, 2, 3, 4, 5], &[vec![0, 1, 3, 4], vec![1, 2, 4, 5]]).unwrap()
    }

    #[test]
    fn strip_diagonal() {
        let c = strip();
        let (l, r) = (
            c.find(&[0, 1, 3, 4]).unwrap(),
            c.find(&[1, 2, 4, 5]).unwrap(),
        );
        let g = Gallery::new(
            &c,
            vec![l, r],
            Site::point(l, vec![0.0, 0.0]),
            Site::point(r, vec![1.0, 1.0]),
        )
        .unwrap();
        let (d2, pts) = g.solve(PNorm::Two, None, &SolverOptions::default());
        assert!((d2 - 5f64.sqrt()).abs() < 1e-9, "{d2}");
        assert!((pts[1][0] - 0.5).abs() < 1e-6);
        let (dinf, _) = g.solve(PNorm::Inf, None, &SolverOptions::default());
        assert!((dinf - 2.0).abs() < 1e-12);
        let (d1, _) = g.solve(PNorm::One, None, &SolverOptions::default());
        assert!((d1 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn general_p_between_two_and_one() {
        let c = strip();
        let (l, r) = (
            c.find(&[0, 1, 3, 4]).unwrap(),
            c.find(&[1, 2, 4, 5]).unwrap(),
        );
        let g = Gallery::new(
            &c,
            vec![l, r],
            Site::point(l, vec![0.0, 0.0]),
            Site::point(r, vec![1.0, 1.0]),
        )
        .unwrap();
        let (d3, _) = g.solve(PNorm::P(3.0), None, &SolverOptions::default());
        // the straight segment (2,1) has 3-norm 9^(1/3)
        assert!((d3 - 9f64.cbrt()).abs() < 1e-7, "{d3}");
    }

    #[test]
    fn box_endpoint_clamps() {
        let c = strip();
        let l = c.find(&[0, 1, 3, 4]).unwrap();
        let g = Gallery::new(
            &c,
            vec![l],
            Site::from_box(l, &[(0.0, 0.2), (0.0, 1.0)]),
            Site::point(l, vec![0.9, 0.5]),
        )
        .unwrap();
        let (d, _) = g.solve(PNorm::Inf, None, &SolverOptions::default());
        assert!((d - 0.7).abs() < 1e-12);
    }
}
