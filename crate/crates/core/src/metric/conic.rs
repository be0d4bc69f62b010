//! Gallery minimization as a conic program (interior point, via Clarabel).
//!
//! One epigraph variable per segment: linear rows for p ∈ {1, ∞}, a
//! second-order cone for p = 2 and power cones for other p. Block descent
//! polishes the result afterwards.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};

use super::norm::PNorm;
use super::solver::Gallery;

const FIXED: f64 = 1e-14;

/// `const + Σ coef · x[var]`
struct Affine {
    constant: f64,
    terms: Vec<(usize, f64)>,
}

#[derive(Default)]
struct Rows {
    rows: Vec<(Vec<(usize, f64)>, f64)>,
}

impl Rows {
    fn push(&mut self, a: Vec<(usize, f64)>, b: f64) {
        self.rows.push((a, b));
    }
}

impl Gallery {
    /// Site points of a (near) optimal solution, or `None` if the solver
    /// does not report success.
    pub(crate) fn solve_conic(&self, norm: PNorm) -> Option<Vec<Vec<f64>>> {
        // variables: free site coordinates first
        let mut var: Vec<Vec<Option<usize>>> = Vec::with_capacity(self.sites.len());
        let mut n = 0;
        for s in &self.sites {
            var.push(
                s.lo.iter()
                    .zip(&s.hi)
                    .map(|(l, h)| {
                        (h - l > FIXED).then(|| {
                            n += 1;
                            n - 1
                        })
                    })
                    .collect(),
            );
        }
        let num_sites = n;
        let mut nonneg = Rows::default();
        let mut zero = Rows::default();
        let mut soc: Vec<Rows> = Vec::new();
        let mut pow = Rows::default();
        let mut q = vec![0.0; n];
        let mut fresh = |q: &mut Vec<f64>, weight: f64| {
            q.push(weight);
            n += 1;
            n - 1
        };
        for (i, s) in self.sites.iter().enumerate() {
            for (a, v) in var[i].iter().enumerate() {
                if let Some(v) = *v {
                    nonneg.push(vec![(v, 1.0)], s.hi[a]);
                    nonneg.push(vec![(v, -1.0)], -s.lo[a]);
                }
            }
        }
        for i in 0..self.cubes.len() {
            let u = self.affine(&var, i, false);
            let w = self.affine(&var, i + 1, true);
            let diff: Vec<Affine> = u
                .into_iter()
                .zip(w)
                .map(|(u, w)| {
                    let mut terms = u.terms;
                    terms.extend(w.terms.into_iter().map(|(v, c)| (v, -c)));
                    Affine {
                        constant: u.constant - w.constant,
                        terms,
                    }
                })
                .collect();
            match norm {
                PNorm::One => {
                    for d in &diff {
                        let s = fresh(&mut q, 1.0);
                        // ±v − s ≤ 0
                        for sign in [1.0, -1.0] {
                            let mut a: Vec<(usize, f64)> =
                                d.terms.iter().map(|&(v, c)| (v, sign * c)).collect();
                            a.push((s, -1.0));
                            nonneg.push(a, -sign * d.constant);
                        }
                    }
                }
                PNorm::Inf => {
                    let t = fresh(&mut q, 1.0);
                    for d in &diff {
                        for sign in [1.0, -1.0] {
                            let mut a: Vec<(usize, f64)> =
                                d.terms.iter().map(|&(v, c)| (v, sign * c)).collect();
                            a.push((t, -1.0));
                            nonneg.push(a, -sign * d.constant);
                        }
                    }
                }
                PNorm::Two => {
                    let t = fresh(&mut q, 1.0);
                    let mut block = Rows::default();
                    block.push(vec![(t, -1.0)], 0.0);
                    for d in &diff {
                        block.push(d.terms.iter().map(|&(v, c)| (v, -c)).collect(), d.constant);
                    }
                    soc.push(block);
                }
                PNorm::P(_) => {
                    let t = fresh(&mut q, 1.0);
                    let mut sum = vec![(t, -1.0)];
                    for d in &diff {
                        let r = fresh(&mut q, 0.0);
                        sum.push((r, 1.0));
                        // (r, t, v) with r^(1/p) t^(1-1/p) ≥ |v|
                        pow.push(vec![(r, -1.0)], 0.0);
                        pow.push(vec![(t, -1.0)], 0.0);
                        pow.push(d.terms.iter().map(|&(v, c)| (v, -c)).collect(), d.constant);
                    }
                    zero.push(sum, 0.0);
                }
            }
        }
        let mut cones = Vec::new();
        let mut all: Vec<(Vec<(usize, f64)>, f64)> = Vec::new();
        if !nonneg.rows.is_empty() {
            cones.push(SupportedConeT::NonnegativeConeT(nonneg.rows.len()));
            all.extend(nonneg.rows);
        }
        if !zero.rows.is_empty() {
            cones.push(SupportedConeT::ZeroConeT(zero.rows.len()));
            all.extend(zero.rows);
        }
        for block in soc {
            cones.push(SupportedConeT::SecondOrderConeT(block.rows.len()));
            all.extend(block.rows);
        }
        if let PNorm::P(p) = norm {
            for _ in 0..pow.rows.len() / 3 {
                cones.push(SupportedConeT::PowerConeT(1.0 / p));
            }
            all.extend(pow.rows);
        }
        let (mut ri, mut ci, mut vals, mut b) = (
            Vec::new(),
            Vec::new(),
            Vec::new(),
            Vec::with_capacity(all.len()),
        );
        for (r, (a, rhs)) in all.into_iter().enumerate() {
            for (v, c) in a {
                ri.push(r);
                ci.push(v);
                vals.push(c);
            }
            b.push(rhs);
        }
        let a = CscMatrix::new_from_triplets(b.len(), n, ri, ci, vals);
        let p = CscMatrix::zeros((n, n));
        let settings = DefaultSettingsBuilder::default()
            .verbose(false)
            .tol_gap_abs(1e-11)
            .tol_gap_rel(1e-11)
            .tol_feas(1e-11)
            .max_iter(200)
            .build()
            .ok()?;
        let mut solver = DefaultSolver::new(&p, &q, &a, &b, &cones, settings).ok()?;
        solver.solve();
        if !matches!(
            solver.solution.status,
            SolverStatus::Solved | SolverStatus::AlmostSolved
        ) {
            return None;
        }
        let x = &solver.solution.x[..num_sites];
        Some(
            self.sites
                .iter()
                .zip(&var)
                .map(|(s, vs)| {
                    vs.iter()
                        .enumerate()
                        .map(|(a, v)| v.map_or(s.lo[a], |v| x[v].clamp(s.lo[a], s.hi[a])))
                        .collect()
                })
                .collect(),
        )
    }

    /// Site `i` embedded in `C_{i-1}` (`prev`) or `C_i`, as affine forms.
    fn affine(&self, var: &[Vec<Option<usize>>], i: usize, prev: bool) -> Vec<Affine> {
        let map = if prev {
            &self.into_prev[i]
        } else {
            &self.into_next[i]
        };
        let map = map.as_ref().expect("site touches that cube");
        let mut out: Vec<Affine> = (0..map.cube_dim)
            .map(|l| Affine {
                constant: map.fixed_value(l),
                terms: Vec::new(),
            })
            .collect();
        let s = &self.sites[i];
        for (a, &(l, r)) in map.axes.iter().enumerate() {
            let sign = if r { -1.0 } else { 1.0 };
            let base = if r { 1.0 } else { 0.0 };
            out[l] = match var[i][a] {
                Some(v) => Affine {
                    constant: base,
                    terms: vec![(v, sign)],
                },
                None => Affine {
                    constant: base + sign * s.lo[a],
                    terms: Vec::new(),
                },
            };
        }
        out
    }
}
