//! Taut strings: checks of the three conditions and the tautening moves.

use std::collections::HashMap;

use crate::complex::{CubeComplex, CubeId, PointLocation};

use super::norm::PNorm;
use super::solver::{Gallery, Site, SolverOptions};
use super::{MString, MetricError};

const DUP_TOL: f64 = 1e-12;
const TAUT_TOL: f64 = 1e-9;
const MAX_ROUNDS: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub enum TautFailure {
    /// `x_{i-1}, x_i, x_{i+1}` lie in one cube.
    CoCubical(usize),
    /// `x_i` is off the geodesic of `C_{i-1} ∪ C_i` by `excess`.
    NotBetween { index: usize, excess: f64 },
    /// A running coordinate decreases along segment `segment`.
    NotMonotone { segment: usize, axis: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TautVerdict {
    pub taut: bool,
    pub failure: Option<TautFailure>,
}

/// Canonical points; non-maximal carriers are replaced by their first
/// maximal coface.
fn prepare(c: &CubeComplex, s: &MString) -> Result<MString, MetricError> {
    s.validate(c)?;
    let points = s
        .points
        .iter()
        .map(|p| c.canonical_point(p))
        .collect::<Result<Vec<_>, _>>()?;
    let carriers = s
        .carriers
        .iter()
        .map(|&k| {
            if c.is_maximal(k) {
                k
            } else {
                c.maximal_cofaces(k)[0]
            }
        })
        .collect();
    Ok(MString { points, carriers })
}

fn common_cube(c: &CubeComplex, pts: &[&PointLocation]) -> Option<CubeId> {
    c.maximal_cofaces(pts[0].cube)
        .into_iter()
        .find(|&m| pts[1..].iter().all(|q| c.is_face_of(q.cube, m)))
}

fn coords(c: &CubeComplex, p: &PointLocation, k: CubeId) -> Vec<f64> {
    c.point_in(p, k).expect("point lies in carrier")
}

/// `d(x_{i-1},x_i) + d(x_i,x_{i+1}) − d_L(x_{i-1},x_{i+1})` in `L = C_{i-1} ∪ C_i`.
fn betweenness_excess(c: &CubeComplex, s: &MString, i: usize, p: PNorm) -> f64 {
    let (a, b) = (s.carriers[i - 1], s.carriers[i]);
    let lhs = s.segment_length(c, p, i - 1).unwrap() + s.segment_length(c, p, i).unwrap();
    let g = Gallery::new(
        c,
        vec![a, b],
        Site::point(a, coords(c, &s.points[i - 1], a)),
        Site::point(b, coords(c, &s.points[i + 1], b)),
    )
    .expect("consecutive carriers meet");
    lhs - g.solve(p, None, &SolverOptions::default()).0
}

/// Running coordinates: a label and an orientation flip per cube axis.
struct Runs {
    label: Vec<Vec<usize>>,
    flip: Vec<Vec<bool>>,
}

impl Runs {
    fn build(c: &CubeComplex, s: &MString) -> Runs {
        let m = s.m();
        let mut label: Vec<Vec<usize>> = Vec::with_capacity(m);
        let mut flip: Vec<Vec<bool>> = Vec::with_capacity(m);
        let d0 = c.cube(s.carriers[0]).dim();
        label.push((0..d0).collect());
        flip.push(vec![false; d0]);
        let mut fresh = d0;
        for j in 1..m {
            let (prev, cur) = (s.carriers[j - 1], s.carriers[j]);
            let face = c.meet(prev, cur).expect("consecutive carriers meet");
            let (mp, mc) = (c.chart(face, prev).unwrap(), c.chart(face, cur).unwrap());
            let d = c.cube(cur).dim();
            let mut lab = vec![usize::MAX; d];
            let mut fl = vec![false; d];
            for (&(lp, rp), &(lc, rc)) in mp.axes.iter().zip(&mc.axes) {
                lab[lc] = label[j - 1][lp];
                fl[lc] = flip[j - 1][lp] ^ rp ^ rc;
            }
            for l in 0..d {
                if lab[l] == usize::MAX {
                    lab[l] = fresh;
                    fresh += 1;
                    fl[l] = mc.fixed_value(l) == 1.0;
                }
            }
            label.push(lab);
            flip.push(fl);
        }
        let mut runs = Runs { label, flip };
        // C_0 axes: orient so the run does not end below its start
        for l0 in 0..d0 {
            let seq = runs.values(c, s, l0);
            if seq[0] > *seq.last().unwrap() {
                for (lab, fl) in runs.label.iter().zip(runs.flip.iter_mut()) {
                    for (a, f) in lab.iter().zip(fl.iter_mut()) {
                        if *a == l0 {
                            *f = !*f;
                        }
                    }
                }
            }
        }
        runs
    }

    fn axis_of(&self, j: usize, run: usize) -> Option<usize> {
        self.label[j].iter().position(|&a| a == run)
    }

    fn value(&self, c: &CubeComplex, s: &MString, j: usize, point: usize, l: usize) -> f64 {
        let y = coords(c, &s.points[point], s.carriers[j])[l];
        if self.flip[j][l] {
            1.0 - y
        } else {
            y
        }
    }

    /// First cube of a run and its values at points `a..=b+1`.
    fn span(&self, c: &CubeComplex, s: &MString, run: usize) -> (usize, Vec<f64>) {
        let js: Vec<usize> = (0..s.m())
            .filter(|&j| self.axis_of(j, run).is_some())
            .collect();
        let (a, b) = (js[0], *js.last().unwrap());
        let mut vals: Vec<f64> = (a..=b)
            .map(|j| self.value(c, s, j, j, self.axis_of(j, run).unwrap()))
            .collect();
        vals.push(self.value(c, s, b, b + 1, self.axis_of(b, run).unwrap()));
        (a, vals)
    }

    fn values(&self, c: &CubeComplex, s: &MString, run: usize) -> Vec<f64> {
        self.span(c, s, run).1
    }

    fn all_runs(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.label.iter().flatten().copied().collect();
        r.sort_unstable();
        r.dedup();
        r
    }
}

/// Checks conditions (i), (ii) and (iii) in that order.
pub fn is_taut(c: &CubeComplex, s: &MString, p: PNorm) -> Result<TautVerdict, MetricError> {
    let s = prepare(c, s)?;
    let failure = first_failure(c, &s, p);
    Ok(TautVerdict {
        taut: failure.is_none(),
        failure,
    })
}

fn first_failure(c: &CubeComplex, s: &MString, p: PNorm) -> Option<TautFailure> {
    let m = s.m();
    for i in 1..m {
        if common_cube(c, &[&s.points[i - 1], &s.points[i], &s.points[i + 1]]).is_some() {
            return Some(TautFailure::CoCubical(i));
        }
    }
    for i in 1..m {
        let excess = betweenness_excess(c, s, i, p);
        if excess > TAUT_TOL {
            return Some(TautFailure::NotBetween { index: i, excess });
        }
    }
    if m == 0 {
        return None;
    }
    let runs = Runs::build(c, s);
    for j in 0..m {
        for l in 0..c.cube(s.carriers[j]).dim() {
            if runs.value(c, s, j, j, l) > runs.value(c, s, j, j + 1, l) + TAUT_TOL {
                return Some(TautFailure::NotMonotone {
                    segment: j,
                    axis: l,
                });
            }
        }
    }
    None
}

/// Minimizes the break points of a string over its own gallery.
pub fn minimize_string(c: &CubeComplex, s: &MString, p: PNorm) -> Result<MString, MetricError> {
    let s = prepare(c, s)?;
    Ok(minimize_prepared(c, s, p))
}

fn minimize_prepared(c: &CubeComplex, s: MString, p: PNorm) -> MString {
    let m = s.m();
    if m == 0 {
        return s;
    }
    let (first, last) = (s.carriers[0], s.carriers[m - 1]);
    let g = Gallery::new(
        c,
        s.carriers.clone(),
        Site::point(first, coords(c, &s.points[0], first)),
        Site::point(last, coords(c, &s.points[m], last)),
    )
    .expect("consecutive carriers meet");
    let init: Vec<Vec<f64>> = (0..=m)
        .map(|i| coords(c, &s.points[i], g.sites[i].cube))
        .collect();
    let before = g.length(p, &init);
    let (len, pts) = g.solve(p, Some(init), &SolverOptions::default());
    if len >= before {
        return s;
    }
    let mut points = s.points.clone();
    for i in 1..m {
        points[i] = c
            .canonical_point(&PointLocation::new(g.sites[i].cube, pts[i].clone()))
            .expect("site point");
    }
    MString {
        points,
        carriers: s.carriers,
    }
}

/// Merges one pair of near-equal consecutive points, if any.
fn merge_duplicate(c: &CubeComplex, s: &mut MString, p: PNorm) -> bool {
    let m = s.m();
    if m < 2 {
        return false;
    }
    for i in 0..m {
        if s.segment_length(c, p, i).unwrap() >= DUP_TOL {
            continue;
        }
        // drop x_i (joining C_{i-1} to x_{i+1}) or drop x_{i+1} (joining x_i to C_{i+1})
        if i > 0 && c.point_in(&s.points[i + 1], s.carriers[i - 1]).is_some() {
            s.points.remove(i);
            s.carriers.remove(i);
            return true;
        }
        if i + 1 < m && c.point_in(&s.points[i], s.carriers[i + 1]).is_some() {
            s.points.remove(i + 1);
            s.carriers.remove(i);
            return true;
        }
    }
    false
}

/// Removes the first co-cubical middle point, if any.
fn cancel_cocubical(c: &CubeComplex, s: &mut MString) -> bool {
    for i in 1..s.m() {
        if let Some(k) = common_cube(c, &[&s.points[i - 1], &s.points[i], &s.points[i + 1]]) {
            s.points.remove(i);
            s.carriers.remove(i);
            s.carriers[i - 1] = k;
            return true;
        }
    }
    false
}

/// Moves `x_i` to the exact two-segment minimizer on its face when the
/// betweenness test fails.
fn fix_betweenness(c: &CubeComplex, s: &mut MString, p: PNorm) -> bool {
    let mut changed = false;
    for i in 1..s.m() {
        if betweenness_excess(c, s, i, p) <= TAUT_TOL {
            continue;
        }
        let (a, b) = (s.carriers[i - 1], s.carriers[i]);
        let face = c.meet(a, b).unwrap();
        let g = Gallery::new(
            c,
            vec![a, b],
            Site::point(a, coords(c, &s.points[i - 1], a)),
            Site::point(b, coords(c, &s.points[i + 1], b)),
        )
        .unwrap();
        let cur = coords(c, &s.points[i], face);
        let (_, pts) = g.solve(
            p,
            Some(vec![g.sites[0].lo.clone(), cur, g.sites[2].lo.clone()]),
            &SolverOptions::default(),
        );
        let y = pts[1].clone();
        s.points[i] = c.canonical_point(&PointLocation::new(face, y)).unwrap();
        changed = true;
    }
    changed
}

/// Makes every running coordinate nondecreasing: running maximum clamped
/// between the run's first and last values.
fn fix_monotone(c: &CubeComplex, s: &mut MString) -> bool {
    let m = s.m();
    if m < 2 {
        return false;
    }
    let runs = Runs::build(c, s);
    let mut target: HashMap<(usize, usize), f64> = HashMap::new();
    let mut changed = false;
    for run in runs.all_runs() {
        let (a, vals) = runs.span(c, s, run);
        let (lo, hi) = (vals[0], *vals.last().unwrap());
        let mut top = f64::NEG_INFINITY;
        for (t, &v) in vals.iter().enumerate() {
            top = top.max(v);
            let w = if lo <= hi { top.clamp(lo, hi) } else { v };
            changed |= (w - v).abs() > 1e-15;
            target.insert((run, a + t), w);
        }
    }
    if !changed {
        return false;
    }
    for j in 1..m {
        let k = s.carriers[j];
        let y: Vec<f64> = (0..c.cube(k).dim())
            .map(|l| {
                let w = target[&(runs.label[j][l], j)];
                if runs.flip[j][l] {
                    1.0 - w
                } else {
                    w
                }
            })
            .collect();
        s.points[j] = c.canonical_point(&PointLocation::new(k, y)).unwrap();
    }
    true
}

/// Tautens a string without lengthening it: minimizes over its gallery,
/// then merges duplicates, cancels co-cubical triples, and repairs
/// betweenness and monotonicity until none applies.
pub fn tauten(c: &CubeComplex, s: &MString, p: PNorm) -> Result<MString, MetricError> {
    let mut s = minimize_prepared(c, prepare(c, s)?, p);
    for _ in 0..MAX_ROUNDS {
        if merge_duplicate(c, &mut s, p) || cancel_cocubical(c, &mut s) {
            s = minimize_prepared(c, s, p);
            continue;
        }
        let moved = fix_betweenness(c, &mut s, p);
        if !fix_monotone(c, &mut s) && !moved {
            break;
        }
    }
    Ok(s)
}
