//! Zeros of a holomorphic function in a rectangle: grid scan, Muller
//! refinement, and argument-principle counting.

use std::f64::consts::PI;
use std::fmt::Display;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Below this boundary modulus the argument principle is not trusted.
pub const BOUNDARY_ZERO_TOL: f64 = 1e-9;
/// Maximum samples per edge after adaptive refinement.
pub const MAX_EDGE_SAMPLES: usize = 1 << 12;
const NUDGE: f64 = 1e-4;
const MAX_NUDGES: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("invalid region: need re_min < re_max and im_min < im_max")]
    InvalidRegion,
    #[error("grid {0}x{1} too coarse: need at least 8x8")]
    GridTooSmall(usize, usize),
    #[error("f nearly vanishes on the boundary near {at} (|f| = {modulus:e})")]
    BoundaryZero { at: Complex64, modulus: f64 },
    #[error("evaluation failed at {at}: {message}")]
    Evaluation { at: Complex64, message: String },
    #[error("Muller iteration from {start} stalled at |f| = {residual:e}")]
    NonConvergence { start: Complex64, residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self, RootError> {
        let r = Self {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), RootError> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|v| v.is_finite());
        if finite && self.re_min < self.re_max && self.im_min < self.im_max {
            Ok(())
        } else {
            Err(RootError::InvalidRegion)
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re > self.re_min && z.re < self.re_max && z.im > self.im_min && z.im < self.im_max
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    /// Corners, edge midpoints and center.
    pub fn probe_points(&self) -> Vec<Complex64> {
        let xs = [self.re_min, 0.5 * (self.re_min + self.re_max), self.re_max];
        let ys = [self.im_min, 0.5 * (self.im_min + self.im_max), self.im_max];
        xs.iter()
            .flat_map(|&x| ys.iter().map(move |&y| Complex64::new(x, y)))
            .collect()
    }

    /// Grown by `d` on every side.
    pub fn expanded(&self, d: f64) -> Self {
        Self {
            re_min: self.re_min - d,
            re_max: self.re_max + d,
            im_min: self.im_min - d,
            im_max: self.im_max + d,
        }
    }

    /// Square of half-width `r` around `z`.
    pub fn around(z: Complex64, r: f64) -> Self {
        Self {
            re_min: z.re - r,
            re_max: z.re + r,
            im_min: z.im - r,
            im_max: z.im + r,
        }
    }

    /// 2×2 split at an interior point `at`, counterclockwise from the
    /// lower-left quadrant.
    pub fn split(&self, at: Complex64) -> [Region; 4] {
        let r = |re_min, re_max, im_min, im_max| Region {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        [
            r(self.re_min, at.re, self.im_min, at.im),
            r(at.re, self.re_max, self.im_min, at.im),
            r(at.re, self.re_max, at.im, self.im_max),
            r(self.re_min, at.re, at.im, self.im_max),
        ]
    }

    fn edge_point(&self, edge: usize, t: f64) -> Complex64 {
        let (a, b) = match edge {
            0 => (Complex64::new(self.re_min, self.im_min), Complex64::new(self.re_max, self.im_min)),
            1 => (Complex64::new(self.re_max, self.im_min), Complex64::new(self.re_max, self.im_max)),
            2 => (Complex64::new(self.re_max, self.im_max), Complex64::new(self.re_min, self.im_max)),
            _ => (Complex64::new(self.re_min, self.im_max), Complex64::new(self.re_min, self.im_min)),
        };
        a + (b - a) * t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub lambda: Complex64,
    /// `|f|` at the root.
    pub residual: f64,
    pub iterations: usize,
    /// Winding number of `f` around a small box enclosing only this root.
    pub winding_mult: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedCandidate {
    pub start: Complex64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSearch {
    pub roots: Vec<RootRecord>,
    pub dropped: Vec<DroppedCandidate>,
    /// Winding number of the whole region, summed over the 2×2 subdivision.
    pub winding_total: Option<i64>,
    /// Whether `winding_total` equals the root count with multiplicity.
    pub count_consistent: Option<bool>,
    pub evaluations: usize,
}

fn eval<F, E>(f: &F, z: Complex64) -> Result<Complex64, RootError>
where
    F: Fn(Complex64) -> Result<Complex64, E>,
    E: Display,
{
    match f(z) {
        Ok(v) if v.re.is_finite() && v.im.is_finite() => Ok(v),
        Ok(v) => Err(RootError::Evaluation {
            at: z,
            message: format!("non-finite value {v}"),
        }),
        Err(e) => Err(RootError::Evaluation {
            at: z,
            message: e.to_string(),
        }),
    }
}

/// Change of `arg f` between consecutive samples, in (−π, π].
fn phase_step(a: Complex64, b: Complex64) -> f64 {
    (b / a).arg()
}

/// Winding number of `f` around the boundary of `region`, counterclockwise.
pub fn winding_number<F, E>(f: &F, region: &Region, samples_per_edge: usize) -> Result<i64, RootError>
where
    F: Fn(Complex64) -> Result<Complex64, E> + Sync,
    E: Display,
{
    region.validate()?;
    let n = samples_per_edge.clamp(4, MAX_EDGE_SAMPLES);
    let mut total = 0.0;
    for edge in 0..4 {
        let ts: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
        let vals: Vec<Result<Complex64, RootError>> =
            ts.par_iter().map(|&t| eval(f, region.edge_point(edge, t))).collect();
        let vals: Vec<Complex64> = vals.into_iter().collect::<Result<_, _>>()?;
        for (j, v) in vals.iter().enumerate() {
            if v.norm() <= BOUNDARY_ZERO_TOL {
                return Err(RootError::BoundaryZero {
                    at: region.edge_point(edge, ts[j]),
                    modulus: v.norm(),
                });
            }
        }
        for j in 0..n {
            total += refine_segment(f, region, edge, (ts[j], vals[j]), (ts[j + 1], vals[j + 1]))?;
        }
    }
    let w = total / (2.0 * PI);
    Ok(w.round() as i64)
}

/// Phase change along `[ta, tb]` of one edge, bisecting while any step
/// exceeds π/2.
fn refine_segment<F, E>(
    f: &F,
    region: &Region,
    edge: usize,
    a: (f64, Complex64),
    b: (f64, Complex64),
) -> Result<f64, RootError>
where
    F: Fn(Complex64) -> Result<Complex64, E>,
    E: Display,
{
    let d = phase_step(a.1, b.1);
    if d.abs() <= PI / 2.0 {
        return Ok(d);
    }
    let min_dt = 1.0 / MAX_EDGE_SAMPLES as f64;
    if b.0 - a.0 <= min_dt * 1.000001 {
        let at = region.edge_point(edge, 0.5 * (a.0 + b.0));
        return Err(RootError::BoundaryZero {
            at,
            modulus: a.1.norm().min(b.1.norm()),
        });
    }
    let tm = 0.5 * (a.0 + b.0);
    let vm = eval(f, region.edge_point(edge, tm))?;
    if vm.norm() <= BOUNDARY_ZERO_TOL {
        return Err(RootError::BoundaryZero {
            at: region.edge_point(edge, tm),
            modulus: vm.norm(),
        });
    }
    Ok(refine_segment(f, region, edge, a, (tm, vm))? + refine_segment(f, region, edge, (tm, vm), b)?)
}

/// Winding number with up to three outward nudges of the rectangle when the
/// boundary passes too close to a zero.
pub fn winding_number_nudged<F, E>(f: &F, region: &Region, samples_per_edge: usize) -> Result<(i64, Region), RootError>
where
    F: Fn(Complex64) -> Result<Complex64, E> + Sync,
    E: Display,
{
    let mut r = *region;
    let mut last = None;
    for attempt in 0..=MAX_NUDGES {
        match winding_number(f, &r, samples_per_edge) {
            Ok(w) => return Ok((w, r)),
            Err(e @ RootError::BoundaryZero { .. }) => {
                last = Some(e);
                r = region.expanded(NUDGE * (attempt + 1) as f64);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MullerOutcome {
    pub root: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

/// Muller's method from three starting points. Stops once `|f| < tol` has
/// been reached and the steps stop decreasing `|f|`, or when the step falls
/// below `1e−12(1+|λ|)`. Returns the best point seen.
pub fn muller<F, E>(
    f: &F,
    start: [Complex64; 3],
    tol: f64,
    max_iter: usize,
) -> Result<MullerOutcome, RootError>
where
    F: Fn(Complex64) -> Result<Complex64, E>,
    E: Display,
{
    let [mut x0, mut x1, mut x2] = start;
    let mut f0 = eval(f, x0)?;
    let mut f1 = eval(f, x1)?;
    let mut f2 = eval(f, x2)?;
    let mut best = [(x0, f0), (x1, f1), (x2, f2)]
        .into_iter()
        .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("three points");
    let mut polish = 0;
    let mut iterations = 0;
    for it in 1..=max_iter {
        iterations = it;
        let h1 = x1 - x0;
        let h2 = x2 - x1;
        let d1 = (f1 - f0) / h1;
        let d2 = (f2 - f1) / h2;
        let a = (d2 - d1) / (h2 + h1);
        let b = d2 + a * h2;
        let disc = (b * b - a * f2 * 4.0).sqrt();
        let den = if (b + disc).norm() >= (b - disc).norm() { b + disc } else { b - disc };
        let step = if den.norm() == 0.0 || !den.re.is_finite() || !den.im.is_finite() {
            // flat interpolant: nudge outward
            (h2.norm().max(1e-8)) * Complex64::new(0.5, 0.5)
        } else {
            -f2 * 2.0 / den
        };
        let x3 = x2 + step;
        let f3 = eval(f, x3)?;
        if f3.norm() < best.1.norm() {
            best = (x3, f3);
        } else if best.1.norm() < tol {
            polish += 1;
        }
        (x0, x1, x2) = (x1, x2, x3);
        (f0, f1, f2) = (f1, f2, f3);
        if step.norm() < 1e-12 * (1.0 + x3.norm()) || polish >= 2 || f3.norm() == 0.0 {
            break;
        }
    }
    Ok(MullerOutcome {
        root: best.0,
        residual: best.1.norm(),
        iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FindZerosOptions {
    pub grid: (usize, usize),
    pub tol: f64,
    pub max_iter: usize,
    /// Samples per edge for the winding checks.
    pub samples_per_edge: usize,
    /// Run the subdivision count check and recovery.
    pub check_count: bool,
}

impl FindZerosOptions {
    pub fn new(grid: (usize, usize), tol: f64) -> Self {
        Self {
            grid,
            tol,
            max_iter: 60,
            samples_per_edge: 64,
            check_count: true,
        }
    }
}

fn dedup_radius(z: Complex64) -> f64 {
    1e-6 * (1.0 + z.norm())
}

/// Local minima of `|f|` on a cell-centered grid, kept if at or below the
/// given quantile of the sampled moduli.
fn grid_seeds<F, E>(f: &F, region: &Region, nx: usize, ny: usize, quantile: f64) -> (Vec<Complex64>, usize)
where
    F: Fn(Complex64) -> Result<Complex64, E> + Sync,
    E: Display,
{
    let dx = region.width() / nx as f64;
    let dy = region.height() / ny as f64;
    let point = |i: usize, j: usize| {
        Complex64::new(region.re_min + (i as f64 + 0.5) * dx, region.im_min + (j as f64 + 0.5) * dy)
    };
    let mods: Vec<f64> = (0..nx * ny)
        .into_par_iter()
        .map(|k| match eval(f, point(k % nx, k / nx)) {
            Ok(v) => v.norm(),
            Err(_) => f64::INFINITY,
        })
        .collect();
    let mut finite: Vec<f64> = mods.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        return (Vec::new(), nx * ny);
    }
    finite.sort_by(f64::total_cmp);
    let threshold = finite[((finite.len() - 1) as f64 * quantile) as usize];
    let at = |i: isize, j: isize| -> Option<f64> {
        (i >= 0 && j >= 0 && (i as usize) < nx && (j as usize) < ny).then(|| mods[j as usize * nx + i as usize])
    };
    let mut seeds = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let v = mods[j * nx + i];
            if !(v.is_finite() && v <= threshold) {
                continue;
            }
            let is_min = (-1..=1).all(|di: isize| {
                (-1..=1).all(|dj: isize| {
                    (di == 0 && dj == 0) || at(i as isize + di, j as isize + dj).map_or(true, |w| v <= w)
                })
            });
            if is_min {
                seeds.push(point(i, j));
            }
        }
    }
    (seeds, nx * ny)
}

fn refine_all<F, E>(
    f: &F,
    seeds: &[Complex64],
    step: (f64, f64),
    region: &Region,
    opts: &FindZerosOptions,
) -> (Vec<RootRecord>, Vec<DroppedCandidate>)
where
    F: Fn(Complex64) -> Result<Complex64, E> + Sync,
    E: Display,
{
    let results: Vec<Result<RootRecord, DroppedCandidate>> = seeds
        .par_iter()
        .map(|&s| {
            let h = Complex64::new(0.25 * step.0, 0.0);
            let k = Complex64::new(0.0, 0.25 * step.1);
            let drop = |reason: String| DroppedCandidate { start: s, reason };
            let out = muller(f, [s - h, s + k, s + h], opts.tol, opts.max_iter).map_err(|e| drop(e.to_string()))?;
            if out.residual >= opts.tol {
                return Err(drop(
                    RootError::NonConvergence {
                        start: s,
                        residual: out.residual,
                    }
                    .to_string(),
                ));
            }
            if !region.contains(out.root) {
                return Err(drop(format!("converged outside the region to {}", out.root)));
            }
            Ok(RootRecord {
                lambda: out.root,
                residual: out.residual,
                iterations: out.iterations,
                winding_mult: None,
            })
        })
        .collect();
    let mut roots = Vec::new();
    let mut dropped = Vec::new();
    for r in results {
        match r {
            Ok(x) => roots.push(x),
            Err(d) => dropped.push(d),
        }
    }
    (roots, dropped)
}

fn sort_roots(roots: &mut [RootRecord]) {
    roots.sort_by(|a, b| a.lambda.re.total_cmp(&b.lambda.re).then(a.lambda.im.total_cmp(&b.lambda.im)));
}

/// Merges roots within the dedup radius, keeping the smaller residual.
pub fn dedup(mut roots: Vec<RootRecord>) -> Vec<RootRecord> {
    roots.sort_by(|a, b| a.residual.total_cmp(&b.residual));
    let mut kept: Vec<RootRecord> = Vec::new();
    for r in roots {
        if kept
            .iter()
            .all(|k| (k.lambda - r.lambda).norm() > dedup_radius(k.lambda).max(dedup_radius(r.lambda)))
        {
            kept.push(r);
        }
    }
    sort_roots(&mut kept);
    kept
}

fn assign_multiplicities<F, E>(f: &F, roots: &mut [RootRecord], cell: f64, samples: usize)
where
    F: Fn(Complex64) -> Result<Complex64, E> + Sync,
    E: Display,
{
    let lambdas: Vec<Complex64> = roots.iter().map(|r| r.lambda).collect();
    for (i, r) in roots.iter_mut().enumerate() {
        let nearest = lambdas
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, z)| (z - r.lambda).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = (0.5 * cell).min(0.35 * nearest);
        if radius.is_finite() && radius > 0.0 {
            r.winding_mult = winding_number(f, &Region::around(r.lambda, radius), samples).ok();
        }
    }
}

fn count_in(roots: &[RootRecord], region: &Region) -> i64 {
    roots
        .iter()
        .filter(|r| region.contains(r.lambda))
        .map(|r| r.winding_mult.unwrap_or(1))
        .sum()
}

/// Candidate split points near the center, offset so that the cuts avoid
/// the real axis and known roots.
fn split_candidates(region: &Region, roots: &[RootRecord]) -> Vec<Complex64> {
    let c = region.center();
    let margin = 1e-3 * region.width().min(region.height());
    (0..12)
        .map(|k| {
            let t = 0.0731 + 0.0417 * k as f64;
            let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(c.re + sgn * t * 0.5 * region.width(), c.im + sgn * t * 0.61 * region.height())
        })
        .filter(|z| {
            roots
                .iter()
                .all(|r| (r.lambda.re - z.re).abs() > margin && (r.lambda.im - z.im).abs() > margin)
        })
        .collect()
}

/// Windings of the four quadrants for the first split point whose cuts
/// avoid zeros of `f`.
fn quadrant_windings<F, E>(
    f: &F,
    region: &Region,
    roots: &[RootRecord],
    samples: usize,
) -> Result<Vec<(Region, i64)>, RootError>
where
    F: Fn(Complex64) -> Result<Complex64, E> + Sync,
    E: Display,
{
    let mut last = RootError::InvalidRegion;
    for split in split_candidates(region, roots) {
        let mut out = Vec::with_capacity(4);
        let mut failed = None;
        for q in region.split(split) {
            match winding_number_nudged(f, &q, samples) {
                Ok((w, used)) => out.push((used, w)),
                Err(e) => {
                    failed = Some(e);
                    break;
                }
            }
        }
        match failed {
            None => return Ok(out),
            Some(e @ RootError::BoundaryZero { .. }) => last = e,
            Some(e) => return Err(e),
        }
    }
    Err(last)
}

/// Finds zeros of `f` in `region`.
pub fn find_zeros<F, E>(f: &F, region: &Region, opts: &FindZerosOptions) -> Result<ZeroSearch, RootError>
where
    F: Fn(Complex64) -> Result<Complex64, E> + Sync,
    E: Display,
{
    region.validate()?;
    let (nx, ny) = opts.grid;
    if nx < 8 || ny < 8 {
        return Err(RootError::GridTooSmall(nx, ny));
    }
    let step = (region.width() / nx as f64, region.height() / ny as f64);
    let (seeds, mut evaluations) = grid_seeds(f, region, nx, ny, 0.1);
    let (roots, mut dropped) = refine_all(f, &seeds, step, region, opts);
    let mut roots = dedup(roots);
    let cell = step.0.min(step.1);
    assign_multiplicities(f, &mut roots, cell, 32);
    evaluations += seeds.len() * opts.max_iter;

    if !opts.check_count {
        return Ok(ZeroSearch {
            roots,
            dropped,
            winding_total: None,
            count_consistent: None,
            evaluations,
        });
    }

    // Quadrant counts, reseeding wherever a quadrant holds more zeros than
    // were found in it.
    let mut winding_total = None;
    let mut consistent = None;
    for round in 0..3 {
        let quads = match quadrant_windings(f, region, &roots, opts.samples_per_edge) {
            Ok(q) => q,
            Err(e @ RootError::BoundaryZero { .. }) => return Err(e),
            Err(_) => {
                // counting unavailable; roots are still reported
                winding_total = None;
                consistent = None;
                break;
            }
        };
        let total: i64 = quads.iter().map(|(_, w)| w).sum();
        let deficits: Vec<Region> = quads
            .iter()
            .filter(|(q, w)| *w > count_in(&roots, q))
            .map(|(q, _)| *q)
            .collect();
        let ok = quads.iter().all(|(q, w)| *w == count_in(&roots, q));
        winding_total = Some(total);
        consistent = Some(ok);
        if ok || deficits.is_empty() || round == 2 {
            break;
        }
        // every local minimum of a finer grid, without the percentile cut
        let mut extra = Vec::new();
        for q in deficits {
            let (fine_nx, fine_ny) = (nx.max(16) * (round + 2) / 2, ny.max(16) * (round + 2) / 2);
            let (s, ev) = grid_seeds(f, &q, fine_nx, fine_ny, 1.0);
            evaluations += ev;
            let qstep = (q.width() / fine_nx as f64, q.height() / fine_ny as f64);
            let (found, d) = refine_all(f, &s, qstep, region, opts);
            extra.extend(found);
            dropped.extend(d);
        }
        roots.extend(extra);
        roots = dedup(roots);
        for r in roots.iter_mut() {
            r.winding_mult = None;
        }
        assign_multiplicities(f, &mut roots, cell, 32);
    }

    Ok(ZeroSearch {
        roots,
        dropped,
        winding_total,
        count_consistent: consistent,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(z: Complex64) -> Result<Complex64, Infallible> {
        Ok((z - c(1.0, 0.5)) * (z - c(-0.5, -0.2)) * (z - c(2.0, 0.0)).powi(2))
    }

    #[test]
    fn winding_counts_enclosed_zeros_with_multiplicity() {
        let r = Region::new(-1.0, 3.0, -1.0, 1.0).unwrap();
        assert_eq!(winding_number(&poly, &r, 32).unwrap(), 4);
        let r = Region::new(1.5, 3.0, -1.0, 1.0).unwrap();
        assert_eq!(winding_number(&poly, &r, 32).unwrap(), 2);
        let r = Region::new(5.0, 6.0, -1.0, 1.0).unwrap();
        assert_eq!(winding_number(&poly, &r, 32).unwrap(), 0);
    }

    #[test]
    fn boundary_zero_is_reported() {
        let r = Region::new(0.0, 2.0, 0.5, 1.0).unwrap();
        assert!(matches!(winding_number(&poly, &r, 16), Err(RootError::BoundaryZero { .. })));
        let (w, used) = winding_number_nudged(&poly, &r, 16).unwrap();
        assert_eq!(w, 1);
        assert!(used.im_min < 0.5);
    }

    #[test]
    fn finds_simple_and_double_zeros() {
        let r = Region::new(-1.0, 3.0, -1.0, 1.0).unwrap();
        let out = find_zeros(&poly, &r, &FindZerosOptions::new((24, 16), 1e-10)).unwrap();
        let zs: Vec<Complex64> = out.roots.iter().map(|r| r.lambda).collect();
        assert_eq!(zs.len(), 3, "{zs:?}");
        assert!((zs[0] - c(-0.5, -0.2)).norm() < 1e-8);
        assert!((zs[1] - c(1.0, 0.5)).norm() < 1e-8);
        assert!((zs[2] - c(2.0, 0.0)).norm() < 1e-4);
        assert_eq!(out.roots[2].winding_mult, Some(2));
        assert_eq!(out.winding_total, Some(4));
        assert_eq!(out.count_consistent, Some(true));
    }

    #[test]
    fn constant_function_has_no_zeros() {
        let one = |_: Complex64| Ok::<_, Infallible>(c(1.0, 0.0));
        let r = Region::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let out = find_zeros(&one, &r, &FindZerosOptions::new((8, 8), 1e-10)).unwrap();
        assert!(out.roots.is_empty());
        assert_eq!(out.count_consistent, Some(true));
    }

    #[test]
    fn dedup_is_idempotent() {
        let rec = |z| RootRecord {
            lambda: z,
            residual: 1e-12,
            iterations: 3,
            winding_mult: None,
        };
        let once = dedup(vec![rec(c(1.0, 0.0)), rec(c(1.0 + 1e-9, 0.0)), rec(c(2.0, 0.0))]);
        assert_eq!(once.len(), 2);
        assert_eq!(dedup(once.clone()), once);
    }

    #[test]
    fn grid_must_be_at_least_8x8() {
        let r = Region::new(0.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(
            find_zeros(&poly, &r, &FindZerosOptions::new((4, 8), 1e-10)),
            Err(RootError::GridTooSmall(4, 8))
        );
    }

    #[test]
    fn muller_converges_on_cubic() {
        let f = |z: Complex64| Ok::<_, Infallible>(z * z * z - 1.0);
        let out = muller(&f, [c(0.8, 0.1), c(0.9, 0.0), c(1.1, -0.1)], 1e-12, 50).unwrap();
        assert!((out.root - c(1.0, 0.0)).norm() < 1e-12);
    }
}
