//! End-to-end spectra: the full-axis operator with an interface condition,
//! the Dirichlet half-line operators, and the structural reports attached
//! to them.
//!
//! Roots are searched on the normalized mismatch `d`. With `x_start` pinned
//! for the whole region, `d` equals the holomorphic mismatch times a
//! positive factor and the zero-free holomorphic `exp(−gauge)`, so it has
//! the same zeros and the same winding numbers while staying of order one
//! across the region.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::Angle;
use crate::geometry::{classify_contour, contour_ends_share_wedge, main_theorem_window, q_sector, Classification, ConeSector, Side, WedgeProblem};
use crate::halfline::{common_x_start, integrate_inward, HalfLineError, HalfLineProblem, SolverOptions};
use crate::matching::{coupling_alpha, mismatch, CouplingCondition, CouplingPreset, MatchingError};
use crate::roots::{find_zeros, FindZerosOptions, Region, RootError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("limit-circle contour: eigenvalue problem under-determined")]
    LimitCircleInput,
    /// Both contour ends lie in one Stokes wedge, so the two recessive
    /// solutions coincide and the C¹ gluing holds for every λ.
    #[error("contour ends share a Stokes wedge: derivative-continuity coupling is satisfied for every λ")]
    SharedWedge,
    #[error("invalid options: {0}")]
    InvalidOptions(String),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error("{side:?} half-line: {source}")]
    HalfLine {
        side: Side,
        #[source]
        source: HalfLineError,
    },
    #[error(transparent)]
    Root(#[from] RootError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumOptions {
    pub solver: SolverOptions,
    pub grid: (usize, usize),
    /// Acceptance threshold on the normalized mismatch at a refined root.
    pub tol: f64,
    pub pt_tol: f64,
    pub containment_tol: f64,
    pub samples_per_edge: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            solver: SolverOptions::default(),
            grid: (40, 12),
            tol: 1e-8,
            pt_tol: 1e-6,
            containment_tol: 1e-6,
            samples_per_edge: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenRecord {
    pub lambda: Complex64,
    /// Modulus of the normalized mismatch at `lambda`.
    pub residual: f64,
    pub iterations: usize,
    pub winding_mult: Option<i64>,
    /// Both half-line values vanish at the origin.
    pub degenerate_match: bool,
    /// Always 1: the recessive solution on each side is unique up to scale.
    pub geometric_multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PtSymmetryReport {
    pub tol: f64,
    pub symmetric: bool,
    /// `(i, j)` with `|λ_j − conj(λ_i)| ≤ tol`.
    pub pairs: Vec<(usize, usize)>,
    pub violations: Vec<Complex64>,
    /// Eigenvalues whose conjugate lies outside the search region.
    pub unverifiable: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub side: Side,
    pub tol: f64,
    pub sector: ConeSector,
    pub distances: Vec<f64>,
    pub contained: bool,
    pub violations: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub n: u32,
    pub phis: Vec<Angle>,
    pub count: usize,
    /// Lowest `count` eigenvalues per angle.
    pub eigenvalues: Vec<Vec<Complex64>>,
    pub max_deviation: f64,
    pub tol: f64,
    pub agree: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Reports {
    pub pt_symmetry: Option<PtSymmetryReport>,
    pub containment: Option<ContainmentReport>,
    pub invariance: Option<InvarianceReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub x_start: f64,
    /// Total accepted integrator steps across all evaluations.
    pub steps: usize,
    pub evaluations: usize,
    pub winding_total: Option<i64>,
    pub count_consistent: Option<bool>,
    pub dropped_candidates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub problem: WedgeProblem,
    /// Present for the full-axis operator.
    pub coupling: Option<CouplingCondition>,
    /// Present for a Dirichlet half-line operator.
    pub side: Option<Side>,
    pub classification: Classification,
    /// `None` when φ = 0, where the window test does not apply.
    pub window_flag: Option<bool>,
    pub region: Region,
    pub eigenvalues: Vec<EigenRecord>,
    pub reports: Reports,
    pub solver_opts: SolverOptions,
    pub diagnostics: Diagnostics,
}

impl SpectrumResult {
    pub fn lambdas(&self) -> Vec<Complex64> {
        self.eigenvalues.iter().map(|e| e.lambda).collect()
    }
}

fn validate(region: &Region, opts: &SpectrumOptions) -> Result<(), SpectrumError> {
    region.validate()?;
    opts.solver
        .validate()
        .map_err(|e| SpectrumError::InvalidOptions(e.to_string()))?;
    if !(opts.tol > 0.0 && opts.pt_tol > 0.0 && opts.containment_tol > 0.0) {
        return Err(SpectrumError::InvalidOptions("tolerances must be positive".into()));
    }
    Ok(())
}

struct Prepared {
    classification: Classification,
    window_flag: Option<bool>,
    solver: SolverOptions,
}

fn prepare(problem: &WedgeProblem, region: &Region, opts: &SpectrumOptions) -> Result<Prepared, SpectrumError> {
    validate(region, opts)?;
    let classification = classify_contour(problem);
    if !classification.is_limit_point() {
        return Err(SpectrumError::LimitCircleInput);
    }
    let x_start = match opts.solver.x_start {
        Some(x) => x,
        None => common_x_start(problem, &region.probe_points(), &opts.solver),
    };
    Ok(Prepared {
        classification,
        window_flag: main_theorem_window(problem).ok(),
        solver: SolverOptions {
            x_start: Some(x_start),
            ..opts.solver
        },
    })
}

/// Zeros of `g` in `region`, returned with the search diagnostics.
fn search<G>(
    g: &G,
    region: &Region,
    opts: &SpectrumOptions,
    steps: &AtomicUsize,
    x_start: f64,
) -> Result<(crate::roots::ZeroSearch, Diagnostics), SpectrumError>
where
    G: Fn(Complex64) -> Result<Complex64, SpectrumError> + Sync,
{
    let found = find_zeros(
        g,
        region,
        &FindZerosOptions {
            samples_per_edge: opts.samples_per_edge,
            ..FindZerosOptions::new(opts.grid, opts.tol)
        },
    )?;
    let diag = Diagnostics {
        x_start,
        steps: steps.load(Ordering::Relaxed),
        evaluations: found.evaluations,
        winding_total: found.winding_total,
        count_consistent: found.count_consistent,
        dropped_candidates: found.dropped.len(),
    };
    Ok((found, diag))
}

/// Eigenvalues of the full-axis operator in `region`.
pub fn compute_spectrum(
    problem: &WedgeProblem,
    coupling: &CouplingCondition,
    region: &Region,
    opts: &SpectrumOptions,
) -> Result<SpectrumResult, SpectrumError> {
    let prep = prepare(problem, region, opts)?;
    let continuity = Complex64::from_polar(1.0, problem.phi().scale(2).radians());
    if contour_ends_share_wedge(problem) && (coupling.alpha - continuity).norm() <= 1e-12 {
        return Err(SpectrumError::SharedWedge);
    }
    let steps = AtomicUsize::new(0);
    let g = |z: Complex64| -> Result<Complex64, SpectrumError> {
        let m = mismatch(problem, coupling, z, &prep.solver)?;
        steps.fetch_add(m.plus.steps + m.minus.steps, Ordering::Relaxed);
        Ok(m.d)
    };
    let (found, diagnostics) = search(&g, region, opts, &steps, prep.solver.x_start.unwrap_or_default())?;

    let mut eigenvalues = Vec::with_capacity(found.roots.len());
    for r in &found.roots {
        let m = mismatch(problem, coupling, r.lambda, &prep.solver)?;
        eigenvalues.push(EigenRecord {
            lambda: r.lambda,
            residual: r.residual,
            iterations: r.iterations,
            winding_mult: r.winding_mult,
            degenerate_match: m.degenerate,
            geometric_multiplicity: 1,
        });
    }
    let lambdas: Vec<Complex64> = eigenvalues.iter().map(|e| e.lambda).collect();
    let reports = Reports {
        pt_symmetry: coupling
            .pt_symmetric()
            .then(|| pt_symmetry_of(&lambdas, region, opts.pt_tol)),
        ..Reports::default()
    };
    Ok(SpectrumResult {
        problem: *problem,
        coupling: Some(*coupling),
        side: None,
        classification: prep.classification,
        window_flag: prep.window_flag,
        region: *region,
        eigenvalues,
        reports,
        solver_opts: prep.solver,
        diagnostics,
    })
}

/// Eigenvalues of the half-line operator with `w(0) = 0` on `side`.
pub fn dirichlet_spectrum(
    problem: &WedgeProblem,
    side: Side,
    region: &Region,
    opts: &SpectrumOptions,
) -> Result<SpectrumResult, SpectrumError> {
    let prep = prepare(problem, region, opts)?;
    let hp = HalfLineProblem::new(problem, side);
    let steps = AtomicUsize::new(0);
    let g = |z: Complex64| -> Result<Complex64, SpectrumError> {
        let b = integrate_inward(&hp, z, &prep.solver).map_err(|source| SpectrumError::HalfLine { side, source })?;
        steps.fetch_add(b.steps, Ordering::Relaxed);
        Ok(b.v0)
    };
    let (found, diagnostics) = search(&g, region, opts, &steps, prep.solver.x_start.unwrap_or_default())?;
    let eigenvalues: Vec<EigenRecord> = found
        .roots
        .iter()
        .map(|r| EigenRecord {
            lambda: r.lambda,
            residual: r.residual,
            iterations: r.iterations,
            winding_mult: r.winding_mult,
            degenerate_match: false,
            geometric_multiplicity: 1,
        })
        .collect();
    let lambdas: Vec<Complex64> = eigenvalues.iter().map(|e| e.lambda).collect();
    let reports = Reports {
        containment: Some(containment_of(problem, side, &lambdas, opts.containment_tol)),
        ..Reports::default()
    };
    Ok(SpectrumResult {
        problem: *problem,
        coupling: None,
        side: Some(side),
        classification: prep.classification,
        window_flag: prep.window_flag,
        region: *region,
        eigenvalues,
        reports,
        solver_opts: prep.solver,
        diagnostics,
    })
}

/// Conjugation pairing of a computed spectrum. Requires `|α| = 1`.
pub fn pt_symmetry_report(result: &SpectrumResult, tol: f64) -> Option<PtSymmetryReport> {
    let coupling = result.coupling?;
    coupling
        .pt_symmetric()
        .then(|| pt_symmetry_of(&result.lambdas(), &result.region, tol))
}

/// Pairs every eigenvalue with one within `tol` of its conjugate.
/// Eigenvalues whose conjugate falls outside `region` cannot be checked and
/// are listed separately.
pub fn pt_symmetry_of(lambdas: &[Complex64], region: &Region, tol: f64) -> PtSymmetryReport {
    let mut pairs = Vec::new();
    let mut violations = Vec::new();
    let mut unverifiable = Vec::new();
    for (i, l) in lambdas.iter().enumerate() {
        let target = l.conj();
        let partner = lambdas
            .iter()
            .enumerate()
            .map(|(j, m)| (j, (m - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, d)) if d <= tol => pairs.push((i, j)),
            _ if !region.contains(target) => unverifiable.push(*l),
            _ => violations.push(*l),
        }
    }
    PtSymmetryReport {
        tol,
        symmetric: violations.is_empty(),
        pairs,
        violations,
        unverifiable,
    }
}

pub fn containment_of(problem: &WedgeProblem, side: Side, lambdas: &[Complex64], tol: f64) -> ContainmentReport {
    let sector = q_sector(problem, side);
    let distances: Vec<f64> = lambdas.iter().map(|&l| sector.distance(l)).collect();
    let violations: Vec<Complex64> = lambdas
        .iter()
        .zip(&distances)
        .filter(|(_, d)| **d > tol)
        .map(|(l, _)| *l)
        .collect();
    ContainmentReport {
        side,
        tol,
        sector,
        distances,
        contained: violations.is_empty(),
        violations,
    }
}

/// Runs the continuity-coupled spectrum at each angle and compares the
/// lowest `count` eigenvalues elementwise.
pub fn contour_invariance_report(
    n: u32,
    phis: &[Angle],
    region: &Region,
    count: usize,
    tol: f64,
    opts: &SpectrumOptions,
) -> Result<(InvarianceReport, Vec<SpectrumResult>), SpectrumError> {
    let mut runs = Vec::with_capacity(phis.len());
    for phi in phis {
        let problem = WedgeProblem::new(n, *phi).map_err(|e| SpectrumError::InvalidOptions(e.to_string()))?;
        let coupling = coupling_alpha(CouplingPreset::DerivativeContinuity, phi, None)?;
        runs.push(compute_spectrum(&problem, &coupling, region, opts)?);
    }
    let eigenvalues: Vec<Vec<Complex64>> = runs
        .iter()
        .map(|r| r.lambdas().into_iter().take(count).collect())
        .collect();
    let complete = eigenvalues.iter().all(|v| v.len() == count);
    let mut max_deviation: f64 = 0.0;
    for a in 0..eigenvalues.len() {
        for b in a + 1..eigenvalues.len() {
            for (x, y) in eigenvalues[a].iter().zip(&eigenvalues[b]) {
                max_deviation = max_deviation.max((x - y).norm());
            }
        }
    }
    if !complete {
        max_deviation = f64::INFINITY;
    }
    Ok((
        InvarianceReport {
            n,
            phis: phis.to_vec(),
            count,
            eigenvalues,
            max_deviation,
            tol,
            agree: max_deviation <= tol,
        },
        runs,
    ))
}
