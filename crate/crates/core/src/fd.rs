//! Finite-difference cross-check of individual eigenvalues.
//!
//! The contour problem is discretized on `x_j = j h`, `|j| ≤ n`, `h = L/n`,
//! with Dirichlet conditions at `±L` and one shared unknown at the origin.
//! Interior rows use the three-point Laplacian. The origin row encodes
//! `w'(0+) = α w'(0−)` with second-order one-sided differences and carries
//! no λ, so the discrete problem is the generalized pencil `A w = λ B w`
//! with `B` the identity except for a zero at the origin.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::band::{BandError, BandMatrix};
use crate::geometry::{classify_contour, Side, WedgeProblem};
use crate::halfline::{choose_x_start, expression_coefficients, HalfLineProblem, SolverOptions};
use crate::matching::CouplingCondition;

pub const DEFAULT_STEP: f64 = 0.005;
/// Decay budget required at `±L`.
pub const TRUNCATION_DECAY: f64 = 30.0;
const RQI_TOL: f64 = 1e-10;
const RQI_MAX_ITER: usize = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FdError {
    #[error("limit-circle contour: eigenvalue problem under-determined")]
    LimitCircleInput,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("inverse iteration did not converge in {iterations} iterations (last change {last_change:e})")]
    NoConvergence { iterations: usize, last_change: f64 },
    #[error(transparent)]
    Band(#[from] BandError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdGrid {
    pub l: f64,
    pub h: f64,
    /// Points per side, `h = L/n`.
    pub n: usize,
    pub interface: CouplingCondition,
}

impl FdGrid {
    /// Rounds `L/h` to an integer and adjusts `h` to match.
    pub fn new(l: f64, h: f64, interface: CouplingCondition) -> Result<Self, FdError> {
        if !(l > 0.0 && h > 0.0 && h < l && l.is_finite()) {
            return Err(FdError::InvalidGrid(format!("need 0 < h < L, got L = {l}, h = {h}")));
        }
        let n = (l / h).round() as usize;
        if n < 3 {
            return Err(FdError::InvalidGrid("fewer than 3 points per side".into()));
        }
        Ok(Self {
            l,
            h: l / n as f64,
            n,
            interface,
        })
    }

    /// `L` from the decay budget at `λ0` on both sides, rounded up to a
    /// multiple of `h`.
    pub fn for_problem(
        problem: &WedgeProblem,
        interface: CouplingCondition,
        lambda0: Complex64,
        h: f64,
    ) -> Result<Self, FdError> {
        let opts = SolverOptions {
            target_decay: TRUNCATION_DECAY,
            ..SolverOptions::default()
        };
        let l = [Side::Plus, Side::Minus]
            .iter()
            .map(|&s| choose_x_start(&HalfLineProblem::new(problem, s), lambda0, &opts).0)
            .fold(0.0, f64::max);
        let l = (l / h).ceil() * h;
        Self::new(l, h, interface)
    }

    pub fn unknowns(&self) -> usize {
        2 * self.n - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub lambda_refined: Complex64,
    pub gap: f64,
    pub iterations: usize,
    /// `λ0` was already a discrete eigenvalue to working precision.
    pub singular_shift: bool,
}

/// Assembles `A − σB`.
fn shifted_matrix(problem: &WedgeProblem, grid: &FdGrid, sigma: Complex64) -> Result<BandMatrix, FdError> {
    let size = grid.unknowns();
    let n = grid.n as isize;
    let h2 = grid.h * grid.h;
    let mut m = BandMatrix::zeros(size, 2, 2);
    let idx = |j: isize| (j + n - 1) as usize;
    for j in -(n - 1)..n {
        let r = idx(j);
        if j == 0 {
            let a = grid.interface.alpha;
            let one = Complex64::new(1.0, 0.0);
            // (−3w0 + 4w1 − w2) − α(3w0 − 4w−1 + w−2) = 0
            m.set(r, idx(0), -one * 3.0 - a * 3.0)?;
            m.set(r, idx(1), one * 4.0)?;
            m.set(r, idx(2), -one)?;
            m.set(r, idx(-1), a * 4.0)?;
            m.set(r, idx(-2), -a)?;
            continue;
        }
        let (p, v) = expression_coefficients(problem, j as f64 * grid.h);
        m.set(r, r, p * (2.0 / h2) + v - sigma)?;
        if j > -(n - 1) {
            m.set(r, idx(j - 1), -p / h2)?;
        }
        if j < n - 1 {
            m.set(r, idx(j + 1), -p / h2)?;
        }
    }
    Ok(m)
}

fn apply_b(grid: &FdGrid, y: &[Complex64]) -> Vec<Complex64> {
    let mut out = y.to_vec();
    out[grid.n - 1] = Complex64::new(0.0, 0.0);
    out
}

fn normalized(v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Rayleigh-quotient iteration on the discrete pencil, starting at `λ0`.
pub fn oracle_validate(
    problem: &WedgeProblem,
    lambda0: Complex64,
    grid: &FdGrid,
) -> Result<OracleOutcome, FdError> {
    if !classify_contour(problem).is_limit_point() {
        return Err(FdError::LimitCircleInput);
    }
    let size = grid.unknowns();
    // generic start vector, nonzero at the origin and on both sides
    let mut y: Vec<Complex64> = normalized(
        (0..size)
            .map(|k| {
                let t = (k as f64 + 1.0) / (size as f64 + 1.0);
                Complex64::new(1.0 + 0.3 * t, 0.2 - 0.1 * t)
            })
            .collect(),
    );
    let mut sigma = lambda0;
    let mut last_change = f64::INFINITY;
    for it in 1..=RQI_MAX_ITER {
        let lu = match shifted_matrix(problem, grid, sigma)?.factor() {
            Ok(lu) => lu,
            Err(BandError::Singular { .. }) => {
                return Ok(OracleOutcome {
                    lambda_refined: sigma,
                    gap: (sigma - lambda0).norm(),
                    iterations: it - 1,
                    singular_shift: it == 1,
                })
            }
            Err(e) => return Err(e.into()),
        };
        y = normalized(lu.solve(&apply_b(grid, &y))?);
        let z = lu.solve(&apply_b(grid, &y))?;
        let mu = sigma + dot(&y, &y) / dot(&y, &z);
        last_change = (mu - sigma).norm();
        if !last_change.is_finite() {
            break;
        }
        if last_change <= RQI_TOL * (1.0 + mu.norm()) {
            return Ok(OracleOutcome {
                lambda_refined: mu,
                gap: (mu - lambda0).norm(),
                iterations: it,
                singular_shift: false,
            });
        }
        sigma = mu;
        y = normalized(z);
    }
    Err(FdError::NoConvergence {
        iterations: RQI_MAX_ITER,
        last_change,
    })
}
