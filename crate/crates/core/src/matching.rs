//! Interface conditions at the origin and the mismatch function.
//!
//! With recessive data `(v₊, v₊')` and `(v₋, v₋')` at `0±`, a solution glued
//! as `w(0+) = w(0−)`, `w'(0+) = α w'(0−)` exists iff
//!
//! ```text
//! d(λ) = v₊'(0) v₋(0) − α v₋'(0) v₊(0) = 0.
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::Angle;
use crate::geometry::{classify_contour, Side, WedgeProblem};
use crate::halfline::{integrate_inward, BoundaryData, HalfLineError, HalfLineProblem, SolverOptions};

/// Below this modulus a normalized boundary value counts as vanishing.
pub const DEGENERATE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatchingError {
    #[error("a custom coupling needs an explicit alpha")]
    MissingCustomAlpha,
    #[error("alpha is only accepted with the custom preset")]
    UnexpectedCustomAlpha,
    #[error("alpha must be finite and nonzero")]
    InvalidAlpha,
    #[error("limit-circle contour: eigenvalue problem under-determined")]
    LimitCircleInput,
    #[error("{side:?} half-line: {source}")]
    HalfLine {
        side: Side,
        #[source]
        source: HalfLineError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingPreset {
    /// `α = e^{2iφ}`: the glued function is C¹ along the contour.
    DerivativeContinuity,
    /// `α = e^{−4iφ}`: self-adjoint in the Krein inner product.
    SelfAdjoint,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingCondition {
    pub alpha: Complex64,
    pub preset: CouplingPreset,
}

impl CouplingCondition {
    pub fn pt_symmetric(&self) -> bool {
        (self.alpha.norm() - 1.0).abs() <= 1e-14
    }
}

pub fn coupling_alpha(
    preset: CouplingPreset,
    phi: &Angle,
    custom: Option<Complex64>,
) -> Result<CouplingCondition, MatchingError> {
    let alpha = match (preset, custom) {
        (CouplingPreset::DerivativeContinuity, None) => Complex64::from_polar(1.0, phi.scale(2).radians()),
        (CouplingPreset::SelfAdjoint, None) => Complex64::from_polar(1.0, phi.scale(-4).radians()),
        (CouplingPreset::Custom, Some(a)) => {
            if !(a.re.is_finite() && a.im.is_finite()) || a.norm() == 0.0 {
                return Err(MatchingError::InvalidAlpha);
            }
            a
        }
        (CouplingPreset::Custom, None) => return Err(MatchingError::MissingCustomAlpha),
        (_, Some(_)) => return Err(MatchingError::UnexpectedCustomAlpha),
    };
    Ok(CouplingCondition { alpha, preset })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MismatchValue {
    /// Mismatch from the normalized boundary pairs.
    pub d: Complex64,
    /// Same determinant from the gauged pairs; holomorphic in λ when
    /// `x_start` is fixed.
    pub d_holomorphic: Complex64,
    /// Weyl quotients `v'(0)/v(0)` per side, when both values are nonzero.
    pub quotients: Option<(Complex64, Complex64)>,
    /// Both `v₊(0)` and `v₋(0)` vanish: a Dirichlet-type gluing.
    pub degenerate: bool,
    pub plus: BoundaryData,
    pub minus: BoundaryData,
}

/// Determinant form of the interface condition.
pub fn determinant(plus: (Complex64, Complex64), minus: (Complex64, Complex64), alpha: Complex64) -> Complex64 {
    plus.1 * minus.0 - alpha * minus.1 * plus.0
}

pub fn mismatch(
    problem: &WedgeProblem,
    coupling: &CouplingCondition,
    lambda: Complex64,
    opts: &SolverOptions,
) -> Result<MismatchValue, MatchingError> {
    if !classify_contour(problem).is_limit_point() {
        return Err(MatchingError::LimitCircleInput);
    }
    let solve = |side| {
        integrate_inward(&HalfLineProblem::new(problem, side), lambda, opts)
            .map_err(|source| MatchingError::HalfLine { side, source })
    };
    let (plus, minus) = rayon::join(|| solve(Side::Plus), || solve(Side::Minus));
    let (plus, minus) = (plus?, minus?);
    Ok(mismatch_from(&plus, &minus, coupling.alpha))
}

pub fn mismatch_from(plus: &BoundaryData, minus: &BoundaryData, alpha: Complex64) -> MismatchValue {
    let d = determinant((plus.v0, plus.dv0), (minus.v0, minus.dv0), alpha);
    let d_holomorphic = determinant(plus.holomorphic_pair(), minus.holomorphic_pair(), alpha);
    let quotients = (plus.v0.norm() > DEGENERATE_TOL && minus.v0.norm() > DEGENERATE_TOL)
        .then(|| (plus.dv0 / plus.v0, minus.dv0 / minus.v0));
    MismatchValue {
        d,
        d_holomorphic,
        quotients,
        degenerate: plus.v0.norm() <= DEGENERATE_TOL && minus.v0.norm() <= DEGENERATE_TOL,
        plus: *plus,
        minus: *minus,
    }
}
