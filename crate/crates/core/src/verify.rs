//! Checks of operator identities and asymptotics that do not go through the
//! spectral pipeline: the boundary form of the parity-weighted Green
//! identity, WKB decay rates, and Cauchy–Riemann residuals.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::Angle;
use crate::geometry::{classify_contour, ContourCase, Side, WedgeProblem};
use crate::halfline::{expression_coefficients, wkb_logderiv, HalfLineProblem, SolverOptions};
use crate::ode::{self, OdeOptions, State};
use crate::quad::{integrate, QuadError, QuadOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("finite-difference step {0} outside [1e-6, 1e-3]")]
    InvalidStep(f64),
}

/// Half-width of the integration window; `x^7 e^{−x²}` is below 1e−20 there.
pub const GREEN_WINDOW: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFamily {
    Gaussian,
    PolynomialTimesGaussian,
}

/// `P(x) e^{−x²}` with `P(x) = Σ c_k x^k`; the Gaussian family is `P = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionSpec {
    pub family: TestFamily,
    pub coefficients: Vec<Complex64>,
}

impl TestFunctionSpec {
    pub fn gaussian() -> Self {
        Self {
            family: TestFamily::Gaussian,
            coefficients: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn polynomial(coefficients: Vec<Complex64>) -> Self {
        Self {
            family: TestFamily::PolynomialTimesGaussian,
            coefficients,
        }
    }

    /// Degree ≤ `max_degree`, coefficients uniform in the unit disc.
    pub fn random<R: Rng>(rng: &mut R, max_degree: usize) -> Self {
        let degree = rng.gen_range(0..=max_degree);
        let coefficients = (0..=degree)
            .map(|_| {
                let r = rng.gen::<f64>().sqrt();
                let t = rng.gen_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(r, t)
            })
            .collect();
        Self::polynomial(coefficients)
    }

    fn poly(&self, x: f64, order: usize) -> Complex64 {
        // order-th derivative of P at x
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coefficients.iter().enumerate().skip(order) {
            let falling: f64 = (0..order).map(|j| (k - j) as f64).product();
            acc += c * falling * x.powi((k - order) as i32);
        }
        acc
    }

    pub fn value(&self, x: f64) -> Complex64 {
        self.poly(x, 0) * (-x * x).exp()
    }

    pub fn derivative(&self, x: f64) -> Complex64 {
        (self.poly(x, 1) - self.poly(x, 0) * (2.0 * x)) * (-x * x).exp()
    }

    /// `(P'' − 4xP' + (4x² − 2)P) e^{−x²}`.
    pub fn second_derivative(&self, x: f64) -> Complex64 {
        (self.poly(x, 2) - self.poly(x, 1) * (4.0 * x) + self.poly(x, 0) * (4.0 * x * x - 2.0)) * (-x * x).exp()
    }

    /// `(w(0), w'(0))`; the family is smooth, so both one-sided limits agree.
    pub fn boundary_values(&self) -> (Complex64, Complex64) {
        (self.poly(0.0, 0), self.poly(0.0, 1))
    }
}

/// The maximal operator applied to a closed-form test function.
fn apply_operator(problem: &WedgeProblem, w: &TestFunctionSpec, x: f64) -> Complex64 {
    let (p, v) = expression_coefficients(problem, x);
    -p * w.second_derivative(x) + v * w.value(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreensResult {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

/// Boundary form at the origin:
/// `e^{−2iφ}(w'(0+) v̄(0−) + w(0+) v̄'(0−)) − e^{2iφ}(w'(0−) v̄(0+) + w(0−) v̄'(0+))`.
pub fn greens_boundary_form(phi: f64, w: (Complex64, Complex64), v: (Complex64, Complex64)) -> Complex64 {
    let (w0, dw0) = w;
    let (v0, dv0) = v;
    let term = dw0 * v0.conj() + w0 * dv0.conj();
    Complex64::from_polar(1.0, -2.0 * phi) * term - Complex64::from_polar(1.0, 2.0 * phi) * term
}

/// `|(P A w, v) − (P w, A v) − boundary form|`, with the parity applied in
/// closed form.
pub fn greens_identity_residual(
    problem: &WedgeProblem,
    w: &TestFunctionSpec,
    v: &TestFunctionSpec,
    quad: &QuadOptions,
) -> Result<GreensResult, VerifyError> {
    let integrand = |x: f64| {
        apply_operator(problem, w, -x) * v.value(x).conj() - w.value(-x) * apply_operator(problem, v, x).conj()
    };
    let lhs = integrate(integrand, -GREEN_WINDOW, 0.0, quad)? + integrate(integrand, 0.0, GREEN_WINDOW, quad)?;
    let rhs = greens_boundary_form(problem.phi().radians(), w.boundary_values(), v.boundary_values());
    Ok(GreensResult {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
    })
}

/// Cauchy–Riemann residual ratio of `f` at `lambda` with step `h`.
pub fn holomorphy_check<F>(mut f: F, lambda: Complex64, h: f64) -> Result<f64, VerifyError>
where
    F: FnMut(Complex64) -> Complex64,
{
    if !(1e-6..=1e-3).contains(&h) {
        return Err(VerifyError::InvalidStep(h));
    }
    let i = Complex64::new(0.0, 1.0);
    let dx = (f(lambda + h) - f(lambda - h)) / (2.0 * h);
    let dy = (f(lambda + i * h) - f(lambda - i * h)) / (2.0 * h);
    Ok((dx + i * dy).norm() / (dx.norm() + f64::MIN_POSITIVE))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchKind {
    Decaying,
    Growing,
    Oscillatory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchProfile {
    pub side: Side,
    pub kind: BranchKind,
    /// Largest deviation of `d log|w|/dx` from the WKB rate, relative to
    /// `|Re q^{1/2}|` (or to `|q|^{1/2}` for oscillatory branches).
    pub max_rel_error: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfileReport {
    pub n: u32,
    pub phi: Angle,
    pub lambda: Complex64,
    pub case: ContourCase,
    /// `(x1, x2)` per side.
    pub windows: Vec<(f64, f64)>,
    pub branches: Vec<BranchProfile>,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Relative tolerance of the slope comparison.
pub const DECAY_SLOPE_TOL: f64 = 0.02;

/// Start of a window where the WKB correction `Re q'/(4q)` is below a
/// quarter of the slope tolerance relative to the reference rate.
fn asymptotic_window(hp: &HalfLineProblem, lambda: Complex64, oscillatory: bool) -> (f64, f64) {
    let reference = |x: f64| {
        let r = hp.q(x, lambda).sqrt();
        if oscillatory {
            r.norm()
        } else {
            r.re.abs()
        }
    };
    let mut x1: f64 = 1.0;
    while x1 < 1e3 {
        let q = hp.q(x1, lambda);
        let corr = (hp.dq(x1) / (q * 4.0)).norm();
        if corr <= 0.25 * DECAY_SLOPE_TOL * reference(x1) && q.norm() > 100.0 * (1.0 + lambda.norm()) {
            break;
        }
        x1 *= 1.05;
    }
    let x2 = x1 + 20.0 / hp.q(x1, lambda).norm().sqrt();
    (x1, x2)
}

/// Integrates a WKB branch across `[from, to]` and returns the worst
/// deviation of `Re(w'/w)` from `sign · rate(x)`, relative to `scale(x)`.
fn branch_error(
    hp: &HalfLineProblem,
    lambda: Complex64,
    recessive: bool,
    from: f64,
    to: f64,
    opts: &SolverOptions,
    expected: &dyn Fn(f64) -> f64,
    scale: &dyn Fn(f64) -> f64,
) -> Option<f64> {
    let ld = wkb_logderiv(hp.q(from, lambda), hp.dq(from), recessive);
    let y0: State = [Complex64::new(1.0, 0.0), ld];
    let ode_opts = OdeOptions {
        rel_tol: opts.rel_tol,
        abs_tol: opts.abs_tol,
        max_steps: opts.max_steps,
        initial_step: 0.05 / hp.q(from, lambda).norm().sqrt(),
    };
    let mut worst: f64 = 0.0;
    let mut obs = |x: f64, y: &State, _: i64| {
        let slope = (y[1] / y[0]).re;
        worst = worst.max((slope - expected(x)).abs() / scale(x));
    };
    ode::integrate(|s, y| [y[1], hp.q(s, lambda) * y[0]], from, to, y0, &ode_opts, Some(&mut obs)).ok()?;
    Some(worst)
}

/// Compares log-slopes of both WKB branches with `±Re q^{1/2}` on a window
/// deep in the asymptotic regime, on both half-lines. In the limit-circle
/// configuration both slopes must instead be small against `|q|^{1/2}`.
pub fn decay_profile_check(problem: &WedgeProblem, lambda: Complex64, opts: &SolverOptions) -> DecayProfileReport {
    let case = classify_contour(problem).case;
    let oscillatory = case == ContourCase::LimitCircle;
    let mut windows = Vec::new();
    let mut branches = Vec::new();
    let mut failures = Vec::new();
    for side in [Side::Plus, Side::Minus] {
        let hp = HalfLineProblem::new(problem, side);
        let (x1, x2) = asymptotic_window(&hp, lambda, oscillatory);
        windows.push((x1, x2));
        let re_root = |x: f64| hp.q(x, lambda).sqrt().re.abs();
        let abs_root = |x: f64| hp.q(x, lambda).norm().sqrt();
        for recessive in [true, false] {
            let (kind, err) = if oscillatory {
                let zero = |_: f64| 0.0;
                (
                    BranchKind::Oscillatory,
                    branch_error(&hp, lambda, recessive, x1, x2, opts, &zero, &abs_root),
                )
            } else if recessive {
                // the decaying branch is integrated inward, where it dominates
                let rate = |x: f64| -re_root(x);
                (
                    BranchKind::Decaying,
                    branch_error(&hp, lambda, true, x2, x1, opts, &rate, &re_root),
                )
            } else {
                (
                    BranchKind::Growing,
                    branch_error(&hp, lambda, false, x1, x2, opts, &re_root, &re_root),
                )
            };
            let (max_rel_error, passed) = match err {
                Some(e) => (e, e < DECAY_SLOPE_TOL),
                None => (f64::INFINITY, false),
            };
            if !passed {
                failures.push(format!(
                    "{side:?} {kind:?} branch: relative slope error {max_rel_error:e} on [{x1}, {x2}]"
                ));
            }
            branches.push(BranchProfile {
                side,
                kind,
                max_rel_error,
                passed,
            });
        }
    }
    DecayProfileReport {
        n: problem.n(),
        phi: problem.phi(),
        lambda,
        case,
        windows,
        passed: failures.is_empty(),
        branches,
        failures,
    }
}
