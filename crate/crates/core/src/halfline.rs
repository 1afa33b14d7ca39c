//! Recessive solutions of the half-line equations.
//!
//! On each half-line the eigenvalue equation is written as `u'' = q(s) u` in
//! the outward variable `s ≥ 0` (`x = s` on the plus side, `x = −s` on the
//! minus side), with
//!
//! ```text
//! q(s) = A s^{N+2} − b λ,   A = −(iσ)^{N+2} · pot_phase / p,   b = 1/p
//! ```
//!
//! where `σ = ±1` is the side. The recessive solution is seeded from the
//! WKB form `q^{−1/4} exp(−∫ q^{1/2})` at a point `x_start` far enough out
//! that the dominant solution has been suppressed by `e^{−target_decay}`,
//! then integrated inward to the origin.
//!
//! Besides the normalized boundary pair, every [`BoundaryData`] carries a
//! complex `gauge`: multiplying the normalized pair by
//! `exp(log_scale + gauge)` gives boundary data that depend holomorphically
//! on λ and stay of moderate size, provided `x_start` is held fixed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{classify_contour, Side, WedgeProblem};
use crate::ode::{self, OdeError, OdeOptions, State, RESCALE_EXPONENT};
use crate::quad::gauss_kronrod_15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HalfLineError {
    #[error("limit-circle contour: no distinguished recessive solution")]
    LimitCircleInput,
    #[error("WKB branch ambiguous at x = {x}: Re q^(1/2) vanishes to working precision")]
    BranchAmbiguous { x: f64 },
    #[error("seed point x = {x} is not in the asymptotic regime: |q| = {q_abs:e} ≤ 10(1+|λ|)")]
    SeedNotAsymptotic { x: f64, q_abs: f64 },
    #[error("step limit of {max_steps} exceeded at x = {x}")]
    StepLimitExceeded { max_steps: usize, x: f64 },
    #[error("non-finite state at x = {x} despite rescaling")]
    NonFiniteState { x: f64 },
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
}

impl From<OdeError> for HalfLineError {
    fn from(e: OdeError) -> Self {
        match e {
            OdeError::StepLimitExceeded { max_steps, x } => HalfLineError::StepLimitExceeded { max_steps, x },
            OdeError::NonFinite { x } | OdeError::StepSizeUnderflow { x } => HalfLineError::NonFiniteState { x },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOptions {
    pub target_decay: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    pub x_cap: f64,
    /// Fixed starting point overriding the decay-budget choice.
    #[serde(default)]
    pub x_start: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            target_decay: 40.0,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 200_000,
            x_cap: 50.0,
            x_start: None,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), HalfLineError> {
        let bad = |m: &str| Err(HalfLineError::InvalidOptions(m.to_string()));
        if !(self.target_decay > 0.0 && self.target_decay.is_finite()) {
            return bad("target_decay must be positive");
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive");
        }
        if !(self.x_cap > 0.0 && self.x_cap.is_finite()) {
            return bad("x_cap must be positive");
        }
        if let Some(x) = self.x_start {
            if !(x > 0.0 && x.is_finite()) {
                return bad("x_start must be positive");
            }
        }
        Ok(())
    }
}

/// `i^k`, exact.
fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// One half of the contour problem, written in the outward variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLineProblem {
    pub side: Side,
    /// Coefficient of `−w''`.
    pub p: Complex64,
    pub pot_phase: Complex64,
    pub n: u32,
    pub problem: WedgeProblem,
    leading: Complex64,
    lambda_coeff: Complex64,
}

impl HalfLineProblem {
    pub fn new(problem: &WedgeProblem, side: Side) -> Self {
        let n = problem.n();
        let phi = problem.phi().radians();
        let sgn = side.sign();
        let p = Complex64::from_polar(1.0, -2.0 * sgn * phi);
        let pot_phase = Complex64::from_polar(1.0, sgn * (n as f64 + 2.0) * phi);
        // (iσ)^{N+2} = i^{N+2} σ^{N+2}
        let mut orient = i_pow(n + 2);
        if side == Side::Minus && (n + 2) % 2 == 1 {
            orient = -orient;
        }
        let leading = -orient * pot_phase / p;
        Self {
            side,
            p,
            pot_phase,
            n,
            problem: *problem,
            leading,
            lambda_coeff: p.inv(),
        }
    }

    /// `A` in `q(s) = A s^{N+2} − bλ`.
    pub fn leading(&self) -> Complex64 {
        self.leading
    }

    /// `b` in `q(s) = A s^{N+2} − bλ`.
    pub fn lambda_coeff(&self) -> Complex64 {
        self.lambda_coeff
    }

    pub fn q(&self, s: f64, lambda: Complex64) -> Complex64 {
        self.leading * s.powi(self.n as i32 + 2) - self.lambda_coeff * lambda
    }

    pub fn dq(&self, s: f64) -> Complex64 {
        self.leading * ((self.n as f64 + 2.0) * s.powi(self.n as i32 + 1))
    }

    /// Exponent `m = (N+2)/2` of the leading WKB phase `a s^m`.
    fn half_degree(&self) -> f64 {
        (self.n as f64 + 2.0) / 2.0
    }
}

/// Coefficient of `−w''` and potential `−(ix)^{N+2} e^{±(N+2)iφ}` of the
/// half-line expression at a signed point `x` of the contour parameter.
pub fn expression_coefficients(problem: &WedgeProblem, x: f64) -> (Complex64, Complex64) {
    let side = if x >= 0.0 { Side::Plus } else { Side::Minus };
    let hp = HalfLineProblem::new(problem, side);
    // A s^{N+2} = V / p with s = |x|
    let v = hp.leading() * hp.p * x.abs().powi(problem.n() as i32 + 2);
    (hp.p, v)
}

/// WKB seed of the recessive solution at `x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbSeed {
    pub value: Complex64,
    pub logderiv: Complex64,
}

/// `±q^{1/2} − q'/(4q)`; the branch of `q^{1/2}` has `Re ≥ 0`.
pub fn wkb_logderiv(q: Complex64, dq: Complex64, recessive: bool) -> Complex64 {
    let r = q.sqrt();
    let r = if r.re < 0.0 { -r } else { r };
    let sign = if recessive { -1.0 } else { 1.0 };
    r * sign - dq / (q * 4.0)
}

pub fn wkb_seed(hp: &HalfLineProblem, lambda: Complex64, x0: f64) -> Result<WkbSeed, HalfLineError> {
    let q = hp.q(x0, lambda);
    if q.norm() <= 10.0 * (1.0 + lambda.norm()) {
        return Err(HalfLineError::SeedNotAsymptotic { x: x0, q_abs: q.norm() });
    }
    let r = q.sqrt();
    if r.re.abs() < 1e-6 * r.norm() {
        return Err(HalfLineError::BranchAmbiguous { x: x0 });
    }
    Ok(WkbSeed {
        value: Complex64::new(1.0, 0.0),
        logderiv: wkb_logderiv(q, hp.dq(x0), true),
    })
}

/// `∫_a^b |Re q(t)^{1/2}| dt` by one 15-point rule.
fn decay_integral(hp: &HalfLineProblem, lambda: Complex64, a: f64, b: f64) -> f64 {
    let f = |t: f64| Complex64::new(hp.q(t, lambda).sqrt().re.abs(), 0.0);
    gauss_kronrod_15(&f, a, b).0.re
}

/// Smallest `x` with decay budget `≥ target` and `|q(x)| > 10(1+|λ|)`,
/// capped at `x_cap`. Returns `(x, capped)`.
pub fn choose_x_start(hp: &HalfLineProblem, lambda: Complex64, opts: &SolverOptions) -> (f64, bool) {
    const PANEL: f64 = 0.25;
    let mut acc = 0.0;
    let mut lo = 0.0;
    let mut x = None;
    while lo < opts.x_cap {
        let hi = (lo + PANEL).min(opts.x_cap);
        let piece = decay_integral(hp, lambda, lo, hi);
        if acc + piece >= opts.target_decay {
            // bisect inside the panel
            let (mut a, mut b) = (lo, hi);
            for _ in 0..40 {
                let mid = 0.5 * (a + b);
                if acc + decay_integral(hp, lambda, lo, mid) >= opts.target_decay {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            x = Some(b);
            break;
        }
        acc += piece;
        lo = hi;
    }
    let mut x = match x {
        Some(x) => x,
        None => return (opts.x_cap, true),
    };
    let floor = 10.0 * (1.0 + lambda.norm());
    while hp.q(x, lambda).norm() <= floor * 1.01 {
        x += PANEL;
        if x >= opts.x_cap {
            return (opts.x_cap, true);
        }
    }
    (x, false)
}

/// Boundary values at the origin of the recessive solution, in the original
/// coordinate (`dv0` is `w'(0±)`, not the derivative in the outward variable).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub side: Side,
    pub v0: Complex64,
    pub dv0: Complex64,
    /// Natural log of the positive factor divided out by normalization.
    pub log_scale: f64,
    /// Log of the λ-dependent normalization making the pair holomorphic.
    pub gauge: Complex64,
    pub x_start: f64,
    /// `x_start` hit `x_cap` before the decay budget was met.
    pub capped: bool,
    pub steps: usize,
}

impl BoundaryData {
    /// `(v0, dv0) · exp(log_scale + gauge)`.
    pub fn holomorphic_pair(&self) -> (Complex64, Complex64) {
        let f = (self.gauge + self.log_scale).exp();
        (self.v0 * f, self.dv0 * f)
    }

    /// Log-modulus of the factor applied by [`Self::holomorphic_pair`].
    pub fn holomorphic_log_modulus(&self) -> f64 {
        self.log_scale + self.gauge.re
    }
}

/// `ln G(X)`: rescales the unit seed at `X` to the WKB normalization
/// `q^{−1/4} exp(−∫ q^{1/2})` with the λ-free constant of the phase
/// integral dropped, so that `G · w(0)` is moderate in size and
/// holomorphic in λ.
fn gauge(hp: &HalfLineProblem, lambda: Complex64, x: f64) -> Complex64 {
    let m = hp.half_degree();
    let mut a = hp.leading().sqrt();
    if a.re < 0.0 {
        a = -a;
    }
    let ell = if (m - 1.0).abs() < 1e-12 {
        x.ln()
    } else {
        x.powf(1.0 - m) / (1.0 - m)
    };
    // q^{−1/4} prefactor, split so the λ-dependent part stays on the
    // principal branch: q = A X^{N+2} (1 − bλ / (A X^{N+2}))
    let lead = hp.leading() * x.powi(hp.n as i32 + 2);
    let prefactor = -(lead.ln() + (1.0 - hp.lambda_coeff() * lambda / lead).ln()) / 4.0;
    -a * x.powf(m + 1.0) / (m + 1.0) + hp.lambda_coeff() * lambda / (a * 2.0) * ell + prefactor
}

/// Optional recording of `(s, ln|u(s)|, u'(s)/u(s))` along an inward run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    pub points: Vec<(f64, f64, Complex64)>,
}

/// Divides a boundary pair by `max(|v|, |v'|)`; returns the scaled pair and
/// the log of the divisor. `None` for a zero or non-finite pair.
pub fn normalize_pair(v: Complex64, dv: Complex64) -> Option<(Complex64, Complex64, f64)> {
    let m = v.norm().max(dv.norm());
    (m.is_finite() && m > 0.0).then(|| (v / m, dv / m, m.ln()))
}

/// Integrates the recessive solution from `x_start` to 0.
pub fn integrate_inward(
    hp: &HalfLineProblem,
    lambda: Complex64,
    opts: &SolverOptions,
) -> Result<BoundaryData, HalfLineError> {
    integrate_inward_with(hp, lambda, opts, None, None)
}

/// [`integrate_inward`] with an optional seed log-derivative perturbation
/// and an optional trace of the solution.
pub fn integrate_inward_with(
    hp: &HalfLineProblem,
    lambda: Complex64,
    opts: &SolverOptions,
    seed_perturbation: Option<Complex64>,
    trace: Option<&mut Trace>,
) -> Result<BoundaryData, HalfLineError> {
    opts.validate()?;
    if !classify_contour(&hp.problem).is_limit_point() {
        return Err(HalfLineError::LimitCircleInput);
    }
    let (x_start, capped) = match opts.x_start {
        Some(x) => (x, false),
        None => choose_x_start(hp, lambda, opts),
    };
    let seed = wkb_seed(hp, lambda, x_start)?;
    let logderiv = seed.logderiv + seed_perturbation.unwrap_or_default();
    let y0: State = [seed.value, seed.value * logderiv];

    let ode_opts = OdeOptions {
        rel_tol: opts.rel_tol,
        abs_tol: opts.abs_tol,
        max_steps: opts.max_steps,
        initial_step: 0.05 / hp.q(x_start, lambda).norm().sqrt().max(1.0),
    };
    let rhs = |s: f64, y: &State| [y[1], hp.q(s, lambda) * y[0]];
    let out = match trace {
        Some(t) => {
            let ln2 = RESCALE_EXPONENT as f64 * std::f64::consts::LN_2;
            let mut obs = |s: f64, y: &State, k: i64| {
                t.points.push((s, y[0].norm().ln() + k as f64 * ln2, y[1] / y[0]));
            };
            ode::integrate(rhs, x_start, 0.0, y0, &ode_opts, Some(&mut obs))?
        }
        None => ode::integrate(rhs, x_start, 0.0, y0, &ode_opts, None)?,
    };

    let [u, du] = out.state;
    let (v0, dv0, ln_m) = normalize_pair(u, du * hp.side.sign()).ok_or(HalfLineError::NonFiniteState { x: 0.0 })?;
    let log_scale = ln_m + out.rescales as f64 * RESCALE_EXPONENT as f64 * std::f64::consts::LN_2;
    Ok(BoundaryData {
        side: hp.side,
        v0,
        dv0,
        log_scale,
        gauge: gauge(hp, lambda, x_start),
        x_start,
        capped,
        steps: out.steps,
    })
}

/// Largest decay-budget start point over a set of spectral parameters and
/// both sides; pinning `x_start` to it keeps λ ↦ boundary data holomorphic
/// over a whole search region.
pub fn common_x_start(problem: &WedgeProblem, lambdas: &[Complex64], opts: &SolverOptions) -> f64 {
    let mut x: f64 = 0.0;
    for side in [Side::Plus, Side::Minus] {
        let hp = HalfLineProblem::new(problem, side);
        for &l in lambdas {
            x = x.max(choose_x_start(&hp, l, opts).0);
        }
    }
    x.min(opts.x_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;

    fn harmonic() -> WedgeProblem {
        WedgeProblem::new(0, Angle::zero()).unwrap()
    }

    #[test]
    fn harmonic_coefficients() {
        let hp = HalfLineProblem::new(&harmonic(), Side::Plus);
        assert_eq!(hp.leading(), Complex64::new(1.0, 0.0));
        assert_eq!(hp.q(10.0, Complex64::new(1.0, 0.0)), Complex64::new(99.0, 0.0));
        let hm = HalfLineProblem::new(&harmonic(), Side::Minus);
        assert_eq!(hm.leading(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn phases_have_unit_modulus() {
        let p = WedgeProblem::with_radians(3, 0.37).unwrap();
        for side in [Side::Plus, Side::Minus] {
            let hp = HalfLineProblem::new(&p, side);
            assert!((hp.p.norm() - 1.0).abs() < 1e-15);
            assert!((hp.pot_phase.norm() - 1.0).abs() < 1e-15);
        }
        let plus = HalfLineProblem::new(&p, Side::Plus);
        assert!((plus.p - Complex64::from_polar(1.0, -0.74)).norm() < 1e-15);
        assert!((plus.pot_phase - Complex64::from_polar(1.0, 5.0 * 0.37)).norm() < 1e-15);
    }

    #[test]
    fn seed_examples() {
        let hp = HalfLineProblem::new(&harmonic(), Side::Plus);
        let s = wkb_seed(&hp, Complex64::new(0.0, 0.0), 10.0).unwrap();
        assert!((s.logderiv - Complex64::new(-10.05, 0.0)).norm() < 1e-13);
        assert_eq!(s.value.norm(), 1.0);
        let s = wkb_seed(&hp, Complex64::new(1.0, 0.0), 10.0).unwrap();
        let want = -(99f64).sqrt() - 20.0 / 396.0;
        assert!((s.logderiv.re - want).abs() < 1e-13);
        assert!((s.logderiv.re + 10.0004).abs() < 1e-4);
    }

    #[test]
    fn seed_rejects_points_near_origin() {
        let hp = HalfLineProblem::new(&harmonic(), Side::Plus);
        assert!(matches!(
            wkb_seed(&hp, Complex64::new(50.0, 0.0), 5.0),
            Err(HalfLineError::SeedNotAsymptotic { .. })
        ));
    }

    #[test]
    fn ground_and_first_odd_state() {
        let hp = HalfLineProblem::new(&harmonic(), Side::Plus);
        let o = SolverOptions::default();
        let b = integrate_inward(&hp, Complex64::new(1.0, 0.0), &o).unwrap();
        assert!((b.dv0 / b.v0).norm() < 1e-8);
        let b = integrate_inward(&hp, Complex64::new(3.0, 0.0), &o).unwrap();
        assert!(b.v0.norm() < 1e-8 * b.dv0.norm());
    }

    #[test]
    fn decay_budget_is_met() {
        let p = WedgeProblem::new(1, Angle::zero()).unwrap();
        let hp = HalfLineProblem::new(&p, Side::Plus);
        let o = SolverOptions::default();
        let b = integrate_inward(&hp, Complex64::new(0.0, 0.0), &o).unwrap();
        assert!(b.log_scale.is_finite());
        assert!(b.log_scale >= o.target_decay - 5.0, "{}", b.log_scale);
        assert!(!b.capped);
    }

    #[test]
    fn refuses_limit_circle() {
        let p = WedgeProblem::new(2, Angle::from_pi_fraction(1, 3).unwrap()).unwrap();
        let hp = HalfLineProblem::new(&p, Side::Plus);
        assert_eq!(
            integrate_inward(&hp, Complex64::new(0.0, 0.0), &SolverOptions::default()),
            Err(HalfLineError::LimitCircleInput)
        );
    }

    #[test]
    fn gauged_pair_matches_hermite_normalization() {
        // Recessive solution e^{−x²/2} at λ = 1: the gauge cancels e^{X²/2}
        // and X^{λ/2 − 1/2} so the gauged value at 0 is a constant
        let hp = HalfLineProblem::new(&harmonic(), Side::Plus);
        let o = SolverOptions {
            x_start: Some(9.0),
            ..SolverOptions::default()
        };
        let b = integrate_inward(&hp, Complex64::new(1.0, 0.0), &o).unwrap();
        let (v, _) = b.holomorphic_pair();
        let o2 = SolverOptions {
            x_start: Some(10.0),
            ..SolverOptions::default()
        };
        let b2 = integrate_inward(&hp, Complex64::new(1.0, 0.0), &o2).unwrap();
        let (v2, _) = b2.holomorphic_pair();
        // independent of X up to the O(X^{-2}) WKB correction
        assert!((v / v2 - 1.0).norm() < 1e-2, "{v} {v2}");
    }
}
