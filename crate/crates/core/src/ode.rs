//! Dormand–Prince 5(4) integrator for two-component complex linear systems.
//!
//! The state is rescaled by an exact power of two whenever its modulus grows
//! past [`RESCALE_THRESHOLD`], so that solutions growing like `e^{40}` or more
//! stay representable. Because the system is linear, rescaling commutes with
//! the flow; the accumulated exponent is returned alongside the state.

use num_complex::Complex64;
use thiserror::Error;

pub type State = [Complex64; 2];

pub const RESCALE_THRESHOLD: f64 = 1e100;
/// Rescale by `2^-RESCALE_EXPONENT` (≈ 1e-100).
pub const RESCALE_EXPONENT: i32 = 332;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("step limit of {max_steps} exceeded at x = {x}")]
    StepLimitExceeded { max_steps: usize, x: f64 },
    #[error("non-finite state at x = {x}")]
    NonFinite { x: f64 },
    #[error("step size underflow at x = {x}")]
    StepSizeUnderflow { x: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Initial step magnitude; the sign is taken from the direction of travel.
    pub initial_step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeOutcome {
    /// Final state, to be multiplied by `2^(RESCALE_EXPONENT · rescales)`.
    pub state: State,
    pub rescales: i64,
    pub steps: usize,
    pub rejected: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += k[0] * (h * c);
        out[1] += k[1] * (h * c);
    }
    out
}

fn max_modulus(y: &State) -> f64 {
    y[0].norm().max(y[1].norm())
}

/// Integrates `y' = rhs(x, y)` from `x0` to `x1` (either direction).
///
/// `observer` sees every accepted point, including the start, as
/// `(x, state, rescales)`.
pub fn integrate<F>(
    rhs: F,
    x0: f64,
    x1: f64,
    y0: State,
    opts: &OdeOptions,
    mut observer: Option<&mut dyn FnMut(f64, &State, i64)>,
) -> Result<OdeOutcome, OdeError>
where
    F: Fn(f64, &State) -> State,
{
    const SAFETY: f64 = 0.9;
    const MIN_FACTOR: f64 = 0.2;
    const MAX_FACTOR: f64 = 5.0;

    let dir = if x1 >= x0 { 1.0 } else { -1.0 };
    let span = (x1 - x0).abs();
    let mut x = x0;
    let mut y = y0;
    let mut rescales = 0i64;
    let mut steps = 0usize;
    let mut rejected = 0usize;
    let mut h = opts.initial_step.abs().min(span).max(f64::MIN_POSITIVE) * dir;
    let mut k1 = rhs(x, &y);
    if let Some(obs) = observer.as_mut() {
        obs(x, &y, rescales);
    }
    let scale = |a: Complex64, b: Complex64| opts.abs_tol + opts.rel_tol * a.norm().max(b.norm());

    while (x1 - x) * dir > 0.0 {
        if steps + rejected >= opts.max_steps {
            return Err(OdeError::StepLimitExceeded {
                max_steps: opts.max_steps,
                x,
            });
        }
        let last = (x + h - x1) * dir >= 0.0;
        if last {
            h = x1 - x;
        }
        if h.abs() < 1e-14 * (1.0 + x.abs()) && !last {
            return Err(OdeError::StepSizeUnderflow { x });
        }

        let k2 = rhs(x + C2 * h, &axpy(&y, &[(A21, &k1)], h));
        let k3 = rhs(x + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = rhs(x + C4 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = rhs(
            x + C5 * h,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let k6 = rhs(
            x + h,
            &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
        );
        let y_new = axpy(
            &y,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            h,
        );
        let k7 = rhs(x + h, &y_new);

        let mut err_sq = 0.0;
        for i in 0..2 {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let s = scale(y[i], y_new[i]);
            err_sq += (e.norm() / s).powi(2);
        }
        let err = (err_sq / 2.0).sqrt();
        if !err.is_finite() {
            if y_new.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) && h.abs() < 1e-10 {
                return Err(OdeError::NonFinite { x });
            }
            h *= MIN_FACTOR;
            rejected += 1;
            continue;
        }

        if err <= 1.0 {
            x = if last { x1 } else { x + h };
            y = y_new;
            k1 = k7;
            steps += 1;
            if max_modulus(&y) > RESCALE_THRESHOLD {
                let f = 2f64.powi(-RESCALE_EXPONENT);
                y = [y[0] * f, y[1] * f];
                k1 = [k1[0] * f, k1[1] * f];
                rescales += 1;
            }
            if !max_modulus(&y).is_finite() {
                return Err(OdeError::NonFinite { x });
            }
            if let Some(obs) = observer.as_mut() {
                obs(x, &y, rescales);
            }
            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            h *= factor;
        } else {
            rejected += 1;
            h *= (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
        }
    }

    Ok(OdeOutcome {
        state: y,
        rescales,
        steps,
        rejected,
    })
}
