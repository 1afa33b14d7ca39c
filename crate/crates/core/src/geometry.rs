//! Contour geometry: limit-point/limit-circle classification, Stokes lines and
//! wedges, the numerical-range cones Q±, and the angle windows under which the
//! full-axis operator is known to have a nonempty resolvent set.
//!
//! All angles in this module are expressed in units of π internally whenever
//! they are exact. The Stokes lines sit at
//!
//! ```text
//! θ_k = −(N+2)/(2N+8) + 2k/(N+4),   k = 0, …, N+3   (times π)
//! ```
//!
//! and the contour is limit-circle exactly when φ hits one of them.

use std::f64::consts::PI;

use num_rational::Rational64;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::{normalize_radians, Angle, FLOAT_ANGLE_TOL};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("contour angle {0} must lie strictly inside (−π/2, π/2)")]
    PhiOutOfRange(String),
    #[error("the main-theorem window assumes φ ≠ 0")]
    ZeroAngle,
}

/// Which half-line of the contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// The wedge contour `Γ = {x e^{iφ sgn x}}` together with the potential
/// exponent `N` in `−(iz)^{N+2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WedgeProblemRepr", into = "WedgeProblemRepr")]
pub struct WedgeProblem {
    n: u32,
    phi: Angle,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WedgeProblemRepr {
    n: u32,
    phi: Angle,
}

impl TryFrom<WedgeProblemRepr> for WedgeProblem {
    type Error = GeometryError;
    fn try_from(r: WedgeProblemRepr) -> Result<Self, Self::Error> {
        WedgeProblem::new(r.n, r.phi)
    }
}

impl From<WedgeProblem> for WedgeProblemRepr {
    fn from(p: WedgeProblem) -> Self {
        WedgeProblemRepr { n: p.n, phi: p.phi }
    }
}

impl WedgeProblem {
    /// `N = 0` is admitted: it is the complex-rotated harmonic oscillator.
    pub fn new(n: u32, phi: Angle) -> Result<Self, GeometryError> {
        let inside = match phi.pi_ratio() {
            Some(r) => r > Rational64::new(-1, 2) && r < Rational64::new(1, 2),
            None => phi.radians() > -PI / 2.0 && phi.radians() < PI / 2.0,
        };
        if !inside {
            return Err(GeometryError::PhiOutOfRange(phi.to_string()));
        }
        Ok(Self { n, phi })
    }

    pub fn with_radians(n: u32, phi: f64) -> Result<Self, GeometryError> {
        let angle = Angle::from_radians(phi).map_err(|_| GeometryError::PhiOutOfRange(phi.to_string()))?;
        Self::new(n, angle)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn phi(&self) -> Angle {
        self.phi
    }

    /// `N + 4`, the number of Stokes lines.
    pub fn line_count(&self) -> usize {
        self.n as usize + 4
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContourCase {
    LimitPointI,
    LimitCircle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub case: ContourCase,
    /// Index of the Stokes line hit by φ; present only for limit-circle.
    #[serde(rename = "k")]
    pub matched_k: Option<u32>,
}

impl Classification {
    pub fn is_limit_point(&self) -> bool {
        self.case == ContourCase::LimitPointI
    }
}

/// `θ_k` in units of π, unnormalized.
fn stokes_line_ratio(n: u32, k: i64) -> Rational64 {
    let n = n as i64;
    Rational64::new(-(n + 2), 2 * n + 8) + Rational64::new(2 * k, n + 4)
}

/// Position of `θ` (units of π) measured in line spacings from `θ_0`:
/// `t = (θ + (N+2)/(2N+8)) · (N+4)/2`. Integer `t` means θ is on a line.
fn line_coordinate_exact(n: u32, theta: Rational64) -> Rational64 {
    let n = n as i64;
    (theta + Rational64::new(n + 2, 2 * n + 8)) * Rational64::new(n + 4, 2)
}

fn line_coordinate_float(n: u32, theta_rad: f64) -> f64 {
    let n = n as f64;
    (theta_rad / PI + (n + 2.0) / (2.0 * n + 8.0)) * (n + 4.0) / 2.0
}

/// Limit-point I unless φ lies on a Stokes line.
pub fn classify_contour(problem: &WedgeProblem) -> Classification {
    let lines = problem.line_count() as i64;
    let hit = match problem.phi.pi_ratio() {
        Some(r) => {
            let t = line_coordinate_exact(problem.n, r);
            t.is_integer().then(|| t.to_integer().rem_euclid(lines))
        }
        None => {
            let t = line_coordinate_float(problem.n, problem.phi.radians());
            let k = t.round();
            // distance in radians between φ and the nearest line
            let gap = (t - k).abs() * 2.0 * PI / lines as f64;
            (gap < FLOAT_ANGLE_TOL).then(|| (k as i64).rem_euclid(lines))
        }
    };
    match hit {
        Some(k) => Classification {
            case: ContourCase::LimitCircle,
            matched_k: Some(k as u32),
        },
        None => Classification {
            case: ContourCase::LimitPointI,
            matched_k: None,
        },
    }
}

/// Where a ray falls relative to the Stokes lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "index")]
pub enum StokesPosition {
    OnLine(u32),
    InSector(u32),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StokesSector {
    pub index: u32,
    /// Clockwise boundary `L_{k−1}`.
    pub from: Angle,
    /// Counterclockwise boundary `L_k`.
    pub to: Angle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StokesGeometry {
    pub n: u32,
    pub lines: Vec<Angle>,
    pub sectors: Vec<StokesSector>,
    /// Position of the ray `arg z = φ`, when φ was supplied.
    pub positive_ray: Option<StokesPosition>,
    /// Position of the ray `arg z = π − φ`.
    pub negative_ray: Option<StokesPosition>,
}

pub fn stokes_geometry(n: u32, phi: Option<&Angle>) -> StokesGeometry {
    let count = n as i64 + 4;
    let lines: Vec<Angle> = (0..count)
        .map(|k| Angle::from_pi_ratio(stokes_line_ratio(n, k)))
        .collect();
    let sectors = (0..count)
        .map(|k| StokesSector {
            index: k as u32,
            from: lines[(k - 1).rem_euclid(count) as usize],
            to: lines[k as usize],
        })
        .collect();
    let (positive_ray, negative_ray) = match phi {
        Some(phi) => {
            let back = Angle::from_pi_fraction(1, 1).expect("nonzero denominator").diff(phi);
            (Some(locate_ray(n, phi)), Some(locate_ray(n, &back)))
        }
        None => (None, None),
    };
    StokesGeometry {
        n,
        lines,
        sectors,
        positive_ray,
        negative_ray,
    }
}

/// Whether the rays `arg z = φ` and `arg z = π − φ` lie in the same open
/// Stokes sector.
pub fn contour_ends_share_wedge(problem: &WedgeProblem) -> bool {
    let g = stokes_geometry(problem.n(), Some(&problem.phi()));
    matches!(
        (g.positive_ray, g.negative_ray),
        (Some(StokesPosition::InSector(a)), Some(StokesPosition::InSector(b))) if a == b
    )
}

/// Sector or line containing the ray `arg z = θ`. Rays on a boundary are
/// reported as on the line, never inside a wedge.
pub fn locate_ray(n: u32, theta: &Angle) -> StokesPosition {
    let count = n as i64 + 4;
    match theta.pi_ratio() {
        Some(r) => {
            let t = line_coordinate_exact(n, r);
            if t.is_integer() {
                StokesPosition::OnLine(t.to_integer().rem_euclid(count) as u32)
            } else {
                StokesPosition::InSector(t.ceil().to_integer().rem_euclid(count) as u32)
            }
        }
        None => {
            let t = line_coordinate_float(n, theta.radians());
            let k = t.round();
            if (t - k).abs() * 2.0 * PI / count as f64 <= FLOAT_ANGLE_TOL {
                StokesPosition::OnLine((k as i64).rem_euclid(count) as u32)
            } else {
                StokesPosition::InSector((t.ceil() as i64).rem_euclid(count) as u32)
            }
        }
    }
}

/// Convex cone spanned by two rays from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeSector {
    pub ray_a: Angle,
    pub ray_b: Angle,
    /// Angular distance between the ray directions, in [0, π].
    pub opening: f64,
}

impl ConeSector {
    pub fn from_rays(ray_a: Angle, ray_b: Angle) -> Self {
        let opening = ray_b.diff(&ray_a).radians().abs();
        Self { ray_a, ray_b, opening }
    }

    /// Opening in units of π, when both rays are exact.
    pub fn opening_exact(&self) -> Option<Rational64> {
        let d = self.ray_b.diff(&self.ray_a).pi_ratio()?;
        Some(if d < Rational64::from_integer(0) { -d } else { d })
    }

    /// Opening strictly below π, decided exactly when possible.
    pub fn is_proper(&self) -> bool {
        match self.opening_exact() {
            Some(o) => o < Rational64::from_integer(1),
            None => (PI - self.opening) > FLOAT_ANGLE_TOL,
        }
    }

    /// Complex conjugate cone.
    pub fn conj(&self) -> Self {
        Self::from_rays(self.ray_a.neg(), self.ray_b.neg())
    }

    /// Euclidean distance from `z` to the closed cone. A degenerate cone with
    /// opening π is the full line through the two rays.
    pub fn distance(&self, z: Complex64) -> f64 {
        let ea = Complex64::from_polar(1.0, self.ray_a.radians());
        let eb = Complex64::from_polar(1.0, self.ray_b.radians());
        if !self.is_proper() {
            return (z * ea.conj()).im.abs();
        }
        // z = s·ea + t·eb; solve the real 2×2 system
        let det = ea.re * eb.im - ea.im * eb.re;
        if det.abs() > 1e-14 {
            let s = (z.re * eb.im - z.im * eb.re) / det;
            let t = (ea.re * z.im - ea.im * z.re) / det;
            if s >= 0.0 && t >= 0.0 {
                return 0.0;
            }
        }
        ray_distance(z, ea).min(ray_distance(z, eb))
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.distance(z) <= tol
    }
}

fn ray_distance(z: Complex64, dir: Complex64) -> f64 {
    let w = z * dir.conj();
    if w.re >= 0.0 {
        w.im.abs()
    } else {
        z.norm()
    }
}

/// The cone `Q±` spanned by `e^{∓2iφ}` and the potential direction
/// `−(ix)^{N+2} e^{±(N+2)iφ}` on the given half-line. `Q−` is the conjugate
/// of `Q+`.
pub fn q_sector(problem: &WedgeProblem, side: Side) -> ConeSector {
    let phi = problem.phi();
    let n = problem.n() as i64;
    let ray_a = phi.scale(-2);
    // π + (N+2)π/2 + (N+2)φ
    let offset = Angle::from_pi_ratio(Rational64::from_integer(1) + Rational64::new(n + 2, 2));
    let ray_b = offset.add(&phi.scale(n + 2));
    let plus = ConeSector::from_rays(ray_a, ray_b);
    match side {
        Side::Plus => plus,
        Side::Minus => plus.conj(),
    }
}

/// Whether φ lies in one of the angle windows `(2kπ/(N+2) − π/2,
/// (2k+1)π/(N+2) − π/2)`, `k ≥ 0`, for φ > 0, or in the mirror image of such
/// a window for φ < 0.
pub fn main_theorem_window(problem: &WedgeProblem) -> Result<bool, GeometryError> {
    let phi = problem.phi();
    let n = problem.n() as i64;
    match phi.pi_ratio() {
        Some(r) => {
            let zero = Rational64::from_integer(0);
            if r == zero {
                return Err(GeometryError::ZeroAngle);
            }
            let r = if r < zero { -r } else { r };
            // u = (φ/π + 1/2)(N+2); window ⟺ 2k < u < 2k+1
            let u = (r + Rational64::new(1, 2)) * Rational64::from_integer(n + 2);
            if u.is_integer() {
                return Ok(false);
            }
            Ok(u.floor().to_integer().rem_euclid(2) == 0)
        }
        None => {
            let x = phi.radians();
            if x == 0.0 {
                return Err(GeometryError::ZeroAngle);
            }
            let u = (x.abs() / PI + 0.5) * (n + 2) as f64;
            let fl = u.floor();
            Ok(u > fl && (fl as i64).rem_euclid(2) == 0)
        }
    }
}

/// Wedge-interior sample angles: `count` points in (−π/2, π/2) kept at least
/// `margin` radians away from every Stokes line.
pub fn wedge_interior_grid(n: u32, count: usize, margin: f64) -> Vec<f64> {
    let lines: Vec<f64> = stokes_geometry(n, None).lines.iter().map(|a| a.radians()).collect();
    let far_from_lines = |x: f64| {
        lines
            .iter()
            .all(|&l| normalize_radians(x - l).abs() > margin && normalize_radians(PI - x - l).abs() > margin)
    };
    let fine = 4000;
    let admissible: Vec<f64> = (1..fine)
        .map(|j| -PI / 2.0 + PI * j as f64 / fine as f64)
        .filter(|&x| x.abs() < PI / 2.0 - margin && far_from_lines(x))
        .collect();
    if admissible.is_empty() || count == 0 {
        return Vec::new();
    }
    (0..count)
        .map(|j| {
            let idx = ((j as f64 + 0.5) / count as f64 * admissible.len() as f64) as usize;
            admissible[idx.min(admissible.len() - 1)]
        })
        .collect()
}
