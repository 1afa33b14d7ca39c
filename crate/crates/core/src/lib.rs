//! Point spectra of Schrödinger operators with potential `−(iz)^{N+2}` posed
//! on wedge contours `Γ = {x e^{iφ sgn x}}`.
//!
//! The crate is split the same way the computation is:
//!
//! - [`geometry`]: limit-point/limit-circle classification, Stokes lines and
//!   the numerical-range cones of the two half-line expressions.
//! - [`halfline`]: recessive solutions on each half-line by WKB seeding and
//!   inward shooting.
//! - [`matching`]: the interface condition and the mismatch function whose
//!   zeros are the eigenvalues.
//! - [`roots`]: zeros of holomorphic functions in a rectangle.
//! - [`spectrum`]: end-to-end pipelines and structural reports.
//! - [`verify`]: operator identities and asymptotics checked independently.
//! - [`fd`]: a finite-difference cross-check of individual eigenvalues.
//! - [`io`]: run configuration and result documents.

pub mod angle;
pub mod band;
pub mod fd;
pub mod geometry;
pub mod halfline;
pub mod io;
pub mod matching;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod spectrum;
pub mod verify;

pub use angle::Angle;
pub use geometry::{classify_contour, ContourCase, Side, WedgeProblem};
pub use matching::{CouplingCondition, CouplingPreset};
pub use roots::Region;
pub use num_complex::Complex64;
