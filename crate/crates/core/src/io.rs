//! Run configuration, result documents and their JSON encoding.
//!
//! Every float is written with 17 significant digits, so documents re-parse
//! to bit-identical values and equal inputs give byte-identical files.

use std::io;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::angle::Angle;
use crate::fd::{oracle_validate, FdGrid, OracleOutcome, DEFAULT_STEP};
use crate::geometry::{classify_contour, stokes_geometry, Classification, Side, StokesGeometry, WedgeProblem};
use crate::halfline::{common_x_start, SolverOptions};
use crate::matching::{coupling_alpha, mismatch, CouplingCondition, CouplingPreset, MatchingError};
use crate::quad::QuadOptions;
use crate::roots::Region;
use crate::spectrum::{compute_spectrum, dirichlet_spectrum, Reports, SpectrumError, SpectrumOptions, SpectrumResult};
use crate::verify::{
    decay_profile_check, greens_identity_residual, holomorphy_check, DecayProfileReport, GreensResult,
    TestFunctionSpec,
};

/// Writes floats as `{:.16e}` and otherwise pretty-prints.
pub struct FixedFloatFormatter<'a> {
    inner: serde_json::ser::PrettyFormatter<'a>,
}

impl Default for FixedFloatFormatter<'_> {
    fn default() -> Self {
        Self {
            inner: serde_json::ser::PrettyFormatter::new(),
        }
    }
}

impl serde_json::ser::Formatter for FixedFloatFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{:.16e}", value as f64)
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Serializes with [`FixedFloatFormatter`]; non-finite floats become `null`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloatFormatter::default());
    value
        .serialize(&mut ser)
        .expect("serializing to memory does not fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Classify,
    Stokes,
    Spectrum,
    Dirichlet,
    Verify,
    OracleCheck,
}

/// φ in a config: `"p/q pi"` or radians as a number or string.
mod phi_format {
    use super::*;

    pub fn serialize<S: Serializer>(phi: &Angle, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&phi.to_string())
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Number(f64),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Angle, D::Error> {
        use serde::de::Error;
        match Raw::deserialize(d)? {
            Raw::Text(t) => t.parse().map_err(D::Error::custom),
            Raw::Number(x) => Angle::from_radians(x).map_err(D::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSpec {
    pub preset: CouplingPreset,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_re: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_im: Option<f64>,
}

impl Default for CouplingSpec {
    fn default() -> Self {
        Self {
            preset: CouplingPreset::DerivativeContinuity,
            alpha_re: None,
            alpha_im: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub n: u32,
    #[serde(with = "phi_format")]
    pub phi: Angle,
    #[serde(default)]
    pub coupling: CouplingSpec,
    /// Half-line for `dirichlet`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    #[serde(default = "default_region")]
    pub region: Region,
    #[serde(default = "default_grid")]
    pub grid: (usize, usize),
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_pt_tol")]
    pub pt_tol: f64,
    #[serde(default)]
    pub solver: SolverOptions,
    /// Candidates for `oracle-check` and sample points for `verify`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambdas: Vec<Complex64>,
    #[serde(default = "default_step")]
    pub h: f64,
    #[serde(default = "default_gap_tol")]
    pub gap_tol: f64,
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn default_region() -> Region {
    Region::new(0.0, 10.0, -1.0, 1.0).expect("valid default region")
}
fn default_grid() -> (usize, usize) {
    SpectrumOptions::default().grid
}
fn default_tol() -> f64 {
    SpectrumOptions::default().tol
}
fn default_pt_tol() -> f64 {
    SpectrumOptions::default().pt_tol
}
fn default_step() -> f64 {
    DEFAULT_STEP
}
fn default_gap_tol() -> f64 {
    1e-3
}
fn default_pairs() -> usize {
    20
}

/// Tolerances for the `verify` command.
pub const GREENS_TOL: f64 = 1e-6;
pub const HOLOMORPHY_TOL: f64 = 1e-4;
pub const HOLOMORPHY_STEP: f64 = 1e-4;

impl RunConfig {
    pub fn new(command: Command, n: u32, phi: Angle) -> Self {
        Self {
            command,
            n,
            phi,
            coupling: CouplingSpec::default(),
            side: None,
            region: default_region(),
            grid: default_grid(),
            tol: default_tol(),
            pt_tol: default_pt_tol(),
            solver: SolverOptions::default(),
            lambdas: Vec::new(),
            h: default_step(),
            gap_tol: default_gap_tol(),
            pairs: default_pairs(),
            seed: 0,
            output: None,
            csv: None,
            workers: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::validation("cli_and_io", "parse_config", e))
    }

    pub fn problem(&self) -> Result<WedgeProblem, RunError> {
        WedgeProblem::new(self.n, self.phi).map_err(|e| RunError::validation("contour_geometry", "validate_problem", e))
    }

    pub fn coupling_condition(&self) -> Result<CouplingCondition, RunError> {
        let custom = match (self.coupling.alpha_re, self.coupling.alpha_im) {
            (None, None) => None,
            (re, im) => Some(Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0))),
        };
        coupling_alpha(self.coupling.preset, &self.phi, custom)
            .map_err(|e| RunError::validation("matching_solver", "coupling_alpha", e))
    }

    pub fn spectrum_options(&self) -> SpectrumOptions {
        SpectrumOptions {
            solver: self.solver,
            grid: self.grid,
            tol: self.tol,
            pt_tol: self.pt_tol,
            ..SpectrumOptions::default()
        }
    }

    /// Checks everything that can be checked without numerics.
    pub fn validate(&self) -> Result<(), RunError> {
        let problem = self.problem()?;
        let io = |m: &str| RunError::validation("cli_and_io", "validate", m);
        if self.workers == Some(0) {
            return Err(io("worker count must be positive"));
        }
        match self.command {
            Command::Classify | Command::Stokes => {}
            Command::Spectrum | Command::Dirichlet | Command::OracleCheck => {
                if !classify_contour(&problem).is_limit_point() {
                    return Err(RunError::validation(
                        "spectrum_pipeline",
                        "compute_spectrum",
                        SpectrumError::LimitCircleInput,
                    ));
                }
                self.region
                    .validate()
                    .map_err(|e| RunError::validation("complex_rootfinder", "validate_region", e))?;
                self.solver
                    .validate()
                    .map_err(|e| RunError::validation("halfline_integrator", "validate_options", e))?;
                if self.command == Command::Dirichlet && self.side.is_none() {
                    return Err(io("dirichlet needs a side (plus or minus)"));
                }
                if self.command != Command::Dirichlet {
                    self.coupling_condition()?;
                }
                if self.grid.0 < 8 || self.grid.1 < 8 {
                    return Err(io(&format!("grid {}x{} too coarse: need at least 8x8", self.grid.0, self.grid.1)));
                }
                if !(self.tol > 0.0 && self.pt_tol > 0.0 && self.gap_tol > 0.0) {
                    return Err(io("tolerances must be positive"));
                }
                if self.command == Command::OracleCheck && !(self.h > 0.0 && self.h < 1.0) {
                    return Err(io("oracle step h must lie in (0, 1)"));
                }
            }
            Command::Verify => {
                if self.pairs == 0 {
                    return Err(io("need at least one test-function pair"));
                }
                self.solver
                    .validate()
                    .map_err(|e| RunError::validation("halfline_integrator", "validate_options", e))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("{module}::{operation}: {message}")]
    Validation {
        module: String,
        operation: String,
        message: String,
    },
    #[error("{module}::{operation}: {message}")]
    Numerical {
        module: String,
        operation: String,
        message: String,
    },
}

impl RunError {
    pub fn validation(module: &str, operation: &str, e: impl std::fmt::Display) -> Self {
        Self::Validation {
            module: module.into(),
            operation: operation.into(),
            message: e.to_string(),
        }
    }

    pub fn numerical(module: &str, operation: &str, e: impl std::fmt::Display) -> Self {
        Self::Numerical {
            module: module.into(),
            operation: operation.into(),
            message: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation { .. } => 2,
            Self::Numerical { .. } => 3,
        }
    }
}

fn spectrum_error(operation: &str, e: SpectrumError) -> RunError {
    match e {
        SpectrumError::LimitCircleInput
        | SpectrumError::SharedWedge
        | SpectrumError::InvalidOptions(_)
        | SpectrumError::Matching(
            MatchingError::MissingCustomAlpha
            | MatchingError::UnexpectedCustomAlpha
            | MatchingError::InvalidAlpha
            | MatchingError::LimitCircleInput,
        ) => RunError::validation("spectrum_pipeline", operation, e),
        other => RunError::numerical("spectrum_pipeline", operation, other),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingDoc {
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub preset: CouplingPreset,
}

impl From<CouplingCondition> for CouplingDoc {
    fn from(c: CouplingCondition) -> Self {
        Self {
            alpha_re: c.alpha.re,
            alpha_im: c.alpha.im,
            preset: c.preset,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenDoc {
    pub re: f64,
    pub im: f64,
    pub residual: f64,
    pub winding_mult: Option<i64>,
    pub degenerate_match: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverDoc {
    pub x_start: f64,
    pub target_decay: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub steps: usize,
    pub evaluations: usize,
    pub winding_total: Option<i64>,
    pub count_consistent: Option<bool>,
    pub dropped_candidates: usize,
}

/// Output of `spectrum` and `dirichlet`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    pub problem: WedgeProblem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<CouplingDoc>,
    pub classification: Classification,
    pub window_flag: Option<bool>,
    pub region: Region,
    pub eigenvalues: Vec<EigenDoc>,
    pub reports: Reports,
    pub solver: SolverDoc,
    pub config: RunConfig,
}

impl ResultDocument {
    pub fn from_result(r: &SpectrumResult, config: &RunConfig) -> Self {
        Self {
            problem: r.problem,
            side: r.side,
            coupling: r.coupling.map(CouplingDoc::from),
            classification: r.classification,
            window_flag: r.window_flag,
            region: r.region,
            eigenvalues: r
                .eigenvalues
                .iter()
                .map(|e| EigenDoc {
                    re: e.lambda.re,
                    im: e.lambda.im,
                    residual: e.residual,
                    winding_mult: e.winding_mult,
                    degenerate_match: e.degenerate_match,
                })
                .collect(),
            reports: r.reports.clone(),
            solver: SolverDoc {
                x_start: r.diagnostics.x_start,
                target_decay: r.solver_opts.target_decay,
                rel_tol: r.solver_opts.rel_tol,
                abs_tol: r.solver_opts.abs_tol,
                steps: r.diagnostics.steps,
                evaluations: r.diagnostics.evaluations,
                winding_total: r.diagnostics.winding_total,
                count_consistent: r.diagnostics.count_consistent,
                dropped_candidates: r.diagnostics.dropped_candidates,
            },
            config: config.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StokesDocument {
    pub problem: WedgeProblem,
    pub classification: Classification,
    pub geometry: StokesGeometry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreensPair {
    pub w: TestFunctionSpec,
    pub v: TestFunctionSpec,
    pub result: GreensResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolomorphyDoc {
    pub lambda: Complex64,
    pub h: f64,
    pub ratio: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyDocument {
    pub problem: WedgeProblem,
    pub classification: Classification,
    pub greens: Vec<GreensPair>,
    pub greens_max_residual: f64,
    pub greens_tol: f64,
    pub decay: Vec<DecayProfileReport>,
    /// Empty on limit-circle contours, where no mismatch is defined.
    pub holomorphy: Vec<HolomorphyDoc>,
    pub holomorphy_tol: f64,
    pub passed: bool,
    pub config: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCheck {
    pub lambda0: Complex64,
    pub grid: Option<FdGrid>,
    pub outcome: Option<OracleOutcome>,
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleDocument {
    pub problem: WedgeProblem,
    pub coupling: CouplingDoc,
    pub gap_tol: f64,
    pub checks: Vec<OracleCheck>,
    pub passed: bool,
    pub config: RunConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Classify(Classification),
    Stokes(StokesDocument),
    Spectrum(ResultDocument),
    Verify(VerifyDocument),
    Oracle(OracleDocument),
}

impl Output {
    pub fn to_json(&self) -> String {
        match self {
            Self::Classify(c) => to_json(c),
            Self::Stokes(d) => to_json(d),
            Self::Spectrum(d) => to_json(d),
            Self::Verify(d) => to_json(d),
            Self::Oracle(d) => to_json(d),
        }
    }

    /// Rows for the optional CSV table.
    pub fn eigen_rows(&self) -> Vec<EigenDoc> {
        match self {
            Self::Spectrum(d) => d.eigenvalues.clone(),
            Self::Oracle(d) => d
                .checks
                .iter()
                .filter_map(|c| c.outcome.as_ref())
                .map(|o| EigenDoc {
                    re: o.lambda_refined.re,
                    im: o.lambda_refined.im,
                    residual: o.gap,
                    winding_mult: None,
                    degenerate_match: false,
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// False when a verification or oracle check did not pass.
    pub fn passed(&self) -> bool {
        match self {
            Self::Verify(d) => d.passed,
            Self::Oracle(d) => d.passed,
            _ => true,
        }
    }
}

/// Validates `config` and runs the named pipeline on a pool of
/// `config.workers` threads (default: available parallelism).
pub fn execute(config: &RunConfig) -> Result<Output, RunError> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = config.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| RunError::numerical("cli_and_io", "thread_pool", e))?;
    pool.install(|| dispatch(config))
}

fn dispatch(config: &RunConfig) -> Result<Output, RunError> {
    let problem = config.problem()?;
    match config.command {
        Command::Classify => Ok(Output::Classify(classify_contour(&problem))),
        Command::Stokes => Ok(Output::Stokes(StokesDocument {
            problem,
            classification: classify_contour(&problem),
            geometry: stokes_geometry(problem.n(), Some(&problem.phi())),
        })),
        Command::Spectrum => {
            let coupling = config.coupling_condition()?;
            let r = compute_spectrum(&problem, &coupling, &config.region, &config.spectrum_options())
                .map_err(|e| spectrum_error("compute_spectrum", e))?;
            Ok(Output::Spectrum(ResultDocument::from_result(&r, config)))
        }
        Command::Dirichlet => {
            let side = config.side.expect("validated");
            let r = dirichlet_spectrum(&problem, side, &config.region, &config.spectrum_options())
                .map_err(|e| spectrum_error("dirichlet_spectrum", e))?;
            Ok(Output::Spectrum(ResultDocument::from_result(&r, config)))
        }
        Command::Verify => run_verify(&problem, config).map(Output::Verify),
        Command::OracleCheck => run_oracle(&problem, config).map(Output::Oracle),
    }
}

fn run_verify(problem: &WedgeProblem, config: &RunConfig) -> Result<VerifyDocument, RunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let quad = QuadOptions::default();
    let mut greens = Vec::with_capacity(config.pairs);
    for _ in 0..config.pairs {
        let w = TestFunctionSpec::random(&mut rng, 3);
        let v = TestFunctionSpec::random(&mut rng, 3);
        let result = greens_identity_residual(problem, &w, &v, &quad)
            .map_err(|e| RunError::numerical("verification_suite", "greens_identity_residual", e))?;
        greens.push(GreensPair { w, v, result });
    }
    let greens_max_residual = greens.iter().map(|g| g.result.residual).fold(0.0, f64::max);

    let lambdas = if config.lambdas.is_empty() {
        vec![Complex64::new(1.0, 0.0)]
    } else {
        config.lambdas.clone()
    };
    let decay: Vec<DecayProfileReport> = lambdas
        .iter()
        .map(|&l| decay_profile_check(problem, l, &config.solver))
        .collect();

    let classification = classify_contour(problem);
    let mut holomorphy = Vec::new();
    if classification.is_limit_point() {
        let coupling = config.coupling_condition()?;
        let h = HOLOMORPHY_STEP;
        for &l in &lambdas {
            // pin x_start over the stencil so the mismatch is one holomorphic function
            let stencil: Vec<Complex64> = [-1.0, 1.0]
                .iter()
                .flat_map(|&s| [l + s * h, l + Complex64::new(0.0, s * h)])
                .collect();
            let opts = SolverOptions {
                x_start: Some(common_x_start(problem, &stencil, &config.solver)),
                ..config.solver
            };
            let mut failure = None;
            let f = |z: Complex64| match mismatch(problem, &coupling, z, &opts) {
                Ok(m) => m.d_holomorphic,
                Err(e) => {
                    failure.get_or_insert(e.to_string());
                    Complex64::new(f64::NAN, f64::NAN)
                }
            };
            let ratio = holomorphy_check(f, l, h)
                .map_err(|e| RunError::validation("verification_suite", "holomorphy_check", e))?;
            if let Some(msg) = failure {
                return Err(RunError::numerical("matching_solver", "mismatch", msg));
            }
            holomorphy.push(HolomorphyDoc {
                lambda: l,
                h,
                ratio,
                passed: ratio < HOLOMORPHY_TOL,
            });
        }
    }
    let passed = greens_max_residual < GREENS_TOL && decay.iter().all(|d| d.passed) && holomorphy.iter().all(|h| h.passed);
    Ok(VerifyDocument {
        problem: *problem,
        classification,
        greens,
        greens_max_residual,
        greens_tol: GREENS_TOL,
        decay,
        holomorphy,
        holomorphy_tol: HOLOMORPHY_TOL,
        passed,
        config: config.clone(),
    })
}

fn run_oracle(problem: &WedgeProblem, config: &RunConfig) -> Result<OracleDocument, RunError> {
    let coupling = config.coupling_condition()?;
    let candidates = if config.lambdas.is_empty() {
        compute_spectrum(problem, &coupling, &config.region, &config.spectrum_options())
            .map_err(|e| spectrum_error("compute_spectrum", e))?
            .lambdas()
    } else {
        config.lambdas.clone()
    };
    let checks: Vec<OracleCheck> = candidates
        .iter()
        .map(|&l| {
            let grid = FdGrid::for_problem(problem, coupling, l, config.h);
            let outcome = grid.as_ref().map_err(|e| e.clone()).and_then(|g| oracle_validate(problem, l, g));
            match outcome {
                Ok(o) => OracleCheck {
                    lambda0: l,
                    grid: grid.ok(),
                    passed: o.gap < config.gap_tol,
                    outcome: Some(o),
                    error: None,
                },
                Err(e) => OracleCheck {
                    lambda0: l,
                    grid: grid.ok(),
                    outcome: None,
                    error: Some(format!("fd_oracle::oracle_validate: {e}")),
                    passed: false,
                },
            }
        })
        .collect();
    Ok(OracleDocument {
        problem: *problem,
        coupling: coupling.into(),
        gap_tol: config.gap_tol,
        passed: checks.iter().all(|c| c.passed),
        checks,
        config: config.clone(),
    })
}
