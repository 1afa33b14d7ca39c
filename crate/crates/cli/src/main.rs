use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptwedge::io::{execute, format_float, Command, EigenDoc, RunConfig, RunError};
use ptwedge::{Angle, Complex64, CouplingPreset, Region, Side};

#[derive(Parser)]
#[command(name = "ptwedge", version, about = "Contour classification and spectra of -w'' - (iz)^{N+2} w = λ w on wedge contours")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Limit-point / limit-circle classification of the contour.
    Classify {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stokes lines and sectors, and where the contour rays fall.
    Stokes {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Eigenvalues of the coupled full-axis problem in a region.
    Spectrum {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Eigenvalues of one half-line with w(0) = 0.
    Dirichlet {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_enum)]
        side: SideArg,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Green identity, WKB decay profiles and holomorphy of the mismatch.
    Verify {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
        /// Number of random test-function pairs.
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample point `re,im` for decay and holomorphy checks (repeatable).
        #[arg(long = "lambda", value_parser = parse_complex, allow_hyphen_values = true)]
        lambdas: Vec<Complex64>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Finite-difference confirmation of eigenvalue candidates.
    OracleCheck {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
        /// Candidate `re,im` (repeatable); without any, the spectrum in
        /// `--region` is computed first.
        #[arg(long = "lambda", value_parser = parse_complex, allow_hyphen_values = true)]
        lambdas: Vec<Complex64>,
        #[arg(long, default_value_t = 0.005)]
        h: f64,
        #[arg(long, default_value_t = 1e-3)]
        gap_tol: f64,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Runs a JSON configuration file.
    Run {
        config: PathBuf,
        /// Overrides the worker count in the file.
        #[arg(long, env = "PTWEDGE_WORKERS")]
        workers: Option<usize>,
    },
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long)]
    n: u32,
    /// Contour angle: `p/q pi` or radians.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    phi: Angle,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Continuity,
    SelfAdjoint,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Plus,
    Minus,
}

#[derive(Args)]
struct CouplingArgs {
    #[arg(long, value_enum, default_value = "continuity")]
    alpha_preset: PresetArg,
    #[arg(long, allow_hyphen_values = true)]
    alpha_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: Option<f64>,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    /// Decay budget ∫ Re q^{1/2} from the origin to the integration start.
    #[arg(long, default_value_t = 40.0)]
    target_decay: f64,
}

#[derive(Args)]
struct SearchArgs {
    /// `re_min,re_max,im_min,im_max`.
    #[arg(long, value_parser = parse_region, allow_hyphen_values = true, default_value = "0,10,-1,1")]
    region: Region,
    /// Seed grid `NXxNY`.
    #[arg(long, value_parser = parse_grid, default_value = "40x12")]
    grid: (usize, usize),
    /// Acceptance threshold on the normalized mismatch.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pt_tol: f64,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// JSON result path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Optional CSV eigenvalue table.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, env = "PTWEDGE_WORKERS")]
    workers: Option<usize>,
}

fn parse_angle(s: &str) -> Result<Angle, String> {
    s.parse().map_err(|e: ptwedge::angle::AngleError| e.to_string())
}

fn parse_floats(s: &str, count: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != count {
        return Err(format!("expected {count} comma-separated numbers, got {}", v.len()));
    }
    Ok(v)
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let v = parse_floats(s, 2)?;
    Ok(Complex64::new(v[0], v[1]))
}

fn parse_region(s: &str) -> Result<Region, String> {
    let v = parse_floats(s, 4)?;
    Region::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NXxNY, got {s:?}"))?;
    let a = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((a, b))
}

impl ProblemArgs {
    fn config(&self, command: Command) -> RunConfig {
        RunConfig::new(command, self.n, self.phi)
    }
}

impl CouplingArgs {
    fn apply(&self, c: &mut RunConfig) {
        c.coupling.preset = match self.alpha_preset {
            PresetArg::Continuity => CouplingPreset::DerivativeContinuity,
            PresetArg::SelfAdjoint => CouplingPreset::SelfAdjoint,
            PresetArg::Custom => CouplingPreset::Custom,
        };
        c.coupling.alpha_re = self.alpha_re;
        c.coupling.alpha_im = self.alpha_im;
    }
}

impl SolverArgs {
    fn apply(&self, c: &mut RunConfig) {
        c.solver.rel_tol = self.rel_tol;
        c.solver.abs_tol = self.abs_tol;
        c.solver.target_decay = self.target_decay;
    }
}

impl SearchArgs {
    fn apply(&self, c: &mut RunConfig) {
        c.region = self.region;
        c.grid = self.grid;
        c.tol = self.tol;
        c.pt_tol = self.pt_tol;
        self.solver.apply(c);
    }
}

impl OutputArgs {
    fn apply(&self, c: &mut RunConfig) {
        c.output.clone_from(&self.output);
        c.csv.clone_from(&self.csv);
        c.workers = self.workers;
    }
}

fn build_config(cmd: Cmd) -> Result<RunConfig, RunError> {
    let config = match cmd {
        Cmd::Classify { problem, out } => {
            let mut c = problem.config(Command::Classify);
            out.apply(&mut c);
            c
        }
        Cmd::Stokes { problem, out } => {
            let mut c = problem.config(Command::Stokes);
            out.apply(&mut c);
            c
        }
        Cmd::Spectrum {
            problem,
            coupling,
            search,
            out,
        } => {
            let mut c = problem.config(Command::Spectrum);
            coupling.apply(&mut c);
            search.apply(&mut c);
            out.apply(&mut c);
            c
        }
        Cmd::Dirichlet {
            problem,
            side,
            search,
            out,
        } => {
            let mut c = problem.config(Command::Dirichlet);
            c.side = Some(match side {
                SideArg::Plus => Side::Plus,
                SideArg::Minus => Side::Minus,
            });
            search.apply(&mut c);
            out.apply(&mut c);
            c
        }
        Cmd::Verify {
            problem,
            coupling,
            pairs,
            seed,
            lambdas,
            solver,
            out,
        } => {
            let mut c = problem.config(Command::Verify);
            coupling.apply(&mut c);
            solver.apply(&mut c);
            c.pairs = pairs;
            c.seed = seed;
            c.lambdas = lambdas;
            out.apply(&mut c);
            c
        }
        Cmd::OracleCheck {
            problem,
            coupling,
            lambdas,
            h,
            gap_tol,
            search,
            out,
        } => {
            let mut c = problem.config(Command::OracleCheck);
            coupling.apply(&mut c);
            search.apply(&mut c);
            c.lambdas = lambdas;
            c.h = h;
            c.gap_tol = gap_tol;
            out.apply(&mut c);
            c
        }
        Cmd::Run { config, workers } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| RunError::validation("cli_and_io", "read_config", format!("{}: {e}", config.display())))?;
            let mut c = RunConfig::from_json(&text)?;
            if workers.is_some() {
                c.workers = workers;
            }
            c
        }
    };
    Ok(config)
}

/// Writes via a temporary file in the target directory and renames it.
fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn csv_table(rows: &[EigenDoc]) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["re", "im", "residual", "winding_mult", "degenerate_match"])?;
    for r in rows {
        w.write_record([
            format_float(r.re),
            format_float(r.im),
            format_float(r.residual),
            r.winding_mult.map(|m| m.to_string()).unwrap_or_default(),
            r.degenerate_match.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

fn run(cmd: Cmd) -> Result<bool, RunError> {
    let config = build_config(cmd)?;
    let output = execute(&config)?;
    let json = output.to_json();
    let io_err = |e: &dyn std::fmt::Display| RunError::numerical("cli_and_io", "write_output", e);
    match &config.output {
        Some(path) => write_atomic(path, json.as_bytes()).map_err(|e| io_err(&format!("{}: {e}", path.display())))?,
        None => print!("{json}"),
    }
    if let Some(path) = &config.csv {
        let table = csv_table(&output.eigen_rows()).map_err(|e| io_err(&e))?;
        write_atomic(path, &table).map_err(|e| io_err(&format!("{}: {e}", path.display())))?;
    }
    Ok(output.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more checks failed; see the report");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
