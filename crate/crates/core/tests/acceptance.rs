//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::time::{Duration, Instant};

use num_rational::Rational64;
use ptwedge::fd::{oracle_validate, FdGrid, DEFAULT_STEP};
use ptwedge::geometry::q_sector;
use ptwedge::halfline::{common_x_start, SolverOptions};
use ptwedge::matching::{coupling_alpha, mismatch};
use ptwedge::quad::QuadOptions;
use ptwedge::roots::{find_zeros, winding_number, FindZerosOptions};
use ptwedge::spectrum::{compute_spectrum, dirichlet_spectrum, SpectrumOptions};
use ptwedge::verify::{greens_identity_residual, TestFunctionSpec};
use ptwedge::{classify_contour, Angle, Complex64, ContourCase, CouplingPreset, Region, Side, WedgeProblem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("pool")
        .install(f)
}

fn harmonic_run() -> (Vec<Complex64>, Duration) {
    let p = WedgeProblem::new(0, Angle::zero()).unwrap();
    let alpha = coupling_alpha(CouplingPreset::Custom, &p.phi(), Some(c(1.0, 0.0))).unwrap();
    let region = Region::new(0.0, 10.0, -1.0, 1.0).unwrap();
    let t = Instant::now();
    let r = single_threaded(|| compute_spectrum(&p, &alpha, &region, &SpectrumOptions::default())).unwrap();
    (r.lambdas(), t.elapsed())
}

fn c1(harmonic: &(Vec<Complex64>, Duration)) -> Verdict {
    let (lambdas, elapsed) = harmonic;
    let exact = [1.0, 3.0, 5.0, 7.0, 9.0];
    let err = lambdas
        .iter()
        .zip(exact)
        .map(|(l, e)| (l - e).norm())
        .fold(0.0, f64::max);
    let pass = lambdas.len() == 5 && err < 1e-6 && elapsed.as_secs_f64() < 10.0;
    verdict(
        pass,
        format!("{} eigenvalues, max error {err:.2e}, {:.2} s single-threaded", lambdas.len(), elapsed.as_secs_f64()),
    )
}

/// `pπ/q` with `|p/q| < 1/2` for every `q ≤ 64`, fractions not reduced.
fn rational_angles() -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for q in 1..=64i64 {
        for p in -q..=q {
            if 2 * p.abs() < q {
                out.push((p, q));
            }
        }
    }
    out
}

/// Limit-circle index by integer arithmetic:
/// `p/q = −(N+2)/(2N+8) + 2k/(N+4)` ⟺ `2p(N+4) + q(N+2) = 4kq`.
fn limit_circle_k(n: i64, p: i64, q: i64) -> Option<i64> {
    let lhs = 2 * p * (n + 4) + q * (n + 2);
    (lhs % (4 * q) == 0).then(|| (lhs / (4 * q)).rem_euclid(n + 4))
}

fn c2() -> Verdict {
    let t = Instant::now();
    let mut checked = 0;
    let mut mismatches = Vec::new();
    let mut circles = 0;
    for n in 0..=12i64 {
        for &(p, q) in &rational_angles() {
            let problem = WedgeProblem::new(n as u32, Angle::from_pi_fraction(p, q).unwrap()).unwrap();
            let got = classify_contour(&problem);
            let expected = limit_circle_k(n, p, q);
            let agree = match expected {
                Some(k) => got.case == ContourCase::LimitCircle && got.matched_k.map(i64::from) == Some(k),
                None => got.case == ContourCase::LimitPointI && got.matched_k.is_none(),
            };
            circles += expected.is_some() as usize;
            checked += 1;
            if !agree {
                mismatches.push(format!("N={n} φ={p}/{q}π"));
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    verdict(
        mismatches.is_empty() && secs < 5.0,
        format!(
            "{checked} angles ({circles} limit-circle), {} disagreements {:?}, {secs:.2} s",
            mismatches.len(),
            mismatches.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

struct InvarianceRuns {
    /// `(φ, lowest three eigenvalues, seconds)`.
    runs: Vec<(f64, Vec<Complex64>, f64)>,
}

fn invariance_runs() -> InvarianceRuns {
    let region = Region::new(0.0, 10.0, -1.0, 1.0).unwrap();
    let runs = [0.0, 0.1, 0.2]
        .iter()
        .map(|&phi| {
            let p = WedgeProblem::with_radians(1, phi).unwrap();
            let alpha = coupling_alpha(CouplingPreset::DerivativeContinuity, &p.phi(), None).unwrap();
            let t = Instant::now();
            let r = compute_spectrum(&p, &alpha, &region, &SpectrumOptions::default()).unwrap();
            let mut lambdas = r.lambdas();
            lambdas.sort_by(|a, b| a.re.total_cmp(&b.re));
            lambdas.truncate(3);
            (phi, lambdas, t.elapsed().as_secs_f64())
        })
        .collect();
    InvarianceRuns { runs }
}

fn c3(inv: &InvarianceRuns) -> Verdict {
    let complete = inv.runs.iter().all(|(_, l, _)| l.len() == 3);
    let mut dev: f64 = 0.0;
    for (i, a) in inv.runs.iter().enumerate() {
        for b in &inv.runs[i + 1..] {
            for (x, y) in a.1.iter().zip(&b.1) {
                dev = dev.max((x - y).norm());
            }
        }
    }
    let slowest = inv.runs.iter().map(|r| r.2).fold(0.0, f64::max);
    let lowest: Vec<String> = inv.runs[0].1.iter().map(|z| format!("{:.9}", z.re)).collect();
    verdict(
        complete && dev < 1e-4 && slowest < 60.0,
        format!(
            "lowest three {} , max pairwise deviation {dev:.2e}, slowest run {slowest:.2} s",
            lowest.join(", ")
        ),
    )
}

fn c4() -> Verdict {
    let region = Region::new(-1.0, 12.0, -4.0, 4.0).unwrap();
    let mut runs = 0;
    let mut skipped = Vec::new();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for n in 0..=2u32 {
        for phi in [0.0, 0.2, -0.2] {
            let p = WedgeProblem::with_radians(n, phi).unwrap();
            if !classify_contour(&p).is_limit_point() {
                skipped.push(format!("N={n} φ={phi}"));
                continue;
            }
            for preset in [CouplingPreset::DerivativeContinuity, CouplingPreset::SelfAdjoint] {
                let alpha = coupling_alpha(preset, &p.phi(), None).unwrap();
                let r = compute_spectrum(&p, &alpha, &region, &SpectrumOptions::default()).unwrap();
                runs += 1;
                let lambdas = r.lambdas();
                // every eigenvalue has a conjugate partner in the list
                for l in &lambdas {
                    let d = lambdas.iter().map(|m| (m - l.conj()).norm()).fold(f64::INFINITY, f64::min);
                    worst = worst.max(d);
                }
                let report = r.reports.pt_symmetry.as_ref();
                if !report.is_some_and(|s| s.symmetric) || worst >= 1e-6 {
                    failures.push(format!("N={n} φ={phi} {preset:?}"));
                }
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "{runs} spectra, worst conjugate distance {worst:.2e}, failures {failures:?}, skipped (on a Stokes line) {skipped:?}"
        ),
    )
}

fn c5() -> Verdict {
    let region = Region::new(-12.0, 12.0, -12.0, 12.0).unwrap();
    let mut details = Vec::new();
    let mut pass = true;
    for (n, phi) in [(0u32, 0.0), (1, 0.0), (2, 0.1)] {
        let p = WedgeProblem::with_radians(n, phi).unwrap();
        for side in [Side::Plus, Side::Minus] {
            let r = dirichlet_spectrum(&p, side, &region, &SpectrumOptions::default()).unwrap();
            let sector = q_sector(&p, side);
            let worst = r.lambdas().iter().map(|&l| sector.distance(l)).fold(0.0, f64::max);
            let ok = !r.eigenvalues.is_empty() && worst <= 1e-6;
            pass &= ok;
            details.push(format!("N={n} φ={phi} {side:?}: {} roots, max dist {worst:.1e}", r.eigenvalues.len()));
            if (n, side) == (0, Side::Plus) {
                let mut re: Vec<Complex64> = r.lambdas();
                re.sort_by(|a, b| a.re.total_cmp(&b.re));
                let err = re
                    .iter()
                    .zip([3.0, 7.0, 11.0])
                    .map(|(l, e)| (l - e).norm())
                    .fold(0.0, f64::max);
                let exact = re.len() == 3 && err < 1e-6;
                pass &= exact;
                details.push(format!("harmonic Plus = {{3, 7, 11}} within {err:.1e}"));
            }
        }
    }
    verdict(pass, details.join("; "))
}

fn c6() -> Verdict {
    let mut checked = 0;
    let mut bad = Vec::new();
    let one = Rational64::from_integer(1);
    for n in 0..=12u32 {
        for &(p, q) in &rational_angles() {
            let problem = WedgeProblem::new(n, Angle::from_pi_fraction(p, q).unwrap()).unwrap();
            let lp = classify_contour(&problem).is_limit_point();
            for side in [Side::Plus, Side::Minus] {
                checked += 1;
                match q_sector(&problem, side).opening_exact() {
                    Some(o) if (o < one) == lp => {}
                    other => bad.push(format!("N={n} φ={p}/{q}π {side:?} opening {other:?}")),
                }
            }
        }
    }
    verdict(bad.is_empty(), format!("{checked} sectors, exact openings, {} disagreements {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

fn c7(harmonic: &(Vec<Complex64>, Duration), inv: &InvarianceRuns) -> Verdict {
    let mut cases: Vec<(u32, f64, Complex64)> = harmonic.0.iter().map(|&l| (0, 0.0, l)).collect();
    for (phi, lambdas, _) in &inv.runs {
        cases.extend(lambdas.iter().map(|&l| (1, *phi, l)));
    }
    let mut worst: f64 = 0.0;
    let mut over = Vec::new();
    for &(n, phi, l) in &cases {
        let p = WedgeProblem::with_radians(n, phi).unwrap();
        let alpha = coupling_alpha(CouplingPreset::DerivativeContinuity, &p.phi(), None).unwrap();
        let grid = FdGrid::for_problem(&p, alpha, l, DEFAULT_STEP).unwrap();
        let gap = match oracle_validate(&p, l, &grid) {
            Ok(o) => o.gap,
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(gap);
        if gap >= 1e-3 {
            // one Richardson step shows whether the gap is discretization error
            let fine = FdGrid::new(grid.l, grid.h / 2.0, alpha).unwrap();
            let extrapolated = match (oracle_validate(&p, l, &grid), oracle_validate(&p, l, &fine)) {
                (Ok(a), Ok(b)) => ((b.lambda_refined * 4.0 - a.lambda_refined) / 3.0 - l).norm(),
                _ => f64::NAN,
            };
            over.push(format!(
                "N={n} φ={phi} λ={:.6}: gap {gap:.2e} (h/2-extrapolated {extrapolated:.1e})",
                l.re
            ));
        }
    }

    let p = WedgeProblem::new(0, Angle::zero()).unwrap();
    let alpha = coupling_alpha(CouplingPreset::DerivativeContinuity, &p.phi(), None).unwrap();
    let mut ratios = Vec::new();
    for k in 0..5 {
        let exact = (2 * k + 1) as f64;
        let coarse = FdGrid::for_problem(&p, alpha, c(exact, 0.0), 0.01).unwrap();
        let fine = FdGrid::new(coarse.l, 0.005, alpha).unwrap();
        let e1 = (oracle_validate(&p, c(exact, 0.0), &coarse).unwrap().lambda_refined - exact).norm();
        let e2 = (oracle_validate(&p, c(exact, 0.0), &fine).unwrap().lambda_refined - exact).norm();
        ratios.push(e1 / e2);
    }
    let order_ok = ratios.iter().all(|r| (3.5..=4.5).contains(r));
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    verdict(
        over.is_empty() && order_ok,
        format!(
            "{} eigenvalues, worst gap {worst:.2e}, over 1e-3: {over:?}; h-halving ratios [{}]",
            cases.len(),
            ratio_text.join(", ")
        ),
    )
}

fn c8() -> Verdict {
    let t = Instant::now();
    let quad = QuadOptions::default();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (i, (n, phi)) in [0u32, 1, 2]
        .iter()
        .flat_map(|&n| [0.0, 0.3, -0.4].map(move |phi| (n, phi)))
        .enumerate()
    {
        let p = WedgeProblem::with_radians(n, phi).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        for _ in 0..20 {
            let w = TestFunctionSpec::random(&mut rng, 3);
            let v = TestFunctionSpec::random(&mut rng, 3);
            let r = greens_identity_residual(&p, &w, &v, &quad).unwrap();
            worst = worst.max(r.residual);
            count += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    verdict(
        worst < 1e-6 && secs < 30.0,
        format!("{count} pairs over 9 (N, φ), worst residual {worst:.2e}, {secs:.2} s"),
    )
}

fn c9() -> Verdict {
    let p = WedgeProblem::new(0, Angle::zero()).unwrap();
    let alpha = coupling_alpha(CouplingPreset::DerivativeContinuity, &p.phi(), None).unwrap();
    let region = Region::new(0.5, 9.5, -0.5, 0.5).unwrap();
    let base = SolverOptions::default();
    let opts = SolverOptions {
        x_start: Some(common_x_start(&p, &region.probe_points(), &base)),
        ..base
    };
    let f = |z: Complex64| mismatch(&p, &alpha, z, &opts).map(|m| m.d);
    let w = winding_number(&f, &region, 64).unwrap();
    let found = find_zeros(&f, &region, &FindZerosOptions::new((40, 12), 1e-8)).unwrap();
    let inside = found.roots.iter().filter(|r| region.contains(r.lambda)).count();
    verdict(
        w == 5 && inside == 5,
        format!("winding number {w}, refined roots {inside}"),
    )
}

fn main() {
    let mut failed = Vec::new();
    let mut report = |id: &str, name: &str, run: &mut dyn FnMut() -> Verdict| {
        let t = Instant::now();
        let v = run();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("{id} {status} {name} [{:.1} s] {}", t.elapsed().as_secs_f64(), v.detail);
        if !v.pass {
            failed.push(id.to_string());
        }
    };
    let harmonic = harmonic_run();
    let inv = invariance_runs();
    report("C1", "harmonic anchor", &mut || c1(&harmonic));
    report("C2", "classification exactness", &mut c2);
    report("C3", "contour invariance", &mut || c3(&inv));
    report("C4", "PT symmetry", &mut c4);
    report("C5", "Dirichlet containment", &mut c5);
    report("C6", "sector/classification equivalence", &mut c6);
    report("C7", "oracle cross-validation", &mut || c7(&harmonic, &inv));
    report("C8", "Green identity", &mut c8);
    report("C9", "root-count consistency", &mut c9);
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed {}", failed.join(", "));
        std::process::exit(1);
    }
}
