//! Properties of the shooting solver, the mismatch function and the spectral
//! pipeline. Case counts are kept small: each case integrates ODEs.

use proptest::prelude::*;
use ptwedge::fd::{oracle_validate, FdGrid, DEFAULT_STEP};
use ptwedge::geometry::{contour_ends_share_wedge, stokes_geometry, wedge_interior_grid, StokesPosition};
use ptwedge::halfline::{common_x_start, integrate_inward, integrate_inward_with, normalize_pair, HalfLineProblem, SolverOptions};
use ptwedge::io::{execute, Command, Output, RunConfig};
use ptwedge::matching::{coupling_alpha, determinant, mismatch, mismatch_from};
use ptwedge::spectrum::{compute_spectrum, SpectrumOptions};
use ptwedge::verify::{decay_profile_check, holomorphy_check};
use ptwedge::{Angle, Complex64, CouplingPreset, Region, Side, WedgeProblem};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `(N, φ)` with φ drawn from the wedge-interior grid of `N`.
fn interior_problem(max_n: u32) -> impl Strategy<Value = WedgeProblem> {
    (0..=max_n, 0usize..9).prop_map(|(n, i)| {
        let phis = wedge_interior_grid(n, 9, 0.05);
        WedgeProblem::with_radians(n, phis[i]).unwrap()
    })
}

fn lambda() -> impl Strategy<Value = Complex64> {
    (-2.0f64..8.0, -2.0f64..2.0).prop_map(|(a, b)| c(a, b))
}

fn pinned(problem: &WedgeProblem, around: &[Complex64]) -> SolverOptions {
    let base = SolverOptions::default();
    SolverOptions {
        x_start: Some(common_x_start(problem, around, &base)),
        ..base
    }
}

fn adjacent_wedges(problem: &WedgeProblem) -> bool {
    let g = stokes_geometry(problem.n(), Some(&problem.phi()));
    let count = problem.n() + 4;
    match (g.positive_ray, g.negative_ray) {
        (Some(StokesPosition::InSector(a)), Some(StokesPosition::InSector(b))) => {
            (a + 1) % count == b || (b + 1) % count == a
        }
        _ => false,
    }
}

fn stencil(l: Complex64, h: f64) -> Vec<Complex64> {
    vec![l + h, l - h, l + c(0.0, h), l - c(0.0, h)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn seed_perturbation_does_not_reach_the_origin(problem in interior_problem(3), l in lambda(), side in prop::bool::ANY) {
        let side = if side { Side::Plus } else { Side::Minus };
        let hp = HalfLineProblem::new(&problem, side);
        let opts = SolverOptions::default();
        let a = integrate_inward(&hp, l, &opts).unwrap();
        let b = integrate_inward_with(&hp, l, &opts, Some(c(1e-3, 0.0)), None).unwrap();
        let qa = a.dv0 / a.v0;
        let qb = b.dv0 / b.v0;
        prop_assume!(a.v0.norm() > 1e-6);
        prop_assert!((qa - qb).norm() <= 1e-6 * qa.norm().max(1.0), "{} vs {}", qa, qb);
    }

    #[test]
    fn even_potentials_reflect(n in prop::sample::select(vec![0u32, 4, 8]), l in -3.0f64..10.0) {
        let problem = WedgeProblem::with_radians(n, 0.0).unwrap();
        let opts = SolverOptions::default();
        let plus = integrate_inward(&HalfLineProblem::new(&problem, Side::Plus), c(l, 0.0), &opts).unwrap();
        let minus = integrate_inward(&HalfLineProblem::new(&problem, Side::Minus), c(l, 0.0), &opts).unwrap();
        prop_assert!((plus.v0 - minus.v0).norm() < 1e-8);
        prop_assert!((plus.dv0 + minus.dv0).norm() < 1e-8);
    }

    #[test]
    fn boundary_data_is_holomorphic(problem in interior_problem(3), l in lambda(), side in prop::bool::ANY) {
        let side = if side { Side::Plus } else { Side::Minus };
        let h = 1e-4;
        let opts = pinned(&problem, &stencil(l, h));
        let hp = HalfLineProblem::new(&problem, side);
        let pair = |z: Complex64| integrate_inward(&hp, z, &opts).unwrap().holomorphic_pair();
        let rv = holomorphy_check(|z| pair(z).0, l, h).unwrap();
        let rd = holomorphy_check(|z| pair(z).1, l, h).unwrap();
        prop_assert!(rv < 1e-4 && rd < 1e-4, "{} {}", rv, rd);
    }

    #[test]
    fn mismatch_is_holomorphic(problem in interior_problem(3), l in lambda(), preset in prop::bool::ANY) {
        let preset = if preset { CouplingPreset::DerivativeContinuity } else { CouplingPreset::SelfAdjoint };
        // with one shared wedge the continuity mismatch is identically zero;
        // across adjacent wedges it has no zeros and is constant
        let continuity = preset == CouplingPreset::DerivativeContinuity;
        prop_assume!(!(continuity && (contour_ends_share_wedge(&problem) || adjacent_wedges(&problem))));
        let alpha = coupling_alpha(preset, &problem.phi(), None).unwrap();
        let h = 1e-4;
        let opts = pinned(&problem, &stencil(l, h));
        let d = |z: Complex64| mismatch(&problem, &alpha, z, &opts).unwrap().d_holomorphic;
        let ratio = holomorphy_check(d, l, h).unwrap();
        prop_assert!(ratio < 1e-4, "{}", ratio);
    }

    #[test]
    fn normalized_mismatch_ignores_raw_scale(
        problem in interior_problem(3),
        l in lambda(),
        (sr, st) in (1e-3f64..1e3, -3.0f64..3.0),
    ) {
        let alpha = coupling_alpha(CouplingPreset::DerivativeContinuity, &problem.phi(), None).unwrap();
        let m = mismatch(&problem, &alpha, l, &SolverOptions::default()).unwrap();
        let scale = Complex64::from_polar(sr, st);
        let renorm = |(v, dv): (Complex64, Complex64), k: Complex64| {
            let (a, b, _) = normalize_pair(v * k, dv * k).unwrap();
            (a, b)
        };
        let raw_plus = (m.plus.v0, m.plus.dv0);
        let raw_minus = (m.minus.v0, m.minus.dv0);
        let base = determinant(renorm(raw_plus, c(1.0, 0.0)), renorm(raw_minus, c(1.0, 0.0)), alpha.alpha);
        let complex = determinant(renorm(raw_plus, scale), renorm(raw_minus, c(1.0, 0.0)), alpha.alpha);
        let positive = determinant(renorm(raw_plus, c(sr, 0.0)), renorm(raw_minus, c(1.0 / sr, 0.0)), alpha.alpha);
        prop_assert!((positive - base).norm() < 1e-12);
        prop_assert!((complex.norm() - base.norm()).abs() < 1e-12);
        prop_assert!((base - m.d).norm() < 1e-12);
    }

    #[test]
    fn determinant_factors_through_quotients(problem in interior_problem(3), l in lambda()) {
        let alpha = coupling_alpha(CouplingPreset::SelfAdjoint, &problem.phi(), None).unwrap();
        let m = mismatch(&problem, &alpha, l, &SolverOptions::default()).unwrap();
        if let Some((qp, qm)) = m.quotients {
            let product = m.plus.v0 * m.minus.v0 * (qp - alpha.alpha * qm);
            prop_assert!((product - m.d).norm() < 1e-12);
        } else {
            prop_assert!(m.plus.v0.norm() <= 1e-6 || m.minus.v0.norm() <= 1e-6);
        }
    }

    #[test]
    fn boundary_data_is_recomputable(problem in interior_problem(2), l in lambda()) {
        let alpha = coupling_alpha(CouplingPreset::DerivativeContinuity, &problem.phi(), None).unwrap();
        let opts = SolverOptions::default();
        let m = mismatch(&problem, &alpha, l, &opts).unwrap();
        let again = mismatch_from(&m.plus, &m.minus, alpha.alpha);
        prop_assert_eq!(m.d, again.d);
    }
}

#[test]
fn quotients_agree_exactly_at_eigenvalues() {
    let problem = WedgeProblem::with_radians(1, 0.1).unwrap();
    let alpha = coupling_alpha(CouplingPreset::DerivativeContinuity, &problem.phi(), None).unwrap();
    let region = Region::new(0.0, 10.0, -1.0, 1.0).unwrap();
    let r = compute_spectrum(&problem, &alpha, &region, &SpectrumOptions::default()).unwrap();
    assert_eq!(r.eigenvalues.len(), 3);
    for l in r.lambdas() {
        let m = mismatch(&problem, &alpha, l, &r.solver_opts).unwrap();
        let (qp, qm) = m.quotients.unwrap();
        assert!((qp - alpha.alpha * qm).norm() < 1e-6 * qp.norm().max(1.0));
        // a unit step off the eigenvalue breaks the match
        let off = mismatch(&problem, &alpha, l + 0.5, &r.solver_opts).unwrap();
        let (qp, qm) = off.quotients.unwrap();
        assert!((qp - alpha.alpha * qm).norm() > 1e-3);
    }
}

#[test]
fn conjugate_pairs_with_self_adjoint_coupling() {
    let problem = WedgeProblem::with_radians(1, 0.1).unwrap();
    let alpha = coupling_alpha(CouplingPreset::SelfAdjoint, &problem.phi(), None).unwrap();
    let region = Region::new(0.0, 10.0, -3.0, 3.0).unwrap();
    let r = compute_spectrum(&problem, &alpha, &region, &SpectrumOptions::default()).unwrap();
    let lambdas = r.lambdas();
    assert!(lambdas.iter().any(|l| l.im.abs() > 1.0), "{lambdas:?}");
    for l in &lambdas {
        assert!(lambdas.iter().any(|m| (m - l.conj()).norm() < 1e-6));
    }
    assert!(r.reports.pt_symmetry.unwrap().symmetric);
}

#[test]
fn shared_wedge_continuity_is_refused() {
    let problem = WedgeProblem::with_radians(0, -1.3).unwrap();
    let region = Region::new(0.0, 10.0, -1.0, 1.0).unwrap();
    let continuity = coupling_alpha(CouplingPreset::DerivativeContinuity, &problem.phi(), None).unwrap();
    assert_eq!(
        compute_spectrum(&problem, &continuity, &region, &SpectrumOptions::default()).unwrap_err(),
        ptwedge::spectrum::SpectrumError::SharedWedge
    );
}

#[test]
fn decay_profiles_across_interior_angles() {
    let opts = SolverOptions::default();
    let mut failures = Vec::new();
    for n in 0..=4u32 {
        for phi in wedge_interior_grid(n, 9, 0.05) {
            let problem = WedgeProblem::with_radians(n, phi).unwrap();
            for l in [c(0.0, 0.0), c(1.0, 1.0)] {
                let r = decay_profile_check(&problem, l, &opts);
                if !r.passed {
                    failures.push((n, phi, l, r.failures));
                }
            }
        }
    }
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn mismatch_holomorphic_on_lambda_grid() {
    let problem = WedgeProblem::with_radians(2, 0.2).unwrap();
    let alpha = coupling_alpha(CouplingPreset::DerivativeContinuity, &problem.phi(), None).unwrap();
    let h = 1e-4;
    let grid: Vec<Complex64> = (0..5)
        .flat_map(|i| (0..5).map(move |j| c(0.3 + 2.1 * i as f64, -1.6 + 0.8 * j as f64)))
        .collect();
    let opts = pinned(&problem, &grid.iter().flat_map(|&l| stencil(l, h)).collect::<Vec<_>>());
    for l in grid {
        let d = |z: Complex64| mismatch(&problem, &alpha, z, &opts).unwrap().d_holomorphic;
        let ratio = holomorphy_check(d, l, h).unwrap();
        assert!(ratio < 1e-4, "λ = {l}: {ratio}");
    }
}

#[test]
fn spectra_are_deterministic_across_worker_counts() {
    let run = |workers| {
        let mut c = RunConfig::new(Command::Spectrum, 1, Angle::from_radians(0.2).unwrap());
        c.coupling.preset = CouplingPreset::SelfAdjoint;
        c.region = Region::new(0.0, 8.0, -2.5, 2.5).unwrap();
        c.workers = Some(workers);
        match execute(&c).unwrap() {
            Output::Spectrum(mut d) => {
                d.config.workers = None;
                ptwedge::io::to_json(&d)
            }
            _ => unreachable!(),
        }
    };
    let a = run(1);
    assert_eq!(a, run(1));
    assert_eq!(a, run(4));
}

#[test]
fn oracle_matches_pipeline_within_cross_method_bound() {
    // the quartic's third level (11.80) is ill-conditioned on these
    // contours: its FD error is O(h²) with a constant far above 10(1+|λ|²)
    for (n, phi, re_max) in [(1u32, 0.2, 12.0), (2, -0.2, 10.0), (0, 0.3, 12.0)] {
        let problem = WedgeProblem::with_radians(n, phi).unwrap();
        let alpha = coupling_alpha(CouplingPreset::DerivativeContinuity, &problem.phi(), None).unwrap();
        let region = Region::new(0.0, re_max, -1.0, 1.0).unwrap();
        let r = compute_spectrum(&problem, &alpha, &region, &SpectrumOptions::default()).unwrap();
        assert!(!r.eigenvalues.is_empty());
        for l in r.lambdas() {
            let grid = FdGrid::for_problem(&problem, alpha, l, DEFAULT_STEP).unwrap();
            let out = oracle_validate(&problem, l, &grid).unwrap();
            let bound = 1e-3f64.max(10.0 * grid.h * grid.h * (1.0 + l.norm_sqr()));
            assert!(out.gap < bound, "N={n} φ={phi} λ={l}: gap {} bound {bound}", out.gap);
        }
    }
}

#[test]
fn harmonic_fd_is_second_order() {
    let problem = WedgeProblem::new(0, Angle::zero()).unwrap();
    let alpha = coupling_alpha(CouplingPreset::DerivativeContinuity, &problem.phi(), None).unwrap();
    for exact in [1.0, 3.0, 5.0] {
        let coarse = FdGrid::for_problem(&problem, alpha, c(exact, 0.0), 0.01).unwrap();
        let fine = FdGrid::new(coarse.l, 0.005, alpha).unwrap();
        let e1 = (oracle_validate(&problem, c(exact, 0.0), &coarse).unwrap().lambda_refined - exact).norm();
        let e2 = (oracle_validate(&problem, c(exact, 0.0), &fine).unwrap().lambda_refined - exact).norm();
        assert!((3.5..=4.5).contains(&(e1 / e2)), "λ = {exact}: ratio {}", e1 / e2);
    }
}
