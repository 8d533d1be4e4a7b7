//! Shooting-solver oracles: Pohozaev gates per exponent, the independent
//! double-resolution regression for p = 3, uniqueness, sharp-constant
//! attainment and the scaling transform's power laws.

mod common;

use common::{gaussian_width, grid, gs3, rel_err};

use nlslab_core::functionals::g_coercivity;
use nlslab_core::grid::{gradient_sq_norm, integrate3d};
use nlslab_core::groundstate::{
    rescale, sharp_gn_constant, solve_ground_state, solve_ground_state_on,
    solve_ground_state_scanned,
};

/// Frozen p = 3 constants, pinned by the double-resolution shooting oracle
/// below before the main build (n = 131071 agrees to ~1e−8 relative).
const P3_MASS: f64 = 18.897_251_302_5;
const P3_GRAD_SQ: f64 = 56.691_753_8;
const P3_LP1: f64 = 75.589_005_21;
const P3_PEAK: f64 = 4.337_387_7;

#[test]
fn pohozaev_gates_across_exponents() {
    for p in [7.0 / 3.0, 2.5, 3.0, 3.5, 4.0] {
        let gs = solve_ground_state(p, 1e-12).unwrap();
        let mass_res = (gs.lp1 * (5.0 - p) / (2.0 * (p + 1.0)) - gs.mass).abs() / gs.mass;
        let grad_res =
            (gs.lp1 * 3.0 * (p - 1.0) / (2.0 * (p + 1.0)) - gs.grad_sq).abs() / gs.grad_sq;
        assert!(mass_res <= 1e-6, "p = {p}: mass residual {mass_res:.2e}");
        assert!(grad_res <= 1e-6, "p = {p}: grad residual {grad_res:.2e}");
        // Energy identity E₀ = (3p−7)/(6(p−1))·‖∇Q‖².
        let e_ident = (gs.energy0 - (3.0 * p - 7.0) / (6.0 * (p - 1.0)) * gs.grad_sq).abs();
        assert!(
            e_ident <= 1e-6 * gs.grad_sq,
            "p = {p}: energy identity {e_ident:.2e}"
        );
        if (p - 7.0 / 3.0).abs() < 1e-12 {
            assert!(
                gs.energy0.abs() <= 1e-8 * gs.grad_sq,
                "mass-critical energy {:.2e}",
                gs.energy0
            );
        }
        // definitional identity holds to round-off
        assert!((gs.energy0 - (gs.grad_sq / 2.0 - gs.lp1 / (p + 1.0))).abs() < 1e-12 * gs.grad_sq);
    }
}

/// Solver-regression constants for the remaining exponents (pinned from
/// the converged default-grid solves; the p = 3 values are additionally
/// cross-checked against the double-resolution oracle below).
#[test]
fn regression_constants_other_exponents() {
    for (p, mass, grad_sq) in [
        (7.0 / 3.0, 63.783_115_78, 95.674_672_0),
        (2.5, 46.163_651_28, 83.094_570_85),
        (3.5, 8.021_837_80, 40.109_190_0),
        (4.0, 3.194_196_70, 28.747_775_4),
    ] {
        let gs = solve_ground_state(p, 1e-12).unwrap();
        assert!(rel_err(gs.mass, mass) <= 1e-7, "p = {p}: mass {}", gs.mass);
        assert!(
            rel_err(gs.grad_sq, grad_sq) <= 1e-6,
            "p = {p}: grad {}",
            gs.grad_sq
        );
    }
}

#[test]
fn p3_ratios_from_pohozaev() {
    let gs = gs3();
    // ‖Q‖₄⁴ / ‖Q‖₂² = 2(p+1)/(5−p) = 4 at p = 3.
    assert!(rel_err(gs.lp1 / gs.mass, 4.0) <= 1e-6);
    // E₀/‖∇Q‖² = (3p−7)/(6(p−1)) = 1/12 · 2 = 1/6 at p = 3.
    assert!(rel_err(gs.energy0 / gs.grad_sq, 1.0 / 6.0) <= 1e-6);
}

#[test]
fn p3_regression_against_double_resolution_oracle() {
    // Independent shooting oracle at double resolution.
    let fine = grid(32.0, 131_071);
    let oracle = solve_ground_state_on(&fine, 3.0, 1e-12).unwrap();
    let gs = gs3();
    assert!(rel_err(gs.mass, oracle.mass) <= 1e-8, "mass vs oracle");
    assert!(
        rel_err(gs.grad_sq, oracle.grad_sq) <= 1e-7,
        "grad vs oracle"
    );
    assert!(rel_err(gs.lp1, oracle.lp1) <= 1e-8, "lp1 vs oracle");
    // Frozen constants.
    assert!(rel_err(gs.mass, P3_MASS) <= 1e-8);
    assert!(rel_err(gs.grad_sq, P3_GRAD_SQ) <= 1e-7);
    assert!(rel_err(gs.lp1, P3_LP1) <= 1e-8);
    assert!(rel_err(gs.peak(), P3_PEAK) <= 1e-6);
}

#[test]
fn uniqueness_across_scan_starts() {
    let g = grid(32.0, 32_767);
    let a = solve_ground_state_scanned(&g, 3.0, 1e-12, 1.0).unwrap();
    let b = solve_ground_state_scanned(&g, 3.0, 1e-12, 2.0).unwrap();
    let sup = a
        .profile
        .values()
        .iter()
        .zip(b.profile.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    assert!(sup <= 1e-8, "profiles differ by {sup:.3e} in sup norm");
}

#[test]
fn bad_exponent_is_rejected_with_bracket_error() {
    // p = 5 (energy-critical) is outside the admitted range.
    assert!(solve_ground_state(5.0, 1e-10).is_err());
}

#[test]
fn gn_attainment_at_q_and_strictness_elsewhere() {
    let gs = gs3();
    let cgn = sharp_gn_constant(gs).unwrap();
    assert!(rel_err(cgn, gs.cgn) <= 1e-12);
    // Equality at Q within 1e−6 is what sharp_gn_constant certifies; a
    // Gaussian must satisfy the inequality strictly with ≥ 1% margin.
    let g = grid(12.0, 8191);
    let f = gaussian_width(&g, 1.0);
    let p = 3.0;
    let mass = integrate3d(&g, &f.abs_sq()).unwrap();
    let grad = gradient_sq_norm(&f).unwrap();
    let lp1_samples: Vec<f64> = f.abs_sq().iter().map(|a| a * a).collect();
    let lp1 = integrate3d(&g, &lp1_samples).unwrap();
    let bound = cgn * mass.powf((5.0 - p) / 4.0) * grad.powf(3.0 * (p - 1.0) / 4.0);
    assert!(lp1 <= bound * 0.99, "gaussian GN quotient {}", lp1 / bound);
}

#[test]
fn g_function_landmarks_all_exponents() {
    for p in [2.5, 3.0, 3.5, 4.0] {
        assert_eq!(g_coercivity(0.0, p), 0.0);
        assert!((g_coercivity(1.0, p) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn rescale_power_laws() {
    let g = grid(32.0, 32_767);
    let u = gaussian_width(&g, 2.0);
    let p = 3.0;
    let mass0 = integrate3d(&g, &u.abs_sq()).unwrap();
    let grad0 = gradient_sq_norm(&u).unwrap();
    for lambda in [0.5, 2.0] {
        let v = rescale(&u, lambda, p).unwrap();
        let mass = integrate3d(&g, &v.abs_sq()).unwrap();
        let grad = gradient_sq_norm(&v).unwrap();
        let mass_law = lambda.powf(4.0 / (p - 1.0) - 3.0) * mass0;
        let grad_law = lambda.powf(4.0 / (p - 1.0) - 1.0) * grad0;
        assert!(
            rel_err(mass, mass_law) <= 1e-6,
            "λ = {lambda}: mass law off by {:.2e}",
            rel_err(mass, mass_law)
        );
        assert!(
            rel_err(grad, grad_law) <= 1e-6,
            "λ = {lambda}: gradient law off by {:.2e}",
            rel_err(grad, grad_law)
        );
    }
}

fn gn_quotient(u: &nlslab_core::grid::RadialField, p: f64) -> f64 {
    let g = u.grid();
    let mass = integrate3d(g, &u.abs_sq()).unwrap();
    let grad = gradient_sq_norm(u).unwrap();
    let lp1_samples: Vec<f64> = u.abs_sq().iter().map(|a| a.powf((p + 1.0) / 2.0)).collect();
    let lp1 = integrate3d(g, &lp1_samples).unwrap();
    lp1 / (mass.powf((5.0 - p) / 4.0) * grad.powf(3.0 * (p - 1.0) / 4.0))
}

#[test]
fn gn_quotient_scale_invariant() {
    let gs = gs3();
    let p = 3.0;
    let fine = gs.profile.grid();
    let q2 = rescale(&gs.profile, 2.0, p).unwrap();
    // λ = 2 lands on exact nodes: the rescaled field on spacing h carries
    // the same samples as Q on spacing 2h, so evaluating the quotient on
    // the matching doubled grid removes the estimators' resolution
    // response and leaves pure scale bookkeeping.
    let doubled = grid(2.0 * fine.r_max(), fine.n());
    let q_doubled = nlslab_core::grid::RadialField::new(
        doubled.clone(),
        doubled
            .radii()
            .map(|r| {
                if r < fine.r_max() {
                    let j = (r / fine.h()).round() as usize - 1;
                    gs.profile.values()[j]
                } else {
                    num_complex::Complex64::new(0.0, 0.0)
                }
            })
            .collect(),
    )
    .unwrap();
    let drift = rel_err(gn_quotient(&q2, p), gn_quotient(&q_doubled, p));
    assert!(
        drift <= 1e-8,
        "matched-resolution quotient drift {drift:.2e}"
    );
    // Against the ground state's own constant the drift is the
    // finite-difference gradient's response to the doubled frequency
    // content, still small but not round-off.
    let direct = rel_err(gn_quotient(&q2, p), gs.cgn);
    assert!(direct <= 1e-7, "direct quotient drift {direct:.2e}");
}

#[test]
fn rescale_identity() {
    let gs = gs3();
    let v = rescale(&gs.profile, 1.0, 3.0).unwrap();
    let sup = v
        .values()
        .iter()
        .zip(gs.profile.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(sup < 1e-13);
}

#[test]
fn decimation_requires_aligned_grids() {
    let gs = gs3();
    // different truncation radius
    assert!(gs.profile_on(&grid(16.0, 4095)).is_err());
    // node count that is not a divisor pattern of the fine grid
    assert!(gs.profile_on(&grid(32.0, 4000)).is_err());
    // aligned case works and matches the fine profile on shared nodes
    let coarse = grid(32.0, 4095);
    let q = gs.profile_on(&coarse).unwrap();
    let fine = gs.profile.grid();
    let stride = (fine.n() + 1) / (coarse.n() + 1);
    for j in (0..coarse.n()).step_by(512) {
        assert_eq!(q.values()[j], gs.profile.values()[(j + 1) * stride - 1]);
    }
}
