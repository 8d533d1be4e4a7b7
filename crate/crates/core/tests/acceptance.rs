//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with the measured numbers. Criteria are serialized through a
//! mutex so the per-criterion runtime budgets are measured honestly.

mod common;

use std::f64::consts::PI;
use std::sync::{Mutex, MutexGuard};
use std::time::Instant;

use common::{gaussian_width, grid, gs3, rel_err};
use num_complex::Complex64;

use nlslab_core::classifier::{classify, Verdict};
use nlslab_core::evolution::{evolve, scattering_diagnostic, EvolveConfig, Stepper, Terminal};
use nlslab_core::functionals::{hardy_check, snapshot, threshold_products};
use nlslab_core::grid::{integrate3d, RadialField, RadialGrid};
use nlslab_core::groundstate::{solve_ground_state, solve_ground_state_on};
use nlslab_core::potentials::{analyze, inverse_square_floor_check, kato_norm, Potential};
use nlslab_core::virial::{virial_consistency, virial_eval, VirialSeries};
use nlslab_core::weights::{Weight, WeightKind};

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(criterion: &str, pass: bool, details: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {criterion}: {details}");
}

#[test]
fn criterion_01_ground_state_validity() {
    let _guard = serial();
    let t0 = Instant::now();
    let mut pass = true;
    let mut lines = Vec::new();
    for p in [7.0 / 3.0, 2.5, 3.0, 3.5, 4.0] {
        let gs = solve_ground_state(p, 1e-12).expect("solve");
        let mass_res = (gs.lp1 * (5.0 - p) / (2.0 * (p + 1.0)) - gs.mass).abs() / gs.mass;
        let grad_res =
            (gs.lp1 * 3.0 * (p - 1.0) / (2.0 * (p + 1.0)) - gs.grad_sq).abs() / gs.grad_sq;
        let e_res =
            (gs.energy0 - (3.0 * p - 7.0) / (6.0 * (p - 1.0)) * gs.grad_sq).abs() / gs.grad_sq;
        let ok = mass_res <= 1e-6 && grad_res <= 1e-6 && e_res <= 1e-6;
        let mc_ok = if (p - 7.0 / 3.0).abs() < 1e-12 {
            gs.energy0.abs() <= 1e-8 * gs.grad_sq
        } else {
            true
        };
        pass &= ok && mc_ok;
        lines.push(format!(
            "p={p:.4}: pohozaev {mass_res:.1e}/{grad_res:.1e}, energy {e_res:.1e}"
        ));
    }
    let dt = t0.elapsed();
    let in_budget = dt.as_secs_f64() <= 10.0;
    pass &= in_budget;
    report(
        "1 (ground-state validity)",
        pass,
        &format!(
            "{}; runtime {dt:.2?} (≤ 10 s: {in_budget})",
            lines.join("; ")
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_02_gn_sharpness() {
    let _guard = serial();
    let gs = gs3();
    let t0 = Instant::now();
    let p = 3.0;
    // equality at Q within 1e−6 (certified by the attainment cross-check)
    let eq_ok = nlslab_core::groundstate::sharp_gn_constant(gs).is_ok();
    // 20 non-optimizer fields: strict with ≥ 1% margin
    let g = grid(24.0, 4095);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for sigma in [0.5, 0.8, 1.0, 1.5, 2.0, 3.0] {
        for amp in [0.5, 1.0, 2.0] {
            let u = gaussian_width(&g, sigma).scaled(amp);
            let s = snapshot(&u, &Potential::Zero, p, 0.0).unwrap();
            let bound = gs.cgn * s.mass.powf((5.0 - p) / 4.0) * s.grad_sq.powf(0.75 * (p - 1.0));
            worst = worst.max(s.lp1 / bound);
            count += 1;
        }
    }
    for k in [2.0_f64, 3.0, 4.0] {
        let u = RadialField::from_fn(g.clone(), |r| {
            Complex64::new(
                if r < k {
                    (1.0 - r * r / (k * k)).powi(2)
                } else {
                    0.0
                },
                0.0,
            )
        });
        let s = snapshot(&u, &Potential::Zero, p, 0.0).unwrap();
        let bound = gs.cgn * s.mass.powf((5.0 - p) / 4.0) * s.grad_sq.powf(0.75 * (p - 1.0));
        worst = worst.max(s.lp1 / bound);
        count += 1;
    }
    for a in [1.0_f64, 2.0] {
        let u = RadialField::from_fn(g.clone(), |r| Complex64::new(r * (-a * r).exp(), 0.0));
        let s = snapshot(&u, &Potential::Zero, p, 0.0).unwrap();
        let bound = gs.cgn * s.mass.powf((5.0 - p) / 4.0) * s.grad_sq.powf(0.75 * (p - 1.0));
        worst = worst.max(s.lp1 / bound);
        count += 1;
    }
    let dt = t0.elapsed();
    let pass = eq_ok && count >= 20 && worst <= 0.99 && dt.as_secs_f64() <= 5.0;
    report(
        "2 (GN sharpness)",
        pass,
        &format!(
            "equality at Q: {eq_ok}; {count} corpus fields, worst quotient {worst:.4} (≤ 0.99); runtime {dt:.2?}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_03_threshold_algebra() {
    let _guard = serial();
    let gs = gs3();
    let mut pass = true;
    let mut worst_me: f64 = 0.0;
    let mut worst_grad: f64 = 0.0;
    for lambda in [0.8_f64, 0.9, 1.0, 1.1, 1.2] {
        let u = gs.profile.scaled(lambda);
        let s = snapshot(&u, &Potential::Zero, 3.0, 0.0).unwrap();
        let r = threshold_products(&s, gs);
        let me = r.me.value().expect("positive energy on this λ range");
        let me_err = (me - (3.0 * lambda.powi(4) - 2.0 * lambda.powi(6))).abs();
        let grad_err = (r.grad - lambda * lambda).abs();
        worst_me = worst_me.max(me_err);
        worst_grad = worst_grad.max(grad_err);
        pass &= me_err <= 1e-4 && grad_err <= 1e-6;
    }
    report(
        "3 (threshold algebra)",
        pass,
        &format!("worst |me − (3λ⁴−2λ⁶)| = {worst_me:.2e} (≤ 1e−4), worst |grad − λ²| = {worst_grad:.2e} (≤ 1e−6)"),
    );
    assert!(pass);
}

#[test]
fn criterion_04_conservation() {
    let _guard = serial();
    let t0 = Instant::now();
    let gs = gs3();
    let g = grid(RadialGrid::DEFAULT_R_MAX, RadialGrid::DEFAULT_N);
    let q = gs.profile_on(&g).unwrap();
    let cfg = EvolveConfig::new(1.0);
    let steps = (1.0 / cfg.dt0).round();
    let mass_budget = 1e-10 * (steps / 1e3);
    let mut pass = true;
    let mut lines = Vec::new();
    for (name, u0) in [("Q", q.clone()), ("0.9Q", q.scaled(0.9))] {
        let trace = evolve(&u0, &Potential::Zero, 3.0, &cfg).unwrap();
        let ok = trace.terminal == Terminal::CompletedHorizon
            && trace.mass_drift <= mass_budget
            && trace.energy_drift <= 1e-6;
        pass &= ok;
        lines.push(format!(
            "{name}: mass drift {:.2e} (≤ {mass_budget:.1e}), energy drift {:.2e} (≤ 1e−6)",
            trace.mass_drift, trace.energy_drift
        ));
    }
    let dt = t0.elapsed();
    pass &= dt.as_secs_f64() <= 60.0;
    report(
        "4 (conservation)",
        pass,
        &format!("{}; runtime {dt:.2?} (≤ 60 s)", lines.join("; ")),
    );
    assert!(pass);
}

#[test]
fn criterion_05_linear_oracle() {
    let _guard = serial();
    let g = grid(32.0, 4095);
    let u0 = gaussian_width(&g, 1.0);
    let mut stepper = Stepper::new(g.clone(), &Potential::Zero, 3.0);
    let mut u = u0.clone();
    for _ in 0..1000 {
        u = stepper.free_step(&u, 1e-3).unwrap();
    }
    let exact = RadialField::from_fn(g.clone(), |r| {
        let denom = Complex64::new(1.0, 4.0);
        denom.powf(-1.5) * (-Complex64::new(r * r, 0.0) / denom).exp()
    });
    let diff: Vec<f64> = u
        .values()
        .iter()
        .zip(exact.values())
        .map(|(a, b)| (a - b).norm_sqr())
        .collect();
    let err =
        integrate3d(&g, &diff).unwrap().sqrt() / integrate3d(&g, &u0.abs_sq()).unwrap().sqrt();
    let pass = err <= 1e-4;
    report(
        "5 (linear oracle)",
        pass,
        &format!("free Gaussian L² error at t = 1: {err:.2e} (≤ 1e−4)"),
    );
    assert!(pass);
}

#[test]
fn criterion_06_virial_identities() {
    let _guard = serial();
    let gs = gs3();
    // (a) p = 7/3 unweighted I″ = 16 E₀[u] as a quadrature identity.
    let g = grid(24.0, 2047);
    let w = Weight::new(WeightKind::Unweighted, 1.0, &g).unwrap();
    let mut worst_a: f64 = 0.0;
    for u in [
        gaussian_width(&g, 1.0),
        gaussian_width(&g, 2.0).scaled(1.5),
        RadialField::from_fn(g.clone(), |r| {
            Complex64::new((-r * r / 2.0).exp(), 0.25 * (-r * r).exp())
        }),
    ] {
        let s = snapshot(&u, &Potential::Zero, 7.0 / 3.0, 0.0).unwrap();
        let v = virial_eval(&u, &Potential::Zero, 7.0 / 3.0, &w).unwrap();
        worst_a = worst_a.max((v.i2 - 16.0 * s.energy_v).abs() / v.i2_scale.max(1e-300));
    }
    let pass_a = worst_a <= 1e-10;

    // (b) 1.05 Q: finite-difference dI′/dt matches I″ within 2% until the
    // detection cascade (gradient beyond 10× initial is the unresolved
    // collapse and is excluded).
    let g_evo = grid(32.0, 4095);
    let q = gs.profile_on(&g_evo).unwrap();
    let mut cfg = EvolveConfig::new(10.0);
    cfg.dt0 = 2.5e-4;
    cfg.store_every = 5;
    let trace = evolve(&q.scaled(1.05), &Potential::Zero, 3.0, &cfg).unwrap();
    let blew_up = matches!(trace.terminal, Terminal::BlowUpDetected { .. });
    let g0 = trace.snapshots[0].grad_sq;
    let keep = trace
        .snapshots
        .iter()
        .position(|s| s.grad_sq > 10.0 * g0)
        .unwrap_or(trace.snapshots.len());
    let series = truncate_series(&trace.virial, keep);
    let resid_b = virial_consistency(&series).unwrap();
    let pass_b = blew_up && resid_b.second <= 0.02;

    // (c) soliton: I′ and I″ vanish within 2% of the term scale.
    let mut cfg = EvolveConfig::new(0.5);
    cfg.store_every = 5;
    let trace = evolve(&q, &Potential::Zero, 3.0, &cfg).unwrap();
    let s = &trace.virial;
    let i1_scale = s.i1_scale.iter().fold(0.0_f64, |a, &b| a.max(b));
    let i2_scale = s.i2_scale.iter().fold(0.0_f64, |a, &b| a.max(b));
    let worst_i1 = s.i1.iter().fold(0.0_f64, |a, &b| a.max(b.abs())) / i1_scale;
    let worst_i2 = s.i2.iter().fold(0.0_f64, |a, &b| a.max(b.abs())) / i2_scale;
    let pass_c = worst_i1 <= 0.02 && worst_i2 <= 0.02;

    let pass = pass_a && pass_b && pass_c;
    report(
        "6 (virial identities)",
        pass,
        &format!(
            "(a) mass-critical residual {worst_a:.2e} (≤ 1e−10); (b) dI′/dt vs I″ {:.2e} (≤ 0.02, resolved regime); (c) soliton I′ {worst_i1:.2e}, I″ {worst_i2:.2e} (≤ 0.02)",
            resid_b.second
        ),
    );
    assert!(pass);
}

fn truncate_series(s: &VirialSeries, keep: usize) -> VirialSeries {
    let mut t = s.clone();
    t.times.truncate(keep);
    t.i.truncate(keep);
    t.i1.truncate(keep);
    t.i2.truncate(keep);
    t.i1_scale.truncate(keep);
    t.i2_scale.truncate(keep);
    t.i2_unweighted.truncate(keep);
    t
}

#[test]
fn criterion_07_dichotomy_realization() {
    let _guard = serial();
    let t0 = Instant::now();
    let gs = gs3();

    // 0.9 Q to t = 20 on a wide grid (r_max = 64 keeps wall reflections
    // away from the R = 10 probe ball).
    let g_wide = grid(64.0, 8191);
    let gs_wide = solve_ground_state_on(&grid(64.0, 131_071), 3.0, 1e-12).unwrap();
    let q_wide = gs_wide.profile_on(&g_wide).unwrap();
    let mut cfg = EvolveConfig::new(20.0);
    // dichotomy, not conservation, is under test here: the coarser step
    // keeps the run inside the budget (criterion 4 pins the drift rates)
    cfg.dt0 = 5e-4;
    cfg.store_every = 20;
    cfg.r_probe = 10.0;
    let trace = evolve(&q_wide.scaled(0.9), &Potential::Zero, 3.0, &cfg).unwrap();
    let completed = trace.terminal == Terminal::CompletedHorizon;
    let sup_grad_ratio = trace
        .snapshots
        .iter()
        .map(|s| threshold_products(s, &gs_wide).grad)
        .fold(0.0, f64::max);
    let mass0 = trace.snapshots[0].mass;
    let diag = scattering_diagnostic(&trace, 10.0, (0.1 * mass0).sqrt()).unwrap();
    let pass_down = completed && sup_grad_ratio < 1.0 && diag.pass;

    // 1.1 Q: detection before t = 10 with the coercive margins at every
    // stored snapshot up to the terminal (aliased) one.
    let g_evo = grid(32.0, 4095);
    let q = gs.profile_on(&g_evo).unwrap();
    let mut cfg = EvolveConfig::new(10.0);
    cfg.store_every = 20;
    let trace = evolve(&q.scaled(1.1), &Potential::Zero, 3.0, &cfg).unwrap();
    let t_star = match trace.terminal {
        Terminal::BlowUpDetected { t } => t,
        _ => f64::INFINITY,
    };
    let mut h_ok = true;
    let mut k_ok = true;
    for s in &trace.snapshots[..trace.snapshots.len() - 1] {
        let r = threshold_products(s, gs);
        h_ok &= r.h > 1.0;
        k_ok &= s.k_functional < 0.0;
    }
    let pass_up = t_star < 10.0 && h_ok && k_ok;

    let dt = t0.elapsed();
    let pass = pass_down && pass_up && dt.as_secs_f64() <= 300.0;
    report(
        "7 (dichotomy realization)",
        pass,
        &format!(
            "0.9Q: completed {completed}, sup grad_ratio {sup_grad_ratio:.4} (< 1), evacuation {}; 1.1Q: detected at t* = {t_star:.3}, h_ratio > 1 {h_ok}, k < 0 {k_ok} (snapshots before terminal); runtime {dt:.2?} (≤ 5 min)",
            diag.pass
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_08_potential_analysis() {
    let _guard = serial();
    let g = grid(32.0, 4095);
    let ball = Potential::Table {
        r: vec![0.0, 1.0],
        v: vec![1.0, 1.0],
    };
    let k_ball = kato_norm(&g, &ball).unwrap();
    let ball_ok = rel_err(k_ball, 2.0 * PI) <= 1e-6;

    let base = Potential::GaussianBump {
        amp: 1.0,
        sigma: 2.0,
    };
    let k0 = kato_norm(&g, &base).unwrap();
    let mut scale_ok = true;
    for lambda in [0.5_f64, 2.0] {
        let scaled = Potential::GaussianBump {
            amp: lambda * lambda,
            sigma: 2.0 / lambda,
        };
        scale_ok &= rel_err(kato_norm(&g, &scaled).unwrap(), k0) <= 1e-6;
    }

    let inv = Potential::InverseSquare { amp: 1.0, r0: 0.8 };
    let rep = analyze(&g, &inv, 2.0).unwrap();
    let r14 = inverse_square_floor_check(&g, &inv, &rep).unwrap();
    let l32_flag = rep.l32_norm.is_infinite();

    let pass = ball_ok && scale_ok && r14.pass && l32_flag;
    report(
        "8 (potential analysis)",
        pass,
        &format!(
            "ball Kato {k_ball:.8} vs 2π ({}); scaling invariance {scale_ok}; inverse-square lower bound pass {}; L^3/2 divergence flag {l32_flag}",
            rel_err(k_ball, 2.0 * PI),
            r14.pass
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_hardy_inequality() {
    let _guard = serial();
    let g = grid(24.0, 4095);
    let gs = gs3();
    let q_local = RadialField::new(
        g.clone(),
        g.radii()
            .map(|r| {
                let fine = gs.profile.grid();
                let x = r / fine.h() - 1.0;
                let k = (x.floor() as usize).min(fine.n() - 2);
                let t = x - k as f64;
                gs.profile.values()[k] * (1.0 - t) + gs.profile.values()[k + 1] * t
            })
            .collect(),
    )
    .unwrap();
    let exponential = RadialField::from_fn(g.clone(), |r| Complex64::new((-r).exp(), 0.0));
    let corpus = [
        ("gaussian", gaussian_width(&g, 1.0)),
        ("wide gaussian", gaussian_width(&g, 2.0)),
        ("Q", q_local),
        ("exp(-r)", exponential),
    ];
    let mut pass = true;
    let mut lines = Vec::new();
    for q in [0.0, 0.5, 1.0, 2.0] {
        let mut worst_margin = f64::INFINITY;
        let mut worst_field = "";
        for (name, u) in &corpus {
            let (lhs, rhs, _) = hardy_check(u, q).unwrap();
            let margin = (rhs - lhs) / rhs;
            if margin < worst_margin {
                worst_margin = margin;
                worst_field = name;
            }
        }
        let ok = worst_margin >= -1e-8;
        pass &= ok;
        lines.push(format!(
            "q={q}: worst margin {worst_margin:+.3e} ({worst_field})"
        ));
    }
    report(
        "9 (Hardy with explicit constant)",
        pass,
        &format!(
            "{}. The q = 0.5 leg fails because the constant (2/(3-q))^q is not valid between the anchor exponents: for f = e^-r the left side is 4*pi*Gamma(5/2)/2^(5/2) = 2.9531 while the bound is (2/2.5)^(1/2)*pi = 2.8099; the constant is provable exactly at q in {{0, 1, 2}}.",
            lines.join("; ")
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_10_admissible_potentials() {
    let _guard = serial();
    let gs = gs3();

    // Scattering side: small truncated-inverse-square, λ = 0.8 data. The
    // threshold conditions hold; the verdict is the Scatters-side claim
    // the V-integrability allows (GlobalBounded: x·∇V ≤ 0 and V ≥ 0 hold
    // but V ∉ K₀∩L^{3/2}), and the simulation completes and evacuates.
    let g = grid(32.0, 4095);
    let q = gs.profile_on(&g).unwrap();
    let v_scatter = Potential::InverseSquare { amp: 0.02, r0: 1.0 };
    let u0 = q.scaled(0.8);
    let report_v = classify(&u0, &v_scatter, 3.0, gs).unwrap();
    let thresholds_ok = report_v.ratios.me.is_below() && report_v.ratios.grad < 1.0;
    let side_ok = matches!(report_v.verdict, Verdict::Scatters | Verdict::GlobalBounded);
    let mut cfg = EvolveConfig::new(16.0);
    cfg.dt0 = 1e-3;
    cfg.store_every = 40;
    cfg.r_probe = 8.0;
    let trace = evolve(&u0, &v_scatter, 3.0, &cfg).unwrap();
    let completed = trace.terminal == Terminal::CompletedHorizon;
    let diag = scattering_diagnostic(&trace, 8.0, (0.1 * trace.snapshots[0].mass).sqrt()).unwrap();
    let pass_scatter = thresholds_ok && side_ok && completed && diag.pass;

    // Blow-up side at p = 7/3: increasing bounded-support potential
    // (x·∇V ≥ 0 on the grid) with E_V < 0 data fires the negative-energy branch, and
    // I″(0) < 16 E_V < 0.
    let p = 7.0 / 3.0;
    let gs75 = solve_ground_state(p, 1e-12).unwrap();
    let ramp = Potential::Table {
        r: (0..=64).map(|i| i as f64 * 0.25).collect(),
        v: (0..=64)
            .map(|i| {
                let r = i as f64 * 0.25;
                0.05 * r * r / (r * r + 1.0)
            })
            .collect(),
    };
    let u_neg = gaussian_width(&g, 1.0).scaled(6.0);
    let rep = classify(&u_neg, &ramp, p, &gs75).unwrap();
    let branch_fired = rep.verdict == Verdict::NegativeEnergyBlowUp && rep.snapshot.energy_v < 0.0;
    let w = Weight::new(WeightKind::Unweighted, 1.0, &g).unwrap();
    let vp = virial_eval(&u_neg, &ramp, p, &w).unwrap();
    let ordering_ok = vp.i2 < 16.0 * rep.snapshot.energy_v && rep.snapshot.energy_v < 0.0;
    let pass_blowup = branch_fired && ordering_ok;

    let pass = pass_scatter && pass_blowup;
    report(
        "10 (admissible potentials)",
        pass,
        &format!(
            "scattering side: thresholds {thresholds_ok}, verdict {:?}, completed {completed}, evacuation {}; blow-up side: mass-critical branch fired {branch_fired}, I''(0) = {:.4} < 16 E_V = {:.4} < 0: {ordering_ok}",
            report_v.verdict, diag.pass, vp.i2, 16.0 * rep.snapshot.energy_v
        ),
    );
    assert!(pass);
}
