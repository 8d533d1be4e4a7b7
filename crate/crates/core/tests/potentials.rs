//! Kato-norm oracles and admissibility-condition checks.

mod common;

use common::{grid, rel_err};
use std::f64::consts::PI;

use nlslab_core::potentials::{analyze, inverse_square_floor_check, kato_norm, Potential};

fn unit_ball_table() -> Potential {
    Potential::Table {
        r: vec![0.0, 1.0],
        v: vec![1.0, 1.0],
    }
}

#[test]
fn kato_norm_zero() {
    let g = grid(16.0, 255);
    assert_eq!(kato_norm(&g, &Potential::Zero).unwrap(), 0.0);
}

#[test]
fn kato_norm_unit_ball_is_two_pi() {
    // sup at s = 0: 4π ∫₀¹ t dt = 2π, exact by segment integration.
    let g = grid(16.0, 4095);
    let k = kato_norm(&g, &unit_ball_table()).unwrap();
    assert!(
        rel_err(k, 2.0 * PI) <= 1e-6,
        "kato = {k}, rel {:.2e}",
        rel_err(k, 2.0 * PI)
    );
}

#[test]
fn kato_norm_gaussian_closed_form() {
    // 4π A ∫₀^∞ e^{−t²/σ²} t dt = 2π A σ².
    let g = grid(32.0, 4095);
    for (a, sigma) in [(1.0, 1.0), (0.35, 2.0), (2.0, 0.5)] {
        let k = kato_norm(&g, &Potential::GaussianBump { amp: a, sigma }).unwrap();
        let exact = 2.0 * PI * a * sigma * sigma;
        assert!(
            rel_err(k, exact) <= 1e-9,
            "A={a}, σ={sigma}: {k} vs {exact}"
        );
    }
}

#[test]
fn kato_scaling_invariance() {
    // V_λ(r) = λ²V(λr) has the same Kato norm.
    let g = grid(32.0, 4095);
    let base = Potential::GaussianBump {
        amp: 1.0,
        sigma: 2.0,
    };
    let k0 = kato_norm(&g, &base).unwrap();
    for lambda in [0.5, 2.0] {
        let scaled = Potential::GaussianBump {
            amp: lambda * lambda,
            sigma: 2.0 / lambda,
        };
        let k = kato_norm(&g, &scaled).unwrap();
        assert!(rel_err(k, k0) <= 1e-6, "λ = {lambda}: {k} vs {k0}");
    }
}

#[test]
fn kato_triangle_inequality_nonneg_families() {
    let g = grid(32.0, 2047);
    let v1 = Potential::GaussianBump {
        amp: 0.8,
        sigma: 1.0,
    };
    let v2 = unit_ball_table();
    let sum = Potential::Sum(vec![v1.clone(), v2.clone()]);
    let k_sum = kato_norm(&g, &sum).unwrap();
    let k1 = kato_norm(&g, &v1).unwrap();
    let k2 = kato_norm(&g, &v2).unwrap();
    assert!(
        k_sum <= (k1 + k2) * (1.0 + 1e-9),
        "{k_sum} vs {} + {}",
        k1,
        k2
    );
    // For same-sign potentials the norm is exactly additive.
    assert!(rel_err(k_sum, k1 + k2) <= 1e-6);
}

#[test]
fn analyze_zero_flags() {
    let g = grid(16.0, 511);
    let rep = analyze(&g, &Potential::Zero, 2.0).unwrap();
    assert!(rep.nonneg && rep.xgrad_v_nonpos && rep.xgrad_v_nonneg && rep.condition_2v);
    assert_eq!(rep.kato_norm, 0.0);
    assert_eq!(rep.kato_neg, 0.0);
    assert_eq!(rep.l32_norm, 0.0);
    assert_eq!(rep.lsigma.1, 0.0);
    assert!(rep.kato_small);
}

#[test]
fn analyze_inverse_square_is_scattering_signed_but_not_l32() {
    let g = grid(32.0, 2047);
    let v = Potential::InverseSquare { amp: 0.5, r0: 1.0 };
    let rep = analyze(&g, &v, 2.0).unwrap();
    assert!(rep.nonneg);
    // x·∇V = −2Ar²/(r²+r₀²)² ≤ 0.
    assert!(rep.xgrad_v_nonpos && !rep.xgrad_v_nonneg);
    // 2V + x·∇V = 2Ar₀²/(r²+r₀²)² ≥ 0.
    assert!(rep.condition_2v);
    assert!(rep.l32_norm.is_infinite());
    assert!(rep.kato_norm.is_infinite());
    assert!(rep.xgrad_v_l32.is_infinite());
    assert!(rep.lsigma.1.is_finite() && rep.lsigma.1 > 0.0);
    assert!(rep.kato_small); // V ≥ 0 ⇒ ‖V₋‖ = 0
    assert_eq!(rep.kato_neg, 0.0);
}

#[test]
fn analyze_negative_gaussian_kato_small_flag() {
    let g = grid(32.0, 2047);
    // ‖V₋‖_K = 2π|A|σ²; A = −1, σ = 1 → 2π < 4π: small.
    let rep = analyze(
        &g,
        &Potential::GaussianBump {
            amp: -1.0,
            sigma: 1.0,
        },
        2.0,
    )
    .unwrap();
    assert!(!rep.nonneg);
    assert!(rel_err(rep.kato_neg, 2.0 * PI) <= 1e-6);
    assert!(rep.kato_small);
    // A = −3 → 6π > 4π: not small.
    let rep = analyze(
        &g,
        &Potential::GaussianBump {
            amp: -3.0,
            sigma: 1.0,
        },
        2.0,
    )
    .unwrap();
    assert!(!rep.kato_small);
}

#[test]
fn dyadic_shells_corroborate_the_l32_flags() {
    // Numeric dyadic-shell partial integrals of |V|^{3/2} r²: Cauchy for
    // the Gaussian, non-decaying for the inverse-square tail.
    let g = grid(32.0, 2047);
    let shells = |v: &Potential| -> Vec<f64> {
        let mut out = Vec::new();
        let mut lo = 1.0;
        while 2.0 * lo <= g.r_max() {
            let hi = 2.0 * lo;
            let mut acc = 0.0;
            let m = 4096;
            let h = (hi - lo) / m as f64;
            for i in 0..m {
                let t = lo + (i as f64 + 0.5) * h;
                acc += v.eval(t).abs().powf(1.5) * t * t * h;
            }
            out.push(acc);
            lo = hi;
        }
        out
    };
    let s_gauss = shells(&Potential::GaussianBump {
        amp: 1.0,
        sigma: 1.0,
    });
    assert!(s_gauss.windows(2).all(|w| w[1] < 0.5 * w[0]));
    let s_inv = shells(&Potential::InverseSquare { amp: 1.0, r0: 1.0 });
    // log-divergent: shell contributions approach a positive constant
    assert!(s_inv.last().unwrap() > &(0.8 * s_inv[s_inv.len() - 2]));
    let rep_g = analyze(
        &g,
        &Potential::GaussianBump {
            amp: 1.0,
            sigma: 1.0,
        },
        2.0,
    )
    .unwrap();
    let rep_i = analyze(&g, &Potential::InverseSquare { amp: 1.0, r0: 1.0 }, 2.0).unwrap();
    assert!(rep_g.l32_norm.is_finite());
    assert!(rep_i.l32_norm.is_infinite());
}

#[test]
fn decay_floor_holds_for_inverse_square() {
    // A/(r²+r₀²) ≥ (A/(1+r₀²))/r² for r ≥ 1.
    let g = grid(32.0, 2047);
    let v = Potential::InverseSquare { amp: 2.0, r0: 0.7 };
    let rep = analyze(&g, &v, 2.0).unwrap();
    let check = inverse_square_floor_check(&g, &v, &rep).unwrap();
    assert!(check.pass, "violation: {:?}", check.first_violation);
}

#[test]
fn decay_floor_trivial_for_constant_table() {
    // V ≡ c on the whole grid: c ≥ c/r² for r ≥ 1 trivially.
    let g = grid(16.0, 511);
    let v = Potential::Table {
        r: vec![0.0, 16.0],
        v: vec![0.3, 0.3],
    };
    let rep = analyze(&g, &v, 2.0).unwrap();
    assert!(rep.condition_2v && rep.nonneg);
    let check = inverse_square_floor_check(&g, &v, &rep).unwrap();
    assert!(check.pass);
}

#[test]
fn decay_floor_rejects_gaussian_bump() {
    // The Gaussian violates 2V + x·∇V ≥ 0 at r > σ, so the precondition
    // filter must reject it.
    let g = grid(16.0, 511);
    let v = Potential::GaussianBump {
        amp: 1.0,
        sigma: 1.0,
    };
    let rep = analyze(&g, &v, 2.0).unwrap();
    assert!(!rep.condition_2v);
    assert!(inverse_square_floor_check(&g, &v, &rep).is_err());
}

#[test]
fn increasing_bounded_potential_sign_pattern() {
    // V nonneg, 2V + x·∇V ≥ 0, x·∇V ≥ 0 and V(1) > 0: the table family
    // realizes the blow-up-side sign pattern on the grid; its analytic
    // continuation could not be in L^{3/2}(ℝ³), and the report exposes the
    // truncation radius instead of guessing a tail.
    let g = grid(16.0, 511);
    let samples: Vec<f64> = (0..=64).map(|i| i as f64 * 0.25).collect();
    let vals: Vec<f64> = samples.iter().map(|r| r * r / (r * r + 1.0)).collect();
    let v = Potential::Table {
        r: samples,
        v: vals,
    };
    let rep = analyze(&g, &v, 2.0).unwrap();
    assert!(rep.nonneg && rep.xgrad_v_nonneg && rep.condition_2v);
    assert_eq!(rep.truncation_radius, 16.0);
    assert!(!rep.warnings.is_empty());
}

#[test]
fn flags_stable_under_grid_refinement() {
    let coarse = grid(32.0, 1023);
    let fine = grid(32.0, 2047);
    for v in [
        Potential::Zero,
        Potential::GaussianBump {
            amp: 1.0,
            sigma: 1.5,
        },
        Potential::InverseSquare { amp: 0.3, r0: 1.0 },
        unit_ball_table(),
    ] {
        let a = analyze(&coarse, &v, 2.0).unwrap();
        let b = analyze(&fine, &v, 2.0).unwrap();
        assert_eq!(a.nonneg, b.nonneg, "{v}");
        assert_eq!(a.xgrad_v_nonpos, b.xgrad_v_nonpos, "{v}");
        assert_eq!(a.xgrad_v_nonneg, b.xgrad_v_nonneg, "{v}");
        assert_eq!(a.condition_2v, b.condition_2v, "{v}");
        assert_eq!(a.l32_norm.is_infinite(), b.l32_norm.is_infinite(), "{v}");
        assert_eq!(a.kato_small, b.kato_small, "{v}");
    }
}

#[test]
fn scaled_and_sum_families_evaluate() {
    let g = grid(16.0, 511);
    let v = Potential::Sum(vec![
        Potential::Scaled {
            c: 2.0,
            inner: Box::new(Potential::GaussianBump {
                amp: 1.0,
                sigma: 1.0,
            }),
        },
        Potential::InverseSquare { amp: 0.1, r0: 1.0 },
    ]);
    assert!(v.validate().is_ok());
    let val = v.eval(1.0);
    let exact = 2.0 * (-1.0_f64).exp() + 0.05;
    assert!(rel_err(val, exact) < 1e-12);
    let rep = analyze(&g, &v, 2.0).unwrap();
    assert!(rep.nonneg);
    assert!(rep.kato_norm.is_infinite()); // inverse-square member dominates the tail
}
