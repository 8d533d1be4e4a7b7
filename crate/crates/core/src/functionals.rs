//! Conserved and monitored functionals: mass, energy, the 𝓗^{1/2}
//! quadratic form, threshold products against the ground state, the
//! coercivity function g, and the explicit-constant inequalities.

use crate::error::Error;
// In no_std builds these trait methods are the only float math there is;
// test and clippy drivers load std, whose inherent methods then shadow
// them and mark the import unused.
use crate::grid::{gradient_sq_norm, integrate3d, mass_exterior, radial_derivative, RadialField};
use crate::groundstate::{pow_or_one, GroundState};
#[allow(unused_imports)]
use crate::math::FloatExt;
use crate::potentials::Potential;
use crate::Result;

use alloc::vec::Vec;

/// All scalar functionals of a field at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalSnapshot {
    pub t: f64,
    /// M[u] = ‖u‖²_{L²}
    pub mass: f64,
    /// ‖∇u‖²_{L²}
    pub grad_sq: f64,
    /// ∫ V |u|²
    pub pot_term: f64,
    /// ‖𝓗^{1/2}u‖² = ‖∇u‖² + ∫V|u|²
    pub h_half_sq: f64,
    /// ‖u‖^{p+1}_{L^{p+1}}
    pub lp1: f64,
    /// E_V[u] = ‖∇u‖²/2 + ∫V|u|²/2 − ‖u‖^{p+1}_{p+1}/(p+1)
    pub energy_v: f64,
    /// ‖∇u‖² − 3(p−1)/(2(p+1))·‖u‖^{p+1}_{p+1} + ∫V|u|²
    pub k_functional: f64,
}

/// Evaluate every functional of `u` against `v` at time `t`.
pub fn snapshot(u: &RadialField, v: &Potential, p: f64, t: f64) -> Result<FunctionalSnapshot> {
    let grid = u.grid();
    let abs2 = u.abs_sq();
    let mass = integrate3d(grid, &abs2)?;
    let grad_sq = gradient_sq_norm(u)?;
    let pot_samples: Vec<f64> = grid
        .radii()
        .zip(&abs2)
        .map(|(r, a)| v.eval(r) * a)
        .collect();
    let pot_term = integrate3d(grid, &pot_samples)?;
    let lp1_samples: Vec<f64> = abs2.iter().map(|a| a.powf((p + 1.0) / 2.0)).collect();
    let lp1 = integrate3d(grid, &lp1_samples)?;
    let h_half_sq = grad_sq + pot_term;
    let energy_v = 0.5 * h_half_sq - lp1 / (p + 1.0);
    let k_functional = grad_sq - 1.5 * (p - 1.0) / (p + 1.0) * lp1 + pot_term;
    Ok(FunctionalSnapshot {
        t,
        mass,
        grad_sq,
        pot_term,
        h_half_sq,
        lp1,
        energy_v,
        k_functional,
    })
}

/// A threshold quotient, or the sentinel for data with E_V ≤ 0 where the
/// s_c-th power of the energy is undefined but the comparison is settled:
/// negative energy sits strictly below the mass–energy line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdRatio {
    Value(f64),
    BelowNegativeEnergy,
}

impl ThresholdRatio {
    pub fn is_below(&self) -> bool {
        match self {
            ThresholdRatio::Value(v) => *v < 1.0,
            ThresholdRatio::BelowNegativeEnergy => true,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            ThresholdRatio::Value(v) => Some(*v),
            ThresholdRatio::BelowNegativeEnergy => None,
        }
    }
}

/// The three threshold quotients of a snapshot against a ground state.
///
/// Each is the square of the corresponding norm-product quotient, so that
/// for data λQ at p = 3 they take the closed forms me = 3λ⁴ − 2λ⁶ and
/// grad = h = λ²; "< 1" still reads "below threshold".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdRatios {
    pub me: ThresholdRatio,
    pub grad: f64,
    pub h: f64,
}

pub fn threshold_products(s: &FunctionalSnapshot, gs: &GroundState) -> ThresholdRatios {
    let sc = gs.s_c;
    let denom_me = gs.threshold_me;
    let denom_grad = pow_or_one(gs.mass, 1.0 - sc) * pow_or_one(gs.grad_sq, sc);
    let grad = pow_or_one(s.mass, 1.0 - sc) * pow_or_one(s.grad_sq, sc) / denom_grad;
    let h = pow_or_one(s.mass, 1.0 - sc) * pow_or_one(s.h_half_sq, sc) / denom_grad;
    let me = if s.energy_v <= 0.0 && sc != 0.0 {
        ThresholdRatio::BelowNegativeEnergy
    } else {
        let plain = pow_or_one(s.mass, 1.0 - sc) * pow_or_one(s.energy_v, sc) / denom_me;
        ThresholdRatio::Value(plain * plain)
    };
    ThresholdRatios { me, grad, h }
}

/// The coercivity function g(y) = [3(p−1)y² − 4y^{3(p−1)/2}] / (3p−7),
/// with g(0) = 0, a maximum g(1) = 1, and decay beyond.
pub fn g_coercivity(y: f64, p: f64) -> f64 {
    (3.0 * (p - 1.0) * y * y - 4.0 * y.powf(1.5 * (p - 1.0))) / (3.0 * p - 7.0)
}

/// Which side of the ground-state threshold the data sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdSide {
    Below,
    Above,
}

/// Quantitative margin extracted from g.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoercivityGap {
    pub delta_prime: f64,
    /// Root of g(y) = (mass–energy quotient)^{1/s_c} on the requested side.
    pub y: f64,
}

/// Solve g(y) = q^{1/s_c} for the normalized gradient variable y, where q
/// is the plain mass–energy quotient (the square root of `me_ratio`), and
/// convert the root into the margin δ′:
/// below, y_sol = (1−2δ′)^{2/(3p−7)}; above, y_sol = (1+δ′)^{2(p−1)/(3p−7)}.
pub fn coercivity_gap(
    me_ratio: ThresholdRatio,
    p: f64,
    side: ThresholdSide,
) -> Result<CoercivityGap> {
    if (p - 7.0 / 3.0).abs() < 1e-12 {
        return Err(Error::Invalid(
            "coercivity gap is undefined at the mass-critical exponent".into(),
        ));
    }
    let sc = 1.5 - 2.0 / (p - 1.0);
    let c = match me_ratio {
        ThresholdRatio::BelowNegativeEnergy => 0.0,
        ThresholdRatio::Value(v) => {
            if v > 1.0 {
                return Err(Error::NotBelowThreshold { ratio: v });
            }
            // me_ratio is the squared quotient; the g-equation wants the
            // plain quotient to the power 1/s_c.
            v.powf(1.0 / (2.0 * sc))
        }
    };
    let g = |y: f64| g_coercivity(y, p);
    let y = match side {
        ThresholdSide::Below => {
            if c == 0.0 {
                0.0
            } else {
                bisect_increasing(g, 0.0, 1.0, c)?
            }
        }
        ThresholdSide::Above => {
            let mut hi = 2.0;
            let mut guard = 0;
            while g(hi) > c {
                hi *= 2.0;
                guard += 1;
                if guard > 64 {
                    return Err(Error::RootFindingFailed("above-side bracket"));
                }
            }
            bisect_decreasing(g, 1.0, hi, c)?
        }
    };
    let delta_prime = match side {
        ThresholdSide::Below => 0.5 * (1.0 - y.powf((3.0 * p - 7.0) / 2.0)),
        ThresholdSide::Above => y.powf((3.0 * p - 7.0) / (2.0 * (p - 1.0))) - 1.0,
    };
    Ok(CoercivityGap { delta_prime, y })
}

fn bisect_increasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, target: f64) -> Result<f64> {
    if f(hi) < target - 1e-15 {
        return Err(Error::RootFindingFailed("increasing bisection bracket"));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn bisect_decreasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, target: f64) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The quantitative coefficient of Prop-4.1(ii)-style coercivity:
/// ‖∇u‖² − 3(p−1)/(2(p+1))‖u‖^{p+1}_{p+1} ≥ c(δ′)·‖u‖^{p+1}_{p+1} with
/// c = 3(p−1)δ′ / [(p+1)(1−2δ′)].
pub fn coercive_lp1_constant(delta_prime: f64, p: f64) -> f64 {
    3.0 * (p - 1.0) * delta_prime / ((p + 1.0) * (1.0 - 2.0 * delta_prime))
}

/// The drop −δ of the k-functional along above-threshold trajectories:
/// δ = (3(p−1)/2)·ε₁ with ε₁ = ½[(M_Q/M_u)^{(1−s_c)/s_c} E₀[Q] − E_V[u₀]].
/// At the mass-critical exponent the bound is k ≤ 2E_V[u₀] instead, so
/// δ = −2E_V[u₀].
pub fn lemma53_delta(s0: &FunctionalSnapshot, gs: &GroundState) -> f64 {
    if (gs.p - 7.0 / 3.0).abs() < 1e-12 {
        return -2.0 * s0.energy_v;
    }
    let sc = gs.s_c;
    let eps1 = 0.5 * ((gs.mass / s0.mass).powf((1.0 - sc) / sc) * gs.energy0 - s0.energy_v);
    1.5 * (gs.p - 1.0) * eps1
}

/// θ_q = 2(q−(p+1)) / [(p+1)(q−2)] ∈ (0, 2/(p+1)] for q > p+1.
pub fn theta_q(p: f64, q: f64) -> Result<f64> {
    if q <= p + 1.0 {
        return Err(Error::Invalid("theta_q needs q > p + 1".into()));
    }
    Ok(2.0 * (q - (p + 1.0)) / ((p + 1.0) * (q - 2.0)))
}

/// Hardy's inequality with the explicit constant (2/(3−q))^q:
/// ∫|u|²/|x|^q dx ≤ (2/(3−q))^q ‖u‖_{L²}^{2−q} ‖∇u‖_{L²}^q.
pub fn hardy_check(u: &RadialField, q: f64) -> Result<(f64, f64, bool)> {
    if !(0.0..=2.0).contains(&q) {
        return Err(Error::Invalid("hardy_check needs q in [0, 2]".into()));
    }
    let grid = u.grid();
    let samples: Vec<f64> = grid
        .radii()
        .zip(u.abs_sq())
        .map(|(r, a)| a * r.powf(-q))
        .collect();
    let lhs = integrate3d(grid, &samples)?;
    let mass = integrate3d(grid, &u.abs_sq())?;
    let grad = gradient_sq_norm(u)?;
    let rhs = (2.0 / (3.0 - q)).powf(q) * mass.powf((2.0 - q) / 2.0) * grad.powf(q / 2.0);
    Ok((lhs, rhs, lhs <= rhs * (1.0 + 1e-8)))
}

/// Exterior Strauss-type quotient; the inequality's implicit constant is
/// not explicit, so this is a boundedness probe only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExteriorQuotient {
    Value(f64),
    /// Numerator and denominator both vanish (field supported inside R).
    ZeroOverZero,
}

/// lhs / (R^{−(p−1)} ‖u‖_{L²(r≥R)}^{(p+3)/2} ‖∇u‖_{L²(r≥R)}^{(p−1)/2})
/// with lhs = ‖u‖^{p+1}_{L^{p+1}(r≥R)}.
pub fn radial_sobolev_check(u: &RadialField, r_split: f64, p: f64) -> Result<ExteriorQuotient> {
    let grid = u.grid();
    if !(r_split > 0.0 && r_split < grid.r_max() / 2.0) {
        return Err(Error::Invalid("R must lie in (0, r_max/2)".into()));
    }
    let lp1_ext: Vec<f64> = grid
        .radii()
        .zip(u.values())
        .map(|(r, v)| {
            if r >= r_split {
                v.norm().powf(p + 1.0)
            } else {
                0.0
            }
        })
        .collect();
    let lhs = integrate3d(grid, &lp1_ext)?;
    let mass_ext = mass_exterior(u, r_split);
    let deriv = radial_derivative(u);
    let grad_ext_samples: Vec<f64> = grid
        .radii()
        .zip(&deriv)
        .map(|(r, d)| if r >= r_split { d.norm_sqr() } else { 0.0 })
        .collect();
    let grad_ext = integrate3d(grid, &grad_ext_samples)?;
    let denom =
        r_split.powf(-(p - 1.0)) * mass_ext.powf((p + 3.0) / 4.0) * grad_ext.powf((p - 1.0) / 4.0);
    if denom == 0.0 {
        return Ok(ExteriorQuotient::ZeroOverZero);
    }
    Ok(ExteriorQuotient::Value(lhs / denom))
}
