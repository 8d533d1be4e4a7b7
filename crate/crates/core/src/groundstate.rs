//! Ground state Q of −Q + ΔQ + Q^p = 0 by shooting, plus the derived
//! sharp Gagliardo–Nirenberg constant and the scaling transform.
//!
//! Radial form: Q″ + (2/r)Q′ − Q + |Q|^{p−1}Q = 0, Q′(0) = 0, Q(0) = a.
//! Shots with a below the ground-state amplitude turn around and stay
//! positive; shots above it cross zero. Bisection on a between the two
//! behaviours converges to the separatrix. The exponentially growing mode
//! contaminates the far tail of any finite-precision shot, so beyond the
//! radius where Q ≤ MATCH_LEVEL the profile is continued with the exact
//! linear decay c·e^{−r}/r (w = rQ solves w″ = w once the nonlinearity is
//! negligible) and clipped to zero below CLIP_LEVEL.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
// In no_std builds these trait methods are the only float math there is;
// test and clippy drivers load std, whose inherent methods then shadow
// them and mark the import unused.
use crate::grid::{gradient_sq_norm, integrate3d, RadialField, RadialGrid};
use crate::math::signed_pow;
#[allow(unused_imports)]
use crate::math::FloatExt;
use crate::Result;

/// Amplitude below which the shot is handed over to the analytic tail.
const MATCH_LEVEL: f64 = 1e-4;
/// Amplitude below which the profile is clipped to exactly zero.
const CLIP_LEVEL: f64 = 1e-12;
/// Pohozaev residual gate.
const POHOZAEV_TOL: f64 = 1e-6;

/// Default shooting grid: 16× the evolution refinement so that the
/// finite-difference gradient norm meets the Pohozaev gate, with
/// (n+1) a power of two for cheap decimation onto coarser grids.
pub const DEFAULT_GS_N: usize = 65_535;

/// Ground-state profile with its norms, energies and sharp constants.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub p: f64,
    pub profile: RadialField,
    /// M[Q] = ‖Q‖²_{L²}
    pub mass: f64,
    /// ‖∇Q‖²_{L²} (finite-difference quadrature, same estimator as snapshots)
    pub grad_sq: f64,
    /// ‖Q‖^{p+1}_{L^{p+1}}
    pub lp1: f64,
    /// E₀[Q] = ‖∇Q‖²/2 − ‖Q‖^{p+1}_{p+1}/(p+1)
    pub energy0: f64,
    /// Sharp Gagliardo–Nirenberg constant
    pub cgn: f64,
    /// Criticality index 3/2 − 2/(p−1)
    pub s_c: f64,
    /// M[Q]^{1−s_c}·E₀[Q]^{s_c}
    pub threshold_me: f64,
    /// ‖Q‖_{L²}^{1−s_c}·‖∇Q‖_{L²}^{s_c}
    pub threshold_grad: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shot {
    /// Stayed positive: turned around below the potential hump, grew past
    /// 2a, or survived to r_max — the amplitude is at or below critical.
    Low,
    /// Crossed zero — the amplitude is above critical.
    High,
}

fn s_c(p: f64) -> f64 {
    1.5 - 2.0 / (p - 1.0)
}

/// x^e with the 0⁰ = 1 convention used by M^{1−s_c}E^{s_c} at s_c = 0.
pub(crate) fn pow_or_one(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

/// RHS of the first-order system (Q, P) with P = Q′.
#[inline]
fn rhs(r: f64, q: f64, pq: f64, p: f64) -> (f64, f64) {
    (pq, q - signed_pow(q, p) - 2.0 / r * pq)
}

#[inline]
fn rk4_step(r: f64, q: f64, pq: f64, h: f64, p: f64) -> (f64, f64) {
    let (k1q, k1p) = rhs(r, q, pq, p);
    let (k2q, k2p) = rhs(r + 0.5 * h, q + 0.5 * h * k1q, pq + 0.5 * h * k1p, p);
    let (k3q, k3p) = rhs(r + 0.5 * h, q + 0.5 * h * k2q, pq + 0.5 * h * k2p, p);
    let (k4q, k4p) = rhs(r + h, q + h * k3q, pq + h * k3p, p);
    (
        q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
        pq + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
    )
}

/// Series start at the first node: Q(r) = a + (a − a^p) r²/6 + O(r⁴).
#[inline]
fn series_start(a: f64, p: f64, r: f64) -> (f64, f64) {
    let c = (a - signed_pow(a, p)) / 6.0;
    (a + c * r * r, 2.0 * c * r)
}

/// Integrate one shot, classifying it without storing the profile.
fn classify_shot(grid: &RadialGrid, a: f64, p: f64) -> Shot {
    let h = grid.h();
    // Q = q0 is the unstable hump location; turning below it is definitive.
    let hump = ((p + 1.0) / 2.0).powf(1.0 / (p - 1.0));
    let (mut q, mut pq) = series_start(a, p, h);
    let mut r = h;
    for _ in 1..grid.n() {
        let (qn, pn) = rk4_step(r, q, pq, h, p);
        q = qn;
        pq = pn;
        r += h;
        if !q.is_finite() || !pq.is_finite() {
            return if q.is_sign_negative() {
                Shot::High
            } else {
                Shot::Low
            };
        }
        if q < 0.0 {
            return Shot::High;
        }
        if q > 2.0 * a {
            return Shot::Low;
        }
        if pq > 0.0 && q < hump {
            return Shot::Low;
        }
        if q < CLIP_LEVEL {
            return Shot::Low;
        }
    }
    Shot::Low
}

/// Integrate the converged shot, storing node samples of Q and Q′ and
/// attaching the analytic tail from the matching radius on.
fn integrate_profile(grid: &RadialGrid, a: f64, p: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let h = grid.h();
    let n = grid.n();
    let mut qs = Vec::with_capacity(n);
    let mut ps = Vec::with_capacity(n);
    let (mut q, mut pq) = series_start(a, p, h);
    qs.push(q);
    ps.push(pq);
    let mut r = h;
    let mut matched_at = None;
    for j in 1..n {
        let (qn, pn) = rk4_step(r, q, pq, h, p);
        q = qn;
        pq = pn;
        r += h;
        if q <= MATCH_LEVEL {
            matched_at = Some((j, r, q));
            break;
        }
        qs.push(q);
        ps.push(pq);
    }
    let (j_m, r_m, q_m) = matched_at.ok_or_else(|| {
        Error::Invalid("profile did not decay below the matching level before r_max".into())
    })?;
    // Linear tail w = rQ ∝ e^{−r}: Q = c e^{−r}/r, matched at (r_m, q_m).
    let c = q_m * r_m * (r_m).exp();
    for j in j_m..n {
        let rj = grid.r(j);
        let tail = c * (-rj).exp() / rj;
        if tail < CLIP_LEVEL {
            qs.push(0.0);
            ps.push(0.0);
        } else {
            qs.push(tail);
            ps.push(-c * (-rj).exp() * (1.0 / rj + 1.0 / (rj * rj)));
        }
    }
    debug_assert_eq!(qs.len(), n);
    Ok((qs, ps))
}

/// Shooting solve on an explicit grid.
///
/// Bisection runs between a "stays positive" and a "crosses zero" shot;
/// the initial bracket comes from scanning a = 1, 1.5, 1.5², ... until the
/// classification flips. Converged when the bracket width is below tol·a.
pub fn solve_ground_state_on(grid: &Arc<RadialGrid>, p: f64, tol: f64) -> Result<GroundState> {
    solve_ground_state_scanned(grid, p, tol, 1.0)
}

/// Shooting solve with an explicit bracket-scan start (the converged state
/// must not depend on it; see the uniqueness test).
pub fn solve_ground_state_scanned(
    grid: &Arc<RadialGrid>,
    p: f64,
    tol: f64,
    scan_from: f64,
) -> Result<GroundState> {
    if !(scan_from > 0.0) || !scan_from.is_finite() {
        return Err(Error::Invalid("scan start must be positive".into()));
    }
    if !((7.0 / 3.0..5.0).contains(&p)) {
        return Err(Error::Invalid(
            "exponent p must lie in [7/3, 5) (mass-critical through energy-subcritical)".into(),
        ));
    }
    if !(1e-12..=1e-4).contains(&tol) {
        return Err(Error::Invalid("tol must lie in [1e-12, 1e-4]".into()));
    }

    // Bracket scan: ×1.5 steps, capped at 10× the initial guess.
    let a_cap = 10.0 * scan_from;
    let mut a_prev = scan_from;
    let mut class_prev = classify_shot(grid, a_prev, p);
    let mut bracket = None;
    let mut a = 1.5 * scan_from;
    while a <= a_cap {
        let class = classify_shot(grid, a, p);
        if class != class_prev {
            bracket = Some(if class_prev == Shot::Low {
                (a_prev, a)
            } else {
                (a, a_prev)
            });
            break;
        }
        a_prev = a;
        class_prev = class;
        a *= 1.5;
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::NoGroundStateBracket { p, a_max: a_cap })?;

    // Bisect to the requested width; going tighter costs nothing and keeps
    // the tail matching clean, so always resolve to 1e-13·a at least.
    let width_goal = |mid: f64| tol.min(1e-13) * mid;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= width_goal(mid) || mid == lo || mid == hi {
            break;
        }
        match classify_shot(grid, mid, p) {
            Shot::Low => lo = mid,
            Shot::High => hi = mid,
        }
    }
    let a_star = 0.5 * (lo + hi);

    let (qs, _ps) = integrate_profile(grid, a_star, p)?;

    // Positivity and monotone decrease until the clip level.
    let mut prev = f64::INFINITY;
    for (&q, _) in qs.iter().zip(grid.radii()) {
        if q <= 0.0 {
            break;
        }
        if q >= prev {
            return Err(Error::Invalid(
                "shooting produced a non-monotone profile".into(),
            ));
        }
        prev = q;
    }

    let profile = RadialField::from_real(grid.clone(), qs)?;
    GroundState::from_profile(p, profile)
}

/// Shooting solve on the default fine grid (r_max = 32, n = 65535).
pub fn solve_ground_state(p: f64, tol: f64) -> Result<GroundState> {
    let grid = Arc::new(RadialGrid::new(RadialGrid::DEFAULT_R_MAX, DEFAULT_GS_N)?);
    solve_ground_state_on(&grid, p, tol)
}

impl GroundState {
    /// Populate all derived quantities from a validated profile and gate
    /// them on the Pohozaev identities.
    pub fn from_profile(p: f64, profile: RadialField) -> Result<GroundState> {
        let grid = profile.grid().clone();
        let qabs: Vec<f64> = profile.values().iter().map(|v| v.re).collect();
        let mass = integrate3d(&grid, &qabs.iter().map(|q| q * q).collect::<Vec<_>>())?;
        let lp1_samples: Vec<f64> = qabs.iter().map(|q| q.abs().powf(p + 1.0)).collect();
        let lp1 = integrate3d(&grid, &lp1_samples)?;
        let grad_sq = gradient_sq_norm(&profile)?;

        let mass_residual = (lp1 * (5.0 - p) / (2.0 * (p + 1.0)) - mass).abs() / mass;
        let grad_residual = (lp1 * 3.0 * (p - 1.0) / (2.0 * (p + 1.0)) - grad_sq).abs() / grad_sq;
        if mass_residual > POHOZAEV_TOL || grad_residual > POHOZAEV_TOL {
            return Err(Error::ProfileRejected {
                mass_residual,
                grad_residual,
            });
        }

        let energy0 = grad_sq / 2.0 - lp1 / (p + 1.0);
        let sc = s_c(p);
        let threshold_me = pow_or_one(mass, 1.0 - sc) * pow_or_one(energy0, sc);
        let threshold_grad = mass.powf((1.0 - sc) / 2.0) * grad_sq.powf(sc / 2.0);
        let cgn = 2.0 * (p + 1.0) / (3.0 * (p - 1.0))
            * mass.powf(-(5.0 - p) / 4.0)
            * grad_sq.powf(-(3.0 * p - 7.0) / 4.0);

        let gs = GroundState {
            p,
            profile,
            mass,
            grad_sq,
            lp1,
            energy0,
            cgn,
            s_c: sc,
            threshold_me,
            threshold_grad,
        };
        // The attainment statement of the sharp inequality doubles as a
        // corruption check on the profile.
        sharp_gn_constant(&gs)?;
        Ok(gs)
    }

    /// Peak amplitude Q(0) extrapolated from the first two nodes (even
    /// extension through the origin).
    pub fn peak(&self) -> f64 {
        let v = self.profile.values();
        (4.0 * v[0].re - v[1].re) / 3.0
    }

    /// The profile restricted to a coarser grid whose nodes are a subset of
    /// this one's (requires (n_fine+1) divisible by (n_coarse+1)).
    pub fn profile_on(&self, grid: &Arc<RadialGrid>) -> Result<RadialField> {
        let fine = self.profile.grid();
        if (fine.r_max() - grid.r_max()).abs() > 1e-12 {
            return Err(Error::Invalid("decimation requires equal r_max".into()));
        }
        let stride_num = fine.n() + 1;
        let stride_den = grid.n() + 1;
        if !stride_num.is_multiple_of(stride_den) {
            return Err(Error::Invalid(
                "coarse grid nodes are not a subset of the profile grid".into(),
            ));
        }
        let stride = stride_num / stride_den;
        let values: Vec<Complex64> = (0..grid.n())
            .map(|j| self.profile.values()[(j + 1) * stride - 1])
            .collect();
        RadialField::new(grid.clone(), values)
    }
}

/// Sharp Gagliardo–Nirenberg constant from the Pohozaev closed form,
/// cross-checked against the attainment quotient ‖Q‖_{p+1}^{p+1} /
/// (‖Q‖₂^{(5−p)/2}‖∇Q‖₂^{3(p−1)/2}).
pub fn sharp_gn_constant(gs: &GroundState) -> Result<f64> {
    let p = gs.p;
    let closed = 2.0 * (p + 1.0) / (3.0 * (p - 1.0))
        * gs.mass.powf(-(5.0 - p) / 4.0)
        * gs.grad_sq.powf(-(3.0 * p - 7.0) / 4.0);
    let attained =
        gs.lp1 / (gs.mass.powf((5.0 - p) / 4.0) * gs.grad_sq.powf(3.0 * (p - 1.0) / 4.0));
    let relative_error = (closed - attained).abs() / attained;
    if relative_error > 1e-6 {
        return Err(Error::GnAttainmentViolated { relative_error });
    }
    Ok(closed)
}

/// Scaling transform u ↦ λ^{2/(p−1)} u(λ·), resampled on the field's grid
/// by linear interpolation; samples requested beyond r_max are zero.
pub fn rescale(u: &RadialField, lambda: f64, p: f64) -> Result<RadialField> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Invalid("lambda must be positive".into()));
    }
    let grid = u.grid();
    // Reject when over half the mass lives beyond the fold radius.
    let total = crate::grid::integrate3d_unchecked(grid, &u.abs_sq());
    if total > 0.0 {
        let lost = crate::grid::mass_exterior(u, grid.r_max() / lambda);
        if lost > 0.5 * total {
            return Err(Error::ResampleUnderresolved { lambda });
        }
    }
    let h = grid.h();
    let n = grid.n();
    let v = u.values();
    // Even extension through the origin for interpolation below the first node.
    let at = |s: f64| -> Complex64 {
        if s >= grid.r_max() {
            return Complex64::new(0.0, 0.0);
        }
        if s < h {
            let u0 = (4.0 * v[0] - v[1]) / 3.0;
            let t = s / h;
            return u0 * (1.0 - t) + v[0] * t;
        }
        let x = s / h - 1.0;
        let k = (x.floor() as usize).min(n - 2);
        let t = x - k as f64;
        v[k] * (1.0 - t) + v[k + 1] * t
    };
    let amp = lambda.powf(2.0 / (p - 1.0));
    let values: Vec<Complex64> = grid.radii().map(|r| at(lambda * r) * amp).collect();
    RadialField::new(grid.clone(), values)
}
