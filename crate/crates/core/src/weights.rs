//! Virial weight functions ω(r) with derivative samples through fourth
//! order: the unweighted |x|², the cutoff χ_R, the Morawetz weight w_R,
//! the compactly supported Ψ_R and the linear-growth F_R.
//!
//! Every bridge across a transition annulus is built from the quintic
//! smoothstep h(s) = 10s³ − 15s⁴ + 6s⁵, composed either in value space or
//! in curvature space. Curvature-space construction is what makes the
//! sign constraints hold: interpolating w between r² and 3Rr − 4R² with a
//! value-space quintic cannot keep ∂_rω ≥ 0 and ∂²_rω ≥ 0 (the bridge's
//! mean slope R is below the inner slope 2R, so convexity is impossible
//! for any C¹ interpolant of those values). Prescribing ω″ = 2(1 − h) on
//! the annulus instead keeps both signs and both slope matches exactly, at
//! the cost of an exterior offset constant; no identity evaluated here
//! depends on that constant.

use alloc::vec::Vec;

use crate::error::Error;
// In no_std builds these trait methods are the only float math there is;
// test and clippy drivers load std, whose inherent methods then shadow
// them and mark the import unused.
use crate::grid::RadialGrid;
#[allow(unused_imports)]
use crate::math::FloatExt;
use crate::Result;

/// Quintic smoothstep and its first three derivatives on [0, 1].
#[inline]
fn smoothstep(s: f64) -> (f64, f64, f64, f64) {
    if s <= 0.0 {
        (0.0, 0.0, 0.0, 0.0)
    } else if s >= 1.0 {
        (1.0, 0.0, 0.0, 0.0)
    } else {
        let s2 = s * s;
        let s3 = s2 * s;
        (
            10.0 * s3 - 15.0 * s2 * s2 + 6.0 * s2 * s3,
            30.0 * s2 - 60.0 * s3 + 30.0 * s2 * s2,
            60.0 * s - 180.0 * s2 + 120.0 * s3,
            60.0 - 360.0 * s + 360.0 * s2,
        )
    }
}

/// Weight families used by the virial identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// ω = r² everywhere (finite-variance virial).
    Unweighted,
    /// χ_R: 1 on r ≤ R/2, quintic descent, 0 on r ≥ R.
    Chi,
    /// Morawetz weight: r² on r ≤ R, linear 3Rr + const on r ≥ 2R,
    /// with ω′ ≥ 0 and ω″ ≥ 0 everywhere.
    WR,
    /// Compactly supported virial weight: r² on r ≤ R, 0 on r ≥ 3R,
    /// with ω″ ≤ 2 everywhere.
    PsiR,
    /// Linear-growth weight defined through its slope: ω′ = r on r ≤ R,
    /// ω′ = 3R/2 on r ≥ 2R, with 1 − ω″ ≥ 0 everywhere.
    FR,
}

/// Samples of ω and its first four radial derivatives at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSample {
    pub w: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

/// A virial weight with node samples of ω, ω′, ω″, ω‴, ω⁗.
#[derive(Debug, Clone)]
pub struct Weight {
    pub kind: WeightKind,
    pub radius: f64,
    pub w: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub d3: Vec<f64>,
    pub d4: Vec<f64>,
}

impl Weight {
    /// Build a weight on a grid; `radius` is ignored for `Unweighted`.
    pub fn new(kind: WeightKind, radius: f64, grid: &RadialGrid) -> Result<Weight> {
        if kind != WeightKind::Unweighted && !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Invalid("weight radius must be positive".into()));
        }
        let n = grid.n();
        let mut w = Vec::with_capacity(n);
        let mut d1 = Vec::with_capacity(n);
        let mut d2 = Vec::with_capacity(n);
        let mut d3 = Vec::with_capacity(n);
        let mut d4 = Vec::with_capacity(n);
        for r in grid.radii() {
            let s = sample(kind, radius, r);
            w.push(s.w);
            d1.push(s.d1);
            d2.push(s.d2);
            d3.push(s.d3);
            d4.push(s.d4);
        }
        let weight = Weight {
            kind,
            radius,
            w,
            d1,
            d2,
            d3,
            d4,
        };
        weight.check_invariants(grid)?;
        Ok(weight)
    }

    /// Construction-time verification of the kind-specific constraints.
    fn check_invariants(&self, grid: &RadialGrid) -> Result<()> {
        let tol = 1e-9 * (1.0 + self.radius * self.radius);
        let r_of = |j: usize| grid.r(j);
        match self.kind {
            WeightKind::Unweighted => {}
            WeightKind::Chi => {
                for j in 0..self.w.len() {
                    let r = r_of(j);
                    if r <= self.radius / 2.0 && (self.w[j] - 1.0).abs() > 1e-12 {
                        return Err(Error::Invalid("chi must be 1 inside R/2".into()));
                    }
                    if r >= self.radius && self.w[j].abs() > 1e-12 {
                        return Err(Error::Invalid("chi must vanish beyond R".into()));
                    }
                }
            }
            WeightKind::WR => {
                for j in 0..self.w.len() {
                    let r = r_of(j);
                    if r <= self.radius && (self.w[j] - r * r).abs() > tol {
                        return Err(Error::Invalid("w_R must equal r^2 inside R".into()));
                    }
                    if r >= 2.0 * self.radius && (self.d1[j] - 3.0 * self.radius).abs() > tol {
                        return Err(Error::Invalid("w_R slope must be 3R beyond 2R".into()));
                    }
                    if self.d1[j] < -1e-12 || self.d2[j] < -1e-12 {
                        return Err(Error::Invalid("w_R must stay monotone convex".into()));
                    }
                }
            }
            WeightKind::PsiR => {
                for j in 0..self.w.len() {
                    let r = r_of(j);
                    if r <= self.radius && (self.w[j] - r * r).abs() > tol {
                        return Err(Error::Invalid("psi_R must equal r^2 inside R".into()));
                    }
                    if r >= 3.0 * self.radius && self.w[j].abs() > tol {
                        return Err(Error::Invalid("psi_R must vanish beyond 3R".into()));
                    }
                    if self.d2[j] > 2.0 + 1e-9 {
                        return Err(Error::Invalid("psi_R needs psi'' <= 2".into()));
                    }
                    if self.w[j] < -tol {
                        return Err(Error::Invalid("psi_R must stay nonnegative".into()));
                    }
                }
            }
            WeightKind::FR => {
                for j in 0..self.w.len() {
                    let r = r_of(j);
                    if r <= self.radius && (self.d1[j] - r).abs() > tol {
                        return Err(Error::Invalid("f_R slope must be r inside R".into()));
                    }
                    if r >= 2.0 * self.radius && (self.d1[j] - 1.5 * self.radius).abs() > tol {
                        return Err(Error::Invalid("f_R slope must be 3R/2 beyond 2R".into()));
                    }
                    if self.d2[j] > 1.0 + 1e-9 {
                        return Err(Error::Invalid("f_R needs 1 - F'' >= 0".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Evaluate a weight kind at one radius.
pub fn sample(kind: WeightKind, radius: f64, r: f64) -> WeightSample {
    match kind {
        WeightKind::Unweighted => WeightSample {
            w: r * r,
            d1: 2.0 * r,
            d2: 2.0,
            d3: 0.0,
            d4: 0.0,
        },
        WeightKind::Chi => chi_sample(radius, r),
        WeightKind::WR => wr_sample(radius, r),
        WeightKind::PsiR => psi_sample(radius, r),
        WeightKind::FR => fr_sample(radius, r),
    }
}

/// χ_R: value-space descent 1 → 0 on [R/2, R].
fn chi_sample(radius: f64, r: f64) -> WeightSample {
    let half = radius / 2.0;
    if r <= half {
        WeightSample {
            w: 1.0,
            d1: 0.0,
            d2: 0.0,
            d3: 0.0,
            d4: 0.0,
        }
    } else if r >= radius {
        WeightSample {
            w: 0.0,
            d1: 0.0,
            d2: 0.0,
            d3: 0.0,
            d4: 0.0,
        }
    } else {
        let s = (r - half) / half;
        let (h, h1, h2, h3) = smoothstep(s);
        let inv = 1.0 / half;
        WeightSample {
            w: 1.0 - h,
            d1: -h1 * inv,
            d2: -h2 * inv * inv,
            d3: -h3 * inv * inv * inv,
            // smoothstep has polynomial 4th derivative: differentiate h3 term
            d4: -smoothstep_d4(s) * inv * inv * inv * inv,
        }
    }
}

#[inline]
fn smoothstep_d4(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        0.0
    } else {
        -360.0 + 720.0 * s
    }
}

/// w_R via curvature space: ω″(R(1+τ)) = 2(1 − h(τ)) on [R, 2R].
///
/// Integrating once: ω′(R(1+τ)) = R[2 + 2∫₀^τ(1−h)] → 3R at τ = 1.
/// Integrating twice fixes w up to the exterior constant; the interior is
/// exactly r² and the exterior exactly 3Rr + C with C = (H₂ − 2)·R² where
/// H₂ = 1 + 2 + 2∫₀¹(1−h)(1−s)ds.
fn wr_sample(radius: f64, r: f64) -> WeightSample {
    let big_r = radius;
    if r <= big_r {
        return WeightSample {
            w: r * r,
            d1: 2.0 * r,
            d2: 2.0,
            d3: 0.0,
            d4: 0.0,
        };
    }
    // ∫₀^τ (1−h) and ∫₀^τ ∫₀^σ (1−h): closed forms of the smoothstep.
    let int1 = |t: f64| -> f64 {
        // ∫ (1 − 10s³ + 15s⁴ − 6s⁵) ds
        t - 2.5 * t.powi(4) + 3.0 * t.powi(5) - t.powi(6)
    };
    let int2 =
        |t: f64| -> f64 { 0.5 * t * t - 0.5 * t.powi(5) + 0.5 * t.powi(6) - t.powi(7) / 7.0 };
    if r >= 2.0 * big_r {
        let w_at_2r = big_r * big_r * (1.0 + 2.0 + 2.0 * int2(1.0));
        return WeightSample {
            w: w_at_2r + 3.0 * big_r * (r - 2.0 * big_r),
            d1: 3.0 * big_r,
            d2: 0.0,
            d3: 0.0,
            d4: 0.0,
        };
    }
    let tau = (r - big_r) / big_r;
    let (h, h1, h2, _h3) = smoothstep(tau);
    let d2 = 2.0 * (1.0 - h);
    let d1 = big_r * (2.0 + 2.0 * int1(tau));
    let w = big_r * big_r * (1.0 + (2.0 * tau + 2.0 * int2(tau)));
    WeightSample {
        w,
        d1,
        d2,
        d3: -2.0 * h1 / big_r,
        d4: -2.0 * h2 / (big_r * big_r),
    }
}

/// F_R via curvature space: F″(σ) = 1 − h(σ − 1) for σ = r/R ∈ [1, 2],
/// giving F′: r inside, 3R/2 outside, with 0 ≤ F″ ≤ 1 throughout.
fn fr_sample(radius: f64, r: f64) -> WeightSample {
    let big_r = radius;
    if r <= big_r {
        return WeightSample {
            w: 0.5 * r * r,
            d1: r,
            d2: 1.0,
            d3: 0.0,
            d4: 0.0,
        };
    }
    let int1 = |t: f64| -> f64 { t - 2.5 * t.powi(4) + 3.0 * t.powi(5) - t.powi(6) };
    let int2 =
        |t: f64| -> f64 { 0.5 * t * t - 0.5 * t.powi(5) + 0.5 * t.powi(6) - t.powi(7) / 7.0 };
    if r >= 2.0 * big_r {
        let w_at_2r = big_r * big_r * (0.5 + 1.0 + int2(1.0));
        return WeightSample {
            w: w_at_2r + 1.5 * big_r * (r - 2.0 * big_r),
            d1: 1.5 * big_r,
            d2: 0.0,
            d3: 0.0,
            d4: 0.0,
        };
    }
    let tau = (r - big_r) / big_r;
    let (h, h1, h2, _) = smoothstep(tau);
    WeightSample {
        w: big_r * big_r * (0.5 + tau + int2(tau)),
        d1: big_r * (1.0 + int1(tau)),
        d2: 1.0 - h,
        d3: -h1 / big_r,
        d4: -h2 / (big_r * big_r),
    }
}

/// Ψ_R slope-space bridge coefficients, in scaled coordinates σ = r/R.
///
/// Ψ′(σ) on [1, 3] is a quintic Hermite piece from (2, slope 2, curv 0) to
/// (−d, 0, 0) on [1, σ₁], a constant −d plateau on [σ₁, σ₂], and a quintic
/// from (−d, 0, 0) to (0, 0, 0) on [σ₂, 3]. The depth d is fixed by
/// ∫₁³ Ψ′ dσ = −1, which makes Ψ(3) = 0; Ψ″ ≤ 2 and Ψ ≥ 0 are then
/// verified nodewise at construction.
const PSI_S1: f64 = 1.4;
const PSI_S2: f64 = 1.5;
/// Initial curvature of the Psi' bridge (t-units factor), pulling the
/// slope of Psi' below 2 immediately after the junction.
const PSI_C0_FACTOR: f64 = -8.0;

fn psi_depth() -> f64 {
    // Areas of the three Ψ′ pieces as linear functions of d (Hermite basis
    // integrals: ∫H_v = 1/2, ∫H_s = 1/10 over a unit span).
    let w1 = PSI_S1 - 1.0;
    let w3 = 3.0 - PSI_S2;
    // piece 1: value 2 → −d, slope (t-units) 2·w1, curvature K·w1²
    let c0 = PSI_C0_FACTOR * w1 * w1;
    let a1_const = w1 * (2.0 * 0.5 + (2.0 * w1) * 0.1 + c0 / 120.0);
    let a1_d = -w1 * 0.5;
    let a2_d = -(PSI_S2 - PSI_S1);
    let a3_d = -w3 * 0.5;
    // total: a1_const + d·(a1_d + a2_d + a3_d) = −1
    (-1.0 - a1_const) / (a1_d + a2_d + a3_d)
}

/// Quintic Hermite basis on [0,1] for (value, slope, curvature) data at
/// both ends; returns (value, d1, d2, d3) in the unit coordinate.
fn hermite5(t: f64, v0: f64, s0: f64, c0: f64, v1: f64, s1: f64, c1: f64) -> (f64, f64, f64, f64) {
    // Basis polynomials H_{v0}, H_{s0}, H_{c0}, H_{v1}, H_{s1}, H_{c1}.
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let hv0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let hs0 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let hc0 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    let hv1 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    let hs1 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let hc1 = 0.5 * t3 - t4 + 0.5 * t5;
    let v = v0 * hv0 + s0 * hs0 + c0 * hc0 + v1 * hv1 + s1 * hs1 + c1 * hc1;

    let dv0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
    let ds0 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
    let dc0 = t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
    let dv1 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
    let ds1 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
    let dc1 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;
    let d1 = v0 * dv0 + s0 * ds0 + c0 * dc0 + v1 * dv1 + s1 * ds1 + c1 * dc1;

    let ddv0 = -60.0 * t + 180.0 * t2 - 120.0 * t3;
    let dds0 = -36.0 * t + 96.0 * t2 - 60.0 * t3;
    let ddc0 = 1.0 - 9.0 * t + 18.0 * t2 - 10.0 * t3;
    let ddv1 = 60.0 * t - 180.0 * t2 + 120.0 * t3;
    let dds1 = -24.0 * t + 84.0 * t2 - 60.0 * t3;
    let ddc1 = 3.0 * t - 12.0 * t2 + 10.0 * t3;
    let d2 = v0 * ddv0 + s0 * dds0 + c0 * ddc0 + v1 * ddv1 + s1 * dds1 + c1 * ddc1;

    let dddv0 = -60.0 + 360.0 * t - 360.0 * t2;
    let ddds0 = -36.0 + 192.0 * t - 180.0 * t2;
    let dddc0 = -9.0 + 36.0 * t - 30.0 * t2;
    let dddv1 = 60.0 - 360.0 * t + 360.0 * t2;
    let ddds1 = -24.0 + 168.0 * t - 180.0 * t2;
    let dddc1 = 3.0 - 24.0 * t + 30.0 * t2;
    let d3 = v0 * dddv0 + s0 * ddds0 + c0 * dddc0 + v1 * dddv1 + s1 * ddds1 + c1 * dddc1;

    (v, d1, d2, d3)
}

/// Ψ′ and its σ-derivatives on the bridge, σ ∈ [1, 3].
fn psi_slope(sigma: f64, d: f64) -> (f64, f64, f64, f64) {
    if sigma <= PSI_S1 {
        let w1 = PSI_S1 - 1.0;
        let t = (sigma - 1.0) / w1;
        let (v, d1, d2, d3) = hermite5(t, 2.0, 2.0 * w1, PSI_C0_FACTOR * w1 * w1, -d, 0.0, 0.0);
        (v, d1 / w1, d2 / (w1 * w1), d3 / (w1 * w1 * w1))
    } else if sigma <= PSI_S2 {
        (-d, 0.0, 0.0, 0.0)
    } else {
        let w3 = 3.0 - PSI_S2;
        let t = (sigma - PSI_S2) / w3;
        let (v, d1, d2, d3) = hermite5(t, -d, 0.0, 0.0, 0.0, 0.0, 0.0);
        (v, d1 / w3, d2 / (w3 * w3), d3 / (w3 * w3 * w3))
    }
}

/// ∫₁^σ Ψ′ dσ′ on the bridge, piecewise closed form via quintic integrals.
fn psi_slope_integral(sigma: f64, d: f64) -> f64 {
    let int_piece = |t: f64, w: f64, v0: f64, s0: f64, c0: f64, v1: f64| -> f64 {
        // ∫₀^t of the quintic with data (v0, s0, c0) → (v1, 0, 0), in
        // unit coordinates, times w (the σ-width of the piece).
        // Antiderivative of each basis polynomial evaluated at t.
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let t5 = t4 * t;
        let t6 = t5 * t;
        let ihv0 = t - 2.5 * t4 + 3.0 * t5 - t6;
        let ihs0 = 0.5 * t2 - 1.5 * t4 + 1.6 * t5 - 0.5 * t6;
        let ihc0 = t3 / 6.0 - 0.375 * t4 + 0.3 * t5 - t6 / 12.0;
        let ihv1 = 2.5 * t4 - 3.0 * t5 + t6;
        w * (v0 * ihv0 + s0 * ihs0 + c0 * ihc0 + v1 * ihv1)
    };
    let w1 = PSI_S1 - 1.0;
    let w3 = 3.0 - PSI_S2;
    let piece1 = |t: f64| int_piece(t, w1, 2.0, 2.0 * w1, PSI_C0_FACTOR * w1 * w1, -d);
    let piece3 = |t: f64| int_piece(t, w3, -d, 0.0, 0.0, 0.0);
    if sigma <= PSI_S1 {
        piece1((sigma - 1.0) / w1)
    } else if sigma <= PSI_S2 {
        piece1(1.0) + (sigma - PSI_S1) * (-d)
    } else {
        piece1(1.0) + (PSI_S2 - PSI_S1) * (-d) + piece3((sigma - PSI_S2) / w3)
    }
}

/// Ψ_R(r) = R²Ψ(r/R): exactly r² inside R, exactly 0 beyond 3R.
fn psi_sample(radius: f64, r: f64) -> WeightSample {
    let big_r = radius;
    if r <= big_r {
        return WeightSample {
            w: r * r,
            d1: 2.0 * r,
            d2: 2.0,
            d3: 0.0,
            d4: 0.0,
        };
    }
    if r >= 3.0 * big_r {
        return WeightSample {
            w: 0.0,
            d1: 0.0,
            d2: 0.0,
            d3: 0.0,
            d4: 0.0,
        };
    }
    let d = psi_depth();
    let sigma = r / big_r;
    let (p, p1, p2, p3) = psi_slope(sigma, d);
    let psi_val = 1.0 + psi_slope_integral(sigma, d);
    WeightSample {
        w: big_r * big_r * psi_val,
        d1: big_r * p,
        d2: p1,
        d3: p2 / big_r,
        d4: p3 / (big_r * big_r),
    }
}
