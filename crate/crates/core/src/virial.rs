//! Virial quantities I, I′, I″ for a weight ω and their consistency
//! against finite differences of the simulated flow.
//!
//! For radial u the tensor term 4ΣRe∫ω_{ij}u_iū_j reduces exactly to
//! 4∫ω″|u′|² (the off-diagonal parts cancel), so the radial second
//! variation reads
//!
//! ```text
//!     I″ = 4∫ω″|u′|² − 2(p−1)/(p+1)·∫(ω″ + 2ω′/r)|u|^{p+1}
//!          − ∫(ω⁗ + 4ω‴/r)|u|² − 2∫(ω′/r)(x·∇V)|u|².
//! ```
//!
//! I′ and I″ are always evaluated from these formulas, never by
//! differentiating the discrete I: measuring how well the identities hold
//! along the flow is the point.

use alloc::vec::Vec;

use crate::error::Error;
// In no_std builds these trait methods are the only float math there is;
// test and clippy drivers load std, whose inherent methods then shadow
// them and mark the import unused.
use crate::grid::{integrate3d, radial_derivative, RadialField};
#[allow(unused_imports)]
use crate::math::FloatExt;
use crate::potentials::Potential;
use crate::weights::{Weight, WeightKind};
use crate::Result;

/// One evaluation of the virial triple plus the magnitude scales of the
/// constituent terms (used to normalize residuals of near-cancellations).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirialPoint {
    pub i: f64,
    pub i1: f64,
    pub i2: f64,
    /// Σ of |term| entering I′.
    pub i1_scale: f64,
    /// Σ of |term| entering I″.
    pub i2_scale: f64,
    /// Prop.-2.13 form 8‖∇u‖² − 12(p−1)/(p+1)‖u‖^{p+1}_{p+1} − 4∫(x·∇V)|u|²,
    /// recorded only for the unweighted |x|² weight.
    pub i2_unweighted: Option<f64>,
}

/// Evaluate (I, I′, I″) of u for a weight sharing the grid.
pub fn virial_eval(u: &RadialField, v: &Potential, p: f64, w: &Weight) -> Result<VirialPoint> {
    let grid = u.grid();
    if w.w.len() != grid.n() {
        return Err(Error::Invalid(
            "weight samples do not match the field grid".into(),
        ));
    }
    let abs2 = u.abs_sq();
    let du = radial_derivative(u);

    let i = integrate3d(grid, &weighted(&abs2, &w.w))?;

    // I′ = 2 Im ∫ ω′ ū u′ dx
    let mut i1_samples = Vec::with_capacity(grid.n());
    let mut i1_abs = Vec::with_capacity(grid.n());
    for ((uv, duv), d1) in u.values().iter().zip(&du).zip(&w.d1) {
        let cross = (uv.conj() * duv).im;
        i1_samples.push(2.0 * d1 * cross);
        i1_abs.push(2.0 * d1.abs() * uv.norm() * duv.norm());
    }
    let i1 = integrate3d(grid, &i1_samples)?;
    let i1_scale = integrate3d(grid, &i1_abs)?;

    // I″ term by term.
    let n = grid.n();
    let mut grad_term = Vec::with_capacity(n);
    let mut lp1_term = Vec::with_capacity(n);
    let mut bilap_term = Vec::with_capacity(n);
    let mut pot_term = Vec::with_capacity(n);
    for (j, r) in grid.radii().enumerate() {
        let du2 = du[j].norm_sqr();
        let up1 = abs2[j].powf((p + 1.0) / 2.0);
        grad_term.push(4.0 * w.d2[j] * du2);
        lp1_term.push((w.d2[j] + 2.0 * w.d1[j] / r) * up1);
        bilap_term.push((w.d4[j] + 4.0 * w.d3[j] / r) * abs2[j]);
        pot_term.push(2.0 * (w.d1[j] / r) * v.x_grad(r) * abs2[j]);
    }
    let t_grad = integrate3d(grid, &grad_term)?;
    let coef = 2.0 * (p - 1.0) / (p + 1.0);
    let t_lp1 = coef * integrate3d(grid, &lp1_term)?;
    let t_bilap = integrate3d(grid, &bilap_term)?;
    let t_pot = integrate3d(grid, &pot_term)?;
    let i2 = t_grad - t_lp1 - t_bilap - t_pot;
    let i2_scale = t_grad.abs() + t_lp1.abs() + t_bilap.abs() + t_pot.abs();

    let i2_unweighted = if w.kind == WeightKind::Unweighted {
        let grad_sq = integrate3d(grid, &du.iter().map(|d| d.norm_sqr()).collect::<Vec<_>>())?;
        let lp1 = integrate3d(
            grid,
            &abs2
                .iter()
                .map(|a| a.powf((p + 1.0) / 2.0))
                .collect::<Vec<_>>(),
        )?;
        let xgrad: Vec<f64> = grid
            .radii()
            .zip(&abs2)
            .map(|(r, a)| v.x_grad(r) * a)
            .collect();
        let pot = integrate3d(grid, &xgrad)?;
        Some(8.0 * grad_sq - 12.0 * (p - 1.0) / (p + 1.0) * lp1 - 4.0 * pot)
    } else {
        None
    };

    Ok(VirialPoint {
        i,
        i1,
        i2,
        i1_scale,
        i2_scale,
        i2_unweighted,
    })
}

fn weighted(samples: &[f64], w: &[f64]) -> Vec<f64> {
    samples.iter().zip(w).map(|(s, w)| s * w).collect()
}

/// Virial triple along a trajectory.
#[derive(Debug, Clone)]
pub struct VirialSeries {
    pub kind: WeightKind,
    pub radius: f64,
    pub times: Vec<f64>,
    pub i: Vec<f64>,
    pub i1: Vec<f64>,
    pub i2: Vec<f64>,
    pub i1_scale: Vec<f64>,
    pub i2_scale: Vec<f64>,
    pub i2_unweighted: Vec<f64>,
}

impl VirialSeries {
    pub fn empty(kind: WeightKind, radius: f64) -> Self {
        VirialSeries {
            kind,
            radius,
            times: Vec::new(),
            i: Vec::new(),
            i1: Vec::new(),
            i2: Vec::new(),
            i1_scale: Vec::new(),
            i2_scale: Vec::new(),
            i2_unweighted: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, p: VirialPoint) {
        self.times.push(t);
        self.i.push(p.i);
        self.i1.push(p.i1);
        self.i2.push(p.i2);
        self.i1_scale.push(p.i1_scale);
        self.i2_scale.push(p.i2_scale);
        self.i2_unweighted.push(p.i2_unweighted.unwrap_or(f64::NAN));
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Re-evaluate the virial series of stored fields for an arbitrary weight.
pub fn series_for(
    fields: &[(f64, RadialField)],
    v: &Potential,
    p: f64,
    w: &Weight,
) -> Result<VirialSeries> {
    let mut series = VirialSeries::empty(w.kind, w.radius);
    for (t, u) in fields {
        series.push(*t, virial_eval(u, v, p, w)?);
    }
    Ok(series)
}

/// Central finite difference on possibly non-uniform times.
fn fd_nonuniform(times: &[f64], values: &[f64], i: usize) -> f64 {
    let hm = times[i] - times[i - 1];
    let hp = times[i + 1] - times[i];
    (hm * hm * values[i + 1] - hp * hp * values[i - 1] + (hp * hp - hm * hm) * values[i])
        / (hm * hp * (hm + hp))
}

/// Residuals of the virial identities measured along a trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirialResiduals {
    /// max_i |dI/dt − I′| / max(I′ term scale)
    pub first: f64,
    /// max_i |dI′/dt − I″| / max(I″ term scale)
    pub second: f64,
}

impl VirialResiduals {
    pub fn max(&self) -> f64 {
        self.first.max(self.second)
    }
}

/// Finite-difference the stored I against I′ and I′ against I″ over
/// interior snapshot times. Needs at least 64 points.
pub fn virial_consistency(series: &VirialSeries) -> Result<VirialResiduals> {
    let n = series.len();
    if n < 64 {
        return Err(Error::TooFewSnapshots { have: n, need: 64 });
    }
    let scale1 = series
        .i1_scale
        .iter()
        .fold(0.0_f64, |a, &b| a.max(b))
        .max(1e-300);
    let scale2 = series
        .i2_scale
        .iter()
        .fold(0.0_f64, |a, &b| a.max(b))
        .max(1e-300);
    let mut first = 0.0_f64;
    let mut second = 0.0_f64;
    for i in 1..n - 1 {
        let di = fd_nonuniform(&series.times, &series.i, i);
        let di1 = fd_nonuniform(&series.times, &series.i1, i);
        first = first.max((di - series.i1[i]).abs() / scale1);
        second = second.max((di1 - series.i2[i]).abs() / scale2);
    }
    Ok(VirialResiduals { first, second })
}

/// Re-export of the trace-level Morawetz average (the time integral lives
/// with the trace data in [`crate::evolution`]).
pub use crate::evolution::morawetz_average;
