//! Decision logic for the scattering / blow-up dichotomy: given
//! (u₀, V, p) and the ground state, check which branch's hypotheses hold
//! and emit the predicted long-time behaviour.
//!
//! Verdicts are claims about hypotheses, never about the simulation; the
//! evolution module tests them independently. Branch conditions:
//!
//! * Scattering: me < 1, grad < 1, V ≥ 0, x·∇V ≤ 0, V ∈ 𝒦₀∩L^{3/2},
//!   x·∇V ∈ L^{3/2} (radial data and potential are ambient here).
//! * Blow-up or grow-up: me < 1, h > 1, V ≥ 0, 2V + x·∇V ≥ 0 and
//!   V ∈ 𝒦₀∩L^{3/2} or V ∈ L^σ for some σ > 3/2; upgraded to blow-up
//!   when x·∇V ≥ 0 and either the data/potential are radial with
//!   V ∈ L^σ, or the data has finite variance.
//! * Mass-critical branch (p = 7/3): E_V[u₀] < 0 replaces the
//!   mass–energy condition; same potential class as the blow-up branch.
//!
//! When the scattering thresholds hold but a V-side integrability
//! condition fails, the verdict downgrades to `GlobalBounded`: the
//! uniform-bound conclusion needs only V ≥ 0 and the two thresholds.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::Error;
use crate::functionals::{snapshot, threshold_products, FunctionalSnapshot, ThresholdRatios};
use crate::grid::{integrate3d, RadialField};
use crate::groundstate::GroundState;
use crate::potentials::{analyze, Potential, PotentialReport};
use crate::Result;

/// Default Lebesgue exponent for the "V ∈ L^σ, σ > 3/2" alternative.
pub const DEFAULT_SIGMA: f64 = 2.0;

/// Predicted long-time behaviour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Scatters,
    /// Thresholds on the scattering side; only V-side integrability
    /// conditions failed, so the uniform H¹ bound stands without the
    /// scattering conclusion.
    GlobalBounded,
    BlowUpOrGrowUp,
    BlowUp,
    /// Mass-critical branch (p = 7/3, E_V[u₀] < 0), upgraded to blow-up.
    NegativeEnergyBlowUp,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Scatters => "Scatters",
            Verdict::GlobalBounded => "GlobalBounded",
            Verdict::BlowUpOrGrowUp => "BlowUpOrGrowUp",
            Verdict::BlowUp => "BlowUp",
            Verdict::NegativeEnergyBlowUp => "NegativeEnergyBlowUp",
            Verdict::Indeterminate => "Indeterminate",
        }
    }
}

/// One checked hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub condition: String,
    pub value: String,
    pub satisfied: bool,
}

/// Everything the classifier computed for a (u₀, V, p) triple.
#[derive(Debug, Clone)]
pub struct ThresholdReport {
    pub snapshot: FunctionalSnapshot,
    pub ratios: ThresholdRatios,
    pub potential: PotentialReport,
    pub data_radial: bool,
    pub finite_variance: bool,
    pub verdict: Verdict,
    pub hypothesis_trace: Vec<Hypothesis>,
    /// Qualifier on all sign conditions: they are verified by sampling on
    /// the truncated domain, not proven symbolically.
    pub provenance: String,
}

fn hyp(trace: &mut Vec<Hypothesis>, condition: &str, value: String, satisfied: bool) -> bool {
    trace.push(Hypothesis {
        condition: condition.to_string(),
        value,
        satisfied,
    });
    satisfied
}

fn fmt_ratio(r: &crate::functionals::ThresholdRatio) -> String {
    match r {
        crate::functionals::ThresholdRatio::Value(v) => format!("{v:.6}"),
        crate::functionals::ThresholdRatio::BelowNegativeEnergy => {
            "below (negative energy)".to_string()
        }
    }
}

/// Dyadic-tail probe for x·u₀ ∈ L²: the outermost dyadic shell of
/// ∫ r²|u₀|² r² dr must sit well below the next one in.
fn finite_variance_probe(u0: &RadialField) -> Result<bool> {
    let grid = u0.grid();
    let abs2 = u0.abs_sq();
    let shell = |lo: f64, hi: f64| -> Result<f64> {
        let samples: Vec<f64> = grid
            .radii()
            .zip(&abs2)
            .map(|(r, a)| if r > lo && r <= hi { r * r * a } else { 0.0 })
            .collect();
        integrate3d(grid, &samples)
    };
    let r_max = grid.r_max();
    let outer = shell(r_max / 2.0, r_max)?;
    let inner = shell(r_max / 4.0, r_max / 2.0)?;
    let all: Vec<f64> = grid.radii().zip(&abs2).map(|(r, a)| r * r * a).collect();
    let total = integrate3d(grid, &all)?;
    Ok(outer <= 0.5 * inner || outer <= 1e-10 * total)
}

/// Classify with the default σ.
pub fn classify(
    u0: &RadialField,
    v: &Potential,
    p: f64,
    gs: &GroundState,
) -> Result<ThresholdReport> {
    classify_with_sigma(u0, v, p, gs, DEFAULT_SIGMA)
}

pub fn classify_with_sigma(
    u0: &RadialField,
    v: &Potential,
    p: f64,
    gs: &GroundState,
    sigma: f64,
) -> Result<ThresholdReport> {
    if (gs.p - p).abs() > 1e-12 {
        return Err(Error::Invalid(
            "ground state exponent does not match the requested p".into(),
        ));
    }
    let grid = u0.grid();
    let abs2 = u0.abs_sq();
    let mass = integrate3d(grid, &abs2)?;
    if mass == 0.0 {
        return Err(Error::Invalid("cannot classify the zero field".into()));
    }
    // Refuse under-resolved data: the mass quadrature must be stable under
    // removing every second node.
    if let Some(coarse) = grid.coarsen() {
        let coarse_samples: Vec<f64> = (0..coarse.n()).map(|j| abs2[2 * j + 1]).collect();
        let coarse_mass = integrate3d(&coarse, &coarse_samples)?;
        if (coarse_mass - mass).abs() / mass > 1e-4 {
            return Err(Error::Invalid(format!(
                "refusing to classify: mass quadrature unstable under refinement ({:.3e} relative)",
                (coarse_mass - mass).abs() / mass
            )));
        }
    }

    let snap = snapshot(u0, v, p, 0.0)?;
    let ratios = threshold_products(&snap, gs);
    let potential = analyze(grid, v, sigma)?;
    let finite_variance = finite_variance_probe(u0)?;
    let mass_critical = (p - 7.0 / 3.0).abs() < 1e-12;

    // V ≥ 0 forces ‖𝓗^{1/2}u‖ ≥ ‖∇u‖; the reverse ordering signals an
    // inconsistent report.
    if potential.nonneg && ratios.h < ratios.grad - 1e-9 * ratios.grad.max(1.0) {
        return Err(Error::Invalid(
            "h_ratio < grad_ratio contradicts V >= 0".into(),
        ));
    }

    let mut trace: Vec<Hypothesis> = Vec::new();
    let kato_class = potential.kato_norm.is_finite() && potential.l32_norm.is_finite();
    let lsigma_class = potential.lsigma.1.is_finite();
    let xgrad_l32_finite = potential.xgrad_v_l32.is_finite();

    let verdict = if mass_critical {
        // Mass-critical branch: E_V[u₀] < 0 replaces the threshold condition.
        let neg_energy = hyp(
            &mut trace,
            "E_V[u0] < 0 (mass-critical branch)",
            format!("{:.6}", snap.energy_v),
            snap.energy_v < 0.0,
        );
        let nonneg = hyp(
            &mut trace,
            "V >= 0",
            potential.nonneg.to_string(),
            potential.nonneg,
        );
        let cond2v = hyp(
            &mut trace,
            "2V + x·grad V >= 0",
            potential.condition_2v.to_string(),
            potential.condition_2v,
        );
        let class = hyp(
            &mut trace,
            "V in K0 ∩ L^{3/2} or L^sigma",
            format!(
                "kato={:.4e}, l32={:.4e}, lsigma={:.4e}",
                potential.kato_norm, potential.l32_norm, potential.lsigma.1
            ),
            kato_class || lsigma_class,
        );
        if neg_energy && nonneg && cond2v && class {
            let upgrade_sign = hyp(
                &mut trace,
                "x·grad V >= 0 (blow-up upgrade)",
                potential.xgrad_v_nonneg.to_string(),
                potential.xgrad_v_nonneg,
            );
            let route_i = hyp(
                &mut trace,
                "(i) radial data and V in L^sigma",
                lsigma_class.to_string(),
                lsigma_class,
            );
            let route_ii = hyp(
                &mut trace,
                "(ii) finite variance and V class",
                finite_variance.to_string(),
                finite_variance && (kato_class || lsigma_class),
            );
            if upgrade_sign && (route_i || route_ii) {
                Verdict::NegativeEnergyBlowUp
            } else {
                Verdict::BlowUpOrGrowUp
            }
        } else {
            Verdict::Indeterminate
        }
    } else {
        let me_below = hyp(
            &mut trace,
            "M^{1-sc} E_V^{sc} below the ground-state line",
            fmt_ratio(&ratios.me),
            ratios.me.is_below(),
        );
        let nonneg = hyp(
            &mut trace,
            "V >= 0",
            potential.nonneg.to_string(),
            potential.nonneg,
        );
        let grad_below = hyp(
            &mut trace,
            "gradient threshold: grad_ratio < 1",
            format!("{:.6}", ratios.grad),
            ratios.grad < 1.0,
        );
        if me_below && nonneg && grad_below {
            // Scattering branch V-conditions.
            let kato = hyp(
                &mut trace,
                "V in K0 ∩ L^{3/2}",
                format!(
                    "kato={:.4e}, l32={:.4e}",
                    potential.kato_norm, potential.l32_norm
                ),
                kato_class,
            );
            let sign = hyp(
                &mut trace,
                "x·grad V <= 0",
                potential.xgrad_v_nonpos.to_string(),
                potential.xgrad_v_nonpos,
            );
            let xg32 = hyp(
                &mut trace,
                "x·grad V in L^{3/2}",
                format!("{:.4e}", potential.xgrad_v_l32),
                xgrad_l32_finite,
            );
            if kato && sign && xg32 {
                Verdict::Scatters
            } else {
                Verdict::GlobalBounded
            }
        } else if me_below {
            let h_above = hyp(
                &mut trace,
                "H^{1/2} threshold: h_ratio > 1",
                format!("{:.6}", ratios.h),
                ratios.h > 1.0,
            );
            let cond2v = hyp(
                &mut trace,
                "2V + x·grad V >= 0",
                potential.condition_2v.to_string(),
                potential.condition_2v,
            );
            let class = hyp(
                &mut trace,
                "V in K0 ∩ L^{3/2} or L^sigma",
                format!(
                    "kato={:.4e}, l32={:.4e}, lsigma={:.4e}",
                    potential.kato_norm, potential.l32_norm, potential.lsigma.1
                ),
                kato_class || lsigma_class,
            );
            if h_above && nonneg && cond2v && class {
                let upgrade_sign = hyp(
                    &mut trace,
                    "x·grad V >= 0 (blow-up upgrade)",
                    potential.xgrad_v_nonneg.to_string(),
                    potential.xgrad_v_nonneg,
                );
                let route_i = hyp(
                    &mut trace,
                    "(i) radial data and V in L^sigma",
                    lsigma_class.to_string(),
                    lsigma_class,
                );
                let route_ii = hyp(
                    &mut trace,
                    "(ii) finite variance and V class",
                    finite_variance.to_string(),
                    finite_variance && (kato_class || lsigma_class),
                );
                if upgrade_sign && (route_i || route_ii) {
                    Verdict::BlowUp
                } else {
                    Verdict::BlowUpOrGrowUp
                }
            } else {
                Verdict::Indeterminate
            }
        } else {
            hyp(
                &mut trace,
                "data below the mass-energy line",
                fmt_ratio(&ratios.me),
                false,
            );
            Verdict::Indeterminate
        }
    };

    Ok(ThresholdReport {
        snapshot: snap,
        ratios,
        potential,
        data_radial: true,
        finite_variance,
        verdict,
        hypothesis_trace: trace,
        provenance: format!(
            "sign and norm conditions numerically verified on [0, {}]",
            grid.r_max()
        ),
    })
}
