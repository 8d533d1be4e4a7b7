//! Batch experiment driver: λ-sweeps along the λQ family crossed with
//! potential configurations, each cell classified and evolved, outcomes
//! compared cell by cell. Per-cell failures are recorded, never fatal.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::classifier::{classify_with_sigma, Verdict, DEFAULT_SIGMA};
use crate::error::Error;
// In no_std builds these trait methods are the only float math there is;
// test and clippy drivers load std, whose inherent methods then shadow
// them and mark the import unused.
use crate::evolution::{evolve, scattering_diagnostic, EvolveConfig, Terminal};
use crate::functionals::ThresholdRatio;
use crate::grid::{RadialField, RadialGrid};
use crate::groundstate::{solve_ground_state_on, GroundState, DEFAULT_GS_N};
#[allow(unused_imports)]
use crate::math::FloatExt;
use crate::potentials::Potential;
use crate::Result;

/// Sweep description: the cell list is the cartesian product
/// p × λ × potentials.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub p_values: Vec<f64>,
    pub lambdas: Vec<f64>,
    /// Empty means a single V = 0 column.
    pub potentials: Vec<Potential>,
    pub evolve: EvolveConfig,
    /// Grid for data construction and evolution.
    pub grid: Arc<RadialGrid>,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        if self.p_values.is_empty() || self.lambdas.is_empty() {
            return Err(Error::Invalid(
                "sweep needs nonempty p and lambda grids".into(),
            ));
        }
        if self.lambdas.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::Invalid("lambda grid must be positive".into()));
        }
        self.evolve.validate()
    }

    /// The potentials column with the V = 0 default applied.
    pub fn potential_cells(&self) -> Vec<Potential> {
        if self.potentials.is_empty() {
            alloc::vec![Potential::Zero]
        } else {
            self.potentials.clone()
        }
    }
}

/// Agreement assessment of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    /// Verdict and simulated outcome point the same way.
    Match,
    Mismatch,
    /// |me_ratio − 1| < 0.05: the asymptotic theorems are not expected to
    /// bind at a finite desk-scale horizon.
    NearThreshold,
    /// Verdict makes no claim (Indeterminate) or diagnostics inconclusive.
    Inconclusive,
}

impl Agreement {
    pub fn as_str(&self) -> &'static str {
        match self {
            Agreement::Match => "match",
            Agreement::Mismatch => "mismatch",
            Agreement::NearThreshold => "near-threshold",
            Agreement::Inconclusive => "inconclusive",
        }
    }
}

/// One row of the agreement table.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub p: f64,
    pub lambda: f64,
    pub potential_id: String,
    pub me_ratio: ThresholdRatio,
    pub grad_ratio: f64,
    pub h_ratio: f64,
    pub verdict: Verdict,
    pub terminal: Option<Terminal>,
    pub evac_pass: Option<bool>,
    pub agreement: Agreement,
    pub error: Option<String>,
}

/// The collected table plus the ground states that were solved for it.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

/// Run one cell. Exposed so callers can parallelize cells themselves;
/// cells share nothing but the immutable plan and ground state.
pub fn run_cell(
    plan: &SweepPlan,
    gs: &GroundState,
    p: f64,
    lambda: f64,
    v: &Potential,
) -> SweepRow {
    let potential_id = v.to_string();
    let base = SweepRow {
        p,
        lambda,
        potential_id,
        me_ratio: ThresholdRatio::Value(f64::NAN),
        grad_ratio: f64::NAN,
        h_ratio: f64::NAN,
        verdict: Verdict::Indeterminate,
        terminal: None,
        evac_pass: None,
        agreement: Agreement::Inconclusive,
        error: None,
    };
    match cell_inner(plan, gs, p, lambda, v) {
        Ok(row) => row,
        Err(e) => SweepRow {
            error: Some(format!("{e}")),
            ..base
        },
    }
}

fn cell_inner(
    plan: &SweepPlan,
    gs: &GroundState,
    p: f64,
    lambda: f64,
    v: &Potential,
) -> Result<SweepRow> {
    let profile = gs.profile_on(&plan.grid)?;
    let u0: RadialField = profile.scaled(lambda);
    let report = classify_with_sigma(&u0, v, p, gs, DEFAULT_SIGMA)?;
    let trace = evolve(&u0, v, p, &plan.evolve)?;
    let evac = match trace.terminal {
        Terminal::CompletedHorizon => scattering_diagnostic(
            &trace,
            plan.evolve.r_probe,
            (0.1 * report.snapshot.mass).sqrt(),
        )
        .ok()
        .map(|d| d.pass),
        _ => None,
    };
    let near_threshold = match report.ratios.me {
        ThresholdRatio::Value(me) => (me - 1.0).abs() < 0.05,
        ThresholdRatio::BelowNegativeEnergy => false,
    };
    let agreement = if near_threshold {
        Agreement::NearThreshold
    } else {
        match (report.verdict, trace.terminal) {
            (Verdict::Indeterminate, _) => Agreement::Inconclusive,
            (Verdict::Scatters | Verdict::GlobalBounded, Terminal::CompletedHorizon) => {
                match evac {
                    Some(true) => Agreement::Match,
                    Some(false) => Agreement::Mismatch,
                    None => Agreement::Inconclusive,
                }
            }
            (Verdict::Scatters | Verdict::GlobalBounded, _) => Agreement::Mismatch,
            (
                Verdict::BlowUp | Verdict::BlowUpOrGrowUp | Verdict::NegativeEnergyBlowUp,
                Terminal::BlowUpDetected { .. },
            ) => Agreement::Match,
            (Verdict::BlowUp | Verdict::BlowUpOrGrowUp | Verdict::NegativeEnergyBlowUp, _) => {
                Agreement::Mismatch
            }
        }
    };
    Ok(SweepRow {
        p,
        lambda,
        potential_id: v.to_string(),
        me_ratio: report.ratios.me,
        grad_ratio: report.ratios.grad,
        h_ratio: report.ratios.h,
        verdict: report.verdict,
        terminal: Some(trace.terminal),
        evac_pass: evac,
        agreement,
        error: None,
    })
}

/// Ground states for the distinct p values of a plan, solved on the fine
/// default grid that decimates onto the plan grid.
pub fn ground_states_for(plan: &SweepPlan) -> Result<Vec<(f64, GroundState)>> {
    let refine = (DEFAULT_GS_N + 1) / (plan.grid.n() + 1);
    let n_gs = if refine >= 1 && (DEFAULT_GS_N + 1).is_multiple_of(plan.grid.n() + 1) {
        DEFAULT_GS_N
    } else {
        16 * (plan.grid.n() + 1) - 1
    };
    let gs_grid = Arc::new(RadialGrid::new(plan.grid.r_max(), n_gs)?);
    let mut out: Vec<(f64, GroundState)> = Vec::new();
    for &p in &plan.p_values {
        if !out.iter().any(|(q, _)| (*q - p).abs() < 1e-15) {
            out.push((p, solve_ground_state_on(&gs_grid, p, 1e-12)?));
        }
    }
    Ok(out)
}

/// Sequential sweep: one row per (p, λ, V) cell, in plan order.
pub fn run_sweep(plan: &SweepPlan) -> Result<SweepTable> {
    plan.validate()?;
    let ground_states = ground_states_for(plan)?;
    let potentials = plan.potential_cells();
    let mut rows = Vec::new();
    for &p in &plan.p_values {
        let gs = &ground_states
            .iter()
            .find(|(q, _)| (*q - p).abs() < 1e-15)
            .expect("ground state solved above")
            .1;
        for &lambda in &plan.lambdas {
            for v in &potentials {
                rows.push(run_cell(plan, gs, p, lambda, v));
            }
        }
    }
    Ok(SweepTable { rows })
}
