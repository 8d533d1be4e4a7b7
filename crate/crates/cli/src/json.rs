//! JSON schemas for potentials, initial data, reports and plans, plus the
//! conversions into core types. Every document carries a schema_version.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use nlslab_core::classifier::ThresholdReport;
use nlslab_core::evolution::{EvolveConfig, Terminal};
use nlslab_core::functionals::ThresholdRatio;
use nlslab_core::grid::{RadialField, RadialGrid};
use nlslab_core::groundstate::GroundState;
use nlslab_core::num_complex::Complex64;
use nlslab_core::potentials::{Potential, PotentialReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum PotentialSpecJson {
    Zero,
    GaussianBump {
        params: GaussianParams,
    },
    TruncatedInverseSquare {
        params: InverseSquareParams,
    },
    Table {
        r: Vec<f64>,
        v: Vec<f64>,
    },
    Scaled {
        c: f64,
        inner: Box<PotentialSpecJson>,
    },
    Sum {
        terms: Vec<PotentialSpecJson>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianParams {
    pub a: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InverseSquareParams {
    pub a: f64,
    pub r0: f64,
}

impl PotentialSpecJson {
    pub fn to_potential(&self) -> Potential {
        match self {
            PotentialSpecJson::Zero => Potential::Zero,
            PotentialSpecJson::GaussianBump { params } => Potential::GaussianBump {
                amp: params.a,
                sigma: params.sigma,
            },
            PotentialSpecJson::TruncatedInverseSquare { params } => Potential::InverseSquare {
                amp: params.a,
                r0: params.r0,
            },
            PotentialSpecJson::Table { r, v } => Potential::Table {
                r: r.clone(),
                v: v.clone(),
            },
            PotentialSpecJson::Scaled { c, inner } => Potential::Scaled {
                c: *c,
                inner: Box::new(inner.to_potential()),
            },
            PotentialSpecJson::Sum { terms } => {
                Potential::Sum(terms.iter().map(|t| t.to_potential()).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum InitialDataJson {
    #[serde(rename = "lambdaQ")]
    LambdaQ { lambda: f64 },
    #[serde(rename = "gaussian")]
    Gaussian { amp: f64, width: f64 },
    #[serde(rename = "table")]
    Table {
        r: Vec<f64>,
        re: Vec<f64>,
        #[serde(default)]
        im: Vec<f64>,
    },
}

impl InitialDataJson {
    /// Build the field on a grid; `gs` supplies the λQ profile.
    pub fn to_field(
        &self,
        grid: &Arc<RadialGrid>,
        gs: Option<&GroundState>,
    ) -> Result<RadialField, String> {
        match self {
            InitialDataJson::LambdaQ { lambda } => {
                let gs = gs.ok_or("lambdaQ data needs a ground state")?;
                let q = gs
                    .profile_on(grid)
                    .map_err(|e| format!("ground-state decimation: {e}"))?;
                Ok(q.scaled(*lambda))
            }
            InitialDataJson::Gaussian { amp, width } => {
                // rejects NaN as well
                #[allow(clippy::neg_cmp_op_on_partial_ord)]
                if !(*width > 0.0) {
                    return Err("gaussian width must be positive".into());
                }
                let (a, w) = (*amp, *width);
                Ok(RadialField::from_fn(grid.clone(), |r| {
                    Complex64::new(a * (-(r / w) * (r / w)).exp(), 0.0)
                }))
            }
            InitialDataJson::Table { r, re, im } => {
                if r.len() != re.len() || (!im.is_empty() && im.len() != re.len()) {
                    return Err("table data lists must have equal length".into());
                }
                let interp = |xs: &[f64], ys: &[f64], x: f64| -> f64 {
                    if ys.is_empty() || x <= xs[0] {
                        return *ys.first().unwrap_or(&0.0);
                    }
                    if x >= *xs.last().unwrap() {
                        return 0.0;
                    }
                    let k = xs.partition_point(|v| *v <= x) - 1;
                    let t = (x - xs[k]) / (xs[k + 1] - xs[k]);
                    ys[k] * (1.0 - t) + ys[k + 1] * t
                };
                Ok(RadialField::from_fn(grid.clone(), |rr| {
                    let re_v = interp(r, re, rr);
                    let im_v = if im.is_empty() {
                        0.0
                    } else {
                        interp(r, im, rr)
                    };
                    Complex64::new(re_v, im_v)
                }))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridJson {
    pub r_max: f64,
    pub n: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GroundStateSidecar {
    pub schema_version: u32,
    pub p: f64,
    pub grid: GridJson,
    pub mass: f64,
    pub grad_sq: f64,
    pub lp1: f64,
    pub energy0: f64,
    pub cgn: f64,
    pub s_c: f64,
    pub threshold_me: f64,
    pub threshold_grad: f64,
    pub peak: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PotentialReportJson {
    pub schema_version: u32,
    /// Divergent norms serialize as null.
    pub kato_norm: Option<f64>,
    pub kato_neg: f64,
    pub l32_norm: Option<f64>,
    pub sigma: f64,
    pub lsigma_norm: Option<f64>,
    pub nonneg: bool,
    pub xgrad_v_nonpos: bool,
    pub xgrad_v_nonneg: bool,
    pub condition_2v: bool,
    pub xgrad_v_l32: Option<f64>,
    pub kato_small: bool,
    pub truncation_radius: f64,
    pub warnings: Vec<String>,
}

fn finite_or_none(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl PotentialReportJson {
    pub fn from_report(r: &PotentialReport) -> Self {
        PotentialReportJson {
            schema_version: SCHEMA_VERSION,
            kato_norm: finite_or_none(r.kato_norm),
            kato_neg: r.kato_neg,
            l32_norm: finite_or_none(r.l32_norm),
            sigma: r.lsigma.0,
            lsigma_norm: finite_or_none(r.lsigma.1),
            nonneg: r.nonneg,
            xgrad_v_nonpos: r.xgrad_v_nonpos,
            xgrad_v_nonneg: r.xgrad_v_nonneg,
            condition_2v: r.condition_2v,
            xgrad_v_l32: finite_or_none(r.xgrad_v_l32),
            kato_small: r.kato_small,
            truncation_radius: r.truncation_radius,
            warnings: r.warnings.clone(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatioJson {
    Value(f64),
    Sentinel(String),
}

impl RatioJson {
    pub fn from_ratio(r: &ThresholdRatio) -> Self {
        match r {
            ThresholdRatio::Value(v) => RatioJson::Value(*v),
            ThresholdRatio::BelowNegativeEnergy => {
                RatioJson::Sentinel("below (negative energy)".into())
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SnapshotJson {
    pub t: f64,
    pub mass: f64,
    pub grad_sq: f64,
    pub pot_term: f64,
    pub h_half_sq: f64,
    pub lp1: f64,
    pub energy_v: f64,
    pub k_functional: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HypothesisJson {
    pub condition: String,
    pub value: String,
    pub satisfied: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ThresholdReportJson {
    pub schema_version: u32,
    pub verdict: String,
    pub me_ratio: RatioJson,
    pub grad_ratio: f64,
    pub h_ratio: f64,
    pub snapshot: SnapshotJson,
    pub potential: PotentialReportJson,
    pub data_radial: bool,
    pub finite_variance: bool,
    pub hypothesis_trace: Vec<HypothesisJson>,
    pub provenance: String,
}

impl ThresholdReportJson {
    pub fn from_report(r: &ThresholdReport) -> Self {
        ThresholdReportJson {
            schema_version: SCHEMA_VERSION,
            verdict: r.verdict.as_str().to_string(),
            me_ratio: RatioJson::from_ratio(&r.ratios.me),
            grad_ratio: r.ratios.grad,
            h_ratio: r.ratios.h,
            snapshot: SnapshotJson {
                t: r.snapshot.t,
                mass: r.snapshot.mass,
                grad_sq: r.snapshot.grad_sq,
                pot_term: r.snapshot.pot_term,
                h_half_sq: r.snapshot.h_half_sq,
                lp1: r.snapshot.lp1,
                energy_v: r.snapshot.energy_v,
                k_functional: r.snapshot.k_functional,
            },
            potential: PotentialReportJson::from_report(&r.potential),
            data_radial: r.data_radial,
            finite_variance: r.finite_variance,
            hypothesis_trace: r
                .hypothesis_trace
                .iter()
                .map(|h| HypothesisJson {
                    condition: h.condition.clone(),
                    value: h.value.clone(),
                    satisfied: h.satisfied,
                })
                .collect(),
            provenance: r.provenance.clone(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EvolveConfigJson {
    #[serde(default = "default_dt0")]
    pub dt0: f64,
    pub t_end: f64,
    #[serde(default = "default_store_every")]
    pub store_every: usize,
    #[serde(default = "default_blowup_factor")]
    pub blowup_factor: f64,
    #[serde(default = "default_dt_floor")]
    pub dt_floor: f64,
    #[serde(default = "default_r_probe")]
    pub r_probe: f64,
    #[serde(default)]
    pub save_fields_every: Option<usize>,
}

fn default_dt0() -> f64 {
    2e-4
}
fn default_store_every() -> usize {
    10
}
fn default_blowup_factor() -> f64 {
    1e3
}
fn default_dt_floor() -> f64 {
    1e-10
}
fn default_r_probe() -> f64 {
    10.0
}

impl EvolveConfigJson {
    pub fn to_config(&self) -> EvolveConfig {
        EvolveConfig {
            dt0: self.dt0,
            t_end: self.t_end,
            store_every: self.store_every,
            blowup_factor: self.blowup_factor,
            dt_floor: self.dt_floor,
            r_probe: self.r_probe,
            store_fields_every: self.save_fields_every,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepPlanJson {
    pub p: Vec<f64>,
    pub lambda: Vec<f64>,
    #[serde(default)]
    pub potentials: Vec<PotentialSpecJson>,
    pub evolve: EvolveConfigJson,
    #[serde(default)]
    pub grid: Option<GridJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub enum TerminalJson {
    CompletedHorizon,
    BlowUpDetected { t: f64 },
    Underresolved { t: f64 },
}

impl TerminalJson {
    pub fn from_terminal(t: &Terminal) -> Self {
        match t {
            Terminal::CompletedHorizon => TerminalJson::CompletedHorizon,
            Terminal::BlowUpDetected { t } => TerminalJson::BlowUpDetected { t: *t },
            Terminal::Underresolved { t } => TerminalJson::Underresolved { t: *t },
        }
    }

    pub fn as_label(&self) -> String {
        match self {
            TerminalJson::CompletedHorizon => "CompletedHorizon".into(),
            TerminalJson::BlowUpDetected { t } => format!("BlowUpDetected(t={t:.6})"),
            TerminalJson::Underresolved { t } => format!("Underresolved(t={t:.6})"),
        }
    }
}

/// Sidecar written next to a trace CSV: everything the virial subcommand
/// needs to re-evaluate weighted series from the stored fields.
#[derive(Debug, Serialize, Deserialize)]
pub struct TraceSummaryJson {
    pub schema_version: u32,
    pub p: f64,
    pub grid: GridJson,
    pub potential: PotentialSpecJson,
    pub terminal: TerminalJson,
    pub mass_drift: f64,
    pub energy_drift: f64,
    pub wall_contamination_t: Option<f64>,
    pub r_probe: f64,
    pub snapshots: usize,
    pub stored_fields: usize,
    pub fields_file: String,
}
