//! Command-line surface.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use nlslab_core::grid::RadialGrid;
use nlslab_core::groundstate::DEFAULT_GS_N;

#[derive(Parser)]
#[command(
    name = "nlslab",
    version,
    about = "Numerical laboratory for the radial focusing NLS with potential"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Compute the ground state Q by shooting and write profile + norms.
    Groundstate(GroundstateArgs),
    /// Analyze a potential: Kato and Lebesgue norms, sign conditions.
    Kato(KatoArgs),
    /// Classify initial data against the scattering/blow-up thresholds.
    Classify(ClassifyArgs),
    /// Evolve radial data and record the monitored functionals.
    Evolve(EvolveArgs),
    /// Re-evaluate the virial series of a stored trace for a weight.
    Virial(VirialArgs),
    /// Run a (p, lambda, potential) sweep and tabulate agreement.
    Sweep(SweepArgs),
}

#[derive(clap::Args)]
pub struct GroundstateArgs {
    /// Nonlinearity exponent, 7/3 <= p < 5.
    #[arg(long)]
    pub p: f64,
    /// Bisection tolerance (bracket width relative to the amplitude).
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output CSV (columns r, Q); a JSON sidecar lands next to it.
    #[arg(long, default_value = "q.csv")]
    pub out: PathBuf,
    #[arg(long, default_value_t = RadialGrid::DEFAULT_R_MAX)]
    pub r_max: f64,
    #[arg(long, default_value_t = DEFAULT_GS_N)]
    pub n: usize,
}

#[derive(clap::Args)]
pub struct KatoArgs {
    /// Potential spec JSON ({"family": ...}).
    #[arg(long)]
    pub potential: PathBuf,
    /// Lebesgue exponent for the L^sigma report entry (> 3/2).
    #[arg(long, default_value_t = 2.0)]
    pub sigma: f64,
    /// Optional output path for the report JSON (also printed to stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = RadialGrid::DEFAULT_R_MAX)]
    pub r_max: f64,
    #[arg(long, default_value_t = RadialGrid::DEFAULT_N)]
    pub n: usize,
}

#[derive(clap::Args)]
pub struct ClassifyArgs {
    /// Initial data JSON ({"kind": "lambdaQ"|"gaussian"|"table", ...}).
    #[arg(long)]
    pub data: PathBuf,
    /// Potential spec JSON.
    #[arg(long)]
    pub potential: PathBuf,
    /// Nonlinearity exponent.
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub sigma: f64,
    /// Ground-state solve tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Optional output path for the report JSON (also printed to stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = RadialGrid::DEFAULT_R_MAX)]
    pub r_max: f64,
    #[arg(long, default_value_t = RadialGrid::DEFAULT_N)]
    pub n: usize,
}

#[derive(clap::Args)]
pub struct EvolveArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub potential: PathBuf,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub t_end: f64,
    /// Trace CSV path; .summary.json and .fields.bin sidecars land next
    /// to it.
    #[arg(long, default_value = "trace.csv")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 2e-4)]
    pub dt0: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub dt_floor: f64,
    /// Snapshot cadence in steps.
    #[arg(long, default_value_t = 10)]
    pub store_every: usize,
    /// Gradient-growth multiple that declares blow-up.
    #[arg(long, default_value_t = 1e3)]
    pub blowup_factor: f64,
    /// Radius of the localized-mass diagnostic.
    #[arg(long, default_value_t = 10.0)]
    pub r_probe: f64,
    /// Store full fields every N snapshots (for the virial subcommand).
    #[arg(long, default_value_t = 1)]
    pub save_fields: usize,
    #[arg(long, default_value_t = RadialGrid::DEFAULT_R_MAX)]
    pub r_max: f64,
    #[arg(long, default_value_t = RadialGrid::DEFAULT_N)]
    pub n: usize,
}

#[derive(clap::Args)]
pub struct VirialArgs {
    /// Trace CSV written by `evolve` (its sidecars are read too).
    #[arg(long)]
    pub trace: PathBuf,
    /// Weight: unweighted | chi | w | psi | f.
    #[arg(long, default_value = "unweighted")]
    pub weight: String,
    /// Weight radius R (ignored for the unweighted |x|^2).
    #[arg(long = "R", default_value_t = 8.0)]
    pub radius: f64,
    /// Optional output CSV (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(clap::Args)]
pub struct SweepArgs {
    /// Sweep plan JSON.
    #[arg(long)]
    pub plan: PathBuf,
    /// Output directory (table.csv, summary.json, run_manifest.json).
    #[arg(long)]
    pub out: PathBuf,
}
