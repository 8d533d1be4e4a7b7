//! Subcommand implementations. Each returns the process exit code:
//! 0 success, 2 validation failure, 3 numerical failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use nlslab_core::classifier::classify_with_sigma;
use nlslab_core::evolution::{evolve, Terminal};
use nlslab_core::functionals::ThresholdRatio;
use nlslab_core::grid::RadialGrid;
use nlslab_core::groundstate::{solve_ground_state_on, GroundState};
use nlslab_core::potentials::analyze;
use nlslab_core::sweep::{run_cell, SweepPlan, SweepRow};
use nlslab_core::virial::{series_for, VirialSeries};
use nlslab_core::weights::{Weight, WeightKind};

use crate::args;
use crate::files::{decode_fields, encode_fields, fields_path, summary_path, ManifestBuilder};
use crate::json::{
    EvolveConfigJson, GridJson, GroundStateSidecar, InitialDataJson, PotentialReportJson,
    PotentialSpecJson, SweepPlanJson, TerminalJson, ThresholdReportJson, TraceSummaryJson,
    SCHEMA_VERSION,
};

pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<nlslab_core::Error> for CliError {
    fn from(e: nlslab_core::Error) -> Self {
        CliError {
            code: if e.is_validation() { 2 } else { 3 },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: 2,
            message: format!("io: {e}"),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError {
            code: 2,
            message: format!("json: {e}"),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let body = std::fs::read(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_slice(&body)?)
}

fn make_grid(r_max: f64, n: usize) -> Result<Arc<RadialGrid>> {
    Ok(Arc::new(RadialGrid::new(r_max, n)?))
}

/// Ground-state grid refining an evolution grid 16× (node-aligned).
fn gs_grid_for(grid: &RadialGrid) -> Result<Arc<RadialGrid>> {
    make_grid(grid.r_max(), 16 * (grid.n() + 1) - 1)
}

fn solve_gs_for(grid: &RadialGrid, p: f64, tol: f64) -> Result<GroundState> {
    Ok(solve_ground_state_on(&gs_grid_for(grid)?, p, tol)?)
}

fn ratio_csv(r: &ThresholdRatio) -> String {
    match r {
        ThresholdRatio::Value(v) => format!("{v}"),
        // sentinel: negative energy sits strictly below the threshold
        ThresholdRatio::BelowNegativeEnergy => "-1".to_string(),
    }
}

pub fn groundstate(a: args::GroundstateArgs) -> Result<i32> {
    let grid = make_grid(a.r_max, a.n)?;
    let mut manifest = ManifestBuilder::new("groundstate");
    manifest.set_grid(&grid);
    let gs = solve_ground_state_on(&grid, a.p, a.tol)?;

    let mut csv = String::from("r,Q\n");
    for (r, v) in grid.radii().zip(gs.profile.values()) {
        let _ = writeln!(csv, "{r},{}", v.re);
    }
    manifest.write(&a.out, csv.as_bytes())?;

    let sidecar = GroundStateSidecar {
        schema_version: SCHEMA_VERSION,
        p: gs.p,
        grid: GridJson {
            r_max: grid.r_max(),
            n: grid.n(),
        },
        mass: gs.mass,
        grad_sq: gs.grad_sq,
        lp1: gs.lp1,
        energy0: gs.energy0,
        cgn: gs.cgn,
        s_c: gs.s_c,
        threshold_me: gs.threshold_me,
        threshold_grad: gs.threshold_grad,
        peak: gs.peak(),
    };
    let sidecar_path = a.out.with_extension("json");
    manifest.write(&sidecar_path, &serde_json::to_vec_pretty(&sidecar)?)?;
    manifest.finish(&a.out)?;
    println!(
        "ground state p = {}: mass {:.10}, grad_sq {:.10}, E0 {:.10} -> {}, {}",
        gs.p,
        gs.mass,
        gs.grad_sq,
        gs.energy0,
        a.out.display(),
        sidecar_path.display()
    );
    Ok(0)
}

pub fn kato(a: args::KatoArgs) -> Result<i32> {
    let spec: PotentialSpecJson = read_json(&a.potential)?;
    let v = spec.to_potential();
    v.validate()?;
    let grid = make_grid(a.r_max, a.n)?;
    let report = analyze(&grid, &v, a.sigma)?;
    let json = PotentialReportJson::from_report(&report);
    let body = serde_json::to_string_pretty(&json)?;
    println!("{body}");
    if let Some(out) = a.out {
        let mut manifest = ManifestBuilder::new("kato");
        manifest.set_grid(&grid);
        manifest.write(&out, body.as_bytes())?;
        manifest.finish(&out)?;
    }
    Ok(0)
}

pub fn classify(a: args::ClassifyArgs) -> Result<i32> {
    let spec: PotentialSpecJson = read_json(&a.potential)?;
    let v = spec.to_potential();
    v.validate()?;
    let data: InitialDataJson = read_json(&a.data)?;
    let grid = make_grid(a.r_max, a.n)?;
    let gs = solve_gs_for(&grid, a.p, a.tol)?;
    // λQ data is classified on the ground-state grid: numerator and
    // denominator then share one estimator, so the λ = 1 boundary sits at
    // ratio exactly 1 instead of a resolution-sized offset.
    let grid = match &data {
        InitialDataJson::LambdaQ { .. } => gs.profile.grid().clone(),
        _ => grid,
    };
    let u0 = data
        .to_field(&grid, Some(&gs))
        .map_err(CliError::validation)?;
    let report = classify_with_sigma(&u0, &v, a.p, &gs, a.sigma)?;
    let json = ThresholdReportJson::from_report(&report);
    let body = serde_json::to_string_pretty(&json)?;
    println!("{body}");
    if let Some(out) = a.out {
        let mut manifest = ManifestBuilder::new("classify");
        manifest.set_grid(&grid);
        manifest.write(&out, body.as_bytes())?;
        manifest.finish(&out)?;
    }
    Ok(0)
}

pub fn evolve_cmd(a: args::EvolveArgs) -> Result<i32> {
    let spec: PotentialSpecJson = read_json(&a.potential)?;
    let v = spec.to_potential();
    v.validate()?;
    let data: InitialDataJson = read_json(&a.data)?;
    let grid = make_grid(a.r_max, a.n)?;
    let cfg_json = EvolveConfigJson {
        dt0: a.dt0,
        t_end: a.t_end,
        store_every: a.store_every,
        blowup_factor: a.blowup_factor,
        dt_floor: a.dt_floor,
        r_probe: a.r_probe,
        save_fields_every: Some(a.save_fields),
    };
    let cfg = cfg_json.to_config();
    cfg.validate()?;

    let needs_gs = matches!(data, InitialDataJson::LambdaQ { .. });
    let gs = if needs_gs {
        Some(solve_gs_for(&grid, a.p, 1e-12)?)
    } else {
        None
    };
    let u0 = data
        .to_field(&grid, gs.as_ref())
        .map_err(CliError::validation)?;

    let trace = evolve(&u0, &v, a.p, &cfg)?;

    let mut manifest = ManifestBuilder::new("evolve");
    manifest.set_grid(&grid);

    let mut csv =
        String::from("t,mass,grad_sq,pot_term,lp1,energy_v,k_functional,localized_mass,dt\n");
    for (i, s) in trace.snapshots.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            s.t,
            s.mass,
            s.grad_sq,
            s.pot_term,
            s.lp1,
            s.energy_v,
            s.k_functional,
            trace.localized_mass[i],
            trace.dt_at_snapshot[i],
        );
    }
    manifest.write(&a.out, csv.as_bytes())?;

    let f_path = fields_path(&a.out);
    manifest.write(&f_path, &encode_fields(&grid, &trace.fields))?;

    let summary = TraceSummaryJson {
        schema_version: SCHEMA_VERSION,
        p: a.p,
        grid: GridJson {
            r_max: grid.r_max(),
            n: grid.n(),
        },
        potential: spec,
        terminal: TerminalJson::from_terminal(&trace.terminal),
        mass_drift: trace.mass_drift,
        energy_drift: trace.energy_drift,
        wall_contamination_t: trace.wall_contamination_t,
        r_probe: trace.r_probe,
        snapshots: trace.snapshots.len(),
        stored_fields: trace.fields.len(),
        fields_file: f_path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
    };
    let s_path = summary_path(&a.out);
    manifest.write(&s_path, &serde_json::to_vec_pretty(&summary)?)?;
    manifest.finish(&a.out)?;

    println!(
        "evolved to terminal {}: {} snapshots, mass drift {:.3e}, energy drift {:.3e} -> {}",
        summary.terminal.as_label(),
        trace.snapshots.len(),
        trace.mass_drift,
        trace.energy_drift,
        a.out.display()
    );
    // An underresolved run is a numerical failure; the outputs above still
    // describe everything up to the breakdown.
    if matches!(trace.terminal, Terminal::Underresolved { .. }) {
        return Ok(3);
    }
    Ok(0)
}

fn weight_kind(name: &str) -> Result<WeightKind> {
    match name {
        "unweighted" | "r2" => Ok(WeightKind::Unweighted),
        "chi" => Ok(WeightKind::Chi),
        "w" => Ok(WeightKind::WR),
        "psi" => Ok(WeightKind::PsiR),
        "f" => Ok(WeightKind::FR),
        other => Err(CliError::validation(format!(
            "unknown weight '{other}' (expected unweighted|chi|w|psi|f)"
        ))),
    }
}

fn series_csv(series: &VirialSeries) -> String {
    let scale2 = series.i2_scale.iter().fold(1e-300_f64, |a, &b| a.max(b));
    let mut csv = String::from("t,I,I1,I2,fd_resid\n");
    let n = series.len();
    for i in 0..n {
        let resid = if i == 0 || i + 1 == n {
            String::new()
        } else {
            let hm = series.times[i] - series.times[i - 1];
            let hp = series.times[i + 1] - series.times[i];
            let di1 = (hm * hm * series.i1[i + 1] - hp * hp * series.i1[i - 1]
                + (hp * hp - hm * hm) * series.i1[i])
                / (hm * hp * (hm + hp));
            format!("{}", (di1 - series.i2[i]).abs() / scale2)
        };
        let _ = writeln!(
            csv,
            "{},{},{},{},{resid}",
            series.times[i], series.i[i], series.i1[i], series.i2[i]
        );
    }
    csv
}

pub fn virial(a: args::VirialArgs) -> Result<i32> {
    let summary: TraceSummaryJson = read_json(&summary_path(&a.trace))?;
    let f_path = fields_path(&a.trace);
    let bytes = std::fs::read(&f_path).map_err(|e| {
        CliError::validation(format!(
            "cannot read stored fields {}: {e} (run evolve with --save-fields)",
            f_path.display()
        ))
    })?;
    let (grid, fields) = decode_fields(&bytes).map_err(CliError::validation)?;
    if fields.len() < 2 {
        return Err(CliError {
            code: 3,
            message: "trace stores fewer than 2 fields; rerun evolve with --save-fields 1".into(),
        });
    }
    let kind = weight_kind(&a.weight)?;
    let w = Weight::new(kind, a.radius, &grid)?;
    let v = summary.potential.to_potential();
    let series = series_for(&fields, &v, summary.p, &w)?;
    let csv = series_csv(&series);
    match a.out {
        Some(out) => {
            let mut manifest = ManifestBuilder::new("virial");
            manifest.set_grid(&grid);
            manifest.write(&out, csv.as_bytes())?;
            manifest.finish(&out)?;
            println!("virial series ({} rows) -> {}", series.len(), out.display());
        }
        None => print!("{csv}"),
    }
    Ok(0)
}

fn sweep_row_csv(row: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}\n",
        row.p,
        row.lambda,
        row.potential_id.replace(',', ";"),
        ratio_csv(&row.me_ratio),
        row.grad_ratio,
        row.h_ratio,
        row.verdict.as_str(),
        row.terminal
            .as_ref()
            .map(|t| TerminalJson::from_terminal(t).as_label())
            .unwrap_or_else(|| "error".into()),
        row.evac_pass
            .map(|b| b.to_string())
            .unwrap_or_else(|| "".into()),
    )
}

pub fn sweep(a: args::SweepArgs) -> Result<i32> {
    let plan_json: SweepPlanJson = read_json(&a.plan)?;
    let grid_json = plan_json.grid.unwrap_or(GridJson {
        r_max: RadialGrid::DEFAULT_R_MAX,
        n: RadialGrid::DEFAULT_N,
    });
    let plan = SweepPlan {
        p_values: plan_json.p.clone(),
        lambdas: plan_json.lambda.clone(),
        potentials: plan_json
            .potentials
            .iter()
            .map(|s| s.to_potential())
            .collect(),
        evolve: plan_json.evolve.to_config(),
        grid: make_grid(grid_json.r_max, grid_json.n)?,
    };
    plan.validate()?;
    for v in &plan.potentials {
        v.validate()?;
    }
    std::fs::create_dir_all(&a.out)?;

    let ground_states = nlslab_core::sweep::ground_states_for(&plan)?;
    let potentials = plan.potential_cells();

    // Cell list in plan order; workers pull indices, results land in slots.
    let mut cells = Vec::new();
    for &p in &plan.p_values {
        for &lambda in &plan.lambdas {
            for v in &potentials {
                cells.push((p, lambda, v.clone()));
            }
        }
    }
    let workers = std::env::var("NLS_LAB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|w| *w >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .min(cells.len().max(1));

    let next = Mutex::new(0usize);
    let results: Vec<Mutex<Option<SweepRow>>> =
        (0..cells.len()).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = {
                    let mut guard = next.lock().unwrap();
                    let i = *guard;
                    *guard += 1;
                    i
                };
                if idx >= cells.len() {
                    break;
                }
                let (p, lambda, v) = &cells[idx];
                let gs = &ground_states
                    .iter()
                    .find(|(q, _)| (*q - *p).abs() < 1e-15)
                    .expect("ground state solved for every p")
                    .1;
                let row = run_cell(&plan, gs, *p, *lambda, v);
                *results[idx].lock().unwrap() = Some(row);
            });
        }
    });

    let rows: Vec<SweepRow> = results
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("all cells ran"))
        .collect();

    let mut manifest = ManifestBuilder::new("sweep");
    manifest.set_grid(&plan.grid);
    let mut csv = String::from(
        "p,lambda,potential_id,me_ratio,grad_ratio,h_ratio,verdict,terminal,evac_pass\n",
    );
    for row in &rows {
        csv.push_str(&sweep_row_csv(row));
    }
    let table_path = a.out.join("table.csv");
    manifest.write(&table_path, csv.as_bytes())?;

    #[derive(serde::Serialize)]
    struct SweepSummary {
        schema_version: u32,
        cells: usize,
        matches: usize,
        mismatches: usize,
        near_threshold: usize,
        inconclusive: usize,
        errors: Vec<String>,
        agreement: Vec<String>,
    }
    use nlslab_core::sweep::Agreement;
    let summary = SweepSummary {
        schema_version: SCHEMA_VERSION,
        cells: rows.len(),
        matches: rows
            .iter()
            .filter(|r| r.agreement == Agreement::Match)
            .count(),
        mismatches: rows
            .iter()
            .filter(|r| r.agreement == Agreement::Mismatch)
            .count(),
        near_threshold: rows
            .iter()
            .filter(|r| r.agreement == Agreement::NearThreshold)
            .count(),
        inconclusive: rows
            .iter()
            .filter(|r| r.agreement == Agreement::Inconclusive)
            .count(),
        errors: rows.iter().filter_map(|r| r.error.clone()).collect(),
        agreement: rows
            .iter()
            .map(|r| r.agreement.as_str().to_string())
            .collect(),
    };
    let summary_path: PathBuf = a.out.join("summary.json");
    manifest.write(&summary_path, &serde_json::to_vec_pretty(&summary)?)?;
    manifest.finish(&table_path)?;
    println!(
        "sweep: {} cells ({} match, {} mismatch, {} near-threshold, {} inconclusive) -> {}",
        summary.cells,
        summary.matches,
        summary.mismatches,
        summary.near_threshold,
        summary.inconclusive,
        table_path.display()
    );
    Ok(0)
}
