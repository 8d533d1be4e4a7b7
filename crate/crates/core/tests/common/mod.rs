//! Shared fixtures for the integration tests.

#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use nlslab_core::grid::{RadialField, RadialGrid};
use nlslab_core::groundstate::{solve_ground_state_on, GroundState};

/// ∫_{ℝ³} e^{−2|x|²} dx = (π/2)^{3/2}: the Gaussian mass oracle.
pub const GAUSS_MASS: f64 = 1.968_701_243_215_302_4;
/// ‖∇e^{−|x|²}‖²_{L²} = 3(π/2)^{3/2} (closed-form moment; cross-checked
/// against −∫ f Δf with Δe^{−r²} = (4r² − 6)e^{−r²}).
pub const GAUSS_GRAD: f64 = 3.0 * GAUSS_MASS;

pub fn grid(r_max: f64, n: usize) -> Arc<RadialGrid> {
    Arc::new(RadialGrid::new(r_max, n).unwrap())
}

pub fn gaussian(g: &Arc<RadialGrid>) -> RadialField {
    RadialField::from_fn(g.clone(), |r| Complex64::new((-r * r).exp(), 0.0))
}

pub fn gaussian_width(g: &Arc<RadialGrid>, sigma: f64) -> RadialField {
    RadialField::from_fn(g.clone(), |r| {
        Complex64::new((-(r / sigma) * (r / sigma)).exp(), 0.0)
    })
}

/// The p = 3 ground state on its default fine grid, solved once per test
/// binary.
pub fn gs3() -> &'static GroundState {
    static GS: OnceLock<GroundState> = OnceLock::new();
    GS.get_or_init(|| nlslab_core::groundstate::solve_ground_state(3.0, 1e-12).unwrap())
}

/// The p = 3 profile decimated onto the default evolution grid (32, 4095).
pub fn q_on_evolution_grid() -> (Arc<RadialGrid>, RadialField) {
    let g = grid(32.0, 4095);
    (g.clone(), gs3().profile_on(&g).unwrap())
}

/// Ground state solved on a fine grid matching (r_max, n_coarse) so that
/// the profile decimates onto the coarse grid.
pub fn gs_for_grid(p: f64, coarse: &Arc<RadialGrid>) -> GroundState {
    let fine = grid(coarse.r_max(), 16 * (coarse.n() + 1) - 1);
    solve_ground_state_on(&fine, p, 1e-12).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
