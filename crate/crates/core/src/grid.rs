//! Uniform radial discretization of ℝ³ under radial symmetry.
//!
//! Interior nodes r_j = j·h, j = 1..n, with h = r_max/(n+1). The origin and
//! the truncation radius are not nodes; fields are extended by zero there
//! (Dirichlet truncation), which is also what makes the substitution
//! w = r·u compatible with the sine transform of [`crate::transform`].

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Error;
// In no_std builds these trait methods are the only float math there is;
// test and clippy drivers load std, whose inherent methods then shadow
// them and mark the import unused.
#[allow(unused_imports)]
use crate::math::FloatExt;
use crate::Result;

/// Uniform interior-node radial grid on (0, r_max).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    n: usize,
    h: f64,
}

impl RadialGrid {
    /// Default truncation radius used by the evolution pipeline.
    pub const DEFAULT_R_MAX: f64 = 32.0;
    /// Default interior node count; n + 1 = 4096 keeps the sine transform
    /// on a power-of-two FFT.
    pub const DEFAULT_N: usize = 4095;

    pub fn new(r_max: f64, n: usize) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::Invalid("r_max must be positive and finite".into()));
        }
        if n < 16 {
            return Err(Error::Invalid(
                "grid needs at least 16 interior nodes".into(),
            ));
        }
        let h = r_max / (n + 1) as f64;
        Ok(Self { r_max, n, h })
    }

    pub fn default_grid() -> Self {
        Self::new(Self::DEFAULT_R_MAX, Self::DEFAULT_N).expect("default grid is valid")
    }

    #[inline]
    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Node radius r_j = j·h for j = 1..=n (1-based as in the discretization).
    #[inline]
    pub fn r(&self, j: usize) -> f64 {
        (j + 1) as f64 * self.h
    }

    /// Iterator over node radii in index order.
    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.r(j))
    }

    /// Sample a real-valued radial function at the nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.radii().map(f).collect()
    }

    /// The coarse grid obtained by keeping every second node. Exists only
    /// when n is odd (then old nodes 2h, 4h, ... are exactly the new nodes).
    pub fn coarsen(&self) -> Option<RadialGrid> {
        if !self.n.is_multiple_of(2) {
            RadialGrid::new(self.r_max, (self.n - 1) / 2).ok()
        } else {
            None
        }
    }
}

/// Real/complex tag for [`RadialField`] values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    RealValued,
    Complex,
}

/// Complex samples of a radial function on a shared grid.
#[derive(Debug, Clone)]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    values: Vec<Complex64>,
    parity: Parity,
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::Invalid("field length does not match grid".into()));
        }
        let parity = if values.iter().all(|v| v.im == 0.0) {
            Parity::RealValued
        } else {
            Parity::Complex
        };
        Ok(Self {
            grid,
            values,
            parity,
        })
    }

    pub fn from_real(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::Invalid("field length does not match grid".into()));
        }
        let values = values.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
        Ok(Self {
            grid,
            values,
            parity: Parity::RealValued,
        })
    }

    pub fn from_fn(grid: Arc<RadialGrid>, f: impl Fn(f64) -> Complex64) -> Self {
        let values: Vec<Complex64> = grid.radii().map(f).collect();
        let parity = if values.iter().all(|v| v.im == 0.0) {
            Parity::RealValued
        } else {
            Parity::Complex
        };
        Self {
            grid,
            values,
            parity,
        }
    }

    pub fn zero(grid: Arc<RadialGrid>) -> Self {
        let n = grid.n();
        Self {
            grid,
            values: alloc::vec![Complex64::new(0.0, 0.0); n],
            parity: Parity::RealValued,
        }
    }

    #[inline]
    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Scalar multiple λ·u (λ real), preserving parity.
    pub fn scaled(&self, lambda: f64) -> RadialField {
        RadialField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * lambda).collect(),
            parity: self.parity,
        }
    }

    /// |u(r_j)|² samples.
    pub fn abs_sq(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// ∫_{ℝ³} f(|x|) dx = 4π ∫₀^{r_max} f(r) r² dr for real node samples of f,
/// extended by zero at r = 0 and r = r_max.
///
/// Composite Simpson over the n+1 panels; when the panel count is odd the
/// final panel falls back to the trapezoid rule.
pub fn integrate3d(grid: &RadialGrid, samples: &[f64]) -> Result<f64> {
    if samples.len() != grid.n() {
        return Err(Error::Invalid("sample length does not match grid".into()));
    }
    if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "integrand sample",
            index,
        });
    }
    // g over the n+2 points 0, h, ..., r_max with zero ends.
    let g = |i: usize| -> f64 {
        if i == 0 || i == grid.n() + 1 {
            0.0
        } else {
            let r = grid.h() * i as f64;
            samples[i - 1] * r * r
        }
    };
    let panels = grid.n() + 1;
    let simpson_panels = if panels.is_multiple_of(2) {
        panels
    } else {
        panels - 1
    };
    let mut acc = 0.0;
    let mut i = 0;
    while i < simpson_panels {
        acc += (g(i) + 4.0 * g(i + 1) + g(i + 2)) * (grid.h() / 3.0);
        i += 2;
    }
    if simpson_panels < panels {
        acc += 0.5 * grid.h() * (g(panels - 1) + g(panels));
    }
    Ok(4.0 * PI * acc)
}

/// Weighted l² sum used by integrands that are already |·|² samples.
pub(crate) fn integrate3d_unchecked(grid: &RadialGrid, samples: &[f64]) -> f64 {
    integrate3d(grid, samples).expect("caller guarantees finite samples")
}

/// Radial derivative samples of a complex field by centered second-order
/// differences. At the first node the stencil is one-sided (second order,
/// pointing into the domain); at the last node the Dirichlet zero extension
/// u(r_max) = 0 supplies the missing neighbour.
pub fn radial_derivative(u: &RadialField) -> Vec<Complex64> {
    let n = u.grid().n();
    let h = u.grid().h();
    let v = u.values();
    let mut d = Vec::with_capacity(n);
    if n < 3 {
        d.resize(n, Complex64::new(0.0, 0.0));
        return d;
    }
    d.push((-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h));
    for j in 1..n - 1 {
        d.push((v[j + 1] - v[j - 1]) / (2.0 * h));
    }
    d.push((Complex64::new(0.0, 0.0) - v[n - 2]) / (2.0 * h));
    d
}

/// ‖∇u‖²_{L²(ℝ³)} = 4π ∫ |u′(r)|² r² dr with the finite-difference radial
/// derivative of [`radial_derivative`].
pub fn gradient_sq_norm(u: &RadialField) -> Result<f64> {
    if let Some(index) = u
        .values()
        .iter()
        .position(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return Err(Error::NonFinite {
            what: "field sample",
            index,
        });
    }
    let d = radial_derivative(u);
    let samples: Vec<f64> = d.iter().map(|v| v.norm_sqr()).collect();
    integrate3d(u.grid(), &samples)
}

/// Exterior restriction of ‖u‖²_{L²} to {r ≥ R} (sharp node indicator).
pub fn mass_exterior(u: &RadialField, r_lo: f64) -> f64 {
    let masked: Vec<f64> = u
        .grid()
        .radii()
        .zip(u.values())
        .map(|(r, v)| if r >= r_lo { v.norm_sqr() } else { 0.0 })
        .collect();
    integrate3d_unchecked(u.grid(), &masked)
}

/// Interior restriction of ∫|u|^{q} to {r ≤ R} (sharp node indicator).
pub fn lq_interior(u: &RadialField, q: f64, r_hi: f64) -> f64 {
    let masked: Vec<f64> = u
        .grid()
        .radii()
        .zip(u.values())
        .map(|(r, v)| if r <= r_hi { v.norm().powf(q) } else { 0.0 })
        .collect();
    integrate3d_unchecked(u.grid(), &masked)
}
