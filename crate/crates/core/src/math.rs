//! Float math for the `no_std` build, backed by libm.

/// The transcendental functions the crate needs. `core` provides no
/// `exp`/`powf`/`sin_cos`; routing them through one trait keeps call
/// sites identical to std-flavoured Rust. In test builds std is linked
/// and its inherent methods shadow these, so the trait imports carry a
/// test-scoped `allow(unused_imports)`.
#[allow(dead_code)]
pub(crate) trait FloatExt {
    fn exp(self) -> f64;
    fn ln(self) -> f64;
    fn sqrt(self) -> f64;
    fn sin_cos(self) -> (f64, f64);
    fn powf(self, e: f64) -> f64;
    fn powi(self, e: i32) -> f64;
    fn atan(self) -> f64;
    fn cbrt(self) -> f64;
    fn floor(self) -> f64;
}

impl FloatExt for f64 {
    #[inline]
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    #[inline]
    fn ln(self) -> f64 {
        libm::log(self)
    }
    #[inline]
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    #[inline]
    fn sin_cos(self) -> (f64, f64) {
        libm::sincos(self)
    }
    #[inline]
    fn powf(self, e: f64) -> f64 {
        libm::pow(self, e)
    }
    #[inline]
    fn powi(self, e: i32) -> f64 {
        libm::pow(self, e as f64)
    }
    #[inline]
    fn atan(self) -> f64 {
        libm::atan(self)
    }
    #[inline]
    fn cbrt(self) -> f64 {
        libm::cbrt(self)
    }
    #[inline]
    fn floor(self) -> f64 {
        libm::floor(self)
    }
}

/// Signed power `|x|^{e−1}·x`-style evaluation used for the real form of
/// the NLS nonlinearity: `signed_pow(x, e)` is x^e for x ≥ 0 and −|x|^e
/// otherwise, avoiding NaN from `powf` on negative bases with fractional
/// exponents.
#[inline]
pub(crate) fn signed_pow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x > 0.0 {
        libm::pow(x, e)
    } else {
        -libm::pow(-x, e)
    }
}
