//! Type-I discrete sine transform diagonalizing the Dirichlet Laplacian.
//!
//! Under w = r·u the 3D radial Laplacian becomes ∂²_r w on (0, r_max) with
//! zero boundary values, whose eigenvectors on the interior nodes are
//! sin(πjk/(n+1)). The evolution engine applies the exact spectral
//! propagator in this basis.
//!
//! The DST-I of length n is computed through a complex FFT of the odd
//! extension (length 2(n+1)); non power-of-two lengths go through
//! Bluestein's chirp-z algorithm so any grid size is admissible.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// In no_std builds these trait methods are the only float math there is;
// test and clippy drivers load std, whose inherent methods then shadow
// them and mark the import unused.
#[allow(unused_imports)]
use crate::math::FloatExt;

/// Precomputed radix-2 FFT plan (iterative Cooley–Tukey).
struct Radix2 {
    len: usize,
    rev: Vec<u32>,
    /// Twiddles e^{-2πi k/len} for k < len/2.
    tw: Vec<Complex64>,
}

impl Radix2 {
    fn new(len: usize) -> Self {
        assert!(len.is_power_of_two() && len >= 2);
        let bits = len.trailing_zeros();
        let rev = (0..len as u32)
            .map(|i| i.reverse_bits() >> (32 - bits))
            .collect();
        let tw = (0..len / 2)
            .map(|k| {
                let (s, c) = (-2.0 * PI * k as f64 / len as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        Self { len, rev, tw }
    }

    /// In-place forward DFT, X_k = Σ x_m e^{-2πi mk/len}.
    fn forward(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len);
        for i in 0..self.len {
            let j = self.rev[i] as usize;
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < self.len {
            let stride = self.len / (2 * half);
            let mut start = 0;
            while start < self.len {
                for k in 0..half {
                    let w = self.tw[k * stride];
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
                start += 2 * half;
            }
            half *= 2;
        }
    }

    /// In-place inverse DFT including the 1/len factor.
    fn inverse(&self, buf: &mut [Complex64]) {
        for v in buf.iter_mut() {
            *v = v.conj();
        }
        self.forward(buf);
        let scale = 1.0 / self.len as f64;
        for v in buf.iter_mut() {
            *v = v.conj() * scale;
        }
    }
}

/// DFT of arbitrary length via Bluestein's identity mk = (m²+k²-(k-m)²)/2,
/// reducing to a circular convolution of power-of-two length.
struct Bluestein {
    len: usize,
    fft: Radix2,
    /// Chirp c_m = e^{-iπ m²/len}.
    chirp: Vec<Complex64>,
    /// FFT of the padded reciprocal chirp filter.
    filter: Vec<Complex64>,
}

impl Bluestein {
    fn new(len: usize) -> Self {
        let m = (2 * len - 1).next_power_of_two();
        let fft = Radix2::new(m);
        let chirp: Vec<Complex64> = (0..len)
            .map(|j| {
                // reduce j² mod 2·len before scaling to keep the angle small
                let q = (j * j) % (2 * len);
                let (s, c) = (-PI * q as f64 / len as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        let mut filter = vec![Complex64::new(0.0, 0.0); m];
        for j in 0..len {
            let b = chirp[j].conj();
            filter[j] = b;
            if j > 0 {
                filter[m - j] = b;
            }
        }
        fft.forward(&mut filter);
        Self {
            len,
            fft,
            chirp,
            filter,
        }
    }

    fn forward(&self, x: &[Complex64]) -> Vec<Complex64> {
        let m = self.fft.len;
        let mut a = vec![Complex64::new(0.0, 0.0); m];
        for j in 0..self.len {
            a[j] = x[j] * self.chirp[j];
        }
        self.fft.forward(&mut a);
        for (v, f) in a.iter_mut().zip(&self.filter) {
            *v *= f;
        }
        self.fft.inverse(&mut a);
        (0..self.len).map(|k| a[k] * self.chirp[k]).collect()
    }
}

enum Dft {
    Radix2(Radix2),
    Bluestein(Bluestein),
}

impl Dft {
    fn new(len: usize) -> Self {
        if len.is_power_of_two() {
            Dft::Radix2(Radix2::new(len))
        } else {
            Dft::Bluestein(Bluestein::new(len))
        }
    }

    fn forward(&self, x: &[Complex64]) -> Vec<Complex64> {
        match self {
            Dft::Radix2(p) => {
                let mut buf = x.to_vec();
                p.forward(&mut buf);
                buf
            }
            Dft::Bluestein(p) => p.forward(x),
        }
    }
}

/// Plan for the type-I discrete sine transform of length n,
///
/// ```text
///     X_k = Σ_{j=1}^{n} v_j sin(π j k / (n+1)),    k = 1..n.
/// ```
///
/// The transform is its own inverse up to the factor 2/(n+1). Plans are
/// immutable after construction and safe to share across workers.
pub struct SineTransform {
    n: usize,
    dft: Dft,
}

impl SineTransform {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "empty transform");
        Self {
            n,
            dft: Dft::new(2 * (n + 1)),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Normalization constant of the round trip: forward ∘ forward = (n+1)/2 · id.
    #[inline]
    pub fn round_trip_scale(&self) -> f64 {
        (self.n + 1) as f64 / 2.0
    }

    /// Unnormalized forward transform of complex samples.
    pub fn forward(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        let l = 2 * (self.n + 1);
        let mut y = vec![Complex64::new(0.0, 0.0); l];
        for j in 1..=self.n {
            y[j] = v[j - 1];
            y[l - j] = -v[j - 1];
        }
        let spec = self.dft.forward(&y);
        // Y_k = -2i X_k  =>  X_k = (i/2) Y_k
        (1..=self.n)
            .map(|k| Complex64::new(-0.5 * spec[k].im, 0.5 * spec[k].re))
            .collect()
    }

    /// Inverse transform: forward scaled by 2/(n+1).
    pub fn inverse(&self, x: &[Complex64]) -> Vec<Complex64> {
        let scale = 1.0 / self.round_trip_scale();
        let mut v = self.forward(x);
        for c in v.iter_mut() {
            *c *= scale;
        }
        v
    }

    /// Forward transform of real samples.
    pub fn forward_real(&self, v: &[f64]) -> Vec<f64> {
        let cx: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward(&cx).iter().map(|c| c.re).collect()
    }
}

/// Continuum Dirichlet eigenvalue of mode k on [0, r_max]: (πk/r_max)².
#[inline]
pub fn dirichlet_eigenvalue(k: usize, r_max: f64) -> f64 {
    let kappa = PI * k as f64 / r_max;
    kappa * kappa
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn mode_one_is_an_eigenvector() {
        let n = 127;
        let st = SineTransform::new(n);
        let v: Vec<Complex64> = (1..=n)
            .map(|j| Complex64::new((PI * j as f64 / (n + 1) as f64).sin(), 0.0))
            .collect();
        let x = st.forward(&v);
        assert!((x[0].re - st.round_trip_scale()).abs() < 1e-10);
        for (k, c) in x.iter().enumerate().skip(1) {
            assert!(c.norm() < 1e-10, "mode {} leaked: {}", k + 1, c.norm());
        }
    }

    #[test]
    fn round_trip_identity_pow2_and_bluestein() {
        for n in [63usize, 100, 255] {
            let st = SineTransform::new(n);
            // deterministic pseudo-random complex vector
            let mut state = 0x9e3779b97f4a7c15u64;
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            };
            let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(next(), next())).collect();
            let back = st.inverse(&st.forward(&v));
            let scale = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
            assert!(max_err(&v, &back) / scale < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn parseval_up_to_normalization() {
        let n = 200; // Bluestein path
        let st = SineTransform::new(n);
        let v: Vec<Complex64> = (1..=n)
            .map(|j| Complex64::new((0.1 * j as f64).sin(), (0.07 * j as f64).cos()))
            .collect();
        let x = st.forward(&v);
        let sum_v: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        let sum_x: f64 = x.iter().map(|c| c.norm_sqr()).sum();
        assert!((sum_x - st.round_trip_scale() * sum_v).abs() / sum_x < 1e-12);
    }
}
