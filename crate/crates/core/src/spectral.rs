//! FFT plumbing for periodic functions sampled on the grid
//! `x_j = -pi + 2 pi j / N`, `j = 0..N`.
//!
//! Coefficients follow the convention `a(x) = sum_k c_k e^{ikx}` and are
//! stored in FFT order: index `k` for `0 <= k < N/2`, index `N + k` for
//! negative `k`. The Nyquist slot `N/2` is carried along but never used as
//! a mode of the band-limited interpolant.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

pub type C64 = Complex64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn is_valid_grid(n: usize) -> bool {
    n >= 4 && n.is_power_of_two()
}

/// Grid point `x_j`.
pub fn grid_point(j: usize, n: usize) -> f64 {
    -PI + 2.0 * PI * j as f64 / n as f64
}

pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| grid_point(j, n)).collect()
}

/// Signed wavenumber stored in FFT slot `idx`.
pub fn wavenumber(idx: usize, n: usize) -> i64 {
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// FFT slot holding wavenumber `k` (|k| < n/2).
pub fn slot(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

fn parity(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Fourier coefficients of grid samples (trapezoid rule, exact for
/// trigonometric polynomials of degree below N/2).
pub fn analyze(samples: &[C64]) -> Vec<C64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for (idx, c) in buf.iter_mut().enumerate() {
        // e^{-ik x_j} = (-1)^k e^{-2 pi i k j / N}
        *c *= parity(wavenumber(idx, n)) * scale;
    }
    buf
}

/// Inverse of [`analyze`].
pub fn synthesize(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len();
    let mut buf: Vec<C64> = coeffs
        .iter()
        .enumerate()
        .map(|(idx, c)| c * parity(wavenumber(idx, n)))
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

/// Spectral derivative of periodic samples. The Nyquist mode is dropped.
pub fn derivative(samples: &[C64]) -> Vec<C64> {
    let n = samples.len();
    let mut coeffs = analyze(samples);
    for (idx, c) in coeffs.iter_mut().enumerate() {
        if idx == n / 2 {
            *c = C64::new(0.0, 0.0);
        } else {
            *c *= I * wavenumber(idx, n) as f64;
        }
    }
    synthesize(&coeffs)
}

/// Trapezoid integral over one period of grid samples.
pub fn integrate(samples: &[C64]) -> C64 {
    let n = samples.len() as f64;
    samples.iter().sum::<C64>() * (2.0 * PI / n)
}

/// L^2((-pi, pi)) inner product `(f, g) = int conj(f) g`.
pub fn inner(f: &[C64], g: &[C64]) -> C64 {
    let n = f.len() as f64;
    f.iter().zip(g).map(|(a, b)| a.conj() * b).sum::<C64>() * (2.0 * PI / n)
}

pub fn norm_sq(f: &[C64]) -> f64 {
    let n = f.len() as f64;
    f.iter().map(|z| z.norm_sqr()).sum::<f64>() * (2.0 * PI / n)
}

/// Normalized exponential `e^{imx}/sqrt(2 pi)` on the grid.
pub fn exponential(m: i64, n: usize) -> Vec<C64> {
    let s = 1.0 / (2.0 * PI).sqrt();
    grid(n)
        .into_iter()
        .map(|x| C64::from_polar(s, m as f64 * x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_recovers_known_modes() {
        let n = 16;
        let samples: Vec<C64> = grid(n)
            .iter()
            .map(|&x| C64::new(0.5, 0.0) + C64::new(0.0, 2.0) * C64::from_polar(1.0, -3.0 * x))
            .collect();
        let c = analyze(&samples);
        assert!((c[0] - C64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((c[slot(-3, n)] - C64::new(0.0, 2.0)).norm() < 1e-14);
        let back = synthesize(&c);
        for (a, b) in back.iter().zip(&samples) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn derivative_of_sine() {
        let n = 32;
        let xs = grid(n);
        let f: Vec<C64> = xs.iter().map(|&x| C64::new(x.sin(), 0.0)).collect();
        let df = derivative(&f);
        for (x, d) in xs.iter().zip(df) {
            assert!((d - C64::new(x.cos(), 0.0)).norm() < 1e-13);
        }
    }
}
