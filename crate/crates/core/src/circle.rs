//! Closed-form objects attached to the momentum `P_a = -i d/dx - a(x)` on the
//! circle `(-pi, pi)` with periodic boundary conditions. The spectrum and
//! eigenfunctions are explicit, and so are the similarity transform
//! `Omega_a` and the metric `Theta_a` built from them.
//!
//! Everything here is evaluated from explicit formulas on the uniform grid;
//! the matrix discretizations that cross-check them live in
//! [`crate::galerkin`].

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{self, C64, I};

/// Default tolerance for deciding `<Im a> = 0`.
pub const QUASI_TOL: f64 = 1e-12;
/// Tolerance for the parity comparisons `f(x)` vs `f(-x)`.
pub const PARITY_TOL: f64 = 1e-10;

/// Complex potential on the circle, held both as samples on the uniform
/// grid and as Fourier coefficients for `|k| <= N/2 - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePotential {
    samples: Vec<C64>,
    coeffs: Vec<C64>,
}

impl CirclePotential {
    pub fn from_samples(samples: Vec<C64>) -> Result<Self> {
        if !spectral::is_valid_grid(samples.len()) {
            return Err(Error::InvalidGridSize(samples.len()));
        }
        let coeffs = spectral::analyze(&samples);
        Ok(Self { samples, coeffs })
    }

    /// Builds the potential `sum_k c_k e^{ikx}` from a list of modes.
    /// Repeated modes are summed.
    pub fn from_fourier(modes: &[(i64, C64)], n: usize) -> Result<Self> {
        if !spectral::is_valid_grid(n) {
            return Err(Error::InvalidGridSize(n));
        }
        let band = n / 2 - 1;
        let mut coeffs = vec![C64::new(0.0, 0.0); n];
        for &(k, c) in modes {
            if k.unsigned_abs() as usize > band {
                return Err(Error::ModeOutOfBand { k, max: band });
            }
            coeffs[spectral::slot(k, n)] += c;
        }
        let samples = spectral::synthesize(&coeffs);
        Ok(Self { samples, coeffs })
    }

    pub fn from_fn<F: Fn(f64) -> C64>(n: usize, f: F) -> Result<Self> {
        if !spectral::is_valid_grid(n) {
            return Err(Error::InvalidGridSize(n));
        }
        Self::from_samples(spectral::grid(n).into_iter().map(f).collect())
    }

    pub fn constant(c: C64, n: usize) -> Result<Self> {
        Self::from_fourier(&[(0, c)], n)
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    /// Mode cutoff `K = N/2 - 1`.
    pub fn band(&self) -> usize {
        self.n() / 2 - 1
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn grid(&self) -> Vec<f64> {
        spectral::grid(self.n())
    }

    /// Fourier coefficient `c_k`; zero outside the band.
    pub fn coefficient(&self, k: i64) -> C64 {
        if k.unsigned_abs() as usize > self.band() {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[spectral::slot(k, self.n())]
        }
    }

    /// Modes `(k, c_k)` for `|k| <= K`.
    pub fn modes(&self) -> Vec<(i64, C64)> {
        let k = self.band() as i64;
        (-k..=k).map(|m| (m, self.coefficient(m))).collect()
    }

    /// Largest `|c_k|` over `|k| >= from` (including the Nyquist slot).
    pub fn tail(&self, from: usize) -> f64 {
        let n = self.n();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(idx, _)| spectral::wavenumber(*idx, n).unsigned_abs() as usize >= from)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    /// Smallest `B` such that every coefficient with `|k| > B` is below
    /// `rel * max_k |c_k|` (and below 1e-300 absolutely when `a = 0`).
    pub fn effective_band(&self, rel: f64) -> usize {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = (rel * scale).max(1e-300);
        (0..=self.band())
            .rev()
            .find(|&k| {
                let k = k as i64;
                self.coefficient(k).norm() > cut || self.coefficient(-k).norm() > cut
            })
            .unwrap_or(0)
    }

    /// `conj(a)`, with coefficients `conj(c_{-k})` taken over exactly.
    pub fn conj(&self) -> Self {
        let n = self.n();
        Self {
            samples: self.samples.iter().map(|z| z.conj()).collect(),
            coeffs: (0..n).map(|idx| self.coeffs[(n - idx) % n].conj()).collect(),
        }
    }

    pub fn real_part(&self) -> Self {
        Self::from_samples(self.samples.iter().map(|z| C64::new(z.re, 0.0)).collect())
            .expect("grid size already validated")
    }

    pub fn imag_part(&self) -> Self {
        Self::from_samples(self.samples.iter().map(|z| C64::new(z.im, 0.0)).collect())
            .expect("grid size already validated")
    }

    /// Evaluates the band-limited interpolant at an arbitrary angle.
    pub fn eval(&self, x: f64) -> C64 {
        self.modes()
            .into_iter()
            .map(|(k, c)| c * C64::from_polar(1.0, k as f64 * x))
            .sum()
    }

    /// Band-limited interpolant sampled on a grid of a different size.
    pub fn resample(&self, n: usize) -> Result<Self> {
        if !spectral::is_valid_grid(n) {
            return Err(Error::InvalidGridSize(n));
        }
        let keep = self.band().min(n / 2 - 1) as i64;
        let modes: Vec<_> = (-keep..=keep).map(|k| (k, self.coefficient(k))).collect();
        Self::from_fourier(&modes, n)
    }

    /// `<|a|^2>` by the trapezoid rule on the samples.
    pub fn mean_abs_sq(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.n() as f64
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Mean value `<a>` split into real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanDecomposition {
    pub mean: C64,
    pub mean_re: f64,
    pub mean_im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiplierKind {
    Omega,
    OmegaInv,
    Theta,
    Xi,
    W,
}

/// Multiplication operator given by its grid samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Multiplier {
    pub kind: MultiplierKind,
    pub values: Vec<C64>,
}

impl Multiplier {
    pub fn min_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Real parts, for multipliers that are real by construction.
    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn apply(&self, f: &[C64]) -> Vec<C64> {
        self.values.iter().zip(f).map(|(m, v)| m * v).collect()
    }
}

/// Eigenvalues `m - <a>` with grid samples of `psi_m` (rows of `psi`) and of
/// the adjoint eigenfunctions `phi_m` (rows of `phi`).
#[derive(Debug, Clone)]
pub struct EigenFamily {
    pub indices: Vec<i64>,
    pub eigenvalues: Vec<C64>,
    pub psi: DMatrix<C64>,
    pub phi: DMatrix<C64>,
}

#[derive(Debug, Clone)]
pub struct BiorthGram {
    pub matrix: DMatrix<C64>,
    /// Set when coefficients of `a` beyond `N/4` exceed 1e-12, i.e. the
    /// grid may not resolve the products `conj(phi_n) psi_m`.
    pub under_resolved: bool,
}

impl BiorthGram {
    /// `max |G - I|`.
    pub fn deviation_from_identity(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.matrix[(i, j)] - target).norm());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryClass {
    pub self_adjoint: bool,
    pub pt_symmetric: bool,
    pub anti_p_self_adjoint: bool,
}

pub fn mean(a: &CirclePotential) -> MeanDecomposition {
    let m = a.coefficient(0);
    MeanDecomposition {
        mean: m,
        mean_re: m.re,
        mean_im: m.im,
    }
}

/// `F(x_j) = int_{-pi}^{x_j} a` at every grid point. Real and imaginary
/// parts are integrated separately so a real potential gets `Im F = 0`
/// exactly.
pub(crate) fn antiderivative_samples(a: &CirclePotential) -> Vec<C64> {
    let re = real_antiderivative(&a.real_part());
    let im = real_antiderivative(&a.imag_part());
    re.into_iter().zip(im).map(|(x, y)| C64::new(x, y)).collect()
}

fn real_antiderivative(a: &CirclePotential) -> Vec<f64> {
    let n = a.n();
    let c0 = a.coefficient(0);
    let mut shifted = vec![C64::new(0.0, 0.0); n];
    for k in 1..=a.band() as i64 {
        for s in [k, -k] {
            shifted[spectral::slot(s, n)] = a.coefficient(s) / (I * s as f64);
        }
    }
    let g = spectral::synthesize(&shifted);
    // x_0 = -pi, so g[0] is the value of the periodic part at the left end
    let g0 = g[0];
    spectral::grid(n)
        .iter()
        .zip(&g)
        .map(|(&x, gj)| (c0 * (x + PI) + gj - g0).re)
        .collect()
}

/// `int_{-pi}^{x} a(xi) d xi`, evaluated from the Fourier series.
pub fn antiderivative(a: &CirclePotential, x: f64) -> Result<C64> {
    if !(-PI - 1e-12..=PI + 1e-12).contains(&x) {
        return Err(Error::AngleOutOfRange(x));
    }
    let mut total = a.coefficient(0) * (x + PI);
    for k in 1..=a.band() as i64 {
        for s in [k, -k] {
            let c = a.coefficient(s);
            if c != C64::new(0.0, 0.0) {
                let sf = s as f64;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                total += c * (C64::from_polar(1.0, sf * x) - sign) / (I * sf);
            }
        }
    }
    Ok(total)
}

pub fn spectrum(a: &CirclePotential, modes: usize) -> EigenFamily {
    let n = a.n();
    let avg = a.coefficient(0);
    let f = antiderivative_samples(a);
    let xs = a.grid();
    let norm = 1.0 / (2.0 * PI).sqrt();
    let indices: Vec<i64> = (-(modes as i64)..=modes as i64).collect();
    let rows = indices.len();
    let mut psi = DMatrix::zeros(rows, n);
    let mut phi = DMatrix::zeros(rows, n);
    for (r, &m) in indices.iter().enumerate() {
        for j in 0..n {
            let x = xs[j];
            psi[(r, j)] = norm * (I * ((m as f64 - avg) * x + f[j])).exp();
            phi[(r, j)] = norm * (I * ((m as f64 - avg.conj()) * x + f[j].conj())).exp();
        }
    }
    EigenFamily {
        eigenvalues: indices.iter().map(|&m| m as f64 - avg).collect(),
        indices,
        psi,
        phi,
    }
}

/// Gram matrix `G_{nm} = (phi_n, psi_m)` of the biorthogonal family.
pub fn biorth_gram(a: &CirclePotential, modes: usize) -> BiorthGram {
    let fam = spectrum(a, modes);
    let rows = fam.indices.len();
    let mut g = DMatrix::zeros(rows, rows);
    for i in 0..rows {
        let phi_i: Vec<C64> = fam.phi.row(i).iter().copied().collect();
        for j in 0..rows {
            let psi_j: Vec<C64> = fam.psi.row(j).iter().copied().collect();
            g[(i, j)] = spectral::inner(&phi_i, &psi_j);
        }
    }
    BiorthGram {
        matrix: g,
        under_resolved: a.tail(a.n() / 4) > 1e-12,
    }
}

/// Exponent of `omega` on the grid: `i <a> x - i F(x)`.
fn omega_exponent(a: &CirclePotential) -> Vec<C64> {
    let avg = a.coefficient(0);
    a.grid()
        .iter()
        .zip(antiderivative_samples(a))
        .map(|(&x, f)| I * avg * x - I * f)
        .collect()
}

/// Similarity transform `Omega_a`: `exp(i <a> x - i int_{-pi}^x a)`.
pub fn omega(a: &CirclePotential) -> Multiplier {
    Multiplier {
        kind: MultiplierKind::Omega,
        values: omega_exponent(a).into_iter().map(|e| e.exp()).collect(),
    }
}

pub fn omega_inv(a: &CirclePotential) -> Multiplier {
    Multiplier {
        kind: MultiplierKind::OmegaInv,
        values: omega_exponent(a).into_iter().map(|e| (-e).exp()).collect(),
    }
}

/// `omega(-pi)` and `omega(pi)`; equal because the transform preserves the
/// periodic boundary condition.
pub fn omega_endpoints(a: &CirclePotential) -> (C64, C64) {
    let avg = a.coefficient(0);
    let total = 2.0 * PI * avg;
    let left = (-I * avg * PI).exp();
    let right = (I * avg * PI - I * total).exp();
    (left, right)
}

pub fn quasi_self_adjoint(a: &CirclePotential) -> bool {
    quasi_self_adjoint_with(a, QUASI_TOL)
}

pub fn quasi_self_adjoint_with(a: &CirclePotential, tol: f64) -> bool {
    a.coefficient(0).im.abs() <= tol
}

/// Metric `Theta_a = exp(2 int_{-pi}^x Im a)`, defined when `<Im a> = 0`.
pub fn metric_theta(a: &CirclePotential) -> Result<Multiplier> {
    metric_theta_with(a, QUASI_TOL)
}

pub fn metric_theta_with(a: &CirclePotential, tol: f64) -> Result<Multiplier> {
    let mean_im = a.coefficient(0).im;
    if mean_im.abs() > tol {
        return Err(Error::NotQuasiSelfAdjoint { mean_im });
    }
    let values = antiderivative_samples(a)
        .into_iter()
        .map(|f| C64::new((2.0 * f.im).exp(), 0.0))
        .collect();
    Ok(Multiplier {
        kind: MultiplierKind::Theta,
        values,
    })
}

/// `xi(x) = exp(<Im a> x - int_{-pi}^x Im a)`, so that `psi_m = xi e_m` and
/// `phi_m = e_m / xi`.
pub fn xi_function(a: &CirclePotential) -> Multiplier {
    let mean_im = a.coefficient(0).im;
    let values = a
        .grid()
        .iter()
        .zip(antiderivative_samples(a))
        .map(|(&x, f)| C64::new((mean_im * x - f.im).exp(), 0.0))
        .collect();
    Multiplier {
        kind: MultiplierKind::Xi,
        values,
    }
}

/// Unimodular functions `e_m` (eigenfunctions for `Re a`) on the grid.
pub fn unimodular_basis(a: &CirclePotential, m: i64) -> Vec<C64> {
    let mean_re = a.coefficient(0).re;
    let norm = 1.0 / (2.0 * PI).sqrt();
    a.grid()
        .iter()
        .zip(antiderivative_samples(a))
        .map(|(&x, f)| C64::from_polar(norm, (m as f64 - mean_re) * x + f.re))
        .collect()
}

fn parity_split(values: &[f64]) -> (f64, f64) {
    // (max |f(x) - f(-x)|, max |f(x) + f(-x)|); x_{N-j} = -x_j on the grid
    let n = values.len();
    let mut odd_part: f64 = 0.0;
    let mut even_part: f64 = 0.0;
    for j in 0..n {
        let mirror = values[(n - j) % n];
        odd_part = odd_part.max((values[j] - mirror).abs());
        even_part = even_part.max((values[j] + mirror).abs());
    }
    (odd_part, even_part)
}

pub fn symmetry_class(a: &CirclePotential) -> SymmetryClass {
    let tol = PARITY_TOL * (1.0 + a.sup_norm());
    let re: Vec<f64> = a.samples().iter().map(|z| z.re).collect();
    let im: Vec<f64> = a.samples().iter().map(|z| z.im).collect();
    let (re_not_even, re_not_odd) = parity_split(&re);
    let (im_not_even, im_not_odd) = parity_split(&im);
    let re_even = re_not_even <= tol;
    let re_odd = re_not_odd <= tol;
    let im_even = im_not_even <= tol;
    let im_odd = im_not_odd <= tol;
    SymmetryClass {
        self_adjoint: im.iter().all(|v| v.abs() <= tol),
        pt_symmetric: re_even && im_odd,
        anti_p_self_adjoint: re_odd && im_even,
    }
}

/// Riesz bounds `(min xi^2, max xi^2)` of the eigenbasis.
pub fn riesz_bounds(a: &CirclePotential) -> (f64, f64) {
    let xi = xi_function(a);
    (xi.min_abs().powi(2), xi.max_abs().powi(2))
}

/// `sum_{|m| <= M} ||psi_m - phi_m||^2`, summed term by term.
pub fn bari_partial_sum(a: &CirclePotential, modes: usize) -> f64 {
    let fam = spectrum(a, modes);
    (0..fam.indices.len())
        .map(|r| {
            let diff: Vec<C64> = fam
                .psi
                .row(r)
                .iter()
                .zip(fam.phi.row(r).iter())
                .map(|(p, q)| p - q)
                .collect();
            spectral::norm_sq(&diff)
        })
        .sum()
}

/// `||xi - 1/xi||^2 / (2 pi)`: the common value of every term of the Bari sum.
pub fn bari_slope(a: &CirclePotential) -> f64 {
    let xi = xi_function(a);
    let diff: Vec<C64> = xi.values.iter().map(|v| v - 1.0 / v).collect();
    spectral::norm_sq(&diff) / (2.0 * PI)
}

/// `kappa_a = sup |omega| * sup |1/omega|`.
pub fn condition_number(a: &CirclePotential) -> f64 {
    omega(a).max_abs() * omega_inv(a).max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn i_sin(n: usize) -> CirclePotential {
        CirclePotential::from_fn(n, |x| c(0.0, x.sin())).unwrap()
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(CirclePotential::constant(c(1.0, 0.0), 6), Err(Error::InvalidGridSize(6))));
        assert!(matches!(CirclePotential::constant(c(1.0, 0.0), 2), Err(Error::InvalidGridSize(2))));
        assert!(matches!(
            CirclePotential::from_fourier(&[(8, c(1.0, 0.0))], 16),
            Err(Error::ModeOutOfBand { k: 8, max: 7 })
        ));
    }

    #[test]
    fn means() {
        let a = CirclePotential::constant(c(0.0, 1.0), 16).unwrap();
        assert!((mean(&a).mean - c(0.0, 1.0)).norm() < 1e-15);
        let a = CirclePotential::from_fn(32, |x| c(x.sin(), 0.0)).unwrap();
        assert!(mean(&a).mean.norm() < 1e-15);
        let a = CirclePotential::from_fn(64, |x| c(0.3, 0.7 * x.cos())).unwrap();
        let m = mean(&a);
        assert!((m.mean - c(0.3, 0.0)).norm() < 1e-15);
        assert_eq!(m.mean_re, m.mean.re);
        assert_eq!(m.mean_im, m.mean.im);
    }

    #[test]
    fn antiderivative_examples() {
        let one = CirclePotential::constant(c(1.0, 0.0), 16).unwrap();
        assert!((antiderivative(&one, 0.0).unwrap() - c(PI, 0.0)).norm() < 1e-14);
        let cos = CirclePotential::from_fn(16, |x| c(x.cos(), 0.0)).unwrap();
        assert!(antiderivative(&cos, PI).unwrap().norm() < 1e-14);
        // int_{-pi}^0 sin = -2
        assert!((antiderivative(&i_sin(16), 0.0).unwrap() - c(0.0, -2.0)).norm() < 1e-14);
        assert!(matches!(antiderivative(&cos, 4.0), Err(Error::AngleOutOfRange(_))));
    }

    #[test]
    fn antiderivative_at_pi_is_total_mass() {
        let a = CirclePotential::from_fourier(&[(0, c(0.2, -0.4)), (3, c(1.0, 1.0)), (-1, c(0.0, 0.5))], 32).unwrap();
        let full = antiderivative(&a, PI).unwrap();
        assert!((full - 2.0 * PI * mean(&a).mean).norm() < 1e-13);
        let grid_values = antiderivative_samples(&a);
        for (j, x) in a.grid().into_iter().enumerate() {
            assert!((grid_values[j] - antiderivative(&a, x).unwrap()).norm() < 1e-13);
        }
    }

    #[test]
    fn spectrum_examples() {
        let zero = CirclePotential::constant(c(0.0, 0.0), 16).unwrap();
        let s = spectrum(&zero, 1);
        assert_eq!(s.eigenvalues, vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let half = CirclePotential::constant(c(0.5, 0.0), 16).unwrap();
        assert_eq!(spectrum(&half, 0).eigenvalues, vec![c(-0.5, 0.0)]);
        let s = spectrum(&i_sin(32), 1);
        for (ev, m) in s.eigenvalues.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((ev - c(m, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn eigenfunctions_solve_the_ode() {
        let a = CirclePotential::from_fourier(&[(0, c(0.1, 0.2)), (1, c(0.3, -0.2)), (-2, c(0.0, 0.4))], 64).unwrap();
        let fam = spectrum(&a, 3);
        for (r, ev) in fam.eigenvalues.iter().enumerate() {
            let psi: Vec<C64> = fam.psi.row(r).iter().copied().collect();
            let d = spectral::derivative(&psi);
            for j in 0..a.n() {
                let lhs = -I * d[j] - a.samples()[j] * psi[j];
                assert!((lhs - ev * psi[j]).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn biorthogonality_examples() {
        let zero = CirclePotential::constant(c(0.0, 0.0), 16).unwrap();
        let g = biorth_gram(&zero, 2);
        assert_eq!(g.matrix.nrows(), 5);
        assert!(g.deviation_from_identity() < 1e-14);
        assert!(biorth_gram(&i_sin(64), 3).deviation_from_identity() < 1e-10);
        let a = CirclePotential::from_fn(64, |x| c(1.0, 1.0) * x.cos()).unwrap();
        let g = biorth_gram(&a, 4);
        assert!(!g.under_resolved);
        assert!(g.deviation_from_identity() < 1e-10);
    }

    #[test]
    fn gram_flags_under_resolution() {
        let a = CirclePotential::from_fourier(&[(7, c(1.0, 0.0))], 16).unwrap();
        assert!(biorth_gram(&a, 1).under_resolved);
    }

    #[test]
    fn omega_examples() {
        let zero = CirclePotential::constant(c(0.0, 0.0), 16).unwrap();
        assert!(omega(&zero).values.iter().all(|w| (w - 1.0).norm() < 1e-15));
        // constant a = c gives omega = e^{-i c pi}
        let k = c(0.7, -0.3);
        let a = CirclePotential::constant(k, 16).unwrap();
        let expected = (-I * k * PI).exp();
        assert!(omega(&a).values.iter().all(|w| (w - expected).norm() < 1e-14));
        // a = i sin x gives omega = exp(-cos x - 1)
        let a = i_sin(32);
        for (w, x) in omega(&a).values.iter().zip(a.grid()) {
            assert!((w - c((-x.cos() - 1.0).exp(), 0.0)).norm() < 1e-13);
        }
        let (l, r) = omega_endpoints(&CirclePotential::constant(c(0.37, 0.2), 16).unwrap());
        assert!((l - r).norm() < 1e-14);
    }

    #[test]
    fn omega_inverse_is_reciprocal() {
        let a = CirclePotential::from_fourier(&[(0, c(0.3, 0.5)), (2, c(0.2, 0.1))], 32).unwrap();
        for (w, v) in omega(&a).values.iter().zip(omega_inv(&a).values) {
            assert!((w * v - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn metric_examples() {
        let real = CirclePotential::from_fn(32, |x| c(x.cos() + 0.3, 0.0)).unwrap();
        assert!(metric_theta(&real).unwrap().values.iter().all(|t| (t - 1.0).norm() < 1e-14));
        // int_{-pi}^x sin = -cos x - 1
        let th = metric_theta(&i_sin(32)).unwrap();
        assert!((th.values[0] - 1.0).norm() < 1e-14);
        for (t, x) in th.values.iter().zip(i_sin(32).grid()) {
            assert!((t.re - (-2.0 * (x.cos() + 1.0)).exp()).abs() < 1e-13);
        }
        let i = CirclePotential::constant(I, 16).unwrap();
        assert!(matches!(metric_theta(&i), Err(Error::NotQuasiSelfAdjoint { .. })));
    }

    #[test]
    fn xi_examples() {
        let real = CirclePotential::from_fn(32, |x| c(x.sin(), 0.0)).unwrap();
        assert!(xi_function(&real).values.iter().all(|t| (t - 1.0).norm() < 1e-14));
        let i = CirclePotential::constant(I, 16).unwrap();
        let e = (-PI).exp();
        assert!(xi_function(&i).values.iter().all(|t| (t.re - e).abs() < 1e-15));
        let a = i_sin(32);
        for (t, x) in xi_function(&a).values.iter().zip(a.grid()) {
            assert!((t.re - (x.cos() + 1.0).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn quasi_self_adjointness_examples() {
        assert!(quasi_self_adjoint(&CirclePotential::from_fn(16, |x| c(x.cos(), 0.0)).unwrap()));
        assert!(quasi_self_adjoint(&i_sin(16)));
        assert!(!quasi_self_adjoint(&CirclePotential::constant(I, 16).unwrap()));
    }

    #[test]
    fn symmetry_examples() {
        let pt = CirclePotential::from_fn(32, |x| c(x.cos(), x.sin())).unwrap();
        let s = symmetry_class(&pt);
        assert!(s.pt_symmetric && !s.self_adjoint && !s.anti_p_self_adjoint);
        let anti = CirclePotential::from_fn(32, |x| c(x.sin(), x.cos())).unwrap();
        let s = symmetry_class(&anti);
        assert!(s.anti_p_self_adjoint && !s.pt_symmetric);
        let cos = CirclePotential::from_fn(32, |x| c(x.cos(), 0.0)).unwrap();
        let s = symmetry_class(&cos);
        assert!(s.self_adjoint && s.pt_symmetric && !s.anti_p_self_adjoint);
    }

    #[test]
    fn riesz_examples() {
        let real = CirclePotential::from_fn(32, |x| c(x.cos(), 0.0)).unwrap();
        let (lo, hi) = riesz_bounds(&real);
        assert!((lo - 1.0).abs() < 1e-14 && (hi - 1.0).abs() < 1e-14);
        let (lo, hi) = riesz_bounds(&CirclePotential::constant(I, 16).unwrap());
        let e = (-2.0 * PI).exp();
        assert!((lo - e).abs() < 1e-15 && (hi - e).abs() < 1e-15);
        // xi = exp(cos x + 1): grid min at x = -pi (value 1), max at x = 0 (e^4)
        let (lo, hi) = riesz_bounds(&i_sin(32));
        assert!((lo - 1.0).abs() < 1e-12);
        assert!((hi - 4f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn bari_examples() {
        let real = CirclePotential::from_fn(32, |x| c(x.cos(), 0.0)).unwrap();
        assert!(bari_partial_sum(&real, 5) < 1e-28);
        let a = i_sin(64);
        let s4 = bari_partial_sum(&a, 4);
        let s8 = bari_partial_sum(&a, 8);
        assert!((s4 / s8 - 9.0 / 17.0).abs() < 1e-12);
        assert!((bari_partial_sum(&a, 3) - 7.0 * bari_slope(&a)).abs() < 1e-10 * bari_partial_sum(&a, 3));
    }

    #[test]
    fn condition_number_examples() {
        let real = CirclePotential::from_fn(32, |x| c(x.cos(), 0.0)).unwrap();
        assert!((condition_number(&real) - 1.0).abs() < 1e-14);
        assert!((condition_number(&CirclePotential::constant(I, 16).unwrap()) - 1.0).abs() < 1e-13);
        // |omega| = exp(-cos x - 1) ranges over [e^{-2}, 1]
        assert!((condition_number(&i_sin(32)) - 2f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn resample_preserves_band_limited_functions() {
        let a = CirclePotential::from_fourier(&[(0, c(0.1, 0.0)), (3, c(0.0, 1.0))], 16).unwrap();
        let b = a.resample(64).unwrap();
        for x in [-3.0, -1.0, 0.2, 2.9] {
            assert!((a.eval(x) - b.eval(x)).norm() < 1e-13);
        }
    }
}
