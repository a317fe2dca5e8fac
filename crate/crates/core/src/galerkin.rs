//! Matrix discretizations of `P_a` in the truncated Fourier basis, with a
//! periodic finite-difference variant as an independent cross-check.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Schur};
use serde::Serialize;

use crate::circle::{self, CirclePotential};
use crate::error::{Error, Result};
use crate::spectral::{self, C64, I};

const SOLVER_EPS: f64 = 1e-15;
const SOLVER_MAX_ITER: usize = 10_000;
/// Relative size below which Fourier coefficients are dropped from the
/// band used by [`lambda_min`].
const BAND_CUTOFF: f64 = 1e-16;
/// Tolerance of the doubling test in [`lambda_converged`].
pub const DOUBLING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "size")]
pub enum Basis {
    /// Exponentials `e^{imx}`, `m = -M..=M`.
    Fourier(usize),
    /// Point values on the uniform grid of the given size.
    Grid(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: DMatrix<C64>,
    pub basis: Basis,
}

impl OperatorMatrix {
    /// Entries as nested `[re, im]` pairs, row by row.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.entries.nrows())
            .map(|i| {
                (0..self.entries.ncols())
                    .map(|j| {
                        let z = self.entries[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({ "basis": self.basis, "entries": rows })
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralResult {
    /// Eigenvalues of the square truncation, sorted by real then imaginary part.
    pub eigenvalues: Vec<C64>,
    /// Approximation of `lambda_a` (square of the smallest singular value).
    pub smallest_singular_sq: f64,
    pub truncation: usize,
    /// `||(P^* P - lambda) v||` for the computed singular vector `v`.
    pub residual: f64,
}

fn check_band(a: &CirclePotential, needed: usize) -> Result<()> {
    // coefficients beyond the band are zero only if the grid resolves `a`
    if needed > a.band() && a.tail(a.n() / 4) > 1e-12 * (1.0 + a.sup_norm()) {
        return Err(Error::InsufficientBand {
            needed,
            available: a.band(),
        });
    }
    Ok(())
}

/// Fourier matrix of `P_a` with rows `|m| <= rows` and columns `|n| <= cols`:
/// entry `m delta_{mn} - c_{m-n}`.
fn fourier_block(a: &CirclePotential, rows: usize, cols: usize) -> DMatrix<C64> {
    let (rr, cc) = (rows as i64, cols as i64);
    DMatrix::from_fn(2 * rows + 1, 2 * cols + 1, |i, j| {
        let m = i as i64 - rr;
        let n = j as i64 - cc;
        let diag = if m == n { C64::new(m as f64, 0.0) } else { C64::new(0.0, 0.0) };
        diag - a.coefficient(m - n)
    })
}

pub fn momentum_matrix(a: &CirclePotential, modes: usize) -> Result<OperatorMatrix> {
    check_band(a, 2 * modes)?;
    Ok(OperatorMatrix {
        entries: fourier_block(a, modes, modes),
        basis: Basis::Fourier(modes),
    })
}

/// Matrix of `P_a^* = P_{conj a}`.
pub fn adjoint_matrix(a: &CirclePotential, modes: usize) -> Result<OperatorMatrix> {
    momentum_matrix(&a.conj(), modes)
}

fn sort_spectrum(values: &mut [C64]) {
    values.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
}

/// Eigenvalues of a dense complex matrix via the Schur form.
pub fn eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    let schur = Schur::try_new(m.clone(), SOLVER_EPS, SOLVER_MAX_ITER)
        .ok_or_else(|| Error::Solver("Schur iteration did not converge".into()))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::Solver("Schur form is not triangular".into()))?;
    let mut ev: Vec<C64> = ev.iter().copied().collect();
    sort_spectrum(&mut ev);
    Ok(ev)
}

/// Smallest singular value of `m` with its right singular vector.
fn smallest_singular(m: &DMatrix<C64>) -> Result<(f64, DVector<C64>)> {
    let svd = m
        .clone()
        .try_svd(false, true, SOLVER_EPS, SOLVER_MAX_ITER)
        .ok_or_else(|| Error::Solver("SVD did not converge".into()))?;
    let (idx, sigma) = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .ok_or_else(|| Error::Solver("empty matrix".into()))?;
    let v_t = svd.v_t.ok_or_else(|| Error::Solver("missing singular vectors".into()))?;
    let v = v_t.row(idx).adjoint();
    Ok((sigma, v))
}

/// Matrix of `P_a` restricted to `|n| <= modes`, keeping every row the
/// image can reach. Its smallest singular value is the Ritz value of
/// `P_a^* P_a` on that subspace, an upper bound for `lambda_a`.
fn ritz_matrix(a: &CirclePotential, modes: usize) -> DMatrix<C64> {
    let band = a.effective_band(BAND_CUTOFF);
    fourier_block(a, modes + band, modes)
}

fn ritz_lambda(a: &CirclePotential, modes: usize) -> Result<(f64, f64)> {
    let p = ritz_matrix(a, modes);
    let (sigma, v) = smallest_singular(&p)?;
    let lambda = sigma * sigma;
    let pv = &p * &v;
    let normal = p.adjoint() * pv - v * C64::new(lambda, 0.0);
    Ok((lambda, normal.norm()))
}

/// Galerkin approximation of `lambda_a`, the bottom of the spectrum of
/// `P_a^* P_a`, together with the eigenvalues of the square truncation.
pub fn lambda_min(a: &CirclePotential, modes: usize) -> Result<SpectralResult> {
    let square = momentum_matrix(a, modes)?;
    let (lambda, residual) = ritz_lambda(a, modes)?;
    Ok(SpectralResult {
        eigenvalues: eigenvalues(&square.entries)?,
        smallest_singular_sq: lambda,
        truncation: modes,
        residual,
    })
}

/// `lambda_a` alone, skipping the eigenvalue computation.
pub fn lambda_value(a: &CirclePotential, modes: usize) -> Result<f64> {
    check_band(a, 2 * modes)?;
    ritz_lambda(a, modes).map(|(l, _)| l)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergedLambda {
    pub lambda: f64,
    pub coarse: f64,
    pub modes: usize,
    pub converged: bool,
}

/// Evaluates `lambda_a` at `modes` and `2 * modes` and accepts the finer
/// value when the two agree within [`DOUBLING_TOL`].
pub fn lambda_converged(a: &CirclePotential, modes: usize) -> Result<ConvergedLambda> {
    let coarse = ritz_lambda(a, modes)?.0;
    let fine = ritz_lambda(a, 2 * modes)?.0;
    Ok(ConvergedLambda {
        lambda: fine,
        coarse,
        modes: 2 * modes,
        converged: (coarse - fine).abs() <= DOUBLING_TOL,
    })
}

/// Applies `-i d/dx - q` on the grid with a spectral derivative.
fn apply_momentum(q: &[C64], f: &[C64]) -> Vec<C64> {
    spectral::derivative(f)
        .into_iter()
        .zip(q.iter().zip(f))
        .map(|(df, (qj, fj))| -I * df - qj * fj)
        .collect()
}

fn test_modes(a: &CirclePotential, modes: usize) -> i64 {
    modes.min(a.n() / 4) as i64
}

/// Max-norm of `Omega P_a Omega^{-1} e_n - P_<a> e_n` over the normalized
/// exponentials `|n| <= M` (capped at N/4), on the grid of `a`.
pub fn similarity_residual(a: &CirclePotential, modes: usize) -> f64 {
    let w = circle::omega(a);
    let w_inv = circle::omega_inv(a);
    let avg = circle::mean(a).mean;
    let n = a.n();
    let top = test_modes(a, modes);
    let mut worst: f64 = 0.0;
    for k in -top..=top {
        let e = spectral::exponential(k, n);
        let pulled = w_inv.apply(&e);
        let image = w.apply(&apply_momentum(a.samples(), &pulled));
        let target = k as f64 - avg;
        for (u, v) in image.iter().zip(&e) {
            worst = worst.max((u - target * v).norm() * (2.0 * PI).sqrt());
        }
    }
    worst
}

/// Max-norm of `Theta P_a Theta^{-1} e_n - P_a^* e_n` over the normalized
/// exponentials `|n| <= M` (capped at N/4).
pub fn metric_residual(a: &CirclePotential, modes: usize) -> Result<f64> {
    let theta = circle::metric_theta(a)?;
    let theta_inv: Vec<C64> = theta.values.iter().map(|t| 1.0 / t).collect();
    let conj: Vec<C64> = a.samples().iter().map(|z| z.conj()).collect();
    let n = a.n();
    let top = test_modes(a, modes);
    let mut worst: f64 = 0.0;
    for k in -top..=top {
        let e = spectral::exponential(k, n);
        let pulled: Vec<C64> = theta_inv.iter().zip(&e).map(|(t, v)| t * v).collect();
        let image = theta.apply(&apply_momentum(a.samples(), &pulled));
        let target = apply_momentum(&conj, &e);
        for (u, v) in image.iter().zip(&target) {
            worst = worst.max((u - v).norm() * (2.0 * PI).sqrt());
        }
    }
    Ok(worst)
}

/// Periodic central-difference matrix of `-i d/dx - a` on `n` points,
/// with `a` sampled from its band-limited interpolant.
pub fn fd_momentum_matrix(a: &CirclePotential, n: usize) -> Result<OperatorMatrix> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!("finite-difference grid needs N >= 16, got {n}")));
    }
    let h = 2.0 * PI / n as f64;
    let coef = -I / (2.0 * h);
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        m[(j, (j + 1) % n)] += coef;
        m[(j, (j + n - 1) % n)] -= coef;
        m[(j, j)] -= a.eval(spectral::grid_point(j, n));
    }
    Ok(OperatorMatrix {
        entries: m,
        basis: Basis::Grid(n),
    })
}

/// Finite-difference estimate of `lambda_a`.
pub fn fd_lambda(a: &CirclePotential, n: usize) -> Result<f64> {
    let m = fd_momentum_matrix(a, n)?;
    let sv = m
        .entries
        .try_svd(false, false, SOLVER_EPS, SOLVER_MAX_ITER)
        .ok_or_else(|| Error::Solver("SVD did not converge".into()))?
        .singular_values;
    Ok(sv.min().powi(2))
}
