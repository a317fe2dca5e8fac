//! Radial profiles `lambda_a(r)` of the angular operators and lower bounds
//! for the constants of magnetic Hardy inequalities.

mod constants;
mod cutoff;
mod mu;
mod optimal;

use rayon::prelude::*;
use serde::Serialize;

use crate::circle;
use crate::error::{Error, Result};
use crate::field::{ComplexField2D, Point};
use crate::galerkin;

pub use constants::{
    a_r, ab_constant, hardy_constant_compact, hardy_constant_log, k_r, log_weight_ratio_inf, robust_constant,
    EstimateKind, HardyEstimate, KrResult, KrSearch, LedgerEntry, LedgerValue, RobustOptions,
};
pub use cutoff::{build_cutoff, smooth_step, smooth_step_derivative, CutoffFunction};
pub use mu::{mu_disk, mu_disk_at, MuOptions, MuResult};
pub use optimal::{optimality_sequence, OptimalityPoint, SequenceProfile};

/// First positive zero of the Bessel function `J_0`.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

/// Resolution knobs for [`lambda_curve_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveOptions {
    /// Fourier truncation `M`; `lambda` is taken at `2M` after the doubling test.
    pub modes: usize,
    /// Number of angles sampling each slice `a(r, .)`.
    pub grid: usize,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self { modes: 16, grid: 256 }
    }
}

/// `r -> lambda_a(r)` on a grid of radii with flux annotations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaCurve {
    pub radii: Vec<f64>,
    pub lambda: Vec<f64>,
    /// `|lambda(M) - lambda(2M)|` at each radius.
    pub gap: Vec<f64>,
    pub converged: Vec<bool>,
    pub mean_re: Vec<f64>,
    pub mean_im: Vec<f64>,
    /// `<|a(r, .)|^2>`
    pub mean_abs_sq: Vec<f64>,
    /// `sup_theta |a(r, theta)|`
    pub sup_abs: Vec<f64>,
    pub options: CurveOptions,
}

impl LambdaCurve {
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }

    /// Lower estimate of `lambda` at index `i`: the computed value minus ten
    /// times the doubling gap.
    pub fn lambda_lower(&self, i: usize) -> f64 {
        (self.lambda[i] - 10.0 * self.gap[i] - 1e-13).max(0.0)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(["r", "lambda", "mean_re", "mean_im", "converged"]).map_err(io)?;
        for i in 0..self.len() {
            w.write_record([
                format!("{:e}", self.radii[i]),
                format!("{:e}", self.lambda[i]),
                format!("{:e}", self.mean_re[i]),
                format!("{:e}", self.mean_im[i]),
                self.converged[i].to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
    }
}

pub fn lambda_curve(field: &ComplexField2D, radii: &[f64], modes: usize) -> Result<LambdaCurve> {
    lambda_curve_with(field, radii, CurveOptions { modes, ..Default::default() })
}

struct Sample {
    lambda: f64,
    gap: f64,
    converged: bool,
    mean: crate::C64,
    mean_abs_sq: f64,
    sup_abs: f64,
}

fn sample_radius(field: &ComplexField2D, r: f64, opts: CurveOptions) -> Result<Sample> {
    let slice = field.slice(r, opts.grid)?;
    let conv = galerkin::lambda_converged(&slice, opts.modes)?;
    Ok(Sample {
        lambda: conv.lambda,
        gap: (conv.lambda - conv.coarse).abs(),
        converged: conv.converged,
        mean: circle::mean(&slice).mean,
        mean_abs_sq: slice.mean_abs_sq(),
        sup_abs: slice.sup_norm(),
    })
}

/// `lambda_a(r)` at `r`, with the doubling gap.
pub fn lambda_at(field: &ComplexField2D, r: f64, opts: CurveOptions) -> Result<(f64, f64)> {
    sample_radius(field, r, opts).map(|s| (s.lambda, s.gap))
}

pub fn lambda_curve_with(field: &ComplexField2D, radii: &[f64], opts: CurveOptions) -> Result<LambdaCurve> {
    if radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidArgument("radii must be positive".into()));
    }
    let samples = radii
        .par_iter()
        .map(|&r| sample_radius(field, r, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(LambdaCurve {
        radii: radii.to_vec(),
        lambda: samples.iter().map(|s| s.lambda).collect(),
        gap: samples.iter().map(|s| s.gap).collect(),
        converged: samples.iter().map(|s| s.converged).collect(),
        mean_re: samples.iter().map(|s| s.mean.re).collect(),
        mean_im: samples.iter().map(|s| s.mean.im).collect(),
        mean_abs_sq: samples.iter().map(|s| s.mean_abs_sq).collect(),
        sup_abs: samples.iter().map(|s| s.sup_abs).collect(),
        options: opts,
    })
}

/// Log-spaced radii `lo .. hi` (inclusive), `count >= 2`.
pub fn log_radii(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1).max(1) as f64).exp())
        .collect()
}

/// `lambda_a(|x|) / |x|^2` with `lambda / r^2` interpolated linearly in `r`.
pub fn local_hardy_weight(curve: &LambdaCurve, x: Point) -> Result<f64> {
    let r = x[0].hypot(x[1]);
    let (lo, hi) = match (curve.radii.first(), curve.radii.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Err(Error::InvalidArgument("empty curve".into())),
    };
    if r < lo || r > hi {
        return Err(Error::Extrapolation { r, lo, hi });
    }
    let q = |i: usize| curve.lambda[i] / (curve.radii[i] * curve.radii[i]);
    let k = curve.radii.partition_point(|&t| t < r);
    if k == 0 {
        return Ok(q(0));
    }
    let (r1, r2) = (curve.radii[k - 1], curve.radii[k]);
    let t = (r - r1) / (r2 - r1);
    Ok((1.0 - t) * q(k - 1) + t * q(k))
}

/// Constants of the one-dimensional inequalities used around `r0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaValues {
    /// Lowest eigenvalue of the radial Laplacian on `(0, r0)`, Dirichlet at `r0`.
    pub interior: f64,
    /// Sharp constant of the exterior logarithmic Hardy inequality.
    pub exterior: f64,
    pub gamma: f64,
}

pub fn gamma_1d(r0: f64) -> Result<GammaValues> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::InvalidArgument(format!("r0 must be positive, got {r0}")));
    }
    let interior = (J0_FIRST_ZERO / r0).powi(2);
    let exterior = 0.25;
    Ok(GammaValues {
        interior,
        exterior,
        gamma: interior.min(exterior),
    })
}
