//! Complex magnetic fields in the plane and their vector potentials in
//! polar form.
//!
//! A field is a finite sum of parametric components. The canonical
//! (transverse) gauge is evaluated through the angular potential
//! `a(r, theta) = int_0^r B(t cos theta, t sin theta) t dt`, from which
//! `A(x) = (-sin theta, cos theta) a / r`.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle::{self, CirclePotential, Multiplier, MultiplierKind};
use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};
use crate::spectral::{self, C64, I};

/// `E_1(1)`, the exponential integral at one.
const E1_ONE: f64 = 0.219_383_934_395_520_273_677_163_775_460_121_6;

/// `(1/2pi) int exp(-1/(1-|u|^2)) du` over the unit disk.
pub const BUMP_FLUX: f64 = 0.5 * (0.367_879_441_171_442_33 - E1_ONE);

/// Distance to the integers above which a value counts as non-integer.
pub const FLUX_TOL: f64 = 1e-9;
/// Distance below which a value counts as an integer; values between the
/// two thresholds are indeterminate.
pub const INTEGER_TOL: f64 = 1e-12;

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    /// `exp(-|u|^2 / 2)`
    Gaussian,
    /// `exp(-1 / (1 - |u|^2))` for `|u| < 1`
    CompactBump,
    /// Indicator of `|u| < 1`
    DiskConstant,
}

/// One term `amplitude * profile((x - center) / scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldComponent {
    pub kind: ComponentKind,
    pub center: Point,
    pub scale: f64,
    pub amplitude: C64,
}

impl FieldComponent {
    pub fn eval(&self, x: Point) -> C64 {
        let u2 = ((x[0] - self.center[0]).powi(2) + (x[1] - self.center[1]).powi(2)) / (self.scale * self.scale);
        let profile = match self.kind {
            ComponentKind::Gaussian => (-0.5 * u2).exp(),
            ComponentKind::CompactBump if u2 < 1.0 => (-1.0 / (1.0 - u2)).exp(),
            ComponentKind::DiskConstant if u2 < 1.0 => 1.0,
            _ => 0.0,
        };
        self.amplitude * profile
    }

    /// `(1/2pi) int B`.
    pub fn flux(&self) -> C64 {
        let s2 = self.scale * self.scale;
        let shape = match self.kind {
            ComponentKind::Gaussian => 1.0,
            ComponentKind::CompactBump => BUMP_FLUX,
            ComponentKind::DiskConstant => 0.5,
        };
        self.amplitude * s2 * shape
    }

    pub fn support_radius(&self) -> Option<f64> {
        match self.kind {
            ComponentKind::Gaussian => None,
            _ => Some(self.center[0].hypot(self.center[1]) + self.scale),
        }
    }

    pub fn sup_abs(&self) -> f64 {
        match self.kind {
            ComponentKind::CompactBump => self.amplitude.norm() * (-1f64).exp(),
            _ => self.amplitude.norm(),
        }
    }

    /// Radii `t in (0, r)` where the ray from the origin in direction
    /// `theta` crosses the support boundary or the centre line.
    fn ray_breakpoints(&self, theta: f64, r: f64, out: &mut Vec<f64>) {
        let (c, s) = (theta.cos(), theta.sin());
        let along = c * self.center[0] + s * self.center[1];
        if along > 0.0 && along < r {
            out.push(along);
        }
        if self.kind == ComponentKind::Gaussian {
            return;
        }
        let disc = along * along - (self.center[0].powi(2) + self.center[1].powi(2)) + self.scale * self.scale;
        if disc > 0.0 {
            let root = disc.sqrt();
            for t in [along - root, along + root] {
                if t > 0.0 && t < r {
                    out.push(t);
                }
            }
        }
    }
}

/// Complex field `B` given as a sum of parametric components.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ComplexField2D {
    pub components: Vec<FieldComponent>,
}

impl ComplexField2D {
    pub fn new(components: Vec<FieldComponent>) -> Result<Self> {
        for c in &components {
            if !(c.scale > 0.0 && c.scale.is_finite()) {
                return Err(Error::InvalidArgument(format!("component scale must be positive, got {}", c.scale)));
            }
            if !(c.center[0].is_finite() && c.center[1].is_finite() && c.amplitude.is_finite()) {
                return Err(Error::InvalidArgument("component parameters must be finite".into()));
            }
        }
        Ok(Self { components })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    fn single(kind: ComponentKind, center: Point, scale: f64, amplitude: C64) -> Result<Self> {
        Self::new(vec![FieldComponent {
            kind,
            center,
            scale,
            amplitude,
        }])
    }

    pub fn gaussian(center: Point, scale: f64, amplitude: C64) -> Result<Self> {
        Self::single(ComponentKind::Gaussian, center, scale, amplitude)
    }

    pub fn compact_bump(center: Point, scale: f64, amplitude: C64) -> Result<Self> {
        Self::single(ComponentKind::CompactBump, center, scale, amplitude)
    }

    /// Compact bump scaled so that `(1/2pi) int B = flux`.
    pub fn compact_bump_with_flux(center: Point, scale: f64, flux: C64) -> Result<Self> {
        Self::compact_bump(center, scale, flux / (scale * scale * BUMP_FLUX))
    }

    pub fn disk_constant(center: Point, radius: f64, value: C64) -> Result<Self> {
        Self::single(ComponentKind::DiskConstant, center, radius, value)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ComplexField2D = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.components)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("field serialization cannot fail")
    }

    pub fn eval(&self, x: Point) -> C64 {
        self.components.iter().map(|c| c.eval(x)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.amplitude == C64::new(0.0, 0.0))
    }

    /// Radius of a disk centred at the origin containing the support, or
    /// `None` when some component is not compactly supported.
    pub fn support_radius(&self) -> Option<f64> {
        self.components
            .iter()
            .filter(|c| c.amplitude != C64::new(0.0, 0.0))
            .try_fold(0.0f64, |acc, c| c.support_radius().map(|s| acc.max(s)))
    }

    /// `(1/2pi) int B` summed over components.
    pub fn total_flux(&self) -> C64 {
        self.components.iter().map(|c| c.flux()).sum()
    }

    pub fn sup_abs(&self) -> f64 {
        self.components.iter().map(|c| c.sup_abs()).sum()
    }

    fn breakpoints(&self, theta: f64, r: f64) -> Vec<f64> {
        let mut pts = vec![0.0, r];
        for c in &self.components {
            c.ray_breakpoints(theta, r, &mut pts);
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * r);
        pts
    }

    /// `a(r, theta) = int_0^r B(t cos theta, t sin theta) t dt`.
    pub fn polar_potential(&self, r: f64, theta: f64) -> Result<C64> {
        if r < 0.0 || !r.is_finite() {
            return Err(Error::InvalidArgument(format!("radius must be non-negative, got {r}")));
        }
        if r == 0.0 || self.is_zero() {
            return Ok(C64::new(0.0, 0.0));
        }
        let (c, s) = (theta.cos(), theta.sin());
        let tol = Tolerance {
            abs: 1e-15,
            rel: 1e-12,
            max_intervals: 4000,
        };
        quadrature::integrate_adaptive(|t| self.eval([t * c, t * s]) * t, &self.breakpoints(theta, r), tol)
    }

    /// Samples of `a(r, .)` on the uniform angular grid of size `n`.
    pub fn slice(&self, r: f64, n: usize) -> Result<CirclePotential> {
        if !spectral::is_valid_grid(n) {
            return Err(Error::InvalidGridSize(n));
        }
        let samples = spectral::grid(n)
            .into_iter()
            .map(|theta| self.polar_potential(r, theta))
            .collect::<Result<Vec<_>>>()?;
        CirclePotential::from_samples(samples)
    }
}

/// A complex vector potential `A: R^2 -> C^2`.
pub trait VectorPotential: Send + Sync {
    fn eval(&self, x: Point) -> Result<[C64; 2]>;

    /// Angular potential `r (-sin theta, cos theta) . A(r cos theta, r sin theta)`.
    fn polar(&self, r: f64, theta: f64) -> Result<C64> {
        let (c, s) = (theta.cos(), theta.sin());
        let a = self.eval([r * c, r * s])?;
        Ok(r * (-s * a[0] + c * a[1]))
    }

    /// Whether `x . A(x) = 0` holds identically.
    fn is_transverse(&self) -> bool {
        false
    }

    /// `int A . dl` along the straight segment from `p` to `q`.
    fn line_integral(&self, p: Point, q: Point, rule: &(Vec<f64>, Vec<f64>)) -> Result<C64> {
        let d = [q[0] - p[0], q[1] - p[1]];
        let mut total = C64::new(0.0, 0.0);
        for (x, w) in rule.0.iter().zip(&rule.1) {
            let s = 0.5 * (x + 1.0);
            let a = self.eval([p[0] + s * d[0], p[1] + s * d[1]])?;
            total += 0.5 * w * (a[0] * d[0] + a[1] * d[1]);
        }
        Ok(total)
    }

    /// `int A . dl` along the arc of radius `r` from angle `t0` to `t1`.
    fn arc_integral(&self, r: f64, t0: f64, t1: f64, rule: &(Vec<f64>, Vec<f64>)) -> Result<C64> {
        let half = 0.5 * (t1 - t0);
        let mut total = C64::new(0.0, 0.0);
        for (x, w) in rule.0.iter().zip(&rule.1) {
            let theta = t0 + half * (x + 1.0);
            // A . (r dtheta theta-hat) = a(r, theta) dtheta
            total += w * half * self.polar(r, theta)?;
        }
        Ok(total)
    }
}

/// Transverse gauge `A(x) = (-x_2, x_1) int_0^1 B(tx) t dt` of a field.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugePotential {
    pub field: ComplexField2D,
}

impl GaugePotential {
    pub fn new(field: ComplexField2D) -> Self {
        Self { field }
    }
}

impl VectorPotential for GaugePotential {
    fn eval(&self, x: Point) -> Result<[C64; 2]> {
        let r2 = x[0] * x[0] + x[1] * x[1];
        if r2 == 0.0 {
            return Ok([C64::new(0.0, 0.0); 2]);
        }
        let a = self.field.polar_potential(r2.sqrt(), x[1].atan2(x[0]))?;
        let k = a / r2;
        Ok([-x[1] * k, x[0] * k])
    }

    fn polar(&self, r: f64, theta: f64) -> Result<C64> {
        self.field.polar_potential(r, theta)
    }

    fn is_transverse(&self) -> bool {
        true
    }
}

/// Aharonov-Bohm potential `(-x_2, x_1) alpha / |x|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbPotential {
    pub alpha: C64,
}

impl VectorPotential for AbPotential {
    fn eval(&self, x: Point) -> Result<[C64; 2]> {
        let r2 = x[0] * x[0] + x[1] * x[1];
        if r2 == 0.0 {
            return Err(Error::InvalidArgument("Aharonov-Bohm potential is singular at the origin".into()));
        }
        let k = self.alpha / r2;
        Ok([-x[1] * k, x[0] * k])
    }

    fn polar(&self, _r: f64, _theta: f64) -> Result<C64> {
        Ok(self.alpha)
    }

    fn is_transverse(&self) -> bool {
        true
    }
}

/// Complex Gaussian `weight * exp(-|x - center|^2 / (2 scale^2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianTerm {
    pub center: Point,
    pub scale: f64,
    pub weight: C64,
}

/// Pure gauge `A = grad F` with `F` a sum of complex Gaussians; its field
/// vanishes identically.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExactGradient {
    pub terms: Vec<GaussianTerm>,
}

impl ExactGradient {
    pub fn potential_value(&self, x: Point) -> C64 {
        self.terms
            .iter()
            .map(|t| {
                let d2 = (x[0] - t.center[0]).powi(2) + (x[1] - t.center[1]).powi(2);
                t.weight * (-0.5 * d2 / (t.scale * t.scale)).exp()
            })
            .sum()
    }
}

impl VectorPotential for ExactGradient {
    fn eval(&self, x: Point) -> Result<[C64; 2]> {
        let mut out = [C64::new(0.0, 0.0); 2];
        for t in &self.terms {
            let s2 = t.scale * t.scale;
            let d = [x[0] - t.center[0], x[1] - t.center[1]];
            let g = t.weight * (-0.5 * (d[0] * d[0] + d[1] * d[1]) / s2).exp() / s2;
            out[0] -= g * d[0];
            out[1] -= g * d[1];
        }
        Ok(out)
    }
}

/// Sum of vector potentials.
#[derive(Clone, Default)]
pub struct SumPotential {
    pub parts: Vec<Arc<dyn VectorPotential>>,
}

impl VectorPotential for SumPotential {
    fn eval(&self, x: Point) -> Result<[C64; 2]> {
        let mut out = [C64::new(0.0, 0.0); 2];
        for p in &self.parts {
            let a = p.eval(x)?;
            out[0] += a[0];
            out[1] += a[1];
        }
        Ok(out)
    }

    fn polar(&self, r: f64, theta: f64) -> Result<C64> {
        self.parts.iter().map(|p| p.polar(r, theta)).sum()
    }

    fn is_transverse(&self) -> bool {
        self.parts.iter().all(|p| p.is_transverse())
    }
}

/// Angular means of `a(r, .)` on a grid of radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxProfile {
    pub radii: Vec<f64>,
    pub mean_re: Vec<f64>,
    pub mean_im: Vec<f64>,
    pub total_re: f64,
    pub total_im: f64,
}

impl FluxProfile {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(["r", "mean_re", "mean_im"]).map_err(io)?;
        for i in 0..self.radii.len() {
            w.write_record([
                format!("{:e}", self.radii[i]),
                format!("{:e}", self.mean_re[i]),
                format!("{:e}", self.mean_im[i]),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
    }
}

/// Angles used for the angular means in [`flux_profile`].
pub const PROFILE_ANGLES: usize = 256;

pub fn flux_profile(field: &ComplexField2D, radii: &[f64]) -> Result<FluxProfile> {
    if radii.iter().any(|&r| !(r > 0.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("radii must be positive and strictly increasing".into()));
    }
    let means = radii
        .par_iter()
        .map(|&r| field.slice(r, PROFILE_ANGLES).map(|s| circle::mean(&s).mean))
        .collect::<Result<Vec<_>>>()?;
    let total = field.total_flux();
    Ok(FluxProfile {
        radii: radii.to_vec(),
        mean_re: means.iter().map(|m| m.re).collect(),
        mean_im: means.iter().map(|m| m.im).collect(),
        total_re: total.re,
        total_im: total.im,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "alpha")]
pub enum FluxMode {
    /// Limits of the angular means as `r -> infinity`.
    Asymptotic,
    /// Some sampled radius.
    SomeRadius,
    /// Aharonov-Bohm coupling.
    AharonovBohm(C64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FluxVerdict {
    Holds,
    Fails,
    Indeterminate,
}

impl FluxVerdict {
    pub fn holds(self) -> bool {
        self == FluxVerdict::Holds
    }
}

pub fn distance_to_integer(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// Classifies `Re m notin Z or Im m != 0` for a single complex mean.
pub fn flux_verdict(m: C64) -> FluxVerdict {
    let d = distance_to_integer(m.re).max(m.im.abs());
    if d > FLUX_TOL {
        FluxVerdict::Holds
    } else if d <= INTEGER_TOL {
        FluxVerdict::Fails
    } else {
        FluxVerdict::Indeterminate
    }
}

pub fn check_flux_condition(profile: &FluxProfile, mode: FluxMode) -> FluxVerdict {
    match mode {
        FluxMode::AharonovBohm(alpha) => flux_verdict(alpha),
        FluxMode::Asymptotic => flux_verdict(C64::new(profile.total_re, profile.total_im)),
        FluxMode::SomeRadius => {
            let verdicts: Vec<_> = profile
                .mean_re
                .iter()
                .zip(&profile.mean_im)
                .map(|(&re, &im)| flux_verdict(C64::new(re, im)))
                .collect();
            if verdicts.contains(&FluxVerdict::Holds) {
                FluxVerdict::Holds
            } else if verdicts.contains(&FluxVerdict::Indeterminate) {
                FluxVerdict::Indeterminate
            } else {
                FluxVerdict::Fails
            }
        }
    }
}

/// `max |rot A - B|` over the sample points, with central differences of
/// step `h`.
pub fn curl_residual<P: VectorPotential + ?Sized>(
    potential: &P,
    field: &ComplexField2D,
    points: &[Point],
    h: f64,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &x in points {
        let ax_p = potential.eval([x[0] + h, x[1]])?;
        let ax_m = potential.eval([x[0] - h, x[1]])?;
        let ay_p = potential.eval([x[0], x[1] + h])?;
        let ay_m = potential.eval([x[0], x[1] - h])?;
        let rot = (ax_p[1] - ax_m[1] - ay_p[0] + ay_m[0]) / (2.0 * h);
        worst = worst.max((rot - field.eval(x)).norm());
    }
    Ok(worst)
}

/// Weight `w(x) = exp(int_{-pi}^x Im a)` on the grid.
pub fn weight_w(a: &CirclePotential) -> Multiplier {
    let xi = circle::xi_function(a);
    let mean_im = circle::mean(a).mean_im;
    // xi = exp(<Im a> x - int Im a), hence w = exp(<Im a> x) / xi
    let values = a
        .grid()
        .iter()
        .zip(&xi.values)
        .map(|(&x, v)| C64::new((mean_im * x).exp() / v.re, 0.0))
        .collect();
    Multiplier {
        kind: MultiplierKind::W,
        values,
    }
}

/// Both sides of `int |P_a psi|^2 = int |P_{Re a}(w psi)|^2 w^{-2}` for
/// periodic grid samples `psi`.
pub fn weighted_form_identity(a: &CirclePotential, psi: &[C64]) -> Result<(f64, f64)> {
    if psi.len() != a.n() {
        return Err(Error::InvalidArgument(format!(
            "psi has {} samples, potential has {}",
            psi.len(),
            a.n()
        )));
    }
    let apply = |q: &[C64], f: &[C64], df: &[C64]| -> Vec<C64> {
        (0..f.len()).map(|j| -I * df[j] - q[j] * f[j]).collect()
    };
    let lhs = spectral::norm_sq(&apply(a.samples(), psi, &spectral::derivative(psi)));

    let w = weight_w(a);
    let mean_im = circle::mean(a).mean_im;
    let xs = a.grid();
    // w = e^{<Im a>(x + pi)} p with p periodic
    let growth: Vec<f64> = xs.iter().map(|&x| (mean_im * (x + PI)).exp()).collect();
    let periodic: Vec<C64> = (0..psi.len()).map(|j| w.values[j] / growth[j] * psi[j]).collect();
    let dp = spectral::derivative(&periodic);
    let phi: Vec<C64> = (0..psi.len()).map(|j| w.values[j] * psi[j]).collect();
    let dphi: Vec<C64> = (0..psi.len()).map(|j| mean_im * phi[j] + growth[j] * dp[j]).collect();
    let re_a: Vec<C64> = a.samples().iter().map(|z| C64::new(z.re, 0.0)).collect();
    let image = apply(&re_a, &phi, &dphi);
    let weighted: Vec<C64> = image.iter().zip(&w.values).map(|(v, wj)| v / wj).collect();
    Ok((lhs, spectral::norm_sq(&weighted)))
}
