//! Radial sequence whose Hardy quotient tends to zero.
//!
//! In the variable `s = ln r`, `f_n` is a hat on `[ln n, 3 ln n]` of height
//! one, with its three corners rounded by a `C^2` ramp of half-width
//! `0.01 ln n`. The rounding is placed inside the hat so the support stays
//! in `[n, n^3]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_real, Tolerance};

/// Half-width of each rounded corner, relative to `ln n`.
pub const ROUNDING: f64 = 0.01;

/// Piecewise-logarithmic profile `f_n(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SequenceProfile {
    pub n: f64,
    log_n: f64,
    delta: f64,
}

/// `C^2` approximation of `max(t, 0)`, exact for `|t| >= delta`.
fn ramp(t: f64, delta: f64) -> f64 {
    if t <= -delta {
        0.0
    } else if t >= delta {
        t
    } else {
        let u = (t + delta) / (2.0 * delta);
        2.0 * delta * (u * u * u - 0.5 * u * u * u * u)
    }
}

fn ramp_slope(t: f64, delta: f64) -> f64 {
    if t <= -delta {
        0.0
    } else if t >= delta {
        1.0
    } else {
        let u = (t + delta) / (2.0 * delta);
        u * u * (3.0 - 2.0 * u)
    }
}

impl SequenceProfile {
    pub fn new(n: f64) -> Result<Self> {
        if !(n > 1.0 && n.is_finite()) {
            return Err(Error::InvalidArgument(format!("sequence index must exceed 1, got {n}")));
        }
        let log_n = n.ln();
        Ok(Self {
            n,
            log_n,
            delta: ROUNDING * log_n,
        })
    }

    fn corners(&self) -> [f64; 3] {
        let l = self.log_n;
        [l + self.delta, 2.0 * l, 3.0 * l - self.delta]
    }

    /// Profile as a function of `s = ln r`.
    pub fn at_log(&self, s: f64) -> f64 {
        let [a, b, c] = self.corners();
        let d = self.delta;
        (ramp(s - a, d) - 2.0 * ramp(s - b, d) + ramp(s - c, d)) / self.log_n
    }

    /// `d f / d s`.
    pub fn slope_log(&self, s: f64) -> f64 {
        let [a, b, c] = self.corners();
        let d = self.delta;
        (ramp_slope(s - a, d) - 2.0 * ramp_slope(s - b, d) + ramp_slope(s - c, d)) / self.log_n
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else {
            self.at_log(r.ln())
        }
    }

    /// `d f / d r`.
    pub fn derivative(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else {
            self.slope_log(r.ln()) / r
        }
    }

    /// Support `[n, n^3]` in `r`.
    pub fn support(&self) -> (f64, f64) {
        (self.log_n.exp(), (3.0 * self.log_n).exp())
    }

    fn breakpoints(&self) -> Vec<f64> {
        let l = self.log_n;
        let d = self.delta;
        vec![l, l + 2.0 * d, 2.0 * l - d, 2.0 * l + d, 3.0 * l - 2.0 * d, 3.0 * l]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalityPoint {
    pub n: f64,
    /// `int |f'|^2 r dr`
    pub numerator: f64,
    /// `int |f|^2 r / (1 + r^2) dr`
    pub denominator: f64,
    pub quotient: f64,
    /// Unrounded value `2 / ln n` of the numerator.
    pub numerator_reference: f64,
}

/// Radial Hardy quotient of `f_n`; requires `n >= 3` and `n > radius`.
pub fn optimality_sequence(n: f64, radius: f64) -> Result<OptimalityPoint> {
    if n < 3.0 {
        return Err(Error::InvalidArgument(format!("sequence index must be at least 3, got {n}")));
    }
    if n <= radius {
        return Err(Error::InvalidArgument(format!(
            "sequence index {n} must exceed the field radius {radius}"
        )));
    }
    let profile = SequenceProfile::new(n)?;
    let points = profile.breakpoints();
    let tol = Tolerance::default();
    // in s = ln r: r dr -> r^2 ds, |f'|^2 r dr -> |f_s|^2 ds
    let numerator = integrate_real(|s| profile.slope_log(s).powi(2), &points, tol)?;
    let denominator = integrate_real(
        |s| {
            let w = 1.0 / (1.0 + (-2.0 * s).exp());
            profile.at_log(s).powi(2) * w
        },
        &points,
        tol,
    )?;
    Ok(OptimalityPoint {
        n,
        numerator,
        denominator,
        quotient: numerator / denominator,
        numerator_reference: 2.0 / profile.log_n,
    })
}
