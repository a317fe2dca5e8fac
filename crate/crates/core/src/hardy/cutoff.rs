//! Smooth radial cut-off that vanishes near the centre of an interval and
//! equals one outside it.

use serde::Serialize;

use crate::error::{Error, Result};

/// Points used to estimate `sup |xi'|`.
const SUP_SAMPLES: usize = 100_000;

/// Smooth step from 0 (at `t <= 0`) to 1 (at `t >= 1`).
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let f = (-1.0 / t).exp();
        let g = (-1.0 / (1.0 - t)).exp();
        f / (f + g)
    }
}

pub fn smooth_step_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        let s = smooth_step(t);
        s * (1.0 - s) * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffFunction {
    pub r0: f64,
    pub interval: (f64, f64),
    /// `|r - r0|` below which the cut-off vanishes.
    pub flat: f64,
    /// `sup |xi'|`, sampled.
    pub derivative_sup: f64,
}

impl CutoffFunction {
    fn half_width(&self) -> f64 {
        0.5 * (self.interval.1 - self.interval.0)
    }

    fn ramp(&self) -> f64 {
        self.half_width() - self.flat
    }

    pub fn eval(&self, r: f64) -> f64 {
        smooth_step(((r - self.r0).abs() - self.flat) / self.ramp())
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let d = r - self.r0;
        smooth_step_derivative((d.abs() - self.flat) / self.ramp()) * d.signum() / self.ramp()
    }
}

/// Cut-off for the interval `(lo, hi)` centred at its midpoint; it vanishes
/// on the middle third and rises to one at the endpoints.
pub fn build_cutoff(lo: f64, hi: f64) -> Result<CutoffFunction> {
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::DegenerateInterval(lo, hi));
    }
    let half = 0.5 * (hi - lo);
    let mut cut = CutoffFunction {
        r0: 0.5 * (lo + hi),
        interval: (lo, hi),
        flat: half / 3.0,
        derivative_sup: 0.0,
    };
    let step = (hi - lo) / SUP_SAMPLES as f64;
    cut.derivative_sup = (0..=SUP_SAMPLES)
        .map(|k| cut.derivative(lo + k as f64 * step).abs())
        .fold(0.0, f64::max);
    Ok(cut)
}
