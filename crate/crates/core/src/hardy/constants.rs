use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cutoff::build_cutoff;
use super::mu::{mu_disk, MuOptions};
use super::{gamma_1d, lambda_at, LambdaCurve};
use crate::error::{Error, Result};
use crate::field::{distance_to_integer, flux_verdict, ComplexField2D, FluxVerdict, VectorPotential};
use crate::C64;

/// Relative safety margin applied to numerically evaluated infima.
const INF_SAFETY: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    CompactC,
    LogCTilde,
    AbCInf,
    RobustCHat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LedgerValue {
    Scalar(f64),
    Interval([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub value: LedgerValue,
    pub note: String,
}

/// A lower bound for a Hardy constant with every ingredient recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyEstimate {
    pub kind: EstimateKind,
    pub constant: f64,
    pub ledger: BTreeMap<String, LedgerEntry>,
}

impl HardyEstimate {
    fn new(kind: EstimateKind) -> Self {
        Self {
            kind,
            constant: 0.0,
            ledger: BTreeMap::new(),
        }
    }

    fn put(&mut self, key: &str, value: f64, note: &str) {
        self.ledger.insert(
            key.to_string(),
            LedgerEntry {
                value: LedgerValue::Scalar(value),
                note: note.to_string(),
            },
        );
    }

    fn put_interval(&mut self, key: &str, lo: f64, hi: f64, note: &str) {
        self.ledger.insert(
            key.to_string(),
            LedgerEntry {
                value: LedgerValue::Interval([lo, hi]),
                note: note.to_string(),
            },
        );
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        match self.ledger.get(key)?.value {
            LedgerValue::Scalar(v) => Some(v),
            LedgerValue::Interval(_) => None,
        }
    }

    pub fn interval(&self, key: &str) -> Option<[f64; 2]> {
        match self.ledger.get(key)?.value {
            LedgerValue::Interval(v) => Some(v),
            LedgerValue::Scalar(_) => None,
        }
    }

    fn need(&self, key: &str) -> Result<f64> {
        self.get(key)
            .ok_or_else(|| Error::InvalidArgument(format!("ledger entry `{key}` missing")))
    }

    /// Re-evaluates the final formula from the ledger entries alone.
    pub fn recompute(&self) -> Result<f64> {
        match self.kind {
            EstimateKind::AbCInf => self.need("lambda_alpha"),
            EstimateKind::LogCTilde => Ok(interpolated(
                self.need("gamma")?,
                self.need("nu")?,
                self.need("xi_prime_sup")?,
                self.need("gamma")? / 2.0,
                self.need("weight_ratio_inf")?,
            )),
            EstimateKind::CompactC => Ok(harmonic(
                self.need("c_tilde")? * self.need("a_R")?,
                self.need("lambda_R")?,
            )),
            EstimateKind::RobustCHat => Ok(interpolated(
                self.need("gamma_R")?,
                self.need("mu_A_R")?,
                self.need("xi_prime_sup")?,
                self.need("gamma_R")?,
                self.need("weight_ratio_inf")?,
            )),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("estimate serialization cannot fail")
    }
}

/// `(g/4 * local) / (local + xi'^2 + extra) * ratio`
fn interpolated(g: f64, local: f64, xi_prime: f64, extra: f64, ratio: f64) -> f64 {
    0.25 * g * local / (local + xi_prime * xi_prime + extra) * ratio
}

/// Best constant `c` with `X >= c (P + Q)` given `X >= x P` and `X >= y Q`.
fn harmonic(x: f64, y: f64) -> f64 {
    if x <= 0.0 || y <= 0.0 {
        0.0
    } else {
        x * y / (x + y)
    }
}

/// Minimum of `f` over `[lo, hi]`: dense log-spaced sampling, then a golden
/// section search around the best sample.
fn log_grid_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, samples: usize) -> f64 {
    let (a, b) = (lo.ln(), hi.ln());
    let at = |k: usize| a + (b - a) * k as f64 / (samples - 1) as f64;
    let (best_k, best) = (0..samples)
        .map(|k| (k, f(at(k).exp())))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("at least one sample");
    let (mut l, mut h) = (at(best_k.saturating_sub(1)), at((best_k + 1).min(samples - 1)));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut best = best;
    for _ in 0..100 {
        let m1 = h - g * (h - l);
        let m2 = l + g * (h - l);
        let (f1, f2) = (f(m1.exp()), f(m2.exp()));
        best = best.min(f1).min(f2);
        if f1 < f2 {
            h = m2;
        } else {
            l = m1;
        }
    }
    best
}

/// `inf_{r > 0} (1 + r^2 log^2 r) / (1 + r^2 log^2(r / r0))`.
pub fn log_weight_ratio_inf(r0: f64) -> f64 {
    let ratio = |r: f64| {
        let (l, l0) = (r.ln(), (r / r0).ln());
        (1.0 + r * r * l * l) / (1.0 + r * r * l0 * l0)
    };
    // the ratio tends to 1 at both ends
    let m = log_grid_min(ratio, 1e-6, 1e6, 20_001).min(1.0);
    m * (1.0 - INF_SAFETY)
}

/// `inf_{0 < r < R} (1 + r^2) / (1 + r^2 log^2 r)`.
pub fn a_r(radius: f64) -> f64 {
    let ratio = |r: f64| {
        let l = r.ln();
        (1.0 + r * r) / (1.0 + r * r * l * l)
    };
    // the ratio tends to 1 as r -> 0
    let m = log_grid_min(ratio, 1e-8 * radius.min(1.0), radius, 20_001).min(1.0);
    m * (1.0 - INF_SAFETY)
}

/// Lower bound `c~` for the logarithmic Hardy inequality built from a
/// sampled `lambda` profile.
pub fn hardy_constant_log(field: &ComplexField2D, curve: &LambdaCurve) -> Result<HardyEstimate> {
    if curve.is_empty() {
        return Err(Error::InvalidArgument("empty lambda curve".into()));
    }
    let holds_somewhere = curve
        .mean_re
        .iter()
        .zip(&curve.mean_im)
        .any(|(&re, &im)| flux_verdict(C64::new(re, im)) == FluxVerdict::Holds);
    if field.is_zero() || !holds_somewhere {
        return Err(Error::FluxConditionFailed(
            "no sampled radius has a non-integer real mean or a non-zero imaginary mean".into(),
        ));
    }

    let q: Vec<f64> = (0..curve.len())
        .map(|i| curve.lambda_lower(i) / (curve.radii[i] * curve.radii[i]))
        .collect();
    let (peak, q_max) = q
        .iter()
        .copied()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty curve");
    if q_max <= 0.0 {
        return Err(Error::FluxConditionFailed("lambda vanishes at every sampled radius".into()));
    }
    let threshold = 0.5 * q_max;
    let mut lo = peak;
    while lo > 0 && q[lo - 1] >= threshold {
        lo -= 1;
    }
    let mut hi = peak;
    while hi + 1 < q.len() && q[hi + 1] >= threshold {
        hi += 1;
    }
    if lo == hi {
        lo = lo.saturating_sub(1);
        hi = (hi + 1).min(q.len() - 1);
    }
    if lo == hi {
        return Err(Error::DegenerateInterval(curve.radii[lo], curve.radii[hi]));
    }
    let (r_lo, r_hi) = (curve.radii[lo], curve.radii[hi]);

    // lambda between the samples of I
    let mut nu = q[lo..=hi].iter().copied().fold(f64::INFINITY, f64::min);
    for i in lo..hi {
        let r = 0.5 * (curve.radii[i] + curve.radii[i + 1]);
        let (l, gap) = lambda_at(field, r, curve.options)?;
        nu = nu.min((l - 10.0 * gap - 1e-13).max(0.0) / (r * r));
    }
    let nu = nu.min(threshold);
    if nu <= 0.0 {
        return Err(Error::FluxConditionFailed("lambda vanishes inside the selected interval".into()));
    }

    let r0 = 0.5 * (r_lo + r_hi);
    let gamma = gamma_1d(r0)?;
    let cutoff = build_cutoff(r_lo, r_hi)?;
    let ratio = log_weight_ratio_inf(r0);

    let mut est = HardyEstimate::new(EstimateKind::LogCTilde);
    est.put("gamma", gamma.gamma, "min of the interior and exterior one-dimensional constants at r0");
    est.put("gamma_interior", gamma.interior, "(j_0 / r0)^2, Dirichlet condition at r0");
    est.put("gamma_exterior", gamma.exterior, "logarithmic Hardy constant on (r0, infinity)");
    est.put("nu", nu, "min of lambda(r)/r^2 over the samples and midpoints of I");
    est.put("nu_threshold", threshold, "half of the largest sampled lambda(r)/r^2");
    est.put_interval("interval_I", r_lo, r_hi, "maximal run of radii around the peak with lambda/r^2 >= nu_threshold");
    est.put("r0", r0, "midpoint of I");
    est.put("xi_prime_sup", cutoff.derivative_sup, "sup |xi'| sampled at 1e5 points");
    est.put("xi_sup", 1.0, "sup |xi|");
    est.put("weight_ratio_inf", ratio, "inf_r (1 + r^2 log^2 r)/(1 + r^2 log^2(r/r0))");
    est.constant = est.recompute()?;
    let variant = interpolated(gamma.gamma, nu, 1.0, gamma.gamma / 2.0, ratio);
    est.put("c_tilde_sup_xi_variant", variant, "same formula with sup|xi|^2 = 1 in place of sup|xi'|^2");
    Ok(est)
}

/// Lower bound `c` for the Hardy inequality with weight `1/(1 + |x|^2)`.
pub fn hardy_constant_compact(field: &ComplexField2D, curve: &LambdaCurve, radius: f64) -> Result<HardyEstimate> {
    let total = field.total_flux();
    if field.is_zero() || flux_verdict(total) != FluxVerdict::Holds {
        return Err(Error::FluxConditionFailed(format!(
            "total flux {:.12} + {:.12}i has integer real part and zero imaginary part",
            total.re, total.im
        )));
    }
    let support = field
        .support_radius()
        .ok_or_else(|| Error::HypothesisViolated("field is not compactly supported".into()))?;
    if support > radius {
        return Err(Error::SupportExceedsR { support, radius });
    }
    let log = hardy_constant_log(field, curve)?;
    let c_tilde = log.constant;
    let a = a_r(radius);
    let (l, gap) = lambda_at(field, radius, curve.options)?;
    let lambda_r = (l - 10.0 * gap - 1e-13).max(0.0);
    if lambda_r <= 0.0 {
        if l <= 1e-12 && gap <= 1e-12 {
            return Err(Error::FluxConditionFailed(format!("lambda({radius}) vanishes")));
        }
        return Err(Error::NonConvergence(format!(
            "lambda({radius}) = {l:e} is not resolved (doubling gap {gap:e}); raise the mode count"
        )));
    }

    let mut est = HardyEstimate::new(EstimateKind::CompactC);
    est.ledger = log.ledger;
    est.put("c_tilde", c_tilde, "logarithmic constant from the lambda profile");
    est.put("a_R", a, "inf_{r < R} (1 + r^2)/(1 + r^2 log^2 r)");
    est.put("R", radius, "radius of the disk containing the support");
    est.put("support_radius", support, "support of B is inside this disk");
    est.put("lambda_R", lambda_r, "lambda(R) minus ten doubling gaps");
    est.put("min_variant", (c_tilde * a).min(lambda_r), "min{c~ a_R, lambda(R)}");
    est.constant = est.recompute()?;
    Ok(est)
}

/// `c_inf = dist(Re alpha, Z)^2 + (Im alpha)^2` for the Aharonov-Bohm potential.
pub fn ab_constant(alpha: C64) -> Result<HardyEstimate> {
    match flux_verdict(alpha) {
        FluxVerdict::Holds => {}
        FluxVerdict::Fails => {
            return Err(Error::FluxConditionFailed(format!(
                "alpha = {alpha} has integer real part and zero imaginary part"
            )))
        }
        FluxVerdict::Indeterminate => {
            return Err(Error::FluxConditionFailed(format!(
                "alpha = {alpha} is within 1e-9 of an integer"
            )))
        }
    }
    let lambda = distance_to_integer(alpha.re).powi(2) + alpha.im * alpha.im;
    let mut est = HardyEstimate::new(EstimateKind::AbCInf);
    est.put("alpha_re", alpha.re, "coupling, real part");
    est.put("alpha_im", alpha.im, "coupling, imaginary part");
    est.put("lambda_alpha", lambda, "bottom of |m - alpha|^2 over integers m");
    est.constant = est.recompute()?;
    Ok(est)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KrResult {
    pub value: f64,
    pub argmax_r: f64,
    pub r0: f64,
}

/// Sampling of the exterior region `|x| >= r0` used by [`k_r`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KrSearch {
    /// Largest radius sampled, as a multiple of `r0`.
    pub span: f64,
    pub radii: usize,
    pub angles: usize,
}

impl Default for KrSearch {
    fn default() -> Self {
        Self {
            span: 1e4,
            radii: 400,
            angles: 64,
        }
    }
}

/// `sup_{|x| >= r0} |Im A(x)| |x| log(|x|/r0)` on a log-polar sample grid.
pub fn k_r<P: VectorPotential + ?Sized>(potential: &P, r0: f64, search: KrSearch) -> Result<KrResult> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidArgument(format!("r0 must be positive, got {r0}")));
    }
    let radii = super::log_radii(r0, r0 * search.span, search.radii);
    let mut best = (0.0f64, r0, 0usize);
    for (k, &r) in radii.iter().enumerate() {
        let factor = r * (r / r0).ln();
        for j in 0..search.angles {
            let t = 2.0 * std::f64::consts::PI * j as f64 / search.angles as f64;
            let a = potential.eval([r * t.cos(), r * t.sin()])?;
            let v = (a[0].im.powi(2) + a[1].im.powi(2)).sqrt() * factor;
            if v > best.0 {
                best = (v, r, k);
            }
        }
    }
    if best.0 > 0.0 && best.2 + 2 >= radii.len() {
        return Err(Error::HypothesisViolated(format!(
            "|Im A| |x| log(|x|/r0) still growing at |x| = {:.3e}",
            best.1
        )));
    }
    Ok(KrResult {
        value: best.0,
        argmax_r: best.1,
        r0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RobustOptions {
    pub mu: MuOptions,
    pub search: KrSearch,
    /// Radii tried are `R, 2R, ..., 2^(attempts-1) R`.
    pub attempts: usize,
}

impl Default for RobustOptions {
    fn default() -> Self {
        Self {
            mu: MuOptions::default(),
            search: KrSearch::default(),
            attempts: 4,
        }
    }
}

/// Gauge-free lower bound `c^` for the logarithmic Hardy inequality.
pub fn robust_constant<P: VectorPotential + ?Sized>(
    potential: &P,
    field: &ComplexField2D,
    radius: f64,
    opts: RobustOptions,
) -> Result<HardyEstimate> {
    if field.is_zero() {
        return Err(Error::TrivialField);
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("R must be positive, got {radius}")));
    }
    let mut chosen = None;
    let mut tried = Vec::new();
    for step in 0..opts.attempts {
        let r = radius * 2f64.powi(step as i32);
        let kr = k_r(potential, r / 2.0, opts.search)?;
        tried.push(kr.value);
        if kr.value < 0.5 {
            chosen = Some((r, kr));
            break;
        }
    }
    let (r, kr) = chosen.ok_or_else(|| {
        Error::HypothesisViolated(format!("k_R >= 1/2 at every tested radius (values {tried:?})"))
    })?;
    let mu = mu_disk(potential, r, opts.mu)?;
    let mu_lower = mu.value.min(mu.richardson) - (mu.value - mu.coarse).abs();
    if mu_lower <= 0.0 {
        return Err(Error::HypothesisViolated(format!(
            "lowest magnetic Neumann eigenvalue on D_R not resolved as positive (mu = {:e})",
            mu.value
        )));
    }
    let gamma_r = (0.5 - kr.value).powi(2);
    let cutoff = build_cutoff(0.0, r)?;
    let ratio = log_weight_ratio_inf(cutoff.r0);

    let mut est = HardyEstimate::new(EstimateKind::RobustCHat);
    est.put("R", r, "radius of the disk for the Neumann eigenvalue");
    est.put("k_R", kr.value, "sup over |x| >= r0 of |Im A| |x| log(|x|/r0)");
    est.put("k_R_argmax", kr.argmax_r, "radius attaining the sampled supremum");
    est.put("gamma_R", gamma_r, "((1 - 2 k_R)/2)^2");
    est.put("mu_A_R", mu_lower, "finest-grid eigenvalue, Richardson-adjusted and reduced by the last grid change");
    est.put("mu_fine", mu.value, "eigenvalue on the finest grid");
    est.put("mu_richardson", mu.richardson, "second-order Richardson extrapolation");
    est.put("r0", cutoff.r0, "R/2");
    est.put_interval("interval_I", 0.0, r, "(0, R)");
    est.put("xi_prime_sup", cutoff.derivative_sup, "sup |xi'| sampled at 1e5 points");
    est.put("xi_sup", 1.0, "sup |xi|");
    est.put("weight_ratio_inf", ratio, "inf_r (1 + r^2 log^2 r)/(1 + r^2 log^2(r/r0))");
    est.constant = est.recompute()?;
    let variant = interpolated(gamma_r, mu_lower, 1.0, gamma_r, ratio);
    est.put("c_hat_sup_xi_variant", variant, "same formula with sup|xi|^2 = 1 in place of sup|xi'|^2");
    Ok(est)
}
