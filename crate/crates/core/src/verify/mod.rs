//! Brute-force checks. Hardy quotients are integrated directly over families
//! of test functions, and closed-form constants get independent reference
//! values.

mod form;
mod oracles;
mod testfn;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::VectorPotential;
use crate::C64;

pub use form::{
    quadratic_form_2d, refine, weighted_norm_2d, HardyWeight, QuadratureGrid, Refined, SampledPotential,
};
pub use oracles::{
    constant_lambda_oracle, gamma_exterior_oracle, gamma_interior_oracle, lowest_pencil_eigenvalue,
    potential_suite, random_potential, relative_bound_check, PotentialClass, RelativeBoundEntry,
    RelativeBoundReport, Tridiagonal,
};
pub use testfn::{mixed_suite, origin_free_suite, Extent, TestFunction2D, RANDOM_MAX_MODE};

/// Margins below `-MARGIN_SLACK` count as failures.
pub const MARGIN_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginEntry {
    pub label: String,
    pub function: TestFunction2D,
    pub form: f64,
    pub weighted_norm: f64,
    pub quotient: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardyReport {
    pub constant: f64,
    pub weight: HardyWeight,
    pub grid: QuadratureGrid,
    pub entries: Vec<MarginEntry>,
    pub min_margin: f64,
    pub min_quotient: f64,
    pub pass: bool,
}

impl HardyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Evaluates `form / weighted_norm - c` for every test function on a
/// shared grid. Functions with a vanishing weighted norm are skipped.
pub fn check_hardy<P: VectorPotential + ?Sized>(
    potential: &P,
    weight: HardyWeight,
    constant: f64,
    suite: &[TestFunction2D],
    grid: QuadratureGrid,
) -> Result<HardyReport> {
    let sampled = SampledPotential::new(potential, grid)?;
    Ok(check_hardy_sampled(&sampled, weight, constant, suite))
}

/// [`check_hardy`] with the potential already tabulated.
pub fn check_hardy_sampled(
    sampled: &SampledPotential,
    weight: HardyWeight,
    constant: f64,
    suite: &[TestFunction2D],
) -> HardyReport {
    let entries: Vec<MarginEntry> = suite
        .par_iter()
        .filter_map(|psi| {
            let norm = sampled.weighted_norm(psi, &weight);
            if norm <= 0.0 {
                return None;
            }
            let form = sampled.quadratic_form(psi);
            let quotient = form / norm;
            let margin = quotient - constant;
            Some(MarginEntry {
                label: psi.label(),
                function: psi.clone(),
                form,
                weighted_norm: norm,
                quotient,
                margin,
                pass: margin >= -MARGIN_SLACK,
            })
        })
        .collect();
    let min_margin = entries.iter().map(|e| e.margin).fold(f64::INFINITY, f64::min);
    let min_quotient = entries.iter().map(|e| e.quotient).fold(f64::INFINITY, f64::min);
    HardyReport {
        constant,
        weight,
        grid: sampled.grid,
        pass: entries.iter().all(|e| e.pass),
        entries,
        min_margin,
        min_quotient,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarIdentity {
    pub cartesian: f64,
    pub polar: f64,
    pub relative_difference: f64,
}

/// Compares `int |grad psi - i A psi|^2` on a Cartesian grid with
/// `int |d_r psi|^2 + |d_theta psi - i a psi|^2 / r^2` on a polar grid, where
/// `a(r, theta) = x^perp . A`. Only transverse potentials are accepted.
pub fn polar_identity_check<P: VectorPotential + ?Sized>(
    potential: &P,
    psi: &TestFunction2D,
    cartesian: QuadratureGrid,
    polar: QuadratureGrid,
) -> Result<PolarIdentity> {
    if !potential.is_transverse() {
        let residual = [[0.7, 0.2], [-0.4, 1.1], [0.3, -0.9], [1.5, 1.5]]
            .iter()
            .map(|&x| {
                potential
                    .eval(x)
                    .map(|a| (x[0] * a[0] + x[1] * a[1]).norm())
                    .unwrap_or(f64::NAN)
            })
            .fold(0.0, f64::max);
        return Err(Error::NotTransverse(residual));
    }
    let cart = quadratic_form_2d(potential, psi, cartesian)?;
    let i = C64::new(0.0, 1.0);
    let pol = polar
        .nodes()
        .par_iter()
        .map(|&(x, w)| -> Result<f64> {
            let (v, g) = psi.eval_with_gradient(x);
            if v.norm_sqr() == 0.0 && g[0].norm_sqr() + g[1].norm_sqr() == 0.0 {
                return Ok(0.0);
            }
            let r = x[0].hypot(x[1]);
            let a = potential.polar(r, x[1].atan2(x[0]))?;
            let dr = (g[0] * x[0] + g[1] * x[1]) / r;
            let dt = g[1] * x[0] - g[0] * x[1];
            Ok(w * (dr.norm_sqr() + (dt - i * a * v).norm_sqr() / (r * r)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<f64>();
    Ok(PolarIdentity {
        cartesian: cart,
        polar: pol,
        relative_difference: (cart - pol).abs() / cart.abs().max(f64::MIN_POSITIVE),
    })
}
