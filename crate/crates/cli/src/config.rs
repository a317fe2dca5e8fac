//! Input file schemas.

use std::sync::Arc;

use magharden::circle::CirclePotential;
use magharden::field::{AbPotential, ComplexField2D, ExactGradient, GaugePotential, GaussianTerm, SumPotential, VectorPotential};
use magharden::verify::{HardyWeight, TestFunction2D};
use magharden::C64;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A potential on the circle. Exactly one of `fourier`, `samples` or
/// `constant` must be present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleInput {
    /// `[k, re, im]` triples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fourier: Option<Vec<(i64, f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<C64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<C64>,
    /// Grid size; falls back to `--grid`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    #[serde(alias = "n")]
    pub grid: Option<usize>,
}

impl CircleInput {
    pub fn build(&self, default_grid: usize) -> Result<CirclePotential, CliError> {
        let n = self.grid.unwrap_or(default_grid);
        let given = [self.fourier.is_some(), self.samples.is_some(), self.constant.is_some()];
        if given.iter().filter(|&&b| b).count() != 1 {
            return Err(CliError::Input(
                "potential needs exactly one of \"fourier\", \"samples\", \"constant\"".into(),
            ));
        }
        let a = if let Some(modes) = &self.fourier {
            let modes: Vec<(i64, C64)> = modes.iter().map(|&(k, re, im)| (k, C64::new(re, im))).collect();
            CirclePotential::from_fourier(&modes, n)?
        } else if let Some(samples) = &self.samples {
            CirclePotential::from_samples(samples.clone())?
        } else {
            CirclePotential::constant(self.constant.expect("checked above"), n)?
        };
        Ok(a)
    }
}

/// A vector potential on the plane: canonical gauge of `field`, plus an
/// optional Aharonov-Bohm term and pure-gauge Gaussians.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<ComplexField2D>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aharonov_bohm: Option<C64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gradient: Vec<GaussianTerm>,
}

impl PotentialInput {
    pub fn build(&self) -> Result<SumPotential, CliError> {
        let mut parts: Vec<Arc<dyn VectorPotential>> = Vec::new();
        if let Some(field) = &self.field {
            let field = ComplexField2D::new(field.components.clone())?;
            parts.push(Arc::new(GaugePotential::new(field)));
        }
        if let Some(alpha) = self.aharonov_bohm {
            parts.push(Arc::new(AbPotential { alpha }));
        }
        if !self.gradient.is_empty() {
            parts.push(Arc::new(ExactGradient { terms: self.gradient.clone() }));
        }
        if parts.is_empty() {
            return Err(CliError::Input("potential needs \"field\", \"aharonov_bohm\" or \"gradient\"".into()));
        }
        Ok(SumPotential { parts })
    }

    pub fn field_or_zero(&self) -> ComplexField2D {
        self.field.clone().unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "estimate", rename_all = "snake_case", deny_unknown_fields)]
pub enum HardyInput {
    /// Constant for fields supported in the disk of radius `radius`.
    Compact { field: ComplexField2D, radius: f64 },
    Log { field: ComplexField2D },
    Ab { alpha: C64 },
    Robust {
        field: ComplexField2D,
        radius: f64,
        #[serde(default)]
        gradient: Vec<GaussianTerm>,
    },
}

/// How the test-function suite is generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum SuiteInput {
    /// Generic mixture; see `verify::mixed_suite`.
    Mixed { count: usize, length: f64 },
    /// Ring bumps avoiding the origin.
    OriginFree { count: usize, length: f64 },
    /// `f_n` profiles times `e^{i m theta}`.
    Sequence { n: Vec<f64>, angular: i32 },
    Explicit { functions: Vec<TestFunction2D> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum VerifyInput {
    Hardy {
        potential: PotentialInput,
        weight: HardyWeight,
        constant: f64,
        suite: SuiteInput,
    },
    PolarIdentity {
        potential: PotentialInput,
        function: TestFunction2D,
    },
    Optimality {
        field: ComplexField2D,
        n: Vec<f64>,
    },
}

/// Parses JSON; the error message carries the position.
pub fn parse<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{what}: {e}")))
}
