//! One function per subcommand. Each returns the text to write and whether
//! the run counts as passing.

use magharden::circle::{self, CirclePotential};
use magharden::field::{flux_verdict, ComplexField2D, FluxVerdict, GaugePotential};
use magharden::galerkin;
use magharden::hardy::{self, CurveOptions, HardyEstimate, LambdaCurve, OptimalityPoint, RobustOptions};
use magharden::verify::{self, HardyReport, PolarIdentity, QuadratureGrid, TestFunction2D};
use magharden::C64;
use serde::Serialize;

use crate::config::{self, CircleInput, HardyInput, PotentialInput, SuiteInput, VerifyInput};
use crate::{parse_radii, CliError, Common};

pub struct Output {
    pub text: String,
    pub passed: bool,
}

impl Output {
    fn json<T: Serialize>(value: &T, passed: bool) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("output serializes");
        text.push('\n');
        Self { text, passed }
    }
}

const DEFAULT_GRID: usize = 256;
const DEFAULT_SPECTRUM_MODES: usize = 32;
const DEFAULT_CURVE_MODES: usize = 16;
const DEFAULT_RADII: &str = "0.05:20:60";
const DEFAULT_VERIFY_POINTS: usize = 384;
const POLAR_TOL: f64 = 1e-4;
const LIFT_TOL: f64 = 1e-3;

/// Resolved knobs, echoed into every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub input: String,
    pub modes: Option<usize>,
    pub grid: Option<usize>,
    pub radii: Option<String>,
    pub seed: Option<u64>,
}

impl RunConfig {
    fn new(command: &'static str, c: &Common) -> Self {
        Self {
            command,
            input: c.input.display().to_string(),
            modes: None,
            grid: None,
            radii: None,
            seed: None,
        }
    }
}

fn read_input(c: &Common) -> Result<String, CliError> {
    std::fs::read_to_string(&c.input).map_err(|source| CliError::Io { path: c.input.clone(), source })
}

fn read_circle(c: &Common, grid: usize) -> Result<CirclePotential, CliError> {
    let input: CircleInput = config::parse(&read_input(c)?, "potential")?;
    input.build(grid)
}

#[derive(Serialize)]
struct EigenPair {
    m: i64,
    analytic: C64,
    galerkin: C64,
}

#[derive(Serialize)]
struct SpectrumReport {
    config: RunConfig,
    mean: C64,
    eigenvalues: Vec<EigenPair>,
    max_deviation: f64,
    quasi_self_adjoint: bool,
    symmetry_class: circle::SymmetryClass,
}

pub fn spectrum(c: &Common) -> Result<Output, CliError> {
    let modes = c.modes.unwrap_or(DEFAULT_SPECTRUM_MODES);
    let grid = c.grid.unwrap_or(DEFAULT_GRID);
    let a = read_circle(c, grid)?;
    let matrix = galerkin::momentum_matrix(&a, modes)?;
    let computed = galerkin::eigenvalues(&matrix.entries)?;
    let mean = circle::mean(&a).mean;
    let central = (modes / 4) as i64;
    let eigenvalues: Vec<EigenPair> = (-central..=central)
        .map(|m| {
            let analytic = C64::new(m as f64, 0.0) - mean;
            let galerkin = *computed
                .iter()
                .min_by(|x, y| (**x - analytic).norm().total_cmp(&(**y - analytic).norm()))
                .expect("non-empty spectrum");
            EigenPair { m, analytic, galerkin }
        })
        .collect();
    let max_deviation = eigenvalues.iter().map(|p| (p.galerkin - p.analytic).norm()).fold(0.0, f64::max);
    let mut config = RunConfig::new("spectrum", c);
    config.modes = Some(modes);
    config.grid = Some(a.n());
    Ok(Output::json(
        &SpectrumReport {
            config,
            mean,
            eigenvalues,
            max_deviation,
            quasi_self_adjoint: circle::quasi_self_adjoint(&a),
            symmetry_class: circle::symmetry_class(&a),
        },
        true,
    ))
}

#[derive(Serialize)]
struct MetricReport {
    config: RunConfig,
    theta_samples: Vec<f64>,
    metric_residual: f64,
}

pub fn metric(c: &Common) -> Result<Output, CliError> {
    let modes = c.modes.unwrap_or(DEFAULT_SPECTRUM_MODES);
    let grid = c.grid.unwrap_or(DEFAULT_GRID);
    let a = read_circle(c, grid)?;
    let theta = circle::metric_theta(&a)?;
    let residual = galerkin::metric_residual(&a, modes)?;
    let mut config = RunConfig::new("metric", c);
    config.modes = Some(modes);
    config.grid = Some(a.n());
    Ok(Output::json(
        &MetricReport {
            config,
            theta_samples: theta.real_values(),
            metric_residual: residual,
        },
        true,
    ))
}

fn curve_options(c: &Common) -> CurveOptions {
    CurveOptions {
        modes: c.modes.unwrap_or(DEFAULT_CURVE_MODES),
        grid: c.grid.unwrap_or(DEFAULT_GRID),
    }
}

fn curve_csv(curve: &LambdaCurve, config: &RunConfig) -> String {
    let mut text = format!(
        "# {}\n",
        serde_json::to_string(config).expect("config serializes")
    );
    text.push_str("r,lambda,mean_re,mean_im,converged,flux_condition\n");
    for i in 0..curve.len() {
        let verdict = match flux_verdict(C64::new(curve.mean_re[i], curve.mean_im[i])) {
            FluxVerdict::Holds => "holds",
            FluxVerdict::Fails => "anti_flux",
            FluxVerdict::Indeterminate => "indeterminate",
        };
        text.push_str(&format!(
            "{:e},{:e},{:e},{:e},{},{}\n",
            curve.radii[i], curve.lambda[i], curve.mean_re[i], curve.mean_im[i], curve.converged[i], verdict
        ));
    }
    text
}

pub fn lambda_curve(c: &Common) -> Result<Output, CliError> {
    let field = read_field(c)?;
    let radii_arg = c.radii.clone().unwrap_or_else(|| DEFAULT_RADII.into());
    let radii = parse_radii(&radii_arg)?;
    let opts = curve_options(c);
    let curve = hardy::lambda_curve_with(&field, &radii, opts)?;
    let mut config = RunConfig::new("lambda-curve", c);
    config.modes = Some(opts.modes);
    config.grid = Some(opts.grid);
    config.radii = Some(radii_arg);
    Ok(Output {
        text: curve_csv(&curve, &config),
        passed: true,
    })
}

fn read_field(c: &Common) -> Result<ComplexField2D, CliError> {
    let raw: ComplexField2D = config::parse(&read_input(c)?, "field")?;
    Ok(ComplexField2D::new(raw.components)?)
}

#[derive(Serialize)]
struct HardyOutput {
    config: RunConfig,
    estimate: HardyEstimate,
}

pub fn hardy(c: &Common) -> Result<Output, CliError> {
    let input: HardyInput = config::parse(&read_input(c)?, "hardy config")?;
    let mut config = RunConfig::new("hardy", c);
    let opts = curve_options(c);
    let curve_for = |field: &ComplexField2D, config: &mut RunConfig| -> Result<LambdaCurve, CliError> {
        let radii_arg = c.radii.clone().unwrap_or_else(|| DEFAULT_RADII.into());
        let radii = parse_radii(&radii_arg)?;
        config.modes = Some(opts.modes);
        config.grid = Some(opts.grid);
        config.radii = Some(radii_arg);
        Ok(hardy::lambda_curve_with(field, &radii, opts)?)
    };
    let estimate = match &input {
        HardyInput::Compact { field, radius } => {
            let field = ComplexField2D::new(field.components.clone())?;
            let curve = curve_for(&field, &mut config)?;
            hardy::hardy_constant_compact(&field, &curve, *radius)?
        }
        HardyInput::Log { field } => {
            let field = ComplexField2D::new(field.components.clone())?;
            let curve = curve_for(&field, &mut config)?;
            hardy::hardy_constant_log(&field, &curve)?
        }
        HardyInput::Ab { alpha } => hardy::ab_constant(*alpha)?,
        HardyInput::Robust { field, radius, gradient } => {
            let potential = PotentialInput {
                field: Some(field.clone()),
                aharonov_bohm: None,
                gradient: gradient.clone(),
            }
            .build()?;
            let field = ComplexField2D::new(field.components.clone())?;
            hardy::robust_constant(&potential, &field, *radius, RobustOptions::default())?
        }
    };
    Ok(Output::json(&HardyOutput { config, estimate }, true))
}

#[derive(Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
enum VerifyReport {
    Hardy {
        config: RunConfig,
        seed: Option<u64>,
        report: HardyReport,
        pass: bool,
    },
    PolarIdentity {
        config: RunConfig,
        cartesian_grid: QuadratureGrid,
        polar_grid: QuadratureGrid,
        result: PolarIdentity,
        tolerance: f64,
        pass: bool,
    },
    Optimality {
        config: RunConfig,
        points: Vec<OptimalityPoint>,
        /// Quotients of the lifted profiles `f_n(|x|) e^{i theta}` by 2D quadrature.
        lifted: Vec<f64>,
        decreasing: bool,
        lifted_agrees: bool,
        numerator_within_10_percent: bool,
        pass: bool,
    },
}

fn build_suite(suite: &SuiteInput, seed: u64) -> Result<Vec<TestFunction2D>, CliError> {
    Ok(match suite {
        SuiteInput::Mixed { count, length } => verify::mixed_suite(seed, *count, *length),
        SuiteInput::OriginFree { count, length } => verify::origin_free_suite(seed, *count, *length),
        SuiteInput::Sequence { n, angular } => n
            .iter()
            .map(|&n| TestFunction2D::fn_sequence(n, *angular))
            .collect::<Result<_, _>>()?,
        SuiteInput::Explicit { functions } => functions.clone(),
    })
}

fn suite_grid(suite: &[TestFunction2D], points: usize) -> Result<QuadratureGrid, CliError> {
    if suite.is_empty() {
        return Err(CliError::Input("empty test-function suite".into()));
    }
    let annular = suite.iter().all(|f| matches!(f.extent(), verify::Extent::Annulus { .. }));
    if annular {
        Ok(QuadratureGrid::covering_annuli(suite, 8 * points, 16)?)
    } else {
        Ok(QuadratureGrid::covering(suite, points))
    }
}

pub fn verify(c: &Common) -> Result<Output, CliError> {
    let input: VerifyInput = config::parse(&read_input(c)?, "verify config")?;
    let mut config = RunConfig::new("verify", c);
    let points = c.grid.unwrap_or(DEFAULT_VERIFY_POINTS);
    config.grid = Some(points);
    let report = match &input {
        VerifyInput::Hardy { potential, weight, constant, suite } => {
            let seed = c.seed.unwrap_or(0);
            config.seed = Some(seed);
            let functions = build_suite(suite, seed)?;
            let grid = suite_grid(&functions, points)?;
            let report = verify::check_hardy(&potential.build()?, *weight, *constant, &functions, grid)?;
            let pass = report.pass;
            VerifyReport::Hardy { config, seed: Some(seed), report, pass }
        }
        VerifyInput::PolarIdentity { potential, function } => {
            let cartesian = QuadratureGrid::covering(std::slice::from_ref(function), points);
            let polar = QuadratureGrid::Polar {
                r_max: function.extent().reach(),
                panels: points / 4,
                angles: points,
            };
            let result = verify::polar_identity_check(&potential.build()?, function, cartesian, polar)?;
            let pass = result.relative_difference <= POLAR_TOL;
            VerifyReport::PolarIdentity {
                config,
                cartesian_grid: cartesian,
                polar_grid: polar,
                result,
                tolerance: POLAR_TOL,
                pass,
            }
        }
        VerifyInput::Optimality { field, n } => {
            let field = ComplexField2D::new(field.components.clone())?;
            let radius = field
                .support_radius()
                .ok_or_else(|| CliError::Input("optimality check needs a compactly supported field".into()))?;
            let flux = field.total_flux();
            if flux_verdict(flux) != FluxVerdict::Fails {
                return Err(CliError::Input(format!(
                    "optimality check needs integer real flux and zero imaginary flux, got {flux}"
                )));
            }
            let angular = flux.re.round() as i32;
            let mut ns = n.clone();
            ns.sort_by(f64::total_cmp);
            let points_out = ns
                .iter()
                .map(|&k| hardy::optimality_sequence(k, radius))
                .collect::<Result<Vec<_>, _>>()?;
            let suite: Vec<TestFunction2D> = ns
                .iter()
                .map(|&k| TestFunction2D::fn_sequence(k, angular))
                .collect::<Result<_, _>>()?;
            let grid = suite_grid(&suite, points)?;
            let lifted_report = verify::check_hardy(
                &GaugePotential::new(field),
                verify::HardyWeight::Inverse,
                0.0,
                &suite,
                grid,
            )?;
            let lifted: Vec<f64> = lifted_report.entries.iter().map(|e| e.quotient).collect();
            let decreasing = points_out.windows(2).all(|w| w[1].quotient < w[0].quotient);
            let lifted_agrees = points_out
                .iter()
                .zip(&lifted)
                .all(|(p, q)| (p.quotient - q).abs() <= LIFT_TOL * p.quotient);
            let within = points_out
                .iter()
                .all(|p| (p.numerator - p.numerator_reference).abs() <= 0.1 * p.numerator_reference);
            VerifyReport::Optimality {
                config,
                points: points_out,
                lifted,
                decreasing,
                lifted_agrees,
                numerator_within_10_percent: within,
                pass: decreasing && lifted_agrees && within,
            }
        }
    };
    let pass = match &report {
        VerifyReport::Hardy { pass, .. }
        | VerifyReport::PolarIdentity { pass, .. }
        | VerifyReport::Optimality { pass, .. } => *pass,
    };
    Ok(Output::json(&report, pass))
}
