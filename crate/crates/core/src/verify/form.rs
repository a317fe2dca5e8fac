//! Brute-force quadrature of the magnetic Dirichlet form and weighted norms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::testfn::{Extent, TestFunction2D};
use crate::error::{Error, Result};
use crate::field::{Point, VectorPotential};
use crate::quadrature::gauss_legendre;
use crate::C64;

const PANEL_ORDER: usize = 8;

/// Tensor-product quadrature rule on the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuadratureGrid {
    /// Midpoint rule on `[-L, L]^2` with `points` cells per side; never
    /// samples the origin when `points` is even.
    Cartesian { half_width: f64, points: usize },
    /// Gauss-Legendre panels in `r` on `(0, r_max)` times uniform angles.
    Polar { r_max: f64, panels: usize, angles: usize },
    /// Gauss-Legendre panels in `ln r` on `(r_min, r_max)` times uniform angles.
    LogPolar {
        r_min: f64,
        r_max: f64,
        panels: usize,
        angles: usize,
    },
}

impl QuadratureGrid {
    /// Cartesian grid covering every member of `suite`.
    pub fn covering(suite: &[TestFunction2D], points: usize) -> Self {
        let reach = suite.iter().map(|f| f.extent().reach()).fold(0.0, f64::max);
        Self::Cartesian {
            half_width: reach * 1.02,
            points: points + points % 2,
        }
    }

    /// Log-polar grid covering annular test functions.
    pub fn covering_annuli(suite: &[TestFunction2D], panels: usize, angles: usize) -> Result<Self> {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for f in suite {
            match f.extent() {
                Extent::Annulus { inner, outer } => {
                    lo = lo.min(inner);
                    hi = hi.max(outer);
                }
                Extent::Disk { .. } => {
                    return Err(Error::InvalidArgument(format!("{} is not annular", f.label())));
                }
            }
        }
        if suite.is_empty() {
            return Err(Error::InvalidArgument("empty suite".into()));
        }
        Ok(Self::LogPolar { r_min: lo, r_max: hi, panels, angles })
    }

    pub fn refined(&self) -> Self {
        match *self {
            Self::Cartesian { half_width, points } => Self::Cartesian { half_width, points: 2 * points },
            Self::Polar { r_max, panels, angles } => Self::Polar {
                r_max,
                panels: 2 * panels,
                angles: 2 * angles,
            },
            Self::LogPolar { r_min, r_max, panels, angles } => Self::LogPolar {
                r_min,
                r_max,
                panels: 2 * panels,
                angles: 2 * angles,
            },
        }
    }

    pub fn len(&self) -> usize {
        match *self {
            Self::Cartesian { points, .. } => points * points,
            Self::Polar { panels, angles, .. } | Self::LogPolar { panels, angles, .. } => {
                panels * PANEL_ORDER * angles
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes and weights.
    pub fn nodes(&self) -> Vec<(Point, f64)> {
        match *self {
            Self::Cartesian { half_width, points } => {
                let h = 2.0 * half_width / points as f64;
                let coord = |i: usize| -half_width + (i as f64 + 0.5) * h;
                (0..points * points)
                    .map(|k| ([coord(k % points), coord(k / points)], h * h))
                    .collect()
            }
            Self::Polar { r_max, panels, angles } => {
                let radial = panel_rule(0.0, r_max, panels);
                polar_nodes(radial.into_iter().map(|(r, w)| (r, w * r)).collect(), angles)
            }
            Self::LogPolar { r_min, r_max, panels, angles } => {
                let radial = panel_rule(r_min.ln(), r_max.ln(), panels);
                // dr r = r^2 ds
                polar_nodes(
                    radial
                        .into_iter()
                        .map(|(s, w)| {
                            let r = s.exp();
                            (r, w * r * r)
                        })
                        .collect(),
                    angles,
                )
            }
        }
    }
}

fn panel_rule(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(PANEL_ORDER);
    let h = (b - a) / panels as f64;
    (0..panels)
        .flat_map(|p| {
            let lo = a + p as f64 * h;
            x.iter()
                .zip(&w)
                .map(move |(xi, wi)| (lo + 0.5 * h * (xi + 1.0), 0.5 * h * wi))
                .collect::<Vec<_>>()
        })
        .collect()
}

fn polar_nodes(radial: Vec<(f64, f64)>, angles: usize) -> Vec<(Point, f64)> {
    let dt = std::f64::consts::TAU / angles as f64;
    radial
        .iter()
        .flat_map(|&(r, w)| {
            (0..angles).map(move |j| {
                let t = (j as f64 + 0.5) * dt;
                ([r * t.cos(), r * t.sin()], w * dt)
            })
        })
        .collect()
}

/// A vector potential tabulated on the nodes of a grid.
#[derive(Debug, Clone)]
pub struct SampledPotential {
    pub grid: QuadratureGrid,
    nodes: Vec<(Point, f64)>,
    values: Vec<[C64; 2]>,
}

impl SampledPotential {
    pub fn new<P: VectorPotential + ?Sized>(potential: &P, grid: QuadratureGrid) -> Result<Self> {
        let nodes = grid.nodes();
        let values = nodes
            .par_iter()
            .map(|(x, _)| potential.eval(*x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { grid, nodes, values })
    }

    /// `int |grad psi - i A psi|^2`
    pub fn quadratic_form(&self, psi: &TestFunction2D) -> f64 {
        let i = C64::new(0.0, 1.0);
        self.nodes
            .iter()
            .zip(&self.values)
            .map(|((x, w), a)| {
                let (v, g) = psi.eval_with_gradient(*x);
                if v.norm_sqr() == 0.0 && g[0].norm_sqr() + g[1].norm_sqr() == 0.0 {
                    return 0.0;
                }
                w * ((g[0] - i * a[0] * v).norm_sqr() + (g[1] - i * a[1] * v).norm_sqr())
            })
            .sum()
    }

    pub fn weighted_norm(&self, psi: &TestFunction2D, weight: &HardyWeight) -> f64 {
        weighted_norm_on(&self.nodes, psi, weight)
    }
}

fn weighted_norm_on(nodes: &[(Point, f64)], psi: &TestFunction2D, weight: &HardyWeight) -> f64 {
    nodes
        .iter()
        .map(|(x, w)| {
            let v = psi.eval(*x).norm_sqr();
            if v == 0.0 {
                0.0
            } else {
                w * weight.eval(*x) * v
            }
        })
        .sum()
}

/// Weights appearing on the right-hand side of Hardy inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HardyWeight {
    Unit,
    /// `1 / (1 + |x|^2)`
    Inverse,
    /// `1 / (1 + |x|^2 log^2 |x|)`
    Logarithmic,
    /// `1 / |x|^2`
    InverseSquare,
}

impl HardyWeight {
    pub fn eval(&self, x: Point) -> f64 {
        let r2 = x[0] * x[0] + x[1] * x[1];
        match self {
            Self::Unit => 1.0,
            Self::Inverse => 1.0 / (1.0 + r2),
            Self::Logarithmic => {
                let l = 0.5 * r2.ln();
                if r2 == 0.0 {
                    1.0
                } else {
                    1.0 / (1.0 + r2 * l * l)
                }
            }
            Self::InverseSquare => 1.0 / r2,
        }
    }
}

/// `int |grad psi - i A psi|^2` on a single grid.
pub fn quadratic_form_2d<P: VectorPotential + ?Sized>(
    potential: &P,
    psi: &TestFunction2D,
    grid: QuadratureGrid,
) -> Result<f64> {
    Ok(SampledPotential::new(potential, grid)?.quadratic_form(psi))
}

pub fn weighted_norm_2d(psi: &TestFunction2D, weight: HardyWeight, grid: QuadratureGrid) -> f64 {
    weighted_norm_on(&grid.nodes(), psi, &weight)
}

/// Value of a grid-doubling study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Refined {
    pub value: f64,
    pub previous: f64,
    pub grid: QuadratureGrid,
    pub converged: bool,
}

/// Doubles the grid until two successive values agree to `rel` (4 digits
/// by default) or `max_doublings` is reached.
pub fn refine<F: Fn(QuadratureGrid) -> Result<f64>>(
    start: QuadratureGrid,
    rel: f64,
    max_doublings: usize,
    value_on: F,
) -> Result<Refined> {
    let mut grid = start;
    let mut previous = value_on(grid)?;
    for _ in 0..max_doublings {
        let next = grid.refined();
        let value = value_on(next)?;
        let converged = (value - previous).abs() <= rel * value.abs().max(f64::MIN_POSITIVE);
        if converged {
            return Ok(Refined { value, previous, grid: next, converged });
        }
        grid = next;
        previous = value;
    }
    Ok(Refined {
        value: previous,
        previous,
        grid,
        converged: false,
    })
}
