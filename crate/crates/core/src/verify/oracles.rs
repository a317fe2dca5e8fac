//! Independent reference computations, mostly one-dimensional Rayleigh
//! minimizers by finite elements. Seeded potential suites live here too.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circle::CirclePotential;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::spectral;
use crate::C64;

/// Symmetric tridiagonal matrix: `diag` and the first super-diagonal `off`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    fn zeros(n: usize) -> Self {
        Self {
            diag: vec![0.0; n],
            off: vec![0.0; n.saturating_sub(1)],
        }
    }

    /// Adds a 2x2 element block on rows `i, i + 1`, clipping rows outside `0..n`
    /// (rows are shifted by `shift` to drop constrained nodes).
    fn add_element(&mut self, i: isize, block: [[f64; 2]; 2]) {
        let n = self.diag.len() as isize;
        let inside = |k: isize| k >= 0 && k < n;
        for a in 0..2 {
            if inside(i + a) {
                self.diag[(i + a) as usize] += block[a as usize][a as usize];
            }
        }
        if inside(i) && inside(i + 1) {
            self.off[i as usize] += block[0][1];
        }
    }
}

/// Number of eigenvalues of the pencil `K - t M` below `t`.
fn count_below(k: &Tridiagonal, m: &Tridiagonal, t: f64) -> usize {
    let mut count = 0;
    let mut pivot = 1.0;
    for i in 0..k.diag.len() {
        let d = k.diag[i] - t * m.diag[i];
        let prev = if i == 0 { 0.0 } else { k.off[i - 1] - t * m.off[i - 1] };
        pivot = if i == 0 { d } else { d - prev * prev / pivot };
        if pivot == 0.0 {
            pivot = -1e-300;
        }
        if pivot < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest eigenvalue of `K v = t M v` (`M` positive definite) by Sturm
/// bisection on `[lo, hi]`.
pub fn lowest_pencil_eigenvalue(k: &Tridiagonal, m: &Tridiagonal, lo: f64, hi: f64) -> Result<f64> {
    if count_below(k, m, hi) == 0 {
        return Err(Error::Solver(format!("no eigenvalue below {hi}")));
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if count_below(k, m, mid) > 0 {
            b = mid;
        } else {
            a = mid;
        }
        if b - a <= 1e-14 * b.abs().max(1e-300) {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Linear finite elements on the given nodes for
/// `inf int |f'|^2 p / int |f|^2 q` with Dirichlet conditions at the nodes
/// flagged in `(left, right)`.
fn fem_rayleigh<P: Fn(f64) -> f64, Q: Fn(f64) -> f64>(
    nodes: &[f64],
    stiffness_weight: P,
    mass_weight: Q,
    dirichlet: (bool, bool),
    upper: f64,
) -> Result<f64> {
    let first = usize::from(dirichlet.0);
    let last = nodes.len() - usize::from(dirichlet.1);
    let size = last - first;
    let mut k = Tridiagonal::zeros(size);
    let mut m = Tridiagonal::zeros(size);
    let (gx, gw) = gauss_legendre(6);
    for e in 0..nodes.len() - 1 {
        let (a, b) = (nodes[e], nodes[e + 1]);
        let h = b - a;
        let mut kp = 0.0;
        let mut mb = [[0.0; 2]; 2];
        for (x, w) in gx.iter().zip(&gw) {
            let xi = 0.5 * (x + 1.0);
            let r = a + h * xi;
            let jw = 0.5 * w * h;
            kp += jw * stiffness_weight(r) / (h * h);
            let q = jw * mass_weight(r);
            let phi = [1.0 - xi, xi];
            for i in 0..2 {
                for j in 0..2 {
                    mb[i][j] += q * phi[i] * phi[j];
                }
            }
        }
        let row = e as isize - first as isize;
        k.add_element(row, [[kp, -kp], [-kp, kp]]);
        m.add_element(row, mb);
    }
    lowest_pencil_eigenvalue(&k, &m, 0.0, upper)
}

/// Discrete minimum of `int_0^{r0} |f'|^2 r dr / int_0^{r0} |f|^2 r dr` over
/// `f` vanishing at `r0`.
pub fn gamma_interior_oracle(r0: f64, elements: usize) -> Result<f64> {
    if !(r0 > 0.0) || elements < 2 {
        return Err(Error::InvalidArgument("need r0 > 0 and at least two elements".into()));
    }
    let nodes: Vec<f64> = (0..=elements).map(|i| r0 * i as f64 / elements as f64).collect();
    fem_rayleigh(&nodes, |r| r, |r| r, (false, true), 100.0 / (r0 * r0))
}

/// Discrete minimum of `int_{r0}^inf |f'|^2 r dr / int |f|^2 / (r^2 log^2(r/r0)) r dr`
/// over `f` vanishing at `r0`, computed in `t = log(r/r0)` on the geometric
/// mesh `t = e^u`, `|u| <= span`, with `per_unit` elements per unit of `u`.
pub fn gamma_exterior_oracle(span: f64, per_unit: usize) -> Result<f64> {
    if !(span > 0.0) || per_unit == 0 {
        return Err(Error::InvalidArgument("need span > 0 and per_unit > 0".into()));
    }
    let count = (2.0 * span * per_unit as f64).ceil() as usize;
    let nodes: Vec<f64> = (0..=count)
        .map(|i| (-span + 2.0 * span * i as f64 / count as f64).exp())
        .collect();
    fem_rayleigh(&nodes, |_| 1.0, |t| 1.0 / (t * t), (true, true), 10.0)
}

/// `min_{|m| <= 1000} |m - alpha|^2`
pub fn constant_lambda_oracle(alpha: C64) -> f64 {
    (-1000i64..=1000)
        .map(|m| (C64::new(m as f64, 0.0) - alpha).norm_sqr())
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeBoundEntry {
    /// `||a psi||^2`
    pub lhs: f64,
    /// `eps ||a||^2 ||psi'||^2 + ||a||^2 (1/eps + 1/(2 pi)) ||psi||^2`
    pub rhs: f64,
    /// `||a||^2 sup |psi|^2`, the intermediate bound
    pub sup_bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeBoundReport {
    pub eps: f64,
    pub a_norm_sq: f64,
    pub entries: Vec<RelativeBoundEntry>,
    pub pass: bool,
}

/// Checks `||a psi||^2 <= eps ||a||^2 ||psi'||^2 + ||a||^2 (1/eps + 1/(2pi)) ||psi||^2`
/// for periodic functions sampled on the grid of `a`.
pub fn relative_bound_check(a: &CirclePotential, suite: &[Vec<C64>], eps: f64) -> Result<RelativeBoundReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let n = a.n();
    let a_norm_sq = spectral::norm_sq(a.samples());
    let entries = suite
        .iter()
        .map(|psi| {
            if psi.len() != n {
                return Err(Error::InvalidArgument(format!("sample count {} != {n}", psi.len())));
            }
            let product: Vec<C64> = psi.iter().zip(a.samples()).map(|(p, q)| p * q).collect();
            let lhs = spectral::norm_sq(&product);
            let dpsi = spectral::derivative(psi);
            let rhs = eps * a_norm_sq * spectral::norm_sq(&dpsi)
                + a_norm_sq * (1.0 / eps + 1.0 / std::f64::consts::TAU) * spectral::norm_sq(psi);
            let sup = psi.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
            let slack = 1e-12 * rhs.max(1e-300);
            Ok(RelativeBoundEntry {
                lhs,
                rhs,
                sup_bound: a_norm_sq * sup,
                pass: lhs <= rhs + slack,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RelativeBoundReport {
        eps,
        a_norm_sq,
        pass: entries.iter().all(|e| e.pass),
        entries,
    })
}

/// Kinds of seeded circle potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialClass {
    Real,
    /// Complex with `<Im a> = 0`.
    QuasiSelfAdjoint,
    /// Complex with `|<Im a>| >= 0.05`.
    Violating,
}

/// Band-limited potential with modes `|k| <= band` and coefficients decaying
/// like `1 / (1 + |k|)`.
pub fn random_potential(seed: u64, class: PotentialClass, band: usize, n: usize) -> Result<CirclePotential> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let band = band as i64;
    let mut modes = Vec::new();
    for k in -band..=band {
        let amp = 0.6 / (1.0 + k.abs() as f64);
        let mut c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * amp;
        if k == 0 {
            c.im = match class {
                PotentialClass::Violating => {
                    let v: f64 = rng.random_range(0.05..0.5);
                    if rng.random::<bool>() {
                        v
                    } else {
                        -v
                    }
                }
                _ => 0.0,
            };
        }
        modes.push((k, c));
    }
    let a = CirclePotential::from_fourier(&modes, n)?;
    Ok(match class {
        PotentialClass::Real => a.real_part(),
        _ => a,
    })
}

/// `count` potentials of one class with consecutive seeds from `seed`.
pub fn potential_suite(seed: u64, class: PotentialClass, count: usize, band: usize, n: usize) -> Result<Vec<CirclePotential>> {
    (0..count as u64)
        .map(|k| random_potential(seed.wrapping_add(k), class, band, n))
        .collect()
}
