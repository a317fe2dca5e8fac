//! Smooth test functions on the plane with analytic gradients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Point;
use crate::hardy::SequenceProfile;
use crate::C64;

/// Highest angular index used by [`TestFunction2D::random_bandlimited`].
pub const RANDOM_MAX_MODE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction2D {
    /// `exp(-|x - c|^2 / (2 w^2) + i k.x)`
    GaussianPacket {
        center: Point,
        width: f64,
        momentum: [f64; 2],
    },
    /// Smooth bump in `|x - c|` supported on `[radius - width, radius + width]`,
    /// times `e^{i m theta}` with `theta` the angle about `c`.
    RingBump {
        center: Point,
        radius: f64,
        width: f64,
        angular: i32,
    },
    /// `f_n(|x|) e^{i m theta}` with the piecewise-logarithmic profile.
    FnSequence { n: f64, angular: i32 },
    /// `exp(-|d|^2 / (2 s^2)) sum_m c_m (d_1 + i sgn(m) d_2)^{|m|} / s^{|m|}`, `d = x - c`.
    RandomBandlimited {
        seed: u64,
        center: Point,
        scale: f64,
        coefficients: Vec<(i32, C64)>,
    },
}

/// Region outside of which a test function is negligible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extent {
    Disk { center: Point, radius: f64 },
    /// Annulus about the origin.
    Annulus { inner: f64, outer: f64 },
}

impl Extent {
    /// Radius of the smallest origin-centred disk containing the region.
    pub fn reach(&self) -> f64 {
        match *self {
            Extent::Disk { center, radius } => center[0].hypot(center[1]) + radius,
            Extent::Annulus { outer, .. } => outer,
        }
    }
}

fn bump(t: f64) -> (f64, f64) {
    if t.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let q = 1.0 - t * t;
    let b = (1.0 - 1.0 / q).exp();
    (b, -2.0 * t / (q * q) * b)
}

fn phase(m: i32, theta: f64) -> C64 {
    C64::from_polar(1.0, m as f64 * theta)
}

impl TestFunction2D {
    pub fn gaussian_packet(center: Point, width: f64, momentum: [f64; 2]) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::InvalidArgument(format!("packet width must be positive, got {width}")));
        }
        Ok(Self::GaussianPacket { center, width, momentum })
    }

    pub fn ring_bump(center: Point, radius: f64, width: f64, angular: i32) -> Result<Self> {
        if !(width > 0.0 && radius > width) {
            return Err(Error::InvalidArgument(format!(
                "ring bump needs 0 < width < radius, got width {width}, radius {radius}"
            )));
        }
        Ok(Self::RingBump { center, radius, width, angular })
    }

    pub fn fn_sequence(n: f64, angular: i32) -> Result<Self> {
        SequenceProfile::new(n)?;
        Ok(Self::FnSequence { n, angular })
    }

    /// Seeded random combination of angular modes `|m| <= 3` under a Gaussian
    /// envelope; centre within `length` of the origin, envelope scale in
    /// `[0.3, 1] * length`.
    pub fn random_bandlimited(seed: u64, length: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let center = [rng.random_range(-1.0..1.0) * length, rng.random_range(-1.0..1.0) * length];
        let scale = rng.random_range(0.3..1.0) * length;
        let coefficients = (-RANDOM_MAX_MODE..=RANDOM_MAX_MODE)
            .map(|m| {
                let amp = 1.0 / (1.0 + m.abs() as f64);
                (m, C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * amp)
            })
            .collect();
        Self::RandomBandlimited { seed, center, scale, coefficients }
    }

    pub fn label(&self) -> String {
        match self {
            Self::GaussianPacket { center, width, .. } => {
                format!("gaussian_packet(c=({:.3},{:.3}), w={width:.3})", center[0], center[1])
            }
            Self::RingBump { center, radius, angular, .. } => format!(
                "ring_bump(c=({:.3},{:.3}), r={radius:.3}, m={angular})",
                center[0], center[1]
            ),
            Self::FnSequence { n, angular } => format!("fn_sequence(n={n}, m={angular})"),
            Self::RandomBandlimited { seed, .. } => format!("random_bandlimited(seed={seed})"),
        }
    }

    pub fn extent(&self) -> Extent {
        match self {
            Self::GaussianPacket { center, width, .. } => Extent::Disk { center: *center, radius: 6.0 * width },
            Self::RingBump { center, radius, width, .. } => Extent::Disk { center: *center, radius: radius + width },
            Self::FnSequence { n, .. } => Extent::Annulus { inner: *n, outer: n.powi(3) },
            Self::RandomBandlimited { center, scale, .. } => Extent::Disk { center: *center, radius: 9.0 * scale },
        }
    }

    /// Value and gradient at `x`.
    pub fn eval_with_gradient(&self, x: Point) -> (C64, [C64; 2]) {
        let zero = C64::new(0.0, 0.0);
        match self {
            Self::GaussianPacket { center, width, momentum } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                let w2 = width * width;
                let v = C64::new(
                    -0.5 * (d[0] * d[0] + d[1] * d[1]) / w2,
                    momentum[0] * x[0] + momentum[1] * x[1],
                )
                .exp();
                let g = [
                    v * C64::new(-d[0] / w2, momentum[0]),
                    v * C64::new(-d[1] / w2, momentum[1]),
                ];
                (v, g)
            }
            Self::RingBump { center, radius, width, angular } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                let rho = d[0].hypot(d[1]);
                let (b, db) = bump((rho - radius) / width);
                if b == 0.0 {
                    return (zero, [zero, zero]);
                }
                let e = phase(*angular, d[1].atan2(d[0]));
                let radial = db / width / rho;
                let ang = C64::new(0.0, *angular as f64) * b / (rho * rho);
                let g = [
                    e * (radial * d[0] - ang * d[1]),
                    e * (radial * d[1] + ang * d[0]),
                ];
                (e * b, g)
            }
            Self::FnSequence { n, angular } => {
                let profile = SequenceProfile::new(*n).expect("validated at construction");
                let r = x[0].hypot(x[1]);
                let f = profile.eval(r);
                let df = profile.derivative(r);
                if f == 0.0 && df == 0.0 {
                    return (zero, [zero, zero]);
                }
                let e = phase(*angular, x[1].atan2(x[0]));
                let ang = C64::new(0.0, *angular as f64) * f / (r * r);
                let g = [
                    e * (df * x[0] / r - ang * x[1]),
                    e * (df * x[1] / r + ang * x[0]),
                ];
                (e * f, g)
            }
            Self::RandomBandlimited { center, scale, coefficients, .. } => {
                let d = [(x[0] - center[0]) / scale, (x[1] - center[1]) / scale];
                let env = (-0.5 * (d[0] * d[0] + d[1] * d[1])).exp();
                let mut p = zero;
                let mut dp = [zero, zero];
                for &(m, c) in coefficients {
                    let k = m.unsigned_abs() as i32;
                    let sign = if m >= 0 { 1.0 } else { -1.0 };
                    let z = C64::new(d[0], sign * d[1]);
                    p += c * z.powi(k);
                    if k > 0 {
                        let dz = c * z.powi(k - 1) * k as f64;
                        dp[0] += dz;
                        dp[1] += dz * C64::new(0.0, sign);
                    }
                }
                // chain rule through d = (x - c) / s
                let g = [
                    env * (dp[0] - p * d[0]) / *scale,
                    env * (dp[1] - p * d[1]) / *scale,
                ];
                (env * p, g)
            }
        }
    }

    pub fn eval(&self, x: Point) -> C64 {
        self.eval_with_gradient(x).0
    }

    pub fn gradient(&self, x: Point) -> [C64; 2] {
        self.eval_with_gradient(x).1
    }
}

/// Seeded mixture of all function families, with length scales around
/// `length`.
pub fn mixed_suite(seed: u64, count: usize, length: f64) -> Vec<TestFunction2D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| match k % 3 {
            0 => {
                let c = [rng.random_range(-1.0..1.0) * length, rng.random_range(-1.0..1.0) * length];
                let w = rng.random_range(0.3..1.0) * length;
                let q = [rng.random_range(-1.0..1.0) / length, rng.random_range(-1.0..1.0) / length];
                TestFunction2D::GaussianPacket { center: c, width: w, momentum: q }
            }
            1 => {
                let c = [rng.random_range(-1.0..1.0) * length, rng.random_range(-1.0..1.0) * length];
                let radius = rng.random_range(0.5..1.5) * length;
                let width = rng.random_range(0.3..0.8) * radius;
                let m = rng.random_range(-3..=3);
                TestFunction2D::RingBump { center: c, radius, width, angular: m }
            }
            _ => TestFunction2D::random_bandlimited(rng.random(), length),
        })
        .collect()
}

/// Seeded ring bumps whose supports avoid the origin: annuli centred at the
/// origin and off-centre rings.
pub fn origin_free_suite(seed: u64, count: usize, length: f64) -> Vec<TestFunction2D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let radius = rng.random_range(0.5..1.5) * length;
            let width = rng.random_range(0.2..0.8) * radius;
            let m = rng.random_range(-3..=3);
            let center = if k % 2 == 0 {
                [0.0, 0.0]
            } else {
                let dist = radius + width + rng.random_range(0.1..1.0) * length;
                let t = rng.random_range(0.0..std::f64::consts::TAU);
                [dist * t.cos(), dist * t.sin()]
            };
            TestFunction2D::RingBump { center, radius, width, angular: m }
        })
        .collect()
}
