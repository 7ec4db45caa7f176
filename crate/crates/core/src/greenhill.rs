//! Exact critical torque of a rod twisted by end couples.
//!
//! With stiffness `E * J_ref * F(xi)` on `[0, L]` the critical torque is
//! `M* = 2 pi E / integral_0^L dxi / (F(xi) J_ref)`. In the coordinate
//! `x(xi)` the buckling equations `E J_ref w' = -i M w + c` (with
//! `w = y + i z`, `c = c1 + i c2`) have constant coefficients, so the mode is
//! `w(x) = c / (i M) * (1 - exp(-i M x / (E J_ref)))`.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::shape::RodSpec;
use crate::transform::CoordinateMap;

/// Samples of a mode shape used by [`critical_torque`].
pub const DEFAULT_MODE_SAMPLES: usize = 4096;

/// Endpoint residual, relative to the mode amplitude, accepted by [`mode_shape`].
pub const EIGENVALUE_TOL: f64 = 1e-8;

/// Displacements `(y, z)` sampled along a coordinate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSamples {
    pub coord: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

impl ModeSamples {
    pub fn len(&self) -> usize {
        self.coord.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coord.is_empty()
    }

    /// `max sqrt(y^2 + z^2)`.
    pub fn amplitude(&self) -> f64 {
        self.y
            .iter()
            .zip(&self.z)
            .map(|(y, z)| y.hypot(*z))
            .fold(0.0, f64::max)
    }

    /// Writes `x,y,z` rows with round-trip precision.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,y,z")?;
        for ((x, y), z) in self.coord.iter().zip(&self.y).zip(&self.z) {
            writeln!(out, "{x:?},{y:?},{z:?}")?;
        }
        Ok(())
    }
}

/// A buckling mode with the integration constants it was built from.
///
/// `c1`, `c2` are scaled together with the samples, so the mode satisfies
/// `E J dy/dx = M z + c1`, `E J dz/dx = -M y + c2` as stored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mode {
    pub samples: ModeSamples,
    pub c1: f64,
    pub c2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucklingResult {
    pub m_crit: f64,
    pub mode_index: u32,
    pub c1: f64,
    pub c2: f64,
    /// Length `l` of the `x` coordinate the mode is sampled on.
    pub physical_length: f64,
    pub mode: ModeSamples,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return domain(format!("{name} must be positive, got {v}"));
    }
    Ok(())
}

/// `M_k = 2 pi k E J / l` for a uniform rod.
pub fn critical_torque_constant(e: f64, j: f64, l: f64, k: u32) -> Result<f64> {
    positive("E", e)?;
    positive("J", j)?;
    positive("l", l)?;
    if k == 0 {
        return domain("mode index must be at least 1");
    }
    Ok(2.0 * PI * k as f64 * e * j / l)
}

/// `integral_0^L dxi / (E J_ref F(xi))`.
pub fn compliance_integral(spec: &RodSpec) -> Result<f64> {
    let ej = spec.e * spec.j_ref;
    spec.shape
        .integrate_composed(|f| 1.0 / (ej * f), crate::shape::DEFAULT_TOL)
}

/// Critical torque of a profiled rod, with its first mode.
pub fn critical_torque(spec: &RodSpec) -> Result<BucklingResult> {
    critical_torque_k(spec, 1)
}

/// The `k`-th eigenvalue `2 pi k / integral dxi / (E J_ref F)` and its mode.
pub fn critical_torque_k(spec: &RodSpec, k: u32) -> Result<BucklingResult> {
    if k == 0 {
        return domain("mode index must be at least 1");
    }
    let m = 2.0 * PI * k as f64 / compliance_integral(spec)?;
    let mode = mode_shape(spec, m, 1.0, 0.0, DEFAULT_MODE_SAMPLES)?;
    Ok(BucklingResult {
        m_crit: m,
        mode_index: k,
        c1: mode.c1,
        c2: mode.c2,
        physical_length: mode.samples.coord.last().copied().unwrap_or(0.0),
        mode: mode.samples,
    })
}

/// Closed-form mode for torque `m` and constants `(c1, c2)`, sampled on
/// `grid_size` uniform points of `[0, l]` and normalized to unit amplitude.
pub fn mode_shape(spec: &RodSpec, m: f64, c1: f64, c2: f64, grid_size: usize) -> Result<Mode> {
    positive("torque", m)?;
    if c1 == 0.0 && c2 == 0.0 {
        return domain("integration constants (c1, c2) must not both vanish");
    }
    if !(c1.is_finite() && c2.is_finite()) {
        return domain("integration constants must be finite");
    }
    if grid_size < 2 {
        return domain("mode grid needs at least two samples");
    }
    let l = CoordinateMap::new(&spec.shape).physical_length();
    let ej = spec.e * spec.j_ref;
    let c = Complex64::new(c1, c2);
    let w = |x: f64| c / Complex64::new(0.0, m) * (1.0 - Complex64::new(0.0, -m * x / ej).exp());

    let last = grid_size - 1;
    let coord: Vec<f64> = (0..grid_size)
        .map(|i| if i == last { l } else { l * i as f64 / last as f64 })
        .collect();
    let values: Vec<Complex64> = coord.iter().map(|x| w(*x)).collect();

    // |w| = 2|c|/M |sin(theta/2)| with theta = M x / EJ
    let theta_end = m * l / ej;
    let peak = 2.0 * c.norm() / m * if theta_end >= PI { 1.0 } else { (theta_end / 2.0).sin() };
    let residual = w(l).norm() / peak;
    if residual > EIGENVALUE_TOL {
        return Err(Error::NotAnEigenvalue { torque: m, residual });
    }

    let amplitude = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let scale = 1.0 / amplitude;
    Ok(Mode {
        samples: ModeSamples {
            coord,
            y: values.iter().map(|v| v.re * scale).collect(),
            z: values.iter().map(|v| v.im * scale).collect(),
        },
        c1: c1 * scale,
        c2: c2 * scale,
    })
}

/// Residual of `E J y' = M z + c1`, `E J z' = -M y + c2` on a uniformly
/// sampled mode, using fourth-order differences (one-sided near the ends);
/// returns the largest pointwise residual divided by `E J * amplitude / l`.
pub fn mode_residual(mode: &Mode, m: f64, ej: f64) -> f64 {
    let s = &mode.samples;
    let n = s.len();
    if n < 5 {
        return f64::INFINITY;
    }
    let l = s.coord[n - 1] - s.coord[0];
    let h = l / (n - 1) as f64;
    let forward = |v: &dyn Fn(usize) -> f64, near_edge: bool| -> f64 {
        if near_edge {
            (-3.0 * v(0) - 10.0 * v(1) + 18.0 * v(2) - 6.0 * v(3) + v(4)) / (12.0 * h)
        } else {
            (-25.0 * v(0) + 48.0 * v(1) - 36.0 * v(2) + 16.0 * v(3) - 3.0 * v(4)) / (12.0 * h)
        }
    };
    let deriv = |v: &[f64], i: usize| -> f64 {
        match i {
            0 => forward(&|j| v[j], false),
            1 => forward(&|j| v[j], true),
            _ if i == n - 1 => -forward(&|j| v[n - 1 - j], false),
            _ if i == n - 2 => -forward(&|j| v[n - 1 - j], true),
            _ => (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h),
        }
    };
    let amplitude = s.amplitude();
    let scale = ej * amplitude / l;
    (0..n)
        .map(|i| {
            let ry = ej * deriv(&s.y, i) - (m * s.z[i] + mode.c1);
            let rz = ej * deriv(&s.z, i) - (-m * s.y[i] + mode.c2);
            ry.hypot(rz) / scale
        })
        .fold(0.0, f64::max)
}

/// Largest boundary displacement relative to the amplitude.
pub fn boundary_residual(samples: &ModeSamples) -> f64 {
    let n = samples.len();
    let a = samples.amplitude();
    [0, n - 1]
        .iter()
        .map(|i| samples.y[*i].hypot(samples.z[*i]) / a)
        .fold(0.0, f64::max)
}
