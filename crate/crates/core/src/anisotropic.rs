//! Rods whose principal second moments differ by a constant ratio.
//!
//! With `k = J_y / J_z` fixed along the rod, the substitution
//! `Y = k^(1/4) Y~`, `Z = k^(-1/4) Z~` turns the anisotropic equations into
//! the isotropic ones with `J = sqrt(J_y J_z)`.

use crate::error::{domain, Result};
use crate::greenhill::{self, BucklingResult};
use crate::oracle::{self, ShootingResult, Stiffness, BRACKET_PROBES};
use crate::shape::{CrossSectionLaw, RodSpec, ShapeFunction};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnisotropicSection {
    jy: f64,
    jz: f64,
}

impl AnisotropicSection {
    pub fn new(jy: f64, jz: f64) -> Result<Self> {
        if !(jy.is_finite() && jy > 0.0 && jz.is_finite() && jz > 0.0) {
            return domain(format!("second moments must be positive, got Jy = {jy}, Jz = {jz}"));
        }
        Ok(Self { jy, jz })
    }

    pub fn jy(&self) -> f64 {
        self.jy
    }

    pub fn jz(&self) -> f64 {
        self.jz
    }

    /// `k = J_y / J_z`.
    pub fn ratio(&self) -> f64 {
        self.jy / self.jz
    }
}

/// `sqrt(J_y J_z)`.
pub fn effective_inertia(section: &AnisotropicSection) -> f64 {
    (section.jy * section.jz).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnisotropicRod {
    pub(crate) e: f64,
    pub(crate) section: AnisotropicSection,
    pub(crate) shape: ShapeFunction,
    pub(crate) law: CrossSectionLaw,
}

impl AnisotropicRod {
    pub fn new(e: f64, section: AnisotropicSection, shape: ShapeFunction, law: CrossSectionLaw) -> Result<Self> {
        if !(e.is_finite() && e > 0.0) {
            return domain(format!("Young's modulus must be positive, got {e}"));
        }
        Ok(Self { e, section, shape, law })
    }

    pub fn section(&self) -> AnisotropicSection {
        self.section
    }

    pub fn shape(&self) -> &ShapeFunction {
        &self.shape
    }

    pub fn modulus(&self) -> f64 {
        self.e
    }

    pub fn law(&self) -> CrossSectionLaw {
        self.law
    }

    fn stiffness(&self) -> Stiffness {
        Stiffness {
            dy: self.e * self.section.jz,
            dz: self.e * self.section.jy,
        }
    }
}

/// Isotropic rod with `J_ref = sqrt(J_y J_z)` and the same `E`, `F` and law.
pub fn reduce_to_isotropic(rod: &AnisotropicRod) -> Result<RodSpec> {
    RodSpec::new(rod.e, effective_inertia(&rod.section), rod.shape.clone(), rod.law)
}

/// `(Y, Z) = (k^(1/4) Y~, k^(-1/4) Z~)`.
pub fn to_anisotropic_mode(k: f64, y_iso: f64, z_iso: f64) -> (f64, f64) {
    let s = k.powf(0.25);
    (s * y_iso, z_iso / s)
}

/// Inverse of [`to_anisotropic_mode`].
pub fn to_isotropic_mode(k: f64, y: f64, z: f64) -> (f64, f64) {
    let s = k.powf(0.25);
    (y / s, s * z)
}

/// Critical torque through the reduction; the mode is mapped back to the
/// anisotropic displacements and renormalized to unit amplitude.
pub fn critical_torque(rod: &AnisotropicRod) -> Result<BucklingResult> {
    let mut result = greenhill::critical_torque(&reduce_to_isotropic(rod)?)?;
    let k = rod.section.ratio();
    let (y, z): (Vec<f64>, Vec<f64>) = result
        .mode
        .y
        .iter()
        .zip(&result.mode.z)
        .map(|(y, z)| to_anisotropic_mode(k, *y, *z))
        .unzip();
    result.mode.y = y;
    result.mode.z = z;
    let a = result.mode.amplitude();
    result.mode.y.iter_mut().chain(result.mode.z.iter_mut()).for_each(|v| *v /= a);
    // constants of the anisotropic equations: c = (k^(-1/4) c1~, k^(1/4) c2~)
    let s = k.powf(0.25);
    result.c1 /= s * a;
    result.c2 *= s / a;
    Ok(result)
}

/// Shooting on the anisotropic equations as written, without reduction.
pub fn oracle_anisotropic(rod: &AnisotropicRod, m: f64, steps: usize) -> Result<ShootingResult> {
    oracle::shoot_with(&rod.shape, rod.stiffness(), m, steps)
}

/// Smallest eigenvalue of the anisotropic shooting problem in `bracket`.
pub fn critical_torque_oracle_anisotropic(
    rod: &AnisotropicRod,
    bracket: (f64, f64),
    tol: f64,
    steps: usize,
) -> Result<f64> {
    // shoot once to validate the arguments
    oracle_anisotropic(rod, bracket.1, steps)?;
    let panels = rod.shape.panels();
    let alloc = oracle::allocate_steps(&panels, steps);
    let g = oracle::root_function(&panels, &alloc, rod.stiffness());
    oracle::first_eigenvalue(g, bracket.0, bracket.1, tol, BRACKET_PROBES)
}
