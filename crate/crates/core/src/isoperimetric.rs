//! Hölder's inequality and the isoperimetric bound on the critical torque.
//!
//! With `f = A^theta`, `g = A^-theta`, `theta = n / (n + 1)`, `p = (n + 1) / n`
//! and `q = n + 1` the three integrals in Hölder's inequality are
//! `integral f^p = V`, `integral g^q = integral A^-n` and `integral f g = L`,
//! which gives `L^(n+1) <= V^n integral A^-n` and so
//!
//! ```text
//! M* = 2 pi E alpha_n / integral A^-n  <=  M** = 2 pi E alpha_n V^n / L^(n+1)
//! ```
//!
//! with equality only for constant `A`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::greenhill;
use crate::shape::{integrate_panels, AreaProfile, CrossSectionLaw, RodSpec, DEFAULT_TOL};

/// Relative slack used when testing `lhs <= rhs`.
pub const HOLDS_SLACK: f64 = 1e-12;
/// Relative gap below which Hölder's inequality counts as an equality.
pub const EQUALITY_TOL: f64 = 1e-10;

const SUP_SAMPLES: usize = 4096;

/// `q` with `1/p + 1/q = 1`; `p = 1` gives `q = inf`.
pub fn holder_conjugate(p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return domain(format!("Hölder exponent must be at least 1, got {p}"));
    }
    if p == 1.0 {
        Ok(f64::INFINITY)
    } else if p.is_infinite() {
        Ok(1.0)
    } else {
        Ok(p / (p - 1.0))
    }
}

/// Nonnegative `f`, `g` on `[0, L]` with conjugate exponents `p`, `q`.
pub struct HolderInstance<F, G> {
    f: F,
    g: G,
    p: f64,
    q: f64,
    breaks: Vec<f64>,
}

impl<F, G> HolderInstance<F, G>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    pub fn new(f: F, g: G, p: f64, q: f64, length: f64) -> Result<Self> {
        Self::with_breaks(f, g, p, q, vec![0.0, length])
    }

    /// As [`HolderInstance::new`], with the points where `f` or `g` may be
    /// non-smooth given as integration panel boundaries.
    pub fn with_breaks(f: F, g: G, p: f64, q: f64, breaks: Vec<f64>) -> Result<Self> {
        if p.is_nan() || q.is_nan() || p < 1.0 || q < 1.0 {
            return domain(format!("exponents must satisfy 1 <= p, q <= inf, got ({p}, {q})"));
        }
        if ((1.0 / p + 1.0 / q) - 1.0).abs() > 1e-12 {
            return domain(format!("exponents {p} and {q} are not conjugate"));
        }
        if breaks.len() < 2 || breaks[0] != 0.0 || breaks.windows(2).any(|w| w[1] <= w[0]) {
            return domain("break points must start at 0 and increase strictly");
        }
        Ok(Self { f, g, p, q, breaks })
    }

    pub fn length(&self) -> f64 {
        *self.breaks.last().expect("non-empty")
    }

    fn sample_points(&self) -> Vec<f64> {
        let l = self.length();
        let mut pts: Vec<f64> = (0..=SUP_SAMPLES).map(|i| l * i as f64 / SUP_SAMPLES as f64).collect();
        pts.extend(self.breaks.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        pts
    }

    fn power_norm(&self, h: &dyn Fn(f64) -> f64, r: f64) -> Result<f64> {
        if r.is_infinite() {
            // essential supremum, approximated on a fine sample
            Ok(self
                .sample_points()
                .iter()
                .map(|t| h(*t))
                .fold(0.0, f64::max))
        } else {
            Ok(integrate_panels(|t| h(t).powf(r), &self.breaks, DEFAULT_TOL)?.powf(1.0 / r))
        }
    }

    /// Largest deviation between the normalized densities `f^p / integral f^p`
    /// and `g^q / integral g^q`, scaled by `L` so it is dimensionless.
    pub fn proportionality_gap(&self) -> Result<f64> {
        if self.p.is_infinite() || self.q.is_infinite() {
            return domain("proportionality is defined for finite exponents");
        }
        let fp = integrate_panels(|t| (self.f)(t).powf(self.p), &self.breaks, DEFAULT_TOL)?;
        let gq = integrate_panels(|t| (self.g)(t).powf(self.q), &self.breaks, DEFAULT_TOL)?;
        let l = self.length();
        Ok(self
            .sample_points()
            .iter()
            .map(|t| ((self.f)(*t).powf(self.p) / fp - (self.g)(*t).powf(self.q) / gq).abs() * l)
            .fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `(rhs - lhs) / rhs <= EQUALITY_TOL`.
    pub equality: bool,
}

/// Both sides of Hölder's inequality for one instance.
pub fn holder_check<F, G>(inst: &HolderInstance<F, G>) -> Result<HolderCheck>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if let Some(t) = inst
        .sample_points()
        .into_iter()
        .find(|t| !((inst.f)(*t) >= 0.0 && (inst.g)(*t) >= 0.0))
    {
        return domain(format!("f and g must be nonnegative, violated at {t}"));
    }
    let lhs = integrate_panels(|t| (inst.f)(t) * (inst.g)(t), &inst.breaks, DEFAULT_TOL)?;
    let rhs = inst.power_norm(&inst.f, inst.p)? * inst.power_norm(&inst.g, inst.q)?;
    let holds = lhs <= rhs * (1.0 + HOLDS_SLACK);
    let equality = holds && (rhs == 0.0 || (rhs - lhs) / rhs <= EQUALITY_TOL);
    Ok(HolderCheck {
        lhs,
        rhs,
        holds,
        equality,
    })
}

/// `(theta, p, q)` of the substitution `f = A^theta`, `g = A^-theta` for a
/// section law with exponent `n`.
pub fn holder_exponents_for_law(n: u8) -> Result<(f64, f64, f64)> {
    if !(1..=3).contains(&n) {
        return domain(format!("section law exponent must be 1, 2 or 3, got {n}"));
    }
    let n = n as f64;
    Ok((n / (n + 1.0), (n + 1.0) / n, n + 1.0))
}

/// `(integral f^p, integral g^q, integral f g)` for the law's substitution.
pub fn substitution_integrals(area: &AreaProfile, n: u8) -> Result<(f64, f64, f64)> {
    let (theta, p, q) = holder_exponents_for_law(n)?;
    Ok((
        area.power_integral(theta * p)?,
        area.power_integral(-theta * q)?,
        area.power_integral(0.0)?,
    ))
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return domain(format!("{name} must be positive, got {v}"));
    }
    Ok(())
}

/// `M** = 2 pi E alpha_n V^n / L^(n+1)`.
pub fn upper_bound(e: f64, law: CrossSectionLaw, volume: f64, length: f64) -> Result<f64> {
    check_positive("E", e)?;
    check_positive("V", volume)?;
    check_positive("L", length)?;
    let n = law.n() as i32;
    Ok(2.0 * PI * e * law.alpha() * volume.powi(n) / length.powi(n + 1))
}

/// `2 pi E alpha_n (V / L^(n+1))^(1/n)`.
///
/// Agrees with [`upper_bound`] only for `n = 1`; for other exponents it is
/// not a bound and fails the equality check on uniform rods. Kept as a
/// negative control for the verification suites.
pub fn upper_bound_root_form(e: f64, law: CrossSectionLaw, volume: f64, length: f64) -> Result<f64> {
    check_positive("E", e)?;
    check_positive("V", volume)?;
    check_positive("L", length)?;
    let n = law.n() as f64;
    Ok(2.0 * PI * e * law.alpha() * (volume / length.powf(n + 1.0)).powf(1.0 / n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsoperimetricReport {
    #[serde(rename = "M_star")]
    pub m_star: f64,
    #[serde(rename = "M_bound")]
    pub m_bound: f64,
    pub ratio: f64,
    pub equality_gap: f64,
}

/// Critical torque, volume bound and their ratio for a rod.
pub fn verify_bound(spec: &RodSpec) -> Result<IsoperimetricReport> {
    let m_star = 2.0 * PI / greenhill::compliance_integral(spec)?;
    let area = AreaProfile::from_spec(spec)?;
    let m_bound = upper_bound(spec.e, spec.law, area.volume(), area.length())?;
    Ok(IsoperimetricReport {
        m_star,
        m_bound,
        ratio: m_star / m_bound,
        equality_gap: area.equality_gap(),
    })
}
