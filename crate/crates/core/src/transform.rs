//! Change of coordinate between the rod's arc length `xi in [0, L]` and the
//! coordinate `x in [0, l]` in which the buckling equations have constant
//! coefficients, `x(xi) = integral_0^xi dt / F(t)`.
//!
//! Every profile is affine on its panels, so `x(xi)` and its inverse are
//! evaluated in closed form inside a panel; a cumulative table of `x` at the
//! panel starts locates the panel.

use crate::error::{domain, Result};
use crate::greenhill::ModeSamples;
use crate::shape::{Panel, ShapeFunction, DEFAULT_TOL};

/// `l = integral_0^L dxi / F(xi)`: length of the constant-stiffness rod that
/// buckles like the profiled one.
pub fn physical_length(shape: &ShapeFunction) -> Result<f64> {
    shape.integrate_composed(|f| 1.0 / f, DEFAULT_TOL)
}

/// `integral_start^(start + d) dt / F(t)` on one affine panel.
fn panel_forward(p: &Panel, d: f64) -> f64 {
    if p.is_flat() {
        d / p.left
    } else {
        let s = p.slope();
        (s * d / p.left).ln_1p() / s
    }
}

/// Inverse of [`panel_forward`]: the offset `d` reaching `dx`.
fn panel_inverse(p: &Panel, dx: f64) -> f64 {
    if p.is_flat() {
        dx * p.left
    } else {
        let s = p.slope();
        p.left * (s * dx).exp_m1() / s
    }
}

/// Cached `xi <-> x` correspondence for one shape.
#[derive(Debug, Clone)]
pub struct CoordinateMap {
    panels: Vec<Panel>,
    cumulative: Vec<f64>,
    length: f64,
}

impl CoordinateMap {
    pub fn new(shape: &ShapeFunction) -> Self {
        let panels = shape.panels();
        let mut cumulative = Vec::with_capacity(panels.len() + 1);
        let mut acc = 0.0;
        cumulative.push(acc);
        for p in &panels {
            acc += panel_forward(p, p.width());
            cumulative.push(acc);
        }
        Self {
            panels,
            cumulative,
            length: shape.length(),
        }
    }

    /// Domain length `L` in `xi`.
    pub fn domain_length(&self) -> f64 {
        self.length
    }

    /// Image length `l` in `x`.
    pub fn physical_length(&self) -> f64 {
        *self.cumulative.last().expect("non-empty")
    }

    pub fn xi_to_x(&self, xi: f64) -> Result<f64> {
        let slack = 4.0 * f64::EPSILON * self.length;
        if !xi.is_finite() || xi < -slack || xi > self.length + slack {
            return domain(format!("xi = {xi} outside [0, {}]", self.length));
        }
        let xi = xi.clamp(0.0, self.length);
        if xi == self.length {
            return Ok(self.physical_length());
        }
        let i = self
            .panels
            .partition_point(|p| p.start <= xi)
            .saturating_sub(1);
        let p = &self.panels[i];
        Ok(self.cumulative[i] + panel_forward(p, xi - p.start))
    }

    pub fn x_to_xi(&self, x: f64) -> Result<f64> {
        let l = self.physical_length();
        let slack = 4.0 * f64::EPSILON * l;
        if !x.is_finite() || x < -slack || x > l + slack {
            return domain(format!("x = {x} outside [0, {l}]"));
        }
        let x = x.clamp(0.0, l);
        if x == l {
            return Ok(self.length);
        }
        let i = self
            .cumulative
            .partition_point(|c| *c <= x)
            .saturating_sub(1)
            .min(self.panels.len() - 1);
        let p = &self.panels[i];
        let d = panel_inverse(p, x - self.cumulative[i]);
        Ok((p.start + d).clamp(p.start, p.end))
    }

    /// Re-indexes samples taken on a `xi`-grid by their `x` images.
    pub fn pull_back_mode(&self, mode_in_xi: &ModeSamples) -> Result<ModeSamples> {
        let coord = mode_in_xi
            .coord
            .iter()
            .map(|xi| self.xi_to_x(*xi))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModeSamples {
            coord,
            y: mode_in_xi.y.clone(),
            z: mode_in_xi.z.clone(),
        })
    }
}
