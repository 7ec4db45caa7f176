//! Stiffness profiles, the section law and the area/volume they imply.
//!
//! A rod of length `L` carries bending stiffness `E * J_ref * F(xi)` at
//! arc-length coordinate `xi`. The section law `F * J_ref = alpha_n * A^n`
//! ties that stiffness to the cross-sectional area `A`.

use crate::error::{domain, Result};
pub use crate::quadrature::{integrate, integrate_panels, DEFAULT_TOL};

/// Smallest admissible ratio `min F / max F`.
pub const MIN_RELATIVE_STIFFNESS: f64 = 1e-9;

/// How a profile is represented between its nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Constant(f64),
    /// `values[i]` holds on `[breakpoints[i], breakpoints[i + 1])`; the last
    /// segment is closed on the right.
    Piecewise {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    /// Values on a uniform grid spanning `[0, L]`, linearly interpolated.
    Sampled(Vec<f64>),
}

/// One interval on which a profile is affine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub start: f64,
    pub end: f64,
    pub left: f64,
    pub right: f64,
}

impl Panel {
    pub fn width(&self) -> f64 {
        self.end - self.start
    }

    pub fn slope(&self) -> f64 {
        (self.right - self.left) / self.width()
    }

    pub fn is_flat(&self) -> bool {
        self.left == self.right
    }

    /// Value of the affine piece at `t`; `t` is not clamped.
    pub fn value_at(&self, t: f64) -> f64 {
        if self.is_flat() {
            self.left
        } else {
            self.left + (self.right - self.left) * ((t - self.start) / self.width())
        }
    }
}

/// Dimensionless stiffness profile `F(xi) > 0` on `[0, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeFunction {
    profile: Profile,
    length: f64,
}

fn check_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return domain("profile needs at least one value");
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite() || **v <= 0.0) {
        return domain(format!("profile values must be finite and positive, found {v}"));
    }
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    if min < MIN_RELATIVE_STIFFNESS * max {
        return domain(format!(
            "profile minimum {min} is below {MIN_RELATIVE_STIFFNESS} of its maximum {max}"
        ));
    }
    Ok(())
}

fn check_length(length: f64) -> Result<()> {
    if !(length.is_finite() && length > 0.0) {
        return domain(format!("domain length must be finite and positive, got {length}"));
    }
    Ok(())
}

impl ShapeFunction {
    pub fn constant(value: f64, length: f64) -> Result<Self> {
        check_length(length)?;
        check_values(&[value])?;
        Ok(Self {
            profile: Profile::Constant(value),
            length,
        })
    }

    /// Piecewise-constant profile; the domain length is the last breakpoint.
    pub fn piecewise(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_values(&values)?;
        if breakpoints.len() != values.len() + 1 {
            return domain(format!(
                "{} values need {} breakpoints, got {}",
                values.len(),
                values.len() + 1,
                breakpoints.len()
            ));
        }
        if breakpoints[0] != 0.0 {
            return domain(format!("first breakpoint must be 0, got {}", breakpoints[0]));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return domain("breakpoints must be finite and strictly increasing");
        }
        let length = *breakpoints.last().expect("non-empty");
        check_length(length)?;
        Ok(Self {
            profile: Profile::Piecewise { breakpoints, values },
            length,
        })
    }

    /// Piecewise-constant profile with equal-length segments.
    pub fn piecewise_uniform(length: f64, values: Vec<f64>) -> Result<Self> {
        check_length(length)?;
        let k = values.len();
        if k == 0 {
            return domain("profile needs at least one value");
        }
        let mut breakpoints: Vec<f64> = (0..=k).map(|i| length * i as f64 / k as f64).collect();
        breakpoints[k] = length;
        Self::piecewise(breakpoints, values)
    }

    /// Uniformly sampled profile with linear interpolation between nodes.
    pub fn sampled(length: f64, values: Vec<f64>) -> Result<Self> {
        check_length(length)?;
        if values.len() < 2 {
            return domain("a sampled profile needs at least two nodes");
        }
        check_values(&values)?;
        Ok(Self {
            profile: Profile::Sampled(values),
            length,
        })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// Domain length `L`.
    pub fn length(&self) -> f64 {
        self.length
    }

    fn nodes(&self) -> &[f64] {
        match &self.profile {
            Profile::Constant(v) => std::slice::from_ref(v),
            Profile::Piecewise { values, .. } => values,
            Profile::Sampled(values) => values,
        }
    }

    /// Minimum of `F`; attained at a node for every representation.
    pub fn min_value(&self) -> f64 {
        self.nodes().iter().copied().fold(f64::MAX, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.nodes().iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn is_piecewise_constant(&self) -> bool {
        !matches!(self.profile, Profile::Sampled(_))
    }

    fn grid_step(values: &[f64], length: f64) -> f64 {
        length / (values.len() - 1) as f64
    }

    /// The affine pieces of the profile, in order, covering `[0, L]`.
    pub fn panels(&self) -> Vec<Panel> {
        match &self.profile {
            Profile::Constant(v) => vec![Panel {
                start: 0.0,
                end: self.length,
                left: *v,
                right: *v,
            }],
            Profile::Piecewise { breakpoints, values } => breakpoints
                .windows(2)
                .zip(values)
                .map(|(w, v)| Panel {
                    start: w[0],
                    end: w[1],
                    left: *v,
                    right: *v,
                })
                .collect(),
            Profile::Sampled(values) => {
                let h = Self::grid_step(values, self.length);
                let m = values.len() - 1;
                (0..m)
                    .map(|i| Panel {
                        start: i as f64 * h,
                        end: if i + 1 == m { self.length } else { (i + 1) as f64 * h },
                        left: values[i],
                        right: values[i + 1],
                    })
                    .collect()
            }
        }
    }

    /// Panel boundaries, `0` through `L`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let panels = self.panels();
        let mut out: Vec<f64> = panels.iter().map(|p| p.start).collect();
        out.push(self.length);
        out
    }

    pub(crate) fn check_domain(&self, xi: f64) -> Result<f64> {
        let slack = 4.0 * f64::EPSILON * self.length;
        if !xi.is_finite() || xi < -slack || xi > self.length + slack {
            return domain(format!("xi = {xi} outside [0, {}]", self.length));
        }
        Ok(xi.clamp(0.0, self.length))
    }

    /// `F(xi)`.
    pub fn evaluate(&self, xi: f64) -> Result<f64> {
        let xi = self.check_domain(xi)?;
        Ok(self.value_unchecked(xi))
    }

    pub(crate) fn value_unchecked(&self, xi: f64) -> f64 {
        match &self.profile {
            Profile::Constant(v) => *v,
            Profile::Piecewise { breakpoints, values } => {
                let i = breakpoints.partition_point(|b| *b <= xi);
                values[i.saturating_sub(1).min(values.len() - 1)]
            }
            Profile::Sampled(values) => {
                let h = Self::grid_step(values, self.length);
                let i = ((xi / h).floor() as usize).min(values.len() - 2);
                let t = (xi - i as f64 * h) / h;
                values[i] + (values[i + 1] - values[i]) * t
            }
        }
    }

    /// Applies `f` to every node value, keeping the representation.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let profile = match &self.profile {
            Profile::Constant(v) => Profile::Constant(f(*v)),
            Profile::Piecewise { breakpoints, values } => Profile::Piecewise {
                breakpoints: breakpoints.clone(),
                values: values.iter().map(|v| f(*v)).collect(),
            },
            Profile::Sampled(values) => Profile::Sampled(values.iter().map(|v| f(*v)).collect()),
        };
        check_values(match &profile {
            Profile::Constant(v) => std::slice::from_ref(v),
            Profile::Piecewise { values, .. } | Profile::Sampled(values) => values,
        })?;
        Ok(Self {
            profile,
            length: self.length,
        })
    }

    /// `lambda * F`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return domain(format!("scale factor must be positive, got {lambda}"));
        }
        self.map_values(|v| lambda * v)
    }

    /// The profile `xi -> F(xi / s)` on `[0, s * L]`.
    pub fn stretched(&self, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return domain(format!("stretch factor must be positive, got {s}"));
        }
        let length = s * self.length;
        match &self.profile {
            Profile::Constant(v) => Self::constant(*v, length),
            Profile::Piecewise { breakpoints, values } => {
                let mut b: Vec<f64> = breakpoints.iter().map(|x| s * x).collect();
                *b.last_mut().expect("non-empty") = length;
                Self::piecewise(b, values.clone())
            }
            Profile::Sampled(values) => Self::sampled(length, values.clone()),
        }
    }

    /// `integral_0^L g(F(xi)) dxi`, panel by panel.
    pub fn integrate_composed(&self, g: impl Fn(f64) -> f64, tol: f64) -> Result<f64> {
        if self.is_piecewise_constant() {
            // exact: g(F) is constant on each panel
            return Ok(self.panels().iter().map(|p| p.width() * g(p.left)).sum());
        }
        integrate_panels(|t| g(self.value_unchecked(t)), &self.breakpoints(), tol)
    }
}

/// Section law `F * J_ref = alpha * A^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSectionLaw {
    n: u8,
    alpha: f64,
}

impl CrossSectionLaw {
    pub fn new(n: u8, alpha: f64) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return domain(format!("section law exponent must be 1, 2 or 3, got {n}"));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return domain(format!("section law coefficient must be positive, got {alpha}"));
        }
        Ok(Self { n, alpha })
    }

    /// Geometrically similar solid circles: `J = A^2 / (4 pi)`.
    pub fn solid_circle() -> Self {
        Self {
            n: 2,
            alpha: 1.0 / (4.0 * std::f64::consts::PI),
        }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Area carrying second moment `j`.
    pub fn area_for_inertia(&self, j: f64) -> f64 {
        root(j / self.alpha, self.n)
    }

    /// Second moment `alpha * A^n`.
    pub fn inertia_for_area(&self, a: f64) -> f64 {
        self.alpha * a.powi(self.n as i32)
    }
}

fn root(x: f64, n: u8) -> f64 {
    match n {
        1 => x,
        2 => x.sqrt(),
        3 => x.cbrt(),
        _ => x.powf(1.0 / n as f64),
    }
}

/// Isotropic rod: modulus, reference second moment, stiffness profile and section law.
#[derive(Debug, Clone, PartialEq)]
pub struct RodSpec {
    pub(crate) e: f64,
    pub(crate) j_ref: f64,
    pub(crate) shape: ShapeFunction,
    pub(crate) law: CrossSectionLaw,
}

impl RodSpec {
    pub fn new(e: f64, j_ref: f64, shape: ShapeFunction, law: CrossSectionLaw) -> Result<Self> {
        if !(e.is_finite() && e > 0.0) {
            return domain(format!("Young's modulus must be positive, got {e}"));
        }
        if !(j_ref.is_finite() && j_ref > 0.0) {
            return domain(format!("reference second moment must be positive, got {j_ref}"));
        }
        Ok(Self { e, j_ref, shape, law })
    }

    pub fn modulus(&self) -> f64 {
        self.e
    }

    pub fn j_ref(&self) -> f64 {
        self.j_ref
    }

    pub fn shape(&self) -> &ShapeFunction {
        &self.shape
    }

    pub fn law(&self) -> CrossSectionLaw {
        self.law
    }

    pub fn length(&self) -> f64 {
        self.shape.length()
    }

    /// Bending stiffness `E * J_ref * F(xi)`.
    pub fn bending_stiffness(&self, xi: f64) -> Result<f64> {
        Ok(self.e * self.j_ref * self.shape.evaluate(xi)?)
    }

    pub fn with_shape(&self, shape: ShapeFunction) -> Self {
        Self {
            shape,
            ..self.clone()
        }
    }

    pub fn with_modulus(&self, e: f64) -> Result<Self> {
        Self::new(e, self.j_ref, self.shape.clone(), self.law)
    }
}

/// Cross-sectional area along the rod and the resulting volume.
///
/// Stored as `A(xi) = (G(xi) * scale)^(1/root)` over a profile `G`, so that
/// areas derived from a stiffness profile and areas given directly as
/// segments share one representation without resampling.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaProfile {
    base: ShapeFunction,
    scale: f64,
    root: u8,
    volume: f64,
}

impl AreaProfile {
    fn build(base: ShapeFunction, scale: f64, root: u8) -> Result<Self> {
        let mut out = Self {
            base,
            scale,
            root,
            volume: 0.0,
        };
        out.volume = if out.base.is_piecewise_constant() {
            out.base
                .panels()
                .iter()
                .map(|p| p.width() * out.map(p.left))
                .sum()
        } else {
            integrate_panels(|t| out.area_unchecked(t), &out.base.breakpoints(), DEFAULT_TOL)?
        };
        Ok(out)
    }

    /// Areas `(F * J_ref / alpha)^(1/n)` of a rod.
    pub fn from_spec(spec: &RodSpec) -> Result<Self> {
        Self::build(spec.shape.clone(), spec.j_ref / spec.law.alpha, spec.law.n)
    }

    /// Piecewise-constant areas on equal-length segments of `[0, length]`.
    pub fn from_segments(length: f64, areas: Vec<f64>) -> Result<Self> {
        Self::build(ShapeFunction::piecewise_uniform(length, areas)?, 1.0, 1)
    }

    /// Piecewise-constant areas on explicit breakpoints.
    pub fn from_breakpoints(breakpoints: Vec<f64>, areas: Vec<f64>) -> Result<Self> {
        Self::build(ShapeFunction::piecewise(breakpoints, areas)?, 1.0, 1)
    }

    fn map(&self, g: f64) -> f64 {
        root(g * self.scale, self.root)
    }

    fn area_unchecked(&self, xi: f64) -> f64 {
        self.map(self.base.value_unchecked(xi))
    }

    /// `A(xi)`.
    pub fn area(&self, xi: f64) -> Result<f64> {
        let xi = self.base.check_domain(xi)?;
        Ok(self.area_unchecked(xi))
    }

    /// `V = integral_0^L A(xi) dxi`.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn length(&self) -> f64 {
        self.base.length()
    }

    pub fn mean_area(&self) -> f64 {
        self.volume / self.length()
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.base.is_piecewise_constant()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.base.breakpoints()
    }

    /// Areas at the profile nodes (segment values or grid samples).
    pub fn node_areas(&self) -> Vec<f64> {
        match self.base.profile() {
            Profile::Constant(v) => vec![self.map(*v)],
            Profile::Piecewise { values, .. } | Profile::Sampled(values) => {
                values.iter().map(|v| self.map(*v)).collect()
            }
        }
    }

    /// `integral_0^L A(xi)^(-n) dxi`.
    pub fn inverse_power_integral(&self, n: u8) -> Result<f64> {
        self.power_integral(-(n as f64))
    }

    /// `integral_0^L A(xi)^s dxi`.
    pub fn power_integral(&self, s: f64) -> Result<f64> {
        self.base
            .integrate_composed(|g| self.map(g).powf(s), DEFAULT_TOL)
    }

    /// Relative sup-distance of `A` from its mean `V / L`.
    pub fn equality_gap(&self) -> f64 {
        let mean = self.mean_area();
        self.node_areas()
            .iter()
            .map(|a| (a - mean).abs() / mean)
            .fold(0.0, f64::max)
    }

    /// Stiffness profile `F = alpha * A^n / J_ref` of this area distribution.
    pub fn stiffness_profile(&self, law: CrossSectionLaw, j_ref: f64) -> Result<ShapeFunction> {
        if !(j_ref.is_finite() && j_ref > 0.0) {
            return domain(format!("reference second moment must be positive, got {j_ref}"));
        }
        self.base
            .map_values(|g| law.inertia_for_area(self.map(g)) / j_ref)
    }

    /// Rod with modulus `e` whose areas are this profile.
    pub fn to_rod(&self, e: f64, law: CrossSectionLaw, j_ref: f64) -> Result<RodSpec> {
        RodSpec::new(e, j_ref, self.stiffness_profile(law, j_ref)?, law)
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return domain(format!("scale factor must be positive, got {lambda}"));
        }
        let factor = lambda.powi(self.root as i32);
        Self::build(self.base.clone(), self.scale * factor, self.root)
    }
}

/// `A(xi)` and `V` for a rod.
pub fn area_profile(spec: &RodSpec) -> Result<AreaProfile> {
    AreaProfile::from_spec(spec)
}

/// `F(xi)` for a shape.
pub fn evaluate(shape: &ShapeFunction, xi: f64) -> Result<f64> {
    shape.evaluate(xi)
}
