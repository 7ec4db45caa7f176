//! Shooting eigensolver for the buckling boundary-value problem.
//!
//! The once-integrated equations
//!
//! ```text
//! E J_z F(xi) dy/dxi =  M z + c1
//! E J_y F(xi) dz/dxi = -M y + c2,     y(0) = z(0) = 0
//! ```
//!
//! are integrated with classical RK4 on the rod's own coordinate, stepping
//! panel by panel so that no step straddles a kink or jump of `F`. The
//! endpoint map `(c1, c2) -> (y(L), z(L))` is singular exactly at the
//! critical torques. Nothing here uses the closed-form functional; the
//! functional is only consulted to pick a default search bracket.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::greenhill;
use crate::shape::{Panel, RodSpec, ShapeFunction};

pub const DEFAULT_STEPS: usize = 4096;
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
pub const BRACKET_PROBES: usize = 64;
const MIN_STEPS: usize = 16;

/// Endpoint map of one shooting run at torque `torque`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingResult {
    /// Column `j` is `(y(L), z(L))` for the `j`-th unit vector `(c1, c2)`.
    pub endpoint: [[f64; 2]; 2],
    pub det: f64,
    pub torque: f64,
}

impl ShootingResult {
    /// `(y(L), z(L))` for arbitrary constants, by linearity.
    pub fn apply(&self, c1: f64, c2: f64) -> (f64, f64) {
        let s = &self.endpoint;
        (s[0][0] * c1 + s[0][1] * c2, s[1][0] * c1 + s[1][1] * c2)
    }
}

/// Stiffness multiplying `dy` and `dz` (`E J_z` and `E J_y`), before `F`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Stiffness {
    pub dy: f64,
    pub dz: f64,
}

/// Splits `total` steps over the panels in proportion to their widths.
pub(crate) fn allocate_steps(panels: &[Panel], total: usize) -> Vec<usize> {
    let length: f64 = panels.iter().map(Panel::width).sum();
    panels
        .iter()
        .map(|p| ((total as f64 * p.width() / length).round() as usize).max(1))
        .collect()
}

/// Integrates the initial-value problem from `y = z = 0`; returns `(y(L), z(L))`.
pub(crate) fn integrate_ivp(
    panels: &[Panel],
    steps: &[usize],
    stiffness: Stiffness,
    m: f64,
    c: (f64, f64),
) -> (f64, f64) {
    let (mut y, mut z) = (0.0, 0.0);
    for (p, &n) in panels.iter().zip(steps) {
        let h = p.width() / n as f64;
        let rhs = |t: f64, y: f64, z: f64| {
            let f = p.value_at(t);
            (
                (m * z + c.0) / (stiffness.dy * f),
                (-m * y + c.1) / (stiffness.dz * f),
            )
        };
        for i in 0..n {
            let t = p.start + i as f64 * h;
            let (k1y, k1z) = rhs(t, y, z);
            let (k2y, k2z) = rhs(t + 0.5 * h, y + 0.5 * h * k1y, z + 0.5 * h * k1z);
            let (k3y, k3z) = rhs(t + 0.5 * h, y + 0.5 * h * k2y, z + 0.5 * h * k2z);
            let (k4y, k4z) = rhs(t + h, y + h * k3y, z + h * k3z);
            y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        }
    }
    (y, z)
}

fn check_shoot_args(m: f64, steps: usize) -> Result<()> {
    if !(m.is_finite() && m > 0.0) {
        return domain(format!("torque must be positive, got {m}"));
    }
    if steps < MIN_STEPS {
        return domain(format!("need at least {MIN_STEPS} steps, got {steps}"));
    }
    Ok(())
}

pub(crate) fn shoot_with(
    shape: &ShapeFunction,
    stiffness: Stiffness,
    m: f64,
    steps: usize,
) -> Result<ShootingResult> {
    check_shoot_args(m, steps)?;
    let panels = shape.panels();
    let alloc = allocate_steps(&panels, steps);
    let (y1, z1) = integrate_ivp(&panels, &alloc, stiffness, m, (1.0, 0.0));
    let (y2, z2) = integrate_ivp(&panels, &alloc, stiffness, m, (0.0, 1.0));
    Ok(ShootingResult {
        endpoint: [[y1, y2], [z1, z2]],
        det: y1 * z2 - y2 * z1,
        torque: m,
    })
}

/// Endpoint map of the isotropic rod at torque `m`.
pub fn shoot(spec: &RodSpec, m: f64, steps: usize) -> Result<ShootingResult> {
    shoot_with(&spec.shape, isotropic_stiffness(spec), m, steps)
}

fn isotropic_stiffness(spec: &RodSpec) -> Stiffness {
    let ej = spec.e * spec.j_ref;
    Stiffness { dy: ej, dz: ej }
}

/// Signed root function: `y(L)` for `(c1, c2) = (1, 0)`.
///
/// For the exact solution this is `sin(theta) / M` (times a positive factor
/// for anisotropic sections), where `theta` is the accumulated phase. It
/// crosses zero upward exactly at the eigenvalues `theta = 2 pi k` and
/// downward at the spurious half-periods `theta = (2k - 1) pi`.
pub(crate) fn root_function<'a>(
    panels: &'a [Panel],
    steps: &'a [usize],
    stiffness: Stiffness,
) -> impl Fn(f64) -> f64 + 'a {
    move |m| integrate_ivp(panels, steps, stiffness, m, (1.0, 0.0)).0
}

/// First upward zero crossing of `g` in `[lo, hi]`, refined by bisection
/// until the bracket is narrower than `tol * M`.
pub(crate) fn first_eigenvalue(
    g: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
    probes: usize,
) -> Result<f64> {
    scan_eigenvalues(&g, lo, hi, tol, probes, true)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::NoRootInBracket {
            lo,
            hi,
            g_lo: g(lo),
            g_hi: g(hi),
        })
}

fn scan_eigenvalues(
    g: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
    probes: usize,
    first_only: bool,
) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
        return domain(format!("bracket ({lo}, {hi}) must satisfy 0 < lo < hi"));
    }
    if !(tol > 0.0) {
        return domain(format!("root tolerance must be positive, got {tol}"));
    }
    let probes = probes.max(2);
    let grid: Vec<f64> = (0..=probes)
        .map(|j| if j == probes { hi } else { lo + (hi - lo) * j as f64 / probes as f64 })
        .collect();
    let mut roots = Vec::new();
    let mut prev = (grid[0], g(grid[0]));
    for &m in &grid[1..] {
        let gm = g(m);
        if prev.1 < 0.0 && gm >= 0.0 {
            roots.push(bisect(g, prev.0, m, tol));
            if first_only {
                break;
            }
        }
        prev = (m, gm);
    }
    Ok(roots)
}

fn bisect(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    // invariant: g(a) < 0 <= g(b)
    for _ in 0..200 {
        if b - a <= tol * b {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if g(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Default search bracket: `(1e-3, 4) * M*` from the closed-form estimate.
pub fn default_bracket(spec: &RodSpec) -> Result<(f64, f64)> {
    let estimate = 2.0 * std::f64::consts::PI / greenhill::compliance_integral(spec)?;
    Ok((1e-3 * estimate, 4.0 * estimate))
}

/// Smallest eigenvalue in `bracket`, found by shooting.
pub fn critical_torque_oracle(
    spec: &RodSpec,
    bracket: (f64, f64),
    tol: f64,
    steps: usize,
) -> Result<f64> {
    check_shoot_args(bracket.1, steps)?;
    let panels = spec.shape.panels();
    let alloc = allocate_steps(&panels, steps);
    let g = root_function(&panels, &alloc, isotropic_stiffness(spec));
    first_eigenvalue(g, bracket.0, bracket.1, tol, BRACKET_PROBES)
}

/// Every eigenvalue found in `(lo, hi]` with `probes` coarse samples.
pub fn eigenvalues_in(
    spec: &RodSpec,
    lo: f64,
    hi: f64,
    tol: f64,
    steps: usize,
    probes: usize,
) -> Result<Vec<f64>> {
    check_shoot_args(hi, steps)?;
    let panels = spec.shape.panels();
    let alloc = allocate_steps(&panels, steps);
    let g = root_function(&panels, &alloc, isotropic_stiffness(spec));
    scan_eigenvalues(&g, lo, hi, tol, probes, false)
}

/// Value of the signed root function at `m`.
pub fn root_function_at(spec: &RodSpec, m: f64, steps: usize) -> Result<f64> {
    check_shoot_args(m, steps)?;
    let panels = spec.shape.panels();
    let alloc = allocate_steps(&panels, steps);
    let g = root_function(&panels, &alloc, isotropic_stiffness(spec));
    Ok(g(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub steps: usize,
    pub relative_error: f64,
}

/// Oracle error against the closed-form torque for each step count.
pub fn convergence_study(spec: &RodSpec, steps_list: &[usize]) -> Result<Vec<ConvergencePoint>> {
    let exact = greenhill::critical_torque(spec)?.m_crit;
    let bracket = default_bracket(spec)?;
    steps_list
        .iter()
        .map(|&steps| {
            let m = critical_torque_oracle(spec, bracket, 4.0 * f64::EPSILON, steps)?;
            Ok(ConvergencePoint {
                steps,
                relative_error: (m - exact).abs() / exact,
            })
        })
        .collect()
}
