//! Maximizing the critical torque over area distributions of fixed volume.
//!
//! The design variable is a piecewise-constant area on equal-length
//! segments. The volume constraint is linear in the areas, so after every
//! ascent step the iterate is rescaled multiplicatively back onto it.

use std::f64::consts::PI;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::json;

use crate::error::{domain, Error, Result};
use crate::shape::{AreaProfile, CrossSectionLaw};

/// Relative volume mismatch accepted for an initial design.
pub const VOLUME_TOL: f64 = 1e-10;
/// `lagrange_gap` below which a run counts as converged.
pub const CONVERGED_GAP: f64 = 1e-3;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITERS: usize = 10_000;

const MAX_HALVINGS: usize = 60;

/// `M*[A] = 2 pi E alpha_n / integral A^-n`.
pub fn objective(area: &AreaProfile, e: f64, law: CrossSectionLaw) -> Result<f64> {
    if !(e.is_finite() && e > 0.0) {
        return domain(format!("E must be positive, got {e}"));
    }
    Ok(2.0 * PI * e * law.alpha() / area.inverse_power_integral(law.n())?)
}

/// `sup |A - V/L| / (V/L)`.
pub fn lagrange_gap(area: &AreaProfile) -> f64 {
    area.equality_gap()
}

/// Fixed-volume torque maximization over `segments` equal panels.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationProblem {
    v_target: f64,
    length: f64,
    law: CrossSectionLaw,
    e: f64,
    init: Vec<f64>,
}

impl OptimizationProblem {
    /// `init` must be piecewise constant on equal-length segments (or
    /// constant) and carry the target volume.
    pub fn new(
        v_target: f64,
        length: f64,
        law: CrossSectionLaw,
        e: f64,
        init: &AreaProfile,
    ) -> Result<Self> {
        for (name, v) in [("V", v_target), ("L", length), ("E", e)] {
            if !(v.is_finite() && v > 0.0) {
                return domain(format!("{name} must be positive, got {v}"));
            }
        }
        if !init.is_piecewise_constant() {
            return domain("initial design must be piecewise constant");
        }
        if (init.length() - length).abs() > 1e-12 * length {
            return domain(format!("initial design spans {}, expected {length}", init.length()));
        }
        let areas = init.node_areas();
        let k = areas.len();
        let uniform = init
            .breakpoints()
            .iter()
            .enumerate()
            .all(|(i, b)| (b - length * i as f64 / k as f64).abs() <= 1e-12 * length);
        if !uniform {
            return domain("initial design segments must have equal length");
        }
        if (init.volume() - v_target).abs() > VOLUME_TOL * v_target {
            return domain(format!(
                "initial volume {} differs from target {v_target}",
                init.volume()
            ));
        }
        Ok(Self {
            v_target,
            length,
            law,
            e,
            init: areas,
        })
    }

    /// Equal segments with the given areas; the target volume is theirs.
    pub fn from_segments(length: f64, law: CrossSectionLaw, e: f64, areas: Vec<f64>) -> Result<Self> {
        let init = AreaProfile::from_segments(length, areas)?;
        Self::new(init.volume(), length, law, e, &init)
    }

    pub fn segments(&self) -> usize {
        self.init.len()
    }

    pub fn v_target(&self) -> f64 {
        self.v_target
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn law(&self) -> CrossSectionLaw {
        self.law
    }

    pub fn modulus(&self) -> f64 {
        self.e
    }

    pub fn init(&self) -> Result<AreaProfile> {
        AreaProfile::from_segments(self.length, self.init.clone())
    }

    fn width(&self) -> f64 {
        self.length / self.segments() as f64
    }

    fn torque(&self, areas: &[f64]) -> f64 {
        let n = self.law.n() as i32;
        let compliance: f64 = areas.iter().map(|a| a.powi(-n)).sum::<f64>() * self.width();
        2.0 * PI * self.e * self.law.alpha() / compliance
    }

    fn volume(&self, areas: &[f64]) -> f64 {
        areas.iter().sum::<f64>() * self.width()
    }

    fn gap(&self, areas: &[f64]) -> f64 {
        let mean = self.v_target / self.length;
        areas.iter().map(|a| (a - mean).abs() / mean).fold(0.0, f64::max)
    }

    fn iterate(&self, iteration: usize, areas: Vec<f64>) -> Iterate {
        Iterate {
            iteration,
            m_star: self.torque(&areas),
            gap: self.gap(&areas),
            volume_residual: (self.volume(&areas) - self.v_target) / self.v_target,
            areas,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Iterate {
    pub iteration: usize,
    pub areas: Vec<f64>,
    #[serde(rename = "M_star")]
    pub m_star: f64,
    pub gap: f64,
    pub volume_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The initial design already has constant area.
    FixedPoint,
    /// Relative objective improvement fell below the tolerance.
    Tolerance,
    /// No non-decreasing step above roundoff could be found.
    Stagnated,
    MaxIters,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationTrace {
    pub iterates: Vec<Iterate>,
    pub converged: bool,
    pub final_gap: f64,
    pub stop: StopReason,
}

impl OptimizationTrace {
    pub fn last(&self) -> &Iterate {
        self.iterates.last().expect("trace holds the initial iterate")
    }

    /// Final design as an area profile.
    pub fn final_profile(&self, length: f64) -> Result<AreaProfile> {
        AreaProfile::from_segments(length, self.last().areas.clone())
    }

    /// One JSON object per iterate, then a summary line that also echoes
    /// `input` when given.
    pub fn write_json_lines<W: Write>(&self, mut out: W, input: Option<&serde_json::Value>) -> io::Result<()> {
        for it in &self.iterates {
            let line = json!({
                "iteration": it.iteration,
                "M_star": it.m_star,
                "gap": it.gap,
                "volume_residual": it.volume_residual,
            });
            writeln!(out, "{line}")?;
        }
        let last = self.last();
        let mut summary = json!({
            "converged": self.converged,
            "lagrange_gap": self.final_gap,
            "iterations": last.iteration,
            "M_star": last.m_star,
            "stop": self.stop,
            "areas": last.areas,
        });
        if let Some(input) = input {
            summary["input"] = input.clone();
        }
        writeln!(out, "{summary}")
    }
}

/// Projected gradient ascent with multiplicative volume projection.
pub fn optimize(problem: &OptimizationProblem, max_iters: usize, tol: f64) -> Result<OptimizationTrace> {
    if !(tol >= 0.0) {
        return domain(format!("tolerance must be nonnegative, got {tol}"));
    }
    let n = problem.law.n() as i32;
    let mean = problem.v_target / problem.length;
    let project = |areas: &mut Vec<f64>| {
        let s = problem.v_target / problem.volume(areas);
        areas.iter_mut().for_each(|a| *a *= s);
    };

    let mut areas = problem.init.clone();
    let mut current = problem.iterate(0, areas.clone());
    let mut iterates = vec![current.clone()];
    let finish = |iterates: Vec<Iterate>, stop| {
        let final_gap = iterates.last().map_or(f64::INFINITY, |it: &Iterate| it.gap);
        Ok(OptimizationTrace {
            iterates,
            converged: final_gap <= CONVERGED_GAP,
            final_gap,
            stop,
        })
    };
    if current.gap == 0.0 {
        return finish(iterates, StopReason::FixedPoint);
    }

    for iteration in 1..=max_iters {
        let grad: Vec<f64> = areas.iter().map(|a| n as f64 * a.powi(-n - 1)).collect();
        let gmax = grad.iter().copied().fold(0.0, f64::max);
        let mut step = 0.1 * mean / gmax;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let mut cand: Vec<f64> = areas.iter().zip(&grad).map(|(a, g)| a + step * g).collect();
            if cand.iter().all(|a| *a > 0.0 && a.is_finite()) {
                project(&mut cand);
                if cand.iter().all(|a| *a > 0.0) && problem.torque(&cand) >= current.m_star {
                    accepted = Some(cand);
                    break;
                }
            }
            step *= 0.5;
        }
        let Some(next) = accepted else {
            if current.gap <= CONVERGED_GAP {
                return finish(iterates, StopReason::Stagnated);
            }
            return Err(Error::StepUnderflow { iteration, step });
        };
        let it = problem.iterate(iteration, next.clone());
        let improvement = (it.m_star - current.m_star) / current.m_star;
        areas = next;
        current = it.clone();
        iterates.push(it);
        if improvement < tol {
            return finish(iterates, StopReason::Tolerance);
        }
    }
    finish(iterates, StopReason::MaxIters)
}

/// Exhaustive search over equal-panel area splits `V * j_i / (G - 1)` with
/// `sum j_i = G - 1`, `j_i >= 1`. Ties go to the lexicographically smallest
/// split. `grid_points = 1` yields the uniform split.
pub fn brute_force_segments(
    volume: f64,
    length: f64,
    law: CrossSectionLaw,
    e: f64,
    k_segments: usize,
    grid_points: usize,
) -> Result<AreaProfile> {
    if !(2..=3).contains(&k_segments) {
        return domain(format!("brute force supports 2 or 3 segments, got {k_segments}"));
    }
    if grid_points == 0 || grid_points > 200 {
        return domain(format!("grid points must be in 1..=200, got {grid_points}"));
    }
    for (name, v) in [("V", volume), ("L", length), ("E", e)] {
        if !(v.is_finite() && v > 0.0) {
            return domain(format!("{name} must be positive, got {v}"));
        }
    }
    let width = length / k_segments as f64;
    let to_areas = |fractions: &[f64]| -> Vec<f64> {
        fractions.iter().map(|s| s * volume / width).collect()
    };
    if grid_points == 1 {
        return AreaProfile::from_segments(length, to_areas(&vec![1.0 / k_segments as f64; k_segments]));
    }

    let steps = grid_points - 1;
    let n = law.n() as i32;
    let score = |areas: &[f64]| -> f64 {
        2.0 * PI * e * law.alpha() / (areas.iter().map(|a| a.powi(-n)).sum::<f64>() * width)
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut consider = |split: &[usize]| {
        let fractions: Vec<f64> = split.iter().map(|j| *j as f64 / steps as f64).collect();
        let areas = to_areas(&fractions);
        let m = score(&areas);
        if best.as_ref().map_or(true, |(b, _)| m > b * (1.0 + 1e-14)) {
            best = Some((m, areas));
        }
    };
    match k_segments {
        2 => (1..steps).for_each(|j| consider(&[j, steps - j])),
        _ => {
            for j1 in 1..steps {
                for j2 in 1..steps - j1 {
                    consider(&[j1, j2, steps - j1 - j2]);
                }
            }
        }
    }
    match best {
        Some((_, areas)) => AreaProfile::from_segments(length, areas),
        None => domain(format!("{grid_points} grid points admit no split with positive areas")),
    }
}
