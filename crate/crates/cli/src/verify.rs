//! Seeded cross-validation suites.
//!
//! Case `i` of every suite draws its data from `Lcg64::new(seed + i)`, so a
//! failing case can be replayed from the reported seed alone.

use std::thread;

use serde::Serialize;
use twist_rod::anisotropic::{self, AnisotropicRod, AnisotropicSection};
use twist_rod::greenhill;
use twist_rod::isoperimetric::{upper_bound, upper_bound_root_form};
use twist_rod::oracle::{self, DEFAULT_ROOT_TOL};
use twist_rod::sampling::{random_piecewise, Lcg64};
use twist_rod::shape::{area_profile, CrossSectionLaw, RodSpec, ShapeFunction};

use crate::{Failure, VerifyArgs, EXIT_VERIFY};

const ORACLE_TOL: f64 = 1e-6;
const RATIO_SLACK: f64 = 1e-10;
const EQUALITY_TOL: f64 = 1e-10;
const REDUCTION_TOL: f64 = 1e-6;

#[derive(Serialize)]
struct Violation {
    case: usize,
    seed: u64,
    detail: String,
}

#[derive(Serialize)]
struct SuiteReport {
    name: &'static str,
    cases: usize,
    max_disagreement: f64,
    tolerance: f64,
    passed: bool,
    violations: Vec<Violation>,
}

#[derive(Serialize)]
struct Summary {
    seed: u64,
    n: usize,
    steps: usize,
    inject_wrong_exponent: bool,
    suites: Vec<SuiteReport>,
    passed: bool,
}

/// Outcome of one case: the measured disagreement, or a failure description.
type CaseResult = Result<f64, String>;

fn run_suite(
    name: &'static str,
    tolerance: f64,
    seed: u64,
    n: usize,
    case: impl Fn(&mut Lcg64, usize) -> CaseResult + Sync,
) -> SuiteReport {
    let workers = thread::available_parallelism().map_or(1, |p| p.get()).min(n.max(1));
    let mut results: Vec<(usize, CaseResult)> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let case = &case;
                s.spawn(move || {
                    (w..n)
                        .step_by(workers)
                        .map(|i| (i, case(&mut Lcg64::new(seed.wrapping_add(i as u64)), i)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("suite worker panicked")).collect()
    });
    results.sort_by_key(|(i, _)| *i);

    let mut max_disagreement: f64 = 0.0;
    let mut violations = Vec::new();
    for (i, r) in results {
        let case_seed = seed.wrapping_add(i as u64);
        match r {
            Ok(d) if d <= tolerance => max_disagreement = max_disagreement.max(d),
            Ok(d) => {
                max_disagreement = max_disagreement.max(d);
                violations.push(Violation {
                    case: i,
                    seed: case_seed,
                    detail: format!("disagreement {d:e} exceeds {tolerance:e}"),
                });
            }
            Err(detail) => violations.push(Violation {
                case: i,
                seed: case_seed,
                detail,
            }),
        }
    }
    SuiteReport {
        name,
        cases: n,
        max_disagreement,
        tolerance,
        passed: violations.is_empty(),
        violations,
    }
}

fn unit_rod(shape: ShapeFunction) -> RodSpec {
    RodSpec::new(1.0, 1.0, shape, CrossSectionLaw::new(1, 1.0).expect("valid law")).expect("valid rod")
}

/// Closed-form torque against the panel-aligned shooting oracle.
fn functional_vs_oracle(rng: &mut Lcg64, steps: usize) -> CaseResult {
    let spec = unit_rod(random_piecewise(rng, 1.0));
    let exact = greenhill::critical_torque(&spec).map_err(|e| e.to_string())?.m_crit;
    let bracket = oracle::default_bracket(&spec).map_err(|e| e.to_string())?;
    let m = oracle::critical_torque_oracle(&spec, bracket, DEFAULT_ROOT_TOL, steps).map_err(|e| e.to_string())?;
    Ok((m - exact).abs() / exact)
}

/// `M* <= M**` on a random rod and `M* = M**` on the uniform rod of equal volume.
/// The reported disagreement is the larger of the bound excess and the
/// equality-case mismatch.
fn isoperimetric_case(rng: &mut Lcg64, case: usize, wrong_exponent: bool) -> CaseResult {
    let n = (case % 3 + 1) as u8;
    let law = CrossSectionLaw::new(n, rng.log_uniform(0.05, 2.0)).map_err(|e| e.to_string())?;
    let e = rng.log_uniform(0.1, 10.0);
    let j_ref = rng.log_uniform(0.1, 10.0);
    let shape = random_piecewise(rng, 1.0).stretched(rng.log_uniform(0.5, 2.0)).map_err(|e| e.to_string())?;
    let bound = |v: f64, l: f64| {
        if wrong_exponent {
            upper_bound_root_form(e, law, v, l)
        } else {
            upper_bound(e, law, v, l)
        }
    };
    let mut worst: f64 = 0.0;
    let uniform = ShapeFunction::constant(1.0, shape.length()).map_err(|e| e.to_string())?;
    for (s, is_uniform) in [(shape, false), (uniform, true)] {
        let spec = RodSpec::new(e, j_ref, s, law).map_err(|e| e.to_string())?;
        let m = greenhill::critical_torque(&spec).map_err(|e| e.to_string())?.m_crit;
        let area = area_profile(&spec).map_err(|e| e.to_string())?;
        let ratio = m / bound(area.volume(), area.length()).map_err(|e| e.to_string())?;
        let excess = if is_uniform {
            (ratio - 1.0).abs() / EQUALITY_TOL * RATIO_SLACK
        } else {
            (ratio - 1.0).max(0.0)
        };
        worst = worst.max(excess);
    }
    Ok(worst)
}

/// First root of the anisotropic shooting problem against the reduced closed form.
fn anisotropic_case(rng: &mut Lcg64, steps: usize) -> CaseResult {
    let section = AnisotropicSection::new(rng.log_uniform(0.1, 10.0), rng.log_uniform(0.1, 10.0))
        .map_err(|e| e.to_string())?;
    let rod = AnisotropicRod::new(1.0, section, random_piecewise(rng, 1.0), CrossSectionLaw::new(1, 1.0).expect("valid"))
        .map_err(|e| e.to_string())?;
    let iso = anisotropic::reduce_to_isotropic(&rod).map_err(|e| e.to_string())?;
    let exact = greenhill::critical_torque(&iso).map_err(|e| e.to_string())?.m_crit;
    let bracket = oracle::default_bracket(&iso).map_err(|e| e.to_string())?;
    let m = anisotropic::critical_torque_oracle_anisotropic(&rod, bracket, DEFAULT_ROOT_TOL, steps)
        .map_err(|e| e.to_string())?;
    Ok((m - exact).abs() / exact)
}

pub(crate) fn run(args: &VerifyArgs) -> Result<u8, Failure> {
    if args.steps < 16 {
        return Err(Failure::input(format!("--steps must be at least 16, got {}", args.steps)));
    }
    let steps = args.steps;
    let suites = vec![
        run_suite("functional_vs_oracle", ORACLE_TOL, args.seed, args.n, |rng, _| {
            functional_vs_oracle(rng, steps)
        }),
        run_suite("isoperimetric_bound", RATIO_SLACK, args.seed, args.n, |rng, i| {
            isoperimetric_case(rng, i, args.inject_wrong_exponent)
        }),
        run_suite("anisotropic_reduction", REDUCTION_TOL, args.seed, args.n, |rng, _| {
            anisotropic_case(rng, steps)
        }),
    ];
    let passed = suites.iter().all(|s| s.passed);
    let summary = Summary {
        seed: args.seed,
        n: args.n,
        steps,
        inject_wrong_exponent: args.inject_wrong_exponent,
        suites,
        passed,
    };
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    Ok(if passed { 0 } else { EXIT_VERIFY })
}
