use std::fs::File;
use std::io::BufWriter;

use serde::Serialize;
use serde_json::Value;
use twist_rod::anisotropic;
use twist_rod::descriptor::{parse_rod, Rod};
use twist_rod::greenhill;
use twist_rod::isoperimetric::verify_bound;
use twist_rod::oracle::{self, DEFAULT_ROOT_TOL};
use twist_rod::shape::area_profile;

use crate::{read_input, AnalyzeArgs, Failure};

#[derive(Serialize)]
struct OracleReport {
    #[serde(rename = "M_oracle")]
    m_oracle: f64,
    disagreement: f64,
    steps: usize,
}

#[derive(Serialize)]
struct AnalysisReport {
    input: Value,
    #[serde(rename = "M_star")]
    m_star: f64,
    #[serde(rename = "M_bound")]
    m_bound: f64,
    ratio: f64,
    equality_gap: f64,
    l_physical: f64,
    volume: f64,
    mode_csv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

pub(crate) fn run(args: &AnalyzeArgs) -> Result<u8, Failure> {
    let text = read_input(&args.spec)?;
    let (descriptor, rod) = parse_rod(&text)?;
    let iso = rod.isotropic()?;

    let buckling = match &rod {
        Rod::Isotropic(spec) => greenhill::critical_torque(spec)?,
        Rod::Anisotropic(a) => anisotropic::critical_torque(a)?,
    };
    let bound = verify_bound(&iso)?;
    let volume = area_profile(&iso)?.volume();

    let oracle = if args.oracle {
        let bracket = oracle::default_bracket(&iso)?;
        let m = match &rod {
            Rod::Isotropic(spec) => oracle::critical_torque_oracle(spec, bracket, DEFAULT_ROOT_TOL, args.steps)?,
            Rod::Anisotropic(a) => {
                anisotropic::critical_torque_oracle_anisotropic(a, bracket, DEFAULT_ROOT_TOL, args.steps)?
            }
        };
        Some(OracleReport {
            m_oracle: m,
            disagreement: (m - buckling.m_crit).abs() / buckling.m_crit,
            steps: args.steps,
        })
    } else {
        None
    };

    if let Some(path) = &args.out {
        let file = File::create(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        buckling
            .mode
            .write_csv(BufWriter::new(file))
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    }

    let report = AnalysisReport {
        input: serde_json::to_value(&descriptor).expect("descriptor serializes"),
        m_star: buckling.m_crit,
        m_bound: bound.m_bound,
        ratio: bound.ratio,
        equality_gap: bound.equality_gap,
        l_physical: buckling.physical_length,
        volume,
        mode_csv: args.out.as_ref().map(|p| p.display().to_string()),
        oracle,
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(0)
}
