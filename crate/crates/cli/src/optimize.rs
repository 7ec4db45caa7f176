use std::io::{self, Write};

use twist_rod::descriptor::ProblemDescriptor;
use twist_rod::optimizer::optimize;

use crate::{read_input, Failure, OptimizeArgs, EXIT_NOT_CONVERGED};

pub(crate) fn run(args: &OptimizeArgs) -> Result<u8, Failure> {
    let text = read_input(&args.spec)?;
    let mut descriptor = ProblemDescriptor::parse(&text)?;
    if let Some(k) = args.segments {
        descriptor.segments = Some(k);
        descriptor.init = None;
    }
    if let Some(seed) = args.seed {
        descriptor.seed = Some(seed);
    }
    let problem = descriptor.to_problem()?;
    let trace = optimize(&problem, args.max_iters, args.tol)?;

    let input = serde_json::json!({
        "problem": descriptor,
        "max_iters": args.max_iters,
        "tol": args.tol,
    });
    let stdout = io::stdout();
    let mut out = stdout.lock();
    trace
        .write_json_lines(&mut out, Some(&input))
        .and_then(|_| out.flush())
        .map_err(|e| Failure::numeric(format!("writing trace: {e}")))?;
    Ok(if trace.converged { 0 } else { EXIT_NOT_CONVERGED })
}
