#![no_main]

use libfuzzer_sys::fuzz_target;
use twist_rod::descriptor::ProblemDescriptor;
use twist_rod::optimizer;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(problem) = ProblemDescriptor::parse(text).and_then(|d| d.to_problem()) else {
        return;
    };
    if problem.segments() <= 64 {
        let _ = optimizer::optimize(&problem, 50, optimizer::DEFAULT_TOL);
    }
});
