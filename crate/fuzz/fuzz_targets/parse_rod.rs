#![no_main]

use libfuzzer_sys::fuzz_target;
use twist_rod::descriptor::{parse_rod, Rod};
use twist_rod::{anisotropic, greenhill, isoperimetric};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok((_, rod)) = parse_rod(text) else {
        return;
    };
    // accepted descriptors must analyze to a value or an error, never a panic
    match &rod {
        Rod::Isotropic(spec) => {
            let _ = greenhill::critical_torque(spec);
            let _ = isoperimetric::verify_bound(spec);
        }
        Rod::Anisotropic(r) => {
            let _ = anisotropic::critical_torque(r);
        }
    }
});
