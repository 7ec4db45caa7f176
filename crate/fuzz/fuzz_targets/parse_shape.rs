#![no_main]

use libfuzzer_sys::fuzz_target;
use twist_rod::descriptor::ShapeDescriptor;
use twist_rod::transform::{physical_length, CoordinateMap};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(shape) = ShapeDescriptor::parse(text).and_then(|d| d.to_shape()) else {
        return;
    };
    let _ = physical_length(&shape);
    let map = CoordinateMap::new(&shape);
    for t in [0.0, 0.25, 0.5, 1.0] {
        if let Ok(x) = map.xi_to_x(t * shape.length()) {
            let _ = map.x_to_xi(x);
        }
    }
});
