#![no_main]

use libfuzzer_sys::fuzz_target;
use tworay::budget::parse_waypoints_csv;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(waypoints) = parse_waypoints_csv(text) {
        for wp in &waypoints {
            assert!(wp.x_m.is_finite() && wp.y_m.is_finite() && wp.z_m.is_finite());
        }
    }
});
