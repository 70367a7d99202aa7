#![no_main]

use libfuzzer_sys::fuzz_target;
use tworay::parse_measurements_csv;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(set) = parse_measurements_csv(text) {
        // Distances strictly increasing, everything finite.
        for pair in set.samples.windows(2) {
            assert!(pair[1].distance_m > pair[0].distance_m);
        }
        for s in &set.samples {
            assert!(s.distance_m.is_finite() && s.distance_m > 0.0);
            assert!(s.rss_dbm.is_finite());
        }
    }
});
