#![no_main]

use libfuzzer_sys::fuzz_target;
use tworay::{PatternCut, RadiationPattern};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Must never panic; accepted patterns must satisfy their invariants.
    if let Ok(pattern) = RadiationPattern::parse_csv(text, PatternCut::Elevation, "fuzz") {
        assert!(pattern.samples().len() >= 4);
        assert!(pattern.peak_gain_dbi().is_finite());
        for probe in [0.0, 123.456, 359.999, -90.0, 720.5] {
            assert!(pattern.gain_dbi_at(probe).is_finite());
        }
        assert_eq!(pattern.gain_dbi_at(0.0), pattern.gain_dbi_at(360.0));
    }
});
