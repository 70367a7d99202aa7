#![no_main]

use libfuzzer_sys::fuzz_target;
use tworay::ConfigDoc;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = ConfigDoc::from_json_str(text) {
        // Validation must be total (no filesystem access happens here).
        let _ = doc.validate();
        // Serialization round-trips the parsed document exactly.
        let json = doc.to_json_string();
        let again = ConfigDoc::from_json_str(&json).expect("serialized config reparses");
        assert_eq!(doc, again);
    }
});
