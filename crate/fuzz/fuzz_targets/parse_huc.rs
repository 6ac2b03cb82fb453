#![no_main]

use borwin::io::{huc_to_json, parse_huc};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = parse_huc(text) {
        assert_eq!(parse_huc(&huc_to_json(&inst)).expect("emitted JSON parses"), inst);
    }
});
