#![no_main]

use borwin::io::{dag_to_json, parse_dag};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // anything accepted must survive a write/read cycle unchanged
    if let Ok(dag) = parse_dag(text) {
        let out = dag_to_json(&dag);
        let back = parse_dag(&out).expect("emitted JSON parses");
        assert_eq!(dag_to_json(&back), out);
    }
});
