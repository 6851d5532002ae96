#![no_main]

use libfuzzer_sys::fuzz_target;
use rees_core::config::parse_json;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_json(text) {
        assert_eq!(parse_json(&c.emit_json()).expect("emitted JSON parses"), c);
    }
});
