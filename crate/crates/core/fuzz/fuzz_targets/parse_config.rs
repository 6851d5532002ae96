#![no_main]

use libfuzzer_sys::fuzz_target;
use rees_core::config::parse_config;

// Both emitters must produce input the format sniffer routes correctly.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_config(text) {
        assert_eq!(parse_config(&c.emit()).expect("text form"), c);
        assert_eq!(parse_config(&c.emit_json()).expect("JSON form"), c);
    }
});
