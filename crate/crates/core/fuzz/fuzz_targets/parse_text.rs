#![no_main]

use libfuzzer_sys::fuzz_target;
use rees_core::config::parse_text;

// Accepted configs must survive a round trip through the emitter.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_text(text) {
        assert_eq!(parse_text(&c.emit()).expect("emitted text parses"), c);
    }
});
