//! Replays the checked-in fuzz seeds through the fuzz-target properties so
//! that they run on stable toolchains too.

use std::path::Path;

use rees_core::config::{parse_config, parse_json, parse_text};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_string_lossy().starts_with("seed-"))
        .map(|p| (p.display().to_string(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn text_seeds_parse_and_roundtrip() {
    for (path, text) in seeds("parse_text") {
        let c = parse_text(&text).unwrap_or_else(|e| panic!("{path}: {e}"));
        assert_eq!(parse_text(&c.emit()).unwrap(), c, "{path}");
    }
}

#[test]
fn json_seeds_parse_and_roundtrip() {
    for (path, text) in seeds("parse_json") {
        let c = parse_json(&text).unwrap_or_else(|e| panic!("{path}: {e}"));
        assert_eq!(parse_json(&c.emit_json()).unwrap(), c, "{path}");
    }
}

#[test]
fn mixed_seeds_agree_across_formats() {
    for (path, text) in seeds("parse_config") {
        let c = parse_config(&text).unwrap_or_else(|e| panic!("{path}: {e}"));
        assert_eq!(parse_config(&c.emit()).unwrap(), c, "{path}");
        assert_eq!(parse_config(&c.emit_json()).unwrap(), c, "{path}");
    }
}

#[test]
fn mangled_seeds_fail_cleanly() {
    for (_, text) in seeds("parse_config") {
        for cut in (0..text.len()).step_by(7).filter(|&k| text.is_char_boundary(k)) {
            let _ = parse_config(&text[..cut]);
        }
    }
}
