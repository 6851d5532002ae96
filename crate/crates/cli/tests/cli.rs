use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn rees(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rees")).args(args).output().expect("binary runs")
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn write_config(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn hh_on_cyclic_group_reports_three_classes() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("out.json");
    let out = rees(&["hh", &config("group-with-zero.rees"), "--json", json.to_str().unwrap(), "-q"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    let cols = v["homology"]["columns"].as_array().unwrap();
    let a = cols.iter().find(|c| c["label"] == "A(S)").unwrap();
    let h: Vec<u64> = a["homology"].as_array().unwrap()[..3].iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(h, [3, 0, 0]);
}

#[test]
fn text_report_marks_truncation() {
    let out = rees(&["hh", &config("matrix-units-2.rees")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(truncated)"), "{text}");
}

#[test]
fn json_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let path = dir.path().join(format!("t{threads}.json"));
        let out = rees(&[
            "all",
            &config("c2-sparse-sandwich.rees"),
            "--threads",
            threads,
            "--json",
            path.to_str().unwrap(),
            "-q",
        ]);
        assert_eq!(out.status.code(), Some(0));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn explicit_idempotent_matches_default_outcome() {
    let default = rees(&["morita", &config("matrix-units-2.rees"), "-q"]);
    let explicit = rees(&["morita", &config("matrix-units-2.rees"), "--idempotent", "2,2", "-q"]);
    assert_eq!(default.status.code(), Some(0));
    assert_eq!(explicit.status.code(), Some(0));
    // p_{12} = o in the matrix-units sandwich, so (1, 2) has no idempotent
    let bad = rees(&["morita", &config("matrix-units-2.rees"), "--idempotent", "1,2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(&dir, "bad.rees", "name = bad\ngroup = cyclic 2\ni_size = 1\nlambda_size = 1\nsandwich:\nz\nend\n");
    let out = rees(&["hh", &p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("6:1"), "{}", String::from_utf8_lossy(&out.stderr));

    let out = rees(&["hh", &dir.path().join("missing.rees").to_string_lossy()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversize_instances_hit_the_guard() {
    let dir = tempfile::tempdir().unwrap();
    let row = vec!["e"; 40].join(" ");
    let text = format!(
        "name = big\ngroup = cyclic 64\ni_size = 40\nlambda_size = 2\nsandwich:\n{row}\n{row}\nend\n"
    );
    let p = write_config(&dir, "big.rees", &text);
    assert_eq!(rees(&["hh", &p]).status.code(), Some(3));

    let capped = format!("{}chain_cap = 10\n", std::fs::read_to_string(configs().join("group-with-zero.rees")).unwrap());
    let p = write_config(&dir, "capped.rees", &capped);
    assert_eq!(rees(&["hh", &p]).status.code(), Some(3));
    assert_eq!(rees(&["hh", &p, "--force", "-q"]).status.code(), Some(0));
}
