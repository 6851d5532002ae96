//! Run reports: the serializable record of a run, its canonical JSON form
//! and a plain-text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::checks::CheckReport;

/// Integers above this magnitude are written as strings so that JSON
/// readers with double-precision numbers read them exactly.
pub const MAX_SAFE_INTEGER: u64 = (1 << 53) - 1;

#[derive(Clone, Debug, Serialize)]
pub struct InstanceEcho {
    pub name: String,
    pub group: String,
    pub group_order: usize,
    pub i_size: usize,
    pub lambda_size: usize,
    /// `sandwich[λ][i]` as element names, `o` for the zero marker.
    pub sandwich: Vec<Vec<String>>,
    pub reduced_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub max_degree: usize,
    pub chain_cap: usize,
    pub stream_cap: usize,
    pub force: bool,
    /// The top degree, computed as if the next boundary vanished.
    pub truncated_degree: usize,
    pub certified_degrees: Vec<usize>,
    /// 1-based `(i, λ)` of the corner idempotent used for `Φ`.
    pub idempotent: [usize; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct ColumnReport {
    pub label: String,
    pub algebra: String,
    pub coefficients: String,
    pub chain_dims: Vec<usize>,
    pub boundary_ranks: Vec<usize>,
    pub homology: Vec<usize>,
    pub cohomology: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssertionReport {
    pub description: String,
    pub columns: Vec<String>,
    pub degrees: Vec<usize>,
    pub holds: bool,
}

/// Degree-0 values outside the asserted region, reported against `A(S)`.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeZeroNote {
    pub column: String,
    pub hh0: usize,
    pub reduced_hh0: usize,
    pub differs: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologySection {
    pub columns: Vec<ColumnReport>,
    pub assertions: Vec<AssertionReport>,
    pub degree_zero: Vec<DegreeZeroNote>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub module_dim: usize,
    pub image_dim: usize,
    pub roundtrip_dim: usize,
    pub evaluation_rank: usize,
    pub isomorphic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositionReport {
    pub position: [usize; 2],
    pub algebra_dim: usize,
    pub corner_dim: usize,
    pub p_dim: usize,
    pub q_dim: usize,
    pub pq_tensor_dim: usize,
    pub pq_rank: usize,
    pub qp_tensor_dim: usize,
    pub qp_rank: usize,
    pub corner_is_group_algebra: bool,
    pub equivalence: bool,
    pub roundtrip: RoundtripReport,
    pub reverse_roundtrip: RoundtripReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct MoritaSection {
    pub selected: [usize; 2],
    pub positions: Vec<PositionReport>,
    pub choice_independent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyReport {
    pub algebra: String,
    pub kind: String,
    pub max_degree: usize,
    pub chains_checked: Vec<usize>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub column: String,
    pub degrees: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sparse: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dense: Option<Vec<usize>>,
    /// `None` when the dense oracle declined the instance.
    pub agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub instance: InstanceEcho,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morita: Option<MoritaSection>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub homotopy: Vec<HomotopyReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub oracle: Vec<OracleReport>,
    pub failures: Vec<String>,
    pub passed: bool,
    /// Wall-clock milliseconds per stage; only present when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

fn make_safe(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            let big = n.as_u64().map_or_else(|| n.as_i64().is_some_and(|i| i.unsigned_abs() > MAX_SAFE_INTEGER), |u| u > MAX_SAFE_INTEGER);
            if big {
                Value::String(n.to_string())
            } else {
                Value::Number(n)
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(make_safe).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, make_safe(v))).collect()),
        other => other,
    }
}

/// Canonical JSON: keys sorted, two-space indentation, integers beyond
/// 53 bits as strings, trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = make_safe(serde_json::to_value(value).expect("report serializes"));
    // serde_json's default map is ordered by key
    let mut out = serde_json::to_string_pretty(&v).expect("value serializes");
    out.push('\n');
    out
}

fn row(out: &mut String, label: &str, cells: &[String], width: usize) {
    let _ = write!(out, "  {label:<16}");
    for c in cells {
        let _ = write!(out, "{c:>width$}");
    }
    out.push('\n');
}

fn dims_table(out: &mut String, title: &str, section: &HomologySection, pick: fn(&ColumnReport) -> &Vec<usize>) {
    let width = section.columns.iter().map(|c| c.label.len() + 2).max().unwrap_or(8).max(8);
    let _ = writeln!(out, "{title}");
    row(out, "n", &section.columns.iter().map(|c| c.label.clone()).collect::<Vec<_>>(), width);
    let degrees = section.columns.first().map_or(0, |c| pick(c).len());
    for n in 0..degrees {
        let cells: Vec<String> = section.columns.iter().map(|c| pick(c)[n].to_string()).collect();
        let label = if n + 1 == degrees { format!("{n} (truncated)") } else { n.to_string() };
        row(out, &label, &cells, width);
        if n == 0 {
            let _ = writeln!(out, "  {}", "-".repeat(16 + width * section.columns.len()));
        }
    }
}

/// A plain-text summary of a report.
pub fn render_text(r: &RunReport) -> String {
    let mut out = String::new();
    let i = &r.instance;
    let _ = writeln!(
        out,
        "instance {}: G = {} (order {}), |I| = {}, |Λ| = {}, dim A(S) = {}",
        i.name, i.group, i.group_order, i.i_size, i.lambda_size, i.reduced_dim
    );
    let _ = writeln!(out, "sandwich (rows λ, columns i):");
    for row in &i.sandwich {
        let _ = writeln!(out, "  {}", row.join(" "));
    }
    let p = &r.provenance;
    let _ = writeln!(
        out,
        "command {}; max degree {}; degrees {:?} certified, degree {} truncated",
        p.command, p.max_degree, p.certified_degrees, p.truncated_degree
    );
    if let Some(h) = &r.homology {
        out.push('\n');
        dims_table(&mut out, "Hochschild homology dim HH_n(A, A):", h, |c| &c.homology);
        out.push('\n');
        dims_table(&mut out, "Hochschild cohomology dim H^n(A, A*):", h, |c| &c.cohomology);
        let _ = writeln!(out, "\ndegree 0 (reported, not asserted):");
        for d in &h.degree_zero {
            let flag = if d.differs { "  <- differs from A(S)" } else { "" };
            let _ = writeln!(out, "  {:<16}{} vs {}{flag}", d.column, d.hh0, d.reduced_hh0);
        }
        let _ = writeln!(out, "\nasserted equalities:");
        for a in &h.assertions {
            let _ = writeln!(
                out,
                "  [{}] {} ({}) in degrees {:?}",
                if a.holds { "ok" } else { "FAIL" },
                a.description,
                a.columns.join(", "),
                a.degrees
            );
        }
    }
    if let Some(m) = &r.morita {
        let _ = writeln!(out, "\nMorita witnesses (selected (i, λ) = ({}, {})):", m.selected[0], m.selected[1]);
        for w in &m.positions {
            let _ = writeln!(
                out,
                "  ({}, {}): dim eAe = {}, P⊗Q {} -> rank {}, Q⊗P {} -> rank {}, equivalence {}, roundtrip {}, reverse roundtrip {}",
                w.position[0],
                w.position[1],
                w.corner_dim,
                w.pq_tensor_dim,
                w.pq_rank,
                w.qp_tensor_dim,
                w.qp_rank,
                w.equivalence,
                w.roundtrip.isomorphic,
                w.reverse_roundtrip.isomorphic
            );
        }
        let _ = writeln!(out, "  choice independent: {}", m.choice_independent);
    }
    if !r.checks.is_empty() {
        let _ = writeln!(out, "\nchecks:");
        for c in &r.checks {
            let _ = writeln!(out, "  [{}] {} on {}", if c.passed { "ok" } else { "FAIL" }, c.check_name, c.instance_name);
            for (k, v) in &c.details {
                let v = v.as_str().map_or_else(|| v.to_string(), str::to_string);
                let _ = writeln!(out, "      {k}: {v}");
            }
        }
    }
    if !r.homotopy.is_empty() {
        let _ = writeln!(out, "\ncontracting homotopies:");
        for h in &r.homotopy {
            let _ = writeln!(
                out,
                "  [{}] {} on {} up to degree {}, chains {:?}{}",
                if h.passed { "ok" } else { "FAIL" },
                h.kind,
                h.algebra,
                h.max_degree,
                h.chains_checked,
                h.first_violation.as_deref().map(|v| format!(", first violation {v}")).unwrap_or_default()
            );
        }
    }
    if !r.oracle.is_empty() {
        let _ = writeln!(out, "\ndense oracle:");
        for o in &r.oracle {
            let status = match (o.agrees, &o.skipped) {
                (Some(true), _) => "agrees".to_string(),
                (Some(false), _) => format!("DISAGREES: sparse {:?}, dense {:?}", o.sparse, o.dense),
                (None, Some(why)) => format!("skipped ({why})"),
                (None, None) => "skipped".to_string(),
            };
            let _ = writeln!(out, "  {:<16}degrees {:?}: {status}", o.column, o.degrees);
        }
    }
    if let Some(t) = &r.timings_ms {
        let _ = writeln!(out, "\ntimings (ms):");
        for (k, v) in t {
            let _ = writeln!(out, "  {k:<32}{v}");
        }
    }
    out.push('\n');
    if r.passed {
        out.push_str("all assertions passed\n");
    } else {
        for f in &r.failures {
            let _ = writeln!(out, "FAILED: {f}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn canonical_form() {
        let v = json!({"b": 1, "a": [u64::MAX, 3, -5], "c": {"z": 9007199254740993u64, "y": 9007199254740991u64}});
        let s = canonical_json(&v);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.contains("\"18446744073709551615\""));
        assert!(s.contains("\"9007199254740993\""));
        assert!(s.contains("9007199254740991\n") || s.contains("9007199254740991,"));
        assert!(s.ends_with("}\n"));
    }
}
