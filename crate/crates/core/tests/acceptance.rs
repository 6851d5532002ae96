//! Acceptance suite over the bundled instances. Runs as a plain binary so
//! that every criterion prints one PASS/FAIL line; exits nonzero on any
//! failure.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rees_core::algebra::{group_algebra, matrix_algebra};
use rees_core::bimodule::regular_bimodule;
use rees_core::config::{parse_config, InstanceConfig};
use rees_core::driver::{run, Command, RunOptions};
use rees_core::hochschild::{hochschild_complex, DEFAULT_CHAIN_CAP};
use rees_core::oracle::dense_regular_homology;
use rees_core::report::{canonical_json, PositionReport, RunReport};

const BUNDLED: [(&str, &str); 8] = [
    ("group-with-zero", include_str!("../../../configs/group-with-zero.rees")),
    ("matrix-units-2", include_str!("../../../configs/matrix-units-2.rees")),
    ("matrix-units-3", include_str!("../../../configs/matrix-units-3.rees")),
    ("rectangular-band", include_str!("../../../configs/rectangular-band.rees")),
    ("c2-sparse-sandwich", include_str!("../../../configs/c2-sparse-sandwich.rees")),
    ("c3-sparse-sandwich", include_str!("../../../configs/c3-sparse-sandwich.rees")),
    ("s3-sandwich", include_str!("../../../configs/s3-sandwich.rees")),
    ("groupoid-derived", include_str!("../../../configs/groupoid-derived.rees")),
];

/// Largest `dim A(S)` the dense oracle comparison must cover.
const ORACLE_DIM: usize = 9;

struct Instance {
    config: InstanceConfig,
    report: RunReport,
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn column<'a>(r: &'a RunReport, label: &str) -> &'a rees_core::report::ColumnReport {
    r.homology.as_ref().expect("homology section").columns.iter().find(|c| c.label == label).expect("column")
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool").install(f)
}

fn matrix_units(all: &[Instance]) -> Outcome {
    let mut notes = Vec::new();
    for (name, n, limit) in [("matrix-units-2", 2, 5), ("matrix-units-3", 3, 120)] {
        let inst = all.iter().find(|i| i.config.name == name).expect("bundled");
        let s = inst.config.semigroup().map_err(|e| e.to_string())?;
        ensure(s.reduced_algebra().same_structure(&matrix_algebra(n)), || {
            format!("{name}: A(S) differs from M_{n}")
        })?;
        let start = Instant::now();
        let r = in_pool(1, || run(Command::Hh, &inst.config, &RunOptions::default())).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let a = &column(&r, "A(S)").homology[..3];
        let g = &column(&r, "Q[G]").homology[..3];
        ensure(a == [1, 0, 0] && g == [1, 0, 0], || format!("{name}: HH(A(S)) = {a:?}, HH(Q[G]) = {g:?}"))?;
        ensure(elapsed < Duration::from_secs(limit), || format!("{name}: took {elapsed:?}, limit {limit} s"))?;
        notes.push(format!("n={n} in {} ms", elapsed.as_millis()));
    }
    Ok(notes.join(", "))
}

fn group_algebra_table(all: &[Instance]) -> Outcome {
    let literal = |order: usize| match order {
        1 => vec![1, 0, 0],
        2 => vec![2, 0, 0],
        3 => vec![3, 0, 0],
        6 => vec![3, 0, 0],
        _ => unreachable!("no bundled instance has this order"),
    };
    for inst in all {
        let s = inst.config.semigroup().map_err(|e| e.to_string())?;
        let oracle = dense_regular_homology(&group_algebra(s.group()), 3).map_err(|e| e.to_string())?;
        let expected = &oracle[..3];
        ensure(expected == literal(s.group().order()), || format!("oracle gives {expected:?} for Q[G]"))?;
        let a = &column(&inst.report, "A(S)").homology[..3];
        let g = &column(&inst.report, "Q[G]").homology[..3];
        ensure(a == expected && g == expected, || {
            format!("{}: A(S) {a:?}, Q[G] {g:?}, expected {expected:?}", inst.config.name)
        })?;
    }
    Ok(format!("{} instances", all.len()))
}

fn reduced_vs_full(all: &[Instance]) -> Outcome {
    let mut zero = Vec::new();
    for inst in all {
        let r = &inst.report;
        let (a, l) = (column(r, "A(S)"), column(r, "l1(S)"));
        ensure(a.homology[1..3] == l.homology[1..3], || {
            format!("{}: A(S) {:?} vs l1(S) {:?}", inst.config.name, a.homology, l.homology)
        })?;
        let note = r.homology.as_ref().unwrap().degree_zero.iter().find(|d| d.column == "l1(S)").expect("note");
        ensure(note.differs == (note.hh0 != note.reduced_hh0), || "degree-0 flag is wrong".into())?;
        zero.push(format!("{} {}v{}", inst.config.name, note.hh0, note.reduced_hh0));
    }
    let mu = all.iter().find(|i| i.config.name == "matrix-units-2").unwrap();
    let note = mu.report.homology.as_ref().unwrap().degree_zero.iter().find(|d| d.column == "l1(S)").unwrap();
    ensure(note.hh0 == 2 && note.reduced_hh0 == 1 && note.differs, || {
        format!("matrix units degree 0: {} vs {}", note.hh0, note.reduced_hh0)
    })?;
    Ok(format!("degree 0 (l1 v A): {}", zero.join(", ")))
}

fn unitizations(all: &[Instance]) -> Outcome {
    for inst in all {
        let r = &inst.report;
        for (u, base) in [("A(S)#", "A(S)"), ("l1(S)#", "l1(S)")] {
            let (x, y) = (&column(r, u).homology, &column(r, base).homology);
            ensure(x[1..3] == y[1..3], || format!("{}: {u} {x:?} vs {base} {y:?}", inst.config.name))?;
        }
    }
    Ok("degrees 1, 2".into())
}

fn morita(all: &[Instance]) -> Outcome {
    let mut total = 0;
    for inst in all {
        let m = inst.report.morita.as_ref().expect("morita section");
        let s = inst.config.semigroup().map_err(|e| e.to_string())?;
        ensure(m.positions.len() == s.valid_positions().len(), || "not every position was checked".into())?;
        for p in &m.positions {
            ensure(
                p.corner_is_group_algebra
                    && p.equivalence
                    && p.roundtrip.isomorphic
                    && p.reverse_roundtrip.isomorphic
                    && p.pq_rank == p.pq_tensor_dim
                    && p.qp_rank == p.qp_tensor_dim
                    && p.corner_dim == s.group().order(),
                || format!("{} at {:?}: {p:?}", inst.config.name, p.position),
            )?;
        }
        let strip = |p: &PositionReport| PositionReport { position: [0, 0], ..p.clone() };
        ensure(m.choice_independent && m.positions.windows(2).all(|w| strip(&w[0]) == strip(&w[1])), || {
            format!("{}: witness data depend on the position", inst.config.name)
        })?;
        total += m.positions.len();
    }
    Ok(format!("{total} positions"))
}

fn homotopies(all: &[Instance]) -> Outcome {
    for inst in all {
        let h = &inst.report.homotopy;
        ensure(h.len() == 4, || "expected bar and h-unital on A(S) and l1(S)".into())?;
        for c in h {
            ensure(c.passed && c.max_degree >= 4, || format!("{}: {c:?}", inst.config.name))?;
        }
    }
    // complexes are only constructed after d∘d = 0 is verified; check it once more explicitly
    let a = Arc::new(all[4].config.semigroup().unwrap().reduced_algebra());
    let c = hochschild_complex(&a, &regular_bimodule(&a), 3, DEFAULT_CHAIN_CAP).map_err(|e| e.to_string())?;
    c.verify_d_squared().map_err(|e| e.to_string())?;
    Ok("degree 4, d∘d = 0".into())
}

fn check_named<'a>(r: &'a RunReport, name: &str) -> &'a rees_core::checks::CheckReport {
    r.checks.iter().find(|c| c.check_name == name).expect("check present")
}

fn biprojectivity(all: &[Instance]) -> Outcome {
    let mut controls = 0;
    for inst in all {
        let c = check_named(&inst.report, "biprojectivity");
        ensure(c.passed, || format!("{}: {:?}", inst.config.name, c.details))?;
        if c.details.get("negative_control_rejected").and_then(|v| v.as_str()) == Some("ok") {
            controls += 1;
        }
    }
    ensure(controls > 0, || "negative control never applicable".into())?;
    Ok(format!("negative control rejected on {controls} instances"))
}

fn weak_amenability(all: &[Instance]) -> Outcome {
    let mut direct = 0;
    for inst in all {
        let c = check_named(&inst.report, "weak_amenability");
        ensure(c.passed, || format!("{}: {:?}", inst.config.name, c.details))?;
        for label in ["A(S)", "l1(S)", "A(S)#", "l1(S)#"] {
            ensure(c.details.get(&format!("{label}.H^1")).and_then(|v| v.as_u64()) == Some(0), || {
                format!("{}: {label}", inst.config.name)
            })?;
            if c.details.contains_key(&format!("{label}.H^1_direct")) {
                direct += 1;
            }
        }
    }
    ensure(direct > 0, || "no direct cochain computation".into())?;
    Ok(format!("{direct} direct cochain computations agree"))
}

fn oracle(all: &[Instance]) -> Outcome {
    let mut compared = 0;
    for inst in all.iter().filter(|i| i.report.instance.reduced_dim <= ORACLE_DIM) {
        ensure(!inst.report.oracle.is_empty(), || format!("{}: oracle did not run", inst.config.name))?;
        for o in &inst.report.oracle {
            ensure(o.agrees == Some(true) && o.degrees == [0, 1, 2], || format!("{}: {o:?}", inst.config.name))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} columns"))
}

fn determinism(all: &[Instance]) -> Outcome {
    for name in ["matrix-units-2", "c2-sparse-sandwich", "groupoid-derived"] {
        let inst = all.iter().find(|i| i.config.name == name).unwrap();
        let runs: Vec<String> = [1, 3, 1, 4]
            .into_iter()
            .map(|t| in_pool(t, || canonical_json(&run(Command::All, &inst.config, &RunOptions::default()).unwrap())))
            .collect();
        ensure(runs.windows(2).all(|w| w[0] == w[1]), || format!("{name}: reports differ"))?;
    }
    Ok("thread counts 1, 3, 1, 4".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let all: Vec<Instance> = BUNDLED
        .iter()
        .map(|(name, text)| {
            let config = parse_config(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(config.name, *name);
            let s = config.semigroup().unwrap();
            let opts = RunOptions { oracle: s.nonzero_count() <= ORACLE_DIM, ..Default::default() };
            let report = run(Command::All, &config, &opts).unwrap_or_else(|e| panic!("{name}: {e}"));
            Instance { config, report }
        })
        .collect();
    println!("acceptance: {} instances computed in {} ms", all.len(), start.elapsed().as_millis());

    let criteria: [(&str, fn(&[Instance]) -> Outcome); 10] = [
        ("matrix units reproduce M_n and HH = [1, 0, 0]", matrix_units),
        ("HH(A(S)) = HH(Q[G]) in degrees 0..2", group_algebra_table),
        ("HH(l1(S)) = HH(A(S)) in degrees 1, 2; degree 0 flagged", reduced_vs_full),
        ("unitizations agree in degrees 1, 2", unitizations),
        ("Morita witnesses at every position", morita),
        ("contracting homotopies", homotopies),
        ("biprojective diagonal and negative control", biprojectivity),
        ("weak amenability of all four algebras", weak_amenability),
        ("dense oracle agreement", oracle),
        ("byte-identical reports across thread counts", determinism),
    ];
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        match check(&all) {
            Ok(note) => println!("criterion {:>2} PASS  {title} ({note})", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
