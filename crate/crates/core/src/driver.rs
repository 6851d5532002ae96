//! Command dispatch: runs the requested computations on one instance and
//! collects them into a [`RunReport`].

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use crate::algebra::FiniteAlgebra;
use crate::bimodule::regular_bimodule;
use crate::checks::{
    associated_algebras, biprojectivity_check, projectivity_check, random_spot_check, right_splitting, self_induced_check,
    weak_amenability_check, AlgebraKind,
};
use crate::config::{ConfigError, InstanceConfig};
use crate::hochschild::{
    bar_homotopy_check, hunital_homotopy_check, HochschildError, HomotopyCertificate, DEFAULT_STREAM_CAP,
    MAX_STREAM_DEGREE,
};
use crate::morita::{
    build_witness, invariance_harness, reverse_roundtrip_check, roundtrip_check, InvarianceTable, MoritaError,
    MoritaWitness, Roundtrip,
};
use crate::oracle::{dense_regular_homology, OracleError};
use crate::rees::{ReesError, ReesSemigroup, SandwichEntry};
use crate::report::{
    AssertionReport, ColumnReport, DegreeZeroNote, HomologySection, HomotopyReport, InstanceEcho, MoritaSection,
    OracleReport, PositionReport, Provenance, RoundtripReport, RunReport,
};

/// Samples drawn by the seeded spot check.
pub const SPOT_CHECK_SAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Hh,
    Morita,
    Checks,
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Hh => "hh",
            Command::Morita => "morita",
            Command::Checks => "checks",
            Command::All => "all",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Overrides the config's `max_degree`.
    pub max_degree: Option<usize>,
    /// 0-based `(i, λ)`; defaults to the first valid position.
    pub idempotent: Option<(usize, usize)>,
    /// Lifts every size guard.
    pub force: bool,
    /// Cross-check regular homology against the dense oracle.
    pub oracle: bool,
    /// Record wall-clock timings in the report.
    pub timings: bool,
    /// Adds a seeded randomized spot check of algebraic identities.
    pub seed: Option<u64>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Morita(#[from] MoritaError),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error("idempotent position ({}, {}) is out of range", .0 + 1, .1 + 1)]
    BadPosition(usize, usize),
    #[error("max degree must be at least 1")]
    BadDegree,
}

impl RunError {
    pub fn is_size_guard(&self) -> bool {
        match self {
            RunError::Config(c) => c.is_size_guard(),
            RunError::Hochschild(HochschildError::SizeGuard { .. })
            | RunError::Morita(MoritaError::Hochschild(HochschildError::SizeGuard { .. })) => true,
            _ => false,
        }
    }
}

impl From<ReesError> for RunError {
    fn from(e: ReesError) -> Self {
        RunError::Config(ConfigError::Semigroup(e))
    }
}

struct Clock {
    enabled: bool,
    laps: BTreeMap<String, u64>,
}

impl Clock {
    fn time<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.laps.insert(label.to_string(), start.elapsed().as_millis() as u64);
        }
        out
    }
}

fn echo(config: &InstanceConfig, s: &ReesSemigroup) -> InstanceEcho {
    let g = s.group();
    InstanceEcho {
        name: config.name.clone(),
        group: match &config.group {
            crate::config::GroupSpec::Cyclic(n) => format!("cyclic {n}"),
            crate::config::GroupSpec::Symmetric3 => "symmetric3".into(),
            crate::config::GroupSpec::Table { .. } => "table".into(),
        },
        group_order: g.order(),
        i_size: s.i_size(),
        lambda_size: s.lambda_size(),
        sandwich: config
            .sandwich
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| match e {
                        SandwichEntry::Element(x) => g.name(*x).to_string(),
                        SandwichEntry::Null => "o".into(),
                    })
                    .collect()
            })
            .collect(),
        reduced_dim: s.nonzero_count(),
    }
}

fn roundtrip_report(r: &Roundtrip) -> RoundtripReport {
    RoundtripReport {
        module_dim: r.module_dim,
        image_dim: r.image_dim,
        roundtrip_dim: r.roundtrip_dim,
        evaluation_rank: r.evaluation_rank,
        isomorphic: r.isomorphic,
    }
}

fn position_report(w: &MoritaWitness) -> Result<PositionReport, RunError> {
    let sum = w.summary();
    let roundtrip = roundtrip_check(w, &regular_bimodule(&w.algebra))?;
    let reverse = reverse_roundtrip_check(w, &regular_bimodule(&w.group_algebra))?;
    Ok(PositionReport {
        position: [w.position.0 + 1, w.position.1 + 1],
        algebra_dim: sum.algebra_dim,
        corner_dim: sum.corner_dim,
        p_dim: sum.p_dim,
        q_dim: sum.q_dim,
        pq_tensor_dim: sum.pq_tensor_dim,
        pq_rank: sum.pq_rank,
        qp_tensor_dim: sum.qp_tensor_dim,
        qp_rank: sum.qp_rank,
        // build_witness fails unless the block map is an algebra isomorphism
        corner_is_group_algebra: true,
        equivalence: w.is_equivalence(),
        roundtrip: roundtrip_report(&roundtrip),
        reverse_roundtrip: roundtrip_report(&reverse),
    })
}

fn homology_section(t: &InvarianceTable) -> HomologySection {
    let columns = t
        .columns
        .iter()
        .map(|c| ColumnReport {
            label: c.label.clone(),
            algebra: c.report.algebra_name.clone(),
            coefficients: c.report.coefficient_name.clone(),
            chain_dims: c.report.chain_dims.clone(),
            boundary_ranks: c.report.boundary_ranks.clone(),
            homology: c.report.homology_dims.clone(),
            cohomology: c.report.cohomology_dims.clone(),
        })
        .collect();
    let reduced_hh0 = t.column("A(S)").map_or(0, |r| r.homology_dims[0]);
    let degree_zero = ["l1(S)", "A(S)#", "l1(S)#"]
        .iter()
        .filter_map(|l| t.column(l).map(|r| (l, r.homology_dims[0])))
        .map(|(l, hh0)| DegreeZeroNote { column: l.to_string(), hh0, reduced_hh0, differs: hh0 != reduced_hh0 })
        .collect();
    let assertions = t
        .assertions
        .iter()
        .map(|a| AssertionReport {
            description: a.description.clone(),
            columns: a.columns.clone(),
            degrees: a.degrees.clone(),
            holds: a.holds,
        })
        .collect();
    HomologySection { columns, assertions, degree_zero }
}

fn homotopy_report(algebra: &str, kind: &str, c: &HomotopyCertificate) -> HomotopyReport {
    HomotopyReport {
        algebra: algebra.to_string(),
        kind: kind.to_string(),
        max_degree: c.max_degree,
        chains_checked: c.chains_checked.clone(),
        passed: c.passed(),
        first_violation: c.first_violation.as_ref().map(|v| format!("degree {} chain {:?}", v.degree, v.chain)),
    }
}

fn oracle_report(label: &str, a: &FiniteAlgebra, sparse: &[usize], max_degree: usize) -> OracleReport {
    let degrees: Vec<usize> = (0..max_degree).collect();
    match dense_regular_homology(a, max_degree) {
        Ok(dense) => {
            let dense = dense[..max_degree].to_vec();
            let sparse = sparse[..max_degree].to_vec();
            OracleReport {
                column: label.to_string(),
                degrees,
                agrees: Some(dense == sparse),
                sparse: Some(sparse),
                dense: Some(dense),
                skipped: None,
            }
        }
        Err(e @ (OracleError::TooLarge { .. } | OracleError::NonIntegral { .. } | OracleError::Overflow { .. })) => {
            OracleReport {
                column: label.to_string(),
                degrees,
                sparse: None,
                dense: None,
                agrees: None,
                skipped: Some(e.to_string()),
            }
        }
    }
}

/// Runs `command` on `config`. Mathematical failures are recorded in the
/// report; errors are reserved for invalid input and size guards.
pub fn run(command: Command, config: &InstanceConfig, opts: &RunOptions) -> Result<RunReport, RunError> {
    let mut config = config.clone();
    if opts.force {
        config.force = true;
    }
    let max_degree = opts.max_degree.unwrap_or(config.max_degree);
    if max_degree == 0 {
        return Err(RunError::BadDegree);
    }
    let chain_cap = if config.force { usize::MAX } else { config.chain_cap };
    let stream_cap = if config.force { usize::MAX } else { DEFAULT_STREAM_CAP };
    let s = config.semigroup()?;
    let position = match opts.idempotent {
        Some((i, l)) if i >= s.i_size() || l >= s.lambda_size() => return Err(RunError::BadPosition(i, l)),
        Some(p) => p,
        None => s.valid_positions()[0],
    };
    let mut clock = Clock { enabled: opts.timings, laps: BTreeMap::new() };
    let witness = clock.time("morita.witness", || build_witness(&s, position.0, position.1))?;

    let mut report = RunReport {
        instance: echo(&config, &s),
        provenance: Provenance {
            tool: "rees".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.name().into(),
            max_degree,
            chain_cap,
            stream_cap,
            force: config.force,
            truncated_degree: max_degree,
            certified_degrees: (0..max_degree).collect(),
            idempotent: [position.0 + 1, position.1 + 1],
        },
        homology: None,
        morita: None,
        checks: Vec::new(),
        homotopy: Vec::new(),
        oracle: Vec::new(),
        failures: Vec::new(),
        passed: true,
        timings_ms: None,
    };
    let wants = |c: Command| command == c || command == Command::All;

    if wants(Command::Hh) {
        let table = clock.time("hh.harness", || invariance_harness(&s, &witness, max_degree, chain_cap))?;
        for a in table.assertions.iter().filter(|a| !a.holds) {
            report.failures.push(format!("homology: {} in degrees {:?}", a.description, a.degrees));
        }
        if opts.oracle {
            let algebras: BTreeMap<&str, Arc<FiniteAlgebra>> =
                associated_algebras(&s).into_iter().chain([("Q[G]", Arc::clone(&witness.group_algebra))]).collect();
            for c in &table.columns {
                let Some(a) = algebras.get(c.label.as_str()) else { continue };
                let o = clock.time(&format!("oracle.{}", c.label), || {
                    oracle_report(&c.label, a, &c.report.homology_dims, max_degree)
                });
                if o.agrees == Some(false) {
                    report.failures.push(format!("oracle: {} disagrees with the dense computation", c.label));
                }
                report.oracle.push(o);
            }
        }
        report.homology = Some(homology_section(&table));
    }

    if wants(Command::Morita) {
        let mut positions = Vec::new();
        for (i, l) in s.valid_positions() {
            let w = if (i, l) == position { witness.clone() } else { build_witness(&s, i, l)? };
            positions.push(clock.time(&format!("morita.position.{}.{}", i + 1, l + 1), || position_report(&w))?);
        }
        let strip = |p: &PositionReport| PositionReport { position: [0, 0], ..p.clone() };
        let choice_independent = positions.windows(2).all(|w| strip(&w[0]) == strip(&w[1]));
        for p in &positions {
            if !(p.equivalence && p.roundtrip.isomorphic && p.reverse_roundtrip.isomorphic) {
                report.failures.push(format!("morita: witness at {:?} is not an equivalence", p.position));
            }
        }
        if !choice_independent {
            report.failures.push("morita: witness data depend on the idempotent".into());
        }
        report.morita = Some(MoritaSection {
            selected: [position.0 + 1, position.1 + 1],
            positions,
            choice_independent,
        });
    }

    if wants(Command::Checks) {
        let mut checks = vec![clock.time("checks.projectivity", || projectivity_check(&s))];
        for (_, a) in associated_algebras(&s) {
            checks.push(clock.time(&format!("checks.self_induced.{}", a.name()), || self_induced_check(&a)));
        }
        checks.push(clock.time("checks.biprojectivity", || biprojectivity_check(&s, Some(position))));
        checks.push(clock.time("checks.weak_amenability", || weak_amenability_check(&s, chain_cap, true))?);
        if let Some(seed) = opts.seed {
            checks.push(clock.time("checks.random_spot_check", || random_spot_check(&s, seed, SPOT_CHECK_SAMPLES)));
        }
        for c in checks.iter().filter(|c| !c.passed) {
            report.failures.push(format!("check {} on {}", c.check_name, c.instance_name));
        }
        report.checks = checks;

        let degree = (max_degree + 1).min(MAX_STREAM_DEGREE);
        let reduced = s.reduced_algebra().with_name("A(S)");
        let full = s.full_algebra().with_name("l1(S)");
        for (a, kind) in [(reduced, AlgebraKind::Reduced), (full, AlgebraKind::Full)] {
            let a = Arc::new(a);
            let bar = clock.time(&format!("homotopy.bar.{}", a.name()), || {
                bar_homotopy_check(&a, &regular_bimodule(&a), degree, stream_cap)
            })?;
            let rho = right_splitting(&s, kind);
            let hu = clock.time(&format!("homotopy.hunital.{}", a.name()), || {
                hunital_homotopy_check(&a, &rho, degree, stream_cap)
            })?;
            for (label, c) in [("bar", bar), ("h-unital", hu)] {
                let r = homotopy_report(a.name(), label, &c);
                if !r.passed {
                    report.failures.push(format!("homotopy: {label} on {}", a.name()));
                }
                report.homotopy.push(r);
            }
        }
    }

    report.passed = report.failures.is_empty();
    if opts.timings {
        report.timings_ms = Some(clock.laps);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::report::canonical_json;

    const C3: &str = "name = c3\ngroup = cyclic 3\ni_size = 2\nlambda_size = 2\nsandwich:\n  e o\n  a e\nend\n";
    const MU2: &str = "name = mu2\ngroup = cyclic 1\ni_size = 2\nlambda_size = 2\nsandwich:\n  e o\n  o e\nend\n";

    #[test]
    fn hh_on_c3() {
        let r = run(Command::Hh, &parse_config(C3).unwrap(), &RunOptions::default()).unwrap();
        assert!(r.passed, "{:?}", r.failures);
        let h = r.homology.unwrap();
        let a = h.columns.iter().find(|c| c.label == "A(S)").unwrap();
        assert_eq!(a.homology[..3], [3, 0, 0]);
        assert!(r.morita.is_none() && r.checks.is_empty());
    }

    #[test]
    fn all_on_matrix_units() {
        let opts = RunOptions { oracle: true, ..Default::default() };
        let r = run(Command::All, &parse_config(MU2).unwrap(), &opts).unwrap();
        assert!(r.passed, "{:?}", r.failures);
        let h = r.homology.as_ref().unwrap();
        let l1 = h.degree_zero.iter().find(|d| d.column == "l1(S)").unwrap();
        assert_eq!((l1.hh0, l1.reduced_hh0, l1.differs), (2, 1, true));
        assert!(r.oracle.iter().all(|o| o.agrees == Some(true)));
        assert_eq!(r.morita.as_ref().unwrap().positions.len(), 2);
        assert!(r.homotopy.iter().all(|h| h.max_degree == 4));
    }

    #[test]
    fn explicit_idempotent_matches_default() {
        let c = parse_config(C3).unwrap();
        let a = run(Command::Morita, &c, &RunOptions::default()).unwrap();
        let b = run(Command::Morita, &c, &RunOptions { idempotent: Some((1, 1)), ..Default::default() }).unwrap();
        assert!(a.passed && b.passed);
        assert_eq!(a.morita.unwrap().positions, b.morita.unwrap().positions);
        let err = run(Command::Morita, &c, &RunOptions { idempotent: Some((1, 0)), ..Default::default() }).unwrap_err();
        assert!(matches!(err, RunError::Morita(MoritaError::Rees(ReesError::ZeroSandwichEntry { .. }))));
    }

    #[test]
    fn size_guard_is_reported() {
        let c = parse_config(MU2).unwrap();
        let c = InstanceConfig { chain_cap: 100, ..c };
        let err = run(Command::Hh, &c, &RunOptions::default()).unwrap_err();
        assert!(err.is_size_guard(), "{err}");
        assert!(run(Command::Hh, &c, &RunOptions { force: true, ..Default::default() }).is_ok());
    }

    #[test]
    fn json_is_stable_and_timings_optional() {
        let c = parse_config(MU2).unwrap();
        let a = canonical_json(&run(Command::Hh, &c, &RunOptions::default()).unwrap());
        let b = canonical_json(&run(Command::Hh, &c, &RunOptions::default()).unwrap());
        assert_eq!(a, b);
        assert!(!a.contains("timings_ms"));
        let t = run(Command::Hh, &c, &RunOptions { timings: true, ..Default::default() }).unwrap();
        assert!(t.timings_ms.unwrap().contains_key("hh.harness"));
    }
}
