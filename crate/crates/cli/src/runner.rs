//! Runs the checks of a resolved scenario and collects a deterministic report.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use morita_core::bimodule::unit_bimodule;
use morita_core::shadow::hochschild;
use morita_core::suite::{
    composite_batch, lunts_batch, mate_batch, penumbra_batch, summarize, triangles_batch, umbra_batch,
};
use morita_core::traces::{check_induction, check_main_theorem, TheoremReport, Verdict};
use morita_core::twochar::{character_table, check_modular_invariance};
use morita_core::{Error, Result};
use serde::Serialize;

use crate::scenario::{build_action, build_group, parse_matrix, CheckSpec, Resolved, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub g: usize,
    pub h: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub algebra: String,
    pub module: String,
    pub n_max: usize,
    pub chain_dims: Vec<usize>,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub index: usize,
    pub check: String,
    pub target: String,
    pub status: Status,
    pub reason: Option<String>,
    pub reports: Vec<TheoremReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<Homology>,
    /// Wall-clock time; the only field that varies between identical runs.
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub scenario: String,
    pub field: String,
    pub seed: u64,
    pub status: Status,
    pub checks: Vec<CheckResult>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Run-time settings taken from the command line.
#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    /// Replaces the scenario seed when set.
    pub seed: Option<u64>,
    /// Replaces every `n_max` when set.
    pub degree_bound: Option<usize>,
    /// Worker threads; `0` picks the available parallelism.
    pub threads: usize,
}

fn seeds(base: u64, first: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| base.wrapping_add(first).wrapping_add(i)).collect()
}

fn seed_label(s: &[u64]) -> String {
    match (s.first(), s.last()) {
        (Some(a), Some(b)) => format!("seeds {a}..={b}"),
        _ => "no seeds".into(),
    }
}

/// What one check produced before its status is decided.
#[derive(Default)]
struct Outcome {
    target: String,
    reports: Vec<TheoremReport>,
    table: Option<Vec<TableRow>>,
    homology: Option<Homology>,
}

fn run_check(r: &Resolved, spec: &CheckSpec, base: u64, degree: Option<usize>, path: &str) -> Result<Outcome> {
    let mut out = Outcome::default();
    match spec {
        CheckSpec::Triangles { algebra, modules, seeds: n, first_seed } => {
            let s = seeds(base, *first_seed, *n);
            let mut parts = vec![];
            for m in modules {
                parts.push(morita_core::suite::check_triangles(&r.modules[m])?);
            }
            let mut target = modules.join(", ");
            if let Some(key) = algebra {
                parts.extend(triangles_batch(r.algebra(key), &s)?);
                target = [target, format!("{key} unit and {}", seed_label(&s))]
                    .into_iter()
                    .filter(|t| !t.is_empty())
                    .collect::<Vec<_>>()
                    .join("; ");
            }
            out.target = target;
            out.reports = parts;
        }
        CheckSpec::MainTheorem { algebra, seeds: n, first_seed } => {
            let s = seeds(base, *first_seed, *n);
            out.target = format!("{algebra} {}", seed_label(&s));
            out.reports = vec![check_main_theorem(r.algebra(algebra), &s)?];
        }
        CheckSpec::Composite { algebra, seeds: n, first_seed } => {
            let s = seeds(base, *first_seed, *n);
            out.target = format!("{algebra} {}", seed_label(&s));
            out.reports = composite_batch(r.algebra(algebra), &s)?;
        }
        CheckSpec::Mate { algebra, seeds: n, first_seed } => {
            let s = seeds(base, *first_seed, *n);
            out.target = format!("{algebra} {}", seed_label(&s));
            out.reports = mate_batch(r.algebra(algebra), &s)?;
        }
        CheckSpec::Umbra { algebra, seeds: n, first_seed } => {
            let s = seeds(base, *first_seed, *n);
            out.target = format!("{algebra} {}", seed_label(&s));
            out.reports = umbra_batch(r.algebra(algebra), &s)?;
        }
        CheckSpec::Penumbra { algebra, seeds: n, first_seed } => {
            let s = seeds(base, *first_seed, *n);
            out.target = format!("{algebra} {}", seed_label(&s));
            out.reports = penumbra_batch(r.algebra(algebra), &s)?;
        }
        CheckSpec::Lunts { algebra, seeds: n, first_seed, n_max } => {
            let s = seeds(base, *first_seed, *n);
            let n_max = degree.unwrap_or(*n_max);
            out.target = format!("{algebra} {} up to degree {n_max}", seed_label(&s));
            out.reports = lunts_batch(r.algebra(algebra), &s, n_max)?;
        }
        CheckSpec::Induction { group, subgroup, embedding, representation } => {
            let g = build_group(group, path).map_err(|e| Error::Internal(e.to_string()))?;
            let h = build_group(subgroup, path).map_err(|e| Error::Internal(e.to_string()))?;
            let rep = representation
                .iter()
                .map(|m| parse_matrix(r.field, m, path))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Internal(e.to_string()))?;
            out.target = format!("{} in {}", h.name(), g.name());
            out.reports = vec![check_induction(r.field, &g, &h, embedding, &rep)?];
        }
        CheckSpec::TwoCharacter { action, words, max_length, first_seed, expect } => {
            let act = build_action(r.field, &r.algebras, action, path).map_err(|e| Error::Internal(e.to_string()))?;
            let seed = base.wrapping_add(*first_seed);
            out.target = format!("{} on {}", act.group.name(), act.algebra.name());
            let rows: Vec<TableRow> = character_table(&act)?
                .into_iter()
                .map(|(g, h, v)| TableRow { g, h, value: v.to_string() })
                .collect();
            let mut reports = vec![check_modular_invariance(&act, seed, *words, *max_length)?];
            if let Some(expect) = expect {
                let got: Vec<String> = rows.iter().map(|t| t.value.clone()).collect();
                let want = expect
                    .iter()
                    .map(|s| r.field.parse(s).map(|v| v.to_string()))
                    .collect::<Result<Vec<_>>>()?;
                reports.push(compare_values("character table", &out.target, got, want));
            }
            out.table = Some(rows);
            out.reports = reports;
        }
        CheckSpec::Hochschild { algebra, module, n_max, expect } => {
            let a = r.algebra(algebra);
            let n_max = degree.unwrap_or(*n_max);
            let (m, mname) = match module {
                Some(k) => (r.modules[k].clone(), k.clone()),
                None => (unit_bimodule(a), "unit".to_string()),
            };
            out.target = format!("{algebra} with coefficients in {mname} up to degree {n_max}");
            let hc = hochschild(a, &m, n_max)?;
            let got: Vec<String> = hc.dims.iter().map(ToString::to_string).collect();
            let report = match expect {
                Some(e) if degree.is_none_or(|d| d == e.len()) => {
                    compare_values("hochschild", &out.target, got, e.iter().map(ToString::to_string).collect())
                }
                _ if a.is_separable() => {
                    let mut want = got.clone();
                    want.iter_mut().skip(1).for_each(|v| *v = "0".into());
                    compare_values("hochschild", &out.target, got, want)
                        .with_note("separable: homology vanishes above degree 0")
                }
                _ => compare_values("hochschild", &out.target, got.clone(), got)
                    .with_note("no expected dimensions given; only the complex was checked"),
            };
            out.reports = vec![report.with_note(format!("chain dims {:?}, d∘d = 0 verified", hc.chain_dims))];
            out.homology = Some(Homology {
                algebra: algebra.clone(),
                module: mname,
                n_max,
                chain_dims: hc.chain_dims,
                dims: hc.dims,
            });
        }
    }
    Ok(out)
}

trait WithNote {
    fn with_note(self, note: impl Into<String>) -> Self;
}

impl WithNote for TheoremReport {
    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// Values against expected values, entry by entry.
fn compare_values(theorem: &str, instance: &str, left: Vec<String>, right: Vec<String>) -> TheoremReport {
    let witness = if left.len() != right.len() {
        Some(format!("{} values against {}", left.len(), right.len()))
    } else {
        left.iter()
            .zip(&right)
            .position(|(l, r)| l != r)
            .map(|i| format!("entry {i}: {} vs {}", left[i], right[i]))
    };
    TheoremReport {
        theorem: theorem.into(),
        instance: instance.into(),
        verdict: if witness.is_none() { Verdict::Pass } else { Verdict::Fail },
        witness,
        left,
        right,
        notes: vec![],
    }
}

fn execute(r: &Resolved, index: usize, spec: &CheckSpec, base: u64, degree: Option<usize>) -> CheckResult {
    let start = Instant::now();
    let path = format!("checks[{index}]");
    let (status, reason, outcome) = match run_check(r, spec, base, degree, &path) {
        Ok(o) => {
            let (verdict, reason) = summarize(&o.reports);
            let status = match verdict {
                Verdict::Pass => Status::Pass,
                Verdict::Fail => Status::Fail,
                Verdict::Refused => Status::Skipped,
            };
            (status, reason, o)
        }
        Err(Error::Refused(why)) => (Status::Skipped, Some(why), Outcome::default()),
        Err(e @ Error::ResourceCap { .. }) => (Status::Skipped, Some(e.to_string()), Outcome::default()),
        Err(e) => (Status::Fail, Some(format!("error: {e}")), Outcome::default()),
    };
    CheckResult {
        index,
        check: spec.kind().into(),
        target: outcome.target,
        status,
        reason,
        reports: outcome.reports,
        table: outcome.table,
        homology: outcome.homology,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Runs `checks` (indices into the scenario, or all of them when `None`) on a
/// pool of worker threads. Results are ordered by index, so the report does
/// not depend on scheduling.
pub fn run(r: &Resolved, command: &str, checks: &[CheckSpec], opts: Options) -> Report {
    let start = Instant::now();
    let base = opts.seed.unwrap_or(r.scenario.seed);
    let threads = match opts.threads {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        n => n,
    }
    .min(checks.len().max(1));
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(checks.len()));
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(spec) = checks.get(i) else { break };
                let res = execute(r, i, spec, base, opts.degree_bound);
                results.lock().expect("result lock").push(res);
            });
        }
    });
    let mut checks = results.into_inner().expect("result lock");
    checks.sort_by_key(|c| c.index);
    let status = if checks.iter().any(|c| c.status == Status::Fail) { Status::Fail } else { Status::Pass };
    Report {
        schema: SCHEMA_VERSION,
        tool: "morita".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        scenario: r.scenario.name.clone(),
        field: r.field.to_string(),
        seed: base,
        status,
        checks,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// The checks a subcommand runs: everything for `check`, the two-character
/// checks for `char`, and the Hochschild checks for `hh` (the unit of every
/// algebra when the scenario lists none).
pub fn select(r: &Resolved, command: &str) -> Vec<CheckSpec> {
    let all = &r.scenario.checks;
    match command {
        "char" => all.iter().filter(|c| matches!(c, CheckSpec::TwoCharacter { .. })).cloned().collect(),
        "hh" => {
            let hh: Vec<CheckSpec> = all.iter().filter(|c| matches!(c, CheckSpec::Hochschild { .. })).cloned().collect();
            if !hh.is_empty() {
                return hh;
            }
            r.algebras
                .keys()
                .map(|k| CheckSpec::Hochschild {
                    algebra: k.clone(),
                    module: None,
                    n_max: crate::scenario::DEFAULT_DEGREE,
                    expect: None,
                })
                .collect()
        }
        _ => all.clone(),
    }
}
