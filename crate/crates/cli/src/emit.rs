//! Renders a report as human-readable text, JSON, or TSV.

use std::fmt::Write;

use crate::runner::{Report, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Json,
    Tsv,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Human => human(report),
        Format::Tsv => match report.command.as_str() {
            "char" => tsv_tables(report),
            "hh" => tsv_homology(report),
            _ => tsv_checks(report),
        },
    }
}

fn human(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scenario {} over {} (seed {})", report.scenario, report.field, report.seed);
    for c in &report.checks {
        let _ = writeln!(s, "{} {} [{}]", c.status.label(), c.check, c.target);
        if let Some(r) = &c.reason {
            let _ = writeln!(s, "    {r}");
        }
        if report.command != "check" || c.status == Status::Fail {
            for r in &c.reports {
                let _ = writeln!(s, "    {r}");
            }
        }
        if let Some(table) = &c.table {
            if report.command == "char" {
                for row in table {
                    let _ = writeln!(s, "    chi({}, {}) = {}", row.g, row.h, row.value);
                }
            }
        }
        if let Some(h) = &c.homology {
            let _ = writeln!(s, "    HH_0..HH_{} = {:?}; chain dims {:?}", h.n_max - 1, h.dims, h.chain_dims);
        }
    }
    let count = |st: Status| report.checks.iter().filter(|c| c.status == st).count();
    let _ = writeln!(
        s,
        "{}: {} passed, {} failed, {} skipped",
        report.status.label(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skipped)
    );
    s
}

fn clean(text: &str) -> String {
    text.replace(['\t', '\n'], " ")
}

fn tsv_checks(report: &Report) -> String {
    let mut s = String::from("index\tcheck\ttarget\tstatus\tinstances\treason\n");
    for c in &report.checks {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}",
            c.index,
            c.check,
            clean(&c.target),
            c.status.label(),
            c.reports.len(),
            clean(c.reason.as_deref().unwrap_or(""))
        );
    }
    s
}

fn tsv_tables(report: &Report) -> String {
    let mut s = String::new();
    for c in &report.checks {
        let _ = writeln!(s, "# {} [{}] {}", c.check, clean(&c.target), c.status.label());
        s.push_str("g\th\tvalue\n");
        for row in c.table.iter().flatten() {
            let _ = writeln!(s, "{}\t{}\t{}", row.g, row.h, row.value);
        }
    }
    s
}

fn tsv_homology(report: &Report) -> String {
    let mut s = String::from("algebra\tmodule\tdegree\tchain_dim\tdim\n");
    for h in report.checks.iter().filter_map(|c| c.homology.as_ref()) {
        for (i, d) in h.dims.iter().enumerate() {
            let _ = writeln!(s, "{}\t{}\t{i}\t{}\t{d}", h.algebra, h.module, h.chain_dims[i]);
        }
    }
    s
}
