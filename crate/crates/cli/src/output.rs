//! CSV, manifest and report writers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use fermidark::darkstates::{DARK_TOLERANCE, NULL_THRESHOLD};
use fermidark::dynamics::{ChannelData, EvolveOptions, TimeSeries};
use serde_json::json;

use crate::config::Scenario;
use crate::run::{Cell, Outcome, Table};

/// Scientific notation with `digits` significant digits.
pub fn format_number(x: f64, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), x)
}

pub fn series_csv(series: &TimeSeries, digits: usize) -> String {
    let mut s = String::from("t");
    for ch in &series.channels {
        match ch.data {
            ChannelData::Real(_) => write!(s, ",{}", ch.name).unwrap(),
            ChannelData::Complex(_) => write!(s, ",{0}_re,{0}_im", ch.name).unwrap(),
        }
    }
    s.push('\n');
    for (k, &t) in series.times.iter().enumerate() {
        s.push_str(&format_number(t, digits));
        for ch in &series.channels {
            match &ch.data {
                ChannelData::Real(v) => write!(s, ",{}", format_number(v[k], digits)).unwrap(),
                ChannelData::Complex(v) => {
                    write!(s, ",{},{}", format_number(v[k].re, digits), format_number(v[k].im, digits)).unwrap()
                }
            }
        }
        s.push('\n');
    }
    s
}

pub fn table_csv(table: &Table, digits: usize) -> String {
    let mut s = table.header.join(",");
    s.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Int(i) => i.to_string(),
                Cell::Text(t) => t.clone(),
                Cell::Num(x) => format_number(*x, digits),
            })
            .collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// JSON run record; `scenario` echoes the effective configuration.
pub fn manifest(scenario: &Scenario, outcome: &Outcome, files: &[String]) -> serde_json::Value {
    let hygiene = outcome.hygiene.map(|h| {
        json!({
            "max_trace_drift": h.max_trace_drift,
            "max_hermiticity_drift": h.max_hermiticity_drift,
            "min_eigenvalue": if h.min_eigenvalue.is_finite() { json!(h.min_eigenvalue) } else { json!(null) },
        })
    });
    json!({
        "library": "fermidark",
        "version": fermidark::VERSION,
        "scenario": scenario,
        "tolerances": {
            "dark": DARK_TOLERANCE,
            "null_space": NULL_THRESHOLD,
            "trace_abort": EvolveOptions::default().trace_abort,
        },
        "hygiene": hygiene,
        "files": files,
    })
}

/// Writes every output of a finished run into `dir` and returns the paths written.
pub fn write_outputs(scenario: &Scenario, outcome: &Outcome, dir: &Path) -> Result<Vec<PathBuf>> {
    let digits = scenario.output.precision;
    let mut contents: Vec<(String, String)> = Vec::new();
    for (stem, series) in &outcome.series {
        contents.push((format!("{stem}.csv"), series_csv(series, digits)));
    }
    for (name, table) in &outcome.tables {
        contents.push((name.clone(), table_csv(table, digits)));
    }
    let mut report = outcome.report.join("\n");
    report.push('\n');
    contents.push(("report.txt".into(), report));
    let mut names: Vec<String> = contents.iter().map(|(n, _)| n.clone()).collect();
    names.push("manifest.json".into());
    let mut m = serde_json::to_string_pretty(&manifest(scenario, outcome, &names))?;
    m.push('\n');
    contents.push(("manifest.json".into(), m));

    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    for (name, text) in contents {
        let path = dir.join(name);
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}
