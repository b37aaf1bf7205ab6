// SPDX-License-Identifier: Apache-2.0

//! Run reports and their text, JSON and CSV renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use shutter_core::interferometer::SweepRow;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchRow {
    pub bits: BTreeMap<String, u8>,
    pub halted: bool,
    /// Exact path probability.
    pub probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frequency: Option<f64>,
    pub fidelity: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationResult {
    pub line: usize,
    pub statement: String,
    pub passed: bool,
    pub detail: String,
    pub observed: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub mode: String,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    /// Bit columns in program order.
    pub bits: Vec<String>,
    pub branches: Vec<BranchRow>,
    pub total_probability: f64,
    pub expectations: Vec<ExpectationResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_square: Option<ChiSquare>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (text, json, csv)")),
        }
    }
}

fn bit_cell(row: &BranchRow, bit: &str) -> String {
    row.bits
        .get(bit)
        .map_or_else(|| "-".to_string(), u8::to_string)
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.digits$}"))
}

pub fn emit_report(report: &RunReport, format: Format) -> Vec<u8> {
    match format {
        Format::Text => text(report).into_bytes(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => csv(report).into_bytes(),
    }
}

fn text(r: &RunReport) -> String {
    let sampled = r.trials.is_some();
    let judged = !r.expectations.is_empty();
    let mut header: Vec<String> = r.bits.clone();
    header.push("halted".into());
    header.push("probability".into());
    if sampled {
        header.push("count".into());
        header.push("frequency".into());
    }
    header.push("fidelity".into());
    if judged {
        header.push("result".into());
    }
    let rows: Vec<Vec<String>> = r
        .branches
        .iter()
        .map(|b| {
            let mut cells: Vec<String> = r.bits.iter().map(|bit| bit_cell(b, bit)).collect();
            cells.push(if b.halted { "yes" } else { "no" }.into());
            cells.push(format!("{:.12}", b.probability));
            if sampled {
                cells.push(b.count.unwrap_or(0).to_string());
                cells.push(opt(b.frequency, 6));
            }
            cells.push(opt(b.fidelity, 12));
            if judged {
                cells.push(if b.passed { "PASS" } else { "FAIL" }.into());
            }
            cells
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|k| {
            rows.iter()
                .map(|row| row[k].len())
                .chain([header[k].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };

    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", r.scenario);
    let _ = writeln!(out, "mode: {}", r.mode);
    let _ = writeln!(
        out,
        "seed: {}",
        r.seed.map_or_else(|| "none".to_string(), |s| s.to_string())
    );
    if let Some(t) = r.trials {
        let _ = writeln!(out, "trials: {t}");
    }
    let _ = writeln!(out, "branches: {}", r.branches.len());
    let _ = writeln!(out, "total probability: {:.12}", r.total_probability);
    if let Some(ms) = r.elapsed_ms {
        let _ = writeln!(out, "elapsed: {ms:.3} ms");
    }
    out.push('\n');
    let _ = writeln!(out, "{}", line(&header).trim_end());
    for row in &rows {
        let _ = writeln!(out, "{}", line(row).trim_end());
    }
    if judged {
        out.push('\n');
        for e in &r.expectations {
            let verdict = if e.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{verdict} line {}: {}  ({})",
                e.line, e.statement, e.detail
            );
        }
    }
    if let Some(chi) = r.chi_square {
        let _ = writeln!(
            out,
            "\nchi-square: {:.6} on {} dof, p = {:.6}",
            chi.statistic, chi.dof, chi.p_value
        );
    }
    if judged {
        let _ = writeln!(out, "\nresult: {}", if r.passed { "PASS" } else { "FAIL" });
    }
    out
}

fn csv(r: &RunReport) -> String {
    let sampled = r.trials.is_some();
    let mut out = String::new();
    let mut header: Vec<&str> = r.bits.iter().map(String::as_str).collect();
    header.push("probability");
    if sampled {
        header.extend(["count", "frequency"]);
    }
    header.push("fidelity");
    let _ = writeln!(out, "{}", header.join(","));
    for b in &r.branches {
        let mut cells: Vec<String> = r
            .bits
            .iter()
            .map(|bit| b.bits.get(bit).map_or_else(String::new, u8::to_string))
            .collect();
        cells.push(format!("{:e}", b.probability));
        if sampled {
            cells.push(b.count.unwrap_or(0).to_string());
            cells.push(b.frequency.map_or_else(String::new, |f| format!("{f:e}")));
        }
        cells.push(b.fidelity.map_or_else(String::new, |f| format!("{f:e}")));
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct SweepRecord {
    #[serde(rename = "N")]
    cycles: u32,
    theta: f64,
    leakage_prob: f64,
    explosion_prob: f64,
    survival_prob: f64,
}

impl From<&SweepRow> for SweepRecord {
    fn from(r: &SweepRow) -> Self {
        Self {
            cycles: r.cycles,
            theta: r.theta,
            leakage_prob: r.leakage,
            explosion_prob: r.explosion,
            survival_prob: r.survival,
        }
    }
}

/// Interferometer sweep as CSV or JSON. Text falls back to CSV.
pub fn emit_sweep(rows: &[SweepRow], format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let records: Vec<SweepRecord> = rows.iter().map(SweepRecord::from).collect();
            let mut s = serde_json::to_string_pretty(&records).expect("sweep serializes");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv | Format::Text => {
            let mut out = String::from("N,theta,leakage_prob,explosion_prob,survival_prob\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{:e},{:e},{:e},{:e}",
                    r.cycles, r.theta, r.leakage, r.explosion, r.survival
                );
            }
            out.into_bytes()
        }
    }
}
