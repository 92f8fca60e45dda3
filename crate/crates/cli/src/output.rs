use std::io::Write;
use std::path::Path;

use anyhow::Context;
use prodform_core::suites::SuiteReport;
use prodform_core::{CurvatureReport, FrameData, TheoremSummary};
use serde::Serialize;

use crate::config::OutFormat;

/// 17 significant digits: round-trips every `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub s: f64,
    /// `lambda_1 .. lambda_n`, the last one along `T`.
    pub lambda: Vec<f64>,
    pub t_norm: f64,
    pub nu: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub rho: f64,
    pub einstein_defect: f64,
    pub k_spread: f64,
}

impl ReportRow {
    pub fn new(fd: &FrameData, rep: &CurvatureReport) -> Self {
        Self {
            s: fd.s(),
            lambda: fd.principal_curvatures(),
            t_norm: fd.t_norm(),
            nu: fd.nu(),
            h: fd.mean_curvature(),
            rho: rep.rho,
            einstein_defect: rep.einstein_defect,
            k_spread: rep.k_spread,
        }
    }
}

pub fn report_header(n: usize) -> Vec<String> {
    let mut h = vec!["s".to_string()];
    h.extend((1..=n).map(|i| format!("lambda_{i}")));
    h.extend(["t_norm", "nu", "H", "rho", "einstein_defect", "k_spread"].map(String::from));
    h
}

pub fn render_report(rows: &[ReportRow], n: usize, format: OutFormat) -> anyhow::Result<Vec<u8>> {
    match format {
        OutFormat::Json => json(&rows),
        OutFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(report_header(n))?;
            for r in rows {
                let mut rec = vec![num(r.s)];
                rec.extend(r.lambda.iter().copied().map(num));
                rec.extend([r.t_norm, r.nu, r.h, r.rho, r.einstein_defect, r.k_spread].map(num));
                w.write_record(rec)?;
            }
            Ok(w.into_inner()?)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub label: String,
    pub epsilon: i32,
    pub n: usize,
    #[serde(flatten)]
    pub summary: Option<TheoremSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepRow {
    pub fn status(&self) -> &'static str {
        match &self.summary {
            None => "error",
            Some(s) => match s.status {
                prodform_core::classifier::TheoremStatus::NotEinstein => "not_einstein",
                prodform_core::classifier::TheoremStatus::ConstantCurvature => "constant_curvature",
                prodform_core::classifier::TheoremStatus::Violation => "violation",
            },
        }
    }
}

const SWEEP_HEADER: [&str; 13] = [
    "index",
    "label",
    "epsilon",
    "n",
    "status",
    "points",
    "max_einstein_defect",
    "max_k_spread",
    "rho_mean",
    "k_mean",
    "worst_s",
    "worst_value",
    "error",
];

pub fn render_sweep(rows: &[SweepRow], format: OutFormat) -> anyhow::Result<Vec<u8>> {
    match format {
        OutFormat::Json => json(&rows),
        OutFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(SWEEP_HEADER)?;
            for r in rows {
                let s = r.summary.as_ref();
                w.write_record([
                    r.index.to_string(),
                    r.label.clone(),
                    r.epsilon.to_string(),
                    r.n.to_string(),
                    r.status().to_string(),
                    s.map(|s| s.points.to_string()).unwrap_or_default(),
                    opt_num(s.map(|s| s.max_einstein_defect)),
                    opt_num(s.map(|s| s.max_k_spread)),
                    opt_num(s.map(|s| s.rho_mean)),
                    opt_num(s.map(|s| s.k_mean)),
                    opt_num(s.and_then(|s| s.worst_s)),
                    opt_num(s.map(|s| s.worst_value)),
                    r.error.clone().unwrap_or_default(),
                ])?;
            }
            Ok(w.into_inner()?)
        }
    }
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    passed: bool,
    seed: u64,
    suites: &'a [SuiteReport],
}

pub fn render_verify(
    reports: &[SuiteReport],
    seed: u64,
    format: OutFormat,
) -> anyhow::Result<Vec<u8>> {
    match format {
        OutFormat::Json => json(&VerifyDoc {
            passed: reports.iter().all(|r| r.passed),
            seed,
            suites: reports,
        }),
        OutFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "check", "passed", "value", "threshold", "note"])?;
            for r in reports {
                for c in &r.checks {
                    w.write_record([
                        r.suite.to_string(),
                        c.name.clone(),
                        c.passed.to_string(),
                        num(c.value),
                        num(c.threshold),
                        c.note.clone().unwrap_or_default(),
                    ])?;
                }
            }
            Ok(w.into_inner()?)
        }
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> anyhow::Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

pub fn emit(bytes: &[u8], path: Option<&Path>) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}
