#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use prodform_core::classifier::TheoremStatus;
use prodform_core::suites::{run_suite, Suite, DEFAULT_SEED};
use prodform_core::{
    construct_constant_curvature_rotation, curvature_report, verify_theorem, FrameData, SpaceForm,
    DEFAULT_TOL,
};
use rayon::prelude::*;

use config::{Document, OutFormat, RunConfig, SRange};
use output::{ReportRow, SweepRow};

#[derive(Parser)]
#[command(
    version,
    about = "Curvature of parallel-family hypersurfaces in S^n x R and H^n x R"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Numerical tolerance (overrides `tol` in the config)
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Worker threads; output order does not depend on it
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// csv or json (overrides `out.format`)
    #[arg(long, global = true)]
    format: Option<OutFormat>,

    /// Output file (overrides `out.path`); standard output by default
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// One row of curvature data per grid point
    Report { config: PathBuf },
    /// Einstein / constant-curvature summary for every point of a parameter grid
    Sweep { config: PathBuf },
    /// Constant-curvature hypersurface over a geodesic sphere
    Rotation {
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        epsilon: i32,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Target sectional curvature, at least epsilon
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        /// Radius of the base geodesic sphere
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_6)]
        r: f64,
        /// start,stop,count
        #[arg(long, default_value = "-0.2,0.4,21", allow_hyphen_values = true)]
        s_range: SRange,
    },
    /// Run a property suite: identities, cartan, lemma1, theorem, n3 or all
    Verify {
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn pool(jobs: usize) -> anyhow::Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .context("building thread pool")
}

fn report_rows(cfg: &RunConfig, tol: f64, jobs: usize) -> anyhow::Result<Vec<ReportRow>> {
    let base = cfg.build_base()?;
    let profile = cfg.build_profile()?;
    let sf = cfg.sf;
    let grid = cfg.s_range.grid();
    pool(jobs)?.install(|| {
        grid.par_iter()
            .map(|&s| {
                let fd = prodform_core::hypersurface::frame_data_with_tol(&base, &profile, s, tol)
                    .map_err(|e| anyhow!("at s = {s}: {e}"))?;
                let rep = curvature_report(&fd, sf).map_err(|e| anyhow!("at s = {s}: {e}"))?;
                Ok(ReportRow::new(&fd, &rep))
            })
            .collect()
    })
}

fn run_report(cli: &Cli, path: &Path) -> anyhow::Result<bool> {
    let doc = Document::from_path(path)?;
    let cfg = RunConfig::from_document(&doc).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let tol = cli.tol.unwrap_or(cfg.tol);
    let rows = report_rows(&cfg, tol, cli.jobs)?;
    let format = cli.format.or(cfg.out_format).unwrap_or_default();
    let bytes = output::render_report(&rows, cfg.sf.n(), format)?;
    output::emit(&bytes, cli.out.as_deref().or(cfg.out_path.as_deref()))?;
    Ok(true)
}

fn sweep_row(index: usize, label: String, doc: &Document, tol: Option<f64>) -> SweepRow {
    let cfg = match RunConfig::from_document(doc) {
        Ok(cfg) => cfg,
        Err(e) => {
            return SweepRow {
                index,
                label,
                epsilon: 0,
                n: 0,
                summary: None,
                error: Some(e.to_string()),
            };
        }
    };
    let tol = tol.unwrap_or(cfg.tol);
    let result = cfg.build_base().and_then(|base| {
        let profile = cfg.build_profile()?;
        verify_theorem(&base, &profile, &cfg.s_range.grid(), tol).map_err(|e| anyhow!("{e}"))
    });
    let (summary, error) = match result {
        Ok(s) => (Some(s), None),
        Err(e) => (None, Some(e.to_string())),
    };
    SweepRow {
        index,
        label,
        epsilon: cfg.sf.epsilon(),
        n: cfg.sf.n(),
        summary,
        error,
    }
}

fn run_sweep(cli: &Cli, path: &Path) -> anyhow::Result<bool> {
    let doc = Document::from_path(path)?;
    let docs = doc.expand();
    // output options come from the first point; they are not swept
    let first = RunConfig::from_document(&docs[0]).ok();
    let rows: Vec<SweepRow> = pool(cli.jobs)?.install(|| {
        docs.par_iter()
            .enumerate()
            .map(|(i, d)| sweep_row(i, d.label(&doc), d, cli.tol))
            .collect()
    });
    let format = cli
        .format
        .or(first.as_ref().and_then(|c| c.out_format))
        .unwrap_or_default();
    let bytes = output::render_sweep(&rows, format)?;
    let out = cli.out.clone().or(first.and_then(|c| c.out_path));
    output::emit(&bytes, out.as_deref())?;
    for r in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "config {} ({}): {}",
            r.index,
            r.label,
            r.error.as_deref().unwrap_or("")
        );
    }
    let violations = rows
        .iter()
        .filter(|r| {
            r.summary
                .as_ref()
                .is_some_and(|s| s.status == TheoremStatus::Violation)
        })
        .count();
    if violations > 0 {
        eprintln!(
            "{violations} configuration(s) are Einstein without constant sectional curvature"
        );
    }
    Ok(violations == 0 && rows.iter().all(|r| r.error.is_none()))
}

fn run_rotation(
    cli: &Cli,
    epsilon: i32,
    n: usize,
    c: f64,
    r: f64,
    s_range: &SRange,
) -> anyhow::Result<bool> {
    let sf = SpaceForm::new(epsilon, n)?;
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    let out = construct_constant_curvature_rotation(sf, c, r, &s_range.grid(), tol)?;
    let rows: Vec<ReportRow> = out
        .frames
        .iter()
        .zip(&out.reports)
        .map(|(fd, rep): (&FrameData, _)| ReportRow::new(fd, rep))
        .collect();
    let bytes = output::render_report(&rows, n, cli.format.unwrap_or_default())?;
    output::emit(&bytes, cli.out.as_deref())?;
    Ok(true)
}

fn run_verify(cli: &Cli, suite: &str, seed: u64) -> anyhow::Result<bool> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    let reports = pool(cli.jobs)?.install(|| {
        suites
            .par_iter()
            .map(|&s| run_suite(s, seed))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let bytes = output::render_verify(&reports, seed, cli.format.unwrap_or(OutFormat::Json))?;
    output::emit(&bytes, cli.out.as_deref())?;
    for r in &reports {
        for c in r.checks.iter().filter(|c| !c.passed) {
            eprintln!(
                "FAIL {}: {} (value {:e}, threshold {:e})",
                r.suite, c.name, c.value, c.threshold
            );
        }
    }
    Ok(reports.iter().all(|r| r.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(tol) = cli.tol {
        if !(tol > 0.0) {
            eprintln!("error: --tol must be > 0, got {tol}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Report { config } => run_report(&cli, config),
        Command::Sweep { config } => run_sweep(&cli, config),
        Command::Rotation {
            epsilon,
            n,
            c,
            r,
            s_range,
        } => run_rotation(&cli, *epsilon, *n, *c, *r, s_range),
        Command::Verify { suite, seed } => run_verify(&cli, suite, *seed),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
