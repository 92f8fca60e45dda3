use serde::Serialize;

use crate::ambient::SpaceForm;
use crate::base_catalog::IsoparametricBase;
use crate::curvature::{curvature_report, CurvatureReport};
use crate::error::Result;
use crate::hypersurface::{frame_data_with_tol, FrameData, Profile};

/// Factor between the Einstein tolerance and the tolerance on sectional
/// curvature spread and grid constancy.
pub const K_TOL_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremStatus {
    /// Some grid point is not Einstein; the theorem says nothing.
    NotEinstein,
    /// Einstein everywhere and of constant sectional curvature.
    ConstantCurvature,
    /// Einstein everywhere but the sectional curvature is not constant.
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremSummary {
    pub points: usize,
    pub status: TheoremStatus,
    pub passed: bool,
    pub tol: f64,
    pub max_einstein_defect: f64,
    pub max_k_spread: f64,
    /// `max rho - min rho` over the grid.
    pub rho_variation: f64,
    /// Variation of the mean sectional curvature over the grid.
    pub k_variation: f64,
    /// `max |K - rho/(n-1)|` over grid points and planes.
    pub k_rho_mismatch: f64,
    pub rho_mean: f64,
    pub k_mean: f64,
    /// Grid point with the largest offending value (Einstein defect when not
    /// Einstein, sectional spread otherwise); ties go to the smallest `s`.
    pub worst_s: Option<f64>,
    pub worst_value: f64,
}

/// Desk-scale check of "Einstein implies constant sectional curvature" along
/// a grid of the parallel parameter.
pub fn verify_theorem(
    base: &IsoparametricBase,
    profile: &Profile,
    grid: &[f64],
    tol: f64,
) -> Result<TheoremSummary> {
    let frames = grid
        .iter()
        .map(|&s| frame_data_with_tol(base, profile, s, tol))
        .collect::<Result<Vec<_>>>()?;
    verify_theorem_frames(&frames, base.space_form(), tol)
}

pub fn verify_theorem_frames(
    frames: &[FrameData],
    sf: SpaceForm,
    tol: f64,
) -> Result<TheoremSummary> {
    let reports = frames
        .iter()
        .map(|fd| curvature_report(fd, sf))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, &CurvatureReport)> =
        frames.iter().map(|f| f.s()).zip(reports.iter()).collect();
    Ok(summarize(&points, sf, tol))
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if lo.is_finite() {
        hi - lo
    } else {
        0.0
    }
}

/// `(s, value)` with the largest value; ties resolved towards smaller `s`.
fn worst_point(
    points: &[(f64, &CurvatureReport)],
    key: impl Fn(&CurvatureReport) -> f64,
) -> (Option<f64>, f64) {
    let mut best: Option<(f64, f64)> = None;
    for &(s, r) in points {
        let v = key(r);
        best = match best {
            Some((bs, bv)) if bv > v || (bv == v && bs <= s) => Some((bs, bv)),
            _ => Some((s, v)),
        };
    }
    match best {
        Some((s, v)) => (Some(s), v),
        None => (None, 0.0),
    }
}

fn summarize(points: &[(f64, &CurvatureReport)], sf: SpaceForm, tol: f64) -> TheoremSummary {
    let k_tol = K_TOL_FACTOR * tol;
    let count = points.len();
    let max_of = |f: &dyn Fn(&CurvatureReport) -> f64| {
        points.iter().map(|(_, r)| f(r)).fold(0.0f64, f64::max)
    };
    let max_einstein_defect = max_of(&|r| r.einstein_defect);
    let max_k_spread = max_of(&|r| r.k_spread);
    let rho_variation = spread(points.iter().map(|(_, r)| r.rho));
    let k_variation = spread(points.iter().map(|(_, r)| r.k_mean()));
    let denom = sf.n() as f64 - 1.0;
    let k_rho_mismatch = max_of(&|r| {
        let k0 = r.rho / denom;
        (r.k_max() - k0).abs().max((r.k_min() - k0).abs())
    });
    let mean = |f: &dyn Fn(&CurvatureReport) -> f64| {
        if count == 0 {
            0.0
        } else {
            points.iter().map(|(_, r)| f(r)).sum::<f64>() / count as f64
        }
    };
    let einstein = points.iter().all(|(_, r)| r.einstein_defect < tol);
    let (status, (worst_s, worst_value)) = if !einstein {
        (
            TheoremStatus::NotEinstein,
            worst_point(points, |r| r.einstein_defect),
        )
    } else {
        let constant = max_k_spread < k_tol
            && rho_variation < k_tol
            && k_variation < k_tol
            && k_rho_mismatch < k_tol;
        let status = if constant {
            TheoremStatus::ConstantCurvature
        } else {
            TheoremStatus::Violation
        };
        (status, worst_point(points, |r| r.k_spread))
    };
    TheoremSummary {
        points: count,
        status,
        passed: status != TheoremStatus::Violation,
        tol,
        max_einstein_defect,
        max_k_spread,
        rho_variation,
        k_variation,
        k_rho_mismatch,
        rho_mean: mean(&|r| r.rho),
        k_mean: mean(&|r| r.k_mean()),
        worst_s,
        worst_value,
    }
}
