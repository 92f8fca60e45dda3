use serde::Serialize;

use crate::ambient::SpaceForm;
use crate::base_catalog::{make_base, parallel_curvature, BaseKind};
use crate::curvature::{curvature_report, CurvatureReport};
use crate::error::{GeomError, Result};
use crate::hypersurface::{FrameData, RotationProfile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    pub s: f64,
    pub a: f64,
    pub a1: f64,
    pub a2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationSummary {
    pub target_curvature: f64,
    pub rho_expected: f64,
    pub max_einstein_defect: f64,
    pub max_k_spread: f64,
    pub max_rho_error: f64,
    pub max_k_error: f64,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationConstruction {
    pub sf: SpaceForm,
    /// `None` for the slice case `c = eps`.
    pub profile: Option<RotationProfile>,
    pub samples: Vec<ProfileSample>,
    pub frames: Vec<FrameData>,
    pub reports: Vec<CurvatureReport>,
    pub summary: RotationSummary,
}

/// Hypersurface of constant sectional curvature `c >= eps` over the parallel
/// family of a geodesic sphere of radius `r`.
///
/// All base curvatures are pinned to `mu = -sqrt(c - eps)`, so
/// `|T|(s) = sqrt(c - eps) / lambda^s(s)`. The curvature of the `T`
/// direction is `d|T|/ds`, differentiated in closed form.
pub fn construct_constant_curvature_rotation(
    sf: SpaceForm,
    c: f64,
    r: f64,
    grid: &[f64],
    tol: f64,
) -> Result<RotationConstruction> {
    let eps = sf.eps();
    if !(c >= eps) {
        return Err(GeomError::NoRealSolution(format!(
            "target curvature c = {c} is below eps = {eps}"
        )));
    }
    if grid.is_empty() {
        return Err(GeomError::Domain(
            "grid must contain at least one point".into(),
        ));
    }
    let n = sf.n();
    let base = make_base(sf, BaseKind::GeodesicSphere { radius: r })?;
    let lambda_g = base.curvatures()[0].value;
    let slope = (c - eps).sqrt();

    let (profile, samples, frames) = if slope < tol {
        let frames: Vec<FrameData> = grid.iter().map(|&s| FrameData::slice(n, s)).collect();
        let samples = grid
            .iter()
            .map(|&s| ProfileSample {
                s,
                a: 0.0,
                a1: 0.0,
                a2: 0.0,
            })
            .collect();
        (None, samples, frames)
    } else {
        let rot = RotationProfile {
            sf,
            slope,
            base_curvature: lambda_g,
            origin: grid[0],
        };
        let mut frames = Vec::with_capacity(grid.len());
        let mut samples = Vec::with_capacity(grid.len());
        for &s in grid {
            let lam = parallel_curvature(lambda_g, sf, s)?;
            let (t, dt) = rot.t_norm_and_derivative(s)?;
            if !(t > 0.0 && t < 1.0) {
                return Err(GeomError::Domain(format!(
                    "|T| = {t} at grid point s = {s} is outside (0, 1)"
                )));
            }
            let nu = (1.0 - t * t).sqrt();
            let mut t_components = vec![0.0; n];
            t_components[n - 1] = t;
            frames.push(FrameData::new(s, &[(-t * lam, n - 1)], dt, t_components)?);
            samples.push(ProfileSample {
                s,
                a: rot_height(&rot, s)?,
                a1: t / nu,
                a2: dt / nu.powi(3),
            });
        }
        (Some(rot), samples, frames)
    };

    let reports = frames
        .iter()
        .map(|fd| curvature_report(fd, sf))
        .collect::<Result<Vec<_>>>()?;
    let rho_expected = (n as f64 - 1.0) * c;
    let fold = |f: &dyn Fn(&CurvatureReport) -> f64| reports.iter().map(f).fold(0.0f64, f64::max);
    let max_einstein_defect = fold(&|r| r.einstein_defect);
    let max_k_spread = fold(&|r| r.k_spread);
    let max_rho_error = fold(&|r| (r.rho - rho_expected).abs());
    let max_k_error = fold(&|r| (r.k_max() - c).abs().max((r.k_min() - c).abs()));
    let summary = RotationSummary {
        target_curvature: c,
        rho_expected,
        max_einstein_defect,
        max_k_spread,
        max_rho_error,
        max_k_error,
        within_tolerance: max_einstein_defect <= tol && max_k_spread <= tol && max_rho_error <= tol,
    };
    Ok(RotationConstruction {
        sf,
        profile,
        samples,
        frames,
        reports,
        summary,
    })
}

fn rot_height(rot: &RotationProfile, s: f64) -> Result<f64> {
    use crate::hypersurface::{AnalyticProfile, Profile};
    if s == rot.origin {
        return Ok(0.0);
    }
    let domain = if s > rot.origin {
        (rot.origin, s)
    } else {
        (s, rot.origin)
    };
    Profile::analytic(AnalyticProfile::Rotation(*rot), domain)?.a(s)
}
