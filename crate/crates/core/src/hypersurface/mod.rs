//! The product-space hypersurface `f(x, s) = g_s(x) + a(s) e_{n+2}` and its
//! pointwise first-order data.
//!
//! With `a' > 0` the tangent projection `T` of the vertical field is a
//! principal direction. In the principal frame `e_1, ..., e_n` (with `e_n`
//! along `T`):
//!
//! ```text
//! |T|      = a' / sqrt(1 + a'^2)
//! nu       = 1 / sqrt(1 + a'^2)
//! lambda_i = -|T| lambda_i^s            (1 <= i <= n - 1)
//! lambda_n = a'' / (1 + a'^2)^(3/2)     (= d|T|/ds)
//! ```

mod profile;
mod spline;

use serde::Serialize;

pub use profile::{AnalyticProfile, Profile, ProfileRepr, RotationProfile};
pub use spline::CubicSpline;

use crate::base_catalog::{IsoparametricBase, PrincipalCurvature};
use crate::error::{GeomError, Result};
use crate::DEFAULT_TOL;

/// Snapshot of the principal-frame data of a hypersurface at one point.
///
/// `lambdas` are the curvatures of the directions `e_1..e_{n-1}` grouped with
/// multiplicities; `lambda_n` belongs to `e_n`. `t_components` holds the
/// coordinates of `T` in the expanded frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameData {
    s: f64,
    lambdas: Vec<PrincipalCurvature>,
    lambda_n: f64,
    t_norm: f64,
    nu: f64,
    mean_curvature: f64,
    t_components: Vec<f64>,
}

impl FrameData {
    /// Frame from arbitrary principal data. `T` may point in any direction;
    /// this is how frames outside the parallel-family ansatz are modelled.
    pub fn new(
        s: f64,
        lambdas: &[(f64, usize)],
        lambda_n: f64,
        t_components: Vec<f64>,
    ) -> Result<Self> {
        let lambdas: Vec<PrincipalCurvature> = lambdas
            .iter()
            .copied()
            .map(PrincipalCurvature::from)
            .collect();
        if lambdas.iter().any(|c| c.multiplicity == 0) {
            return Err(GeomError::Invariant("multiplicities must be >= 1".into()));
        }
        let n = lambdas.iter().map(|c| c.multiplicity).sum::<usize>() + 1;
        if t_components.len() != n {
            return Err(GeomError::Shape {
                expected: n,
                got: t_components.len(),
            });
        }
        let t2: f64 = t_components.iter().map(|t| t * t).sum();
        if !(t2 < 1.0) {
            return Err(GeomError::Invariant(format!(
                "|T|^2 = {t2} must be < 1 (angle function must not vanish)"
            )));
        }
        Ok(Self::assemble(
            s,
            lambdas,
            lambda_n,
            t2.sqrt(),
            (1.0 - t2).sqrt(),
            t_components,
        ))
    }

    /// A point of a slice `Q^n(eps) x {t0}`: totally geodesic, `T = 0`.
    pub fn slice(n: usize, s: f64) -> Self {
        assert!(n >= 2, "slice dimension must be >= 2");
        Self::assemble(
            s,
            vec![PrincipalCurvature {
                value: 0.0,
                multiplicity: n - 1,
            }],
            0.0,
            0.0,
            1.0,
            vec![0.0; n],
        )
    }

    fn assemble(
        s: f64,
        lambdas: Vec<PrincipalCurvature>,
        lambda_n: f64,
        t_norm: f64,
        nu: f64,
        t_components: Vec<f64>,
    ) -> Self {
        let n = t_components.len();
        let trace: f64 = lambdas
            .iter()
            .map(|c| c.multiplicity as f64 * c.value)
            .sum::<f64>()
            + lambda_n;
        Self {
            s,
            lambdas,
            lambda_n,
            t_norm,
            nu,
            mean_curvature: trace / n as f64,
            t_components,
        }
    }

    /// Copy with a different `lambda_n`; the mean curvature is recomputed.
    pub fn with_lambda_n(&self, lambda_n: f64) -> Self {
        Self::assemble(
            self.s,
            self.lambdas.clone(),
            lambda_n,
            self.t_norm,
            self.nu,
            self.t_components.clone(),
        )
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn lambdas(&self) -> &[PrincipalCurvature] {
        &self.lambdas
    }

    pub fn lambda_n(&self) -> f64 {
        self.lambda_n
    }

    pub fn t_norm(&self) -> f64 {
        self.t_norm
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn mean_curvature(&self) -> f64 {
        self.mean_curvature
    }

    pub fn t_components(&self) -> &[f64] {
        &self.t_components
    }

    /// Hypersurface dimension `n`.
    pub fn dim(&self) -> usize {
        self.t_components.len()
    }

    /// All `n` principal curvatures, base directions first, `lambda_n` last.
    pub fn principal_curvatures(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        for c in &self.lambdas {
            out.extend(std::iter::repeat_n(c.value, c.multiplicity));
        }
        out.push(self.lambda_n);
        out
    }
}

/// `(|T|, nu)` at `s`.
pub fn t_norm_angle(profile: &Profile, s: f64) -> Result<(f64, f64)> {
    let slope = profile.a1(s)?;
    if !(slope > 0.0) {
        return Err(GeomError::Invariant(format!(
            "profile derivative a'({s}) = {slope} is not positive"
        )));
    }
    let root = slope.hypot(1.0);
    Ok((slope / root, 1.0 / root))
}

pub fn frame_data(base: &IsoparametricBase, profile: &Profile, s: f64) -> Result<FrameData> {
    frame_data_with_tol(base, profile, s, DEFAULT_TOL)
}

pub fn frame_data_with_tol(
    base: &IsoparametricBase,
    profile: &Profile,
    s: f64,
    tol: f64,
) -> Result<FrameData> {
    let a2 = profile.a2(s)?;
    let (t_norm, nu) = t_norm_angle(profile, s)?;
    let lambdas = base
        .parallel_curvatures_with_tol(s, tol)?
        .into_iter()
        .map(|c| PrincipalCurvature {
            value: -t_norm * c.value,
            multiplicity: c.multiplicity,
        })
        .collect();
    let lambda_n = a2 * nu.powi(3);
    let n = base.space_form().n();
    let mut t_components = vec![0.0; n];
    t_components[n - 1] = t_norm;
    Ok(FrameData::assemble(
        s,
        lambdas,
        lambda_n,
        t_norm,
        nu,
        t_components,
    ))
}

/// `|lambda_n(s) - (|T|(s + h) - |T|(s - h)) / 2h|`; `O(h^2)` for smooth profiles.
pub fn check_kn_ode(base: &IsoparametricBase, profile: &Profile, s: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(GeomError::Domain(format!("step h = {h} must be positive")));
    }
    let fd = frame_data(base, profile, s)?;
    let plus = frame_data(base, profile, s + h)?.t_norm();
    let minus = frame_data(base, profile, s - h)?.t_norm();
    Ok((fd.lambda_n() - (plus - minus) / (2.0 * h)).abs())
}
