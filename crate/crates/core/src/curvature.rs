//! Intrinsic curvature of a hypersurface of `Q^n(eps) x R` in its principal
//! frame.
//!
//! The curvature tensor comes from the Gauss equation with
//! `R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`:
//!
//! ```text
//! <R(X,Y)Z,W> = eps ( <X,W><Y,Z> - <X,Z><Y,W>
//!                   + <X,T><Z,T><Y,W> + <Y,T><W,T><X,Z>
//!                   - <Y,T><Z,T><X,W> - <X,T><W,T><Y,Z> )
//!             + <SX,W><SY,Z> - <SX,Z><SY,W>
//! ```
//!
//! Frame indices are zero-based throughout: `0..n`, with `n - 1` the
//! direction of `T` for frames built from a profile.

use serde::Serialize;

use crate::ambient::SpaceForm;
use crate::error::{GeomError, Result};
use crate::hypersurface::FrameData;

/// Expanded principal frame: per-direction curvature and `T` coordinates.
struct Frame<'a> {
    eps: f64,
    lambda: Vec<f64>,
    t: &'a [f64],
}

impl<'a> Frame<'a> {
    fn new(fd: &'a FrameData, sf: SpaceForm) -> Result<Self> {
        if fd.dim() != sf.n() {
            return Err(GeomError::Shape {
                expected: sf.n(),
                got: fd.dim(),
            });
        }
        Ok(Self {
            eps: sf.eps(),
            lambda: fd.principal_curvatures(),
            t: fd.t_components(),
        })
    }

    fn n(&self) -> usize {
        self.lambda.len()
    }

    fn check(&self, idx: &[usize]) -> Result<()> {
        match idx.iter().find(|&&i| i >= self.n()) {
            Some(&index) => Err(GeomError::Index { index, n: self.n() }),
            None => Ok(()),
        }
    }

    fn riemann(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let t = self.t;
        let metric = d(i, l) * d(j, k) - d(i, k) * d(j, l);
        let tangent = t[i] * t[k] * d(j, l) + t[j] * t[l] * d(i, k)
            - t[j] * t[k] * d(i, l)
            - t[i] * t[l] * d(j, k);
        self.eps * (metric + tangent) + self.lambda[i] * self.lambda[j] * metric
    }

    fn ricci_closed(&self, i: usize, j: usize) -> f64 {
        let n = self.n() as f64;
        let t2: f64 = self.t.iter().map(|x| x * x).sum();
        let trace: f64 = self.lambda.iter().sum();
        let diag = if i == j {
            self.eps * (n - 1.0 - t2) + trace * self.lambda[i] - self.lambda[i] * self.lambda[j]
        } else {
            0.0
        };
        diag + self.eps * (2.0 - n) * self.t[i] * self.t[j]
    }

    fn ricci_contracted(&self, i: usize, j: usize) -> f64 {
        (0..self.n()).map(|k| self.riemann(k, i, j, k)).sum()
    }
}

/// `<R(e_i,e_j)e_k,e_l>`.
pub fn gauss_component(
    fd: &FrameData,
    sf: SpaceForm,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> Result<f64> {
    let frame = Frame::new(fd, sf)?;
    frame.check(&[i, j, k, l])?;
    Ok(frame.riemann(i, j, k, l))
}

/// Ricci tensor from the closed form
/// `[eps(n-1-|T|^2) + nH l_i - l_i l_j] delta_ij + eps(2-n) t_i t_j`.
pub fn ricci_closed_form(fd: &FrameData, sf: SpaceForm, i: usize, j: usize) -> Result<f64> {
    let frame = Frame::new(fd, sf)?;
    frame.check(&[i, j])?;
    Ok(frame.ricci_closed(i, j))
}

/// Ricci tensor as the trace of `X -> R(X, e_i) e_j`, summed from
/// [`gauss_component`]. Independent of [`ricci_closed_form`].
pub fn ricci_by_contraction(fd: &FrameData, sf: SpaceForm, i: usize, j: usize) -> Result<f64> {
    let frame = Frame::new(fd, sf)?;
    frame.check(&[i, j])?;
    Ok(frame.ricci_contracted(i, j))
}

/// Sectional curvature of the plane `e_i ^ e_j`.
pub fn sectional(fd: &FrameData, sf: SpaceForm, i: usize, j: usize) -> Result<f64> {
    let frame = Frame::new(fd, sf)?;
    frame.check(&[i, j])?;
    if i == j {
        return Err(GeomError::DegeneratePlane(i));
    }
    Ok(frame.riemann(i, j, j, i))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub n: usize,
    pub ric_diag: Vec<f64>,
    pub ric_offdiag_max: f64,
    /// `K_ij` for `i < j`, row-major: `(0,1), (0,2), ..., (n-2,n-1)`.
    pub sectional: Vec<f64>,
    pub rho: f64,
    pub einstein_defect: f64,
    pub k_spread: f64,
}

impl CurvatureReport {
    /// `K_ij` looked up in the packed table.
    pub fn sectional_at(&self, i: usize, j: usize) -> Option<f64> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if i == j || j >= self.n {
            return None;
        }
        // rows 0..i contribute (n-1) + (n-2) + ... + (n-i) entries
        let offset = i * (2 * self.n - i - 1) / 2;
        self.sectional.get(offset + (j - i - 1)).copied()
    }

    pub fn k_min(&self) -> f64 {
        self.sectional.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn k_max(&self) -> f64 {
        self.sectional
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Average sectional curvature; equals `K` when `k_spread` is small.
    pub fn k_mean(&self) -> f64 {
        self.sectional.iter().sum::<f64>() / self.sectional.len() as f64
    }
}

pub fn curvature_report(fd: &FrameData, sf: SpaceForm) -> Result<CurvatureReport> {
    let frame = Frame::new(fd, sf)?;
    let n = frame.n();
    let ric: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| frame.ricci_closed(i, j)).collect())
        .collect();
    let ric_diag: Vec<f64> = (0..n).map(|i| ric[i][i]).collect();
    let rho = ric_diag.iter().sum::<f64>() / n as f64;
    let mut ric_offdiag_max = 0.0f64;
    let mut einstein_defect = 0.0f64;
    for (i, row) in ric.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if i == j {
                einstein_defect = einstein_defect.max((v - rho).abs());
            } else {
                ric_offdiag_max = ric_offdiag_max.max(v.abs());
                einstein_defect = einstein_defect.max(v.abs());
            }
        }
    }
    let sectional: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| frame.riemann(i, j, j, i))
        .collect();
    let k_max = sectional.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k_min = sectional.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(CurvatureReport {
        n,
        ric_diag,
        ric_offdiag_max,
        sectional,
        rho,
        einstein_defect,
        k_spread: k_max - k_min,
    })
}
