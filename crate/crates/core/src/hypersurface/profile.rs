//! Height profiles `a(s)` with strictly positive derivative.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::spline::CubicSpline;
use crate::ambient::SpaceForm;
use crate::base_catalog::parallel_curvature;
use crate::error::{GeomError, Result};

/// Closed-form profile families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum AnalyticProfile {
    /// `a = alpha s + beta`, `alpha > 0`.
    Linear { alpha: f64, beta: f64 },
    /// `a = c2 s^2 + c1 s + c0`.
    Quadratic { c0: f64, c1: f64, c2: f64 },
    /// `a = amplitude exp(rate s) + offset`.
    Exponential {
        amplitude: f64,
        rate: f64,
        offset: f64,
    },
    /// `a = amplitude sinh(rate s)`.
    Sinh { amplitude: f64, rate: f64 },
    /// Normal at constant angle to the vertical: `a = tan(angle) s`.
    ConstantAngle { angle: f64 },
    /// Profile whose tangent projection is `|T|(s) = slope / lambda^s(s)` for
    /// a single-curvature base `lambda_g`. Used to build hypersurfaces of
    /// constant sectional curvature.
    Rotation(RotationProfile),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationProfile {
    pub sf: SpaceForm,
    pub slope: f64,
    pub base_curvature: f64,
    /// Point where `a` vanishes.
    pub origin: f64,
}

impl RotationProfile {
    /// `(|T|, d|T|/ds)` in closed form, using `d lambda^s / ds = eps + (lambda^s)^2`.
    pub fn t_norm_and_derivative(&self, s: f64) -> Result<(f64, f64)> {
        let lam = parallel_curvature(self.base_curvature, self.sf, s)?;
        if lam == 0.0 {
            return Err(GeomError::Domain(format!(
                "parallel curvature vanishes at s = {s}; |T| is unbounded"
            )));
        }
        let t = self.slope / lam;
        let dt = -self.slope * (self.sf.eps() + lam * lam) / (lam * lam);
        Ok((t, dt))
    }

    fn derivatives(&self, s: f64) -> Result<(f64, f64)> {
        let (t, dt) = self.t_norm_and_derivative(s)?;
        if !(t > 0.0 && t < 1.0) {
            return Err(GeomError::Domain(format!(
                "|T| = {t} leaves (0, 1) at s = {s}"
            )));
        }
        let nu2 = 1.0 - t * t;
        Ok((t / nu2.sqrt(), dt / nu2.powf(1.5)))
    }

    fn height(&self, s: f64) -> Result<f64> {
        // composite Simpson on a' from the origin
        const PANELS: usize = 512;
        let h = (s - self.origin) / PANELS as f64;
        if h == 0.0 {
            return Ok(0.0);
        }
        let mut acc = self.derivatives(self.origin)?.0 + self.derivatives(s)?.0;
        for k in 1..PANELS {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * self.derivatives(self.origin + h * k as f64)?.0;
        }
        Ok(acc * h / 3.0)
    }
}

impl AnalyticProfile {
    fn eval(&self, s: f64) -> Result<(f64, f64, f64)> {
        Ok(match *self {
            AnalyticProfile::Linear { alpha, beta } => (alpha * s + beta, alpha, 0.0),
            AnalyticProfile::Quadratic { c0, c1, c2 } => {
                (c2 * s * s + c1 * s + c0, 2.0 * c2 * s + c1, 2.0 * c2)
            }
            AnalyticProfile::Exponential {
                amplitude,
                rate,
                offset,
            } => {
                let e = amplitude * (rate * s).exp();
                (e + offset, rate * e, rate * rate * e)
            }
            AnalyticProfile::Sinh { amplitude, rate } => {
                let x = rate * s;
                (
                    amplitude * x.sinh(),
                    amplitude * rate * x.cosh(),
                    amplitude * rate * rate * x.sinh(),
                )
            }
            AnalyticProfile::ConstantAngle { angle } => {
                let slope = angle.tan();
                (slope * s, slope, 0.0)
            }
            AnalyticProfile::Rotation(rot) => {
                let (a1, a2) = rot.derivatives(s)?;
                (rot.height(s)?, a1, a2)
            }
        })
    }

    /// `(a', a'')` without evaluating `a`, which needs quadrature for
    /// [`AnalyticProfile::Rotation`].
    fn eval_derivatives(&self, s: f64) -> Result<(f64, f64)> {
        match self {
            AnalyticProfile::Rotation(rot) => rot.derivatives(s),
            other => other.eval(s).map(|(_, a1, a2)| (a1, a2)),
        }
    }

    fn check_parameters(&self) -> Result<()> {
        let bad = |msg: String| Err(GeomError::Invariant(msg));
        match *self {
            AnalyticProfile::Linear { alpha, .. } if !(alpha > 0.0) => {
                bad(format!("linear profile needs alpha > 0, got {alpha}"))
            }
            AnalyticProfile::Exponential {
                amplitude, rate, ..
            } if !(amplitude * rate > 0.0) => {
                bad("exponential profile needs amplitude * rate > 0".into())
            }
            AnalyticProfile::Sinh { amplitude, rate } if !(amplitude * rate > 0.0) => {
                bad("sinh profile needs amplitude * rate > 0".into())
            }
            AnalyticProfile::ConstantAngle { angle }
                if !(angle > 0.0 && angle < std::f64::consts::FRAC_PI_2) =>
            {
                bad(format!(
                    "constant-angle profile needs angle in (0, pi/2), got {angle}"
                ))
            }
            AnalyticProfile::Rotation(rot) if !(rot.slope > 0.0) => {
                bad("rotation profile needs a positive slope".into())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileRepr {
    Analytic(AnalyticProfile),
    Sampled(CubicSpline),
}

/// Height function on a closed interval, with `a'(s) > 0` throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    domain: (f64, f64),
    repr: ProfileRepr,
}

/// Interior probe points per unit interval used when checking `a' > 0`.
const POSITIVITY_PROBES: usize = 256;

impl Profile {
    pub fn analytic(family: AnalyticProfile, domain: (f64, f64)) -> Result<Self> {
        check_domain(domain)?;
        family.check_parameters()?;
        let profile = Self {
            domain,
            repr: ProfileRepr::Analytic(family),
        };
        let (lo, hi) = domain;
        for k in 0..POSITIVITY_PROBES {
            let s = lo + (hi - lo) * k as f64 / POSITIVITY_PROBES as f64;
            profile.require_positive_slope(s)?;
        }
        profile.require_positive_slope(hi)?;
        Ok(profile)
    }

    /// Cubic interpolant through `(s_k, a_k)`; `s` strictly increasing, at
    /// least 4 nodes.
    pub fn sampled(s: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        let spline = CubicSpline::new(s, a)?;
        let nodes = spline.nodes();
        let domain = (nodes[0], nodes[nodes.len() - 1]);
        let probes: Vec<f64> = nodes
            .windows(2)
            .flat_map(|w| (0..8).map(move |k| w[0] + (w[1] - w[0]) * k as f64 / 8.0))
            .chain(std::iter::once(domain.1))
            .collect();
        let profile = Self {
            domain,
            repr: ProfileRepr::Sampled(spline),
        };
        for s in probes {
            profile.require_positive_slope(s)?;
        }
        Ok(profile)
    }

    /// Reads a two-column CSV with header `s,a`.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| GeomError::Domain(format!("profile samples: {e}")))?
            .clone();
        if headers.len() != 2 || &headers[0] != "s" || &headers[1] != "a" {
            return Err(GeomError::Domain(format!(
                "profile samples: expected header `s,a`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut s = Vec::new();
        let mut a = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| GeomError::Domain(format!("profile samples: {e}")))?;
            let parse = |field: &str| {
                field.parse::<f64>().map_err(|_| {
                    GeomError::Domain(format!(
                        "profile samples line {}: cannot parse `{field}`",
                        line + 2
                    ))
                })
            };
            if rec.len() != 2 {
                return Err(GeomError::Domain(format!(
                    "profile samples line {}: expected 2 columns",
                    line + 2
                )));
            }
            s.push(parse(&rec[0])?);
            a.push(parse(&rec[1])?);
        }
        Self::sampled(s, a)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| GeomError::Domain(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(file)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn repr(&self) -> &ProfileRepr {
        &self.repr
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.domain.0 && s <= self.domain.1
    }

    /// `(a, a', a'')` at `s`.
    pub fn eval(&self, s: f64) -> Result<(f64, f64, f64)> {
        self.check_contains(s)?;
        match &self.repr {
            ProfileRepr::Analytic(f) => f.eval(s),
            ProfileRepr::Sampled(sp) => Ok(sp.eval(s)),
        }
    }

    pub fn a(&self, s: f64) -> Result<f64> {
        Ok(self.eval(s)?.0)
    }

    /// `(a', a'')` at `s`.
    pub fn derivatives(&self, s: f64) -> Result<(f64, f64)> {
        self.check_contains(s)?;
        match &self.repr {
            ProfileRepr::Analytic(f) => f.eval_derivatives(s),
            ProfileRepr::Sampled(sp) => {
                let (_, a1, a2) = sp.eval(s);
                Ok((a1, a2))
            }
        }
    }

    pub fn a1(&self, s: f64) -> Result<f64> {
        Ok(self.derivatives(s)?.0)
    }

    pub fn a2(&self, s: f64) -> Result<f64> {
        Ok(self.derivatives(s)?.1)
    }

    fn check_contains(&self, s: f64) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(GeomError::Domain(format!(
                "s = {s} outside profile domain [{}, {}]",
                self.domain.0, self.domain.1
            )))
        }
    }

    fn require_positive_slope(&self, s: f64) -> Result<()> {
        let d = self.a1(s)?;
        if d > 0.0 {
            Ok(())
        } else {
            Err(GeomError::Invariant(format!(
                "profile derivative a'({s}) = {d} is not positive"
            )))
        }
    }
}

fn check_domain((lo, hi): (f64, f64)) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(GeomError::Domain(format!(
            "invalid profile domain [{lo}, {hi}]"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_parameter_checks() {
        let d = (0.0, 1.0);
        assert!(Profile::analytic(
            AnalyticProfile::Linear {
                alpha: 0.0,
                beta: 1.0
            },
            d
        )
        .is_err());
        assert!(Profile::analytic(
            AnalyticProfile::Sinh {
                amplitude: -1.0,
                rate: 1.0
            },
            d
        )
        .is_err());
        assert!(Profile::analytic(AnalyticProfile::ConstantAngle { angle: 1.6 }, d).is_err());
        // a' = 2 s - 1 changes sign on [0, 1]
        let q = AnalyticProfile::Quadratic {
            c0: 0.0,
            c1: -1.0,
            c2: 1.0,
        };
        assert!(matches!(
            Profile::analytic(q, d),
            Err(GeomError::Invariant(_))
        ));
        assert!(Profile::analytic(q, (0.6, 2.0)).is_ok());
        assert!(Profile::analytic(
            AnalyticProfile::Linear {
                alpha: 1.0,
                beta: 0.0
            },
            (1.0, 1.0)
        )
        .is_err());
    }

    #[test]
    fn domain_is_enforced() {
        let p = Profile::analytic(
            AnalyticProfile::Linear {
                alpha: 1.0,
                beta: 0.0,
            },
            (0.0, 1.0),
        )
        .unwrap();
        assert!(p.a1(1.0).is_ok());
        assert!(matches!(p.a1(1.5), Err(GeomError::Domain(_))));
    }

    #[test]
    fn closed_form_derivatives() {
        let p = Profile::analytic(
            AnalyticProfile::Sinh {
                amplitude: 2.0,
                rate: 0.5,
            },
            (-1.0, 1.0),
        )
        .unwrap();
        let (a, a1, a2) = p.eval(0.4).unwrap();
        assert!((a - 2.0 * 0.2f64.sinh()).abs() < 1e-15);
        assert!((a1 - 0.2f64.cosh()).abs() < 1e-15);
        assert!((a2 - 0.5 * 0.2f64.sinh()).abs() < 1e-15);
        let p = Profile::analytic(
            AnalyticProfile::ConstantAngle {
                angle: std::f64::consts::FRAC_PI_4,
            },
            (0.0, 1.0),
        )
        .unwrap();
        assert!((p.a1(0.3).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_samples() {
        let text = "s,a\n0.0,0.0\n0.25,0.3\n0.5,0.65\n0.75,1.05\n1.0,1.5\n";
        let p = Profile::from_csv_reader(text.as_bytes()).unwrap();
        assert_eq!(p.domain(), (0.0, 1.0));
        assert!((p.a(0.5).unwrap() - 0.65).abs() < 1e-14);

        let bad_header = "t,a\n0,0\n1,1\n2,2\n3,3\n";
        assert!(Profile::from_csv_reader(bad_header.as_bytes()).is_err());
        let bad_value = "s,a\n0,0\n1,x\n2,2\n3,3\n";
        let err = Profile::from_csv_reader(bad_value.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 3"));
        let decreasing = "s,a\n0,3\n1,2\n2,1\n3,0\n";
        assert!(Profile::from_csv_reader(decreasing.as_bytes()).is_err());
        let unsorted = "s,a\n0,0\n2,1\n1,2\n3,3\n";
        assert!(Profile::from_csv_reader(unsorted.as_bytes()).is_err());
    }

    #[test]
    fn rotation_profile_closed_form_derivative() {
        let sf = SpaceForm::sphere(4).unwrap();
        let r: f64 = 0.5;
        let rot = RotationProfile {
            sf,
            slope: 1.0,
            base_curvature: 1.0 / r.tan(),
            origin: 0.0,
        };
        let (t, dt) = rot.t_norm_and_derivative(0.1).unwrap();
        assert!((t - (r - 0.1).tan()).abs() < 1e-12);
        let h = 1e-5;
        let fd = (rot.t_norm_and_derivative(0.1 + h).unwrap().0
            - rot.t_norm_and_derivative(0.1 - h).unwrap().0)
            / (2.0 * h);
        assert!((dt - fd).abs() < 1e-8);
        let p = Profile::analytic(AnalyticProfile::Rotation(rot), (-0.2, 0.4)).unwrap();
        assert_eq!(p.a(0.0).unwrap(), 0.0);
        // a is the integral of a'
        let fd_a = (p.a(0.2 + h).unwrap() - p.a(0.2 - h).unwrap()) / (2.0 * h);
        assert!((fd_a - p.a1(0.2).unwrap()).abs() < 1e-7);
    }
}
