//! Space forms `Q^n(eps)` and the sign-parametric trigonometric kernel.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// The ambient factor `Q^n(eps)`: the unit sphere for `eps = +1`, hyperbolic
/// space for `eps = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceForm {
    epsilon: i32,
    n: usize,
}

impl SpaceForm {
    pub fn new(epsilon: i32, n: usize) -> Result<Self> {
        if epsilon != 1 && epsilon != -1 {
            return Err(GeomError::Domain(format!(
                "epsilon must be ±1, got {epsilon}"
            )));
        }
        if n < 2 {
            return Err(GeomError::Domain(format!(
                "dimension n must be >= 2, got {n}"
            )));
        }
        Ok(Self { epsilon, n })
    }

    pub fn sphere(n: usize) -> Result<Self> {
        Self::new(1, n)
    }

    pub fn hyperbolic(n: usize) -> Result<Self> {
        Self::new(-1, n)
    }

    pub fn epsilon(&self) -> i32 {
        self.epsilon
    }

    /// `eps` as a float, for use inside curvature formulas.
    pub fn eps(&self) -> f64 {
        f64::from(self.epsilon)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_sphere(&self) -> bool {
        self.epsilon == 1
    }

    /// Same sign, different dimension.
    pub fn with_dim(&self, n: usize) -> Result<Self> {
        Self::new(self.epsilon, n)
    }
}

/// `(C_eps(s), S_eps(s))`: `(cos s, sin s)` on the sphere and
/// `(cosh s, sinh s)` on hyperbolic space.
///
/// Satisfies `C^2 + eps S^2 = 1`, `S' = C` and `C' = -eps S`.
pub fn eps_trig(sf: SpaceForm, s: f64) -> (f64, f64) {
    if sf.is_sphere() {
        (s.cos(), s.sin())
    } else {
        (s.cosh(), s.sinh())
    }
}

/// Inner product of the model space `E^{n+2}` (sphere) or `L^{n+2}`
/// (hyperbolic, first coordinate timelike).
pub fn ambient_inner(sf: SpaceForm, u: &[f64], v: &[f64]) -> Result<f64> {
    let dim = sf.n() + 2;
    for w in [u, v] {
        if w.len() != dim {
            return Err(GeomError::Shape {
                expected: dim,
                got: w.len(),
            });
        }
    }
    let euclid: f64 = u.iter().zip(v).skip(1).map(|(a, b)| a * b).sum();
    Ok(euclid + sf.eps() * u[0] * v[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(dim: usize, k: usize) -> Vec<f64> {
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        e
    }

    #[test]
    fn trig_identity_at_zero() {
        for sf in [
            SpaceForm::sphere(4).unwrap(),
            SpaceForm::hyperbolic(4).unwrap(),
        ] {
            assert_eq!(eps_trig(sf, 0.0), (1.0, 0.0));
        }
    }

    #[test]
    fn trig_at_third_of_pi() {
        let (c, s) = eps_trig(SpaceForm::sphere(3).unwrap(), std::f64::consts::FRAC_PI_3);
        assert!((c - 0.5).abs() < 1e-15);
        assert!((s - 0.866_025_403_784_438_6).abs() < 1e-15);
    }

    #[test]
    fn inner_products_on_basis_vectors() {
        let sph = SpaceForm::sphere(3).unwrap();
        let hyp = SpaceForm::hyperbolic(3).unwrap();
        let e1 = unit(5, 0);
        let e2 = unit(5, 1);
        assert_eq!(ambient_inner(sph, &e1, &e1).unwrap(), 1.0);
        assert_eq!(ambient_inner(hyp, &e1, &e1).unwrap(), -1.0);
        assert_eq!(ambient_inner(hyp, &e1, &e2).unwrap(), 0.0);
    }

    #[test]
    fn inner_rejects_wrong_length() {
        let sf = SpaceForm::sphere(3).unwrap();
        let err = ambient_inner(sf, &[1.0; 4], &[1.0; 5]).unwrap_err();
        assert_eq!(
            err,
            GeomError::Shape {
                expected: 5,
                got: 4
            }
        );
    }

    #[test]
    fn space_form_validation() {
        assert!(SpaceForm::new(0, 4).is_err());
        assert!(SpaceForm::new(2, 4).is_err());
        assert!(SpaceForm::new(1, 1).is_err());
    }

    #[test]
    fn hyperboloid_point_has_norm_minus_one() {
        let sf = SpaceForm::hyperbolic(2).unwrap();
        let (c, s) = eps_trig(sf, 0.7);
        // (cosh t, sinh t, 0) lies on H^2; append the R coordinate.
        let x = [c, s, 0.0, 3.0];
        let xr = [c, s, 0.0, 0.0];
        assert!((ambient_inner(sf, &xr, &xr).unwrap() + 1.0).abs() < 1e-12);
        assert!(ambient_inner(sf, &x, &x).unwrap() > 0.0);
    }

    proptest! {
        #[test]
        fn pythagorean_identity(s in -3.0f64..3.0, sphere in any::<bool>()) {
            let sf = SpaceForm::new(if sphere { 1 } else { -1 }, 4).unwrap();
            let (c, sn) = eps_trig(sf, s);
            let scale = c.abs().max(1.0).powi(2);
            prop_assert!((c * c + sf.eps() * sn * sn - 1.0).abs() < 1e-12 * scale);
        }

        #[test]
        fn derivative_relations(s in -2.0f64..2.0, sphere in any::<bool>()) {
            let sf = SpaceForm::new(if sphere { 1 } else { -1 }, 4).unwrap();
            let h = 1e-4;
            let (cp, sp) = eps_trig(sf, s + h);
            let (cm, sm) = eps_trig(sf, s - h);
            let (c, sn) = eps_trig(sf, s);
            let ds = (sp - sm) / (2.0 * h);
            let dc = (cp - cm) / (2.0 * h);
            // central differences: error ~ h^2 |f'''| / 6, |f'''| <= cosh(2)
            let tol = h * h * 4.0;
            prop_assert!((ds - c).abs() < tol);
            prop_assert!((dc + sf.eps() * sn).abs() < tol);
        }
    }
}
