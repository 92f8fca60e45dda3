#![allow(clippy::needless_range_loop)]

use prodform_core::{
    curvature_report, gauss_component, ricci_by_contraction, ricci_closed_form, sectional,
    FrameData, GeomError, SpaceForm,
};
use proptest::prelude::*;

fn frame_strategy() -> impl Strategy<Value = (SpaceForm, FrameData)> {
    (4usize..=8, prop::bool::ANY).prop_flat_map(|(n, sphere)| {
        (
            prop::collection::vec(-3.0f64..3.0, n - 1),
            -3.0f64..3.0,
            prop::collection::vec(-1.0f64..1.0, n),
            0.0f64..0.99,
        )
            .prop_map(move |(lams, ln, dir, len)| {
                let sf = if sphere {
                    SpaceForm::sphere(n)
                } else {
                    SpaceForm::hyperbolic(n)
                }
                .unwrap();
                let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-9);
                let t = dir.iter().map(|x| x / norm * len).collect();
                let pairs: Vec<(f64, usize)> = lams.into_iter().map(|l| (l, 1)).collect();
                (sf, FrameData::new(0.0, &pairs, ln, t).unwrap())
            })
    })
}

/// Invariant form of the Gauss equation evaluated on arbitrary vectors.
fn gauss_oracle(fd: &FrameData, sf: SpaceForm, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let lam = fd.principal_curvatures();
    let shape = |a: &[f64]| a.iter().zip(&lam).map(|(p, l)| p * l).collect::<Vec<_>>();
    let t = fd.t_components();
    let (xt, yt, zt, wt) = (dot(x, t), dot(y, t), dot(z, t), dot(w, t));
    sf.eps()
        * (dot(x, w) * dot(y, z) - dot(x, z) * dot(y, w)
            + xt * zt * dot(y, w)
            + yt * wt * dot(x, z)
            - yt * zt * dot(x, w)
            - xt * wt * dot(y, z))
        + dot(&shape(x), w) * dot(&shape(y), z)
        - dot(&shape(x), z) * dot(&shape(y), w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn components_match_invariant_gauss_form(
        (sf, fd) in frame_strategy(),
        seed in prop::collection::vec(-1.0f64..1.0, 32),
    ) {
        let n = fd.dim();
        let v = |k: usize| (0..n).map(|i| seed[(k * 8 + i) % 32]).collect::<Vec<_>>();
        let (x, y, z, w) = (v(0), v(1), v(2), v(3));
        let mut sum = 0.0;
        for i in 0..n { for j in 0..n { for k in 0..n { for l in 0..n {
            sum += x[i] * y[j] * z[k] * w[l] * gauss_component(&fd, sf, i, j, k, l).unwrap();
        }}}}
        let want = gauss_oracle(&fd, sf, &x, &y, &z, &w);
        prop_assert!((sum - want).abs() < 1e-10 * want.abs().max(1.0), "{sum} vs {want}");
    }

    #[test]
    fn algebraic_curvature_identities((sf, fd) in frame_strategy()) {
        let n = fd.dim();
        let r = |i, j, k, l| gauss_component(&fd, sf, i, j, k, l).unwrap();
        for i in 0..n { for j in 0..n { for k in 0..n { for l in 0..n {
            let v = r(i, j, k, l);
            prop_assert!((v + r(j, i, k, l)).abs() < 1e-12);
            prop_assert!((v + r(i, j, l, k)).abs() < 1e-12);
            prop_assert!((v - r(k, l, i, j)).abs() < 1e-12);
            prop_assert!((v + r(j, k, i, l) + r(k, i, j, l)).abs() < 1e-12);
        }}}}
    }

    #[test]
    fn ricci_closed_form_equals_contraction((sf, fd) in frame_strategy()) {
        let n = fd.dim();
        for i in 0..n {
            for j in 0..n {
                let a = ricci_closed_form(&fd, sf, i, j).unwrap();
                let b = ricci_by_contraction(&fd, sf, i, j).unwrap();
                prop_assert!((a - b).abs() < 1e-10);
                prop_assert!((a - ricci_closed_form(&fd, sf, j, i).unwrap()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn report_is_consistent_with_components((sf, fd) in frame_strategy()) {
        let n = fd.dim();
        let rep = curvature_report(&fd, sf).unwrap();
        let trace: f64 = (0..n).map(|i| ricci_closed_form(&fd, sf, i, i).unwrap()).sum();
        prop_assert!((rep.rho - trace / n as f64).abs() < 1e-12);
        // rho is the mean of the sectional curvatures times (n - 1)
        let ksum: f64 = rep.sectional.iter().sum();
        prop_assert!((rep.rho - 2.0 * ksum / n as f64).abs() < 1e-10);
        for i in 0..n {
            for j in i + 1..n {
                let k = sectional(&fd, sf, i, j).unwrap();
                prop_assert_eq!(rep.sectional_at(i, j), Some(k));
                prop_assert_eq!(sectional(&fd, sf, j, i).unwrap(), k);
            }
        }
        prop_assert!((rep.k_spread - (rep.k_max() - rep.k_min())).abs() < 1e-15);
        prop_assert!(rep.einstein_defect >= 0.0 && rep.k_spread >= 0.0);
    }
}

#[test]
fn constant_curvature_frame_is_einstein() {
    // T along e_n with lambda_i = mu, lambda_n chosen so that K_in = eps + mu^2
    let sf = SpaceForm::sphere(5).unwrap();
    let (mu, t): (f64, f64) = (-0.8, 0.6);
    let ln = (1.0 + mu * mu - (1.0 - t * t)) / mu;
    let fd = FrameData::new(0.0, &[(mu, 4)], ln, vec![0.0, 0.0, 0.0, 0.0, t]).unwrap();
    let rep = curvature_report(&fd, sf).unwrap();
    assert!(rep.einstein_defect < 1e-14, "{}", rep.einstein_defect);
    assert!(rep.k_spread < 1e-14);
    assert!((rep.rho - 4.0 * (1.0 + mu * mu)).abs() < 1e-13);
}

#[test]
fn errors_are_typed() {
    let sf = SpaceForm::sphere(4).unwrap();
    let fd = FrameData::slice(4, 0.0);
    assert!(matches!(
        sectional(&fd, sf, 2, 2),
        Err(GeomError::DegeneratePlane(2))
    ));
    assert!(matches!(
        ricci_closed_form(&fd, sf, 0, 4),
        Err(GeomError::Index { index: 4, n: 4 })
    ));
    let wrong = SpaceForm::sphere(5).unwrap();
    assert!(matches!(
        curvature_report(&fd, wrong),
        Err(GeomError::Shape { .. })
    ));
}
