use prodform_core::{
    eps_trig, frame_data, lemma2_offdiag, make_base, t_norm_angle, AnalyticProfile, BaseKind,
    GeomError, Profile, SpaceForm,
};
use proptest::prelude::*;

fn family_strategy() -> impl Strategy<Value = AnalyticProfile> {
    prop_oneof![
        (0.1f64..5.0, -1.0f64..1.0)
            .prop_map(|(alpha, beta)| AnalyticProfile::Linear { alpha, beta }),
        (-1.0f64..1.0, 1.0f64..3.0, 0.0f64..1.0)
            .prop_map(|(c0, c1, c2)| AnalyticProfile::Quadratic { c0, c1, c2 }),
        (0.1f64..2.0, 0.1f64..2.0, -1.0f64..1.0).prop_map(|(amplitude, rate, offset)| {
            AnalyticProfile::Exponential {
                amplitude,
                rate,
                offset,
            }
        }),
        (0.1f64..2.0, 0.1f64..2.0)
            .prop_map(|(amplitude, rate)| AnalyticProfile::Sinh { amplitude, rate }),
        (0.05f64..1.5).prop_map(|angle| AnalyticProfile::ConstantAngle { angle }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn angle_function_identities(family in family_strategy(), u in 0.0f64..1.0) {
        let p = Profile::analytic(family, (0.0, 1.0)).unwrap();
        let (t, nu) = t_norm_angle(&p, u).unwrap();
        prop_assert!((t * t + nu * nu - 1.0).abs() < 1e-14);
        prop_assert!(t > 0.0 && t < 1.0 && nu > 0.0);
        prop_assert!((t / nu - p.a1(u).unwrap()).abs() < 1e-12 * p.a1(u).unwrap().max(1.0));
    }

    #[test]
    fn derivatives_match_finite_differences(family in family_strategy(), u in 0.1f64..0.9) {
        let p = Profile::analytic(family, (0.0, 1.0)).unwrap();
        let h = 1e-4;
        let d1 = (p.a(u + h).unwrap() - p.a(u - h).unwrap()) / (2.0 * h);
        let d2 = (p.a1(u + h).unwrap() - p.a1(u - h).unwrap()) / (2.0 * h);
        prop_assert!((d1 - p.a1(u).unwrap()).abs() < 1e-6);
        prop_assert!((d2 - p.a2(u).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn translation_is_absorbed_by_the_amplitude(
        amplitude in 0.1f64..2.0, rate in 0.1f64..2.0, shift in -0.5f64..0.5, u in 0.0f64..0.5,
    ) {
        // a(s + shift) = A e^{k shift} e^{k s}
        let p = Profile::analytic(AnalyticProfile::Exponential { amplitude, rate, offset: 0.0 }, (-1.0, 1.0)).unwrap();
        let q = Profile::analytic(
            AnalyticProfile::Exponential { amplitude: amplitude * (rate * shift).exp(), rate, offset: 0.0 },
            (-1.0, 1.0),
        )
        .unwrap();
        let (a, b) = (p.eval(u + shift).unwrap(), q.eval(u).unwrap());
        prop_assert!((a.0 - b.0).abs() < 1e-12 * a.0.abs().max(1.0));
        prop_assert!((a.1 - b.1).abs() < 1e-12 * a.1.abs().max(1.0));
        prop_assert!((a.2 - b.2).abs() < 1e-12 * a.2.abs().max(1.0));
    }

    #[test]
    fn frame_curvatures_follow_the_parallel_family(
        radius in 0.3f64..1.2, s in -0.2f64..0.2, alpha in 0.2f64..3.0, sphere in prop::bool::ANY,
    ) {
        let sf = if sphere { SpaceForm::sphere(5) } else { SpaceForm::hyperbolic(5) }.unwrap();
        let base = make_base(sf, BaseKind::GeodesicSphere { radius }).unwrap();
        let p = Profile::analytic(AnalyticProfile::Linear { alpha, beta: 0.0 }, (-0.5, 0.5)).unwrap();
        let fd = frame_data(&base, &p, s).unwrap();
        // lambda^s = (eps S + lambda_g C) / (C - lambda_g S) with the catalog value cot/coth r
        let lg = if sphere { 1.0 / radius.tan() } else { 1.0 / radius.tanh() };
        let (c, sn) = eps_trig(sf, s);
        let lam_s = (sf.eps() * sn + lg * c) / (c - lg * sn);
        let t = alpha / alpha.hypot(1.0);
        prop_assert!((fd.lambdas()[0].value + t * lam_s).abs() < 1e-12 * lam_s.abs().max(1.0));
        prop_assert_eq!(fd.lambdas()[0].multiplicity, 4);
        prop_assert_eq!(fd.lambda_n(), 0.0);
        prop_assert_eq!(lemma2_offdiag(&fd, sf, 0.0), 0.0);
    }
}

#[test]
fn equivalent_families_give_identical_frames() {
    let sf = SpaceForm::hyperbolic(4).unwrap();
    let base = make_base(sf, BaseKind::Equidistant { distance: 0.7 }).unwrap();
    let angle: f64 = 0.9;
    let a = Profile::analytic(AnalyticProfile::ConstantAngle { angle }, (0.0, 1.0)).unwrap();
    let b = Profile::analytic(
        AnalyticProfile::Linear {
            alpha: angle.tan(),
            beta: 0.0,
        },
        (0.0, 1.0),
    )
    .unwrap();
    let c = Profile::analytic(
        AnalyticProfile::Quadratic {
            c0: 0.0,
            c1: angle.tan(),
            c2: 0.0,
        },
        (0.0, 1.0),
    )
    .unwrap();
    for s in [0.0, 0.3, 1.0] {
        let fa = frame_data(&base, &a, s).unwrap();
        assert_eq!(fa, frame_data(&base, &b, s).unwrap());
        assert_eq!(fa, frame_data(&base, &c, s).unwrap());
        assert!((fa.t_norm() - angle.sin()).abs() < 1e-15);
    }
}

#[test]
fn sampled_profile_tracks_the_analytic_one() {
    let exact = Profile::analytic(
        AnalyticProfile::Sinh {
            amplitude: 0.5,
            rate: 1.5,
        },
        (0.0, 1.0),
    )
    .unwrap();
    let s: Vec<f64> = (0..=200).map(|k| k as f64 / 200.0).collect();
    let a: Vec<f64> = s.iter().map(|&x| exact.a(x).unwrap()).collect();
    let sampled = Profile::sampled(s, a).unwrap();
    assert_eq!(sampled.domain(), (0.0, 1.0));
    for k in 1..20 {
        let u = 0.1 + 0.04 * k as f64;
        assert!((sampled.a(u).unwrap() - exact.a(u).unwrap()).abs() < 1e-8);
        assert!((sampled.a1(u).unwrap() - exact.a1(u).unwrap()).abs() < 1e-5);
        // central differences of the interpolant agree with its own derivative
        let h = 1e-5;
        let fd = (sampled.a(u + h).unwrap() - sampled.a(u - h).unwrap()) / (2.0 * h);
        assert!((fd - sampled.a1(u).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn csv_profiles() {
    let text = "s,a\n0,0\n0.25,0.3\n0.5,0.62\n0.75,0.95\n1,1.3\n";
    let p = Profile::from_csv_reader(text.as_bytes()).unwrap();
    assert_eq!(p.domain(), (0.0, 1.0));
    assert!((p.a(0.5).unwrap() - 0.62).abs() < 1e-15);

    let err = Profile::from_csv_reader("x,y\n0,0\n".as_bytes()).unwrap_err();
    assert!(err.to_string().contains("header"), "{err}");
    let err = Profile::from_csv_reader("s,a\n0,0\n0.5,abc\n".as_bytes()).unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
    // decreasing samples: a' < 0 somewhere
    let err = Profile::from_csv_reader("s,a\n0,0\n0.25,-0.3\n0.5,-0.6\n0.75,-0.9\n".as_bytes())
        .unwrap_err();
    assert!(matches!(err, GeomError::Invariant(_)), "{err}");
    // too few nodes for a cubic interpolant
    assert!(Profile::from_csv_reader("s,a\n0,0\n1,1\n".as_bytes()).is_err());
}

#[test]
fn focal_points_and_domain_errors() {
    let sf = SpaceForm::sphere(4).unwrap();
    let base = make_base(sf, BaseKind::GeodesicSphere { radius: 0.5 }).unwrap();
    let p = Profile::analytic(
        AnalyticProfile::Linear {
            alpha: 1.0,
            beta: 0.0,
        },
        (0.0, 1.0),
    )
    .unwrap();
    assert!(matches!(
        frame_data(&base, &p, 0.5),
        Err(GeomError::Focal { .. })
    ));
    assert!(matches!(
        frame_data(&base, &p, 1.5),
        Err(GeomError::Domain(_))
    ));
}
