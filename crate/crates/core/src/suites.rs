//! Property suites behind `prodform verify`.
//!
//! Each suite runs a fixed, seeded battery of checks and reports one line per
//! check with the measured value and the threshold it was held to.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};
use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::ambient::{eps_trig, SpaceForm};
use crate::base_catalog::{
    cartan_residuals, make_base, parallel_curvature, BaseKind, IsoparametricBase,
};
use crate::classifier::{
    construct_constant_curvature_rotation, terminal_obstruction, two_distinct_branch,
    verify_theorem, TheoremStatus, Verdict,
};
use crate::curvature::{
    curvature_report, gauss_component, ricci_by_contraction, ricci_closed_form,
};
use crate::error::{GeomError, Result};
use crate::hypersurface::{check_kn_ode, AnalyticProfile, FrameData, Profile, RotationProfile};

pub const DEFAULT_SEED: u64 = 0x5eed_2019;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Cartan,
    Lemma1,
    Theorem,
    N3,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Identities,
        Suite::Cartan,
        Suite::Lemma1,
        Suite::Theorem,
        Suite::N3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Cartan => "cartan",
            Suite::Lemma1 => "lemma1",
            Suite::Theorem => "theorem",
            Suite::N3 => "n3",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| GeomError::Domain(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Passes when `value < threshold`.
    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: value < threshold,
            value,
            threshold,
            note: None,
        }
    }

    /// Passes when `value >= threshold`.
    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            passed: value >= threshold,
            value,
            threshold,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let mut rng = StdRng::seed_from_u64(seed);
    let checks = match suite {
        Suite::Identities => identities(&mut rng)?,
        Suite::Cartan => cartan()?,
        Suite::Lemma1 => lemma1(&mut rng)?,
        Suite::Theorem => theorem(&mut rng)?,
        Suite::N3 => n3()?,
    };
    Ok(SuiteReport {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn both_signs(n: usize) -> [SpaceForm; 2] {
    [
        SpaceForm::sphere(n).expect("n >= 2"),
        SpaceForm::hyperbolic(n).expect("n >= 2"),
    ]
}

/// Random principal-frame data with `T` in a random direction.
pub fn random_frame(rng: &mut impl Rng, n: usize) -> FrameData {
    let lambdas: Vec<(f64, usize)> = (0..n - 1).map(|_| (rng.gen_range(-3.0..3.0), 1)).collect();
    let lambda_n = rng.gen_range(-3.0..3.0);
    let dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
    let len = rng.gen_range(0.0..0.99);
    let t: Vec<f64> = dir.iter().map(|x| x / norm * len).collect();
    FrameData::new(0.0, &lambdas, lambda_n, t).expect("|T| < 1 by construction")
}

/// Constant in the `O(h^2)` bound for the `lambda_n = d|T|/ds` residual.
pub const KN_ODE_CONSTANT: f64 = 10.0;
pub const KN_ODE_MIN_ORDER: f64 = 1.9;
pub const KN_ODE_STEP: f64 = 1e-2;

/// Random nonlinear profile and a point where the `h`-halving order is
/// observable: the third derivative of `|T|` is bounded away from zero.
pub fn random_kn_triple(rng: &mut impl Rng) -> (IsoparametricBase, Profile, f64) {
    loop {
        let sf = if rng.gen_bool(0.5) {
            SpaceForm::sphere(rng.gen_range(4..=8)).expect("n >= 4")
        } else {
            SpaceForm::hyperbolic(rng.gen_range(4..=8)).expect("n >= 4")
        };
        let base = match rng.gen_range(0..3) {
            0 => make_base(sf, BaseKind::TotallyGeodesic),
            1 => make_base(
                sf,
                BaseKind::GeodesicSphere {
                    radius: rng.gen_range(1.0..1.5),
                },
            ),
            _ if sf.is_sphere() => {
                let p = rng.gen_range(1..sf.n() - 1);
                make_base(
                    sf,
                    BaseKind::CliffordProduct {
                        angle: rng.gen_range(0.6..1.0),
                        p,
                        q: sf.n() - 1 - p,
                    },
                )
            }
            _ => make_base(sf, BaseKind::Horosphere),
        }
        .expect("catalog parameters in range");
        let family = match rng.gen_range(0..3) {
            0 => AnalyticProfile::Quadratic {
                c0: 0.0,
                c1: rng.gen_range(0.5..2.0),
                c2: rng.gen_range(0.2..1.5),
            },
            1 => AnalyticProfile::Exponential {
                amplitude: rng.gen_range(0.3..2.0),
                rate: rng.gen_range(0.5..2.0),
                offset: 0.0,
            },
            _ => AnalyticProfile::Sinh {
                amplitude: rng.gen_range(0.3..2.0),
                rate: rng.gen_range(0.5..2.0),
            },
        };
        let Ok(profile) = Profile::analytic(family, (0.0, 0.5)) else {
            continue;
        };
        let s = rng.gen_range(0.1..0.4);
        let third = third_derivative_of_t(&profile, s);
        if third.is_some_and(|v| v.abs() > 1e-2)
            && check_kn_ode(&base, &profile, s, KN_ODE_STEP).is_ok()
        {
            return (base, profile, s);
        }
    }
}

fn third_derivative_of_t(profile: &Profile, s: f64) -> Option<f64> {
    let h = 2e-2;
    let t = |x: f64| {
        let d = profile.a1(x).ok()?;
        Some(d / d.hypot(1.0))
    };
    Some(
        (t(s + 2.0 * h)? - 2.0 * t(s + h)? + 2.0 * t(s - h)? - t(s - 2.0 * h)?) / (2.0 * h.powi(3)),
    )
}

fn identities(rng: &mut StdRng) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let mut pyth = 0.0f64;
    for sf in both_signs(4) {
        for k in 0..=200 {
            let s = -3.0 + 0.03 * k as f64;
            let (c, sn) = eps_trig(sf, s);
            pyth = pyth.max((c * c + sf.eps() * sn * sn - 1.0).abs() / c.abs().max(1.0).powi(2));
        }
    }
    checks.push(Check::below("eps-trig C^2 + eps S^2 = 1", pyth, 1e-12));

    // slices: Ric = eps(n-1) I and K = eps
    let mut slice_dev = 0.0f64;
    for n in 4..=8 {
        for sf in both_signs(n) {
            let fd = FrameData::slice(n, 0.0);
            let eps = sf.eps();
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { eps * (n as f64 - 1.0) } else { 0.0 };
                    slice_dev = slice_dev.max((ricci_closed_form(&fd, sf, i, j)? - want).abs());
                    slice_dev = slice_dev.max((ricci_by_contraction(&fd, sf, i, j)? - want).abs());
                }
            }
            let rep = curvature_report(&fd, sf)?;
            for k in &rep.sectional {
                slice_dev = slice_dev.max((k - eps).abs());
            }
        }
    }
    checks.push(Check::below(
        "slice Ric = eps(n-1) I and K = eps",
        slice_dev,
        1e-12,
    ));

    // lambda_n = d|T|/ds at O(h^2)
    let mut worst_scaled = 0.0f64;
    let mut worst_order = f64::INFINITY;
    for _ in 0..100 {
        let (base, profile, s) = random_kn_triple(rng);
        let r1 = check_kn_ode(&base, &profile, s, KN_ODE_STEP)?;
        let r2 = check_kn_ode(&base, &profile, s, KN_ODE_STEP / 2.0)?;
        worst_scaled = worst_scaled.max(r1 / (KN_ODE_STEP * KN_ODE_STEP));
        worst_order = worst_order.min((r1 / r2).log2());
    }
    checks.push(
        Check::below(
            "lambda_n = d|T|/ds residual / h^2",
            worst_scaled,
            KN_ODE_CONSTANT,
        )
        .with_note("100 random (base, profile, s), h = 1e-2"),
    );
    checks.push(Check::at_least(
        "lambda_n = d|T|/ds observed order",
        worst_order,
        KN_ODE_MIN_ORDER,
    ));

    // |T|^2 formulas in the two-distinct branch
    let mut subst = 0.0f64;
    let mut min_gap = f64::INFINITY;
    for n in 4..=12 {
        for sf in both_signs(n) {
            let rho = sf.eps() * (n as f64 - 1.0) / 2.0;
            let rep = two_distinct_branch(sf, 1, n - 2, rho)?;
            for name in [
                "product-lambda1-lambda2",
                "product-diagonal",
                "t2-moving-path",
                "lambda-n-forced-zero",
                "einstein-static-path",
                "t2-static-path",
                "static-product",
                "terminal-product",
            ] {
                subst = subst.max(rep.residual(name).unwrap_or(f64::INFINITY));
            }
            min_gap = min_gap.min(rep.residual("t2-formula-gap").unwrap_or(0.0));
        }
    }
    checks.push(Check::below(
        "|T|^2 closed forms reproduced by substitution",
        subst,
        1e-12,
    ));
    checks.push(
        Check::at_least("|T|^2 moving vs static path gap (n > 3)", min_gap, 1e-12)
            .with_note("the two constancy formulas disagree unless n = 3"),
    );
    Ok(checks)
}

fn cartan() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut worst = 0.0f64;
    let mut count = 0;
    for angle in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
        for n in 3..=8 {
            for p in 1..n - 1 {
                let sf = SpaceForm::sphere(n)?;
                let base = make_base(
                    sf,
                    BaseKind::CliffordProduct {
                        angle,
                        p,
                        q: n - 1 - p,
                    },
                )?;
                for r in cartan_residuals(&base)? {
                    worst = worst.max(r.abs());
                }
                count += 1;
            }
        }
    }
    checks.push(
        Check::below("Cartan residuals, Clifford products", worst, 1e-9).with_note(format!(
            "{count} bases, angle in {{pi/6, pi/4, pi/3}}, n <= 8"
        )),
    );

    let mut single = Vec::new();
    for n in [4, 6] {
        let s = SpaceForm::sphere(n)?;
        let h = SpaceForm::hyperbolic(n)?;
        single.push(make_base(s, BaseKind::TotallyGeodesic)?);
        single.push(make_base(s, BaseKind::GeodesicSphere { radius: 0.7 })?);
        single.push(make_base(h, BaseKind::GeodesicSphere { radius: 0.7 })?);
        single.push(make_base(h, BaseKind::Horosphere)?);
        single.push(make_base(h, BaseKind::Equidistant { distance: 0.4 })?);
    }
    let nonempty = single
        .iter()
        .map(cartan_residuals)
        .collect::<Result<Vec<_>>>()?
        .iter()
        .filter(|r| !r.is_empty())
        .count();
    checks.push(Check::below(
        "Cartan vacuous for d = 1",
        nonempty as f64,
        0.5,
    ));

    // catalog families are closed under the parallel flow
    let mut flow = 0.0f64;
    let r: f64 = 1.1;
    for s in [-0.4, -0.1, 0.2, 0.5] {
        let hyp = SpaceForm::hyperbolic(4)?;
        let sph = SpaceForm::sphere(4)?;
        flow = flow.max((parallel_curvature(1.0, hyp, s)? - 1.0).abs());
        flow = flow.max((parallel_curvature(r.tanh(), hyp, s)? - (r - s).tanh()).abs());
        flow = flow.max((parallel_curvature(1.0 / r.tanh(), hyp, s)? - 1.0 / (r - s).tanh()).abs());
        flow = flow.max((parallel_curvature(1.0 / r.tan(), sph, s)? - 1.0 / (r - s).tan()).abs());
        flow =
            flow.max((parallel_curvature(-(r / 2.0).tan(), sph, s)? + (r / 2.0 - s).tan()).abs());
    }
    checks.push(Check::below(
        "catalog families closed under parallel flow",
        flow,
        1e-9,
    ));
    Ok(checks)
}

pub const LEMMA1_SAMPLES: usize = 1000;

fn lemma1(rng: &mut StdRng) -> Result<Vec<Check>> {
    let mut dev = 0.0f64;
    let mut sym = 0.0f64;
    for k in 0..LEMMA1_SAMPLES {
        let n = 4 + k % 5;
        let sf = both_signs(n)[k % 2];
        let fd = random_frame(rng, n);
        for i in 0..n {
            for j in 0..n {
                dev = dev.max(
                    (ricci_closed_form(&fd, sf, i, j)? - ricci_by_contraction(&fd, sf, i, j)?)
                        .abs(),
                );
            }
        }
        if k % 10 == 0 {
            sym = sym.max(symmetry_defect(&fd, sf)?);
        }
    }
    Ok(vec![
        Check::below("Ricci closed form vs contraction", dev, 1e-10).with_note(format!(
            "{LEMMA1_SAMPLES} random frames, n in 4..=8, both signs"
        )),
        Check::below("curvature tensor symmetries and Bianchi", sym, 1e-12),
    ])
}

/// Largest violation of the algebraic curvature-tensor identities.
pub fn symmetry_defect(fd: &FrameData, sf: SpaceForm) -> Result<f64> {
    let n = fd.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let r = gauss_component(fd, sf, i, j, k, l)?;
                    worst = worst
                        .max((r + gauss_component(fd, sf, j, i, k, l)?).abs())
                        .max((r + gauss_component(fd, sf, i, j, l, k)?).abs())
                        .max((r - gauss_component(fd, sf, k, l, i, j)?).abs())
                        .max(
                            (r + gauss_component(fd, sf, j, k, i, l)?
                                + gauss_component(fd, sf, k, i, j, l)?)
                            .abs(),
                        );
                }
            }
        }
    }
    Ok(worst)
}

/// `(eps, n, c, r, grid start, grid end)` for the constant-curvature rotation
/// checks; grids have 21 points.
pub const ROTATION_CASES: [(i32, usize, f64, f64, f64, f64); 4] = [
    (1, 4, 2.0, FRAC_PI_6, -0.2, 0.4),
    (1, 5, 1.5, FRAC_PI_4, -0.1, 0.6),
    (-1, 4, 0.0, 1.0, 0.0, 0.8),
    (-1, 6, -0.5, 1.0, 0.0, 0.8),
];

pub fn uniform_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    // lerp form: both endpoints are hit exactly
    (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            start * (1.0 - t) + stop * t
        })
        .collect()
}

/// One configuration of the Einstein sweep.
#[derive(Debug, Clone)]
pub struct SweepCase {
    pub label: String,
    pub base: IsoparametricBase,
    pub profile: Profile,
    pub grid: Vec<f64>,
}

pub const SWEEP_SIZE: usize = 200;
pub const SWEEP_TOL: f64 = 1e-8;

/// Seeded mix of generic `(base, profile)` pairs and constant-curvature
/// rotation profiles (every tenth case).
pub fn sweep_cases(rng: &mut impl Rng, count: usize) -> Vec<SweepCase> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let case = if out.len() % 10 == 9 {
            rotation_case(rng)
        } else {
            generic_case(rng)
        };
        if let Some(case) = case {
            let grid_ok = case
                .grid
                .iter()
                .all(|&s| crate::hypersurface::frame_data(&case.base, &case.profile, s).is_ok());
            if grid_ok {
                out.push(case);
            }
        }
    }
    out
}

fn random_space_form(rng: &mut impl Rng) -> SpaceForm {
    let n = rng.gen_range(4..=8);
    if rng.gen_bool(0.5) {
        SpaceForm::sphere(n).expect("n >= 4")
    } else {
        SpaceForm::hyperbolic(n).expect("n >= 4")
    }
}

fn generic_case(rng: &mut impl Rng) -> Option<SweepCase> {
    let sf = random_space_form(rng);
    let kind = match (rng.gen_range(0..3), sf.is_sphere()) {
        (0, _) => BaseKind::TotallyGeodesic,
        (1, _) => BaseKind::GeodesicSphere {
            radius: rng.gen_range(0.4..2.0),
        },
        (_, true) => {
            let p = rng.gen_range(1..sf.n() - 1);
            BaseKind::CliffordProduct {
                angle: rng.gen_range(0.2..1.3),
                p,
                q: sf.n() - 1 - p,
            }
        }
        (_, false) if rng.gen_bool(0.5) => BaseKind::Horosphere,
        (_, false) => BaseKind::Equidistant {
            distance: rng.gen_range(0.2..2.0),
        },
    };
    let base = make_base(sf, kind).ok()?;
    let start = rng.gen_range(-0.3..0.1);
    let stop = start + rng.gen_range(0.1..0.4);
    let family = match rng.gen_range(0..5) {
        0 => AnalyticProfile::Linear {
            alpha: rng.gen_range(0.2..3.0),
            beta: rng.gen_range(-1.0..1.0),
        },
        1 => AnalyticProfile::Quadratic {
            c0: 0.0,
            c1: rng.gen_range(1.0..3.0),
            c2: rng.gen_range(-1.0..1.0),
        },
        2 => AnalyticProfile::Exponential {
            amplitude: rng.gen_range(0.2..2.0),
            rate: rng.gen_range(0.2..2.0),
            offset: 0.0,
        },
        3 => AnalyticProfile::Sinh {
            amplitude: rng.gen_range(0.2..2.0),
            rate: rng.gen_range(0.2..2.0),
        },
        _ => AnalyticProfile::ConstantAngle {
            angle: rng.gen_range(0.1..1.4),
        },
    };
    let profile = Profile::analytic(family, (start, stop)).ok()?;
    Some(SweepCase {
        label: format!(
            "generic eps={} n={} {:?} {:?}",
            sf.epsilon(),
            sf.n(),
            kind,
            family
        ),
        base,
        profile,
        grid: uniform_grid(start, stop, 21),
    })
}

fn rotation_case(rng: &mut impl Rng) -> Option<SweepCase> {
    let sf = random_space_form(rng);
    let eps = sf.eps();
    let c = if sf.is_sphere() {
        rng.gen_range(1.2..3.0)
    } else {
        rng.gen_range(-0.9..1.0)
    };
    let slope = (c - eps).sqrt();
    let radius = rng.gen_range(0.5..1.2);
    // |T| = slope * tan(r - s) on the sphere, slope * tanh(r - s) on H^n
    let limit = if sf.is_sphere() {
        (1.0 / slope).atan()
    } else if slope > 1.0 {
        (1.0 / slope).atanh()
    } else {
        2.0
    };
    let (u_lo, u_hi) = (0.15 * limit, 0.85 * limit);
    let (start, stop) = (radius - u_hi, radius - u_lo);
    let base = make_base(sf, BaseKind::GeodesicSphere { radius }).ok()?;
    let rot = RotationProfile {
        sf,
        slope,
        base_curvature: base.curvatures()[0].value,
        origin: start,
    };
    let profile = Profile::analytic(AnalyticProfile::Rotation(rot), (start, stop)).ok()?;
    Some(SweepCase {
        label: format!(
            "rotation eps={} n={} c={c:.4} r={radius:.4}",
            sf.epsilon(),
            sf.n()
        ),
        base,
        profile,
        grid: uniform_grid(start, stop, 21),
    })
}

fn theorem(rng: &mut StdRng) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (eps, n, c, r, a, b) in ROTATION_CASES {
        let sf = SpaceForm::new(eps, n)?;
        let out = construct_constant_curvature_rotation(sf, c, r, &uniform_grid(a, b, 21), 1e-8)?;
        let s = &out.summary;
        let worst = s
            .max_einstein_defect
            .max(s.max_k_spread)
            .max(s.max_rho_error);
        checks.push(Check::below(
            format!("rotation eps={eps} n={n} c={c}: defect, spread, rho error"),
            worst,
            1e-8,
        ));
    }

    let cases = sweep_cases(rng, SWEEP_SIZE);
    let mut einstein = 0;
    let mut violations = 0;
    let mut worst_spread = 0.0f64;
    for case in &cases {
        let sum = verify_theorem(&case.base, &case.profile, &case.grid, SWEEP_TOL)?;
        match sum.status {
            TheoremStatus::ConstantCurvature => {
                einstein += 1;
                worst_spread = worst_spread.max(sum.max_k_spread);
            }
            TheoremStatus::Violation => violations += 1,
            TheoremStatus::NotEinstein => {}
        }
    }
    checks.push(
        Check::below("Einstein => constant K: violations", violations as f64, 0.5).with_note(
            format!(
                "{} configurations, {einstein} Einstein, {} reported not Einstein",
                cases.len(),
                cases.len() - einstein - violations
            ),
        ),
    );
    checks.push(Check::below(
        "Einstein configurations: max k_spread",
        worst_spread,
        10.0 * SWEEP_TOL,
    ));
    checks.push(Check::at_least(
        "Einstein configurations present",
        einstein as f64,
        1.0,
    ));
    Ok(checks)
}

fn n3() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut mismatches = 0usize;
    let mut total = 0usize;
    for n in 4..=64usize {
        for sf in both_signs(n) {
            let rho = sf.eps() * (n as f64 - 1.0) / 2.0;
            for p in 1..n - 1 {
                let rep = two_distinct_branch(sf, p, n - 1 - p, rho)?;
                total += 1;
                if rep.verdict
                    != (Verdict::Contradiction {
                        n3_obstruction: n as i64 - 3,
                    })
                {
                    mismatches += 1;
                }
            }
        }
    }
    checks.push(
        Check::below(
            "two-distinct branch: contradiction with obstruction n - 3",
            mismatches as f64,
            0.5,
        )
        .with_note(format!("{total} (n, p, q, eps) cases, n in 4..=64")),
    );
    for n in 3..=16usize {
        let (plus, minus) = (terminal_obstruction(n, 1), terminal_obstruction(n, -1));
        let obs = plus;
        let check = Check {
            name: format!("obstruction n = {n}"),
            passed: plus == n as i64 - 3 && minus == plus,
            value: obs as f64,
            threshold: (n - 3) as f64,
            note: (n == 3).then(|| "vanishes: n = 3 is the only escape".to_string()),
        };
        checks.push(check);
    }
    Ok(checks)
}
