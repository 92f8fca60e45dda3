//! Curvature toolkit for hypersurfaces of the product spaces `S^n x R` and
//! `H^n x R`.
//!
//! Hypersurfaces are built from a base isoparametric hypersurface `g` of the
//! space form `Q^n(eps)`, its parallel family `g_s`, and a height profile
//! `a(s)`:
//!
//! ```text
//! f(x, s) = g_s(x) + a(s) e_{n+2}
//! ```
//!
//! Everything downstream (shape operator, Gauss equation, Ricci tensor,
//! Einstein defect, proof-branch residuals) is evaluated pointwise in the
//! orthonormal principal frame of `f`.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ambient;
pub mod base_catalog;
pub mod classifier;
pub mod curvature;
pub mod error;
pub mod hypersurface;
pub mod suites;

pub use ambient::{ambient_inner, eps_trig, SpaceForm};
pub use base_catalog::{
    cartan_residuals, make_base, mean_curvature_of_parallel, parallel_curvature, BaseKind,
    IsoparametricBase, PrincipalCurvature,
};
pub use classifier::{
    all_equal_branch, construct_constant_curvature_rotation, count_distinct, lemma2_offdiag,
    slice_branch, terminal_obstruction, two_distinct_branch, verify_theorem, verify_theorem_frames,
    ProofCase, ProofCaseReport, RotationConstruction, TheoremSummary, Verdict,
};
pub use curvature::{
    curvature_report, gauss_component, ricci_by_contraction, ricci_closed_form, sectional,
    CurvatureReport,
};
pub use error::{GeomError, Result};
pub use hypersurface::{
    check_kn_ode, frame_data, t_norm_angle, AnalyticProfile, FrameData, Profile, ProfileRepr,
};

/// Comparison tolerance used wherever a call site does not supply its own.
pub const DEFAULT_TOL: f64 = 1e-9;
