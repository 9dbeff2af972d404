//! Collapsing the metric along a sub-bundle.
//!
//! Given an adapted orthonormal frame `{e_1..e_r, e_{r+1}..e_n}` with
//! `X = span{e_1..e_r}` and `Y = span{e_{r+1}..e_n}`, the metric
//! `g_X ⊕ g_Y / f²` has orthonormal frame `{e_i, f e_α}`. For constant `f`
//! its scalar curvature is a Laurent polynomial in `f` whose coefficients
//! are computed here from the structure functions of the original frame.

mod classify;
mod profile;
mod reduce;
mod rescale;
mod roots;
mod split;

pub use classify::{classify, Certificate, ClassificationReport, Witness, NONZERO_TOL, ZERO_TOL};
pub use profile::{
    collapse_profile, evaluate_profile, npb_from_jet, npb_indicator, profile_from_jet,
    restricted_scalars, restricted_scalars_from_jet, CollapseProfile,
};
pub use reduce::{specialized_profile, Reduction, HYPOTHESIS_TOL};
pub use rescale::{
    rescale_constant, rescale_constants, rescale_frame, transform_structure_functions,
    RescaleFactor,
};
pub use roots::{sign_thresholds, Sign, Thresholds, COEFFICIENT_FLOOR, IMAG_TOL};
pub use split::SplitSpec;
