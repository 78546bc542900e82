//! Numerical twistor geometry: null curves in complexified Minkowski space,
//! their twistor lifts, and the morphisms (self-dual and causal) induced by
//! projective endomorphisms.
//!
//! The crate is organized around exact substrates: curves are polynomial,
//! derivatives come from truncated Taylor jets rather than finite
//! differences, and every analytic identity the constructions rest on is
//! re-checked at runtime by seeded property suites (see [`harness`]).
//!
//! The runnable examples under `examples/` each exercise one capability end
//! to end and are the quickest way into the API; the `nullmorph` binary
//! exposes the same pipelines as a small scriptable CLI.

pub mod causal;
pub mod curve;
pub mod endo;
pub mod error;
pub mod harness;
pub mod io;
pub mod jet;
pub mod rng;
pub mod selfdual;
pub mod spinor;
mod suites;
pub mod twistor;

pub use causal::{
    beta_first_order_residual, extract_g_point, lift_g_point, nonlocality_demo,
    patch_coordinates, right_action, BP1Point, CausalMorphism, Patch, PlanePairLift,
};
pub use curve::{
    default_sample_points, make_tangent_family, random_null_curve, tangent_pair_at, DegreeBounds,
    FPoint, GPoint, NullCurve, SpinorPoly, TangentAnchor,
};
pub use endo::{
    check_base_point_free, random_map, Degree1Map, Degree2Map, InvariantCausalMap, ProjectiveMap,
};
pub use error::{Error, Result};
pub use harness::{run_all_suites, run_suite, suite_names, SuiteConfig, SuiteReport};
pub use jet::{eval_poly_jet, Jet, JetMat2, JetVec2};
pub use rng::SeededRng;
pub use selfdual::{
    mobius_closed_form, orthogonal_complement, quadratic_closed_form, ratio_closed_form,
    verify_locality, PsiPolicy, SelfDualMorphism,
};
pub use spinor::{
    minkowski_norm, null_factorize, projective_distance, C64, NullDirection, Priming,
    SpacetimePoint, Spinor, Variance,
};
pub use twistor::{
    dual_incidence, invert_dual_lift, invert_twistor_lift, recover_tangent_spinor, twistor_lift,
    DualTwistor, DualTwistorJet, Twistor, TwistorJet,
};
