//! Quaternionic Serret-Frenet apparatus for curves in R^4, involute/evolute
//! pairs and the spatial curves associated with them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod error;
pub mod export;
pub mod frenet;
pub mod involute;
pub mod quaternion;
pub mod spatial;
pub mod verify;

pub use curve::{build_curve, is_unit_speed, CurveDefinition, CurveSpec, Domain, Provenance};
pub use error::{Error, FrameVector, Result};
pub use quaternion::{conjugate, cross4, det4, hform, qmul, qnorm, Quaternion, Vec3};
pub use frenet::{
    frenet_apparatus, sample_apparatus, serret_frenet_residual, ApparatusSeries, FrenetFrame4, Sign, FRAME_ETA,
};
pub use involute::{
    evolute_apparatus_from_involute, involute_curve, predicted_involute_apparatus, resolve_evolute_sign,
    InvoluteParams, PredictedInvoluteApparatus, SignResolution,
};
pub use spatial::{associated_spatial_curve, spatial_frame, SpatialFrame};
pub use verify::{run_verify, Suite, VerifyOptions, VerifyReport};
