use std::fmt;

use thiserror::Error;

/// Which frame vector could not be formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameVector {
    N,
    B,
    E,
}

impl fmt::Display for FrameVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FrameVector::N => "N",
            FrameVector::B => "B",
            FrameVector::E => "E",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid curve spec: {0}")]
    SpecInvalid(String),

    #[error("evaluation of order {order} at s = {s} leaves the curve domain")]
    DomainExceeded { s: f64, order: usize },

    #[error("curve is singular at s = {s} (vanishing velocity)")]
    CurveSingular { s: f64 },

    #[error("frame vector {which} is undefined at s = {s}")]
    FrameUndefined { which: FrameVector, s: f64 },

    #[error("curve is not unit speed (max |speed - 1| = {max_deviation:e})")]
    NotUnitSpeed { max_deviation: f64 },

    #[error("exclusion band around s = {c} removes the whole domain")]
    EmptyDomain { c: f64 },

    #[error("involute is singular at s = {s} (too close to c = {c})")]
    InvoluteSingular { s: f64, c: f64 },

    #[error("higher frame of the involute is indeterminate at s = {s} (radicand {radicand:e})")]
    HigherFrameIndeterminate { s: f64, radicand: f64 },

    #[error("curvature vanishes at s = {s}")]
    CurvatureZero { s: f64 },

    #[error("closed-form denominator vanishes ({value:e})")]
    DenominatorZero { value: f64 },

    #[error("recovered {which} is not spatial (scalar part {scalar:e})")]
    NotSpatial { which: &'static str, scalar: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
