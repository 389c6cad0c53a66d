//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("gamma pole: {0} is a nonpositive integer")]
    GammaPole(Complex64),

    #[error("parameter pole in {context}: {value}")]
    ParameterPole { context: &'static str, value: Complex64 },

    #[error("unsupported branch: |arg| = {arg} exceeds {max}")]
    UnsupportedBranch { arg: f64, max: f64 },

    #[error("origin singularity: K at z = 0")]
    OriginSingularity,

    #[error("branch arg {arg} inconsistent with value {value}")]
    InvalidSectorArg { value: Complex64, arg: f64 },

    #[error("degenerate seed: sigma*s^2*t^sigma = {x} is at a vanishing denominator")]
    DegenerateSeed { x: Complex64 },

    #[error("singular state: {what}")]
    SingularState { what: &'static str },

    #[error("singularity encountered near t = {t}: {what}")]
    SingularityEncountered { t: f64, what: &'static str },

    #[error("tolerance failure at x = {x}: step error could not be controlled")]
    ToleranceFailure { x: f64 },

    #[error("branch ambiguity: {0}")]
    BranchAmbiguity(&'static str),

    #[error("lambda = {0} is a singular point of the system")]
    SingularPoint(Complex64),

    #[error("contour node {node} is within the exclusion disc of lambda = {near}")]
    SingularPointProximity { node: Complex64, near: Complex64 },

    #[error("radius {r} below the admissible minimum {r_min}")]
    RadiusTooSmall { r: f64, r_min: f64 },

    #[error("Stokes matrix structure violation: mismatch residual {residual}")]
    StructureViolation { residual: f64 },

    #[error("C coefficient vanishes on the evaluation set")]
    CZero,

    #[error("domain violation: {0}")]
    DomainViolation(&'static str),

    #[error("no solution in the strip 0 <= Re sigma < 1")]
    NoSolution,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
