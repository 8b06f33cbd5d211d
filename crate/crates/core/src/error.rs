use thiserror::Error;

use crate::problem::LayerViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("p-value vector is empty")]
    EmptyPValues,

    #[error("p-value at index {index} is {value}, outside [0, 1]")]
    InvalidPValue { index: usize, value: f64 },

    #[error("invalid partition: {}", format_violations(.0))]
    InvalidLayer(Vec<LayerViolation>),

    #[error("layer {layer} covers {found} hypotheses, expected {expected}")]
    LayerSizeMismatch {
        layer: usize,
        expected: usize,
        found: usize,
    },

    #[error("problem needs at least one layer")]
    NoLayers,

    #[error("{layers} layers but {alphas} alpha levels")]
    AlphaCountMismatch { layers: usize, alphas: usize },

    #[error("alpha for layer {layer} is {value}; levels must be finite and nonnegative")]
    InvalidAlpha { layer: usize, value: f64 },

    #[error("threshold vector has {found} entries, expected {expected}")]
    ThresholdCountMismatch { expected: usize, found: usize },

    #[error("hypothesis index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("grid has {size} points, above the enumeration limit {limit}")]
    EnumerationTooLarge { size: u128, limit: u128 },

    #[error("unknown method '{0}'")]
    UnknownMethod(String),

    #[error("coordinatewise maximum of the feasible grid is not itself feasible")]
    CornerNotFeasible,
}

fn format_violations(violations: &[LayerViolation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
